use addlab_core::channel::{sample_channel, RandomUnitaryChannel, DEFAULT_ENTRY_CAP};
use addlab_core::moe::{
    additivity_gap_report, hp_bound, lemma1_bound, minimize_output_entropy, product_entangled_entropy, MoeOptions,
};
use addlab_core::rng::{sample_blocks, RngStream};
use addlab_core::Complex64;
use clap::{Args, Subcommand};
use serde::Serialize;

use super::{check_count, check_dimensions, CommandError, Outcome};

/// Stream carrying the sampled channel; optimizer restarts use the next one.
const CHANNEL_STREAM: u64 = 0;
const OPTIMIZER_STREAM: u64 = 1;
/// Slack on the entropy bounds for round-off.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Subcommand)]
pub enum ChannelCommand {
    /// Sample a channel from the weighted product Haar measure.
    Sample(DimArgs),
    /// Upper-bound the minimum output entropy by multi-start descent.
    Minentropy(MinEntropyArgs),
    /// Check the entangled-input product entropy bound on random channels.
    Lemma1(Lemma1Args),
    /// Compare 2 S_min with the entangled-input product entropy.
    Gap(MinEntropyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DimArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct MinEntropyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct Lemma1Args {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

fn complex_rows(m: &addlab_core::linalg::CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Serialize)]
struct SamplePayload {
    d: usize,
    n: usize,
    weights: Vec<f64>,
    /// Row-major, each entry `[re, im]`.
    unitaries: Vec<Vec<Vec<Complex64>>>,
    isometry_defect: f64,
}

#[derive(Serialize)]
struct Lemma1Trial {
    product_entropy: f64,
    hp_bound: f64,
    purity: f64,
}

#[derive(Serialize)]
struct Lemma1Payload {
    d: usize,
    n: usize,
    trials: usize,
    lemma1_bound: f64,
    max_product_entropy: f64,
    max_excess_over_lemma1: f64,
    max_excess_over_hp: f64,
    all_within_bounds: bool,
    per_trial: Vec<Lemma1Trial>,
}

fn sampled_channel(d: usize, n: usize, seed: u64) -> Result<RandomUnitaryChannel, CommandError> {
    check_dimensions(d, n)?;
    Ok(sample_channel(d, n, &mut RngStream::new(seed, CHANNEL_STREAM))?)
}

fn options(args: &MinEntropyArgs, seed: u64) -> Result<MoeOptions, CommandError> {
    if args.restarts == 0 {
        return Err(CommandError::Usage("restarts must be at least 1".into()));
    }
    Ok(MoeOptions {
        restarts: args.restarts,
        tol: args.tol,
        max_iter: args.max_iter,
        seed,
        stream_id: OPTIMIZER_STREAM,
    })
}

pub fn run(command: &ChannelCommand, seed: u64) -> Result<Outcome, CommandError> {
    match command {
        ChannelCommand::Sample(args) => {
            let ch = sampled_channel(args.d, args.n, seed)?;
            let payload = SamplePayload {
                d: ch.d(),
                n: ch.n(),
                weights: ch.weights().weights().to_vec(),
                unitaries: ch.unitaries().iter().map(|u| complex_rows(u.matrix())).collect(),
                isometry_defect: ch.stinespring_isometry().isometry_defect(),
            };
            Ok(Outcome::new("channel sample", args, &payload))
        }
        ChannelCommand::Minentropy(args) => {
            let ch = sampled_channel(args.d, args.n, seed)?;
            let r = minimize_output_entropy(&ch, &options(args, seed)?)?;
            let value = r.entropy_upper_bound.value();
            let bound = (args.d as f64).ln() + BOUND_SLACK;
            Ok(Outcome::new("channel minentropy", args, &r).check(value <= bound, "entropy estimate exceeds ln d"))
        }
        ChannelCommand::Lemma1(args) => {
            check_dimensions(args.d, args.n)?;
            check_count(args.trials)?;
            let root = RngStream::new(seed, CHANNEL_STREAM);
            let (d, n) = (args.d, args.n);
            let per_trial: Vec<Lemma1Trial> = sample_blocks(args.trials, &root, |s| -> addlab_core::Result<_> {
                let ch = sample_channel(d, n, s)?;
                Ok(Lemma1Trial {
                    product_entropy: product_entangled_entropy(&ch, DEFAULT_ENTRY_CAP)?.value(),
                    hp_bound: hp_bound(ch.weights()),
                    purity: ch.weights().purity(),
                })
            })
            .into_iter()
            .collect::<addlab_core::Result<_>>()?;
            let bound = lemma1_bound(d);
            let max_product_entropy = per_trial.iter().map(|t| t.product_entropy).fold(f64::NEG_INFINITY, f64::max);
            let max_excess_over_hp = per_trial
                .iter()
                .map(|t| t.product_entropy - t.hp_bound)
                .fold(f64::NEG_INFINITY, f64::max);
            let max_excess_over_lemma1 = max_product_entropy - bound;
            let ok = max_excess_over_lemma1 <= BOUND_SLACK && max_excess_over_hp <= BOUND_SLACK;
            let payload = Lemma1Payload {
                d,
                n,
                trials: args.trials,
                lemma1_bound: bound,
                max_product_entropy,
                max_excess_over_lemma1,
                max_excess_over_hp,
                all_within_bounds: ok,
                per_trial,
            };
            Ok(Outcome::new("channel lemma1", args, &payload).check(ok, "product entropy above its bound"))
        }
        ChannelCommand::Gap(args) => {
            let ch = sampled_channel(args.d, args.n, seed)?;
            let r = additivity_gap_report(&ch, &options(args, seed)?, DEFAULT_ENTRY_CAP)?;
            let ok = r.product_entangled_entropy <= r.lemma1_bound + BOUND_SLACK;
            Ok(Outcome::new("channel gap", args, &r).check(ok, "product entropy above the lemma bound"))
        }
    }
}
