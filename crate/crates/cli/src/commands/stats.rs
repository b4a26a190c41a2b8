use addlab_core::channel::{sample_channel, sample_unit_vector};
use addlab_core::entropy::{BallSpec, TubeSpec};
use addlab_core::rng::{sample_blocks, RngStream};
use addlab_core::stats::export::{histogram, write_histogram_csv, write_spectra_csv, HistogramBin};
use addlab_core::stats::{
    ks, lemma34_equivalence_test, mu2_max_eigenvalue_cdf_sorted, overlap_decompose, overlap_tail, sample_spectrum_mc,
    tube_hit_estimate, typicality_estimate,
};
use clap::{Args, Subcommand};
use serde::Serialize;

use super::{check_count, check_dimensions, CommandError, Outcome};

/// Stream layout: fixed objects (channel, reference vector) on stream 0,
/// Monte Carlo draws on stream 1.
const FIXED_STREAM: u64 = 0;
const DRAW_STREAM: u64 = 1;

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Eigenvalue spectra of induced states `G(z)`.
    Eigdist(EigdistArgs),
    /// Overlap of uniform vectors with a fixed vector.
    Overlap(OverlapArgs),
    /// Environment spectra of random channels against `G(z)` spectra.
    Lemma34(CountArgs),
    /// Fraction of inputs mapped into the ball around I/d.
    Typicality(TypicalityArgs),
    /// Fraction of inputs mapped into the tube around a reference output.
    Tubehit(TubeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EigdistArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    /// Histogram bins for the largest eigenvalue.
    #[arg(long, default_value_t = 50)]
    bins: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OverlapArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    #[arg(long, default_value_t = 50)]
    bins: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20_000)]
    count: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TypicalityArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TubeArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 6.0)]
    t: f64,
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

#[derive(Serialize)]
struct CoordinateSummary {
    mean: f64,
    std_dev: f64,
}

#[derive(Serialize)]
struct EigdistPayload {
    d: usize,
    n: usize,
    count: usize,
    coordinates: Vec<CoordinateSummary>,
    /// KS distance of the largest eigenvalue against the exact law; `d = 2` only.
    ks_vs_analytic: Option<f64>,
    largest_eigenvalue_histogram: Vec<HistogramBin>,
}

#[derive(Serialize)]
struct TailPoint {
    t: f64,
    empirical: f64,
    stderr: f64,
    exact: f64,
}

#[derive(Serialize)]
struct OverlapPayload {
    n: usize,
    count: usize,
    /// KS distance of `|x|²` against `1 − (1 − t)^{n−1}`.
    ks_squared_overlap: f64,
    tails: Vec<TailPoint>,
    squared_overlap_histogram: Vec<HistogramBin>,
}

fn summarize(values: &[f64]) -> CoordinateSummary {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    CoordinateSummary {
        mean,
        std_dev: var.sqrt(),
    }
}

fn csv_string<F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>>(write: F) -> String {
    let mut buf = Vec::new();
    write(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn run(command: &StatsCommand, seed: u64) -> Result<Outcome, CommandError> {
    match command {
        StatsCommand::Eigdist(args) => {
            check_dimensions(args.d, args.n)?;
            check_count(args.count)?;
            if args.bins == 0 {
                return Err(CommandError::Usage("bins must be positive".into()));
            }
            let samples = sample_spectrum_mc(args.d, args.n, args.count, &RngStream::new(seed, DRAW_STREAM))?;
            let coordinates = (0..args.d)
                .map(|k| summarize(&samples.iter().map(|s| s.values()[k]).collect::<Vec<_>>()))
                .collect();
            let mut largest: Vec<f64> = samples.iter().map(|s| s.values()[0]).collect();
            largest.sort_by(f64::total_cmp);
            let ks_vs_analytic = if args.d == 2 && args.n >= 2 {
                let cdf = mu2_max_eigenvalue_cdf_sorted(args.n, &largest)?;
                Some(ks::one_sample_sorted(&largest, &cdf))
            } else {
                None
            };
            let lo = 1.0 / args.d as f64;
            let payload = EigdistPayload {
                d: args.d,
                n: args.n,
                count: args.count,
                coordinates,
                ks_vs_analytic,
                largest_eigenvalue_histogram: histogram(&largest, args.bins, lo, 1.0)
                    .or_else(|_| histogram(&largest, args.bins, 0.0, 1.0))?,
            };
            let csv = csv_string(|w| write_spectra_csv(w, &samples));
            Ok(Outcome::new("stats eigdist", args, &payload).with_csv(csv))
        }
        StatsCommand::Overlap(args) => {
            check_dimensions(1, args.n)?;
            check_count(args.count)?;
            if args.n < 2 || args.bins == 0 {
                return Err(CommandError::Usage("overlap needs n >= 2 and bins > 0".into()));
            }
            let psi = sample_unit_vector(args.n, &mut RngStream::new(seed, FIXED_STREAM))?;
            let overlaps: Vec<f64> = sample_blocks(args.count, &RngStream::new(seed, DRAW_STREAM), |s| {
                let theta = sample_unit_vector(args.n, s)?;
                Ok(overlap_decompose(&theta, &psi)?.x.norm())
            })
            .into_iter()
            .collect::<addlab_core::Result<_>>()?;
            let squared: Vec<f64> = overlaps.iter().map(|x| x * x).collect();
            let power = (args.n - 1) as i32;
            let ks_squared_overlap = ks::one_sample(&squared, |t| 1.0 - (1.0 - t.clamp(0.0, 1.0)).powi(power));
            let m = args.count as f64;
            let tails = [0.1, 0.3, 0.5]
                .iter()
                .map(|&t| {
                    let empirical = overlaps.iter().filter(|&&x| x > t).count() as f64 / m;
                    Ok(TailPoint {
                        t,
                        empirical,
                        stderr: (empirical * (1.0 - empirical) / m).sqrt(),
                        exact: overlap_tail(args.n, t)?,
                    })
                })
                .collect::<addlab_core::Result<_>>()?;
            let bins = histogram(&squared, args.bins, 0.0, 1.0)?;
            let csv = csv_string(|w| write_histogram_csv(w, &bins));
            let payload = OverlapPayload {
                n: args.n,
                count: args.count,
                ks_squared_overlap,
                tails,
                squared_overlap_histogram: bins,
            };
            Ok(Outcome::new("stats overlap", args, &payload).with_csv(csv))
        }
        StatsCommand::Lemma34(args) => {
            check_dimensions(args.d, args.n)?;
            check_count(args.count)?;
            let r = lemma34_equivalence_test(args.d, args.n, args.count, &RngStream::new(seed, DRAW_STREAM))?;
            let passes = r.passes;
            Ok(Outcome::new("stats lemma34", args, &r).check(passes, "KS statistic above the null threshold"))
        }
        StatsCommand::Typicality(args) => {
            check_dimensions(args.d, args.n)?;
            check_count(args.count)?;
            let ch = sample_channel(args.d, args.n, &mut RngStream::new(seed, FIXED_STREAM))?;
            let ball = BallSpec::new(args.b, args.n as f64, args.d)?;
            let r = typicality_estimate(&ch, &ball, args.count, &RngStream::new(seed, DRAW_STREAM))?;
            Ok(Outcome::new("stats typicality", args, &r))
        }
        StatsCommand::Tubehit(args) => {
            check_dimensions(args.d, args.n)?;
            check_count(args.count)?;
            let mut fixed = RngStream::new(seed, FIXED_STREAM);
            let ch = sample_channel(args.d, args.n, &mut fixed)?;
            let psi = sample_unit_vector(args.n, &mut fixed)?;
            let tube = TubeSpec::new(args.gamma, args.t, args.n as f64, args.d)?;
            let ball = BallSpec::new(args.b, args.n as f64, args.d)?;
            let r = tube_hit_estimate(&ch, &psi, &tube, &ball, args.count, &RngStream::new(seed, DRAW_STREAM))?;
            let ok = r.floor_respected != Some(false);
            Ok(Outcome::new("stats tubehit", args, &r).check(ok, "hit fraction below the analytic floor"))
        }
    }
}
