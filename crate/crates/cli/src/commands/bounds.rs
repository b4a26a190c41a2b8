use addlab_core::bounds::{certificate_evaluate, delta_s_max_bound, dmin_search, minimize_h_min};
use clap::{Args, Subcommand};
use serde::Serialize;

use super::{CommandError, Outcome};

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Minimize h_min(γ) over γ.
    Hmin(GridArgs),
    /// Smallest dimension satisfying the counterexample inequality.
    Dmin(GridArgs),
    /// Largest entropy-violation estimate 1/d.
    Deltasmax,
    /// Evaluate the existence certificate at one configuration.
    Certificate(CertificateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    /// γ grid step.
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CertificateArgs {
    /// Input dimension; real-valued so huge values such as 7.8125e32 are accepted.
    #[arg(long)]
    n: f64,
    #[arg(long)]
    d: usize,
    /// Entropy deficit parameter (default: ln(d)/2).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 0.762)]
    gamma: f64,
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    #[arg(long, default_value_t = 6.0)]
    t: f64,
}

#[derive(Serialize)]
struct NoParameters {}

pub fn run(command: &BoundsCommand) -> Result<Outcome, CommandError> {
    match command {
        BoundsCommand::Hmin(args) => {
            let r = minimize_h_min(args.resolution)?;
            Ok(Outcome::new("bounds hmin", args, &r))
        }
        BoundsCommand::Dmin(args) => {
            let r = dmin_search(args.resolution)?;
            Ok(Outcome::new("bounds dmin", args, &r))
        }
        BoundsCommand::Deltasmax => {
            let r = delta_s_max_bound()?;
            Ok(Outcome::new("bounds deltasmax", &NoParameters {}, &r))
        }
        BoundsCommand::Certificate(args) => {
            if args.d == 0 || args.n.is_nan() || args.n < 1.0 {
                return Err(CommandError::Usage(format!("need d >= 1 and n >= 1, got d = {}, n = {}", args.d, args.n)));
            }
            let h = args.h.unwrap_or((args.d as f64).ln() / 2.0);
            let r = certificate_evaluate(args.n, args.d, h, args.gamma, args.b, args.t);
            Ok(Outcome::new("bounds certificate", args, &r))
        }
    }
}
