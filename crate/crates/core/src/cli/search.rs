use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde_json::json;

use super::file::{ConstellationFile, Kind};
use super::{tolerance, Failure, Report};
use crate::sic::{search_fiducial, SearchConfig};

#[derive(Args, Debug)]
pub(super) struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Simplex iterations per local run.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Success threshold on the largest overlap error.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    pub(super) json: bool,
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!("[{}]", items.join(", "))
}

/// The report is a function of the arguments only; wall time goes to `err`.
pub(super) fn run(args: &SearchArgs, err: &mut dyn Write) -> Result<Report, Failure> {
    let tol = tolerance(args.eps, None)?;
    let mut config = SearchConfig::new(args.dim, args.seed);
    config.restarts = args.restarts;
    config.tolerance = tol;
    if let Some(n) = args.max_iter {
        config.max_iterations = n;
    }
    let start = Instant::now();
    let r = search_fiducial(&config)?;
    let _ = writeln!(err, "wall time: {:.3} s", start.elapsed().as_secs_f64());

    let p = &r.params;
    let file = ConstellationFile::new(Kind::Fiducial, args.dim, tol, vec![vec![r.fiducial.clone()]])
        .with_meta("construction", "search")
        .with_meta("seed", args.seed)
        .with_meta("restarts", args.restarts)
        .with_meta("max_iterations", config.max_iterations)
        .with_meta("residual", format!("{:e}", r.residual))
        .with_meta("best_restart", r.best_restart)
        .with_meta("spectral_phases", fmt_list(&p.spectral_phases))
        .with_meta("amplitude_phases", fmt_list(&p.amplitude_phases))
        .with_meta("middle_flip", p.middle_flip);
    file.write(&args.output)?;

    let mut text = String::new();
    let _ = writeln!(text, "dim: {}\nseed: {}", args.dim, args.seed);
    let _ = writeln!(text, "restarts run: {} of {}", r.restarts_run, args.restarts);
    let _ = writeln!(text, "best restart: {}", r.best_restart);
    let _ = writeln!(text, "residual: {:e}\ncost: {:e}", r.residual, r.cost);
    let _ = writeln!(text, "converged: {}", r.converged);
    let _ = writeln!(text, "spectral phases: {}", fmt_list(&p.spectral_phases));
    let _ = writeln!(text, "amplitude phases: {}", fmt_list(&p.amplitude_phases));
    if args.dim % 2 == 0 {
        let _ = writeln!(text, "middle phase flipped: {}", p.middle_flip);
    }
    let _ = writeln!(text, "output: {}", args.output.display());
    Ok(Report {
        // non-convergence is reported, not treated as an error
        pass: true,
        value: json!({
            "dim": args.dim,
            "seed": args.seed,
            "restarts": args.restarts,
            "restarts_run": r.restarts_run,
            "best_restart": r.best_restart,
            "residual": r.residual,
            "cost": r.cost,
            "converged": r.converged,
            "spectral_phases": p.spectral_phases,
            "amplitude_phases": p.amplitude_phases,
            "middle_flip": p.middle_flip,
            "output": args.output.display().to_string(),
        }),
        text,
    })
}
