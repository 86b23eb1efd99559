//! Multi-start simplex search over the reduced fiducial coordinates.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{displacement_overlaps, full_alphas_for, probabilities_unchecked, state_from_probabilities, FiducialParams};
use crate::error::{MufError, Result};
use crate::linalg::{check_dim, ComplexVector, Tolerance};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Restarts are evaluated in fixed-size batches so the early exit does not
/// depend on the thread count.
const BATCH: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Simplex iterations per local run.
    pub max_iterations: usize,
    /// Weight of the squared negative part of the reconstructed probabilities.
    pub penalty: f64,
    /// Holds `θ_1..θ_{d-1}` fixed and searches only the spectral phases.
    pub fixed_amplitude_phases: Option<Vec<f64>>,
    /// Success threshold on the largest overlap error.
    pub tolerance: Tolerance,
}

impl SearchConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            restarts: 64,
            seed,
            max_iterations: 20_000,
            penalty: 10.0,
            fixed_amplitude_phases: None,
            tolerance: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub fiducial: ComplexVector,
    pub params: FiducialParams,
    /// Largest `||⟨φ|X^j Z^k|φ⟩|² - 1/(d+1)|` of the returned state.
    pub residual: f64,
    /// Final value of the least-squares objective.
    pub cost: f64,
    pub converged: bool,
    /// Index of the restart that produced the result.
    pub best_restart: usize,
    pub restarts_run: usize,
    pub evaluations: usize,
}

struct Problem<'a> {
    dim: usize,
    h: usize,
    penalty: f64,
    fixed: Option<&'a [f64]>,
    flip: bool,
}

impl Problem<'_> {
    fn split<'x>(&'x self, x: &'x [f64]) -> (&'x [f64], &'x [f64]) {
        match self.fixed {
            Some(t) => (x, t),
            None => x.split_at(self.h),
        }
    }

    fn state(&self, x: &[f64]) -> (ComplexVector, f64) {
        let (spectral, thetas) = self.split(x);
        let alphas = full_alphas_for(self.dim, spectral, self.flip);
        let p = probabilities_unchecked(self.dim, &alphas, Tolerance::default());
        let negative: f64 = p.q.iter().map(|v| v.min(0.0).powi(2)).sum();
        (state_from_probabilities(&p.q, thetas), negative)
    }

    fn cost(&self, x: &[f64]) -> f64 {
        let (phi, negative) = self.state(x);
        let target = 1.0 / (self.dim as f64 + 1.0);
        let fit: f64 = displacement_overlaps(&phi)
            .iter()
            .skip(1)
            .map(|z| (z.norm_sqr() - target).powi(2))
            .sum();
        fit + self.penalty * negative
    }
}

struct Local {
    x: Vec<f64>,
    f: f64,
    flip: bool,
    evaluations: usize,
}

fn local_run(problem: &Problem, x0: &[f64], iters: usize) -> Local {
    let opts = NelderMeadOptions {
        max_iterations: iters,
        f_tol: 1e-34,
        x_tol: 1e-15,
        step: 0.6,
        target: 1e-30,
    };
    let mut r = nelder_mead(|x| problem.cost(x), x0, &opts);
    let mut evaluations = r.evaluations;
    let mut step = 1e-2;
    // restart the simplex around the incumbent to escape premature collapse
    for _ in 0..4 {
        if r.f <= opts.target {
            break;
        }
        let polish = NelderMeadOptions { step, ..opts };
        let p = nelder_mead(|x| problem.cost(x), &r.x, &polish);
        evaluations += p.evaluations;
        if p.f < r.f {
            r = p;
        }
        step *= 0.1;
    }
    Local {
        x: r.x,
        f: r.f,
        flip: problem.flip,
        evaluations,
    }
}

pub fn search_fiducial(config: &SearchConfig) -> Result<SearchResult> {
    let d = config.dim;
    check_dim(d)?;
    if d < 2 {
        return Err(MufError::InvalidDimension(d));
    }
    if config.restarts == 0 {
        return Err(MufError::InvalidInput("at least one restart is required".into()));
    }
    if !(config.penalty.is_finite() && config.penalty >= 0.0) {
        return Err(MufError::InvalidInput(format!("penalty {} must be nonnegative", config.penalty)));
    }
    if let Some(t) = &config.fixed_amplitude_phases {
        if t.len() != d - 1 {
            return Err(MufError::InvalidParameters(format!(
                "expected {} fixed amplitude phases, got {}",
                d - 1,
                t.len()
            )));
        }
    }
    let h = (d - 1) / 2;
    let fixed = config.fixed_amplitude_phases.as_deref();
    let n = if fixed.is_some() { h } else { h + d - 1 };
    let flips: &[bool] = if d % 2 == 0 { &[false, true] } else { &[false] };

    let run = |index: usize| -> (usize, Local, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
        let mut best: Option<Local> = None;
        let mut evaluations = 0;
        for &flip in flips {
            let problem = Problem {
                dim: d,
                h,
                penalty: config.penalty,
                fixed,
                flip,
            };
            let l = local_run(&problem, &x0, config.max_iterations);
            evaluations += l.evaluations;
            if best.as_ref().is_none_or(|b| l.f < b.f) {
                best = Some(l);
            }
        }
        (index, best.expect("at least one branch"), evaluations)
    };

    let mut best: Option<(usize, Local)> = None;
    let mut evaluations = 0;
    let mut restarts_run = 0;
    let mut start = 0;
    while start < config.restarts {
        let end = (start + BATCH).min(config.restarts);
        let batch: Vec<(usize, Local, usize)> = (start..end).into_par_iter().map(run).collect();
        for (index, local, evals) in batch {
            evaluations += evals;
            restarts_run += 1;
            let better = match &best {
                None => true,
                Some((bi, b)) => local.f < b.f || (local.f == b.f && index < *bi),
            };
            if better {
                best = Some((index, local));
            }
        }
        start = end;
        let (_, b) = best.as_ref().expect("nonempty batch");
        if residual_of(d, h, fixed, b) <= config.tolerance.eps {
            break;
        }
    }

    let (best_restart, local) = best.expect("restarts > 0");
    let problem = Problem {
        dim: d,
        h,
        penalty: config.penalty,
        fixed,
        flip: local.flip,
    };
    let (fiducial, _) = problem.state(&local.x);
    let residual = residual_of(d, h, fixed, &local);
    let (spectral, thetas) = problem.split(&local.x);
    let wrap = |v: &[f64]| v.iter().map(|a| (a + PI).rem_euclid(2.0 * PI) - PI).collect::<Vec<_>>();
    let params = FiducialParams::new(d, wrap(spectral), wrap(thetas), local.flip)?;
    Ok(SearchResult {
        fiducial,
        params,
        residual,
        cost: local.f,
        converged: residual <= config.tolerance.eps,
        best_restart,
        restarts_run,
        evaluations,
    })
}

fn residual_of(d: usize, h: usize, fixed: Option<&[f64]>, l: &Local) -> f64 {
    let problem = Problem {
        dim: d,
        h,
        penalty: 0.0,
        fixed,
        flip: l.flip,
    };
    let (phi, negative) = problem.state(&l.x);
    if negative > 0.0 {
        return f64::INFINITY;
    }
    let target = 1.0 / (d as f64 + 1.0);
    displacement_overlaps(&phi)
        .iter()
        .skip(1)
        .map(|z| (z.norm_sqr() - target).abs())
        .fold(0.0, f64::max)
}
