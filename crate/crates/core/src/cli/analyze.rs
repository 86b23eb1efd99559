use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::file::Kind;
use super::{read_file, tolerance, Failure, Report};
use crate::constructions::{is_prime, mub_prime};
use crate::error::MufError;
use crate::frames::Frame;
use crate::linalg::Tolerance;
use crate::sic::{extract_params, free_parameter_count, real_obstruction_value};
use crate::uncertainty::{mub_balanced_check, uncertainty_certificate, zauner_triplet_certificate};

pub(super) enum Mode {
    Uncertainty(Option<PathBuf>),
    Zauner,
    Params,
}

pub(super) fn run(path: &Path, mode: Mode, eps: Option<f64>) -> Result<Report, Failure> {
    let file = read_file(path)?;
    if !matches!(file.kind, Kind::Fiducial | Kind::State) {
        return Err(Failure::usage(format!(
            "analyze expects a fiducial or state file, found {}",
            file.kind.as_str()
        )));
    }
    let tol = tolerance(eps, Some(&file))?;
    let phi = file.single_vector()?.clone();
    if !phi.is_unit(tol) {
        return Err(Failure::fail(MufError::NotUnit {
            index: 0,
            norm: phi.norm(),
        }));
    }
    match mode {
        Mode::Uncertainty(bases) => uncertainty(&phi, bases.as_deref(), tol),
        Mode::Zauner => zauner(&phi, tol),
        Mode::Params => params(&phi, tol),
    }
}

fn load_bases(path: &Path, d: usize, tol: Tolerance) -> Result<Vec<Frame>, Failure> {
    let f = read_file(path)?;
    if !matches!(f.kind, Kind::MubSet | Kind::MufSystem) || f.dim != d {
        return Err(Failure::usage(format!(
            "{} must be a mub_set or muf_system file of dimension {d}",
            path.display()
        )));
    }
    f.frames
        .iter()
        .map(|vs| Frame::new(vs.clone(), "", tol).map_err(Failure::usage))
        .collect()
}

fn uncertainty(phi: &crate::linalg::ComplexVector, bases: Option<&Path>, tol: Tolerance) -> Result<Report, Failure> {
    let d = phi.dim();
    let bases = match bases {
        Some(p) => load_bases(p, d, tol)?,
        None if is_prime(d) => mub_prime(d)?,
        None => {
            return Err(Failure::fail(format!(
                "no built-in complete MUB set for d = {d}; pass --bases"
            )))
        }
    };
    let r = uncertainty_certificate(phi, &bases, tol).map_err(Failure::fail)?;
    let mut text = String::new();
    let _ = writeln!(text, "dim: {d}");
    for (i, h) in r.per_basis_entropy.iter().enumerate() {
        let _ = writeln!(text, "basis {i}: H2 = {h:.15} bits, autocorrelation = {:?}", r.per_basis_autocorrelation[i]);
    }
    let _ = writeln!(text, "entropy sum: {:.15}\nbound: {:.15}\nsaturated: {}", r.entropy_sum, r.bound, r.saturated);
    Ok(Report {
        pass: true,
        value: json!({
            "dim": d,
            "per_basis_entropy": r.per_basis_entropy,
            "entropy_sum": r.entropy_sum,
            "bound": r.bound,
            "saturated": r.saturated,
            "per_basis_autocorrelation": r.per_basis_autocorrelation,
        }),
        text,
    })
}

fn zauner(phi: &crate::linalg::ComplexVector, tol: Tolerance) -> Result<Report, Failure> {
    let d = phi.dim();
    let c = zauner_triplet_certificate(phi, tol).map_err(Failure::fail)?;
    let balanced = if is_prime(d) {
        Some(mub_balanced_check(phi, &mub_prime(d)?, tol).map_err(Failure::fail)?)
    } else {
        None
    };
    let mut text = String::new();
    let _ = writeln!(text, "dim: {d}");
    match c.eigenvalue {
        Some(mu) => {
            let _ = writeln!(text, "zauner eigenvalue: {:.15}{:+.15}i", mu.re, mu.im);
        }
        None => text.push_str("zauner eigenvector: false\n"),
    }
    if let Some(same) = c.identical_distributions {
        let _ = writeln!(text, "identical distributions on triplet: {same}");
    }
    let _ = writeln!(text, "triplet is MUB: {} (overlap {:.15})", c.triplet_is_mub, c.triplet_overlap);
    if let Some(b) = balanced {
        let _ = writeln!(text, "MUB-balanced: {b}");
    }
    Ok(Report {
        pass: true,
        value: json!({
            "dim": d,
            "eigenvalue": c.eigenvalue.map(|z| [z.re, z.im]),
            "identical_distributions": c.identical_distributions,
            "triplet_is_mub": c.triplet_is_mub,
            "triplet_overlap": c.triplet_overlap,
            "mub_balanced": balanced,
        }),
        text,
    })
}

fn params(phi: &crate::linalg::ComplexVector, tol: Tolerance) -> Result<Report, Failure> {
    let d = phi.dim();
    let p = match extract_params(phi, tol) {
        Ok(p) => p,
        Err(e) => {
            let mut msg = e.to_string();
            if let Ok(v) = real_obstruction_value(phi, tol) {
                let _ = write!(
                    msg,
                    "; real state in even dimension: |<phi|X^(d/2) Z|phi>|^2 = {v:e}, a fiducial needs {:e}",
                    1.0 / (d as f64 + 1.0)
                );
            }
            return Err(Failure::fail(msg));
        }
    };
    let expected = free_parameter_count(d);
    let count_ok = p.free_count() == expected;
    let mut text = String::new();
    let _ = writeln!(text, "dim: {d}");
    let _ = writeln!(text, "spectral phases: {:?}", p.spectral_phases);
    let _ = writeln!(text, "amplitude phases: {:?}", p.amplitude_phases);
    if d % 2 == 0 {
        let _ = writeln!(text, "middle phase flipped: {}", p.middle_flip);
    }
    let _ = writeln!(text, "free parameters: {} (expected {expected})", p.free_count());
    Ok(Report {
        pass: count_ok,
        value: json!({
            "dim": d,
            "spectral_phases": p.spectral_phases,
            "amplitude_phases": p.amplitude_phases,
            "middle_flip": p.middle_flip,
            "free_parameters": p.free_count(),
            "expected_free_parameters": expected,
        }),
        text,
    })
}
