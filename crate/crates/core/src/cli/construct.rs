use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Subcommand;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::file::{ConstellationFile, Kind};
use super::verify::verify_file;
use super::{read_file, tolerance, Failure, OutputArgs, Report};
use crate::constructions::{
    circulant_from_polar, mu_to_identity_and_fourier, mub_prime, qubit_family_pair, real_fiducial_family_d3,
    solve_qubit_alpha, unbiased_partner, wh_orbit, QubitFamilyParams,
};
use crate::error::MufError;
use crate::frames::Frame;
use crate::linalg::{check_dim, CirculantMatrix, ComplexVector, Tolerance, C64};
use crate::sic::qubit_fiducial;
use crate::uncertainty::{zauner_eigenvectors, zauner_triplet};

#[derive(Subcommand, Debug)]
pub(super) enum ConstructKind {
    /// d+1 mutually unbiased bases for prime d.
    Mub {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Real fiducial of the one-parameter family in dimension 3.
    D3RealFamily {
        #[arg(long)]
        r0: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The analytic qubit fiducial.
    QubitFiducial {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Weyl-Heisenberg orbit of the fiducial stored in a file.
    WhOrbit {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Pair of qubit circulant frames. Without --alpha the tangent condition
    /// is solved for it.
    QubitPair {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random circulant frame together with its unbiased partner.
    Partner {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Which unimodular vector unbiased to the identity and Fourier bases to use.
        #[arg(long, default_value_t = 0)]
        mu_index: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Columns of I, 𝒵 and 𝒵² for the Zauner operator 𝒵.
    ZaunerTriplet {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// An eigenvector of the Zauner operator, as a state file.
    ZaunerEigenvector {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A state from explicit amplitudes, normalized.
    State {
        /// Comma-separated real parts.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        re: Vec<f64>,
        /// Comma-separated imaginary parts (zero when omitted).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        im: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn columns(m: &CirculantMatrix) -> Vec<ComplexVector> {
    m.columns()
}

fn frames_of(fs: Vec<Frame>) -> Vec<Vec<ComplexVector>> {
    fs.into_iter().map(|f| f.vectors().to_vec()).collect()
}

fn build(kind: &ConstructKind, tol: Tolerance) -> Result<ConstellationFile, Failure> {
    Ok(match kind {
        ConstructKind::Mub { dim, .. } => {
            ConstellationFile::new(Kind::MubSet, *dim, tol, frames_of(mub_prime(*dim)?)).with_meta("construction", "mub")
        }
        ConstructKind::D3RealFamily { r0, .. } => {
            let v = real_fiducial_family_d3(*r0)?;
            ConstellationFile::new(Kind::Fiducial, 3, tol, vec![vec![v]])
                .with_meta("construction", "d3-real-family")
                .with_meta("r0", format!("{r0:.16e}"))
        }
        ConstructKind::QubitFiducial { .. } => {
            ConstellationFile::new(Kind::Fiducial, 2, tol, vec![vec![qubit_fiducial()]])
                .with_meta("construction", "qubit-fiducial")
        }
        ConstructKind::WhOrbit { input, .. } => {
            let src = read_file(input)?;
            if src.kind != Kind::Fiducial {
                return Err(Failure::usage(format!("{} is not a fiducial file", input.display())));
            }
            let orbit = wh_orbit(src.single_vector()?, tol)?;
            ConstellationFile::new(Kind::Sic, src.dim, tol, vec![orbit.vectors().to_vec()])
                .with_meta("construction", "wh-orbit")
        }
        ConstructKind::QubitPair {
            theta, eta, alpha, beta, ..
        } => {
            let alpha = match alpha {
                Some(a) => *a,
                None => *solve_qubit_alpha(*theta, *eta, *beta)
                    .first()
                    .ok_or_else(|| Failure::usage("the tangent condition has no solution for these angles"))?,
            };
            let p = QubitFamilyParams {
                theta: *theta,
                eta: *eta,
                alpha,
                beta: *beta,
            };
            let (m1, m2, valid, overlap) = qubit_family_pair(&p);
            if !valid {
                return Err(Failure::usage(format!(
                    "angles do not define a generic unbiased pair (tangent residual {:e})",
                    p.tangent_residual()
                )));
            }
            ConstellationFile::new(Kind::MufSystem, 2, tol, vec![columns(&m1), columns(&m2)])
                .with_meta("construction", "qubit-pair")
                .with_meta("alpha", format!("{alpha:.16e}"))
                .with_meta("overlap", format!("{overlap:.16e}"))
        }
        ConstructKind::Partner { dim, seed, mu_index, .. } => {
            check_dim(*dim)?;
            let ws = mu_to_identity_and_fourier(*dim)?;
            let w = ws.get(*mu_index).ok_or_else(|| {
                Failure::from(MufError::IndexOutOfRange(format!(
                    "mu index {mu_index} outside 0..{}",
                    ws.len()
                )))
            })?;
            let (m, _) = random_circulant(*dim, *seed);
            let (partner, spec) = unbiased_partner(&m, w, tol)?;
            ConstellationFile::new(Kind::MufSystem, *dim, tol, vec![columns(&m), columns(&partner)])
                .with_meta("construction", "partner")
                .with_meta("seed", seed)
                .with_meta("overlap", format!("{:.16e}", spec.derived_overlap))
        }
        ConstructKind::ZaunerTriplet { dim, .. } => {
            ConstellationFile::new(Kind::MufSystem, *dim, tol, frames_of(zauner_triplet(*dim, tol)?))
                .with_meta("construction", "zauner-triplet")
        }
        ConstructKind::ZaunerEigenvector { dim, index, .. } => {
            let eig = zauner_eigenvectors(*dim)?;
            let (val, v) = eig.get(*index).ok_or_else(|| {
                Failure::from(MufError::IndexOutOfRange(format!("index {index} outside 0..{dim}")))
            })?;
            ConstellationFile::new(Kind::State, *dim, tol, vec![vec![v.clone()]])
                .with_meta("construction", "zauner-eigenvector")
                .with_meta("eigenvalue", format!("{:.16e}{:+.16e}i", val.re, val.im))
        }
        ConstructKind::State { re, im, .. } => {
            if !im.is_empty() && im.len() != re.len() {
                return Err(Failure::usage("--im must have as many entries as --re"));
            }
            let entries = re
                .iter()
                .enumerate()
                .map(|(i, &r)| C64::new(r, im.get(i).copied().unwrap_or(0.0)))
                .collect();
            let v = ComplexVector::new(entries)?.normalized()?;
            check_dim(v.dim())?;
            ConstellationFile::new(Kind::State, v.dim(), tol, vec![vec![v]]).with_meta("construction", "state")
        }
    })
}

/// Unit-column circulant with seeded random eigenvalue moduli and phases.
pub(crate) fn random_circulant(d: usize, seed: u64) -> (CirculantMatrix, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..1.5)).collect();
    let scale = (d as f64 / raw.iter().map(|r| r * r).sum::<f64>()).sqrt();
    let moduli: Vec<f64> = raw.iter().map(|r| r * scale).collect();
    let phases: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let m = circulant_from_polar(&moduli, &phases).expect("matching lengths");
    (m, moduli)
}

fn output(kind: &ConstructKind) -> &OutputArgs {
    match kind {
        ConstructKind::Mub { out, .. }
        | ConstructKind::D3RealFamily { out, .. }
        | ConstructKind::QubitFiducial { out }
        | ConstructKind::WhOrbit { out, .. }
        | ConstructKind::QubitPair { out, .. }
        | ConstructKind::Partner { out, .. }
        | ConstructKind::ZaunerTriplet { out, .. }
        | ConstructKind::ZaunerEigenvector { out, .. }
        | ConstructKind::State { out, .. } => out,
    }
}

pub(super) fn run(kind: ConstructKind) -> Result<Report, Failure> {
    let out = output(&kind).clone();
    let tol = tolerance(out.eps, None)?;
    let file = build(&kind, tol)?;
    let check = verify_file(&file, tol)?;
    if !check.pass {
        return Err(Failure::fail(format!(
            "constructed {} does not verify:\n{}",
            file.kind.as_str(),
            check.text
        )));
    }
    file.write(&out.output)?;
    Ok(Report {
        pass: true,
        value: json!({"kind": file.kind.as_str(), "dim": file.dim, "output": out.output.display().to_string()}),
        text: format!(
            "wrote {} (dim {}) to {}\n",
            file.kind.as_str(),
            file.dim,
            out.output.display()
        ),
    })
}
