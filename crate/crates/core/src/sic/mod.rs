//! Weyl-Heisenberg fiducial states: verification, the reduced
//! parameterization by spectral and amplitude phases, the even-dimension real
//! obstruction, and numerical search.
//!
//! The squared amplitudes `q_j = |⟨j|φ⟩|²` of a fiducial satisfy
//!
//! ```text
//! q = F† (1/√d, e^{iα_1}/√(d(d+1)), ..., e^{iα_{d-1}}/√(d(d+1)))
//! ```
//!
//! with `α_{d-j} = -α_j`, so a fiducial is determined by `⌊(d-1)/2⌋` spectral
//! phases plus `d-1` amplitude phases (the global phase is fixed by making
//! amplitude 0 real and nonnegative). For even `d` the middle phase
//! `α_{d/2}` is forced into `{0, π}` and is carried as a sign flag.

mod search;

pub use search::{search_fiducial, SearchConfig, SearchResult};

use std::f64::consts::PI;

use crate::constructions::displace;
use crate::error::{MufError, Result};
use crate::linalg::{check_dim, idft, omega_pow, principal_phase, CirculantMatrix, ComplexVector, Tolerance, C64};

/// Analytic qubit fiducial `(√((1+1/√3)/2), e^{iπ/4} √((1-1/√3)/2))`.
pub fn qubit_fiducial() -> ComplexVector {
    let s = 1.0 / 3f64.sqrt();
    ComplexVector::new(vec![
        C64::new(((1.0 + s) / 2.0).sqrt(), 0.0),
        C64::from_polar(((1.0 - s) / 2.0).sqrt(), PI / 4.0),
    ])
    .expect("nonempty")
}

/// `⟨φ|X^j Z^k|φ⟩` for all `(j, k)`, row-major. Uses
/// `⟨φ|X^j Z^k|φ⟩ = Σ_m conj(φ_{m+j}) φ_m ω^{km}`.
pub fn displacement_overlaps(phi: &ComplexVector) -> Vec<C64> {
    let d = phi.dim();
    let e = phi.entries();
    let mut out = Vec::with_capacity(d * d);
    let mut prod = vec![C64::new(0.0, 0.0); d];
    for j in 0..d {
        for (m, p) in prod.iter_mut().enumerate() {
            *p = e[(m + j) % d].conj() * e[m];
        }
        for k in 0..d {
            out.push(
                prod.iter()
                    .enumerate()
                    .map(|(m, p)| omega_pow(d, (k * m) as i64) * p)
                    .sum(),
            );
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiducialReport {
    pub dim: usize,
    /// Largest `||⟨φ|X^j Z^k|φ⟩|² - 1/(d+1)|` over `(j, k) ≠ (0, 0)`.
    pub max_overlap_error: f64,
    pub is_fiducial: bool,
    /// Indices of amplitudes with modulus at most `eps`.
    pub zero_entries: Vec<usize>,
}

pub fn is_fiducial(phi: &ComplexVector, tol: Tolerance) -> Result<FiducialReport> {
    let d = phi.dim();
    check_dim(d)?;
    if !phi.is_unit(tol) {
        return Err(MufError::NotUnit {
            index: 0,
            norm: phi.norm(),
        });
    }
    let target = 1.0 / (d as f64 + 1.0);
    let max_overlap_error = displacement_overlaps(phi)
        .iter()
        .skip(1)
        .map(|z| (z.norm_sqr() - target).abs())
        .fold(0.0, f64::max);
    let zero_entries = phi
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() <= tol.eps)
        .map(|(i, _)| i)
        .collect();
    Ok(FiducialReport {
        dim: d,
        max_overlap_error,
        is_fiducial: max_overlap_error <= tol.eps,
        zero_entries,
    })
}

/// `⌊(d-1)/2⌋ + d - 1`.
pub fn free_parameter_count(d: usize) -> usize {
    (d.saturating_sub(1)) / 2 + d.saturating_sub(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiducialParams {
    pub dim: usize,
    /// Free spectral phases `α_1..α_h`, `h = ⌊(d-1)/2⌋`.
    pub spectral_phases: Vec<f64>,
    /// `θ_1..θ_{d-1}`, phases of amplitudes relative to amplitude 0.
    pub amplitude_phases: Vec<f64>,
    /// Even `d` only: `α_{d/2} = π` when set, `0` otherwise.
    pub middle_flip: bool,
}

impl FiducialParams {
    pub fn new(dim: usize, spectral_phases: Vec<f64>, amplitude_phases: Vec<f64>, middle_flip: bool) -> Result<Self> {
        check_dim(dim)?;
        let h = (dim - 1) / 2;
        if spectral_phases.len() != h {
            return Err(MufError::InvalidParameters(format!(
                "expected {h} spectral phases, got {}",
                spectral_phases.len()
            )));
        }
        if amplitude_phases.len() != dim - 1 {
            return Err(MufError::InvalidParameters(format!(
                "expected {} amplitude phases, got {}",
                dim - 1,
                amplitude_phases.len()
            )));
        }
        if middle_flip && dim % 2 == 1 {
            return Err(MufError::InvalidParameters("middle phase flag requires even dimension".into()));
        }
        Ok(Self {
            dim,
            spectral_phases,
            amplitude_phases,
            middle_flip,
        })
    }

    /// Number of continuous coordinates.
    pub fn free_count(&self) -> usize {
        self.spectral_phases.len() + self.amplitude_phases.len()
    }

    /// `α_1..α_{d-1}` with `α_{d-j} = -α_j`.
    pub fn full_alphas(&self) -> Vec<f64> {
        full_alphas_for(self.dim, &self.spectral_phases, self.middle_flip)
    }
}

/// Full phase list `α_1..α_{d-1}` from the free spectral phases and, for even `d`,
/// the middle sign.
pub fn full_alphas_for(d: usize, spectral: &[f64], middle_flip: bool) -> Vec<f64> {
    let mut a = vec![0.0; d.saturating_sub(1)];
    for (i, &v) in spectral.iter().enumerate() {
        let j = i + 1;
        a[j - 1] = v;
        a[d - j - 1] = -v;
    }
    if d % 2 == 0 && d >= 2 {
        a[d / 2 - 1] = if middle_flip { PI } else { 0.0 };
    }
    a
}

fn wrap_pi(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probabilities {
    /// Real parts of `F†·v`; may contain negative entries.
    pub q: Vec<f64>,
    pub feasible: bool,
    pub max_imag: f64,
    pub most_negative: f64,
}

/// `q = F†(1/√d |0⟩ + 1/√(d(d+1)) Σ_j e^{iα_j}|j⟩)` from the full phase list
/// `α_1..α_{d-1}`.
pub fn reconstruct_probabilities(dim: usize, full_alphas: &[f64], tol: Tolerance) -> Result<Probabilities> {
    check_dim(dim)?;
    if full_alphas.len() != dim - 1 {
        return Err(MufError::InvalidParameters(format!(
            "expected {} phases, got {}",
            dim - 1,
            full_alphas.len()
        )));
    }
    for j in 1..dim {
        let s = wrap_pi(full_alphas[j - 1] + full_alphas[dim - j - 1]);
        if s.abs() > tol.eps {
            return Err(MufError::InvalidParameters(format!(
                "alpha_{} + alpha_{} = {s} violates the conjugate symmetry",
                j,
                dim - j
            )));
        }
    }
    Ok(probabilities_unchecked(dim, full_alphas, tol))
}

pub(crate) fn probabilities_unchecked(dim: usize, full_alphas: &[f64], tol: Tolerance) -> Probabilities {
    let df = dim as f64;
    let mut v = Vec::with_capacity(dim);
    v.push(C64::new(1.0 / df.sqrt(), 0.0));
    let s = 1.0 / (df * (df + 1.0)).sqrt();
    v.extend(full_alphas.iter().map(|&a| C64::from_polar(s, a)));
    let qc = idft(&ComplexVector::new(v).expect("nonempty"));
    let q: Vec<f64> = qc.entries().iter().map(|z| z.re).collect();
    let most_negative = q.iter().copied().fold(f64::INFINITY, f64::min);
    Probabilities {
        feasible: most_negative >= -tol.eps,
        max_imag: qc.max_imag(),
        most_negative,
        q,
    }
}

/// Amplitudes `√q_j e^{iθ_j}` with `θ_0 = 0`.
pub fn fiducial_from_params(p: &FiducialParams, tol: Tolerance) -> Result<ComplexVector> {
    let probs = reconstruct_probabilities(p.dim, &p.full_alphas(), tol)?;
    if !probs.feasible {
        return Err(MufError::Infeasible {
            most_negative: probs.most_negative,
        });
    }
    Ok(state_from_probabilities(&probs.q, &p.amplitude_phases))
}

pub(crate) fn state_from_probabilities(q: &[f64], amplitude_phases: &[f64]) -> ComplexVector {
    let total: f64 = q.iter().map(|x| x.max(0.0)).sum();
    let entries = q
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let theta = if j == 0 { 0.0 } else { amplitude_phases[j - 1] };
            C64::from_polar((x.max(0.0) / total).sqrt(), theta)
        })
        .collect();
    ComplexVector::new(entries).expect("nonempty")
}

/// Reads the reduced coordinates off a state whose phase-operator expectations
/// all have modulus `1/√(d+1)`: `α_k = arg⟨φ|Z^k|φ⟩`, `θ_j = arg φ_j - arg φ_0`.
pub fn extract_params(phi: &ComplexVector, tol: Tolerance) -> Result<FiducialParams> {
    let d = phi.dim();
    check_dim(d)?;
    if d < 2 {
        return Err(MufError::InvalidDimension(d));
    }
    if !phi.is_unit(tol) {
        return Err(MufError::NotUnit {
            index: 0,
            norm: phi.norm(),
        });
    }
    let probs = phi.probabilities();
    let target = 1.0 / (d as f64 + 1.0);
    let mut z = Vec::with_capacity(d);
    for k in 0..d {
        let zk: C64 = probs
            .iter()
            .enumerate()
            .map(|(j, &p)| omega_pow(d, (j * k) as i64) * p)
            .sum();
        if k > 0 && (zk.norm_sqr() - target).abs() > tol.eps {
            return Err(MufError::NotParameterizable(format!(
                "|<phi|Z^{k}|phi>|^2 = {} differs from 1/(d+1) = {target}",
                zk.norm_sqr()
            )));
        }
        z.push(zk);
    }
    let h = (d - 1) / 2;
    let spectral_phases = (1..=h).map(|k| principal_phase(z[k])).collect();
    let middle_flip = d % 2 == 0 && z[d / 2].re < 0.0;

    let reference = phi.get(0);
    let ref_phase = if reference.norm() > tol.eps { reference.arg() } else { 0.0 };
    let amplitude_phases = (1..d)
        .map(|j| principal_phase(C64::from_polar(1.0, phi.get(j).arg() - ref_phase)))
        .collect();
    FiducialParams::new(d, spectral_phases, amplitude_phases, middle_flip)
}

/// `|⟨φ|X^{d/2} Z|φ⟩|²` for real `φ` in even dimension; identically zero,
/// whereas a fiducial needs `1/(d+1)`.
pub fn real_obstruction_value(phi: &ComplexVector, tol: Tolerance) -> Result<f64> {
    let d = phi.dim();
    if d % 2 == 1 {
        return Err(MufError::Inapplicable(format!("dimension {d} is odd")));
    }
    if phi.max_imag() > tol.eps {
        return Err(MufError::InvalidInput("state is not real".into()));
    }
    Ok(phi.inner(&displace(phi, d / 2, 1)).norm_sqr())
}

/// Circulants `M_j` with eigenvalue vectors `√d·X^j|φ⟩`; their columns carry
/// the orbit of `F|φ⟩` split into `d` frames of `d` vectors.
pub fn companion_circulants(phi: &ComplexVector) -> Result<Vec<CirculantMatrix>> {
    let d = phi.dim();
    check_dim(d)?;
    let sd = C64::new((d as f64).sqrt(), 0.0);
    (0..d)
        .map(|j| CirculantMatrix::from_eigenvalues(displace(phi, j, 0).scale(sd)))
        .collect()
}
