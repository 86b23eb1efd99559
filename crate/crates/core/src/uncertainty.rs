//! Quadratic Rényi entropy certificates, the autocorrelation identity, the
//! Zauner operator and Clifford conjugators.

use std::f64::consts::PI;

use crate::constructions::{is_prime, sorted_eigenbasis, wh_displacement};
use crate::error::{MufError, Result};
use crate::frames::Frame;
use crate::linalg::{check_dim, dft_matrix, omega_pow, ComplexMatrix, ComplexVector, Tolerance, C64};
use crate::muf::certify_muf_system;

/// `-log2 Σ p²`.
pub fn renyi2(probs: &[f64], tol: Tolerance) -> Result<f64> {
    if probs.is_empty() {
        return Err(MufError::Domain("empty probability vector".into()));
    }
    if let Some(p) = probs.iter().find(|p| **p < -tol.eps || !p.is_finite()) {
        return Err(MufError::Domain(format!("negative probability {p}")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tol.eps {
        return Err(MufError::Domain(format!("probabilities sum to {sum}")));
    }
    let purity: f64 = probs.iter().map(|p| p.max(0.0).powi(2)).sum();
    Ok(-purity.log2())
}

/// `|⟨b_k|φ⟩|²` over the basis vectors, with tiny negatives clamped and the
/// vector renormalized if its sum drifts beyond `eps`.
pub fn basis_probabilities(phi: &ComplexVector, basis: &Frame, tol: Tolerance) -> Result<Vec<f64>> {
    if phi.dim() != basis.dim() {
        return Err(MufError::DimensionMismatch {
            expected: basis.dim(),
            found: phi.dim(),
        });
    }
    let mut p: Vec<f64> = basis.vectors().iter().map(|b| b.overlap(phi).max(0.0)).collect();
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol.eps && sum > 0.0 {
        p.iter_mut().for_each(|x| *x /= sum);
    }
    Ok(p)
}

/// `Σ_j p_j p_{j+k}` for `k = 0..d-1`, indices mod `d`.
pub fn autocorrelation(p: &[f64]) -> Vec<f64> {
    let d = p.len();
    (0..d)
        .map(|k| (0..d).map(|j| p[j] * p[(j + k) % d]).sum())
        .collect()
}

/// `(d+1) log2((d+1)/2)`.
pub fn entropy_bound(d: usize) -> f64 {
    let df = d as f64;
    (df + 1.0) * ((df + 1.0) / 2.0).log2()
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub per_basis_entropy: Vec<f64>,
    pub entropy_sum: f64,
    pub bound: f64,
    pub saturated: bool,
    pub per_basis_autocorrelation: Vec<Vec<f64>>,
}

fn require_orthonormal(bases: &[Frame], d: usize, tol: Tolerance) -> Result<()> {
    for (i, b) in bases.iter().enumerate() {
        if b.dim() != d {
            return Err(MufError::DimensionMismatch {
                expected: d,
                found: b.dim(),
            });
        }
        if !b.is_orthonormal_basis(tol) {
            return Err(MufError::NotOrthonormal(i));
        }
    }
    Ok(())
}

pub fn uncertainty_certificate(phi: &ComplexVector, bases: &[Frame], tol: Tolerance) -> Result<UncertaintyReport> {
    let d = phi.dim();
    check_dim(d)?;
    if bases.len() != d + 1 {
        return Err(MufError::InvalidInput(format!(
            "expected {} bases, got {}",
            d + 1,
            bases.len()
        )));
    }
    require_orthonormal(bases, d, tol)?;
    let mut per_basis_entropy = Vec::with_capacity(bases.len());
    let mut per_basis_autocorrelation = Vec::with_capacity(bases.len());
    for b in bases {
        let p = basis_probabilities(phi, b, tol)?;
        per_basis_entropy.push(renyi2(&p, tol.scaled(1e3))?);
        per_basis_autocorrelation.push(autocorrelation(&p));
    }
    let entropy_sum: f64 = per_basis_entropy.iter().sum();
    let bound = entropy_bound(d);
    Ok(UncertaintyReport {
        saturated: (entropy_sum - bound).abs() <= tol.eps,
        per_basis_entropy,
        entropy_sum,
        bound,
        per_basis_autocorrelation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationCheck {
    pub values: Vec<f64>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares `Σ_j p_j p_{j+k}` against `(1 + δ_{k,0})/(d+1)`.
pub fn autocorrelation_check(phi: &ComplexVector, basis: &Frame, tol: Tolerance) -> Result<AutocorrelationCheck> {
    let p = basis_probabilities(phi, basis, tol)?;
    let values = autocorrelation(&p);
    let d1 = p.len() as f64 + 1.0;
    let max_deviation = values
        .iter()
        .enumerate()
        .map(|(k, v)| (v - (if k == 0 { 2.0 } else { 1.0 }) / d1).abs())
        .fold(0.0, f64::max);
    Ok(AutocorrelationCheck {
        values,
        max_deviation,
        pass: max_deviation <= tol.eps,
    })
}

/// `e^{iπ(d-1)/12} F G` with `G_jj = e^{iπ(d+1)j²/d}`.
pub fn zauner_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    if d < 2 {
        return Err(MufError::InvalidDimension(d));
    }
    let f = dft_matrix(d)?;
    let df = d as f64;
    let g: Vec<C64> = (0..d)
        .map(|j| {
            // reduce j² mod 2d first to keep the angle small
            let e = ((j * j) % (2 * d)) as f64;
            C64::from_polar(1.0, PI * (df + 1.0) * e / df)
        })
        .collect();
    let phase = C64::from_polar(1.0, PI * (df - 1.0) / 12.0);
    Ok(f.matmul(&ComplexMatrix::diagonal(&g)).scale(phase))
}

/// Orthonormal eigenvectors of the Zauner operator with their eigenvalues.
pub fn zauner_eigenvectors(d: usize) -> Result<Vec<(C64, ComplexVector)>> {
    Ok(sorted_eigenbasis(&zauner_operator(d)?))
}

fn columns_frame(m: &ComplexMatrix, label: &str, tol: Tolerance) -> Result<Frame> {
    Frame::from_columns(m, label, tol)
}

/// `{I, 𝒵, 𝒵²}` as three orthonormal bases (columns).
pub fn zauner_triplet(d: usize, tol: Tolerance) -> Result<Vec<Frame>> {
    let z = zauner_operator(d)?;
    Ok(vec![
        columns_frame(&ComplexMatrix::identity(d), "I", tol)?,
        columns_frame(&z, "Z", tol)?,
        columns_frame(&z.matmul(&z), "Z^2", tol)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZaunerCertificate {
    /// Set when `φ` is an eigenvector of `𝒵` within `eps`.
    pub eigenvalue: Option<C64>,
    /// Only evaluated for eigenvectors.
    pub identical_distributions: Option<bool>,
    pub triplet_is_mub: bool,
    pub triplet_overlap: f64,
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn zauner_triplet_certificate(phi: &ComplexVector, tol: Tolerance) -> Result<ZaunerCertificate> {
    let d = phi.dim();
    let z = zauner_operator(d)?;
    let triplet = zauner_triplet(d, tol)?;
    let report = certify_muf_system(&triplet, tol)?;
    let triplet_is_mub = report.certified && (report.overlap - 1.0 / d as f64).abs() <= tol.eps;

    let zphi = z.apply(phi);
    let mu = phi.inner(&zphi);
    let residual = (0..d).map(|i| (zphi.get(i) - mu * phi.get(i)).norm()).fold(0.0, f64::max);
    let (eigenvalue, identical_distributions) = if phi.is_unit(tol) && residual <= tol.eps {
        let dists: Vec<Vec<f64>> = triplet
            .iter()
            .map(|b| basis_probabilities(phi, b, tol).map(sorted))
            .collect::<Result<_>>()?;
        let same = dists[1..].iter().all(|p| max_diff(p, &dists[0]) <= tol.eps);
        (Some(mu), Some(same))
    } else {
        (None, None)
    };
    Ok(ZaunerCertificate {
        eigenvalue,
        identical_distributions,
        triplet_is_mub,
        triplet_overlap: report.overlap,
    })
}

/// `τ = -e^{iπ/d}`.
pub fn clifford_tau(d: usize) -> C64 {
    -C64::from_polar(1.0, PI / d as f64)
}

/// A unitary `U` with `U (XZ^k) U† = τ^{-k} Z`, built from the eigenbasis of
/// `XZ^k`: `U = Σ_m |m⟩⟨v_m|` where `XZ^k v_m = τ^{-k} ω^m v_m`.
pub fn clifford_conjugator(d: usize, k: usize, tol: Tolerance) -> Result<ComplexMatrix> {
    check_dim(d)?;
    if !is_prime(d) {
        return Err(MufError::UnsupportedDimension {
            dim: d,
            reason: "Clifford conjugator requires a prime dimension".into(),
        });
    }
    if k == 0 || k >= d {
        return Err(MufError::IndexOutOfRange(format!("k = {k} outside 1..{}", d - 1)));
    }
    let xzk = wh_displacement(d, 1, k)?;
    let eig = sorted_eigenbasis(&xzk);
    let tau_k = clifford_tau(d).powi(-(k as i32));
    let mut rows = Vec::with_capacity(d * d);
    for m in 0..d {
        let target = tau_k * omega_pow(d, m as i64);
        let (_, v) = eig
            .iter()
            .min_by(|a, b| (a.0 - target).norm().total_cmp(&(b.0 - target).norm()))
            .expect("nonempty spectrum");
        rows.extend(v.entries().iter().map(|z| z.conj()));
    }
    let u = ComplexMatrix::from_row_major(d, rows)?;
    let residual = conjugation_residual(&u, d, k)?;
    if residual > tol.eps || !u.is_unitary(tol) {
        return Err(MufError::ConstructionFailure { residual });
    }
    Ok(u)
}

/// `‖U (XZ^k) U† - τ^{-k} Z‖_∞` (largest entry modulus).
pub fn conjugation_residual(u: &ComplexMatrix, d: usize, k: usize) -> Result<f64> {
    let xzk = wh_displacement(d, 1, k)?;
    let lhs = u.matmul(&xzk).matmul(&u.adjoint());
    let rhs = wh_displacement(d, 0, 1)?.scale(clifford_tau(d).powi(-(k as i32)));
    Ok(lhs.max_abs_diff(&rhs))
}

/// True iff the sorted probability vectors of `φ` agree across all bases.
/// The bases must certify as mutually unbiased.
pub fn mub_balanced_check(phi: &ComplexVector, bases: &[Frame], tol: Tolerance) -> Result<bool> {
    let d = phi.dim();
    require_orthonormal(bases, d, tol)?;
    let report = certify_muf_system(bases, tol)?;
    if !report.certified || (report.overlap - 1.0 / d as f64).abs() > tol.eps {
        return Err(MufError::InvalidInput(format!(
            "bases are not mutually unbiased (max deviation {:e})",
            report.max_deviation
        )));
    }
    let dists: Vec<Vec<f64>> = bases
        .iter()
        .map(|b| basis_probabilities(phi, b, tol).map(sorted))
        .collect::<Result<_>>()?;
    Ok(dists[1..].iter().all(|p| max_diff(p, &dists[0]) <= tol.eps))
}
