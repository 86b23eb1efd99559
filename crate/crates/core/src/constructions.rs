//! Explicit constellations: Weyl-Heisenberg displacements and orbits, MUB in
//! prime dimension, the two-parameter-pair qubit MUF family, the circulant
//! unbiased-partner construction and the real d=3 fiducial family.

use std::f64::consts::PI;

use crate::error::{MufError, Result};
use crate::frames::{Frame, RANK_TOL};
use crate::linalg::{
    check_dim, idft, omega_pow, principal_phase, CirculantMatrix, ComplexMatrix, ComplexVector, Tolerance, C64,
};

/// `X^j·Z^k`, built entrywise: the only nonzero in column `c` is `ω^{kc}` at
/// row `c + j`.
pub fn wh_displacement(d: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    if j >= d || k >= d {
        return Err(MufError::IndexOutOfRange(format!("displacement ({j}, {k}) in dimension {d}")));
    }
    Ok(ComplexMatrix::from_fn(d, |r, c| {
        if r == (c + j) % d {
            omega_pow(d, (k * c) as i64)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// `X^j Z^k |φ⟩` without building the matrix.
pub fn displace(phi: &ComplexVector, j: usize, k: usize) -> ComplexVector {
    let d = phi.dim();
    let entries = (0..d)
        .map(|n| {
            let m = (n + d - j % d) % d;
            omega_pow(d, (k * m) as i64) * phi.get(m)
        })
        .collect();
    ComplexVector::new(entries).expect("nonempty")
}

/// The `d²` displaced copies of `fiducial`, row-major in `(j, k)`.
pub fn wh_orbit(fiducial: &ComplexVector, tol: Tolerance) -> Result<Frame> {
    let d = fiducial.dim();
    check_dim(d)?;
    if !fiducial.is_unit(tol) {
        return Err(MufError::NotUnit {
            index: 0,
            norm: fiducial.norm(),
        });
    }
    let mut vs = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            vs.push(displace(fiducial, j, k));
        }
    }
    Frame::new(vs, format!("WH orbit d={d}"), tol)
}

pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

const PHASE_CUTOFF: f64 = 1e-9;

/// Eigenbasis of a unitary with distinct eigenvalues, sorted by eigenvalue
/// phase in `[0, 2π)`, each vector with its first nonzero entry real positive.
pub(crate) fn sorted_eigenbasis(u: &ComplexMatrix) -> Vec<(C64, ComplexVector)> {
    let mut pairs: Vec<(f64, C64, ComplexVector)> = u
        .normal_eigen()
        .into_iter()
        .map(|(val, vec)| {
            let mut ph = principal_phase(val);
            if 2.0 * PI - ph < PHASE_CUTOFF {
                ph = 0.0;
            }
            let v = vec.normalized().unwrap_or(vec).with_canonical_phase(PHASE_CUTOFF);
            (ph, val, v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().map(|(_, val, v)| (val, v)).collect()
}

/// `d + 1` mutually unbiased bases for prime `d`: the eigenbases of `Z`, `X`
/// and `XZ^k` for `k = 1..d-1`, in that order.
pub fn mub_prime(d: usize) -> Result<Vec<Frame>> {
    check_dim(d)?;
    if !is_prime(d) {
        return Err(MufError::UnsupportedDimension {
            dim: d,
            reason: "MUB construction requires a prime dimension".into(),
        });
    }
    let tol = Tolerance::default();
    let mut out = Vec::with_capacity(d + 1);
    let generators = std::iter::once((wh_displacement(d, 0, 1)?, "Z".to_string()))
        .chain(std::iter::once((wh_displacement(d, 1, 0)?, "X".to_string())))
        .chain((1..d).map(|k| (wh_displacement(d, 1, k).expect("valid indices"), format!("XZ^{k}"))));
    for (g, label) in generators {
        let vs = sorted_eigenbasis(&g).into_iter().map(|(_, v)| v).collect();
        out.push(Frame::new(vs, label, tol)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitFamilyParams {
    pub theta: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl QubitFamilyParams {
    /// `θ` and `η` avoid multiples of π/2 and `α`, `β` avoid multiples of π.
    /// At `α = π/2` the condition is still well posed (`sin α = 1`), so only
    /// the zeros of `sin α`, `sin β` are excluded for the phases.
    pub fn is_generic(&self) -> bool {
        let away = |a: f64, period: f64| {
            let r = a.rem_euclid(period);
            r > 1e-10 && period - r > 1e-10
        };
        away(self.theta, PI / 2.0) && away(self.eta, PI / 2.0) && away(self.alpha, PI) && away(self.beta, PI)
    }

    /// `sin α sin β sin 2θ sin 2η + cos 2θ cos 2η`; this vanishes exactly when the
    /// tangent condition `sin α sin β tan 2θ tan 2η = -1` holds, and is the
    /// difference of the two distinct cross squared overlaps.
    pub fn tangent_residual(&self) -> f64 {
        self.alpha.sin() * self.beta.sin() * (2.0 * self.theta).sin() * (2.0 * self.eta).sin()
            + (2.0 * self.theta).cos() * (2.0 * self.eta).cos()
    }

    /// Closed-form overlap of the pair.
    pub fn overlap(&self) -> f64 {
        let (t, e) = (self.theta, self.eta);
        (e - t).cos().powi(2) + 2.0 * e.sin() * e.cos() * t.sin() * t.cos() * ((self.alpha - self.beta).cos() - 1.0)
    }
}

fn qubit_circulant(angle: f64, phase: f64) -> CirculantMatrix {
    let mu = ComplexVector::new(vec![C64::new(angle.cos(), 0.0), C64::from_polar(angle.sin(), phase)])
        .expect("nonempty");
    CirculantMatrix::from_first_row(mu).expect("dimension 2")
}

/// The two circulants with first rows `(cos θ, sin θ e^{iα})` and
/// `(cos η, sin η e^{iβ})`, whether the point is a valid generic MUF point,
/// and the closed-form overlap.
pub fn qubit_family_pair(p: &QubitFamilyParams) -> (CirculantMatrix, CirculantMatrix, bool, f64) {
    let m1 = qubit_circulant(p.theta, p.alpha);
    let m2 = qubit_circulant(p.eta, p.beta);
    let valid = p.is_generic() && p.tangent_residual().abs() <= Tolerance::default().eps;
    (m1, m2, valid, p.overlap())
}

/// Solves the tangent condition for `α` given `θ`, `η`, `β`. Returns both
/// branches `asin(x)` and `π - asin(x)` when a solution exists.
pub fn solve_qubit_alpha(theta: f64, eta: f64, beta: f64) -> Vec<f64> {
    let x = -1.0 / (beta.sin() * (2.0 * theta).tan() * (2.0 * eta).tan());
    if !x.is_finite() || x.abs() > 1.0 {
        return Vec::new();
    }
    let a = x.asin();
    vec![a, PI - a]
}

/// Unimodular vectors whose Fourier transform is also unimodular, i.e. vectors
/// unbiased to both the computational and the Fourier basis once divided by
/// `√d`. These are the eigenvectors of `XZ`:
/// `w_n = ω^{n(n-1)/2} λ_m^{-n}` with `λ_m = e^{iπ(d-1)/d} ω^m`.
pub fn mu_to_identity_and_fourier(d: usize) -> Result<Vec<ComplexVector>> {
    check_dim(d)?;
    if d < 2 {
        return Err(MufError::InvalidDimension(d));
    }
    let tol = Tolerance::default();
    let df = d as f64;
    let mut out = Vec::with_capacity(d);
    for m in 0..d {
        let lambda_phase = PI * (df - 1.0) / df + 2.0 * PI * m as f64 / df;
        let entries: Vec<C64> = (0..d)
            .map(|n| {
                let tri = if n == 0 { 0 } else { (n * (n - 1)) % (2 * d) };
                let chirp = PI * tri as f64 / df;
                C64::from_polar(1.0, chirp - lambda_phase * n as f64)
            })
            .collect();
        let w = ComplexVector::new(entries)?;
        if is_unbiased_to_identity_and_fourier(&w, tol) {
            out.push(w);
        }
    }
    Ok(out)
}

/// `|w_j| = 1` and `|(F†w)_j| = 1` for all `j`.
pub fn is_unbiased_to_identity_and_fourier(w: &ComplexVector, tol: Tolerance) -> bool {
    let flat = |v: &ComplexVector| v.entries().iter().all(|z| (z.norm() - 1.0).abs() <= tol.eps);
    flat(w) && flat(&idft(w))
}

/// Polar data of an unbiased-partner construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerSpec {
    /// `r_j = |λ_j(M)|`.
    pub moduli: Vec<f64>,
    /// `α_j = arg λ_j(M)` in `[0, 2π)`.
    pub phases: Vec<f64>,
    /// `γ_j = arg w_j` of the vector unbiased to `{I, F}`.
    pub mu_phases: Vec<f64>,
    /// `c = 1 / Σ_j r_j^{-2}`.
    pub derived_overlap: f64,
}

impl PartnerSpec {
    /// `s_j = √(c d) / r_j`.
    pub fn partner_moduli(&self) -> Vec<f64> {
        let cd = (self.derived_overlap * self.moduli.len() as f64).sqrt();
        self.moduli.iter().map(|r| cd / r).collect()
    }
}

/// Builds `M̃` unbiased to the circulant `m`: eigenvalue moduli
/// `s_j = √(cd)/r_j` and phases `β_j = α_j + δ_j`, with `δ = arg F†w`.
pub fn unbiased_partner(
    m: &CirculantMatrix,
    mu_vector: &ComplexVector,
    tol: Tolerance,
) -> Result<(CirculantMatrix, PartnerSpec)> {
    let d = m.dim();
    if mu_vector.dim() != d {
        return Err(MufError::DimensionMismatch {
            expected: d,
            found: mu_vector.dim(),
        });
    }
    if !m.has_unit_columns(tol) {
        return Err(MufError::NotUnit {
            index: 0,
            norm: m.first_row().norm(),
        });
    }
    if !is_unbiased_to_identity_and_fourier(mu_vector, tol) {
        return Err(MufError::InvalidInput(
            "vector must be unimodular and unbiased to the Fourier basis".into(),
        ));
    }

    let lambda = m.eigenvalues();
    let moduli: Vec<f64> = lambda.entries().iter().map(|z| z.norm()).collect();
    if let Some(&rmin) = moduli.iter().min_by(|a, b| a.total_cmp(b)) {
        if rmin <= RANK_TOL {
            return Err(MufError::NotAFrame { lower: rmin * rmin });
        }
    }
    let phases: Vec<f64> = lambda.entries().iter().map(|&z| principal_phase(z)).collect();
    let mu_phases: Vec<f64> = mu_vector.entries().iter().map(|&z| principal_phase(z)).collect();
    let delta: Vec<f64> = idft(mu_vector).entries().iter().map(|&z| z.arg()).collect();
    let derived_overlap = 1.0 / moduli.iter().map(|r| 1.0 / (r * r)).sum::<f64>();

    let spec = PartnerSpec {
        moduli,
        phases,
        mu_phases,
        derived_overlap,
    };
    let partner_eigs: Vec<C64> = spec
        .partner_moduli()
        .iter()
        .zip(spec.phases.iter().zip(&delta))
        .map(|(&s, (&a, &dl))| C64::from_polar(s, a + dl))
        .collect();
    let partner = CirculantMatrix::from_eigenvalues(ComplexVector::new(partner_eigs)?)?;
    Ok((partner, spec))
}

/// Circulant with eigenvalues `r_j e^{iα_j}`.
pub fn circulant_from_polar(moduli: &[f64], phases: &[f64]) -> Result<CirculantMatrix> {
    if moduli.len() != phases.len() {
        return Err(MufError::DimensionMismatch {
            expected: moduli.len(),
            found: phases.len(),
        });
    }
    let eigs = moduli.iter().zip(phases).map(|(&r, &a)| C64::from_polar(r, a)).collect();
    CirculantMatrix::from_eigenvalues(ComplexVector::new(eigs)?)
}

pub const D3_FAMILY_MIN: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn d3_family_max() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

/// Real fiducial family in dimension 3:
/// `r₀|0⟩ - (r₀/2 + s/2)|1⟩ - (r₀/2 - s/2)|2⟩` with `s = √(2 - 3r₀²)`,
/// for `1/√2 < r₀ < √(2/3)`.
pub fn real_fiducial_family_d3(r0: f64) -> Result<ComplexVector> {
    if !(r0 > D3_FAMILY_MIN && r0 < d3_family_max()) {
        return Err(MufError::Domain(format!(
            "r0 = {r0} outside (1/sqrt(2), sqrt(2/3))"
        )));
    }
    let s = (2.0 - 3.0 * r0 * r0).max(0.0).sqrt();
    ComplexVector::from_real(&[r0, -(r0 / 2.0 + s / 2.0), -(r0 / 2.0 - s / 2.0)])
}

/// `a₀, a₁, a₂` of the hermitian companion circulants with first rows
/// `(0, a_j, a_j*)`, in closed form.
pub fn d3_family_coefficients(r0: f64) -> [C64; 3] {
    let s3 = 3f64.sqrt();
    let root = (2.0 - 3.0 * r0 * r0).max(0.0).sqrt();
    let t = C64::new((6.0 - 9.0 * r0 * r0).max(0.0).sqrt(), -3.0 * r0);
    [
        C64::new(s3 * r0, root) * 0.5,
        C64::new(3.0, -s3) * t / 12.0,
        -C64::new(3.0, s3) * t / 12.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dft_matrix, matrix_predicates, phase_operator, shift_operator};
    use crate::muf::{certify_muf_system, certify_unbiased, circulant_frame, cross_overlaps};
    use crate::sic::{companion_circulants, qubit_fiducial};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Every pairwise squared overlap of a vector list, brute force.
    fn pairwise(vs: &[ComplexVector]) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                out.push(vs[i].overlap(&vs[j]));
            }
        }
        out
    }

    #[test]
    fn displacement_examples() {
        assert!(wh_displacement(4, 0, 0).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let xz = wh_displacement(2, 1, 1).unwrap();
        let expected = ComplexMatrix::from_row_major(2, vec![c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        assert!(xz.max_abs_diff(&expected) < 1e-15);

        let d = wh_displacement(3, 2, 1).unwrap();
        let x = shift_operator(3).unwrap();
        let z = phase_operator(3).unwrap();
        assert!(d.is_unitary(tol()));
        assert!(d.max_abs_diff(&x.pow(2).matmul(&z)) < 1e-12);

        assert!(wh_displacement(3, 3, 0).is_err());
    }

    #[test]
    fn displace_matches_matrix() {
        let phi = ComplexVector::new(vec![c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1), c(0.2, 0.2)]).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                let m = wh_displacement(4, j, k).unwrap();
                assert!(displace(&phi, j, k).max_abs_diff(&m.apply(&phi)) < 1e-14);
            }
        }
    }

    #[test]
    fn qubit_orbit_is_sic() {
        let orbit = wh_orbit(&qubit_fiducial(), tol()).unwrap();
        assert_eq!(orbit.len(), 4);
        for v in pairwise(orbit.vectors()) {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_vector_orbit_is_not_sic() {
        let orbit = wh_orbit(&ComplexVector::basis(2, 0).unwrap(), tol()).unwrap();
        for v in pairwise(orbit.vectors()) {
            assert!(v.abs() < 1e-15 || (v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn d3_family_orbit_is_sic() {
        for &r0 in &[0.72, 0.75, 0.78, 0.81] {
            let orbit = wh_orbit(&real_fiducial_family_d3(r0).unwrap(), tol()).unwrap();
            let ov = pairwise(orbit.vectors());
            assert_eq!(ov.len(), 36);
            for v in ov {
                assert!((v - 0.25).abs() < 1e-12, "r0={r0}: {v}");
            }
        }
    }

    #[test]
    fn orbit_rejects_non_unit() {
        let v = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(wh_orbit(&v, tol()), Err(MufError::NotUnit { .. })));
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&d| is_prime(d)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn pauli_mub() {
        let bases = mub_prime(2).unwrap();
        assert_eq!(bases.len(), 3);
        let s = 1.0 / 2f64.sqrt();
        // Z eigenbasis is computational; X eigenbasis (+, -) sorted by phase
        assert!(bases[0].vectors()[0].max_abs_diff(&ComplexVector::basis(2, 0).unwrap()) < 1e-12);
        let plus = ComplexVector::from_real(&[s, s]).unwrap();
        assert!(bases[1].vectors()[0].max_abs_diff(&plus) < 1e-12);
        // XZ = [[0,-1],[1,0]] has eigenvalue i on (1, -i)/√2
        let y = ComplexVector::new(vec![c(s, 0.0), c(0.0, -s)]).unwrap();
        assert!(bases[2].vectors()[0].max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn mub_d3_all_cross_overlaps() {
        let bases = mub_prime(3).unwrap();
        for i in 0..bases.len() {
            assert!(bases[i].is_orthonormal_basis(tol()));
            for j in (i + 1)..bases.len() {
                for v in cross_overlaps(&bases[i], &bases[j]).unwrap().into_iter().flatten() {
                    assert!((v - 1.0 / 3.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mub_d5_system() {
        let r = certify_muf_system(&mub_prime(5).unwrap(), tol()).unwrap();
        assert!(r.certified);
        assert!((r.overlap - 0.2).abs() < 1e-12);
    }

    #[test]
    fn mub_rejects_composite() {
        assert!(matches!(mub_prime(6), Err(MufError::UnsupportedDimension { dim: 6, .. })));
    }

    #[test]
    fn qubit_family_mub_point() {
        let p = QubitFamilyParams {
            theta: PI / 8.0,
            eta: 3.0 * PI / 8.0,
            alpha: PI / 2.0,
            beta: PI / 2.0,
        };
        let (m1, m2, valid, overlap) = qubit_family_pair(&p);
        assert!(valid);
        assert!((overlap - 0.5).abs() < 1e-15);
        let r = certify_unbiased(
            &circulant_frame(&m1, "M1", tol()).unwrap(),
            &circulant_frame(&m2, "M2", tol()).unwrap(),
            tol(),
        )
        .unwrap();
        assert!(r.certified && (r.overlap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn qubit_family_sic_point() {
        // α = β and θ - η = arccos(1/√3), with α from the tangent condition
        let gap = (1.0 / 3f64.sqrt()).acos();
        let theta = 0.2;
        let eta = theta - gap;
        let alphas = solve_qubit_alpha(theta, eta, 0.0);
        assert!(alphas.is_empty(), "β = 0 is excluded");
        // with α = β, sin²α = -1/(tan 2θ tan 2η)
        let x = -1.0 / ((2.0 * theta).tan() * (2.0 * eta).tan());
        assert!(x > 0.0 && x <= 1.0);
        let alpha = x.sqrt().asin();
        let p = QubitFamilyParams {
            theta,
            eta,
            alpha,
            beta: alpha,
        };
        let (m1, m2, valid, overlap) = qubit_family_pair(&p);
        assert!(valid);
        assert!((overlap - 1.0 / 3.0).abs() < 1e-12);
        let r = certify_unbiased(
            &circulant_frame(&m1, "M1", tol()).unwrap(),
            &circulant_frame(&m2, "M2", tol()).unwrap(),
            tol(),
        )
        .unwrap();
        assert!(r.certified && (r.overlap - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_family_excluded_angle() {
        let p = QubitFamilyParams {
            theta: 0.0,
            eta: PI / 4.0,
            alpha: 1.0,
            beta: 1.0,
        };
        assert!(!qubit_family_pair(&p).2);
    }

    #[test]
    fn xz_eigenvectors_are_unbiased() {
        for d in 2..=12 {
            let ws = mu_to_identity_and_fourier(d).unwrap();
            assert_eq!(ws.len(), d, "d={d}");
            let xz = wh_displacement(d, 1, 1).unwrap();
            for w in &ws {
                // eigenvector of XZ
                let image = xz.apply(w);
                let ratio = image.get(0) / w.get(0);
                assert!(image.max_abs_diff(&w.scale(ratio)) < 1e-10);
            }
        }
        let ws = mu_to_identity_and_fourier(2).unwrap();
        let target = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(ws.iter().any(|w| w.scale(w.get(0).conj()).max_abs_diff(&target) < 1e-12));
    }

    #[test]
    fn xz_eigenvectors_d3_fourier_flat() {
        // oracle: dense F† applied to each returned vector
        let fd = dft_matrix(3).unwrap().adjoint();
        for w in mu_to_identity_and_fourier(3).unwrap() {
            for z in fd.apply(&w).entries() {
                assert!((z.norm() - 1.0).abs() < 1e-12);
            }
            let unit = w.normalized().unwrap();
            let i3: Vec<ComplexVector> = (0..3).map(|k| ComplexVector::basis(3, k).unwrap()).collect();
            for e in &i3 {
                assert!((unit.overlap(e) - 1.0 / 3.0).abs() < 1e-12);
            }
            for k in 0..3 {
                assert!((unit.overlap(&dft_matrix(3).unwrap().column(k)) - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    fn nu_family(nu: f64) -> (CirculantMatrix, CirculantMatrix, PartnerSpec) {
        let s2 = 2f64.sqrt();
        let m = CirculantMatrix::from_eigenvalues(
            ComplexVector::from_real(&[s2 * nu.cos(), s2 * nu.sin()]).unwrap(),
        )
        .unwrap();
        let w = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let (p, spec) = unbiased_partner(&m, &w, tol()).unwrap();
        (m, p, spec)
    }

    #[test]
    fn partner_qubit_mub() {
        let (m, p, spec) = nu_family(PI / 4.0);
        assert!((spec.derived_overlap - 0.5).abs() < 1e-15);
        let f1 = circulant_frame(&m, "M", tol()).unwrap();
        let f2 = circulant_frame(&p, "M~", tol()).unwrap();
        assert!(f1.is_orthonormal_basis(tol()) && f2.is_orthonormal_basis(tol()));
        let r = certify_unbiased(&f1, &f2, tol()).unwrap();
        assert!(r.certified && (r.overlap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn partner_qubit_sic() {
        let nu = -((3.0 - 3f64.sqrt()) / (3.0 + 3f64.sqrt())).sqrt().atan();
        let (m, p, spec) = nu_family(nu);
        let closed = 2.0 * nu.cos().powi(2) * nu.sin().powi(2);
        assert!((closed - 1.0 / 3.0).abs() < 1e-15);
        assert!((spec.derived_overlap - closed).abs() < 1e-15);
        let mut all = m.columns();
        all.extend(p.columns());
        for v in pairwise(&all) {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_d3_random_moduli() {
        let moduli = [1.2, 0.7, (3.0f64 - 1.44 - 0.49).sqrt()];
        let m = circulant_from_polar(&moduli, &[0.3, 2.0, 4.1]).unwrap();
        for w in mu_to_identity_and_fourier(3).unwrap() {
            let (p, spec) = unbiased_partner(&m, &w, tol()).unwrap();
            let expected = 1.0 / moduli.iter().map(|r| 1.0 / (r * r)).sum::<f64>();
            assert!((spec.derived_overlap - expected).abs() < 1e-15);
            let r = certify_unbiased(
                &circulant_frame(&m, "M", tol()).unwrap(),
                &circulant_frame(&p, "M~", tol()).unwrap(),
                tol(),
            )
            .unwrap();
            assert!(r.certified);
            assert!((r.overlap - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_errors() {
        let singular = CirculantMatrix::from_eigenvalues(ComplexVector::from_real(&[2f64.sqrt(), 0.0]).unwrap()).unwrap();
        let w = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(matches!(unbiased_partner(&singular, &w, tol()), Err(MufError::NotAFrame { .. })));

        let (m, _, _) = nu_family(0.3);
        let bad = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(unbiased_partner(&m, &bad, tol()), Err(MufError::InvalidInput(_))));
    }

    #[test]
    fn d3_family_vector() {
        let v = real_fiducial_family_d3(0.75).unwrap();
        assert!(v.is_unit(tol()));
        assert_eq!(v.max_imag(), 0.0);

        let r0 = D3_FAMILY_MIN + 1e-13;
        let v = real_fiducial_family_d3(r0).unwrap();
        assert!(v.is_unit(tol()));
        assert!(v.get(2).norm() < 1e-6);

        assert!(matches!(real_fiducial_family_d3(0.7), Err(MufError::Domain(_))));
        assert!(matches!(real_fiducial_family_d3(0.9), Err(MufError::Domain(_))));
    }

    #[test]
    fn d3_family_companions_match_closed_form() {
        for &r0 in &[0.72, 0.75, 0.8] {
            let ms = companion_circulants(&real_fiducial_family_d3(r0).unwrap()).unwrap();
            let a = d3_family_coefficients(r0);
            for (j, m) in ms.iter().enumerate() {
                let row = m.first_row();
                assert!(row.get(0).norm() < 1e-12);
                assert!((row.get(1) - a[j]).norm() < 1e-12, "r0={r0} j={j}");
                assert!((row.get(2) - a[j].conj()).norm() < 1e-12);
                assert!(matrix_predicates(&m.materialize(), tol()).hermitian);
            }
        }
    }
}
