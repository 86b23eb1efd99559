//! Dense complex linear algebra over `f64`: vectors, square matrices, the
//! unitary DFT, circulant matrices and the Weyl-Heisenberg generators.
//!
//! Every value here is immutable after construction. Eigensolvers are backed
//! by `nalgebra`; everything the constellation code relies on algebraically
//! (DFT, circulant spectra, shift and phase operators) is computed in closed
//! form.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{MufError, Result};

pub type C64 = Complex64;

/// Largest dimension accepted by the constructors in this crate.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Environment variable overriding the default tolerance.
pub const EPS_ENV: &str = "MUFKIT_EPS";

/// Absolute tolerance used for every equality test (moduli squared and
/// matrix residuals).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-10;

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(MufError::InvalidInput(format!(
                "tolerance must be positive and finite, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    /// Default tolerance, honouring `MUFKIT_EPS` when it parses to a valid value.
    pub fn from_env() -> Self {
        std::env::var(EPS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .and_then(|e| Self::new(e).ok())
            .unwrap_or_default()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            eps: self.eps * factor,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

pub fn check_dim(d: usize) -> Result<()> {
    check_dim_with_limit(d, DEFAULT_MAX_DIM)
}

pub fn check_dim_with_limit(d: usize, limit: usize) -> Result<()> {
    if d == 0 {
        return Err(MufError::InvalidDimension(d));
    }
    if d > limit {
        return Err(MufError::DimensionTooLarge { dim: d, limit });
    }
    Ok(())
}

/// `exp(2πi/d)`.
pub fn omega(d: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// `ω^k` computed from the reduced exponent, so large powers do not
/// accumulate rounding.
pub fn omega_pow(d: usize, k: i64) -> C64 {
    let r = k.rem_euclid(d as i64);
    C64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
}

/// Phase of `z` mapped to `[0, 2π)`.
pub fn principal_phase(z: C64) -> f64 {
    let a = z.arg();
    let a = if a < 0.0 { a + 2.0 * PI } else { a };
    if a >= 2.0 * PI {
        0.0
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(MufError::InvalidDimension(0));
        }
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            entries: vec![C64::new(0.0, 0.0); d.max(1)],
        }
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        check_dim(d)?;
        if k >= d {
            return Err(MufError::IndexOutOfRange(format!("basis index {k} in dimension {d}")));
        }
        let mut v = Self::zeros(d);
        v.entries[k] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn get(&self, i: usize) -> C64 {
        self.entries[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self, tol: Tolerance) -> bool {
        (self.norm() - 1.0).abs() <= tol.eps
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(MufError::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Squared moduli of the entries.
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Rescales by a unit phase so the first entry with modulus above `cutoff`
    /// is real and positive.
    pub fn with_canonical_phase(&self, cutoff: f64) -> Self {
        match self.entries.iter().find(|z| z.norm() > cutoff) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn from_row_major(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(MufError::InvalidDimension(0));
        }
        if entries.len() != dim * dim {
            return Err(MufError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[ComplexVector]) -> Result<Self> {
        let d = cols.len();
        if d == 0 {
            return Err(MufError::InvalidDimension(0));
        }
        for c in cols {
            if c.dim() != d {
                return Err(MufError::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
        }
        Ok(Self::from_fn(d, |r, c| cols[c].get(r)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { C64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r * self.dim + c]
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        ComplexVector {
            entries: self.entries[r * self.dim..(r + 1) * self.dim].to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.dim).map(|r| self.get(r, c)).collect(),
        }
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        (0..self.dim).map(|c| self.column(c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Self { dim: d, entries: out }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "matrix/vector dimension mismatch");
        ComplexVector {
            entries: (0..self.dim)
                .map(|r| {
                    self.entries[r * self.dim..(r + 1) * self.dim]
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            n >>= 1;
        }
        acc
    }

    /// Largest entry modulus; used as the residual norm throughout.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
            <= tol.eps
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = self.to_nalgebra();
        // symmetrize to suppress rounding asymmetry
        let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenpairs of a normal matrix from its complex Schur form. For normal
    /// input the triangular factor is diagonal and the Schur vectors are an
    /// orthonormal eigenbasis, including inside degenerate eigenspaces.
    pub fn normal_eigen(&self) -> Vec<(C64, ComplexVector)> {
        let schur = Schur::new(self.to_nalgebra());
        let (q, t) = schur.unpack();
        (0..self.dim)
            .map(|k| {
                let v = ComplexVector {
                    entries: q.column(k).iter().copied().collect(),
                };
                (t[(k, k)], v)
            })
            .collect()
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<&ComplexVector> for &ComplexMatrix {
    type Output = ComplexVector;
    fn mul(self, rhs: &ComplexVector) -> ComplexVector {
        self.apply(rhs)
    }
}

/// Unitary DFT, `F[j][k] = ω^{jk}/√d`.
pub fn dft_matrix(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let s = 1.0 / (d as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d, |j, k| omega_pow(d, (j * k) as i64) * s))
}

/// `F·v` without materializing `F`.
pub fn dft(v: &ComplexVector) -> ComplexVector {
    dft_signed(v, 1)
}

/// `F†·v` without materializing `F`.
pub fn idft(v: &ComplexVector) -> ComplexVector {
    dft_signed(v, -1)
}

fn dft_signed(v: &ComplexVector, sign: i64) -> ComplexVector {
    let d = v.dim();
    let s = 1.0 / (d as f64).sqrt();
    let entries = (0..d)
        .map(|j| {
            v.entries()
                .iter()
                .enumerate()
                .map(|(k, z)| omega_pow(d, sign * (j * k) as i64) * z)
                .sum::<C64>()
                * s
        })
        .collect();
    ComplexVector { entries }
}

/// Shift `X = Σ_k |k+1 mod d⟩⟨k|`.
pub fn shift_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    Ok(ComplexMatrix::from_fn(d, |r, c| {
        if r == (c + 1) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Phase `Z = Σ_k ω^k |k⟩⟨k|`.
pub fn phase_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let diag: Vec<C64> = (0..d).map(|k| omega_pow(d, k as i64)).collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// Circulant matrix: row `r` is the cyclic right shift of row `r-1`, so
/// `C[r][c] = μ[(c - r) mod d]` for first row `μ`.
///
/// The eigenvalue vector is tied to the first row by `λ = √d·F·μ`, which makes
/// `C = F·diag(λ)·F†` hold exactly; equivalently `λ = √d·F†·ν` with `ν` the
/// first column. The ordering of `λ` is therefore fixed algebraically.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    first_row: ComplexVector,
    eigenvalues: ComplexVector,
}

impl CirculantMatrix {
    pub fn from_first_row(mu: ComplexVector) -> Result<Self> {
        check_dim(mu.dim())?;
        let sd = (mu.dim() as f64).sqrt();
        let eigenvalues = dft(&mu).scale(C64::new(sd, 0.0));
        Ok(Self {
            first_row: mu,
            eigenvalues,
        })
    }

    /// Inverse of the spectral map: `μ = F†·λ/√d`.
    pub fn from_eigenvalues(lambda: ComplexVector) -> Result<Self> {
        check_dim(lambda.dim())?;
        let sd = (lambda.dim() as f64).sqrt();
        let first_row = idft(&lambda).scale(C64::new(1.0 / sd, 0.0));
        Ok(Self {
            first_row,
            eigenvalues: lambda,
        })
    }

    pub fn dim(&self) -> usize {
        self.first_row.dim()
    }

    pub fn first_row(&self) -> &ComplexVector {
        &self.first_row
    }

    pub fn eigenvalues(&self) -> &ComplexVector {
        &self.eigenvalues
    }

    pub fn first_column(&self) -> ComplexVector {
        let d = self.dim();
        ComplexVector {
            entries: (0..d).map(|r| self.first_row.get((d - r) % d)).collect(),
        }
    }

    pub fn materialize(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |r, c| self.first_row.get((c + d - r) % d))
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        self.materialize().columns()
    }

    /// `F·diag(λ)·F†`, the spectral reconstruction.
    pub fn spectral_reconstruction(&self) -> ComplexMatrix {
        let f = dft_matrix(self.dim()).expect("dimension already validated");
        f.matmul(&ComplexMatrix::diagonal(self.eigenvalues.entries()))
            .matmul(&f.adjoint())
    }

    /// Column norms all equal `‖μ‖`; unit columns iff `‖μ‖ = 1`.
    pub fn has_unit_columns(&self, tol: Tolerance) -> bool {
        self.first_row.is_unit(tol)
    }

    pub fn adjoint(&self) -> Self {
        // adjoint of a circulant is circulant with conjugated eigenvalues
        Self::from_eigenvalues(self.eigenvalues.conj()).expect("dimension already validated")
    }

    /// Product of two circulants, computed spectrally.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(MufError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::from_eigenvalues(self.eigenvalues.hadamard(&other.eigenvalues))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixPredicates {
    pub hermitian: bool,
    pub normal: bool,
    pub unitary: bool,
}

pub fn matrix_predicates(m: &ComplexMatrix, tol: Tolerance) -> MatrixPredicates {
    let adj = m.adjoint();
    let hermitian = m.max_abs_diff(&adj) <= tol.eps;
    let normal = adj.matmul(m).max_abs_diff(&m.matmul(&adj)) <= tol.eps;
    let unitary = m.is_unitary(tol);
    MatrixPredicates {
        hermitian,
        normal,
        unitary,
    }
}
