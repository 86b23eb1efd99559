//! Mutual unbiasedness of frames: pairwise and systemwide certification,
//! overlap-bound diagnostics, Gram blocks of circulant systems and the
//! correspondence between circulant MUF and equiangular eigenvalue lines.

use crate::error::{MufError, Result};
use crate::frames::{frame_bounds, Frame};
use crate::linalg::{CirculantMatrix, ComplexMatrix, ComplexVector, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct PairDeviation {
    pub pair: (usize, usize),
    /// Mean squared overlap of this pair alone.
    pub mean: f64,
    /// Largest deviation of this pair's squared overlaps from the common overlap.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MufReport {
    /// Common overlap `c`, the mean of every cross squared overlap.
    pub overlap: f64,
    pub max_deviation: f64,
    pub pair_count: usize,
    pub pairs: Vec<PairDeviation>,
    /// `max A ≤ c·n ≤ min B`; `None` when the frames differ in cardinality.
    pub bounds_ok: Option<bool>,
    /// When some frame is tight, whether `c = 1/d`.
    pub tight_implies_inv_d: Option<bool>,
    pub certified: bool,
}

/// Squared moduli of all inner products between the two frames' vectors.
pub fn cross_overlaps(f1: &Frame, f2: &Frame) -> Result<Vec<Vec<f64>>> {
    if f1.dim() != f2.dim() {
        return Err(MufError::DimensionMismatch {
            expected: f1.dim(),
            found: f2.dim(),
        });
    }
    Ok(f1
        .vectors()
        .iter()
        .map(|a| f2.vectors().iter().map(|b| a.overlap(b)).collect())
        .collect())
}

pub fn certify_unbiased(f1: &Frame, f2: &Frame, tol: Tolerance) -> Result<MufReport> {
    certify_frames(&[f1, f2], tol)
}

pub fn certify_muf_system(frames: &[Frame], tol: Tolerance) -> Result<MufReport> {
    let refs: Vec<&Frame> = frames.iter().collect();
    certify_frames(&refs, tol)
}

fn certify_frames(frames: &[&Frame], tol: Tolerance) -> Result<MufReport> {
    if frames.len() < 2 {
        return Err(MufError::InvalidInput("at least two frames are required".into()));
    }
    let d = frames[0].dim();
    for f in frames {
        if f.dim() != d {
            return Err(MufError::DimensionMismatch {
                expected: d,
                found: f.dim(),
            });
        }
    }

    let mut blocks = Vec::new();
    for j in 0..frames.len() {
        for k in (j + 1)..frames.len() {
            blocks.push(((j, k), cross_overlaps(frames[j], frames[k])?));
        }
    }

    let (sum, count) = blocks
        .iter()
        .flat_map(|(_, b)| b.iter().flatten())
        .fold((0.0, 0usize), |(s, n), &x| (s + x, n + 1));
    let overlap = sum / count as f64;

    let pairs: Vec<PairDeviation> = blocks
        .iter()
        .map(|(pair, b)| {
            let vals: Vec<f64> = b.iter().flatten().copied().collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let max_deviation = vals.iter().map(|x| (x - overlap).abs()).fold(0.0, f64::max);
            PairDeviation {
                pair: *pair,
                mean,
                max_deviation,
            }
        })
        .collect();
    let max_deviation = pairs.iter().map(|p| p.max_deviation).fold(0.0, f64::max);

    let n = frames[0].len();
    let (bounds_ok, tight_implies_inv_d) = if frames.iter().all(|f| f.len() == n) {
        let bounds = frames
            .iter()
            .map(|f| frame_bounds(f))
            .collect::<Result<Vec<_>>>()?;
        let max_lower = bounds.iter().map(|b| b.lower).fold(f64::MIN, f64::max);
        let min_upper = bounds.iter().map(|b| b.upper).fold(f64::MAX, f64::min);
        let cn = overlap * n as f64;
        let slack = tol.eps * n as f64;
        let ok = max_lower <= cn + slack && cn <= min_upper + slack;
        let any_tight = bounds.iter().any(|b| (b.upper - b.lower).abs() <= tol.eps);
        let inv_d = any_tight.then(|| (overlap - 1.0 / d as f64).abs() <= tol.eps);
        (Some(ok), inv_d)
    } else {
        (None, None)
    };

    let certified = max_deviation <= tol.eps && overlap > tol.eps;
    Ok(MufReport {
        overlap,
        max_deviation,
        pair_count: pairs.len(),
        pairs,
        bounds_ok,
        tight_implies_inv_d,
        certified,
    })
}

/// `K^(jk) = M_j†·M_k` for a pair of circulant frames.
#[derive(Debug, Clone, PartialEq)]
pub struct GramBlock {
    pub source_pair: (usize, usize),
    pub matrix: ComplexMatrix,
    /// Largest deviation of any row from the cyclic shift of the first row.
    pub circulant_residual: f64,
}

impl GramBlock {
    /// Common squared modulus of the entries, if there is one.
    pub fn constant_modulus(&self, tol: Tolerance) -> Option<f64> {
        let vals: Vec<f64> = self.matrix.entries().iter().map(|z| z.norm_sqr()).collect();
        let c = vals.iter().sum::<f64>() / vals.len() as f64;
        let dev = vals.iter().map(|x| (x - c).abs()).fold(0.0, f64::max);
        (dev <= tol.eps && c > tol.eps).then_some(c)
    }

    pub fn is_full_rank(&self) -> bool {
        let k = &self.matrix;
        k.adjoint().matmul(k).hermitian_eigenvalues()[0] > crate::frames::RANK_TOL
    }

    pub fn as_circulant(&self) -> Result<CirculantMatrix> {
        CirculantMatrix::from_first_row(self.matrix.row(0))
    }
}

fn check_unit_columns(ms: &[CirculantMatrix], tol: Tolerance) -> Result<usize> {
    let d = ms.first().map(|m| m.dim()).ok_or(MufError::InvalidDimension(0))?;
    for (index, m) in ms.iter().enumerate() {
        if m.dim() != d {
            return Err(MufError::DimensionMismatch {
                expected: d,
                found: m.dim(),
            });
        }
        if !m.has_unit_columns(tol) {
            return Err(MufError::NotUnit {
                index,
                norm: m.first_row().norm(),
            });
        }
    }
    Ok(d)
}

/// All `j < k` Gram blocks, with the circulant structure of each product
/// measured.
pub fn gram_blocks(ms: &[CirculantMatrix], tol: Tolerance) -> Result<Vec<GramBlock>> {
    let d = check_unit_columns(ms, tol)?;
    let dense: Vec<ComplexMatrix> = ms.iter().map(|m| m.materialize()).collect();
    let mut out = Vec::new();
    for j in 0..ms.len() {
        for k in (j + 1)..ms.len() {
            let matrix = dense[j].adjoint().matmul(&dense[k]);
            let reference = CirculantMatrix::from_first_row(matrix.row(0))?.materialize();
            let circulant_residual = matrix.max_abs_diff(&reference);
            debug_assert_eq!(matrix.dim(), d);
            out.push(GramBlock {
                source_pair: (j, k),
                matrix,
                circulant_residual,
            });
        }
    }
    Ok(out)
}

/// `|⟨λ_j/‖λ_j‖, λ_k/‖λ_k‖⟩|²` for every pair of eigenvalue vectors.
pub fn eigen_line_overlaps(ms: &[CirculantMatrix]) -> Vec<Vec<f64>> {
    let lines: Vec<ComplexVector> = ms
        .iter()
        .map(|m| m.eigenvalues().normalized().unwrap_or_else(|_| m.eigenvalues().clone()))
        .collect();
    lines
        .iter()
        .map(|a| lines.iter().map(|b| a.overlap(b)).collect())
        .collect()
}

/// `|λ_j·λ_k|²` without normalization.
pub fn eigen_inner_products_sqr(ms: &[CirculantMatrix]) -> Vec<Vec<f64>> {
    ms.iter()
        .map(|a| ms.iter().map(|b| a.eigenvalues().overlap(b.eigenvalues())).collect())
        .collect()
}

/// Max deviation in `conj(λ(M_j)) ∘ λ(M_k) = λ(M_j†·M_k)`, the right-hand side
/// computed from the dense product.
pub fn hadamard_identity_residual(mj: &CirculantMatrix, mk: &CirculantMatrix) -> Result<f64> {
    let k = mj.materialize().adjoint().matmul(&mk.materialize());
    let kc = CirculantMatrix::from_first_row(k.row(0))?;
    let lhs = mj.eigenvalues().conj().hadamard(mk.eigenvalues());
    Ok(lhs.max_abs_diff(kc.eigenvalues()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub applicable: bool,
    /// Upper limit on `m`, when the bound is of that form.
    pub limit: Option<f64>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityReport {
    pub m: usize,
    pub d: usize,
    pub c: f64,
    pub checks: Vec<BoundCheck>,
}

impl CardinalityReport {
    pub fn violated(&self) -> bool {
        self.checks.iter().any(|b| b.applicable && !b.satisfied)
    }
}

/// Equiangular-line cardinality bounds for `m` circulant MUF in dimension `d`
/// with overlap `c`. Advisory only.
pub fn cardinality_bounds(m: usize, d: usize, c: f64, hermitian_all: bool) -> CardinalityReport {
    const INT_TOL: f64 = 1e-9;
    let mf = m as f64;
    let df = d as f64;
    let mut checks = vec![BoundCheck {
        name: "m <= d^2",
        applicable: true,
        limit: Some(df * df),
        satisfied: mf <= df * df,
    }];

    let herm_limit = df * (df + 1.0) / 2.0;
    checks.push(BoundCheck {
        name: "m <= d(d+1)/2",
        applicable: hermitian_all,
        limit: Some(herm_limit),
        satisfied: mf <= herm_limit,
    });

    let inv_sqrt = if c > 0.0 { 1.0 / c.sqrt() } else { f64::NAN };
    checks.push(BoundCheck {
        name: "m >= 2d implies 1/sqrt(c) integer",
        applicable: hermitian_all && m >= 2 * d && c > 0.0,
        limit: None,
        satisfied: (inv_sqrt - inv_sqrt.round()).abs() <= INT_TOL,
    });

    let relative_limit = df * (1.0 - c) / (1.0 - df * c);
    checks.push(BoundCheck {
        name: "c <= 1/(d+2) implies m <= d(1-c)/(1-dc)",
        applicable: hermitian_all && c > 0.0 && c <= 1.0 / (df + 2.0),
        limit: Some(relative_limit),
        satisfied: mf <= relative_limit + INT_TOL,
    });

    checks.push(BoundCheck {
        name: "c <= 1/d^2 implies m <= d+1",
        applicable: hermitian_all && c > 0.0 && c <= 1.0 / (df * df),
        limit: Some(df + 1.0),
        satisfied: mf <= df + 1.0,
    });

    CardinalityReport { m, d, c, checks }
}

/// Dense unitary applied to every vector of every frame; used to express the
/// unitary invariance of the reports.
pub fn transform_system(frames: &[Frame], u: &ComplexMatrix, tol: Tolerance) -> Result<Vec<Frame>> {
    frames.iter().map(|f| f.transformed(u, tol)).collect()
}

/// Column frame of a circulant matrix.
pub fn circulant_frame(m: &CirculantMatrix, label: impl Into<String>, tol: Tolerance) -> Result<Frame> {
    Frame::new(m.columns(), label, tol)
}
