//! Finite frames of unit vectors, the frame operator and frame bounds.

use crate::error::{MufError, Result};
use crate::linalg::{check_dim, ComplexMatrix, ComplexVector, Tolerance, C64};

/// Smallest eigenvalue of the frame operator below which the vectors are
/// considered not to span the space.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<ComplexVector>,
    label: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    Parseval,
    Tight,
    Generic,
}

impl Frame {
    /// Validates unit norms, `n ≥ d`, and spanning. Vectors are never
    /// renormalized.
    pub fn new(vectors: Vec<ComplexVector>, label: impl Into<String>, tol: Tolerance) -> Result<Self> {
        let dim = vectors.first().map(|v| v.dim()).ok_or(MufError::InvalidDimension(0))?;
        check_dim(dim)?;
        for (index, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(MufError::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if !v.is_unit(tol) {
                return Err(MufError::NotUnit { index, norm: v.norm() });
            }
        }
        if vectors.len() < dim {
            return Err(MufError::NotAFrame { lower: 0.0 });
        }
        let frame = Self {
            dim,
            vectors,
            label: label.into(),
        };
        frame_bounds(&frame)?;
        Ok(frame)
    }

    pub fn from_columns(m: &ComplexMatrix, label: impl Into<String>, tol: Tolerance) -> Result<Self> {
        Self::new(m.columns(), label, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same frame with every vector mapped through `u`.
    pub fn transformed(&self, u: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        Self::new(
            self.vectors.iter().map(|v| u.apply(v)).collect(),
            self.label.clone(),
            tol,
        )
    }

    /// True iff the vectors are pairwise orthogonal (and so, with `n = d`,
    /// an orthonormal basis).
    pub fn is_orthonormal_basis(&self, tol: Tolerance) -> bool {
        if self.len() != self.dim {
            return false;
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.vectors[i].overlap(&self.vectors[j]) > tol.eps {
                    return false;
                }
            }
        }
        true
    }
}

/// `S = Σ_i |φ_i⟩⟨φ_i|`.
pub fn frame_operator(f: &Frame) -> ComplexMatrix {
    let d = f.dim();
    let mut s = vec![C64::new(0.0, 0.0); d * d];
    for v in f.vectors() {
        let e = v.entries();
        for r in 0..d {
            for c in 0..d {
                s[r * d + c] += e[r] * e[c].conj();
            }
        }
    }
    ComplexMatrix::from_row_major(d, s).expect("square by construction")
}

pub fn frame_bounds(f: &Frame) -> Result<FrameBounds> {
    let ev = frame_operator(f).hermitian_eigenvalues();
    let lower = ev[0].max(0.0);
    let upper = *ev.last().expect("nonempty spectrum");
    if lower <= RANK_TOL {
        return Err(MufError::NotAFrame { lower });
    }
    Ok(FrameBounds { lower, upper })
}

pub fn classify(f: &Frame, tol: Tolerance) -> Result<FrameClass> {
    let b = frame_bounds(f)?;
    Ok(if (b.upper - b.lower).abs() > tol.eps {
        FrameClass::Generic
    } else if (b.lower - 1.0).abs() <= tol.eps {
        FrameClass::Parseval
    } else {
        FrameClass::Tight
    })
}
