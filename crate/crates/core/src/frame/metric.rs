use crate::linalg::Mat;
use crate::scalar::{AlgNum, Scalar};

use super::{FrameError, FrameVector};

/// Constant frame components `g_ij` of a semi-Riemannian metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricComponents {
    g: Mat<AlgNum>,
    inverse: Mat<AlgNum>,
    signature: (usize, usize),
}

impl MetricComponents {
    pub fn new(g: Mat<AlgNum>) -> Result<Self, FrameError> {
        if !g.is_square() {
            return Err(FrameError::DimensionMismatch { expected: g.rows(), got: g.cols() });
        }
        if !g.is_symmetric() {
            return Err(FrameError::AsymmetricMetric);
        }
        let inverse = g.inverse().ok_or(FrameError::DegenerateMetric)?;
        let (p, q, _) = g.inertia();
        Ok(MetricComponents { g, inverse, signature: (p, q) })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &Mat<AlgNum> {
        &self.g
    }

    pub fn inverse(&self) -> &Mat<AlgNum> {
        &self.inverse
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgNum {
        self.g.get(i, j)
    }

    /// `(positive, negative)` counts, computed exactly.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// `g(U, V)`.
    pub fn pair(&self, u: &FrameVector, v: &FrameVector) -> Scalar {
        let lowered = self.lower(v);
        u.components().iter().zip(&lowered).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
    }

    /// The covector `g(·, V)` in frame components.
    pub fn lower(&self, v: &FrameVector) -> Vec<Scalar> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| !self.g.get(i, j).is_zero())
                    .map(|j| v.component(j).scale(self.g.get(i, j)))
                    .sum()
            })
            .collect()
    }

    /// Raises a covector with the exact inverse metric.
    pub fn raise(&self, w: &[Scalar]) -> FrameVector {
        let n = self.dim();
        FrameVector::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| !self.inverse.get(i, j).is_zero())
                        .map(|j| w[j].scale(self.inverse.get(i, j)))
                        .sum()
                })
                .collect(),
        )
    }
}
