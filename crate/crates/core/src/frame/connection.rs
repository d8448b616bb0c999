use crate::scalar::{AlgNum, Scalar};

use super::{FrameSpec, FrameVector, MetricComponents};

/// `∇_{e_i} e_j = Σ Γ^k_ij e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    dim: usize,
    columns: Vec<FrameVector>,
}

impl ConnectionCoefficients {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{e_i} e_j`.
    pub fn nabla(&self, i: usize, j: usize) -> &FrameVector {
        &self.columns[i * self.dim + j]
    }

    /// `Γ^k_ij`.
    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.nabla(i, j).component(k)
    }
}

/// Levi-Civita connection of a metric with constant frame components, from
/// Koszul's formula. Because every `g(e_a, e_b)` is constant only the bracket
/// terms survive:
/// `2 g(∇_i e_j, e_k) = −g(e_i, [e_j,e_k]) − g(e_j, [e_i,e_k]) + g(e_k, [e_i,e_j])`.
pub fn levi_civita(frame: &FrameSpec, g: &MetricComponents) -> ConnectionCoefficients {
    let dim = frame.dim();
    assert_eq!(dim, g.dim(), "metric and frame dimensions differ");
    let half = AlgNum::from_ratio(1, 2);
    // g(e_a, [e_b, e_c]) for all a, b, c
    let lowered: Vec<Vec<Scalar>> = (0..dim * dim)
        .map(|bc| {
            let (b, c) = (bc / dim, bc % dim);
            g.lower(&frame.lie_bracket(b, c))
        })
        .collect();
    let gb = |a: usize, b: usize, c: usize| &lowered[b * dim + c][a];
    let mut columns = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let low: Vec<Scalar> = (0..dim)
                .map(|k| (gb(k, i, j) - gb(i, j, k) - gb(j, i, k)).scale(&half))
                .collect();
            columns.push(g.raise(&low));
        }
    }
    ConnectionCoefficients { dim, columns }
}

/// `∇_{e_i} V = Σ e_i(f^k) e_k + Σ f^k ∇_{e_i} e_k`.
pub fn covariant_derivative(gamma: &ConnectionCoefficients, frame: &FrameSpec, i: usize, v: &FrameVector) -> FrameVector {
    let dim = frame.dim();
    let mut out = FrameVector::new((0..dim).map(|k| frame.directional(i, v.component(k))).collect());
    for k in 0..dim {
        out.add_scaled(gamma.nabla(i, k), v.component(k));
    }
    out
}

/// `∇_W V` for a frame vector `W`.
pub fn covariant_along(gamma: &ConnectionCoefficients, frame: &FrameSpec, w: &FrameVector, v: &FrameVector) -> FrameVector {
    let mut out = FrameVector::zero(frame.dim());
    for a in 0..frame.dim() {
        let wa = w.component(a);
        if !wa.is_zero() {
            out.add_scaled(&covariant_derivative(gamma, frame, a, v), wa);
        }
    }
    out
}

/// `R(e_i, e_j) e_k = Σ R^l_ijk e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    values: Vec<FrameVector>,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R(e_i, e_j) e_k`.
    pub fn apply(&self, i: usize, j: usize, k: usize) -> &FrameVector {
        &self.values[(i * self.dim + j) * self.dim + k]
    }

    /// `R^l_ijk`.
    pub fn component(&self, l: usize, i: usize, j: usize, k: usize) -> &Scalar {
        self.apply(i, j, k).component(l)
    }

    /// `g(R(e_i, e_j) e_k, e_l)`.
    pub fn lowered(&self, g: &MetricComponents, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        g.pair(self.apply(i, j, k), &FrameVector::basis(self.dim, l))
    }

    /// `R(X, Y) Z` for arbitrary frame vectors, by trilinearity.
    pub fn apply_vectors(&self, x: &FrameVector, y: &FrameVector, z: &FrameVector) -> FrameVector {
        let mut out = FrameVector::zero(self.dim);
        for i in 0..self.dim {
            if x.component(i).is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y.component(j).is_zero() || i == j {
                    continue;
                }
                let xy = x.component(i) * y.component(j);
                for k in 0..self.dim {
                    if z.component(k).is_zero() {
                        continue;
                    }
                    out.add_scaled(self.apply(i, j, k), &(&xy * z.component(k)));
                }
            }
        }
        out
    }
}

/// `R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z` on all frame triples.
pub fn curvature(frame: &FrameSpec, g: &MetricComponents, gamma: &ConnectionCoefficients) -> CurvatureTensor {
    let dim = frame.dim();
    assert_eq!(dim, g.dim(), "metric and frame dimensions differ");
    let mut values = vec![FrameVector::zero(dim); dim * dim * dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let bracket = frame.lie_bracket(i, j);
            for k in 0..dim {
                let first = covariant_derivative(gamma, frame, i, gamma.nabla(j, k));
                let second = covariant_derivative(gamma, frame, j, gamma.nabla(i, k));
                let third = covariant_along(gamma, frame, &bracket, &FrameVector::basis(dim, k));
                let r = first.sub(&second).sub(&third);
                values[(j * dim + i) * dim + k] = r.neg();
                values[(i * dim + j) * dim + k] = r;
            }
        }
    }
    CurvatureTensor { dim, values }
}
