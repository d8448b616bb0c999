use crate::linalg::Mat;
use crate::scalar::{AlgNum, Scalar};

use super::{FrameSpec, FrameVector, MetricComponents};

/// `(L_V g)(e_i, e_j) = V(g_ij) − g([V, e_i], e_j) − g(e_i, [V, e_j])`.
/// The first term vanishes because the metric components are constant.
pub fn lie_derivative_metric(frame: &FrameSpec, g: &MetricComponents, v: &FrameVector) -> Mat<Scalar> {
    let dim = frame.dim();
    let lowered: Vec<Vec<Scalar>> =
        (0..dim).map(|i| g.lower(&frame.bracket_vectors(v, &FrameVector::basis(dim, i)))).collect();
    Mat::from_fn(dim, dim, |i, j| -(&lowered[i][j] + &lowered[j][i]))
}

/// `dη(e_i, e_j) = ½ (e_i(η_j) − e_j(η_i) − η([e_i, e_j]))`.
///
/// The ½ normalisation is deliberate: with it the paracontact condition
/// reads `dη = Φ` with `Φ(X, Y) = g(X, φY)`.
pub fn exterior_derivative_eta(frame: &FrameSpec, eta: &[Scalar]) -> Mat<Scalar> {
    let dim = frame.dim();
    assert_eq!(eta.len(), dim, "covector has the wrong length");
    let half = AlgNum::from_ratio(1, 2);
    let mut out = Mat::from_fn(dim, dim, |_, _| Scalar::zero());
    for i in 0..dim {
        for j in i + 1..dim {
            let b = frame.lie_bracket(i, j);
            let eta_b: Scalar = (0..dim).filter(|&k| !eta[k].is_zero()).map(|k| &eta[k] * b.component(k)).sum();
            let v = (frame.directional(i, &eta[j]) - frame.directional(j, &eta[i]) - eta_b).scale(&half);
            out.set(j, i, -&v);
            out.set(i, j, v);
        }
    }
    out
}
