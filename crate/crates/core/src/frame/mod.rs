//! Anholonomic frames and the calculus built on them.
//!
//! A frame is either a Lie algebra given by structure constants
//! `[e_i, e_j] = Σ C^k_ij e_k`, or a set of vector fields on a coordinate
//! chart whose coefficients are [`Scalar`]s. Index 0 is always the Reeb
//! field ξ.

mod connection;
mod forms;
mod metric;

use std::fmt;

use thiserror::Error;

use crate::linalg::{scalar_adjugate, scalar_determinant, Mat};
use crate::scalar::{AlgNum, Chart, Scalar};

pub use connection::{covariant_along, covariant_derivative, curvature, levi_civita, ConnectionCoefficients, CurvatureTensor};
pub use forms::{exterior_derivative_eta, lie_derivative_metric};
pub use metric::MetricComponents;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame dimension must be odd, got {0}")]
    EvenDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate frame label '{0}'")]
    DuplicateLabel(String),
    #[error("bracket [e{0}, e{0}] must vanish")]
    SelfBracket(usize),
    #[error("bracket [e{0}, e{1}] given twice with inconsistent values")]
    ConflictingBracket(usize, usize),
    #[error("frame index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("frame vectors are linearly dependent on the whole chart")]
    DegenerateFrame,
    #[error("frame determinant {0} is not invertible in the coefficient ring")]
    NonUnitDeterminant(String),
    #[error("coefficient {0} leaves the chart")]
    OffChart(String),
    #[error("metric must be symmetric")]
    AsymmetricMetric,
    #[error("metric is degenerate")]
    DegenerateMetric,
}

/// Expansion `Σ f^k e_k` of a vector field in the frame.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FrameVector {
    components: Vec<Scalar>,
}

impl FrameVector {
    pub fn new(components: Vec<Scalar>) -> Self {
        FrameVector { components }
    }

    pub fn from_constants(components: &[AlgNum]) -> Self {
        FrameVector { components: components.iter().cloned().map(Scalar::constant).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        FrameVector { components: vec![Scalar::zero(); dim] }
    }

    /// The frame vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = FrameVector::zero(dim);
        v.components[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Scalar {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(Scalar::is_constant)
    }

    pub fn add(&self, rhs: &FrameVector) -> FrameVector {
        FrameVector { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &FrameVector) -> FrameVector {
        FrameVector { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> FrameVector {
        FrameVector { components: self.components.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, f: &Scalar) -> FrameVector {
        FrameVector { components: self.components.iter().map(|a| a * f).collect() }
    }

    pub fn scale_const(&self, c: &AlgNum) -> FrameVector {
        FrameVector { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub(crate) fn add_scaled(&mut self, rhs: &FrameVector, f: &Scalar) {
        if f.is_zero() {
            return;
        }
        for (a, b) in self.components.iter_mut().zip(&rhs.components) {
            if !b.is_zero() {
                *a += &(b * f);
            }
        }
    }

    /// Applies a constant endomorphism given by its frame matrix.
    pub fn transform(&self, m: &Mat<AlgNum>) -> FrameVector {
        let n = self.dim();
        FrameVector {
            components: (0..n)
                .map(|k| (0..n).map(|j| self.components[j].scale(m.get(k, j))).sum())
                .collect(),
        }
    }

    /// Renders as `c0*label0 + c1*label1 + ...`.
    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (k, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let single = c.len() == 1;
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            let coeff = if body == "1" {
                String::new()
            } else if single {
                format!("{body}*")
            } else {
                format!("({body})*")
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&coeff);
            out.push_str(&labels[k]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FrameKind {
    /// Left-invariant frame of a Lie algebra with constant structure constants.
    ConstantAlgebra,
    /// Vector fields on a chart; `vectors` has one column per frame vector,
    /// one row per coordinate, and `inverse` re-expresses coordinate fields.
    CoordinateFrame { chart: Chart, vectors: Mat<Scalar>, inverse: Mat<Scalar> },
}

/// A frame with its full bracket table.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    labels: Vec<String>,
    kind: FrameKind,
    // [e_i, e_j] for i < j, row-major over pairs
    brackets: Vec<FrameVector>,
}

/// Triple `(i, j, k)` with nonzero Jacobiator and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub jacobiator: FrameVector,
}

fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

fn check_labels(labels: &[String]) -> Result<(), FrameError> {
    if labels.len().is_multiple_of(2) {
        return Err(FrameError::EvenDimension(labels.len()));
    }
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(FrameError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl FrameSpec {
    /// Builds a Lie algebra frame from brackets `(i, j, [e_i, e_j])`.
    /// Unlisted brackets vanish; a pair may be given in either order.
    pub fn constant_algebra(
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vec<AlgNum>)>,
    ) -> Result<FrameSpec, FrameError> {
        check_labels(&labels)?;
        let dim = labels.len();
        let mut table = vec![FrameVector::zero(dim); dim * (dim - 1) / 2];
        let mut seen = vec![false; table.len()];
        for (i, j, v) in brackets {
            if i >= dim || j >= dim {
                return Err(FrameError::IndexOutOfRange(i.max(j)));
            }
            if v.len() != dim {
                return Err(FrameError::DimensionMismatch { expected: dim, got: v.len() });
            }
            let mut vec = FrameVector::from_constants(&v);
            if i == j {
                if vec.is_zero() {
                    continue;
                }
                return Err(FrameError::SelfBracket(i));
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if i > j {
                vec = vec.neg();
            }
            let idx = pair_index(dim, a, b);
            if seen[idx] && table[idx] != vec {
                return Err(FrameError::ConflictingBracket(a, b));
            }
            seen[idx] = true;
            table[idx] = vec;
        }
        Ok(FrameSpec { labels, kind: FrameKind::ConstantAlgebra, brackets: table })
    }

    /// Builds a frame of vector fields; `vectors[i][c]` is the coefficient of
    /// `∂/∂chart[c]` in `e_i`. The frame determinant must be a unit of the
    /// scalar ring (a constant or an exponential monomial).
    pub fn coordinate_frame(labels: Vec<String>, chart: Chart, vectors: Vec<Vec<Scalar>>) -> Result<FrameSpec, FrameError> {
        check_labels(&labels)?;
        let dim = labels.len();
        if vectors.len() != dim {
            return Err(FrameError::DimensionMismatch { expected: dim, got: vectors.len() });
        }
        if chart.len() != dim {
            return Err(FrameError::DimensionMismatch { expected: dim, got: chart.len() });
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(FrameError::DimensionMismatch { expected: dim, got: v.len() });
            }
            for s in v {
                chart.check(s).map_err(|_| FrameError::OffChart(s.to_string()))?;
            }
        }
        let m = Mat::from_columns(&vectors);
        let det = scalar_determinant(&m);
        if det.is_zero() {
            return Err(FrameError::DegenerateFrame);
        }
        let det_inv = det.unit_inverse().ok_or_else(|| FrameError::NonUnitDeterminant(det.to_string()))?;
        let inverse = scalar_adjugate(&m).map(|a| a * &det_inv);
        let mut frame = FrameSpec {
            labels,
            kind: FrameKind::CoordinateFrame { chart, vectors: m, inverse },
            brackets: Vec::new(),
        };
        let mut table = Vec::with_capacity(dim * (dim - 1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                table.push(frame.coordinate_bracket(i, j));
            }
        }
        frame.brackets = table;
        Ok(frame)
    }

    fn coordinate_bracket(&self, i: usize, j: usize) -> FrameVector {
        let FrameKind::CoordinateFrame { vectors, inverse, .. } = &self.kind else {
            unreachable!()
        };
        let dim = self.dim();
        // [e_i, e_j]^c = e_i(e_j^c) - e_j(e_i^c)
        let w: Vec<Scalar> = (0..dim)
            .map(|c| self.directional(i, vectors.get(c, j)) - self.directional(j, vectors.get(c, i)))
            .collect();
        FrameVector::new((0..dim).map(|k| (0..dim).map(|c| inverse.get(k, c) * &w[c]).sum()).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `n` with `dim = 2n + 1`.
    pub fn half_dim(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn kind(&self) -> &FrameKind {
        &self.kind
    }

    pub fn is_constant_algebra(&self) -> bool {
        matches!(self.kind, FrameKind::ConstantAlgebra)
    }

    pub fn chart(&self) -> Option<&Chart> {
        match &self.kind {
            FrameKind::ConstantAlgebra => None,
            FrameKind::CoordinateFrame { chart, .. } => Some(chart),
        }
    }

    /// Coordinate coefficients of `e_i`, for coordinate frames.
    pub fn coordinate_vector(&self, i: usize) -> Option<Vec<Scalar>> {
        match &self.kind {
            FrameKind::ConstantAlgebra => None,
            FrameKind::CoordinateFrame { vectors, .. } => Some(vectors.column(i)),
        }
    }

    /// `[e_i, e_j]` expanded in the frame.
    pub fn lie_bracket(&self, i: usize, j: usize) -> FrameVector {
        assert!(i < self.dim() && j < self.dim(), "frame index out of range");
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => FrameVector::zero(self.dim()),
            std::cmp::Ordering::Less => self.brackets[pair_index(self.dim(), i, j)].clone(),
            std::cmp::Ordering::Greater => self.brackets[pair_index(self.dim(), j, i)].neg(),
        }
    }

    fn bracket_ref(&self, i: usize, j: usize) -> (&FrameVector, bool) {
        if i < j {
            (&self.brackets[pair_index(self.dim(), i, j)], false)
        } else {
            (&self.brackets[pair_index(self.dim(), j, i)], true)
        }
    }

    /// Structure function `C^k_ij`, the `e_k` component of `[e_i, e_j]`.
    pub fn structure_function(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (v, flip) = self.bracket_ref(i, j);
        if flip {
            -v.component(k)
        } else {
            v.component(k).clone()
        }
    }

    /// Directional derivative `e_i(f)`; zero for a constant algebra.
    pub fn directional(&self, i: usize, f: &Scalar) -> Scalar {
        match &self.kind {
            FrameKind::ConstantAlgebra => Scalar::zero(),
            FrameKind::CoordinateFrame { chart, vectors, .. } => {
                if f.is_constant() {
                    return Scalar::zero();
                }
                chart
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(c, name)| {
                        let coeff = vectors.get(c, i);
                        if coeff.is_zero() {
                            Scalar::zero()
                        } else {
                            coeff * &f.partial_derivative(name)
                        }
                    })
                    .sum()
            }
        }
    }

    /// `V(f)` for a frame vector `V`.
    pub fn apply(&self, v: &FrameVector, f: &Scalar) -> Scalar {
        if f.is_constant() {
            return Scalar::zero();
        }
        (0..self.dim()).filter(|&a| !v.component(a).is_zero()).map(|a| v.component(a) * &self.directional(a, f)).sum()
    }

    /// `[V, W]` for arbitrary frame vectors (Leibniz rule).
    pub fn bracket_vectors(&self, v: &FrameVector, w: &FrameVector) -> FrameVector {
        let dim = self.dim();
        let mut out = FrameVector::zero(dim);
        for a in 0..dim {
            let fa = v.component(a);
            if fa.is_zero() {
                continue;
            }
            for b in 0..dim {
                let hb = w.component(b);
                if hb.is_zero() || a == b {
                    continue;
                }
                let (br, flip) = self.bracket_ref(a, b);
                let coeff = if flip { -(fa * hb) } else { fa * hb };
                out.add_scaled(br, &coeff);
            }
        }
        for b in 0..dim {
            let d = self.apply(v, w.component(b));
            if !d.is_zero() {
                out.components[b] += &d;
            }
        }
        for a in 0..dim {
            let d = self.apply(w, v.component(a));
            if !d.is_zero() {
                out.components[a] -= &d;
            }
        }
        out
    }

    /// All triples `i < j < k` whose Jacobiator
    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]` is nonzero.
    /// Jacobiators of all basis triples; automatically zero for coordinate
    /// frames, so there it checks the bracket computation itself.
    pub fn verify_jacobi(&self) -> Vec<JacobiViolation> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let ei = FrameVector::basis(dim, i);
                    let ej = FrameVector::basis(dim, j);
                    let ek = FrameVector::basis(dim, k);
                    let jac = self
                        .bracket_vectors(&ei, &self.lie_bracket(j, k))
                        .add(&self.bracket_vectors(&ej, &self.lie_bracket(k, i)))
                        .add(&self.bracket_vectors(&ek, &self.lie_bracket(i, j)));
                    if !jac.is_zero() {
                        out.push(JacobiViolation { triple: (i, j, k), jacobiator: jac });
                    }
                }
            }
        }
        out
    }

    pub fn render(&self, v: &FrameVector) -> String {
        v.render(&self.labels)
    }

    /// Replaces the frame by `e'_i = s_i e_i` for nonzero constants `s_i`,
    /// rewriting the bracket table and coordinate coefficients.
    pub fn rescaled(&self, scales: &[AlgNum]) -> Result<FrameSpec, FrameError> {
        let dim = self.dim();
        if scales.len() != dim {
            return Err(FrameError::DimensionMismatch { expected: dim, got: scales.len() });
        }
        let inv: Vec<AlgNum> = scales.iter().map(|s| s.inverse().ok_or(FrameError::DegenerateFrame)).collect::<Result<_, _>>()?;
        match &self.kind {
            FrameKind::ConstantAlgebra => {
                let mut brackets = Vec::new();
                for i in 0..dim {
                    for j in i + 1..dim {
                        // [s_i e_i, s_j e_j] = s_i s_j Σ C^k_ij e_k = Σ (s_i s_j / s_k) C^k_ij e'_k
                        let old = self.lie_bracket(i, j);
                        let ss = &scales[i] * &scales[j];
                        let comps: Vec<AlgNum> = (0..dim)
                            .map(|k| {
                                let c = old.component(k).as_constant().expect("constant algebra");
                                &(&c * &ss) * &inv[k]
                            })
                            .collect();
                        brackets.push((i, j, comps));
                    }
                }
                FrameSpec::constant_algebra(self.labels.clone(), brackets)
            }
            FrameKind::CoordinateFrame { chart, vectors, .. } => {
                let cols: Vec<Vec<Scalar>> =
                    (0..dim).map(|i| vectors.column(i).iter().map(|f| f.scale(&scales[i])).collect()).collect();
                FrameSpec::coordinate_frame(self.labels.clone(), chart.clone(), cols)
            }
        }
    }
}

impl fmt::Display for FrameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let b = self.lie_bracket(i, j);
                if !b.is_zero() {
                    writeln!(f, "[{}, {}] = {}", self.labels[i], self.labels[j], self.render(&b))?;
                }
            }
        }
        Ok(())
    }
}
