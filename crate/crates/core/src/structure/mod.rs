//! Almost paracontact metric structures `(φ, ξ, η, g)` on a frame, the
//! tensor `h = ½ L_ξ φ`, and the axiom, identity and classification checks.
//!
//! φ and g are constant in the frame, and ξ is frame vector 0. Derived
//! tensors (∇, R, h, dη) are computed lazily and cached.

mod report;

use std::sync::OnceLock;

use thiserror::Error;

use crate::frame::{
    curvature, exterior_derivative_eta, levi_civita, lie_derivative_metric, ConnectionCoefficients, CurvatureTensor,
    FrameError, FrameSpec, FrameVector, MetricComponents,
};
use crate::linalg::{scalar_determinant, Mat};
use crate::scalar::{AlgNum, Scalar};

pub use report::{CheckResult, ClassificationFlags, VerificationReport, Witness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("{what} has size {got}, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("eta({label}) = {given} but g({label}, xi) = {metric}")]
    EtaMismatch { label: String, given: String, metric: String },
    #[error("h vanishes identically but L_xi g does not (or conversely): {0}")]
    KillingDisagreement(String),
}

/// The endomorphism `h`, stored as its frame matrix: entry `(k, j)` is the
/// `e_k` component of `h e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HTensor {
    matrix: Mat<Scalar>,
}

impl HTensor {
    pub fn matrix(&self) -> &Mat<Scalar> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `h e_j`.
    pub fn column(&self, j: usize) -> FrameVector {
        FrameVector::new(self.matrix.column(j))
    }

    pub fn apply(&self, v: &FrameVector) -> FrameVector {
        let n = self.dim();
        FrameVector::new(
            (0..n)
                .map(|k| (0..n).filter(|&j| !v.component(j).is_zero()).map(|j| self.matrix.get(k, j) * v.component(j)).sum())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().all(|(_, _, s)| s.is_zero())
    }

    /// `h²` as a frame matrix.
    pub fn squared(&self) -> Mat<Scalar> {
        scalar_matmul(&self.matrix, &self.matrix)
    }
}

pub(crate) fn scalar_matmul(a: &Mat<Scalar>, b: &Mat<Scalar>) -> Mat<Scalar> {
    Mat::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols())
            .filter(|&k| !a.get(i, k).is_zero() && !b.get(k, j).is_zero())
            .map(|k| a.get(i, k) * b.get(k, j))
            .sum()
    })
}

#[derive(Clone, Debug)]
pub struct ParacontactStructure {
    name: String,
    frame: FrameSpec,
    metric: MetricComponents,
    phi: Mat<AlgNum>,
    eta: Vec<AlgNum>,
    connection: OnceLock<ConnectionCoefficients>,
    curvature: OnceLock<CurvatureTensor>,
    h: OnceLock<HTensor>,
    d_eta: OnceLock<Mat<Scalar>>,
}

impl PartialEq for ParacontactStructure {
    /// Tensor-by-tensor equality; the name and caches are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.metric == other.metric && self.phi == other.phi && self.eta == other.eta
    }
}

impl ParacontactStructure {
    /// Builds a structure, requiring `η = g(·, ξ)` exactly.
    pub fn new(
        name: impl Into<String>,
        frame: FrameSpec,
        metric: MetricComponents,
        phi: Mat<AlgNum>,
        eta: Vec<AlgNum>,
    ) -> Result<Self, StructureError> {
        let s = Self::new_unchecked_eta(name, frame, metric, phi, eta)?;
        for i in 0..s.dim() {
            let from_metric = s.metric.get(i, 0);
            if &s.eta[i] != from_metric {
                return Err(StructureError::EtaMismatch {
                    label: s.frame.label(i).to_string(),
                    given: s.eta[i].to_string(),
                    metric: from_metric.to_string(),
                });
            }
        }
        Ok(s)
    }

    /// Like [`new`](Self::new) but accepts any η; used to exhibit failing
    /// checks.
    pub fn new_unchecked_eta(
        name: impl Into<String>,
        frame: FrameSpec,
        metric: MetricComponents,
        phi: Mat<AlgNum>,
        eta: Vec<AlgNum>,
    ) -> Result<Self, StructureError> {
        let dim = frame.dim();
        if metric.dim() != dim {
            return Err(StructureError::DimensionMismatch { what: "metric", expected: dim, got: metric.dim() });
        }
        if phi.rows() != dim || phi.cols() != dim {
            return Err(StructureError::DimensionMismatch { what: "phi", expected: dim, got: phi.rows().max(phi.cols()) });
        }
        if eta.len() != dim {
            return Err(StructureError::DimensionMismatch { what: "eta", expected: dim, got: eta.len() });
        }
        Ok(ParacontactStructure {
            name: name.into(),
            frame,
            metric,
            phi,
            eta,
            connection: OnceLock::new(),
            curvature: OnceLock::new(),
            h: OnceLock::new(),
            d_eta: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn half_dim(&self) -> usize {
        self.frame.half_dim()
    }

    pub fn frame(&self) -> &FrameSpec {
        &self.frame
    }

    pub fn metric(&self) -> &MetricComponents {
        &self.metric
    }

    pub fn phi(&self) -> &Mat<AlgNum> {
        &self.phi
    }

    pub fn eta(&self) -> &[AlgNum] {
        &self.eta
    }

    pub fn eta_scalars(&self) -> Vec<Scalar> {
        self.eta.iter().cloned().map(Scalar::constant).collect()
    }

    pub fn xi(&self) -> FrameVector {
        FrameVector::basis(self.dim(), 0)
    }

    pub fn label(&self, i: usize) -> &str {
        self.frame.label(i)
    }

    pub fn render(&self, v: &FrameVector) -> String {
        self.frame.render(v)
    }

    pub fn basis(&self, i: usize) -> FrameVector {
        FrameVector::basis(self.dim(), i)
    }

    /// `φ e_j`.
    pub fn phi_column(&self, j: usize) -> FrameVector {
        FrameVector::from_constants(&self.phi.column(j))
    }

    pub fn apply_phi(&self, v: &FrameVector) -> FrameVector {
        v.transform(&self.phi)
    }

    /// `η(V)`.
    pub fn eta_of(&self, v: &FrameVector) -> Scalar {
        (0..self.dim()).filter(|&k| !self.eta[k].is_zero()).map(|k| v.component(k).scale(&self.eta[k])).sum()
    }

    pub fn connection(&self) -> &ConnectionCoefficients {
        self.connection.get_or_init(|| levi_civita(&self.frame, &self.metric))
    }

    pub fn curvature(&self) -> &CurvatureTensor {
        self.curvature.get_or_init(|| curvature(&self.frame, &self.metric, self.connection()))
    }

    /// `dη(e_i, e_j)` with the ½ convention.
    pub fn d_eta(&self) -> &Mat<Scalar> {
        self.d_eta.get_or_init(|| exterior_derivative_eta(&self.frame, &self.eta_scalars()))
    }

    /// `Φ(e_i, e_j) = g(e_i, φ e_j)`.
    pub fn fundamental_form(&self) -> Mat<AlgNum> {
        self.metric.matrix().mul(&self.phi)
    }

    /// `h e_j = ½([ξ, φe_j] − φ[ξ, e_j])`, computed once.
    pub fn h(&self) -> &HTensor {
        self.h.get_or_init(|| compute_h(self))
    }

    /// A basis of `Ker η` as constant vectors.
    pub fn kernel_of_eta(&self) -> Vec<Vec<AlgNum>> {
        Mat::from_rows(vec![self.eta.clone()]).kernel_basis()
    }
}

/// Computes `h` from scratch, bypassing the cache.
pub fn compute_h(s: &ParacontactStructure) -> HTensor {
    let dim = s.dim();
    let xi = s.xi();
    let half = AlgNum::from_ratio(1, 2);
    let cols: Vec<Vec<Scalar>> = (0..dim)
        .map(|j| {
            let a = s.frame.bracket_vectors(&xi, &s.phi_column(j));
            let b = s.apply_phi(&s.frame.lie_bracket(0, j));
            a.sub(&b).scale_const(&half).components().to_vec()
        })
        .collect();
    HTensor { matrix: Mat::from_columns(&cols) }
}

fn delta(i: usize, j: usize) -> AlgNum {
    if i == j {
        AlgNum::one()
    } else {
        AlgNum::zero()
    }
}

fn constant_residuals<'a>(
    m: &'a Mat<AlgNum>,
    loc: impl Fn(usize, usize) -> String + 'a,
) -> impl Iterator<Item = (String, Scalar)> + 'a {
    m.entries().map(move |(i, j, v)| (loc(i, j), Scalar::constant(v.clone())))
}

/// Dimension of `{v ∈ Ker η : φv = σ v}`.
fn eigen_dim(s: &ParacontactStructure, kernel: &[Vec<AlgNum>], sigma: i64) -> usize {
    if kernel.is_empty() {
        return 0;
    }
    let shifted = s.phi.sub(&Mat::identity(s.dim()).scale(&AlgNum::from_int(sigma)));
    let k = Mat::from_columns(kernel);
    let image = shifted.mul(&k);
    kernel.len() - image.rank()
}

/// Axioms of an almost paracontact structure: `η(ξ) = 1`,
/// `φ² = I − η⊗ξ` (hence `φξ = 0`, `η∘φ = 0`), and equal eigendistributions
/// `dim D⁺ = dim D⁻ = n` inside `Ker η`.
pub fn verify_almost_paracontact(s: &ParacontactStructure) -> VerificationReport {
    let dim = s.dim();
    let n = s.half_dim();
    let mut r = VerificationReport::new(format!("almost paracontact axioms: {}", s.name));

    let eta_xi = &s.eta[0] - &AlgNum::one();
    r.push(CheckResult::residuals("eta(xi) = 1", [("eta(xi) - 1".to_string(), Scalar::constant(eta_xi))]));

    let phi2 = s.phi.mul(&s.phi);
    let target = Mat::from_fn(dim, dim, |k, j| &delta(k, j) - &(&delta(k, 0) * &s.eta[j]));
    let diff = phi2.sub(&target);
    r.push(CheckResult::residuals(
        "phi^2 = I - eta (x) xi",
        constant_residuals(&diff, |k, j| format!("(phi^2 - I + eta (x) xi)({})[{}]", s.label(j), s.label(k))),
    ));

    r.push(CheckResult::residuals(
        "phi xi = 0",
        (0..dim).map(|k| (format!("(phi xi)[{}]", s.label(k)), Scalar::constant(s.phi.get(k, 0).clone()))),
    ));
    let eta_phi: Vec<AlgNum> = (0..dim)
        .map(|j| (0..dim).fold(AlgNum::zero(), |acc, k| &acc + &(&s.eta[k] * s.phi.get(k, j))))
        .collect();
    r.push(CheckResult::residuals(
        "eta o phi = 0",
        eta_phi.into_iter().enumerate().map(|(j, v)| (format!("eta(phi {})", s.label(j)), Scalar::constant(v))),
    ));

    let kernel = s.kernel_of_eta();
    let plus = eigen_dim(s, &kernel, 1);
    let minus = eigen_dim(s, &kernel, -1);
    r.eigen_dims = Some((plus, minus));
    let eig = if plus != n {
        CheckResult::fail("dim D+ = dim D- = n", "dim D+ - n", Scalar::from_int(plus as i64 - n as i64))
    } else if minus != n {
        CheckResult::fail("dim D+ = dim D- = n", "dim D- - n", Scalar::from_int(minus as i64 - n as i64))
    } else {
        CheckResult::pass("dim D+ = dim D- = n")
    };
    r.push(eig);
    r
}

/// Metric compatibility `g(φX, φY) = −g(X, Y) + η(X)η(Y)`, `η = g(·, ξ)`,
/// antisymmetry `g(·, φ·) = −g(φ·, ·)` and signature `(n+1, n)`.
pub fn verify_compatibility(s: &ParacontactStructure) -> VerificationReport {
    let dim = s.dim();
    let n = s.half_dim();
    let g = s.metric.matrix();
    let mut r = VerificationReport::new(format!("metric compatibility: {}", s.name));

    let gphi = s.phi.transpose().mul(g).mul(&s.phi);
    let compat = Mat::from_fn(dim, dim, |i, j| &(gphi.get(i, j) + g.get(i, j)) - &(&s.eta[i] * &s.eta[j]));
    r.push(CheckResult::residuals(
        "g(phi X, phi Y) = -g(X, Y) + eta(X) eta(Y)",
        constant_residuals(&compat, |i, j| format!("compatibility({}, {})", s.label(i), s.label(j))),
    ));

    r.push(CheckResult::residuals(
        "eta = g(., xi)",
        (0..dim).map(|i| (format!("eta({}) - g({}, xi)", s.label(i), s.label(i)), Scalar::constant(&s.eta[i] - g.get(i, 0)))),
    ));

    let big_phi = s.fundamental_form();
    let anti = big_phi.add(&big_phi.transpose());
    r.push(CheckResult::residuals(
        "g(X, phi Y) = -g(phi X, Y)",
        constant_residuals(&anti, |i, j| format!("g({0}, phi {1}) + g(phi {0}, {1})", s.label(i), s.label(j))),
    ));

    let (p, q) = s.metric.signature();
    r.push(if (p, q) == (n + 1, n) {
        CheckResult::pass("signature (n+1, n)")
    } else {
        CheckResult::fail("signature (n+1, n)", "positive directions - (n+1)", Scalar::from_int(p as i64 - n as i64 - 1))
    });
    r
}

/// `dη = Φ` on all frame pairs, and the contact condition: `dη` restricted
/// to `Ker η` has a determinant that is not identically zero.
pub fn verify_paracontact(s: &ParacontactStructure) -> VerificationReport {
    let dim = s.dim();
    let mut r = VerificationReport::new(format!("paracontact condition: {}", s.name));
    let d_eta = s.d_eta();
    let big_phi = s.fundamental_form();
    r.push(CheckResult::residuals(
        "d eta = Phi",
        (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| {
            (
                format!("(d eta - Phi)({}, {})", s.label(i), s.label(j)),
                d_eta.get(i, j) - &Scalar::constant(big_phi.get(i, j).clone()),
            )
        }),
    ));

    let kernel = s.kernel_of_eta();
    let restricted = Mat::from_fn(kernel.len(), kernel.len(), |a, b| {
        let mut acc = Scalar::zero();
        for i in 0..dim {
            if kernel[a][i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if kernel[b][j].is_zero() || d_eta.get(i, j).is_zero() {
                    continue;
                }
                acc += &d_eta.get(i, j).scale(&(&kernel[a][i] * &kernel[b][j]));
            }
        }
        acc
    });
    let det = scalar_determinant(&restricted);
    r.push(if det.is_zero() {
        // the witness is the nonzero constant by which η ∧ (dη)^n fails
        CheckResult::fail("eta is a contact form", "degenerate d eta on ker eta, nullity indicator", Scalar::one())
    } else {
        CheckResult::pass("eta is a contact form")
    });
    r.flags.paracontact_metric = Some(r.passed());
    r
}

/// Symmetry of h, `hφ + φh = 0`, `hξ = 0`, `tr h = 0` and `∇ξ = −φ + φh`.
pub fn verify_h_identities(s: &ParacontactStructure) -> VerificationReport {
    let dim = s.dim();
    let h = s.h();
    let mut r = VerificationReport::new(format!("identities of h: {}", s.name));

    let sym = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| {
        let v = &s.metric.pair(&h.column(i), &s.basis(j)) - &s.metric.pair(&s.basis(i), &h.column(j));
        (format!("g(h {0}, {1}) - g({0}, h {1})", s.label(i), s.label(j)), v)
    });
    r.push(CheckResult::residuals("h is g-symmetric", sym.collect::<Vec<_>>()));

    let phi_s = s.phi.to_scalars();
    let anti = {
        let a = scalar_matmul(h.matrix(), &phi_s);
        let b = scalar_matmul(&phi_s, h.matrix());
        Mat::from_fn(dim, dim, |k, j| a.get(k, j) + b.get(k, j))
    };
    r.push(CheckResult::residuals(
        "h phi + phi h = 0",
        anti.entries().map(|(k, j, v)| (format!("(h phi + phi h)({})[{}]", s.label(j), s.label(k)), v.clone())),
    ));

    r.push(CheckResult::residuals(
        "h xi = 0",
        (0..dim).map(|k| (format!("(h xi)[{}]", s.label(k)), h.matrix().get(k, 0).clone())),
    ));

    let trace: Scalar = (0..dim).map(|k| h.matrix().get(k, k).clone()).sum();
    r.push(CheckResult::residuals("tr h = 0", [("tr h".to_string(), trace)]));

    let gamma = s.connection();
    let nabla = (0..dim).flat_map(|i| {
        let expected = s.apply_phi(&h.column(i)).sub(&s.phi_column(i));
        let diff = gamma.nabla(i, 0).sub(&expected);
        (0..dim)
            .map(move |k| (format!("(nabla_{} xi + phi {0} - phi h {0})[{}]", s.label(i), s.label(k)), diff.component(k).clone()))
            .collect::<Vec<_>>()
    });
    r.push(CheckResult::residuals("nabla xi = -phi + phi h", nabla.collect::<Vec<_>>()));
    r
}

/// All axioms: almost paracontact, compatibility, `dη = Φ` with the
/// contact condition, and the identities of h.
pub fn verify_structure(s: &ParacontactStructure) -> VerificationReport {
    let mut r = VerificationReport::new(format!("verification of {}", s.name));
    let almost = verify_almost_paracontact(s);
    let compat = verify_compatibility(s);
    r.flags.almost_paracontact_metric = Some(almost.passed() && compat.passed());
    r.absorb(almost);
    r.absorb(compat);
    let contact = verify_paracontact(s);
    let is_paracontact = r.passed() && contact.passed();
    r.absorb(contact);
    r.flags.paracontact_metric = Some(is_paracontact);
    r.absorb(verify_h_identities(s));
    r
}

/// K-paracontact test: h ≡ 0, cross-checked against ξ being Killing.
pub fn is_k_paracontact(s: &ParacontactStructure) -> Result<(bool, VerificationReport), StructureError> {
    let dim = s.dim();
    let mut r = VerificationReport::new(format!("K-paracontact: {}", s.name));
    let h = s.h();
    let h_check = CheckResult::residuals(
        "h = 0",
        h.matrix().entries().map(|(k, j, v)| (format!("(h {})[{}]", s.label(j), s.label(k)), v.clone())),
    );
    let lie = lie_derivative_metric(&s.frame, &s.metric, &s.xi());
    let killing = CheckResult::residuals(
        "xi is Killing",
        (0..dim).flat_map(|i| (i..dim).map(move |j| (i, j))).map(|(i, j)| {
            (format!("(L_xi g)({}, {})", s.label(i), s.label(j)), lie.get(i, j).clone())
        }),
    );
    if h_check.passed != killing.passed {
        let detail = h_check.witness.as_ref().or(killing.witness.as_ref()).map(|w| format!("{} = {}", w.location, w.value));
        return Err(StructureError::KillingDisagreement(detail.unwrap_or_default()));
    }
    let verdict = h_check.passed;
    r.push_property(h_check);
    r.push_property(killing);
    r.flags.k_paracontact = Some(verdict);
    Ok((verdict, r))
}

/// `N(X, Y) = [φ, φ](X, Y) − 2 dη(X, Y) ξ` on all frame pairs, where
/// `[φ, φ](X, Y) = φ²[X, Y] + [φX, φY] − φ[φX, Y] − φ[X, φY]`.
pub fn nijenhuis_tensor(s: &ParacontactStructure) -> Vec<((usize, usize), FrameVector)> {
    let dim = s.dim();
    let d_eta = s.d_eta();
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let (ei, ej) = (s.basis(i), s.basis(j));
            let (pi, pj) = (s.phi_column(i), s.phi_column(j));
            let bracket = s.frame.lie_bracket(i, j);
            let mut n = s.apply_phi(&s.apply_phi(&bracket));
            n = n.add(&s.frame.bracket_vectors(&pi, &pj));
            n = n.sub(&s.apply_phi(&s.frame.bracket_vectors(&pi, &ej)));
            n = n.sub(&s.apply_phi(&s.frame.bracket_vectors(&ei, &pj)));
            n = n.sub(&s.xi().scale(&d_eta.get(i, j).scale(&AlgNum::from_int(2))));
            out.push(((i, j), n));
        }
    }
    out
}

pub fn nijenhuis_normality(s: &ParacontactStructure) -> VerificationReport {
    let mut r = VerificationReport::new(format!("normality: {}", s.name));
    let n = nijenhuis_tensor(s);
    let check = CheckResult::residuals(
        "normal ([phi, phi] - 2 d eta (x) xi = 0)",
        n.iter().flat_map(|((i, j), v)| {
            (0..s.dim()).map(move |k| (format!("N({}, {})[{}]", s.label(*i), s.label(*j), s.label(k)), v.component(k).clone()))
        }),
    );
    r.flags.normal = Some(check.passed);
    r.push_property(check);
    r
}

/// Paracontact metric and normal.
pub fn is_para_sasakian(s: &ParacontactStructure) -> bool {
    let base = verify_almost_paracontact(s).passed() && verify_compatibility(s).passed();
    base && verify_paracontact(s).passed() && nijenhuis_normality(s).flags.normal == Some(true)
}

/// `R(X, Y)ξ = −(η(Y)X − η(X)Y)` on all frame pairs.
pub fn check_para_sasakian_curvature(s: &ParacontactStructure) -> VerificationReport {
    let dim = s.dim();
    let r_tensor = s.curvature();
    let mut r = VerificationReport::new(format!("curvature identity R(X,Y)xi = -(eta(Y)X - eta(X)Y): {}", s.name));
    let residuals = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).flat_map(|(i, j)| {
        let target = s.basis(i).scale_const(&s.eta[j]).sub(&s.basis(j).scale_const(&s.eta[i])).neg();
        let diff = r_tensor.apply(i, j, 0).sub(&target);
        (0..dim)
            .map(move |k| (format!("(R({}, {}) xi + eta({1}) {0} - eta({0}) {1})[{}]", s.label(i), s.label(j), s.label(k)), diff.component(k).clone()))
            .collect::<Vec<_>>()
    });
    r.push_property(CheckResult::residuals("R(X, Y) xi = -(eta(Y) X - eta(X) Y)", residuals.collect::<Vec<_>>()));
    r
}

/// The complete classification: all axioms plus the K-paracontact, normality,
/// paraSasakian and curvature-identity predicates.
pub fn classify_structure(s: &ParacontactStructure) -> Result<VerificationReport, StructureError> {
    let mut r = verify_structure(s);
    let (_, k) = is_k_paracontact(s)?;
    r.absorb(k);
    r.absorb(nijenhuis_normality(s));
    r.flags.para_sasakian = Some(r.flags.paracontact_metric == Some(true) && r.flags.normal == Some(true));
    r.absorb(check_para_sasakian_curvature(s));
    Ok(r)
}
