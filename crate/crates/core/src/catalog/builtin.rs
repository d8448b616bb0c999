use std::collections::BTreeMap;

use serde::Serialize;

use crate::frame::{FrameSpec, MetricComponents};
use crate::linalg::Mat;
use crate::scalar::{parse_scalar, AlgNum, Chart, Scalar};
use crate::structure::ParacontactStructure;

use super::CatalogError;

/// An integer parameter with its admissible range. `max` refers to another
/// parameter by name (e.g. `m <= n`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_param: Option<&'static str>,
    pub default: i64,
    pub description: &'static str,
}

/// How the rank of h behaves over the manifold.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankLaw {
    /// Constant rank equal to the named parameter.
    Parameter(&'static str),
    Constant(usize),
    /// Rank 0 on the slice `x = 0` and 1 elsewhere.
    VanishesOnXZero,
}

/// What the full pipeline is expected to report for an entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedResults {
    pub kappa: i64,
    /// `None` when h vanishes and μ is indeterminate.
    pub mu: Option<i64>,
    pub rank: RankLaw,
    pub para_sasakian: bool,
    /// Whether `R(X,Y)ξ = −(η(Y)X − η(X)Y)` holds.
    pub sasakian_curvature: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub title: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamSpec>,
    pub expected: ExpectedResults,
}

impl CatalogEntry {
    /// Fills defaults and enforces the parameter constraints.
    pub fn resolve_params(&self, given: &BTreeMap<String, i64>) -> Result<BTreeMap<String, i64>, CatalogError> {
        for key in given.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(CatalogError::UnknownParameter { entry: self.name.to_string(), param: key.clone() });
            }
        }
        let mut out = BTreeMap::new();
        for p in &self.params {
            out.insert(p.name.to_string(), given.get(p.name).copied().unwrap_or(p.default));
        }
        for p in &self.params {
            let v = out[p.name];
            let max = p.max_param.map(|m| out[m]);
            if v < p.min || max.is_some_and(|m| v > m) {
                let range = match p.max_param {
                    Some(m) => format!("{} <= {} <= {m}", p.min, p.name),
                    None => format!("{} >= {}", p.name, p.min),
                };
                return Err(CatalogError::ParameterOutOfRange {
                    entry: self.name.to_string(),
                    param: p.name.to_string(),
                    value: v,
                    range,
                });
            }
        }
        Ok(out)
    }

    /// Expected rank of h for resolved parameters, when it is constant.
    pub fn expected_rank(&self, params: &BTreeMap<String, i64>) -> Option<usize> {
        match self.expected.rank {
            RankLaw::Parameter(p) => Some(params[p] as usize),
            RankLaw::Constant(r) => Some(r),
            RankLaw::VanishesOnXZero => None,
        }
    }

    pub fn instantiate(&self, params: &BTreeMap<String, i64>) -> Result<ParacontactStructure, CatalogError> {
        let p = self.resolve_params(params)?;
        let get = |k: &str| p[k] as usize;
        let name = instance_name(self.name, &p);
        let s = match self.name {
            "ex-mu2-hm-n" => ex_mu2_hm_n(get("n"), get("m")),
            "ex-mu0-h1" => ex_mu0_h1(get("n")),
            "ex-mu0-h2+" => ex_mu0_h2plus(get("n"), get("m")),
            "ex-mu2-nonconstant" => nonconstant("x*z"),
            "ex-mu0-nonconstant" => nonconstant("x*exp(-2*z)"),
            "parasasakian-heisenberg" => heisenberg(get("n")),
            _ => unreachable!("entry without constructor"),
        }?;
        Ok(s.with_name(name))
    }
}

fn instance_name(entry: &str, params: &BTreeMap<String, i64>) -> String {
    if params.is_empty() {
        return entry.to_string();
    }
    let args: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{entry}({})", args.join(", "))
}

fn n_param(min: i64) -> ParamSpec {
    ParamSpec { name: "n", min, max_param: None, default: 2, description: "half dimension: the manifold has dimension 2n+1" }
}

fn m_param(min: i64) -> ParamSpec {
    ParamSpec { name: "m", min, max_param: Some("n"), default: 2, description: "rank of h" }
}

pub fn builtins() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "ex-mu2-hm-n",
            title: "(2n+1)-dimensional (-1,2)-space with rank(h) = m",
            summary: "Left-invariant structure on a Lie group; [xi,X_i] = Y_i for i <= m and \
                      sqrt2-twisted brackets [X_i,Y_j]. Non-paraSasakian (-1,2)-space, h^2 = 0, rank(h) = m.",
            params: vec![n_param(1), ParamSpec { min: 1, default: 1, ..m_param(1) }],
            expected: ExpectedResults {
                kappa: -1,
                mu: Some(2),
                rank: RankLaw::Parameter("m"),
                para_sasakian: false,
                sasakian_curvature: false,
            },
        },
        CatalogEntry {
            name: "ex-mu0-h1",
            title: "(2n+1)-dimensional (-1,0)-space with rank(h) = 1",
            summary: "Left-invariant structure with [xi,X_1] = X_1+Y_1, [xi,Y_1] = -Y_1 and metric of \
                      mixed signs g(X_1,Y_1) = 1, g(X_i,Y_i) = -1. Non-paraSasakian (-1,0)-space, rank(h) = 1.",
            params: vec![ParamSpec { default: 1, ..n_param(1) }],
            expected: ExpectedResults {
                kappa: -1,
                mu: Some(0),
                rank: RankLaw::Constant(1),
                para_sasakian: false,
                sasakian_curvature: true,
            },
        },
        CatalogEntry {
            name: "ex-mu0-h2+",
            title: "(2n+1)-dimensional (-1,0)-space with rank(h) = m >= 2",
            summary: "Left-invariant structure with sqrt2 brackets among X_i, Y_j; brackets whose index \
                      range is empty for the chosen (n,m) are omitted. (-1,0)-space, h^2 = 0, rank(h) = m.",
            params: vec![n_param(2), m_param(2)],
            expected: ExpectedResults {
                kappa: -1,
                mu: Some(0),
                rank: RankLaw::Parameter("m"),
                para_sasakian: false,
                sasakian_curvature: true,
            },
        },
        CatalogEntry {
            name: "ex-mu2-nonconstant",
            title: "3-dimensional (-1,2)-space with rank(h_p) not constant",
            summary: "R^3 with e1 = dx + x*z*dy - 2*y*dz, e2 = dy, xi = dz, g(e1,e2) = g(xi,xi) = 1, \
                      eta = 2y dx + dz. h e1 = x e2, so rank(h_p) is 0 exactly where x = 0.",
            params: vec![],
            expected: ExpectedResults {
                kappa: -1,
                mu: Some(2),
                rank: RankLaw::VanishesOnXZero,
                para_sasakian: false,
                sasakian_curvature: false,
            },
        },
        CatalogEntry {
            name: "ex-mu0-nonconstant",
            title: "3-dimensional (-1,0)-space with rank(h_p) not constant",
            summary: "R^3 with e1 = dx + x*exp(-2z)*dy - 2*y*dz, e2 = dy, xi = dz. h e1 = -2x exp(-2z) e2; \
                      satisfies R(X,Y)xi = -(eta(Y)X - eta(X)Y) without being paraSasakian.",
            params: vec![],
            expected: ExpectedResults {
                kappa: -1,
                mu: Some(0),
                rank: RankLaw::VanishesOnXZero,
                para_sasakian: false,
                sasakian_curvature: true,
            },
        },
        CatalogEntry {
            name: "parasasakian-heisenberg",
            title: "(2n+1)-dimensional paraSasakian Heisenberg algebra",
            summary: "[X_i,Y_i] = 2 xi, phi X_i = X_i, phi Y_i = -Y_i, g(xi,xi) = g(X_i,Y_i) = 1. \
                      h = 0, xi is Killing, normal; the reference K-paracontact case.",
            params: vec![ParamSpec { default: 1, ..n_param(1) }],
            expected: ExpectedResults {
                kappa: -1,
                mu: None,
                rank: RankLaw::Constant(0),
                para_sasakian: true,
                sasakian_curvature: true,
            },
        },
    ]
}

pub fn find_builtin(name: &str) -> Result<CatalogEntry, CatalogError> {
    builtins().into_iter().find(|e| e.name == name).ok_or_else(|| CatalogError::UnknownBuiltin(name.to_string()))
}

pub fn instantiate_builtin(name: &str, params: &BTreeMap<String, i64>) -> Result<ParacontactStructure, CatalogError> {
    find_builtin(name)?.instantiate(params)
}

/// Frame labels `xi, X1, Y1, ..., Xn, Yn`.
pub fn standard_labels(n: usize) -> Vec<String> {
    let mut out = vec!["xi".to_string()];
    for i in 1..=n {
        out.push(format!("X{i}"));
        out.push(format!("Y{i}"));
    }
    out
}

const XI: usize = 0;

fn x(i: usize) -> usize {
    2 * i - 1
}

fn y(i: usize) -> usize {
    2 * i
}

/// Accumulates a bracket table for the basis `xi, X1, Y1, ...`.
struct Table {
    dim: usize,
    entries: BTreeMap<(usize, usize), Vec<AlgNum>>,
}

impl Table {
    fn new(n: usize) -> Self {
        Table { dim: 2 * n + 1, entries: BTreeMap::new() }
    }

    fn vector(&self, terms: &[(usize, AlgNum)]) -> Vec<AlgNum> {
        let mut v = vec![AlgNum::zero(); self.dim];
        for (k, c) in terms {
            v[*k] += c;
        }
        v
    }

    fn set(&mut self, i: usize, j: usize, terms: &[(usize, AlgNum)]) {
        let v = self.vector(terms);
        self.set_vec(i, j, v);
    }

    fn set_vec(&mut self, i: usize, j: usize, v: Vec<AlgNum>) {
        assert!(!self.entries.contains_key(&(i, j)), "bracket set twice");
        self.entries.insert((i, j), v);
    }

    fn get(&self, i: usize, j: usize) -> Vec<AlgNum> {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| vec![AlgNum::zero(); self.dim])
    }

    fn into_frame(self, n: usize) -> Result<FrameSpec, CatalogError> {
        Ok(FrameSpec::constant_algebra(standard_labels(n), self.entries.into_iter().map(|((i, j), v)| (i, j, v)))?)
    }
}

fn int(k: i64) -> AlgNum {
    AlgNum::from_int(k)
}

fn s2(k: i64) -> AlgNum {
    &AlgNum::sqrt2() * &int(k)
}

fn scaled(v: &[AlgNum], c: &AlgNum) -> Vec<AlgNum> {
    v.iter().map(|a| a * c).collect()
}

/// `φ = diag(0, φ_1, ...)`, `g(ξ,ξ) = 1`, `g(X_i,Y_i) = pair_signs[i-1]`,
/// `η = (1, 0, ..., 0)`.
fn standard_structure(
    name: &str,
    frame: FrameSpec,
    phi_diag: &[i64],
    pair_signs: &[i64],
) -> Result<ParacontactStructure, CatalogError> {
    let dim = frame.dim();
    let mut g = Mat::<AlgNum>::zeros(dim, dim);
    g.set(0, 0, AlgNum::one());
    for (i, s) in pair_signs.iter().enumerate() {
        let (a, b) = (x(i + 1), y(i + 1));
        g.set(a, b, int(*s));
        g.set(b, a, int(*s));
    }
    let mut phi = Mat::<AlgNum>::zeros(dim, dim);
    for (k, d) in phi_diag.iter().enumerate() {
        phi.set(k + 1, k + 1, int(*d));
    }
    let mut eta = vec![AlgNum::zero(); dim];
    eta[0] = AlgNum::one();
    let metric = MetricComponents::new(g)?;
    Ok(ParacontactStructure::new(name, frame, metric, phi, eta)?)
}

fn ex_mu2_hm_n(n: usize, m: usize) -> Result<ParacontactStructure, CatalogError> {
    let mut t = Table::new(n);
    let d = |a: usize, b: usize| i64::from(a == b);
    for i in 1..=m {
        t.set(XI, x(i), &[(y(i), int(1))]);
    }
    for i in 1..=n {
        for j in 1..=n {
            let terms: Vec<(usize, AlgNum)> = if i <= m && j <= m {
                if i == j {
                    vec![(XI, int(2)), (y(m), s2(1 + d(i, m)))]
                } else {
                    vec![(y(j), s2(d(i, m))), (y(i), s2(d(j, m)))]
                }
            } else if i > m && j > m {
                if i == j {
                    vec![(XI, int(2)), (y(i), s2(1))]
                } else {
                    continue;
                }
            } else if i <= m {
                vec![(y(i), s2(1))]
            } else {
                continue;
            };
            let v = t.vector(&terms);
            if v.iter().any(|c| !c.is_zero()) {
                t.set_vec(x(i), y(j), v);
            }
        }
    }
    let phi: Vec<i64> = (0..n).flat_map(|_| [1, -1]).collect();
    standard_structure("ex-mu2-hm-n", t.into_frame(n)?, &phi, &vec![1; n])
}

fn ex_mu0_h1(n: usize) -> Result<ParacontactStructure, CatalogError> {
    let mut t = Table::new(n);
    t.set(XI, x(1), &[(x(1), int(1)), (y(1), int(1))]);
    t.set(XI, y(1), &[(y(1), int(-1))]);
    t.set(x(1), y(1), &[(XI, int(2))]);
    for i in 2..=n {
        t.set(x(i), y(i), &[(XI, int(2)), (y(i), int(2))]);
        t.set(x(1), y(i), &[(x(1), int(1)), (y(1), int(1))]);
        t.set(y(1), y(i), &[(y(1), int(-1))]);
    }
    let mut phi = vec![1, -1];
    let mut signs = vec![1];
    for _ in 2..=n {
        phi.extend([-1, 1]);
        signs.push(-1);
    }
    standard_structure("ex-mu0-h1", t.into_frame(n)?, &phi, &signs)
}

/// Brackets whose index range is empty for the given `(n, m)` are simply
/// never generated.
fn ex_mu0_h2plus(n: usize, m: usize) -> Result<ParacontactStructure, CatalogError> {
    let mut t = Table::new(n);
    t.set(XI, x(1), &[(x(1), int(1)), (x(2), int(1)), (y(1), int(1))]);
    t.set(XI, y(1), &[(y(1), int(-1)), (y(2), int(1))]);
    t.set(XI, x(2), &[(x(1), int(1)), (x(2), int(1)), (y(2), int(1))]);
    t.set(XI, y(2), &[(y(1), int(1)), (y(2), int(-1))]);
    for i in 3..=m {
        t.set(XI, x(i), &[(x(i), int(1)), (y(i), int(1))]);
        t.set(XI, y(i), &[(y(i), int(-1))]);
    }

    t.set(x(1), x(2), &[(x(1), s2(1))]);
    for j in 3..=m {
        t.set(x(2), x(j), &[(x(j), s2(-1))]);
    }
    for i in 1..=m {
        let xi_xi = t.get(XI, x(i));
        for j in m + 1..=n {
            t.set_vec(x(i), x(j), scaled(&xi_xi, &AlgNum::sqrt2()));
        }
    }

    t.set(y(1), y(2), &[(y(1), s2(-1)), (y(2), s2(1))]);
    for i in 1..=2 {
        for j in 3..=m {
            t.set(y(i), y(j), &[(y(j), s2(1))]);
        }
    }

    t.set(x(1), y(1), &[(XI, int(2)), (x(2), s2(1)), (y(2), s2(1))]);
    t.set(x(2), y(2), &[(XI, int(-2)), (x(1), s2(1))]);
    for i in 3..=m {
        t.set(x(i), y(i), &[(XI, int(-2)), (x(1), s2(1)), (x(2), s2(-1)), (y(2), s2(-1))]);
    }
    for i in m + 1..=n {
        t.set(x(i), y(i), &[(XI, int(-2)), (x(i), s2(-1))]);
    }

    t.set(x(1), y(2), &[(y(1), s2(1)), (x(2), s2(1))]);
    t.set(x(2), y(1), &[(x(1), s2(1))]);
    for i in 1..=2 {
        for j in 3..=m {
            t.set(x(i), y(j), &[(x(j), s2(1))]);
        }
    }
    for i in 3..=m {
        t.set(x(i), y(2), &[(y(i), s2(1))]);
    }
    for i in m + 1..=n {
        for j in 1..=m {
            let xi_yj = t.get(XI, y(j));
            t.set_vec(x(i), y(j), scaled(&xi_yj, &s2(-1)));
        }
    }

    let phi: Vec<i64> = (0..n).flat_map(|_| [1, -1]).collect();
    let mut signs = vec![1];
    signs.extend(std::iter::repeat_n(-1, n - 1));
    standard_structure("ex-mu0-h2+", t.into_frame(n)?, &phi, &signs)
}

fn heisenberg(n: usize) -> Result<ParacontactStructure, CatalogError> {
    let mut t = Table::new(n);
    for i in 1..=n {
        t.set(x(i), y(i), &[(XI, int(2))]);
    }
    let phi: Vec<i64> = (0..n).flat_map(|_| [1, -1]).collect();
    standard_structure("parasasakian-heisenberg", t.into_frame(n)?, &phi, &vec![1; n])
}

/// `e1 = ∂x + f ∂y − 2y ∂z`, `e2 = ∂y`, `ξ = ∂z` on `R³`, with
/// `g(e1, e2) = g(ξ, ξ) = 1`, `φe1 = e1`, `φe2 = −e2`.
fn nonconstant(f: &str) -> Result<ParacontactStructure, CatalogError> {
    let coords = ["x", "y", "z"];
    let p = |t: &str| parse_scalar(t, &coords).expect("builtin coefficient parses");
    let vectors: Vec<Vec<Scalar>> = vec![
        vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        vec![Scalar::one(), p(f), p("-2*y")],
        vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
    ];
    let labels = ["xi", "e1", "e2"].map(String::from).to_vec();
    let frame = FrameSpec::coordinate_frame(labels, Chart::new(coords), vectors)?;
    standard_structure("nonconstant", frame, &[1, -1], &[1])
}
