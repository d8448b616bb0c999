//! Pointwise normal form of a structure with `h² = 0`.
//!
//! At a point `p`, `Ker η_p` splits into `g`-orthogonal planes
//! `L_i = ⟨X_i, Y_i⟩` with `g(X_i, X_i) = g(Y_i, Y_i) = 0`,
//! `g(X_i, Y_i) = ε_i = ±1`, `h X_i = Y_i`, `h Y_i = 0` for `i ≤ m = rank h_p`,
//! plus null pairs spanning `ker h_p ∩ Ker η_p`. All vectors are expressed
//! in frame components at `p`.
//!
//! The exact path works over ℚ(√2). When a normalising square root leaves
//! that field, the construction is redone in `f64` with tolerance
//! [`NUMERIC_TOLERANCE`].

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{bilinear, vec_add, vec_is_zero, vec_scale, vec_sub, Field, Mat, NUMERIC_TOLERANCE};
use crate::scalar::{AlgNum, Scalar, Value};
use crate::structure::{CheckResult, ParacontactStructure, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CanonicalError {
    #[error("coordinate '{0}' has no value")]
    MissingCoordinate(String),
    #[error("'{0}' is not a chart coordinate")]
    UnknownCoordinate(String),
    #[error("h_p^2 is not zero: entry ({row}, {col}) = {value}")]
    HSquaredNonzero { row: usize, col: usize, value: f64 },
    #[error("g_p is degenerate")]
    DegenerateMetric,
    #[error("degenerate subspace met during the construction: {0}")]
    Degenerate(String),
    #[error("normal form check failed: {0}")]
    NormalForm(String),
}

/// h evaluated at a point, exactly when possible.
#[derive(Clone, Debug, PartialEq)]
pub enum PointMatrix {
    Exact(Mat<AlgNum>),
    Numeric(Mat<f64>),
}

impl PointMatrix {
    pub fn to_f64(&self) -> Mat<f64> {
        match self {
            PointMatrix::Exact(m) => m.to_f64(),
            PointMatrix::Numeric(m) => m.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            PointMatrix::Exact(m) => m.rank(),
            PointMatrix::Numeric(m) => m.rank(),
        }
    }
}

/// All tensors of a structure at one point, in frame components.
#[derive(Clone, Debug, PartialEq)]
pub struct PointEvaluation {
    pub point: BTreeMap<String, BigRational>,
    pub g: Mat<AlgNum>,
    pub phi: Mat<AlgNum>,
    pub eta: Vec<AlgNum>,
    pub h: PointMatrix,
    /// True iff every evaluated entry lies in ℚ(√2).
    pub exact: bool,
}

impl PointEvaluation {
    /// Builds an evaluation from matrices, e.g. for a single tangent space
    /// not coming from a structure.
    pub fn from_parts(g: Mat<AlgNum>, phi: Mat<AlgNum>, eta: Vec<AlgNum>, h: PointMatrix) -> Self {
        let exact = matches!(h, PointMatrix::Exact(_));
        PointEvaluation { point: BTreeMap::new(), g, phi, eta, h, exact }
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// `ξ_p` in frame components.
    pub fn xi(&self) -> Vec<AlgNum> {
        let mut v = vec![AlgNum::zero(); self.dim()];
        v[0] = AlgNum::one();
        v
    }

    pub fn h_rank(&self) -> usize {
        self.h.rank()
    }
}

/// Parses `x,y,z`-style values against the chart order.
pub fn point_from_values(coords: &[String], values: &[BigRational]) -> Result<BTreeMap<String, BigRational>, CanonicalError> {
    if values.len() < coords.len() {
        return Err(CanonicalError::MissingCoordinate(coords[values.len()].clone()));
    }
    if values.len() > coords.len() {
        return Err(CanonicalError::UnknownCoordinate(format!("#{}", coords.len() + 1)));
    }
    Ok(coords.iter().cloned().zip(values.iter().cloned()).collect())
}

pub fn evaluate_at_point(
    s: &ParacontactStructure,
    point: &BTreeMap<String, BigRational>,
) -> Result<PointEvaluation, CanonicalError> {
    let coords: Vec<String> = s.frame().chart().map(|c| c.coords().to_vec()).unwrap_or_default();
    for c in &coords {
        if !point.contains_key(c) {
            return Err(CanonicalError::MissingCoordinate(c.clone()));
        }
    }
    if let Some(extra) = point.keys().find(|k| !coords.contains(k)) {
        return Err(CanonicalError::UnknownCoordinate(extra.clone()));
    }
    let hm = s.h().matrix();
    let values: Vec<Value> = hm.entries().map(|(_, _, e)| e.evaluate(point)).collect();
    let exact = values.iter().all(|v| v.exact().is_some());
    let dim = s.dim();
    let h = if exact {
        PointMatrix::Exact(Mat::from_fn(dim, dim, |i, j| values[i * dim + j].exact().expect("exact").clone()))
    } else {
        PointMatrix::Numeric(Mat::from_fn(dim, dim, |i, j| values[i * dim + j].to_f64()))
    };
    Ok(PointEvaluation {
        point: point.clone(),
        g: s.metric().matrix().clone(),
        phi: s.phi().clone(),
        eta: s.eta().to_vec(),
        h,
        exact,
    })
}

/// A point of the chart, coordinate name to exact value.
pub type Point = BTreeMap<String, BigRational>;

/// `(point, rank h_p)` for each point.
pub fn h_rank_profile(s: &ParacontactStructure, points: &[Point]) -> Result<Vec<(Point, usize)>, CanonicalError> {
    points.iter().map(|p| Ok((p.clone(), evaluate_at_point(s, p)?.h_rank()))).collect()
}

/// The basis `{ξ, X_1, Y_1, …, X_n, Y_n}` and its certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalBasis<F> {
    pub xi: Vec<F>,
    /// `(X_i, Y_i)`; the first `rank` pairs carry h.
    pub pairs: Vec<(Vec<F>, Vec<F>)>,
    /// `ε_i = g(X_i, Y_i)`.
    pub signs: Vec<i8>,
    pub rank: usize,
    /// Gram matrix of `g_p` in the new basis.
    pub gram: Mat<F>,
    /// Matrix of `h_p` in the new basis.
    pub h_matrix: Mat<F>,
    /// Pairs (1-based) whose seed vector was not isotropic and received the
    /// correction `v' = v − g(v,v)/(2 g(v,hv)) hv`.
    pub isotropic_corrections: Vec<usize>,
    /// Pairs (1-based) whose seed was a sum `s + t` because every single
    /// candidate had `g(v, hv) = 0`.
    pub summed_seeds: Vec<usize>,
}

impl<F: Field> CanonicalBasis<F> {
    /// Columns `ξ, X_1, Y_1, …`.
    pub fn change_of_basis(&self) -> Mat<F> {
        let mut cols = vec![self.xi.clone()];
        for (x, y) in &self.pairs {
            cols.push(x.clone());
            cols.push(y.clone());
        }
        Mat::from_columns(&cols)
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CanonicalBasisResult {
    Exact(CanonicalBasis<AlgNum>),
    Numeric(CanonicalBasis<f64>),
}

impl CanonicalBasisResult {
    pub fn is_exact(&self) -> bool {
        matches!(self, CanonicalBasisResult::Exact(_))
    }

    pub fn rank(&self) -> usize {
        match self {
            CanonicalBasisResult::Exact(b) => b.rank,
            CanonicalBasisResult::Numeric(b) => b.rank,
        }
    }

    pub fn signs(&self) -> &[i8] {
        match self {
            CanonicalBasisResult::Exact(b) => &b.signs,
            CanonicalBasisResult::Numeric(b) => &b.signs,
        }
    }

    pub fn isotropic_corrections(&self) -> &[usize] {
        match self {
            CanonicalBasisResult::Exact(b) => &b.isotropic_corrections,
            CanonicalBasisResult::Numeric(b) => &b.isotropic_corrections,
        }
    }

    pub fn exact(&self) -> Option<&CanonicalBasis<AlgNum>> {
        match self {
            CanonicalBasisResult::Exact(b) => Some(b),
            CanonicalBasisResult::Numeric(_) => None,
        }
    }

    /// Swaps `X_i` and `Y_i` (1-based); only useful to build invalid bases.
    pub fn swap_pair(&mut self, i: usize) {
        match self {
            CanonicalBasisResult::Exact(b) => {
                let (x, y) = &mut b.pairs[i - 1];
                std::mem::swap(x, y);
            }
            CanonicalBasisResult::Numeric(b) => {
                let (x, y) = &mut b.pairs[i - 1];
                std::mem::swap(x, y);
            }
        }
    }

    pub fn to_view(&self, labels: &[String]) -> CanonicalView {
        match self {
            CanonicalBasisResult::Exact(b) => CanonicalView::new(b, labels, true, |a| a.to_string()),
            CanonicalBasisResult::Numeric(b) => CanonicalView::new(b, labels, false, |x| format!("{x:.12}")),
        }
    }
}

/// Printable form of a basis, with vectors rendered over the frame labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalView {
    pub exact: bool,
    pub rank: usize,
    pub signs: Vec<i8>,
    pub xi: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub gram: Vec<Vec<String>>,
    pub h_matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub isotropic_corrections: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub summed_seeds: Vec<usize>,
}

impl CanonicalView {
    fn new<F: Field>(b: &CanonicalBasis<F>, labels: &[String], exact: bool, fmt: impl Fn(&F) -> String) -> Self {
        let render = |v: &[F]| {
            let mut out = String::new();
            for (c, l) in v.iter().zip(labels) {
                if c.is_zero() {
                    continue;
                }
                let text = fmt(c);
                let term = if text == "1" {
                    l.clone()
                } else if text == "-1" {
                    format!("-{l}")
                } else if text.contains(' ') {
                    format!("({text})*{l}")
                } else {
                    format!("{text}*{l}")
                };
                if out.is_empty() {
                    out = term;
                } else if let Some(rest) = term.strip_prefix('-') {
                    out = format!("{out} - {rest}");
                } else {
                    out = format!("{out} + {term}");
                }
            }
            if out.is_empty() {
                "0".to_string()
            } else {
                out
            }
        };
        let rows = |m: &Mat<F>| (0..m.rows()).map(|r| m.row(r).iter().map(&fmt).collect()).collect();
        CanonicalView {
            exact,
            rank: b.rank,
            signs: b.signs.clone(),
            xi: render(&b.xi),
            x: b.pairs.iter().map(|(x, _)| render(x)).collect(),
            y: b.pairs.iter().map(|(_, y)| render(y)).collect(),
            gram: rows(&b.gram),
            h_matrix: rows(&b.h_matrix),
            isotropic_corrections: b.isotropic_corrections.clone(),
            summed_seeds: b.summed_seeds.clone(),
        }
    }
}

impl std::fmt::Display for CanonicalView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "  {} basis, rank(h_p) = {}", if self.exact { "exact" } else { "numeric" }, self.rank)?;
        writeln!(f, "  xi = {}", self.xi)?;
        for (i, (x, y)) in self.x.iter().zip(&self.y).enumerate() {
            writeln!(f, "  X{0} = {x}\n  Y{0} = {y}\n  eps{0} = {1:+}", i + 1, self.signs[i])?;
        }
        for i in &self.isotropic_corrections {
            writeln!(
                f,
                "  note: pair {i} used v' = v - g(v,v)/(2 g(v,hv)) hv; the coefficient without the 2 does not give g(v',v') = 0"
            )?;
        }
        for i in &self.summed_seeds {
            writeln!(f, "  note: pair {i} was seeded with a sum of two vectors since g(v, hv) = 0 for each single one")?;
        }
        Ok(())
    }
}

fn degenerate(what: &str) -> CanonicalError {
    CanonicalError::Degenerate(what.to_string())
}

fn sign_of<F: Field>(x: &F) -> i8 {
    match x.sign() {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

fn independent<F: Field>(vectors: Vec<Vec<F>>) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return vectors;
    }
    let keep = Mat::from_columns(&vectors).independent_columns();
    keep.into_iter().map(|i| vectors[i].clone()).collect()
}

/// First `s + t` over pairs with `form(s, t) != 0`.
fn pair_sum<F: Field>(space: &[Vec<F>], form: impl Fn(&[F], &[F]) -> F) -> Option<Vec<F>> {
    for (a, s) in space.iter().enumerate() {
        for t in &space[a + 1..] {
            if !form(s, t).is_zero() {
                return Some(vec_add(s, t));
            }
        }
    }
    None
}

/// The construction before normalisation: every step is rational in the
/// inputs, so it stays exact. `X_i ∝ v`, `Y_i ∝ hv` with `b = g(v, hv)`;
/// the vectors of `ker h_p ∩ Ker η_p` are `u` with `c = g(u, u)`.
struct Skeleton<F> {
    h_pairs: Vec<(Vec<F>, Vec<F>, F)>,
    positive: Vec<(Vec<F>, F)>,
    negative: Vec<(Vec<F>, F)>,
    corrections: Vec<usize>,
    summed: Vec<usize>,
}

impl Skeleton<AlgNum> {
    fn to_f64(&self) -> Skeleton<f64> {
        let v = |x: &[AlgNum]| x.iter().map(AlgNum::to_f64).collect::<Vec<_>>();
        let units = |list: &[(Vec<AlgNum>, AlgNum)]| list.iter().map(|(u, c)| (v(u), c.to_f64())).collect();
        Skeleton {
            h_pairs: self.h_pairs.iter().map(|(x, y, b)| (v(x), v(y), b.to_f64())).collect(),
            positive: units(&self.positive),
            negative: units(&self.negative),
            corrections: self.corrections.clone(),
            summed: self.summed.clone(),
        }
    }
}

fn skeleton<F: Field>(g: &Mat<F>, h: &Mat<F>, eta: &[F]) -> Result<Skeleton<F>, CanonicalError> {
    let dim = g.rows();
    let n = (dim - 1) / 2;
    let h2 = h.mul(h);
    if let Some((r, c, v)) = h2.entries().find(|(_, _, v)| !v.is_zero()) {
        return Err(CanonicalError::HSquaredNonzero { row: r, col: c, value: v.to_f64() });
    }
    if g.determinant().is_zero() {
        return Err(CanonicalError::DegenerateMetric);
    }
    let gf = |u: &[F], v: &[F]| bilinear(g, u, v);
    let hv = |v: &[F]| h.mul_vec(v);

    let mut space = Mat::from_rows(vec![eta.to_vec()]).kernel_basis();
    let mut sk = Skeleton { h_pairs: Vec::new(), positive: Vec::new(), negative: Vec::new(), corrections: Vec::new(), summed: Vec::new() };

    while space.iter().any(|v| !vec_is_zero(&hv(v))) {
        let index = sk.h_pairs.len() + 1;
        let v = match space.iter().find(|v| !vec_is_zero(&hv(v)) && !gf(v, &hv(v)).is_zero()) {
            Some(v) => v.clone(),
            None => {
                // g(s + t, h(s + t)) = 2 g(s, h t) when g(s, hs) = g(t, ht) = 0
                sk.summed.push(index);
                pair_sum(&space, |s, t| gf(s, &hv(t)))
                    .ok_or_else(|| degenerate("h_p v != 0 but g(v, h_p w) = 0 on the whole complement"))?
            }
        };
        let b = gf(&v, &hv(&v));
        let vv = gf(&v, &v);
        let v = if vv.is_zero() {
            v
        } else {
            sk.corrections.push(index);
            let two = F::one() + F::one();
            vec_sub(&v, &vec_scale(&hv(&v), &(vv / (two * b.clone()))))
        };
        let w = hv(&v);
        // w - ε g(w, Y) X - ε g(w, X) Y with X = v/√|b|, Y = hv/√|b|
        let projected: Vec<Vec<F>> = space
            .iter()
            .map(|u| {
                let a = gf(u, &w) / b.clone();
                let c = gf(u, &v) / b.clone();
                vec_sub(&vec_sub(u, &vec_scale(&v, &a)), &vec_scale(&w, &c))
            })
            .collect();
        space = independent(projected);
        if space.len() + 2 * index != 2 * n {
            return Err(degenerate("complement of L_i has the wrong dimension"));
        }
        sk.h_pairs.push((v, w, b));
    }

    // pseudo-orthogonal basis of V = ker h_p ∩ Ker η_p
    while !space.is_empty() {
        let u = match space.iter().find(|u| !gf(u, u).is_zero()) {
            Some(u) => u.clone(),
            None => pair_sum(&space, gf).ok_or_else(|| degenerate("ker h_p is degenerate"))?,
        };
        let c = gf(&u, &u);
        let before = space.len();
        space = independent(space.iter().map(|w| vec_sub(w, &vec_scale(&u, &(gf(w, &u) / c.clone())))).collect());
        if space.len() + 1 != before {
            return Err(degenerate("Gram-Schmidt step lost more than one dimension"));
        }
        if c.sign() == Ordering::Greater {
            sk.positive.push((u, c));
        } else {
            sk.negative.push((u, c));
        }
    }
    if sk.positive.len() != sk.negative.len() {
        return Err(degenerate("ker h_p does not have neutral signature"));
    }
    Ok(sk)
}

/// Normalises a skeleton; `Ok(None)` when a square root is not in `F`.
fn finalize<F: Field>(
    sk: &Skeleton<F>,
    g: &Mat<F>,
    h: &Mat<F>,
    phi: &Mat<F>,
) -> Result<Option<CanonicalBasis<F>>, CanonicalError> {
    let dim = g.rows();
    let n = (dim - 1) / 2;
    let mut pairs = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (v, w, b) in &sk.h_pairs {
        let Some(root) = b.sqrt_abs() else { return Ok(None) };
        let inv = F::one() / root;
        pairs.push((vec_scale(v, &inv), vec_scale(w, &inv)));
        signs.push(sign_of(b));
    }
    let unit = |(u, c): &(Vec<F>, F)| c.sqrt_abs().map(|r| vec_scale(u, &(F::one() / r)));
    let inv_sqrt2 = F::one() / F::from_algnum(&AlgNum::sqrt2());
    for (p, q) in sk.positive.iter().zip(&sk.negative) {
        let (Some(v), Some(w)) = (unit(p), unit(q)) else { return Ok(None) };
        pairs.push((vec_scale(&vec_add(&v, &w), &inv_sqrt2), vec_scale(&vec_sub(&v, &w), &inv_sqrt2)));
        signs.push(1);
    }

    let mut xi = vec![F::zero(); dim];
    xi[0] = F::one();
    let mut basis = CanonicalBasis {
        xi,
        pairs,
        signs,
        rank: sk.h_pairs.len(),
        gram: Mat::zeros(0, 0),
        h_matrix: Mat::zeros(0, 0),
        isotropic_corrections: sk.corrections.clone(),
        summed_seeds: sk.summed.clone(),
    };
    let b = basis.change_of_basis();
    let b_inv = b.inverse().ok_or_else(|| degenerate("basis is not invertible"))?;
    basis.gram = b.transpose().mul(g).mul(&b);
    basis.h_matrix = b_inv.mul(h).mul(&b);
    if let Some(msg) = normal_form_violation(&basis) {
        return Err(CanonicalError::NormalForm(msg));
    }
    if n == 1 && basis.rank >= 1 {
        let (x, y) = &basis.pairs[0];
        let px = phi.mul_vec(x);
        let py = phi.mul_vec(y);
        let plus = vec_is_zero(&vec_sub(&px, x)) && vec_is_zero(&vec_add(&py, y));
        let minus = vec_is_zero(&vec_add(&px, x)) && vec_is_zero(&vec_sub(&py, y));
        if !plus && !minus {
            return Err(CanonicalError::NormalForm("phi X1 is not +-X1 with phi Y1 = -+Y1".into()));
        }
    }
    Ok(Some(basis))
}

/// Expected Gram matrix and h-matrix for given signs and rank.
fn normal_forms<F: Field>(signs: &[i8], rank: usize) -> (Mat<F>, Mat<F>) {
    let dim = 2 * signs.len() + 1;
    let mut gram = Mat::zeros(dim, dim);
    let mut hm = Mat::zeros(dim, dim);
    gram.set(0, 0, F::one());
    for (i, s) in signs.iter().enumerate() {
        let (x, y) = (2 * i + 1, 2 * i + 2);
        let e = if *s > 0 { F::one() } else { -F::one() };
        gram.set(x, y, e.clone());
        gram.set(y, x, e);
        if i < rank {
            hm.set(y, x, F::one());
        }
    }
    (gram, hm)
}

fn normal_form_violation<F: Field>(b: &CanonicalBasis<F>) -> Option<String> {
    if b.signs.iter().any(|s| s.abs() != 1) {
        return Some("a sign is not +-1".into());
    }
    let (gram, hm) = normal_forms::<F>(&b.signs, b.rank);
    if let Some((i, j, _)) = gram.entries().find(|(i, j, e)| !(b.gram.get(*i, *j).clone() - (*e).clone()).is_zero()) {
        return Some(format!("Gram entry ({i}, {j})"));
    }
    if let Some((i, j, _)) = hm.entries().find(|(i, j, e)| !(b.h_matrix.get(*i, *j).clone() - (*e).clone()).is_zero()) {
        return Some(format!("h entry ({i}, {j})"));
    }
    None
}

/// Runs the construction exactly. Only the final normalisation falls back
/// to `f64`, when a square root leaves ℚ(√2); an inexact evaluation of h
/// runs entirely in `f64`.
pub fn canonical_basis(pe: &PointEvaluation) -> Result<CanonicalBasisResult, CanonicalError> {
    let (gf, phif) = (pe.g.to_f64(), pe.phi.to_f64());
    match &pe.h {
        PointMatrix::Exact(h) => {
            let sk = skeleton(&pe.g, h, &pe.eta)?;
            if let Some(b) = finalize(&sk, &pe.g, h, &pe.phi)? {
                return Ok(CanonicalBasisResult::Exact(b));
            }
            let b = finalize(&sk.to_f64(), &gf, &h.to_f64(), &phif)?.expect("f64 square roots exist");
            Ok(CanonicalBasisResult::Numeric(b))
        }
        PointMatrix::Numeric(h) => {
            let eta: Vec<f64> = pe.eta.iter().map(AlgNum::to_f64).collect();
            let sk = skeleton(&gf, h, &eta)?;
            let b = finalize(&sk, &gf, h, &phif)?.expect("f64 square roots exist");
            Ok(CanonicalBasisResult::Numeric(b))
        }
    }
}

fn witness_scalar(x: f64) -> Scalar {
    BigRational::from_f64(x).map(|q| Scalar::constant(AlgNum::from_rational(q))).unwrap_or_else(Scalar::one)
}

fn verify_generic<F: Field>(b: &CanonicalBasis<F>, g: &Mat<F>, h: &Mat<F>, r: &mut VerificationReport, witness: impl Fn(&F) -> Scalar) {
    let basis = b.change_of_basis();
    let dim = basis.rows();
    let inverse = basis.inverse();
    r.push(match &inverse {
        Some(_) => CheckResult::pass("basis is invertible"),
        None => CheckResult::fail("basis is invertible", "det(basis)", Scalar::one()),
    });
    let Some(inverse) = inverse else { return };
    let gram = basis.transpose().mul(g).mul(&basis);
    let hm = inverse.mul(h).mul(&basis);
    let (egram, ehm) = normal_forms::<F>(&b.signs, b.rank);
    let name = |k: usize| match k {
        0 => "xi".to_string(),
        k if k % 2 == 1 => format!("X{}", k.div_ceil(2)),
        k => format!("Y{}", k / 2),
    };
    let diff = |a: &Mat<F>, e: &Mat<F>, what: &str| {
        (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let d = a.get(i, j).clone() - e.get(i, j).clone();
                (!d.is_zero()).then(|| (format!("{what}({}, {}) - expected", name(i), name(j)), witness(&d)))
            })
            .collect::<Vec<_>>()
    };
    r.push(CheckResult::residuals("Gram matrix in normal form", diff(&gram, &egram, "g")));
    r.push(CheckResult::residuals("h in normal form", diff(&hm, &ehm, "h")));
    r.push(if b.signs.iter().all(|s| s.abs() == 1) {
        CheckResult::pass("signs are +-1")
    } else {
        CheckResult::fail("signs are +-1", "sign", Scalar::one())
    });
}

/// Recomputes the Gram and h matrices from the basis and the original
/// `g_p`, `h_p`, and checks every normal-form invariant and `m = rank h_p`.
pub fn verify_normal_form(result: &CanonicalBasisResult, pe: &PointEvaluation) -> VerificationReport {
    let mut r = VerificationReport::new("normal form at the point");
    match result {
        CanonicalBasisResult::Exact(b) => match &pe.h {
            PointMatrix::Exact(h) => verify_generic(b, &pe.g, h, &mut r, |d| Scalar::constant(d.clone())),
            PointMatrix::Numeric(h) => {
                let bf = to_numeric(b);
                verify_generic(&bf, &pe.g.to_f64(), h, &mut r, |d| witness_scalar(*d))
            }
        },
        CanonicalBasisResult::Numeric(b) => verify_generic(b, &pe.g.to_f64(), &pe.h.to_f64(), &mut r, |d| witness_scalar(*d)),
    }
    let m = pe.h_rank();
    let k = result.rank();
    r.push(if m == k {
        CheckResult::pass("m = rank(h_p)")
    } else {
        CheckResult::fail("m = rank(h_p)", "m - rank(h_p)", Scalar::from_int(k as i64 - m as i64))
    });
    r
}

fn to_numeric(b: &CanonicalBasis<AlgNum>) -> CanonicalBasis<f64> {
    let v = |x: &Vec<AlgNum>| x.iter().map(AlgNum::to_f64).collect::<Vec<_>>();
    CanonicalBasis {
        xi: v(&b.xi),
        pairs: b.pairs.iter().map(|(x, y)| (v(x), v(y))).collect(),
        signs: b.signs.clone(),
        rank: b.rank,
        gram: b.gram.to_f64(),
        h_matrix: b.h_matrix.to_f64(),
        isotropic_corrections: b.isotropic_corrections.clone(),
        summed_seeds: b.summed_seeds.clone(),
    }
}

/// Tolerance used when the construction runs in `f64`.
pub const fn numeric_tolerance() -> f64 {
    NUMERIC_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::instantiate_builtin;
    use crate::scalar::int_point;

    fn builtin(name: &str, params: &[(&str, i64)]) -> ParacontactStructure {
        let p: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        instantiate_builtin(name, &p).unwrap()
    }

    fn xyz(x: i64, y: i64, z: i64) -> BTreeMap<String, BigRational> {
        int_point(&[("x", x), ("y", y), ("z", z)])
    }

    #[test]
    fn evaluation_exactness() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        let pe = evaluate_at_point(&s, &xyz(1, 0, 0)).unwrap();
        assert!(pe.exact);
        let PointMatrix::Exact(h) = &pe.h else { panic!() };
        assert_eq!(h.get(2, 1), &AlgNum::one());

        let s = builtin("ex-mu0-nonconstant", &[]);
        let pe = evaluate_at_point(&s, &xyz(1, 0, 0)).unwrap();
        let PointMatrix::Exact(h) = &pe.h else { panic!() };
        assert_eq!(h.get(2, 1), &AlgNum::from_int(-2));
        assert!(!evaluate_at_point(&s, &xyz(1, 0, 1)).unwrap().exact);
        assert!(matches!(evaluate_at_point(&s, &int_point(&[("x", 1)])), Err(CanonicalError::MissingCoordinate(_))));
    }

    #[test]
    fn rank_profiles() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        let ranks: Vec<usize> =
            h_rank_profile(&s, &[xyz(0, 1, 2), xyz(1, 0, 0), xyz(-2, 3, 1)]).unwrap().into_iter().map(|p| p.1).collect();
        assert_eq!(ranks, vec![0, 1, 1]);
        let s = builtin("ex-mu0-nonconstant", &[]);
        let ranks: Vec<usize> = h_rank_profile(&s, &[xyz(0, 0, 0), xyz(5, 1, 1)]).unwrap().into_iter().map(|p| p.1).collect();
        assert_eq!(ranks, vec![0, 1]);
    }

    #[test]
    fn basis_sign_follows_x() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        for x in [1, -1, -2] {
            let pe = evaluate_at_point(&s, &xyz(x, 3, 0)).unwrap();
            let res = canonical_basis(&pe).unwrap();
            assert_eq!(res.rank(), 1);
            assert_eq!(res.signs(), &[x.signum() as i8]);
            assert!(verify_normal_form(&res, &pe).passed());
        }
        // at x = 1: X1 = e1, Y1 = h e1 = e2
        let pe = evaluate_at_point(&s, &xyz(1, 0, 0)).unwrap();
        let b = canonical_basis(&pe).unwrap();
        let b = b.exact().unwrap();
        let e = |k: usize| (0..3).map(|i| AlgNum::from_int(i64::from(i == k))).collect::<Vec<_>>();
        assert_eq!(b.pairs[0], (e(1), e(2)));
    }

    #[test]
    fn vanishing_h_gives_null_pairs() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        let pe = evaluate_at_point(&s, &xyz(0, 1, 1)).unwrap();
        let res = canonical_basis(&pe).unwrap();
        assert_eq!(res.rank(), 0);
        assert!(verify_normal_form(&res, &pe).passed());
        let s = builtin("parasasakian-heisenberg", &[("n", 3)]);
        let pe = evaluate_at_point(&s, &BTreeMap::new()).unwrap();
        let res = canonical_basis(&pe).unwrap();
        assert_eq!(res.rank(), 0);
        assert_eq!(res.signs(), &[1, 1, 1]);
    }

    #[test]
    fn swapped_pair_fails() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        let pe = evaluate_at_point(&s, &xyz(-2, 0, 0)).unwrap();
        let mut res = canonical_basis(&pe).unwrap();
        res.swap_pair(1);
        let r = verify_normal_form(&res, &pe);
        assert!(!r.check("h in normal form").unwrap().passed);
    }

    #[test]
    fn constant_rank_examples() {
        let s = builtin("ex-mu0-h1", &[("n", 2)]);
        let pe = evaluate_at_point(&s, &BTreeMap::new()).unwrap();
        let res = canonical_basis(&pe).unwrap();
        assert_eq!(res.rank(), 1);
        assert!(verify_normal_form(&res, &pe).passed());

        let s = builtin("ex-mu2-hm-n", &[("n", 3), ("m", 2)]);
        let pe = evaluate_at_point(&s, &BTreeMap::new()).unwrap();
        assert_eq!(pe.h_rank(), 2);
        let res = canonical_basis(&pe).unwrap();
        assert!(verify_normal_form(&res, &pe).passed());
    }

    #[test]
    fn non_isotropic_seed_is_corrected() {
        // g = diag-free normal form, h e1 = e2; seed v = e1 + e2 has g(v,v) = 2
        let dim = 3;
        let mut g = Mat::<AlgNum>::zeros(dim, dim);
        g.set(0, 0, AlgNum::one());
        g.set(1, 2, AlgNum::one());
        g.set(2, 1, AlgNum::one());
        g.set(1, 1, AlgNum::from_int(2));
        let mut h = Mat::<AlgNum>::zeros(dim, dim);
        h.set(2, 1, AlgNum::one());
        let mut phi = Mat::<AlgNum>::zeros(dim, dim);
        phi.set(1, 1, AlgNum::one());
        phi.set(2, 1, AlgNum::from_int(-2));
        phi.set(2, 2, AlgNum::from_int(-1));
        let eta = vec![AlgNum::one(), AlgNum::zero(), AlgNum::zero()];
        let pe = PointEvaluation::from_parts(g, phi, eta, PointMatrix::Exact(h));
        let res = canonical_basis(&pe).unwrap();
        assert_eq!(res.isotropic_corrections(), &[1]);
        assert!(verify_normal_form(&res, &pe).passed());
    }
}
