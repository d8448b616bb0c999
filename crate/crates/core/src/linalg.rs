//! Dense linear algebra over ℚ(√2) (exact) and `f64` (with a fixed
//! tolerance), plus division-free determinants over the [`Scalar`] ring.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::{AlgNum, Scalar};

/// Zero threshold used by the floating-point path.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

/// A field in which zero tests and signs are decidable (exactly for
/// [`AlgNum`], up to [`NUMERIC_TOLERANCE`] for `f64`).
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn sign(&self) -> Ordering;
    /// `√|x|` when it exists in the field.
    fn sqrt_abs(&self) -> Option<Self>;
    fn from_algnum(a: &AlgNum) -> Self;
    fn to_f64(&self) -> f64;
    fn is_exact() -> bool;
}

impl Field for AlgNum {
    fn zero() -> Self {
        AlgNum::zero()
    }
    fn one() -> Self {
        AlgNum::one()
    }
    fn is_zero(&self) -> bool {
        AlgNum::is_zero(self)
    }
    fn sign(&self) -> Ordering {
        self.signum()
    }
    fn sqrt_abs(&self) -> Option<Self> {
        AlgNum::sqrt_abs(self)
    }
    fn from_algnum(a: &AlgNum) -> Self {
        a.clone()
    }
    fn to_f64(&self) -> f64 {
        AlgNum::to_f64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() < NUMERIC_TOLERANCE
    }
    fn sign(&self) -> Ordering {
        if Field::is_zero(self) {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn sqrt_abs(&self) -> Option<Self> {
        Some(self.abs().sqrt())
    }
    fn from_algnum(a: &AlgNum) -> Self {
        a.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Mat::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone())
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(F::zero(), |acc, k| acc + self.get(i, k).clone() * v[k].clone()))
            .collect()
    }

    pub fn add(&self, rhs: &Mat<F>) -> Mat<F> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }

    pub fn sub(&self, rhs: &Mat<F>) -> Mat<F> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self.get(i, j).clone() - self.get(j, i).clone()).is_zero()))
    }

    /// Row echelon form by Gaussian elimination; returns (echelon, pivot columns, sign of row swaps).
    fn echelon(&self) -> (Mat<F>, Vec<usize>, bool) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut flipped = false;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pick = if F::is_exact() {
                (r..m.rows).find(|&i| !m.get(i, c).is_zero())
            } else {
                // partial pivoting for the floating path
                (r..m.rows)
                    .filter(|&i| !m.get(i, c).is_zero())
                    .max_by(|&a, &b| m.get(a, c).to_f64().abs().total_cmp(&m.get(b, c).to_f64().abs()))
            };
            let Some(p) = pick else { continue };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
                flipped = !flipped;
            }
            let piv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let f = m.get(i, c).clone() / piv.clone();
                if f.is_zero() && F::is_exact() {
                    continue;
                }
                for k in c..m.cols {
                    let v = m.get(i, k).clone() - f.clone() * m.get(r, k).clone();
                    m.set(i, k, v);
                }
                m.set(i, c, F::zero());
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, flipped)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let (m, pivots, flipped) = self.echelon();
        if pivots.len() < self.rows {
            return F::zero();
        }
        let d = (0..self.rows).fold(F::one(), |acc, i| acc * m.get(i, i).clone());
        if flipped {
            -d
        } else {
            d
        }
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Mat<F>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        for c in 0..n {
            let p = if F::is_exact() {
                (c..n).find(|&i| !aug.get(i, c).is_zero())?
            } else {
                (c..n).max_by(|&a, &b| aug.get(a, c).to_f64().abs().total_cmp(&aug.get(b, c).to_f64().abs()))?
            };
            if aug.get(p, c).is_zero() {
                return None;
            }
            for k in 0..2 * n {
                aug.data.swap(p * 2 * n + k, c * 2 * n + k);
            }
            let piv = aug.get(c, c).clone();
            for k in 0..2 * n {
                let v = aug.get(c, k).clone() / piv.clone();
                aug.set(c, k, v);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = aug.get(i, c).clone();
                if f.is_zero() && F::is_exact() {
                    continue;
                }
                for k in 0..2 * n {
                    let v = aug.get(i, k).clone() - f.clone() * aug.get(c, k).clone();
                    aug.set(i, k, v);
                }
            }
        }
        Some(Mat::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix by
    /// congruence diagonalisation.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let diag = active.iter().copied().find(|&i| !m.get(i, i).is_zero());
            let p = match diag {
                Some(p) => p,
                None => {
                    let pair = active
                        .iter()
                        .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i < j && !m.get(i, j).is_zero());
                    match pair {
                        None => {
                            zero += active.len();
                            break;
                        }
                        Some((i, j)) => {
                            // e_i ← e_i + e_j gives diagonal 2·m_ij
                            for k in 0..n {
                                let v = m.get(i, k).clone() + m.get(j, k).clone();
                                m.set(i, k, v);
                            }
                            for k in 0..n {
                                let v = m.get(k, i).clone() + m.get(k, j).clone();
                                m.set(k, i, v);
                            }
                            i
                        }
                    }
                }
            };
            let piv = m.get(p, p).clone();
            match piv.sign() {
                Ordering::Greater => pos += 1,
                Ordering::Less => neg += 1,
                Ordering::Equal => unreachable!("pivot is nonzero"),
            }
            active.retain(|&i| i != p);
            for &i in &active {
                let f = m.get(i, p).clone() / piv.clone();
                if f.is_zero() && F::is_exact() {
                    continue;
                }
                for k in 0..n {
                    let v = m.get(i, k).clone() - f.clone() * m.get(p, k).clone();
                    m.set(i, k, v);
                }
                for k in 0..n {
                    let v = m.get(k, i).clone() - f.clone() * m.get(k, p).clone();
                    m.set(k, i, v);
                }
            }
        }
        (pos, neg, zero)
    }

    /// Basis of the null space `{v : M v = 0}` from the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (mut m, pivots, _) = self.echelon();
        // back-substitute to reduced form
        for (r, &c) in pivots.iter().enumerate().rev() {
            let piv = m.get(r, c).clone();
            for k in 0..m.cols {
                let v = m.get(r, k).clone() / piv.clone();
                m.set(r, k, v);
            }
            for i in 0..r {
                let f = m.get(i, c).clone();
                if f.is_zero() && F::is_exact() {
                    continue;
                }
                for k in 0..m.cols {
                    let v = m.get(i, k).clone() - f.clone() * m.get(r, k).clone();
                    m.set(i, k, v);
                }
            }
        }
        (0..m.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![F::zero(); m.cols];
                v[free] = F::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -m.get(r, free).clone();
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal linearly independent subset of the columns,
    /// chosen greedily in order.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().1
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Field::to_f64)
    }
}

impl Mat<AlgNum> {
    pub fn to_scalars(&self) -> Mat<Scalar> {
        self.map(|a| Scalar::constant(a.clone()))
    }
}

/// Bilinear form `uᵀ G v`.
pub fn bilinear<F: Field>(g: &Mat<F>, u: &[F], v: &[F]) -> F {
    let gv = g.mul_vec(v);
    u.iter().zip(gv).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
}

pub fn vec_add<F: Field>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<F: Field>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_scale<F: Field>(u: &[F], c: &F) -> Vec<F> {
    u.iter().map(|a| a.clone() * c.clone()).collect()
}

pub fn vec_is_zero<F: Field>(u: &[F]) -> bool {
    u.iter().all(Field::is_zero)
}

/// Determinant over the scalar ring by expansion along the first row with
/// memoised minors; uses no division.
pub fn scalar_determinant(m: &Mat<Scalar>) -> Scalar {
    assert!(m.is_square());
    let n = m.rows();
    let all: Vec<usize> = (0..n).collect();
    let mut memo = std::collections::HashMap::new();
    minor(m, 0, &all, &mut memo)
}

fn minor(
    m: &Mat<Scalar>,
    row: usize,
    cols: &[usize],
    memo: &mut std::collections::HashMap<Vec<usize>, Scalar>,
) -> Scalar {
    if cols.is_empty() {
        return Scalar::one();
    }
    if let Some(v) = memo.get(cols) {
        return v.clone();
    }
    let mut acc = Scalar::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = minor(m, row + 1, &rest, memo);
        let term = entry * &sub;
        if k % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    memo.insert(cols.to_vec(), acc.clone());
    acc
}

/// Adjugate matrix `adj(M)` with `M · adj(M) = det(M) · I`, division-free.
pub fn scalar_adjugate(m: &Mat<Scalar>) -> Mat<Scalar> {
    let n = m.rows();
    Mat::from_fn(n, n, |i, j| {
        // cofactor C_ji: delete row j, column i
        let sub = Mat::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            m.get(rr, cc).clone()
        });
        let d = if n == 1 { Scalar::one() } else { scalar_determinant(&sub) };
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}
