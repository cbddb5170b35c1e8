//! Dense matrices over exact and numeric scalars.
//!
//! One generic [`Matrix<T>`] covers integer, rational, symbolic and numeric
//! entries through the small [`Ring`] trait. Characteristic polynomials and
//! determinants use the division-free Berkowitz algorithm so they work over
//! any of the coefficient rings, including the symbolic one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{ApproxComplex, BigFloat};
use crate::scalar::SymScalar;
use crate::{Error, Result};

/// Minimal commutative-ring interface for matrix entries.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_is_zero(&self) -> bool;
}

impl Ring for BigInt {
    fn ring_zero() -> Self {
        BigInt::zero()
    }
    fn ring_one() -> Self {
        BigInt::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for BigRational {
    fn ring_zero() -> Self {
        BigRational::zero()
    }
    fn ring_one() -> Self {
        BigRational::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for SymScalar {
    fn ring_zero() -> Self {
        SymScalar::zero()
    }
    fn ring_one() -> Self {
        SymScalar::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Default precision for identity elements; real entries always carry their
/// own precision and minimum-propagation keeps results at the working one.
const NEUTRAL_BITS: u32 = 1024;

impl Ring for ApproxComplex {
    fn ring_zero() -> Self {
        ApproxComplex::zero(NEUTRAL_BITS)
    }
    fn ring_one() -> Self {
        ApproxComplex::one(NEUTRAL_BITS)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;
pub type ScalarMatrix = Matrix<SymScalar>;
pub type CxMatrix = Matrix<ApproxComplex>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Ring> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::ring_zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::ring_one() } else { T::ring_zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        *self.at(i, j) == T::ring_one()
                    } else {
                        self.at(i, j).ring_is_zero()
                    }
                })
            })
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| *self.at(i, i) == T::ring_one())
            && (1..self.rows).all(|i| (0..i).all(|j| self.at(i, j).ring_is_zero()))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.ring_mul(c))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::ring_zero();
                for j in 0..self.cols {
                    acc = acc.ring_add(&self.at(i, j).ring_mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Submatrix on the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]).clone())
    }

    /// Coefficients `c_0..=c_n` of the characteristic polynomial
    /// `det(t*I - A) = sum c_i t^i` (monic), by the division-free Berkowitz
    /// algorithm.
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return vec![T::ring_one()];
        }
        // descending-order coefficient vector of det(tI - A_r)
        let mut v = vec![T::ring_one(), self.at(0, 0).ring_neg()];
        for r in 2..=n {
            // principal block M (size r-1), row R, column C, corner a
            let m_idx: Vec<usize> = (0..r - 1).collect();
            let m = self.submatrix(&m_idx, &m_idx);
            let row: Vec<T> = (0..r - 1).map(|j| self.at(r - 1, j).clone()).collect();
            let col: Vec<T> = (0..r - 1).map(|i| self.at(i, r - 1).clone()).collect();
            let a = self.at(r - 1, r - 1).clone();
            // first column of the Toeplitz operator:
            // (1, -a, -R C, -R M C, -R M^2 C, ...)
            let mut first = Vec::with_capacity(r + 1);
            first.push(T::ring_one());
            first.push(a.ring_neg());
            let mut w = col.clone();
            for _ in 0..r - 1 {
                let mut dot = T::ring_zero();
                for (x, y) in row.iter().zip(w.iter()) {
                    dot = dot.ring_add(&x.ring_mul(y));
                }
                first.push(dot.ring_neg());
                w = m.mul_vec(&w);
            }
            // v_new[i] = sum_j first[i - j] * v[j]
            let mut v_new = vec![T::ring_zero(); r + 1];
            for (i, slot) in v_new.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < first.len() {
                        *slot = slot.ring_add(&first[i - j].ring_mul(vj));
                    }
                }
            }
            v = v_new;
        }
        v.reverse(); // ascending order c_0..c_n
        v
    }

    /// Determinant via the characteristic polynomial: `det A = (-1)^n c_0`.
    pub fn det(&self) -> T {
        let n = self.rows;
        let c0 = self.charpoly().remove(0);
        if n % 2 == 0 {
            c0
        } else {
            c0.ring_neg()
        }
    }

    /// `r`-th compound matrix: entry `(I, J)` is the minor of `self` on rows
    /// `I` and columns `J`, both running over `r`-subsets in lexicographic
    /// order.
    pub fn compound(&self, r: usize) -> Result<Self> {
        if r == 0 || r > self.rows || r > self.cols {
            return Err(Error::invalid(format!(
                "compound order {r} out of range for {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let row_sets = subsets_lex(self.rows, r);
        let col_sets = subsets_lex(self.cols, r);
        Ok(Matrix::from_fn(row_sets.len(), col_sets.len(), |i, j| {
            self.submatrix(&row_sets[i], &col_sets[j]).det()
        }))
    }

    /// Nilpotency index: smallest `m <= n` with `A^m = 0`, if any.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        let n = self.rows;
        let mut p = Matrix::identity(n);
        for m in 0..=n {
            if p.data.iter().all(|x: &T| x.ring_is_zero()) {
                return Some(m);
            }
            p = &p * self;
        }
        None
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).ring_add(rhs.at(i, j)))
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).ring_sub(rhs.at(i, j)))
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::ring_zero();
            for k in 0..self.cols {
                acc = acc.ring_add(&self.at(i, k).ring_mul(rhs.at(k, j)));
            }
            acc
        })
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| x.ring_neg())
    }
}

/// All `r`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn subsets_lex(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    if r == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let mut i = r as isize - 1;
        while i >= 0 && cur[i as usize] == n - r + i as usize {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Binomial coefficient with the convention `C(m, j) = 0` for `j < 0` or `j > m`.
pub fn binomial(m: i64, j: i64) -> BigInt {
    if j < 0 || j > m {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    let j = j.min(m - j);
    for t in 0..j {
        acc = acc * BigInt::from(m - t) / BigInt::from(t + 1);
    }
    acc
}

impl Matrix<BigInt> {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Matrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn to_scalar(&self) -> ScalarMatrix {
        self.map(|x| SymScalar::from_rational(BigRational::from_integer(x.clone())))
    }

    /// Exact inverse; requires the inverse to be integral (unimodular input).
    pub fn inv_unimodular(&self) -> Result<IntMatrix> {
        let inv = self.to_rational().inv()?;
        let mut out = Matrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = inv.at(i, j);
                if !e.denom().is_one() {
                    return Err(Error::invalid("matrix inverse is not integral"));
                }
                out.set(i, j, e.numer().clone());
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

impl Matrix<BigRational> {
    /// Exact Gauss–Jordan inverse.
    pub fn inv(&self) -> Result<RatMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut b: RatMatrix = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| !a.at(i, col).is_zero())
                .ok_or_else(|| Error::Singular("rational inverse".into()))?;
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.at(pivot, j).clone(), a.at(col, j).clone());
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let (x, y) = (b.at(pivot, j).clone(), b.at(col, j).clone());
                    b.set(pivot, j, y);
                    b.set(col, j, x);
                }
            }
            let inv_p = a.at(col, col).recip();
            for j in 0..n {
                a.set(col, j, a.at(col, j) * &inv_p);
                b.set(col, j, b.at(col, j) * &inv_p);
            }
            for i in 0..n {
                if i != col && !a.at(i, col).is_zero() {
                    let f = a.at(i, col).clone();
                    for j in 0..n {
                        let av = a.at(i, j) - &(a.at(col, j) * &f);
                        a.set(i, j, av);
                        let bv = b.at(i, j) - &(b.at(col, j) * &f);
                        b.set(i, j, bv);
                    }
                }
            }
        }
        Ok(b)
    }
}

impl Matrix<SymScalar> {
    /// Inverse of `I + N` with `N` nilpotent, as the finite geometric series.
    pub fn inv_unipotent(&self) -> Result<ScalarMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let nil = self - &Matrix::identity(n);
        if nil.nilpotency_index().is_none() {
            return Err(Error::NotNilpotent);
        }
        let mut acc: ScalarMatrix = Matrix::identity(n);
        let mut p: ScalarMatrix = Matrix::identity(n);
        for k in 1..=n {
            p = &p * &nil;
            if k % 2 == 1 {
                acc = &acc - &p;
            } else {
                acc = &acc + &p;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, bits: u32) -> CxMatrix {
        self.map(|x| x.eval(bits))
    }

    pub fn max_abs_eval(&self, bits: u32) -> BigFloat {
        let m = self.eval(bits);
        m.data
            .iter()
            .map(|z| z.abs())
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap_or_else(|| BigFloat::zero(bits))
    }
}

/// `exp(c * N)` for nilpotent `N` over the symbolic scalars: the finite sum
/// `sum_p c^p N^p / p!`.
pub fn exp_nilpotent_scalar(n_mat: &ScalarMatrix, c: &SymScalar) -> Result<ScalarMatrix> {
    assert!(n_mat.is_square());
    let n = n_mat.rows();
    let idx = n_mat.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let mut acc: ScalarMatrix = Matrix::identity(n);
    let mut p: ScalarMatrix = Matrix::identity(n);
    let mut fact = BigRational::one();
    for k in 1..idx {
        p = (&p * n_mat).scale(c);
        fact *= BigRational::from_integer(BigInt::from(k as i64));
        let coeff = SymScalar::from_rational(fact.recip());
        acc = &acc + &p.scale(&coeff);
    }
    Ok(acc)
}

impl Matrix<ApproxComplex> {
    /// Gaussian elimination inverse with partial pivoting on magnitude.
    pub fn inv(&self) -> Result<CxMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut b: CxMatrix = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a.at(i, col).abs().partial_cmp(&a.at(j, col).abs()).unwrap()
                })
                .unwrap();
            if a.at(pivot, col).is_zero() {
                return Err(Error::Singular("numeric inverse".into()));
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.at(pivot, j).clone(), a.at(col, j).clone());
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let (x, y) = (b.at(pivot, j).clone(), b.at(col, j).clone());
                    b.set(pivot, j, y);
                    b.set(col, j, x);
                }
            }
            let inv_p = a.at(col, col).inv();
            for j in 0..n {
                a.set(col, j, a.at(col, j) * &inv_p);
                b.set(col, j, b.at(col, j) * &inv_p);
            }
            for i in 0..n {
                if i != col && !a.at(i, col).is_zero() {
                    let f = a.at(i, col).clone();
                    for j in 0..n {
                        let av = a.at(i, j) - &(a.at(col, j) * &f);
                        a.set(i, j, av);
                        let bv = b.at(i, j) - &(b.at(col, j) * &f);
                        b.set(i, j, bv);
                    }
                }
            }
        }
        Ok(b)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> BigFloat {
        self.data
            .iter()
            .map(|z| z.abs())
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap_or_else(|| BigFloat::zero(64))
    }

    /// Numeric determinant by LU elimination.
    pub fn det_numeric(&self) -> ApproxComplex {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let bits = if n > 0 { a.at(0, 0).precision() } else { 64 };
        let mut det = ApproxComplex::one(bits);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a.at(i, col).abs().partial_cmp(&a.at(j, col).abs()).unwrap()
                })
                .unwrap();
            if a.at(pivot, col).is_zero() {
                return ApproxComplex::zero(bits);
            }
            if pivot != col {
                det = -&det;
                for j in 0..n {
                    let (x, y) = (a.at(pivot, j).clone(), a.at(col, j).clone());
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                }
            }
            det = &det * a.at(col, col);
            let inv_p = a.at(col, col).inv();
            for i in col + 1..n {
                if !a.at(i, col).is_zero() {
                    let f = a.at(i, col) * &inv_p;
                    for j in col..n {
                        let v = a.at(i, j) - &(a.at(col, j) * &f);
                        a.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Search for a sign vector `e` with `diag(e) * a * diag(e) = b`; returns the
/// witness when the matrices are equivalent under the `(Z/2Z)^n` action.
pub fn sign_conjugate_witness(a: &IntMatrix, b: &IntMatrix) -> Option<Vec<i8>> {
    if a.rows() != b.rows() || a.cols() != b.cols() || !a.is_square() {
        return None;
    }
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            if a.at(i, j).abs() != b.at(i, j).abs() {
                return None;
            }
        }
    }
    // propagate e_i e_j = b_ij / a_ij over the graph of nonzero entries
    let mut eps: Vec<i8> = vec![0; n];
    for start in 0..n {
        if eps[start] != 0 {
            continue;
        }
        eps[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (x, y) = if !a.at(i, j).is_zero() {
                    (a.at(i, j), b.at(i, j))
                } else if !a.at(j, i).is_zero() {
                    (a.at(j, i), b.at(j, i))
                } else {
                    continue;
                };
                let rel: i8 = if x == y { 1 } else { -1 };
                if eps[j] == 0 {
                    eps[j] = eps[i] * rel;
                    stack.push(j);
                } else if eps[j] != eps[i] * rel {
                    return None;
                }
            }
        }
    }
    // full verification
    for i in 0..n {
        for j in 0..n {
            let v = a.at(i, j) * BigInt::from(eps[i] as i64 * eps[j] as i64);
            if &v != b.at(i, j) {
                return None;
            }
        }
    }
    Some(eps)
}

/// Permutation `tau` as the matrix `P` with `P[i][j] = delta(j, tau(i))`.
pub fn permutation_matrix<T: Ring>(tau: &[usize]) -> Matrix<T> {
    let n = tau.len();
    Matrix::from_fn(n, n, |i, j| if tau[i] == j { T::ring_one() } else { T::ring_zero() })
}

/// Diagonal sign matrix from a `+-1` vector.
pub fn sign_matrix<T: Ring>(signs: &[i8]) -> Matrix<T> {
    let n = signs.len();
    Matrix::from_fn(n, n, |i, j| {
        if i != j {
            T::ring_zero()
        } else if signs[i] >= 0 {
            T::ring_one()
        } else {
            T::ring_one().ring_neg()
        }
    })
}

/// Antidiagonal permutation matrix `J` (ones on the antidiagonal).
pub fn antidiagonal<T: Ring>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i + j == n - 1 { T::ring_one() } else { T::ring_zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn charpoly_known_cases() {
        // det(tI - A) for A = [[2, 1], [0, 3]] is (t-2)(t-3) = t^2 - 5t + 6
        let a = int_mat(&[&[2, 1], &[0, 3]]);
        let cp = a.charpoly();
        assert_eq!(cp, vec![BigInt::from(6), BigInt::from(-5), BigInt::from(1)]);
        assert_eq!(a.det(), BigInt::from(6));
        // 3x3 with known determinant
        let b = int_mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(b.det(), BigInt::from(-3));
    }

    #[test]
    fn compound_identity_and_triangular_case() {
        let id3 = IntMatrix::identity(3);
        assert_eq!(id3.compound(2).unwrap(), IntMatrix::identity(3));
        // wedge of a 3x3 Stokes matrix
        let m = int_mat(&[&[1, -3, -6], &[0, 1, 3], &[0, 0, 1]]);
        let want = int_mat(&[&[1, 3, -3], &[0, 1, -3], &[0, 0, 1]]);
        assert_eq!(m.compound(2).unwrap(), want);
        assert!(m.compound(4).is_err());
        assert!(m.compound(0).is_err());
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets_lex(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets_lex(6, 3).len(), 20);
    }

    #[test]
    fn rational_inverse() {
        let a = int_mat(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]]);
        let inv = a.inv_unimodular().unwrap();
        let want = int_mat(&[&[1, -3, 3], &[0, 1, -3], &[0, 0, 1]]);
        assert_eq!(inv, want);
        assert!((&a * &inv).is_identity());
    }

    #[test]
    fn unipotent_scalar_inverse() {
        let a = int_mat(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]]).to_scalar();
        let inv = a.inv_unipotent().unwrap();
        assert!((&a * &inv).is_identity());
    }

    #[test]
    fn exp_nilpotent_shift() {
        // N = 2*J1 on dimension 2, c = 2*pi*i: exp(c N) = I + 4*pi*i*J1
        let n = int_mat(&[&[0, 0], &[2, 0]]).to_scalar();
        let c = &SymScalar::pi_pow(1).scale(2, 1) * &SymScalar::i();
        let e = exp_nilpotent_scalar(&n, &c).unwrap();
        assert_eq!(e.at(0, 0), &SymScalar::one());
        assert_eq!(e.at(1, 1), &SymScalar::one());
        assert_eq!(e.at(0, 1), &SymScalar::zero());
        let want = &(&SymScalar::pi_pow(1) * &SymScalar::i()).scale(4, 1);
        assert_eq!(e.at(1, 0), want);
    }

    #[test]
    fn numeric_inverse_roundtrip() {
        let bits = 192;
        let a = CxMatrix::from_fn(3, 3, |i, j| {
            ApproxComplex::from_i64((3 * i + j + 1) as i64 * if i == j { 5 } else { 1 }, bits)
        });
        let inv = a.inv().unwrap();
        let prod = &a * &inv;
        let id = CxMatrix::identity(3);
        let diff = &prod - &id;
        let mut t = BigFloat::one(bits);
        for _ in 0..40 {
            t = &t / &BigFloat::from_i64(10, bits);
        }
        assert!(diff.max_abs() < t);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        // Cauchy–Binet: compound(AB, r) = compound(A, r) compound(B, r)
        #[test]
        fn cauchy_binet(
            n in 2usize..=5,
            seed in proptest::collection::vec(-4i64..5, 50),
        ) {
            let a = IntMatrix::from_fn(n, n, |i, j| BigInt::from(seed[i * n + j]));
            let b = IntMatrix::from_fn(n, n, |i, j| BigInt::from(seed[25 + i * n + j]));
            for r in 1..=n {
                let lhs = (&a * &b).compound(r).unwrap();
                let rhs = &a.compound(r).unwrap() * &b.compound(r).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        // Sylvester–Franke: det(compound(M, r)) = det(M)^C(n-1, r-1)
        #[test]
        fn sylvester_franke(
            n in 2usize..=4,
            seed in proptest::collection::vec(-3i64..4, 16),
        ) {
            let m = IntMatrix::from_fn(n, n, |i, j| BigInt::from(seed[i * n + j]));
            let d = m.det();
            for r in 1..=n {
                let cd = m.compound(r).unwrap().det();
                let e = binomial(n as i64 - 1, r as i64 - 1)
                    .to_string()
                    .parse::<u32>()
                    .unwrap();
                prop_assert_eq!(cd, num_traits::pow(d.clone(), e as usize));
            }
        }
    }
}
