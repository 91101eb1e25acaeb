use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Int, IntVector, Rat, RatVector};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entries length must be rows * cols");
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, columns: &[Vec<T>]) -> Self
    where
        T: Zero,
    {
        let mut m = Matrix::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for (i, x) in c.iter().enumerate() {
                *m.get_mut(i, j) = x.clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, entries }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = T::one();
        }
        m
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, x) in diag.iter().enumerate() {
            *m.get_mut(i, i) = x.clone();
        }
        m
    }

    pub fn is_identity(&self) -> bool
    where
        T: PartialEq,
    {
        self.is_square() && *self == Matrix::identity(self.rows)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        let slot = out.get_mut(i, j);
                        *slot = std::mem::replace(slot, T::zero()) + prod;
                    }
                }
            }
        }
        out
    }
}

impl<T: Clone + Sub<Output = T>> Matrix<T> {
    pub fn sub_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Clone + Add<Output = T>> Matrix<T> {
    pub fn add_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Clone + Neg<Output = T>> Matrix<T> {
    pub fn neg_mat(&self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    *a.get_mut(i, j) = v;
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    /// Adjugate, so that `adj(A) * A = det(A) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let c = minor.det();
                // adj(A)[j][i] = (-1)^(i+j) det(minor_ij)
                *out.get_mut(j, i) = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        out
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != row) {
            for j in (0..self.cols).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix::from_vec(self.rows - 1, self.cols - 1, entries)
    }

    /// Exact inverse over the rationals.
    pub fn inverse_rat(&self) -> Result<RatMatrix> {
        self.to_rat().inverse()
    }

    /// Exact power `A^e`; negative exponents go through one rational inverse.
    pub fn mat_pow(&self, e: i64) -> Result<RatMatrix> {
        assert!(self.is_square());
        if e >= 0 {
            Ok(self.pow_nonneg(e as u64).to_rat())
        } else {
            Ok(self.inverse_rat()?.pow_nonneg(e.unsigned_abs()))
        }
    }

    /// Integer power `A^e` for `e >= 0`.
    pub fn pow_nonneg(&self, e: u64) -> IntMatrix {
        binary_pow(self, e)
    }

    /// Unimodular check: square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det();
        if !d.abs().is_one() {
            return Err(Error::SingularMatrix);
        }
        let adj = self.adjugate();
        Ok(adj.map(|x| x * &d))
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> Int {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl RatMatrix {
    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).clone();
            for j in 0..n {
                let x = a.get(col, j) / &p;
                *a.get_mut(col, j) = x;
                let y = inv.get(col, j) / &p;
                *inv.get_mut(col, j) = y;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &f * a.get(col, j);
                    *a.get_mut(r, j) = x;
                    let y = inv.get(r, j) - &f * inv.get(col, j);
                    *inv.get_mut(r, j) = y;
                }
            }
        }
        Ok(inv)
    }

    pub fn pow_nonneg(&self, e: u64) -> RatMatrix {
        binary_pow(self, e)
    }

    /// The integer matrix equal to `self`, if every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.entries.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }
}

fn binary_pow<T>(base: &Matrix<T>, mut e: u64) -> Matrix<T>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    assert!(base.is_square());
    let mut result = Matrix::identity(base.rows);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.matmul(&b);
        }
        e >>= 1;
        if e > 0 {
            b = b.matmul(&b);
        }
    }
    result
}

pub fn int_vec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_vec(xs: &[Int]) -> RatVector {
    xs.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn l1_norm(v: &[Int]) -> Int {
    v.iter().map(Signed::abs).sum()
}

pub fn vec_add(a: &[Int], b: &[Int]) -> IntVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Int], b: &[Int]) -> IntVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Int]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Least common multiple of the denominators of a rational vector.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 4], &[6, 8]]).det(), BigInt::from(-8));
        assert_eq!(IntMatrix::from_i64(&[&[-4, -3], &[-3, -1]]).det(), BigInt::from(-5));
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).det(), BigInt::zero());
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 5]]);
        // 0*(0-0) - 2*(15-0) + 1*(3-0) = -27
        assert_eq!(m.det(), BigInt::from(-27));
    }

    #[test]
    fn mat_pow_examples() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(m.mat_pow(0).unwrap().is_identity());
        assert_eq!(m.mat_pow(2).unwrap(), IntMatrix::from_i64(&[&[5, 3], &[3, 2]]).to_rat());
        let two = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(two.mat_pow(-3).unwrap(), RatMatrix::from_rows(&[vec![r(1, 8)]]));
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse_rat(), Err(Error::SingularMatrix)));
        assert!(matches!(m.mat_pow(-1), Err(Error::SingularMatrix)));
        assert!(m.mat_pow(3).is_ok());
    }

    #[test]
    fn adjugate_identity() {
        let m = IntMatrix::from_i64(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let d = m.det();
        let prod = m.adjugate().matmul(&m);
        assert_eq!(prod, IntMatrix::identity(3).map(|x| x * &d));
    }
}
