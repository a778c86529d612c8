use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::{ComplexMatrix, LinalgError};
use crate::scalar::{self, RealScalar};

/// Complex matrix stored as a map of nonzero entries.
///
/// Used where many products of very sparse operators are needed, such as
/// basis-pair checks on 128-dimensional representations.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Complex<R>>,
}

impl<R: RealScalar> SparseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Complex::new(R::one(), R::zero()));
        }
        m
    }

    pub fn from_dense(m: &ComplexMatrix<R>) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let z = &m[(r, c)];
                if !z.is_zero() {
                    out.entries.insert((r, c), z.clone());
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix<R> {
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for (&(r, c), z) in &self.entries {
            out.set(r, c, z.clone());
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<R> {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Complex<R>)> {
        self.entries.iter().map(|(&(r, c), z)| (r, c, z))
    }

    /// Adds `value` at `(r, c)`, removing the entry if it cancels exactly.
    pub fn add_at(&mut self, r: usize, c: usize, value: &Complex<R>) {
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(Complex::zero);
        *slot = &*slot + value;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Complex<R>)>> = BTreeMap::new();
        for (&(k, c), z) in &other.entries {
            by_row.entry(k).or_default().push((c, z));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_at(r, c, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(r, c), z) in &other.entries {
            out.add_at(r, c, z);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(r, c), z) in &other.entries {
            out.add_at(r, c, &-z.clone());
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} and {}x{} differ in shape",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn scale_real(&self, s: &R) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        if s.is_zero() {
            return out;
        }
        for (&k, z) in &self.entries {
            out.entries.insert(k, Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone()));
        }
        out
    }

    pub fn conj(&self) -> Self {
        let entries = self.entries.iter().map(|(&k, z)| (k, z.conj())).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries.iter().map(|(&(r, c), z)| ((c, r), z.conj())).collect();
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(scalar::modulus).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, scale: f64) -> bool {
        self.entries.values().all(|z| scalar::is_negligible(z, scale))
    }

    /// Real coordinates as in [`ComplexMatrix::to_real_sparse`].
    pub fn to_real_sparse(&self) -> Vec<(usize, R)> {
        let mut out = Vec::with_capacity(2 * self.entries.len());
        for (&(r, c), z) in &self.entries {
            let i = r * self.cols + c;
            if !z.re.is_zero() {
                out.push((2 * i, z.re.clone()));
            }
            if !z.im.is_zero() {
                out.push((2 * i + 1, z.im.clone()));
            }
        }
        out
    }
}

impl<R: RealScalar> std::ops::Mul for &SparseMatrix<R> {
    type Output = SparseMatrix<R>;
    fn mul(self, rhs: Self) -> SparseMatrix<R> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<R: RealScalar> std::ops::Add for &SparseMatrix<R> {
    type Output = SparseMatrix<R>;
    fn add(self, rhs: Self) -> SparseMatrix<R> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<R: RealScalar> std::ops::Sub for &SparseMatrix<R> {
    type Output = SparseMatrix<R>;
    fn sub(self, rhs: Self) -> SparseMatrix<R> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type M = ComplexMatrix<Rational>;

    fn small_matrix(n: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec((-2i64..=2, -2i64..=2), n * n).prop_map(move |v| M::from_ints(n, n, &v))
    }

    proptest! {
        #[test]
        fn sparse_product_matches_dense(a in small_matrix(4), b in small_matrix(4)) {
            let sa = SparseMatrix::from_dense(&a);
            let sb = SparseMatrix::from_dense(&b);
            prop_assert_eq!((&sa * &sb).to_dense(), &a * &b);
            prop_assert_eq!((&sa - &sb).to_dense(), &a - &b);
            prop_assert_eq!(sa.adjoint().to_dense(), a.adjoint());
            prop_assert_eq!(sa.to_real_sparse(), a.to_real_sparse());
        }
    }

    #[test]
    fn cancellation_drops_entries() {
        let mut m = SparseMatrix::<Rational>::identity(2);
        m.add_at(0, 0, &Complex::new(Rational::from(-1), Rational::zero()));
        assert_eq!(m.nnz(), 1);
    }
}
