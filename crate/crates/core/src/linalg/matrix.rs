use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::LinalgError;
use crate::scalar::{self, RealScalar};

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

impl<R: RealScalar> fmt::Debug for ComplexMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<R: RealScalar> ComplexMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from small integer (re, im) pairs; convenient for fixtures.
    pub fn from_ints(rows: usize, cols: usize, entries: &[(i64, i64)]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let data = entries.iter().map(|&(a, b)| Complex::new(R::from_i64(a), R::from_i64(b))).collect();
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex<R>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
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

    pub fn entries(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex<R>) {
        self.data[r * self.cols + c] = value;
    }

    pub fn add_at(&mut self, r: usize, c: usize, value: &Complex<R>) {
        let idx = r * self.cols + c;
        self.data[idx] = &self.data[idx] + value;
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Operators in this crate are mostly permutation-like; skipping exact
        // zeros on both sides keeps 128-dimensional exact products cheap.
        let other_nz: Vec<Vec<(usize, &Complex<R>)>> = (0..other.rows)
            .map(|k| {
                other.data[k * other.cols..(k + 1) * other.cols]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (a, row) in self.data[i * self.cols..(i + 1) * self.cols].iter().zip(&other_nz) {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in row {
                    out.data[i * other.cols + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Complex<R>, &Complex<R>) -> Complex<R>) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Complex<R>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: &R) -> Self {
        self.map(|z| Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone()))
    }

    pub fn map(&self, f: impl Fn(&Complex<R>) -> Complex<R>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex<R> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            &self[(r / other.rows, c / other.cols)] * &other[(r % other.rows, c % other.cols)]
        })
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(scalar::modulus).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| {
                let m = scalar::modulus(z);
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Every entry negligible relative to `scale` (exact zero in exact mode).
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.data.iter().all(|z| scalar::is_negligible(z, scale))
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn approx_eq(&self, other: &Self, scale: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && (self - other).is_negligible(scale)
    }

    /// True if diagonal with every diagonal entry equal to +1 or -1.
    pub fn is_signed_diagonal(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let one = Complex::<R>::one();
        let minus = -one.clone();
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let z = &self[(r, c)];
                if r == c {
                    *z == one || *z == minus
                } else {
                    z.is_zero()
                }
            })
        })
    }

    /// Real coordinates `(re, im)` of every entry, row-major, keeping only
    /// exact nonzeros.
    pub fn to_real_sparse(&self) -> Vec<(usize, R)> {
        let mut out = Vec::new();
        for (i, z) in self.data.iter().enumerate() {
            if !z.re.is_zero() {
                out.push((2 * i, z.re.clone()));
            }
            if !z.im.is_zero() {
                out.push((2 * i + 1, z.im.clone()));
            }
        }
        out
    }

    /// Inverse of [`to_real_sparse`](Self::to_real_sparse) for a dense real vector.
    pub fn from_real_coords(rows: usize, cols: usize, coords: &[R]) -> Self {
        assert_eq!(coords.len(), 2 * rows * cols);
        let data = coords.chunks(2).map(|p| Complex::new(p[0].clone(), p[1].clone())).collect();
        Self { rows, cols, data }
    }

    pub fn convert<S: RealScalar>(&self, f: impl Fn(&R) -> S) -> ComplexMatrix<S> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Complex::new(f(&z.re), f(&z.im))).collect(),
        }
    }
}

impl<R: RealScalar> std::ops::Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = Complex<R>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<R> {
        &self.data[r * self.cols + c]
    }
}

impl<R: RealScalar> Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn mul(self, rhs: Self) -> ComplexMatrix<R> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<R: RealScalar> Add for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn add(self, rhs: Self) -> ComplexMatrix<R> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<R: RealScalar> Sub for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn sub(self, rhs: Self) -> ComplexMatrix<R> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<R: RealScalar> Neg for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn neg(self) -> ComplexMatrix<R> {
        self.map(|z| -z.clone())
    }
}

/// Antilinear operator in normal form `J v = U · conj(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOp<R: RealScalar> {
    u: ComplexMatrix<R>,
}

impl<R: RealScalar> AntilinearOp<R> {
    /// Wraps `U`. Unitarity is not enforced here so that broken real
    /// structures can still be loaded and reported by the axiom checker.
    pub fn new(u: ComplexMatrix<R>) -> Result<Self, LinalgError> {
        if !u.is_square() {
            return Err(LinalgError::Shape(format!("antilinear operator needs a square U, got {}x{}", u.rows, u.cols)));
        }
        Ok(Self { u })
    }

    /// Plain complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self { u: ComplexMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.rows
    }

    pub fn apply(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|r| v.iter().enumerate().fold(Complex::zero(), |acc, (c, x)| acc + &self.u[(r, c)] * &x.conj()))
            .collect()
    }

    /// `J A J⁻¹ = U · conj(A) · U*`.
    pub fn conjugate(&self, a: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>, LinalgError> {
        if !a.is_square() || a.rows != self.dim() {
            return Err(LinalgError::Shape(format!(
                "cannot conjugate a {}x{} matrix by a {}-dimensional antilinear operator",
                a.rows,
                a.cols,
                self.dim()
            )));
        }
        Ok(&(&self.u * &a.conj()) * &self.u.adjoint())
    }

    /// The linear operator `J² = U · conj(U)`.
    pub fn square(&self) -> ComplexMatrix<R> {
        &self.u * &self.u.conj()
    }

    pub fn is_unitary(&self) -> bool {
        let n = self.dim();
        (&self.u.adjoint() * &self.u).approx_eq(&ComplexMatrix::identity(n), 1.0)
    }

    /// `W J W*` for a unitary `W`, i.e. `U ↦ W U Wᵀ`.
    pub fn transform(&self, w: &ComplexMatrix<R>) -> Self {
        Self { u: &(w * &self.u) * &w.transpose() }
    }
}

/// Computes `J A J⁻¹`.
pub fn antilinear_conjugate<R: RealScalar>(
    j: &AntilinearOp<R>,
    a: &ComplexMatrix<R>,
) -> Result<ComplexMatrix<R>, LinalgError> {
    j.conjugate(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type M = ComplexMatrix<Rational>;

    fn c(re: i64, im: i64) -> Complex<Rational> {
        Complex::new(Rational::from(re), Rational::from(im))
    }

    #[test]
    fn identity_u_conjugates_entries() {
        let a = M::from_ints(2, 2, &[(1, 2), (0, -3), (4, 0), (5, 5)]);
        let j = AntilinearOp::conjugation(2);
        assert_eq!(antilinear_conjugate(&j, &a).unwrap(), a.conj());
    }

    #[test]
    fn real_matrix_is_fixed() {
        let a = M::from_ints(2, 2, &[(1, 0), (7, 0), (-2, 0), (3, 0)]);
        let j = AntilinearOp::conjugation(2);
        assert_eq!(antilinear_conjugate(&j, &a).unwrap(), a);
    }

    #[test]
    fn swap_conjugation_of_imaginary_diagonal() {
        // Hand computation: σ₁ · conj(diag(i, -i)) · σ₁ = σ₁ diag(-i, i) σ₁ = diag(i, -i).
        let u = M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]);
        let j = AntilinearOp::new(u).unwrap();
        let a = M::diagonal(&[c(0, 1), c(0, -1)]);
        assert_eq!(antilinear_conjugate(&j, &a).unwrap(), M::diagonal(&[c(0, 1), c(0, -1)]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let j = AntilinearOp::<Rational>::conjugation(3);
        assert!(antilinear_conjugate(&j, &M::identity(2)).is_err());
        assert!(AntilinearOp::new(M::zeros(2, 3)).is_err());
        assert!(M::identity(2).matmul(&M::zeros(3, 3)).is_err());
    }

    #[test]
    fn antilinear_apply_matches_normal_form() {
        let u = M::from_ints(2, 2, &[(0, 0), (1, 0), (-1, 0), (0, 0)]);
        let j = AntilinearOp::new(u).unwrap();
        let v = vec![c(1, 2), c(3, -1)];
        assert_eq!(j.apply(&v), vec![c(3, 1), c(-1, 2)]);
        assert_eq!(j.square(), M::identity(2).scale(&c(-1, 0)));
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec((-3i64..=3, -3i64..=3), n * n).prop_map(move |e| M::from_ints(n, n, &e))
    }

    fn signed_permutation(n: usize) -> impl Strategy<Value = M> {
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(0u8..4, n)).prop_map(
            move |(perm, phases)| {
                let mut u = M::zeros(n, n);
                for (col, (&row, ph)) in perm.iter().zip(&phases).enumerate() {
                    let z = match ph {
                        0 => c(1, 0),
                        1 => c(0, 1),
                        2 => c(-1, 0),
                        _ => c(0, -1),
                    };
                    u.set(row, col, z);
                }
                u
            },
        )
    }

    proptest! {
        #[test]
        fn adjoint_reverses_products(a in small_matrix(3), b in small_matrix(3)) {
            prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        }

        #[test]
        fn double_conjugation_matches_j_squared(u in signed_permutation(3), a in small_matrix(3)) {
            let j = AntilinearOp::new(u).unwrap();
            prop_assert!(j.is_unitary());
            let twice = j.conjugate(&j.conjugate(&a).unwrap()).unwrap();
            let w = j.square();
            let expected = &(&w * &a) * &w.adjoint();
            prop_assert_eq!(twice, expected);
        }
    }
}
