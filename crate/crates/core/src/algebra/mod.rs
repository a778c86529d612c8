//! Real *-algebras given as direct sums of matrix blocks over ℝ, ℂ and ℍ.
//!
//! An element is a real coordinate vector. Each block contributes its own
//! coordinates, in summand order:
//!
//! | block      | real dim | coordinate `k` |
//! |------------|----------|----------------|
//! | `RealField`     | 1    | the value |
//! | `ComplexField`  | 2    | `(re, im)` |
//! | `Quaternions`   | 4    | `a + bi + cj + dk` |
//! | `MatC(n)`  | 2n²      | `k = 2(rn + c) + t`, `t` = re/im of entry `(r, c)` |
//! | `MatR(n)`  | n²       | `k = rn + c` |
//! | `MatH(n)`  | 4n²      | `k = 4(rn + c) + t`, quaternion entry `(r, c)` |
//!
//! Quaternions are always handled through the embedding
//! `a + bi + cj + dk ↦ [[α, β], [−β̄, ᾱ]]` with `α = a + bi`, `β = c + di`.

mod representation;

pub use representation::{build_representation, center, AssignmentPlan, PlanGroup, Representation};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::RealScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockKind {
    RealField,
    ComplexField,
    Quaternions,
    MatC { n: usize },
    MatR { n: usize },
    MatH { n: usize },
}

impl BlockKind {
    pub fn real_dim(&self) -> usize {
        match *self {
            BlockKind::RealField => 1,
            BlockKind::ComplexField => 2,
            BlockKind::Quaternions => 4,
            BlockKind::MatC { n } => 2 * n * n,
            BlockKind::MatR { n } => n * n,
            BlockKind::MatH { n } => 4 * n * n,
        }
    }

    /// Side length of the complex matrix carrying the block.
    pub fn matrix_size(&self) -> usize {
        match *self {
            BlockKind::RealField | BlockKind::ComplexField => 1,
            BlockKind::Quaternions => 2,
            BlockKind::MatC { n } | BlockKind::MatR { n } => n,
            BlockKind::MatH { n } => 2 * n,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            BlockKind::RealField => "R".into(),
            BlockKind::ComplexField => "C".into(),
            BlockKind::Quaternions => "H".into(),
            BlockKind::MatC { n } => format!("M{n}(C)"),
            BlockKind::MatR { n } => format!("M{n}(R)"),
            BlockKind::MatH { n } => format!("M{n}(H)"),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BlockKind::MatC { n: 0 } | BlockKind::MatR { n: 0 } | BlockKind::MatH { n: 0 } => {
                Err(Error::SpecMismatch(format!("{} has size zero", self.label())))
            }
            _ => Ok(()),
        }
    }

    /// Complex matrix of the block element with the given coordinates.
    pub fn to_matrix<R: RealScalar>(&self, coords: &[R]) -> ComplexMatrix<R> {
        assert_eq!(coords.len(), self.real_dim());
        let z = || R::zero();
        match *self {
            BlockKind::RealField => ComplexMatrix::diagonal(&[Complex::new(coords[0].clone(), z())]),
            BlockKind::ComplexField => ComplexMatrix::diagonal(&[Complex::new(coords[0].clone(), coords[1].clone())]),
            BlockKind::Quaternions => {
                let mut m = ComplexMatrix::zeros(2, 2);
                place_quaternion(&mut m, 0, 0, coords);
                m
            }
            BlockKind::MatC { n } => ComplexMatrix::from_fn(n, n, |r, c| {
                let k = 2 * (r * n + c);
                Complex::new(coords[k].clone(), coords[k + 1].clone())
            }),
            BlockKind::MatR { n } => ComplexMatrix::from_fn(n, n, |r, c| Complex::new(coords[r * n + c].clone(), z())),
            BlockKind::MatH { n } => {
                let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
                for r in 0..n {
                    for c in 0..n {
                        let k = 4 * (r * n + c);
                        place_quaternion(&mut m, 2 * r, 2 * c, &coords[k..k + 4]);
                    }
                }
                m
            }
        }
    }

    /// Coordinates of a complex matrix assumed to lie in the block. Entries
    /// outside the block's real form are ignored; see [`BlockKind::contains`].
    pub fn from_matrix<R: RealScalar>(&self, m: &ComplexMatrix<R>) -> Vec<R> {
        assert_eq!(m.rows(), self.matrix_size());
        let quat = |r: usize, c: usize| {
            let (a, b) = (&m[(r, c)], &m[(r, c + 1)]);
            [a.re.clone(), a.im.clone(), b.re.clone(), b.im.clone()]
        };
        match *self {
            BlockKind::RealField => vec![m[(0, 0)].re.clone()],
            BlockKind::ComplexField => vec![m[(0, 0)].re.clone(), m[(0, 0)].im.clone()],
            BlockKind::Quaternions => quat(0, 0).to_vec(),
            BlockKind::MatC { n } => {
                (0..n * n).flat_map(|i| [m[(i / n, i % n)].re.clone(), m[(i / n, i % n)].im.clone()]).collect()
            }
            BlockKind::MatR { n } => (0..n * n).map(|i| m[(i / n, i % n)].re.clone()).collect(),
            BlockKind::MatH { n } => (0..n * n).flat_map(|i| quat(2 * (i / n), 2 * (i % n))).collect(),
        }
    }

    /// Whether a complex matrix of the right size lies in the block.
    pub fn contains<R: RealScalar>(&self, m: &ComplexMatrix<R>, scale: f64) -> bool {
        m.rows() == self.matrix_size()
            && m.cols() == self.matrix_size()
            && self.to_matrix(&self.from_matrix(m)).approx_eq(m, scale)
    }

    pub fn identity_coords<R: RealScalar>(&self) -> Vec<R> {
        let mut v = vec![R::zero(); self.real_dim()];
        match *self {
            BlockKind::RealField | BlockKind::ComplexField | BlockKind::Quaternions => v[0] = R::one(),
            BlockKind::MatC { n } => (0..n).for_each(|i| v[2 * (i * n + i)] = R::one()),
            BlockKind::MatR { n } => (0..n).for_each(|i| v[i * n + i] = R::one()),
            BlockKind::MatH { n } => (0..n).for_each(|i| v[4 * (i * n + i)] = R::one()),
        }
        v
    }
}

fn place_quaternion<R: RealScalar>(m: &mut ComplexMatrix<R>, r: usize, c: usize, q: &[R]) {
    let alpha = Complex::new(q[0].clone(), q[1].clone());
    let beta = Complex::new(q[2].clone(), q[3].clone());
    m.set(r, c, alpha.clone());
    m.set(r, c + 1, beta.clone());
    m.set(r + 1, c, -beta.conj());
    m.set(r + 1, c + 1, alpha.conj());
}

/// Ordered direct sum of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub summands: Vec<BlockKind>,
}

impl AlgebraSpec {
    pub fn new(summands: Vec<BlockKind>) -> Result<Self> {
        let spec = Self { summands };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.summands.iter().try_for_each(BlockKind::validate)
    }

    pub fn real_dimension(&self) -> usize {
        self.summands.iter().map(BlockKind::real_dim).sum()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Coordinate range of summand `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.summands[..i].iter().map(BlockKind::real_dim).sum();
        start..start + self.summands[i].real_dim()
    }

    /// Summand owning coordinate `k`.
    pub fn block_of(&self, k: usize) -> usize {
        let mut end = 0;
        for (i, b) in self.summands.iter().enumerate() {
            end += b.real_dim();
            if k < end {
                return i;
            }
        }
        panic!("coordinate {k} out of range for an algebra of dimension {end}");
    }

    /// `A ⊕ A`: the summand list followed by a copy of itself.
    pub fn doubled(&self) -> Self {
        let mut summands = self.summands.clone();
        summands.extend(self.summands.iter().copied());
        Self { summands }
    }

    pub fn label(&self) -> String {
        self.summands.iter().map(BlockKind::label).collect::<Vec<_>>().join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<R: RealScalar> {
    spec: AlgebraSpec,
    coords: Vec<R>,
}

impl<R: RealScalar> AlgebraElement<R> {
    pub fn new(spec: &AlgebraSpec, coords: Vec<R>) -> Result<Self> {
        if coords.len() != spec.real_dimension() {
            return Err(Error::SpecMismatch(format!(
                "{} coordinates for an algebra of real dimension {}",
                coords.len(),
                spec.real_dimension()
            )));
        }
        Ok(Self { spec: spec.clone(), coords })
    }

    pub fn zero(spec: &AlgebraSpec) -> Self {
        Self { spec: spec.clone(), coords: vec![R::zero(); spec.real_dimension()] }
    }

    pub fn identity(spec: &AlgebraSpec) -> Self {
        let coords = spec.summands.iter().flat_map(|b| b.identity_coords::<R>()).collect();
        Self { spec: spec.clone(), coords }
    }

    /// The `k`-th coordinate basis element.
    pub fn basis(spec: &AlgebraSpec, k: usize) -> Self {
        let mut e = Self::zero(spec);
        e.coords[k] = R::one();
        e
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<R> {
        self.coords
    }

    pub fn block(&self, i: usize) -> ComplexMatrix<R> {
        self.spec.summands[i].to_matrix(&self.coords[self.spec.block_range(i)])
    }

    pub fn blocks(&self) -> Vec<ComplexMatrix<R>> {
        (0..self.spec.len()).map(|i| self.block(i)).collect()
    }

    /// Element with the given block matrices; fails if a matrix is not in its block.
    pub fn from_blocks(spec: &AlgebraSpec, blocks: &[ComplexMatrix<R>]) -> Result<Self> {
        if blocks.len() != spec.len() {
            return Err(Error::SpecMismatch(format!("{} blocks for {} summands", blocks.len(), spec.len())));
        }
        let mut coords = Vec::with_capacity(spec.real_dimension());
        for (kind, m) in spec.summands.iter().zip(blocks) {
            if !kind.contains(m, 1.0) {
                return Err(Error::SpecMismatch(format!("matrix is not an element of {}", kind.label())));
            }
            coords.extend(kind.from_matrix(m));
        }
        Ok(Self { spec: spec.clone(), coords })
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!("{} vs {}", self.spec.label(), other.spec.label())));
        }
        Ok(())
    }

    fn blockwise(&self, f: impl Fn(usize, ComplexMatrix<R>) -> ComplexMatrix<R>) -> Self {
        let coords =
            (0..self.spec.len()).flat_map(|i| self.spec.summands[i].from_matrix(&f(i, self.block(i)))).collect();
        Self { spec: self.spec.clone(), coords }
    }

    /// Blockwise product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        Ok(self.blockwise(|i, a| &a * &other.block(i)))
    }

    /// Involution: blockwise conjugate transpose.
    pub fn star(&self) -> Self {
        self.blockwise(|_, a| a.adjoint())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { spec: self.spec.clone(), coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, s: &R) -> Self {
        Self { spec: self.spec.clone(), coords: self.coords.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn is_negligible(&self, scale: f64) -> bool {
        self.coords.iter().all(|c| c.is_negligible(scale))
    }
}
