use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{AlgebraElement, AlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_of_columns, span_rank, ComplexMatrix, RealSubspaceBasis, SparseMatrix};
use crate::scalar::RealScalar;

/// One block acting on an ordered list of Hilbert slots: the block matrix
/// (entrywise conjugated if `conjugate`) is placed on those slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanGroup {
    pub block: usize,
    #[serde(default)]
    pub conjugate: bool,
    pub slots: Vec<usize>,
}

/// Slot-by-slot description of a representation. Slots in no group carry zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentPlan {
    pub hilbert_dim: usize,
    pub groups: Vec<PlanGroup>,
}

impl AssignmentPlan {
    /// Each block once, on consecutive slots.
    pub fn defining(spec: &AlgebraSpec) -> Self {
        let mut groups = Vec::new();
        let mut next = 0;
        for (block, kind) in spec.summands.iter().enumerate() {
            let n = kind.matrix_size();
            groups.push(PlanGroup { block, conjugate: false, slots: (next..next + n).collect() });
            next += n;
        }
        Self { hilbert_dim: next, groups }
    }

    fn validate(&self, spec: &AlgebraSpec) -> Result<()> {
        for (g, group) in self.groups.iter().enumerate() {
            let Some(kind) = spec.summands.get(group.block) else {
                return Err(Error::InvalidPlan(format!("group {g} refers to missing block {}", group.block)));
            };
            if group.slots.len() != kind.matrix_size() {
                return Err(Error::InvalidPlan(format!(
                    "group {g}: {} needs {} slots, got {}",
                    kind.label(),
                    kind.matrix_size(),
                    group.slots.len()
                )));
            }
            let mut seen = group.slots.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != group.slots.len() {
                return Err(Error::InvalidPlan(format!("group {g} repeats a slot")));
            }
            if let Some(&s) = seen.last().filter(|&&s| s >= self.hilbert_dim) {
                return Err(Error::InvalidPlan(format!("group {g}: slot {s} outside dimension {}", self.hilbert_dim)));
            }
        }
        Ok(())
    }
}

/// A real-linear *-homomorphism from an algebra into operators on `C^n`,
/// stored as the image of each coordinate basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<R: RealScalar> {
    spec: AlgebraSpec,
    hilbert_dim: usize,
    embed: Vec<SparseMatrix<R>>,
    plan: Option<AssignmentPlan>,
}

/// Builds the representation described by `plan` and validates it.
pub fn build_representation<R: RealScalar>(spec: &AlgebraSpec, plan: &AssignmentPlan) -> Result<Representation<R>> {
    Representation::from_plan(spec, plan)
}

impl<R: RealScalar> Representation<R> {
    pub fn from_plan(spec: &AlgebraSpec, plan: &AssignmentPlan) -> Result<Self> {
        spec.validate()?;
        plan.validate(spec)?;
        let n = plan.hilbert_dim;
        let mut embed = vec![SparseMatrix::zeros(n, n); spec.real_dimension()];
        for group in &plan.groups {
            let kind = spec.summands[group.block];
            let range = spec.block_range(group.block);
            for (local, k) in range.enumerate() {
                let mut unit = vec![R::zero(); kind.real_dim()];
                unit[local] = R::one();
                let mut m = kind.to_matrix(&unit);
                if group.conjugate {
                    m = m.conj();
                }
                for (r, &sr) in group.slots.iter().enumerate() {
                    for (c, &sc) in group.slots.iter().enumerate() {
                        embed[k].add_at(sr, sc, &m[(r, c)]);
                    }
                }
            }
        }
        let rep = Self { spec: spec.clone(), hilbert_dim: n, embed, plan: Some(plan.clone()) };
        rep.validate()?;
        Ok(rep)
    }

    /// Representation given by the image of every coordinate basis element.
    pub fn from_matrices(spec: &AlgebraSpec, matrices: &[ComplexMatrix<R>]) -> Result<Self> {
        spec.validate()?;
        if matrices.len() != spec.real_dimension() {
            return Err(Error::SpecMismatch(format!(
                "{} basis images for an algebra of real dimension {}",
                matrices.len(),
                spec.real_dimension()
            )));
        }
        let n = matrices.first().map_or(0, ComplexMatrix::rows);
        if matrices.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::SpecMismatch("basis images must be square and of one size".into()));
        }
        Self::from_sparse(spec, n, matrices.iter().map(SparseMatrix::from_dense).collect())
    }

    pub(crate) fn from_sparse(spec: &AlgebraSpec, hilbert_dim: usize, embed: Vec<SparseMatrix<R>>) -> Result<Self> {
        let rep = Self { spec: spec.clone(), hilbert_dim, embed, plan: None };
        rep.validate()?;
        Ok(rep)
    }

    /// Attaches a plan already known to produce exactly these matrices.
    pub(crate) fn with_plan(mut self, plan: AssignmentPlan) -> Self {
        self.plan = Some(plan);
        self
    }

    /// The algebra acting on itself block-diagonally.
    pub fn defining(spec: &AlgebraSpec) -> Result<Self> {
        Self::from_plan(spec, &AssignmentPlan::defining(spec))
    }

    /// Multiplicativity on every basis pair and star-compatibility on every
    /// basis element.
    fn validate(&self) -> Result<()> {
        let d = self.spec.real_dimension();
        let scale = self.embed.iter().map(SparseMatrix::max_abs).fold(1.0, f64::max);
        let basis: Vec<AlgebraElement<R>> = (0..d).map(|k| AlgebraElement::basis(&self.spec, k)).collect();
        for (i, ei) in basis.iter().enumerate() {
            for (j, ej) in basis.iter().enumerate() {
                let lhs = &self.embed[i] * &self.embed[j];
                let rhs = self.apply_sparse(&ei.multiply(ej)?);
                if !(&lhs - &rhs).is_negligible(scale * scale) {
                    return Err(Error::NotMultiplicative(i, j));
                }
            }
            if !(&self.embed[i].adjoint() - &self.apply_sparse(&ei.star())).is_negligible(scale) {
                return Err(Error::NotStarCompatible(i));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn plan(&self) -> Option<&AssignmentPlan> {
        self.plan.as_ref()
    }

    pub fn basis_sparse(&self, k: usize) -> &SparseMatrix<R> {
        &self.embed[k]
    }

    pub fn basis_matrices(&self) -> Vec<ComplexMatrix<R>> {
        self.embed.iter().map(SparseMatrix::to_dense).collect()
    }

    pub fn apply_sparse(&self, a: &AlgebraElement<R>) -> SparseMatrix<R> {
        self.apply_coords(a.coords())
    }

    pub fn apply_coords(&self, coords: &[R]) -> SparseMatrix<R> {
        let n = self.hilbert_dim;
        let mut out = SparseMatrix::zeros(n, n);
        for (x, m) in coords.iter().zip(&self.embed) {
            if x.is_zero() {
                continue;
            }
            for (r, c, z) in m.iter() {
                out.add_at(r, c, &Complex::new(z.re.clone() * x.clone(), z.im.clone() * x.clone()));
            }
        }
        out
    }

    /// `π(a)`.
    pub fn apply(&self, a: &AlgebraElement<R>) -> Result<ComplexMatrix<R>> {
        if a.spec() != &self.spec {
            return Err(Error::SpecMismatch(format!("{} vs {}", a.spec().label(), self.spec.label())));
        }
        Ok(self.apply_sparse(a).to_dense())
    }

    pub fn is_injective(&self) -> bool {
        let n = self.hilbert_dim;
        span_rank(2 * n * n, self.embed.iter().map(SparseMatrix::to_real_sparse)) == self.spec.real_dimension()
    }

    /// The unique `x` with `π(x) = m`. Needs an injective representation.
    pub fn pullback(&self, m: &ComplexMatrix<R>) -> Result<AlgebraElement<R>> {
        self.pullback_sparse(&SparseMatrix::from_dense(m))
    }

    pub fn pullback_sparse(&self, m: &SparseMatrix<R>) -> Result<AlgebraElement<R>> {
        if m.rows() != self.hilbert_dim || m.cols() != self.hilbert_dim {
            return Err(Error::NotInImage);
        }
        let d = self.spec.real_dimension();
        let mut columns: Vec<_> = self.embed.iter().map(SparseMatrix::to_real_sparse).collect();
        columns.push(m.to_real_sparse().into_iter().map(|(i, v)| (i, -v)).collect());
        let null = nullspace_of_columns(&columns);
        if null.dim() > 1 || null.vectors().iter().any(|v| v[d].is_negligible(1.0)) {
            // Either the kernel of π is nontrivial or m is not reached.
            if !self.is_injective() {
                return Err(Error::NotInjective);
            }
        }
        let sol = null.vectors().iter().find(|v| !v[d].is_negligible(1.0)).ok_or(Error::NotInImage)?;
        let last = sol[d].clone();
        AlgebraElement::new(&self.spec, sol[..d].iter().map(|x| x.clone() / last.clone()).collect())
    }
}

/// Center of the algebra: elements commuting with every basis element.
pub fn center<R: RealScalar>(spec: &AlgebraSpec) -> RealSubspaceBasis<R> {
    let d = spec.real_dimension();
    let basis: Vec<AlgebraElement<R>> = (0..d).map(|k| AlgebraElement::basis(spec, k)).collect();
    let columns: Vec<_> = basis
        .iter()
        .map(|x| {
            let mut col = Vec::new();
            for (k, e) in basis.iter().enumerate() {
                let comm = x.multiply(e).and_then(|xe| xe.sub(&e.multiply(x)?)).expect("same spec");
                for (i, v) in comm.coords().iter().enumerate() {
                    if !v.is_zero() {
                        col.push((k * d + i, v.clone()));
                    }
                }
            }
            col
        })
        .collect();
    nullspace_of_columns(&columns)
}
