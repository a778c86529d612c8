//! Twisting automorphisms, twisted commutators and the twist by grading.

use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraSpec, AssignmentPlan, PlanGroup, Representation};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SparseMatrix};
use crate::scalar::RealScalar;
use crate::triple::{FiniteRealTriple, Sign};

/// An automorphism ρ of a direct-sum algebra that permutes summands,
/// optionally conjugating entrywise: block `i` of `ρ(a)` is block `perm[i]`
/// of `a`, conjugated when `conjugate[i]`. `unitary`, when present, is an
/// `R` with `π(ρ(a)) = R π(a) R*`, which extends ρ to all operators.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistData<R: RealScalar> {
    pub perm: Vec<usize>,
    pub conjugate: Vec<bool>,
    pub unitary: Option<ComplexMatrix<R>>,
}

impl<R: RealScalar> TwistData<R> {
    pub fn identity(summands: usize) -> Self {
        Self { perm: (0..summands).collect(), conjugate: vec![false; summands], unitary: None }
    }

    /// Exchange of the two halves of a doubled algebra with `2n` summands.
    pub fn flip(n: usize) -> Self {
        Self { perm: (0..2 * n).map(|i| (i + n) % (2 * n)).collect(), conjugate: vec![false; 2 * n], unitary: None }
    }

    pub fn with_unitary(mut self, r: Option<ComplexMatrix<R>>) -> Self {
        self.unitary = r;
        self
    }

    pub fn is_inner(&self) -> bool {
        self.unitary.is_some()
    }

    /// Checks that `perm` is a kind-preserving permutation of the summands.
    pub fn check_spec(&self, spec: &AlgebraSpec) -> Result<()> {
        let n = spec.len();
        if self.perm.len() != n || self.conjugate.len() != n {
            return Err(Error::InvalidTwist(format!("twist acts on {} summands, algebra has {n}", self.perm.len())));
        }
        let mut seen = vec![false; n];
        for (i, &p) in self.perm.iter().enumerate() {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidTwist(format!("{:?} is not a permutation", self.perm)));
            }
            if spec.summands[i] != spec.summands[p] {
                return Err(Error::InvalidTwist(format!(
                    "summand {i} ({}) cannot receive summand {p} ({})",
                    spec.summands[i].label(),
                    spec.summands[p].label()
                )));
            }
        }
        Ok(())
    }

    fn moved_block(spec: &AlgebraSpec, coords: &[R], from: usize, conj: bool) -> Vec<R> {
        let kind = spec.summands[from];
        let block = &coords[spec.block_range(from)];
        if conj {
            kind.from_matrix(&kind.to_matrix(block).conj())
        } else {
            block.to_vec()
        }
    }

    /// Coordinates of `ρ(a)`.
    pub fn apply_coords(&self, spec: &AlgebraSpec, coords: &[R]) -> Vec<R> {
        (0..spec.len()).flat_map(|i| Self::moved_block(spec, coords, self.perm[i], self.conjugate[i])).collect()
    }

    /// Coordinates of `ρ⁻¹(a)`.
    pub fn apply_inverse_coords(&self, spec: &AlgebraSpec, coords: &[R]) -> Vec<R> {
        let mut out = vec![R::zero(); coords.len()];
        for i in 0..spec.len() {
            let target = spec.block_range(self.perm[i]);
            let moved = Self::moved_block(spec, coords, i, self.conjugate[i]);
            out[target].clone_from_slice(&moved);
        }
        out
    }

    pub fn apply(&self, a: &AlgebraElement<R>) -> Result<AlgebraElement<R>> {
        self.check_spec(a.spec())?;
        AlgebraElement::new(a.spec(), self.apply_coords(a.spec(), a.coords()))
    }

    pub fn apply_inverse(&self, a: &AlgebraElement<R>) -> Result<AlgebraElement<R>> {
        self.check_spec(a.spec())?;
        AlgebraElement::new(a.spec(), self.apply_inverse_coords(a.spec(), a.coords()))
    }

    /// `ρ(O) = R O R*`; needs an inner twist.
    pub fn apply_operator(&self, o: &SparseMatrix<R>) -> Result<SparseMatrix<R>> {
        let r = self.unitary.as_ref().ok_or_else(|| Error::InvalidTwist("no implementing unitary".into()))?;
        let r = SparseMatrix::from_dense(r);
        Ok(&(&r * o) * &r.adjoint())
    }

    /// Checks the kind-preserving permutation, the regularity condition
    /// `ρ(a*) = (ρ⁻¹(a))*` on the basis, and, for an inner twist, that `R`
    /// is unitary and implements ρ on the representation.
    pub fn validate(&self, rep: &Representation<R>) -> Result<()> {
        let spec = rep.spec();
        self.check_spec(spec)?;
        for k in 0..spec.real_dimension() {
            let a = AlgebraElement::<R>::basis(spec, k);
            if self.apply(&a.star())? != self.apply_inverse(&a)?.star() {
                return Err(Error::InvalidTwist(format!("rho(a*) != (rho^-1(a))* on basis element {k}")));
            }
        }
        let Some(r) = &self.unitary else {
            return Ok(());
        };
        let n = rep.hilbert_dim();
        if r.rows() != n || r.cols() != n {
            return Err(Error::InvalidTwist(format!(
                "R is {}x{}, Hilbert space has dimension {n}",
                r.rows(),
                r.cols()
            )));
        }
        let rs = SparseMatrix::from_dense(r);
        let scale = rs.max_abs().max(1.0);
        if !(&(&rs.adjoint() * &rs) - &SparseMatrix::identity(n)).is_negligible(scale) {
            return Err(Error::InvalidTwist("R is not unitary".into()));
        }
        if let Some(k) = first_non_intertwined(rep, self, &rs) {
            return Err(Error::InvalidTwist(format!("R does not implement rho on basis element {k}")));
        }
        Ok(())
    }
}

fn first_non_intertwined<R: RealScalar>(
    rep: &Representation<R>,
    rho: &TwistData<R>,
    r: &SparseMatrix<R>,
) -> Option<usize> {
    let spec = rep.spec();
    let r_adj = r.adjoint();
    let scale = r.max_abs().max(1.0);
    (0..spec.real_dimension()).find(|&k| {
        let mut e = vec![R::zero(); spec.real_dimension()];
        e[k] = R::one();
        let lhs = rep.apply_coords(&rho.apply_coords(spec, &e));
        let rhs = &(r * rep.basis_sparse(k)) * &r_adj;
        !(&lhs - &rhs).is_negligible(scale * scale)
    })
}

/// `[D, a]_ρ = D a − ρ(a) D`. Without an implementing unitary, `a` is pulled
/// back through `rep` so that ρ can act on its coordinates.
pub fn twisted_commutator<R: RealScalar>(
    d: &ComplexMatrix<R>,
    a: &ComplexMatrix<R>,
    rho: &TwistData<R>,
    rep: Option<&Representation<R>>,
) -> Result<ComplexMatrix<R>> {
    let sa = SparseMatrix::from_dense(a);
    let rho_a = match (&rho.unitary, rep) {
        (Some(_), _) => rho.apply_operator(&sa)?,
        (None, Some(rep)) => {
            let x = rep.pullback_sparse(&sa)?;
            rep.apply_coords(&rho.apply_coords(rep.spec(), x.coords()))
        }
        (None, None) if rho.perm.iter().enumerate().all(|(i, &p)| i == p) && !rho.conjugate.contains(&true) => {
            sa.clone()
        }
        (None, None) => return Err(Error::NotInImage),
    };
    let sd = SparseMatrix::from_dense(d);
    Ok((&(&sd * &sa) - &(&rho_a * &sd)).to_dense())
}

/// Eigenspace projections `((I + Γ)/2, (I − Γ)/2)`.
fn projections<R: RealScalar>(gamma: &SparseMatrix<R>) -> (SparseMatrix<R>, SparseMatrix<R>) {
    let n = gamma.rows();
    let half = R::from_ratio(1, 2);
    let id = SparseMatrix::identity(n);
    ((&id + gamma).scale_real(&half), (&id - gamma).scale_real(&half))
}

/// Signs of a signed-diagonal grading, or `None` for any other grading.
fn diagonal_signs<R: RealScalar>(gamma: &ComplexMatrix<R>) -> Option<Vec<bool>> {
    gamma.is_signed_diagonal().then(|| (0..gamma.rows()).map(|i| gamma[(i, i)].re > R::zero()).collect())
}

/// The twist by grading of a graded triple.
///
/// The doubled algebra `A ⊕ A` acts by `π(a, a') = P₊π(a) + P₋π(a')` with
/// `P± = (I ± Γ)/2`; D, Γ, J and the declared signs are kept. The twist is
/// the flip of the two copies. `identification`, if given, is used as the
/// implementing unitary `R` and must swap the eigenspaces and intertwine.
/// Otherwise slot permutations are tried in turn: an XOR involution of the
/// plan's slots, a group-by-group matching, and, for a diagonal grading, the
/// pairing of the k-th `+1` slot with the k-th `−1` slot. If none implements
/// the flip, the twist is returned without a unitary.
pub fn twist_by_grading<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    identification: Option<&ComplexMatrix<R>>,
) -> Result<(FiniteRealTriple<R>, TwistData<R>)> {
    let gamma = t.grading().ok_or(Error::MissingGrading)?;
    let g = t.grading_sparse().expect("grading present");
    let n = t.hilbert_dim();
    let (p_plus, p_minus) = projections(g);
    let plus_dim = p_plus.to_dense().trace().re.to_f64().round() as usize;
    let minus_dim = n - plus_dim;
    if plus_dim != minus_dim {
        return Err(Error::UnequalEigenspaces(plus_dim, minus_dim));
    }

    let spec = t.spec();
    let doubled_spec = spec.doubled();
    let d = spec.real_dimension();
    let mut embed = Vec::with_capacity(2 * d);
    for p in [&p_plus, &p_minus] {
        for k in 0..d {
            embed.push(p * t.rep().basis_sparse(k));
        }
    }
    let mut rep = Representation::from_sparse(&doubled_spec, n, embed)?;
    if let Some(plan) = doubled_plan(t, gamma) {
        rep = rep.with_plan(plan);
    }

    let mut rho = TwistData::flip(spec.len());
    let candidates: Vec<ComplexMatrix<R>> = match identification {
        Some(r) => vec![r.clone()],
        None => rep
            .plan()
            .map(|plan| (xor_identification(plan, spec.len()), plan_identification(plan, spec.len())))
            .into_iter()
            .flat_map(|(a, b)| a.into_iter().chain(b))
            .chain(default_identification(gamma))
            .collect(),
    };
    let mut found = false;
    for r in candidates {
        let with_r = rho.clone().with_unitary(Some(r.clone()));
        let rs = SparseMatrix::from_dense(&r);
        let swaps = (&(&rs * g) + &(g * &rs)).is_negligible(rs.max_abs().max(1.0));
        if swaps && with_r.validate(&rep).is_ok() {
            rho = with_r;
            found = true;
            break;
        }
    }
    if identification.is_some() && !found {
        return Err(Error::InvalidTwist(
            "identification must be unitary, exchange the grading eigenspaces and implement the flip".into(),
        ));
    }
    let doubled = FiniteRealTriple::new(
        rep,
        t.dirac().clone(),
        Some(gamma.clone()),
        t.real_structure().cloned(),
        t.signs().copied(),
    )?;
    Ok((doubled, rho))
}

fn permutation_matrix<R: RealScalar>(image: &[usize]) -> ComplexMatrix<R> {
    let n = image.len();
    let one = num_complex::Complex::new(R::one(), R::zero());
    let mut r = ComplexMatrix::zeros(n, n);
    for (i, &j) in image.iter().enumerate() {
        r.set(j, i, one.clone());
    }
    r
}

/// The slot involution `i ↦ i XOR mask` for the smallest mask that carries
/// every group of one copy onto a group of the other with the same block.
fn xor_identification<R: RealScalar>(plan: &AssignmentPlan, shift: usize) -> Option<ComplexMatrix<R>> {
    let n = plan.hilbert_dim;
    let groups: std::collections::HashSet<(usize, bool, &[usize])> =
        plan.groups.iter().map(|g| (g.block, g.conjugate, g.slots.as_slice())).collect();
    let partner_block = |b: usize| if b < shift { b + shift } else { b - shift };
    (1..n.next_power_of_two())
        .find(|&mask| {
            (0..n).all(|i| i ^ mask < n)
                && plan.groups.iter().all(|g| {
                    let image: Vec<usize> = g.slots.iter().map(|&i| i ^ mask).collect();
                    groups.contains(&(partner_block(g.block), g.conjugate, image.as_slice()))
                })
        })
        .map(|mask| permutation_matrix(&(0..n).map(|i| i ^ mask).collect::<Vec<_>>()))
}

/// Permutation matching each group of the first copy with the next unused
/// group of the second copy carrying the same block, slot by slot. Slots in
/// no group are paired in order.
fn plan_identification<R: RealScalar>(plan: &AssignmentPlan, shift: usize) -> Option<ComplexMatrix<R>> {
    let n = plan.hilbert_dim;
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let (first, second): (Vec<&PlanGroup>, Vec<&PlanGroup>) = plan.groups.iter().partition(|g| g.block < shift);
    let mut used = vec![false; second.len()];
    for g in &first {
        let k = (0..second.len())
            .find(|&k| !used[k] && second[k].block == g.block + shift && second[k].conjugate == g.conjugate)?;
        used[k] = true;
        for (&a, &b) in g.slots.iter().zip(&second[k].slots) {
            if partner[a].is_some() || partner[b].is_some() {
                return None;
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
    }
    if used.contains(&false) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|&i| partner[i].is_none()).collect();
    if free.len() % 2 == 1 {
        return None;
    }
    let (lo, hi) = free.split_at(free.len() / 2);
    for (&a, &b) in lo.iter().zip(hi) {
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    let image = partner.into_iter().collect::<Option<Vec<usize>>>()?;
    Some(permutation_matrix(&image))
}

/// Permutation unitary pairing the k-th `+1` slot with the k-th `−1` slot.
fn default_identification<R: RealScalar>(gamma: &ComplexMatrix<R>) -> Option<ComplexMatrix<R>> {
    let signs = diagonal_signs(gamma)?;
    let plus: Vec<usize> = (0..signs.len()).filter(|&i| signs[i]).collect();
    let minus: Vec<usize> = (0..signs.len()).filter(|&i| !signs[i]).collect();
    let mut r = ComplexMatrix::zeros(signs.len(), signs.len());
    let one = num_complex::Complex::new(R::one(), R::zero());
    for (&p, &m) in plus.iter().zip(&minus) {
        r.set(p, m, one.clone());
        r.set(m, p, one.clone());
    }
    Some(r)
}

/// Plan of the doubled representation when the original has a plan, the
/// grading is diagonal, and every group sits inside one eigenspace.
fn doubled_plan<R: RealScalar>(t: &FiniteRealTriple<R>, gamma: &ComplexMatrix<R>) -> Option<AssignmentPlan> {
    let plan = t.rep().plan()?;
    let signs = diagonal_signs(gamma)?;
    let shift = t.spec().len();
    let groups = plan
        .groups
        .iter()
        .map(|g| {
            let plus = signs[g.slots[0]];
            g.slots.iter().all(|&s| signs[s] == plus).then(|| PlanGroup {
                block: if plus { g.block } else { g.block + shift },
                conjugate: g.conjugate,
                slots: g.slots.clone(),
            })
        })
        .collect::<Option<Vec<_>>>()?;
    Some(AssignmentPlan { hilbert_dim: plan.hilbert_dim, groups })
}

/// Outcome of comparing the two forms of compatibility between an inner
/// twist and the real structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibilityReport {
    /// The sign ε''' with `JR = ε'''RJ`, if exactly one sign works.
    pub eps_triple: Option<Sign>,
    /// `JR = ±RJ` held for both signs (only possible for `R = 0`).
    pub both_signs: bool,
    /// `ρ(a°) = (ρ(a))°` on every basis element.
    pub operator_form: bool,
    /// Both formulations agree.
    pub equivalent: bool,
    /// First basis element violating the operator form, if any.
    pub operator_violation: Option<usize>,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.eps_triple.is_some() && self.operator_form
    }
}

/// Compatibility of an inner twist with the real structure: `JR = ε'''RJ`,
/// and the operator form `ρ(a°) = (ρ(a))°` on the basis.
pub fn check_compatibility<R: RealScalar>(t: &FiniteRealTriple<R>, rho: &TwistData<R>) -> Result<CompatibilityReport> {
    let j = t.real_structure().ok_or(Error::MissingRealStructure)?;
    let r = rho
        .unitary
        .as_ref()
        .ok_or_else(|| Error::InvalidTwist("compatibility needs an implementing unitary".into()))?;
    rho.check_spec(t.spec())?;
    // J R v = U conj(R) conj(v) and R J v = R U conj(v).
    let u = SparseMatrix::from_dense(j.matrix());
    let rs = SparseMatrix::from_dense(r);
    let jr = &u * &rs.conj();
    let rj = &rs * &u;
    let scale = t.scale().max(rs.max_abs());
    let plus = (&jr - &rj).is_negligible(scale * scale);
    let minus = (&jr + &rj).is_negligible(scale * scale);
    let eps_triple = match (plus, minus) {
        (true, false) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    };

    let spec = t.spec();
    let mut operator_violation = None;
    for k in 0..spec.real_dimension() {
        let mut e = vec![R::zero(); spec.real_dimension()];
        e[k] = R::one();
        let lhs = rho.apply_operator(&t.opposite_coords(&e)?)?;
        let rhs = t.opposite_coords(&rho.apply_coords(spec, &e))?;
        if !(&lhs - &rhs).is_negligible(scale * scale * scale) {
            operator_violation = Some(k);
            break;
        }
    }
    let operator_form = operator_violation.is_none();
    Ok(CompatibilityReport {
        eps_triple,
        both_signs: plus && minus,
        operator_form,
        equivalent: eps_triple.is_some() == operator_form,
        operator_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_representation, BlockKind};
    use crate::linalg::AntilinearOp;
    use crate::scalar::Rational;
    use crate::triple::tests::{complex_on_c2, ko0_toy, ko6_toy};
    use crate::triple::{check_axioms, check_first_order, check_twisted_first_order};
    use num_complex::Complex;

    type Q = Rational;
    type M = ComplexMatrix<Q>;

    fn c(re: i64, im: i64) -> Complex<Q> {
        Complex::new(Q::from(re), Q::from(im))
    }

    #[test]
    fn identity_twist_gives_ordinary_commutator() {
        let d = M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]);
        let a = M::diagonal(&[c(2, 0), c(5, 1)]);
        let rho = TwistData::identity(1);
        assert_eq!(twisted_commutator(&d, &a, &rho, None).unwrap(), d.commutator(&a));
    }

    #[test]
    fn swap_twist_on_diagonal() {
        // D = diag(1, −1), a = diag(x, y), ρ swaps the slots:
        // D a − ρ(a) D = diag(x − y, −y + x) = (x − y) I.
        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField, BlockKind::ComplexField]).unwrap();
        let rep = Representation::<Q>::defining(&spec).unwrap();
        let d = M::diagonal(&[c(1, 0), c(-1, 0)]);
        let (x, y) = (c(3, 1), c(-2, 4));
        let a = M::diagonal(&[x.clone(), y.clone()]);
        let rho = TwistData { perm: vec![1, 0], conjugate: vec![false, false], unitary: None };
        let expected = M::identity(2).scale(&(x - y));
        assert_eq!(twisted_commutator(&d, &a, &rho, Some(&rep)).unwrap(), expected);
        let swap = M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]);
        let inner = rho.clone().with_unitary(Some(swap));
        assert_eq!(twisted_commutator(&d, &a, &inner, None).unwrap(), expected);
    }

    #[test]
    fn invalid_twists_are_rejected() {
        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField, BlockKind::Quaternions]).unwrap();
        let rep = Representation::<Q>::defining(&spec).unwrap();
        let wrong_kind = TwistData { perm: vec![1, 0], conjugate: vec![false, false], unitary: None };
        assert!(wrong_kind.validate(&rep).is_err());
        let not_perm = TwistData { perm: vec![0, 0], conjugate: vec![false, false], unitary: None };
        assert!(not_perm.validate(&rep).is_err());
        let bad_r = TwistData::identity(2).with_unitary(Some(M::identity(3).scale_real(&Q::from(2))));
        assert!(bad_r.validate(&rep).is_err());
    }

    #[test]
    fn three_cycle_violates_regularity() {
        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField; 3]).unwrap();
        let rep = Representation::<Q>::defining(&spec).unwrap();
        let cycle = TwistData { perm: vec![1, 2, 0], conjugate: vec![false; 3], unitary: None };
        assert!(cycle.validate(&rep).is_err());
    }

    #[test]
    fn flip_is_an_involution() {
        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField, BlockKind::Quaternions]).unwrap().doubled();
        let rho = TwistData::<Q>::flip(2);
        for k in 0..spec.real_dimension() {
            let a = AlgebraElement::basis(&spec, k);
            assert_eq!(rho.apply(&rho.apply(&a).unwrap()).unwrap(), a);
            assert_eq!(rho.apply_inverse(&a).unwrap(), rho.apply(&a).unwrap());
        }
    }

    #[test]
    fn twist_by_grading_of_ko6_toy() {
        let t = ko6_toy(2);
        let (doubled, rho) = twist_by_grading(&t, None).unwrap();
        assert_eq!(doubled.spec().real_dimension(), 4);
        // π(a, a) = π(a).
        for k in 0..2 {
            let mut coords = vec![Q::from(0); 4];
            coords[k] = Q::from(1);
            coords[k + 2] = Q::from(1);
            assert_eq!(doubled.rep().apply_coords(&coords), *t.rep().basis_sparse(k));
        }
        assert!(rho.is_inner());
        let r = SparseMatrix::from_dense(rho.unitary.as_ref().unwrap());
        assert_eq!(&r * &r, SparseMatrix::identity(2));
        assert_eq!(check_axioms(&doubled).signs, check_axioms(&t).signs);
        assert!(check_twisted_first_order(&doubled, &rho).unwrap().passed);
        assert!(doubled.rep().plan().is_some());
        let comp = check_compatibility(&doubled, &rho).unwrap();
        assert!(comp.compatible() && comp.equivalent);
    }

    #[test]
    fn twist_by_grading_without_inner_unitary() {
        // ℂ acts as diag(z, z̄): no permutation intertwines (z̄', z) with (z', z̄).
        let t = FiniteRealTriple::new(
            complex_on_c2(true),
            M::zeros(2, 2),
            Some(M::diagonal(&[c(1, 0), c(-1, 0)])),
            Some(AntilinearOp::conjugation(2)),
            None,
        )
        .unwrap();
        let (doubled, rho) = twist_by_grading(&t, None).unwrap();
        assert!(!rho.is_inner());
        assert!(check_first_order(&t).unwrap().passed);
        assert!(check_twisted_first_order(&doubled, &rho).unwrap().passed);
        assert!(check_compatibility(&doubled, &rho).is_err());
    }

    #[test]
    fn twist_by_grading_errors() {
        let t = ko0_toy();
        let ungraded = FiniteRealTriple::new(t.rep().clone(), t.dirac().clone(), None, None, None).unwrap();
        assert_eq!(twist_by_grading(&ungraded, None).unwrap_err(), Error::MissingGrading);

        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField]).unwrap();
        let plan = AssignmentPlan {
            hilbert_dim: 3,
            groups: (0..3).map(|s| PlanGroup { block: 0, conjugate: false, slots: vec![s] }).collect(),
        };
        let rep = build_representation::<Q>(&spec, &plan).unwrap();
        let gamma = M::diagonal(&[c(1, 0), c(1, 0), c(-1, 0)]);
        let t = FiniteRealTriple::new(rep, M::zeros(3, 3), Some(gamma), None, None).unwrap();
        assert_eq!(twist_by_grading(&t, None).unwrap_err(), Error::UnequalEigenspaces(2, 1));
    }

    #[test]
    fn supplied_identification_must_intertwine() {
        let t = ko0_toy();
        let (_, rho) = twist_by_grading(&t, None).unwrap();
        assert!(rho.is_inner());
        // The identity does not exchange the eigenspaces.
        assert!(matches!(twist_by_grading(&t, Some(&M::identity(2))), Err(Error::InvalidTwist(_))));
    }

    #[test]
    fn compatibility_signs() {
        // R = I: ε''' = +1 for any J.
        let t = ko6_toy(1);
        let rho = TwistData::identity(1).with_unitary(Some(M::identity(2)));
        assert_eq!(check_compatibility(&t, &rho).unwrap().eps_triple, Some(Sign::Plus));

        // R = swap, J = diag(1, −1)∘conj: JR = −RJ.
        let spec = AlgebraSpec::new(vec![BlockKind::RealField]).unwrap();
        let plan = AssignmentPlan {
            hilbert_dim: 2,
            groups: vec![
                PlanGroup { block: 0, conjugate: false, slots: vec![0] },
                PlanGroup { block: 0, conjugate: false, slots: vec![1] },
            ],
        };
        let rep = build_representation::<Q>(&spec, &plan).unwrap();
        let j = AntilinearOp::new(M::diagonal(&[c(1, 0), c(-1, 0)])).unwrap();
        let t = FiniteRealTriple::new(rep, M::zeros(2, 2), None, Some(j), None).unwrap();
        let swap = M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]);
        let rho = TwistData::identity(1).with_unitary(Some(swap));
        let report = check_compatibility(&t, &rho).unwrap();
        assert_eq!(report.eps_triple, Some(Sign::Minus));
        assert!(report.operator_form && report.equivalent);
    }

    #[test]
    fn phase_scaled_unitary_breaks_the_sign_form_only() {
        // R and e^{iθ}R implement the same automorphism; JR = ±RJ needs e^{2iθ} = ±1.
        let (t, rho) = twist_by_grading(&ko6_toy(1), None).unwrap();
        let phase = Complex::new(Q::new(3, 5), Q::new(4, 5));
        let scaled = rho.unitary.clone().unwrap().scale(&phase);
        let rho = TwistData::flip(1).with_unitary(Some(scaled));
        rho.validate(t.rep()).unwrap();
        let report = check_compatibility(&t, &rho).unwrap();
        assert_eq!(report.eps_triple, None);
        assert!(report.operator_form);
        assert!(!report.equivalent);
    }
}
