//! One generation of the standard model as a finite real triple: the
//! 32-dimensional internal geometry, the 128-dimensional fiber over a
//! four-dimensional manifold, and its twist by grading.
//!
//! Flat indices put `C` outermost, then `ṡ`, `s`, the lepto-colour index `I`
//! and the flavour index `α`:
//! `(((C·2 + ṡ)·2 + s)·4 + I)·4 + α`, and `(C·4 + I)·4 + α` internally.
//! Flavour slots are `α = 0..4` for `1̇, 2̇, 1, 2`; chirality is `s = 0` for
//! right and `s = 1` for left.

use num_complex::Complex;
use serde::Serialize;

use crate::algebra::{build_representation, AlgebraElement, AlgebraSpec, AssignmentPlan, BlockKind, PlanGroup};
use crate::error::Result;
use crate::linalg::{AntilinearOp, ComplexMatrix, SparseMatrix};
use crate::oneforms::omega1_span;
use crate::realpart::{intersect_with_opposite, real_part, verify_grading_branch, verify_twisted_real_part};
use crate::scalar::RealScalar;
use crate::triple::{check_axioms, check_twisted_first_order, FiniteRealTriple, KOSigns};
use crate::twist::{check_compatibility, twist_by_grading, TwistData};

pub const INTERNAL_DIM: usize = 32;
pub const FIBER_DIM: usize = 128;

/// Particle names by `α` for leptons and quarks. The left-handed up quark is
/// `u_L`.
pub const LEPTON_FLAVOURS: [&str; 4] = ["nu_R", "e_R", "nu_L", "e_L"];
pub const QUARK_FLAVOURS: [&str; 4] = ["u_R", "d_R", "u_L", "d_L"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SmIndex {
    /// 0 particle, 1 antiparticle.
    pub c: usize,
    /// Spinor particle/antiparticle part; 0 for the internal space.
    pub sdot: usize,
    /// 0 right, 1 left; 0 for the internal space.
    pub s: usize,
    /// 0 lepton, 1..=3 quark colours.
    pub i: usize,
    /// 0, 1 dotted (right-handed); 2, 3 undotted (left-handed).
    pub alpha: usize,
}

impl SmIndex {
    pub fn internal(c: usize, i: usize, alpha: usize) -> Self {
        Self { c, sdot: 0, s: 0, i, alpha }
    }

    pub fn fiber(c: usize, sdot: usize, s: usize, i: usize, alpha: usize) -> Self {
        Self { c, sdot, s, i, alpha }
    }

    pub fn internal_flat(&self) -> usize {
        (self.c * 4 + self.i) * 4 + self.alpha
    }

    pub fn fiber_flat(&self) -> usize {
        (((self.c * 2 + self.sdot) * 2 + self.s) * 4 + self.i) * 4 + self.alpha
    }

    pub fn from_internal_flat(k: usize) -> Self {
        Self::internal(k / 16, (k / 4) % 4, k % 4)
    }

    pub fn from_fiber_flat(k: usize) -> Self {
        Self::fiber(k / 64, (k / 32) % 2, (k / 16) % 2, (k / 4) % 4, k % 4)
    }

    pub fn is_dotted(&self) -> bool {
        self.alpha < 2
    }

    /// `γ_F`: +1 on right particles and left antiparticles.
    pub fn gamma_f(&self) -> i64 {
        if (self.c == 0) == self.is_dotted() {
            1
        } else {
            -1
        }
    }

    /// `γ⁵`: +1 on right chirality.
    pub fn gamma5(&self) -> i64 {
        if self.s == 0 {
            1
        } else {
            -1
        }
    }

    pub fn particle_name(&self) -> &'static str {
        if self.i == 0 {
            LEPTON_FLAVOURS[self.alpha]
        } else {
            QUARK_FLAVOURS[self.alpha]
        }
    }
}

/// Yukawa couplings per flavour pair and the Majorana mass of `ν_R`.
#[derive(Clone, Debug, PartialEq)]
pub struct YukawaParams<R: RealScalar> {
    pub y_nu: Complex<R>,
    pub y_e: Complex<R>,
    pub y_u: Complex<R>,
    pub y_d: Complex<R>,
    pub k_r: R,
}

impl<R: RealScalar> Default for YukawaParams<R> {
    fn default() -> Self {
        let c = |re: i64, im: i64| Complex::new(R::from_i64(re), R::from_i64(im));
        Self { y_nu: c(1, 1), y_e: c(2, 0), y_u: c(3, -1), y_d: c(1, 2), k_r: R::from_i64(1) }
    }
}

impl<R: RealScalar> YukawaParams<R> {
    pub fn zero() -> Self {
        let z = Complex::new(R::zero(), R::zero());
        Self { y_nu: z.clone(), y_e: z.clone(), y_u: z.clone(), y_d: z, k_r: R::zero() }
    }

    fn couplings(&self, i: usize) -> [&Complex<R>; 2] {
        if i == 0 {
            [&self.y_nu, &self.y_e]
        } else {
            [&self.y_u, &self.y_d]
        }
    }
}

pub fn sm_algebra() -> AlgebraSpec {
    AlgebraSpec::new(vec![BlockKind::ComplexField, BlockKind::Quaternions, BlockKind::MatC { n: 3 }])
        .expect("valid summands")
}

const BLOCK_C: usize = 0;
const BLOCK_H: usize = 1;
const BLOCK_M: usize = 2;

/// Plan of `ℂ ⊕ ℍ ⊕ M₃(ℂ)`: on particles `c` on `ν_R`, `c̄` on `e_R` and `q`
/// on the left doublet; on antiparticles `c` on leptons and `m` on colour.
fn plan(
    sectors: &[(usize, usize)],
    index: impl Fn(usize, usize, usize, usize, usize) -> usize,
    dim: usize,
) -> AssignmentPlan {
    let mut groups = Vec::new();
    for &(sdot, s) in sectors {
        let at = |c, i, alpha| index(c, sdot, s, i, alpha);
        for i in 0..4 {
            groups.push(PlanGroup { block: BLOCK_C, conjugate: false, slots: vec![at(0, i, 0)] });
            groups.push(PlanGroup { block: BLOCK_C, conjugate: true, slots: vec![at(0, i, 1)] });
            groups.push(PlanGroup { block: BLOCK_H, conjugate: false, slots: vec![at(0, i, 2), at(0, i, 3)] });
        }
        for alpha in 0..4 {
            groups.push(PlanGroup { block: BLOCK_C, conjugate: false, slots: vec![at(1, 0, alpha)] });
            groups.push(PlanGroup {
                block: BLOCK_M,
                conjugate: false,
                slots: (1..4).map(|i| at(1, i, alpha)).collect(),
            });
        }
    }
    AssignmentPlan { hilbert_dim: dim, groups }
}

fn internal_index(c: usize, _sdot: usize, _s: usize, i: usize, alpha: usize) -> usize {
    SmIndex::internal(c, i, alpha).internal_flat()
}

fn fiber_index(c: usize, sdot: usize, s: usize, i: usize, alpha: usize) -> usize {
    SmIndex::fiber(c, sdot, s, i, alpha).fiber_flat()
}

fn cplx<R: RealScalar>(v: i64) -> Complex<R> {
    Complex::new(R::from_i64(v), R::zero())
}

/// Yukawa part of `D_F`: `Y` from the right to the left doublet in every
/// lepto-colour sector, conjugated on antiparticles.
pub fn yukawa_dirac<R: RealScalar>(p: &YukawaParams<R>) -> ComplexMatrix<R> {
    let mut d = ComplexMatrix::zeros(INTERNAL_DIM, INTERNAL_DIM);
    for c in 0..2 {
        for i in 0..4 {
            for (f, y) in p.couplings(i).into_iter().enumerate() {
                let right = SmIndex::internal(c, i, f).internal_flat();
                let left = SmIndex::internal(c, i, f + 2).internal_flat();
                let y = if c == 0 { y.clone() } else { y.conj() };
                d.set(left, right, y.clone());
                d.set(right, left, y.conj());
            }
        }
    }
    d
}

/// Majorana part of `D_F`: `k_R` between `ν_R` and its conjugate.
pub fn majorana_dirac<R: RealScalar>(p: &YukawaParams<R>) -> ComplexMatrix<R> {
    let mut d = ComplexMatrix::zeros(INTERNAL_DIM, INTERNAL_DIM);
    let nu = SmIndex::internal(0, 0, 0).internal_flat();
    let nu_bar = SmIndex::internal(1, 0, 0).internal_flat();
    let k = Complex::new(p.k_r.clone(), R::zero());
    d.set(nu, nu_bar, k.clone());
    d.set(nu_bar, nu, k);
    d
}

pub fn gamma_f<R: RealScalar>() -> ComplexMatrix<R> {
    let diag: Vec<_> = (0..INTERNAL_DIM).map(|k| cplx(SmIndex::from_internal_flat(k).gamma_f())).collect();
    ComplexMatrix::diagonal(&diag)
}

/// `J_F`: particle/antiparticle swap composed with complex conjugation.
pub fn j_f<R: RealScalar>() -> AntilinearOp<R> {
    let u = ComplexMatrix::from_fn(INTERNAL_DIM, INTERNAL_DIM, |r, c| cplx(i64::from((r + 16) % 32 == c)));
    AntilinearOp::new(u).expect("square")
}

/// `γ⁵ = diag(I₂, −I₂)` over `(s, ṡ)` in the flat order `(ṡ, s)`.
fn gamma5<R: RealScalar>() -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(4, 4, |r, c| if r != c { cplx(0) } else { cplx(if r % 2 == 0 { 1 } else { -1 }) })
}

/// `U_M`: `[[0, 1], [−1, 0]]` on `ṡ`, identity on `s`. Gives `J_M² = −1`
/// and `J_M γ⁵ = γ⁵ J_M`.
pub fn u_m<R: RealScalar>() -> ComplexMatrix<R> {
    // (ṡ, s) ↦ 2ṡ + s
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (rd, rs, cd, cs) = (r / 2, r % 2, c / 2, c % 2);
        match (rs == cs, rd, cd) {
            (true, 0, 1) => cplx(1),
            (true, 1, 0) => cplx(-1),
            _ => cplx(0),
        }
    })
}

/// Embeds a spinor operator `S` on `(ṡ, s)` and an internal operator `F`
/// into the fiber order, where `C` sits outside the spinor indices.
fn fiber_product<R: RealScalar>(s: &ComplexMatrix<R>, f: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(FIBER_DIM, FIBER_DIM, |r, c| {
        let (a, b) = (SmIndex::from_fiber_flat(r), SmIndex::from_fiber_flat(c));
        let sa = s[(a.sdot * 2 + a.s, b.sdot * 2 + b.s)].clone();
        let fa = f[(
            SmIndex::internal(a.c, a.i, a.alpha).internal_flat(),
            SmIndex::internal(b.c, b.i, b.alpha).internal_flat(),
        )]
            .clone();
        sa * fa
    })
}

/// The internal triple `(A_SM, ℂ³², D_F, γ_F, J_F)` with signs `(+1, +1, −1)`.
pub fn build_internal_triple<R: RealScalar>(p: &YukawaParams<R>) -> Result<FiniteRealTriple<R>> {
    let spec = sm_algebra();
    let rep = build_representation(&spec, &plan(&[(0, 0)], internal_index, INTERNAL_DIM))?;
    let d = &yukawa_dirac(p) + &majorana_dirac(p);
    FiniteRealTriple::new(rep, d, Some(gamma_f()), Some(j_f()), Some(KOSigns::new(1, 1, Some(-1))))
}

fn fiber_dirac<R: RealScalar>(d_f: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    fiber_product(&gamma5(), d_f)
}

/// The product with the spinor fiber: `D = γ⁵⊗D_F`, `Γ = γ⁵⊗γ_F`,
/// `J = J_M⊗J_F`, signs `(−1, +1, −1)`.
pub fn build_fiber_triple<R: RealScalar>(p: &YukawaParams<R>) -> Result<FiniteRealTriple<R>> {
    let spec = sm_algebra();
    let sectors = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let rep = build_representation(&spec, &plan(&sectors, fiber_index, FIBER_DIM))?;
    let d = fiber_dirac(&(&yukawa_dirac(p) + &majorana_dirac(p)));
    let gamma = fiber_product(&gamma5(), &gamma_f());
    let j = AntilinearOp::new(fiber_product(&u_m(), j_f::<R>().matrix())).expect("square");
    FiniteRealTriple::new(rep, d, Some(gamma), Some(j), Some(KOSigns::new(-1, 1, Some(-1))))
}

/// Exchange of right and left chirality.
pub fn chirality_flip<R: RealScalar>() -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(FIBER_DIM, FIBER_DIM, |r, c| {
        let (a, b) = (SmIndex::from_fiber_flat(r), SmIndex::from_fiber_flat(c));
        cplx(i64::from(a.s != b.s && (a.c, a.sdot, a.i, a.alpha) == (b.c, b.sdot, b.i, b.alpha)))
    })
}

/// Twist by grading of the fiber triple, implemented by the chirality flip.
pub fn build_twisted_sm<R: RealScalar>(p: &YukawaParams<R>) -> Result<(FiniteRealTriple<R>, TwistData<R>)> {
    twist_by_grading(&build_fiber_triple(p)?, Some(&chirality_flip()))
}

/// The doubled action written out blockwise: `Q` on particles and `M` on
/// antiparticles, with `Q_s = (𝖼_s, q_s̄)` and `M_s = (𝗆_s̄, 𝗆_s)` over
/// `(α̇, α)`, where `𝖼_s = diag(c_s, c̄_s)`, `𝗆_s = diag(c_s, m_s)` over `I`,
/// and `c_r = c`, `c_l = c'` and so on. Coordinates are `(c, q, m, c', q', m')`.
pub fn block_pattern<R: RealScalar>(coords: &[R]) -> ComplexMatrix<R> {
    let doubled = sm_algebra().doubled();
    let a = AlgebraElement::new(&doubled, coords.to_vec()).expect("48 coordinates");
    let blocks = a.blocks();
    // Component of chirality s: unprimed for s = r, primed for s = l.
    let c = |s: usize| blocks[3 * s + BLOCK_C][(0, 0)].clone();
    let q = |s: usize| &blocks[3 * s + BLOCK_H];
    let m = |s: usize| &blocks[3 * s + BLOCK_M];
    let sf = |s: usize| ComplexMatrix::<R>::from_fn(4, 4, |r, c| cplx(i64::from(r == c && r % 2 == s)));
    let mut out = ComplexMatrix::zeros(FIBER_DIM, FIBER_DIM);
    for s in 0..2 {
        let sbar = 1 - s;
        // Internal operator for chirality s, then restricted to that chirality.
        let mut f = ComplexMatrix::zeros(INTERNAL_DIM, INTERNAL_DIM);
        let at = SmIndex::internal;
        for i in 0..4 {
            f.set(at(0, i, 0).internal_flat(), at(0, i, 0).internal_flat(), c(s));
            f.set(at(0, i, 1).internal_flat(), at(0, i, 1).internal_flat(), c(s).conj());
            for x in 0..2 {
                for y in 0..2 {
                    f.set(at(0, i, 2 + x).internal_flat(), at(0, i, 2 + y).internal_flat(), q(sbar)[(x, y)].clone());
                }
            }
        }
        for alpha in 0..4 {
            let src = if alpha < 2 { sbar } else { s };
            f.set(at(1, 0, alpha).internal_flat(), at(1, 0, alpha).internal_flat(), c(src));
            for x in 0..3 {
                for y in 0..3 {
                    f.set(
                        at(1, 1 + x, alpha).internal_flat(),
                        at(1, 1 + y, alpha).internal_flat(),
                        m(src)[(x, y)].clone(),
                    );
                }
            }
        }
        out = &out + &fiber_product(&sf(s), &f);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MajoranaSpans {
    /// Untwisted fiber triple with `D` restricted to the Majorana block.
    pub untwisted: usize,
    /// Twisted triple with the same `D`.
    pub twisted: usize,
    /// Doubled algebra with the plain commutator.
    pub doubled_untwisted: usize,
}

/// Real dimensions of the one-form spans generated by the Majorana part of
/// the Dirac operator alone.
pub fn majorana_spans<R: RealScalar>(p: &YukawaParams<R>) -> Result<MajoranaSpans> {
    let d_m = fiber_dirac(&majorana_dirac(p));
    let fiber = build_fiber_triple(p)?.with_dirac(d_m.clone())?;
    let (twisted, rho) = build_twisted_sm(p)?;
    let twisted = twisted.with_dirac(d_m)?;
    Ok(MajoranaSpans {
        untwisted: omega1_span(&fiber, None)?.dimension,
        twisted: omega1_span(&twisted, Some(&rho))?.dimension,
        doubled_untwisted: omega1_span(&twisted, None)?.dimension,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SmReport {
    pub internal_ko: Option<u8>,
    pub internal_axioms: bool,
    pub fiber_ko: Option<u8>,
    pub fiber_axioms: bool,
    /// The doubled action agrees with [`block_pattern`] on every basis element.
    pub block_pattern: bool,
    /// `J π(a) J⁻¹` swaps the particle and antiparticle blocks conjugated.
    pub j_block_swap: bool,
    pub compatible: bool,
    pub twisted_first_order: bool,
    pub real_part_dim: usize,
    pub real_part_structure: String,
    /// The real part is spanned by the identity `(1, 1, I₂, I₂, I₃, I₃)`.
    pub real_part_is_scalar: bool,
    pub rho_fixes_real_part: bool,
    pub fiber_a_j_dim: usize,
    pub intersection_dim: usize,
    pub intersection_equals_a_j: bool,
    pub twisted_real_part: bool,
    pub grading_branch: bool,
    pub majorana: MajoranaSpans,
}

impl SmReport {
    pub fn passed(&self) -> bool {
        self.internal_ko == Some(6)
            && self.internal_axioms
            && self.fiber_ko == Some(2)
            && self.fiber_axioms
            && self.block_pattern
            && self.j_block_swap
            && self.compatible
            && self.twisted_first_order
            && self.real_part_dim == 1
            && self.real_part_is_scalar
            && self.rho_fixes_real_part
            && self.intersection_dim == 1
            && self.intersection_equals_a_j
            && self.twisted_real_part
            && self.grading_branch
    }
}

fn block_swap_holds<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<bool> {
    for k in 0..t.spec().real_dimension() {
        let a = t.rep().basis_sparse(k);
        let conj = t.j_conjugate_sparse(a)?;
        let mut expected = SparseMatrix::zeros(FIBER_DIM, FIBER_DIM);
        for (r, c, v) in a.iter() {
            expected.add_at((r + 64) % 128, (c + 64) % 128, &v.conj());
        }
        if !(&conj - &expected).is_negligible(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds every SM variant and checks the twisted model and its real part.
pub fn verify_sm_real_part<R: RealScalar>(p: &YukawaParams<R>) -> Result<SmReport> {
    let internal = build_internal_triple(p)?;
    let internal_axioms = check_axioms(&internal);
    let fiber = build_fiber_triple(p)?;
    let fiber_axioms = check_axioms(&fiber);
    let (twisted, rho) = build_twisted_sm(p)?;

    let block_pattern_ok = (0..twisted.spec().real_dimension()).all(|k| {
        let e = AlgebraElement::<R>::basis(twisted.spec(), k);
        (&twisted.rep().basis_sparse(k).to_dense() - &block_pattern(e.coords())).is_negligible(1.0)
    });
    let rp = real_part(&twisted, Some(&rho))?;
    let identity = AlgebraElement::<R>::identity(twisted.spec());
    let scalar =
        crate::linalg::RealSubspaceBasis::from_spanning(identity.coords().len(), vec![identity.into_coords()])?;
    let rho_fixes = rp.basis.vectors().iter().all(|v| &rho.apply_coords(twisted.spec(), v) == v);
    let fiber_a_j = real_part(&fiber, None)?;
    let inter = intersect_with_opposite(&fiber)?;
    Ok(SmReport {
        internal_ko: internal_axioms.ko_dimension,
        internal_axioms: internal_axioms.passed(),
        fiber_ko: fiber_axioms.ko_dimension,
        fiber_axioms: fiber_axioms.passed(),
        block_pattern: block_pattern_ok,
        j_block_swap: block_swap_holds(&twisted)?,
        compatible: check_compatibility(&twisted, &rho)?.compatible(),
        twisted_first_order: check_twisted_first_order(&twisted, &rho)?.passed,
        real_part_dim: rp.real_dimension,
        real_part_structure: rp.structure.clone(),
        real_part_is_scalar: rp.basis.same_span(&scalar),
        rho_fixes_real_part: rho_fixes,
        fiber_a_j_dim: fiber_a_j.real_dimension,
        intersection_dim: inter.dim(),
        intersection_equals_a_j: inter.same_span(&fiber_a_j.basis),
        twisted_real_part: verify_twisted_real_part(&twisted, &rho)?.passed(),
        grading_branch: verify_grading_branch(&fiber, Some(&chirality_flip()))?.passed(),
        majorana: majorana_spans(p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::triple::{check_first_order, check_order_zero};

    type Q = Rational;

    #[test]
    fn index_bijections() {
        for k in 0..INTERNAL_DIM {
            assert_eq!(SmIndex::from_internal_flat(k).internal_flat(), k);
        }
        for k in 0..FIBER_DIM {
            assert_eq!(SmIndex::from_fiber_flat(k).fiber_flat(), k);
        }
        assert_eq!(SmIndex::internal(0, 1, 2).particle_name(), "u_L");
    }

    #[test]
    fn gamma_f_counts() {
        // +1: 4 sectors × 2 right particles + 4 sectors × 2 left antiparticles.
        let g = gamma_f::<Q>();
        assert_eq!(g.trace(), cplx(0));
        let plus = (0..32).filter(|&k| g[(k, k)] == cplx(1)).count();
        assert_eq!(plus, 16);
        assert!((&g.matmul(&g).unwrap() - &ComplexMatrix::identity(32)).is_exactly_zero());
    }

    #[test]
    fn internal_triple_is_ko6() {
        let t = build_internal_triple(&YukawaParams::<Q>::default()).unwrap();
        let r = check_axioms(&t);
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.ko_dimension, Some(6));
        assert!(check_order_zero(&t).unwrap().passed);
        assert!(check_first_order(&t).unwrap().passed);
        let zero = build_internal_triple(&YukawaParams::<Q>::zero()).unwrap();
        assert!(zero.dirac().is_exactly_zero());
        assert!(check_axioms(&zero).checks.passed());
    }

    #[test]
    fn majorana_block_commutes_with_the_algebra() {
        let t = build_internal_triple(&YukawaParams::<Q>::default()).unwrap();
        let m = SparseMatrix::from_dense(&majorana_dirac(&YukawaParams::<Q>::default()));
        for k in 0..24 {
            let a = t.rep().basis_sparse(k);
            assert!((&(&m * a) - &(a * &m)).is_negligible(1.0));
        }
    }

    #[test]
    fn fiber_triple_is_ko2() {
        let t = build_fiber_triple(&YukawaParams::<Q>::default()).unwrap();
        let r = check_axioms(&t);
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.ko_dimension, Some(2));
        let g = t.grading().unwrap();
        for k in 0..FIBER_DIM {
            let i = SmIndex::from_fiber_flat(k);
            let dotted = i.is_dotted();
            let plus = (i.s == 0 && ((i.c == 0 && dotted) || (i.c == 1 && !dotted)))
                || (i.s == 1 && ((i.c == 0 && !dotted) || (i.c == 1 && dotted)));
            assert_eq!(g[(k, k)], cplx(if plus { 1 } else { -1 }));
        }
    }

    #[test]
    fn twisted_sm_matches_the_block_pattern() {
        let (t, rho) = build_twisted_sm(&YukawaParams::<Q>::default()).unwrap();
        assert!(rho.is_inner());
        assert!(block_swap_holds(&t).unwrap());
        for k in 0..48 {
            let e = AlgebraElement::<Q>::basis(t.spec(), k);
            assert_eq!(t.rep().basis_sparse(k).to_dense(), block_pattern(e.coords()), "basis {k}");
        }
        // Group matching finds the chirality flip without being told.
        let (_, found) = twist_by_grading(&build_fiber_triple(&YukawaParams::<Q>::default()).unwrap(), None).unwrap();
        assert_eq!(found.unitary, rho.unitary);
        // π(a, a) is the untwisted action.
        let fiber = build_fiber_triple(&YukawaParams::<Q>::default()).unwrap();
        for k in 0..24 {
            let mut v = vec![Q::from(0); 48];
            v[k] = Q::from(1);
            v[24 + k] = Q::from(1);
            assert_eq!(&t.rep().apply_coords(&v), fiber.rep().basis_sparse(k));
        }
    }

    #[test]
    fn sm_report_passes_apart_from_majorana() {
        let r = verify_sm_real_part(&YukawaParams::<Q>::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.real_part_structure, "R");
        assert_eq!(r.majorana.untwisted, 0);
    }

    #[test]
    fn real_part_is_independent_of_couplings() {
        let p = YukawaParams::<Q> {
            y_nu: Complex::new(Q::new(7, 3), Q::from(-2)),
            y_e: Complex::new(Q::from(0), Q::from(5)),
            y_u: Complex::new(Q::from(-1), Q::new(1, 2)),
            y_d: Complex::new(Q::from(4), Q::from(0)),
            k_r: Q::new(-9, 4),
        };
        let a = real_part(&build_twisted_sm(&p).unwrap().0, None).unwrap();
        let b = real_part(&build_twisted_sm(&YukawaParams::<Q>::default()).unwrap().0, None).unwrap();
        assert!(a.basis.same_span(&b.basis));
    }

    #[test]
    fn majorana_spans_vanish_without_mass() {
        let p = YukawaParams::<Q> { k_r: Q::from(0), ..Default::default() };
        let s = majorana_spans(&p).unwrap();
        assert_eq!((s.untwisted, s.twisted, s.doubled_untwisted), (0, 0, 0));
    }
}
