//! Random small real triples with valid axioms by construction, and the
//! per-case checks run by fuzz campaigns.
//!
//! A base space is a sum of bimodule pieces `M_{dᵢ×dⱼ}(ℂ)` on which block `i`
//! acts on the left; pieces come in transpose pairs so that `ξ ↦ ξ*` maps the
//! base to itself. The Hilbert space is two copies of the base, graded `±1`.
//! `J` is `ξ ↦ ξ*` combined with a 2×2 matrix `V` on the copy index, chosen
//! per KO class:
//!
//! | KO | `V`                 | piece signs            |
//! |----|---------------------|------------------------|
//! | 0  | `I`                 | `+1`                   |
//! | 2  | `[[0, −1], [1, 0]]` | `+1`                   |
//! | 4  | `I`                 | `−1` on `(j, i)`, `i < j` |
//! | 6  | `σ₁`                | `+1`                   |
//!
//! `D` is a random element of the solution space of selfadjointness,
//! `DΓ = −ΓD`, `JD = DJ` and the first-order condition.

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{build_representation, AlgebraSpec, AssignmentPlan, BlockKind, PlanGroup, Representation};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_of_columns, AntilinearOp, ComplexMatrix, SparseMatrix, SparseVec};
use crate::realpart::{real_part, verify_grading_branch, verify_twisted_real_part, GradingBranch};
use crate::scalar::RealScalar;
use crate::triple::{check_axioms, FiniteRealTriple, KOSigns};
use crate::twist::{check_compatibility, twist_by_grading};

pub const MAX_BASE_DIM: usize = 4;

#[derive(Clone, Debug)]
pub struct GeneratedCase<R: RealScalar> {
    pub triple: FiniteRealTriple<R>,
    /// Unitary exchanging the two copies, when the layout was mixed.
    pub identification: Option<ComplexMatrix<R>>,
    pub ko: u8,
    pub description: String,
}

fn signs_for(ko: u8) -> Result<KOSigns> {
    Ok(match ko {
        0 => KOSigns::new(1, 1, Some(1)),
        2 => KOSigns::new(-1, 1, Some(-1)),
        4 => KOSigns::new(-1, 1, Some(1)),
        6 => KOSigns::new(1, 1, Some(-1)),
        _ => return Err(Error::NotInKoTable(format!("KO {ko} is not an even class"))),
    })
}

fn cplx<R: RealScalar>(re: i64, im: i64) -> Complex<R> {
    Complex::new(R::from_i64(re), R::from_i64(im))
}

fn copy_matrix<R: RealScalar>(ko: u8) -> ComplexMatrix<R> {
    match ko {
        2 => ComplexMatrix::from_ints(2, 2, &[(0, 0), (-1, 0), (1, 0), (0, 0)]),
        6 => ComplexMatrix::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]),
        _ => ComplexMatrix::identity(2),
    }
}

#[derive(Clone, Debug)]
struct Layout {
    kinds: Vec<BlockKind>,
    /// Ordered pieces `(i, j)`, closed under transposition.
    pieces: Vec<(usize, usize)>,
}

impl Layout {
    fn size(&self, i: usize) -> usize {
        self.kinds[i].matrix_size()
    }

    fn piece_dim(&self, p: usize) -> usize {
        let (i, j) = self.pieces[p];
        self.size(i) * self.size(j)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.pieces.len());
        let mut next = 0;
        for p in 0..self.pieces.len() {
            out.push(next);
            next += self.piece_dim(p);
        }
        out
    }

    fn base_dim(&self) -> usize {
        (0..self.pieces.len()).map(|p| self.piece_dim(p)).sum()
    }

    fn partner(&self, p: usize) -> usize {
        let (i, j) = self.pieces[p];
        self.pieces.iter().position(|&q| q == (j, i)).expect("closed under transposition")
    }

    fn describe(&self) -> String {
        let blocks: Vec<String> = self.kinds.iter().map(BlockKind::label).collect();
        let pieces: Vec<String> = self.pieces.iter().map(|(i, j)| format!("({i},{j})")).collect();
        format!("{} on pieces {}", blocks.join("+"), pieces.join(" "))
    }
}

fn random_layout(rng: &mut impl Rng, ko: u8) -> Layout {
    let choices = [BlockKind::RealField, BlockKind::ComplexField, BlockKind::Quaternions];
    loop {
        let n = rng.gen_range(1..=3);
        let kinds: Vec<BlockKind> = (0..n).map(|_| *choices.choose(rng).expect("nonempty")).collect();
        let mut pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|&(i, j)| ko != 4 || i != j).collect();
        pairs.shuffle(rng);
        let layout_of = |chosen: &[(usize, usize)]| {
            let mut pieces = Vec::new();
            for &(i, j) in chosen {
                pieces.push((i, j));
                if i != j {
                    pieces.push((j, i));
                }
            }
            pieces.sort_unstable();
            Layout { kinds: kinds.clone(), pieces }
        };
        let mut chosen = Vec::new();
        for pair in pairs {
            let mut trial = chosen.clone();
            trial.push(pair);
            if layout_of(&trial).base_dim() <= MAX_BASE_DIM && (chosen.is_empty() || rng.gen_bool(0.7)) {
                chosen = trial;
            }
        }
        let layout = layout_of(&chosen);
        let covered = (0..n).all(|b| layout.pieces.iter().any(|&(i, _)| i == b));
        if !chosen.is_empty() && covered {
            return layout;
        }
    }
}

fn slot(layout: &Layout, offsets: &[usize], half: usize, p: usize, r: usize, c: usize) -> usize {
    half * layout.base_dim() + offsets[p] + r * layout.size(layout.pieces[p].1) + c
}

fn representation<R: RealScalar>(layout: &Layout) -> Result<Representation<R>> {
    let spec = AlgebraSpec::new(layout.kinds.clone())?;
    let offsets = layout.offsets();
    let mut groups = Vec::new();
    for half in 0..2 {
        for (p, &(i, j)) in layout.pieces.iter().enumerate() {
            for c in 0..layout.size(j) {
                let slots = (0..layout.size(i)).map(|r| slot(layout, &offsets, half, p, r, c)).collect();
                groups.push(PlanGroup { block: i, conjugate: false, slots });
            }
        }
    }
    build_representation(&spec, &AssignmentPlan { hilbert_dim: 2 * layout.base_dim(), groups })
}

fn real_structure<R: RealScalar>(layout: &Layout, ko: u8) -> ComplexMatrix<R> {
    let offsets = layout.offsets();
    let n = 2 * layout.base_dim();
    let v = copy_matrix::<R>(ko);
    let mut u = ComplexMatrix::zeros(n, n);
    for (p, &(i, j)) in layout.pieces.iter().enumerate() {
        let q = layout.partner(p);
        let eta = if ko == 4 && i > j { -1 } else { 1 };
        for r in 0..layout.size(i) {
            for c in 0..layout.size(j) {
                for h in 0..2 {
                    for h2 in 0..2 {
                        let coeff = v[(h2, h)].clone();
                        if coeff.re.is_zero() && coeff.im.is_zero() {
                            continue;
                        }
                        let target = slot(layout, &offsets, h2, q, c, r);
                        let source = slot(layout, &offsets, h, p, r, c);
                        u.set(target, source, coeff * R::from_i64(eta));
                    }
                }
            }
        }
    }
    u
}

fn unit_matrix<R: RealScalar>(n: usize, k: usize) -> SparseMatrix<R> {
    let mut m = SparseMatrix::zeros(n, n);
    let (entry, imag) = (k / 2, k % 2 == 1);
    let v = if imag { cplx(0, 1) } else { cplx(1, 0) };
    m.add_at(entry / n, entry % n, &v);
    m
}

/// Basis of Dirac operators compatible with the grading, `J` (with `ε' = +1`)
/// and the first-order condition.
pub fn admissible_diracs<R: RealScalar>(
    rep: &Representation<R>,
    gamma: &ComplexMatrix<R>,
    j: &AntilinearOp<R>,
) -> Result<Vec<ComplexMatrix<R>>> {
    let n = rep.hilbert_dim();
    let g = SparseMatrix::from_dense(gamma);
    let u = SparseMatrix::from_dense(j.matrix());
    let u_adj = u.adjoint();
    let dim = rep.spec().real_dimension();
    let elems: Vec<&SparseMatrix<R>> = (0..dim).map(|k| rep.basis_sparse(k)).collect();
    let opposites: Vec<SparseMatrix<R>> = (0..dim)
        .map(|k| {
            let e = crate::algebra::AlgebraElement::basis(rep.spec(), k).star();
            &(&u * &rep.apply_sparse(&e).conj()) * &u_adj
        })
        .collect();
    let block = 2 * n * n;
    let columns: Vec<SparseVec<R>> = (0..block)
        .map(|k| {
            let e = unit_matrix::<R>(n, k);
            let mut parts = vec![(&e - &e.adjoint()), (&(&e * &g) + &(&g * &e)), (&(&u * &e.conj()) - &(&e * &u))];
            for a in &elems {
                let c = &(&e * a) - &(*a * &e);
                if c.nnz() == 0 {
                    continue;
                }
                for b in &opposites {
                    parts.push(&(&c * b) - &(b * &c));
                }
            }
            let mut out = Vec::new();
            for (idx, part) in parts.iter().enumerate() {
                out.extend(part.to_real_sparse().into_iter().map(|(i, v)| (idx * block + i, v)));
            }
            out
        })
        .collect();
    Ok(nullspace_of_columns(&columns).vectors().iter().map(|v| ComplexMatrix::from_real_coords(n, n, v)).collect())
}

/// Real orthogonal rotation by `(3/5, 4/5)` in the plane of slots `a`, `b`.
fn rotation<R: RealScalar>(n: usize, a: usize, b: usize) -> ComplexMatrix<R> {
    let mut w = ComplexMatrix::identity(n);
    let (c, s) = (R::from_ratio(3, 5), R::from_ratio(4, 5));
    let z = R::zero();
    w.set(a, a, Complex::new(c.clone(), z.clone()));
    w.set(b, b, Complex::new(c, z.clone()));
    w.set(a, b, Complex::new(-s.clone(), z.clone()));
    w.set(b, a, Complex::new(s, z));
    w
}

fn conjugate_by<R: RealScalar>(w: &ComplexMatrix<R>, m: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    &(w * m) * &w.transpose()
}

/// A random triple of the given even KO class with Hilbert dimension at
/// most `2 · MAX_BASE_DIM`.
pub fn random_triple<R: RealScalar>(rng: &mut impl Rng, ko: u8) -> Result<GeneratedCase<R>> {
    let signs = signs_for(ko)?;
    let layout = random_layout(rng, ko);
    let m = layout.base_dim();
    let n = 2 * m;
    let rep = representation::<R>(&layout)?;
    let gamma = ComplexMatrix::diagonal(&(0..n).map(|k| cplx(if k < m { 1 } else { -1 }, 0)).collect::<Vec<_>>());
    let j = AntilinearOp::new(real_structure::<R>(&layout, ko))?;
    let diracs = admissible_diracs(&rep, &gamma, &j)?;
    let mut d = ComplexMatrix::zeros(n, n);
    for basis in &diracs {
        let c = rng.gen_range(-3i64..=3);
        d = &d + &basis.scale_real(&R::from_i64(c));
    }
    let mut description = format!("KO {ko}: {}, {} Dirac parameters", layout.describe(), diracs.len());

    if !rng.gen_bool(0.5) {
        let t = FiniteRealTriple::new(rep, d, Some(gamma), Some(j), Some(signs))?;
        return Ok(GeneratedCase { triple: t, identification: None, ko, description });
    }
    let mut w = ComplexMatrix::identity(n);
    for _ in 0..rng.gen_range(1..=2) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        w = &rotation(n, a, b) * &w;
    }
    description.push_str(", mixed");
    let swap = ComplexMatrix::from_fn(n, n, |r, c| cplx(i64::from((r + m) % n == c), 0));
    let matrices: Vec<ComplexMatrix<R>> = rep.basis_matrices().iter().map(|e| conjugate_by(&w, e)).collect();
    let rep = Representation::from_matrices(rep.spec(), &matrices)?;
    let j = AntilinearOp::new(conjugate_by(&w, j.matrix()))?;
    let t = FiniteRealTriple::new(rep, conjugate_by(&w, &d), Some(conjugate_by(&w, &gamma)), Some(j), Some(signs))?;
    Ok(GeneratedCase { triple: t, identification: Some(conjugate_by(&w, &swap)), ko, description })
}

/// Deterministic case `index` of a campaign seeded by `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub index: u64,
    pub ko: u8,
    pub description: String,
    pub hilbert_dim: usize,
    pub axioms: bool,
    /// Signs inferred for the twisted triple equal those of the input.
    pub signs_preserved: bool,
    pub inner: bool,
    pub twisted_real_part: bool,
    pub grading_branch: bool,
    pub branch: Option<GradingBranch>,
    pub branch_correct: bool,
    pub a_j_dim: usize,
    pub intersection_dim: usize,
    pub doubled_real_part_dim: usize,
    /// The sign form and the operator form of compatibility agree.
    pub compatibility_equivalent: Option<bool>,
    pub real_part_flags: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.axioms
            && self.signs_preserved
            && self.twisted_real_part
            && self.grading_branch
            && self.branch_correct
            && self.real_part_flags
            && self.compatibility_equivalent != Some(false)
    }
}

fn expected_branch(ko: u8) -> GradingBranch {
    if ko == 0 || ko == 4 {
        GradingBranch::Product
    } else {
        GradingBranch::Intersection
    }
}

/// Runs the axiom, sign, compatibility and real-part checks on a case.
pub fn evaluate_case<R: RealScalar>(index: u64, case: &GeneratedCase<R>) -> CaseReport {
    let mut report = CaseReport {
        index,
        ko: case.ko,
        description: case.description.clone(),
        hilbert_dim: case.triple.hilbert_dim(),
        axioms: false,
        signs_preserved: false,
        inner: false,
        twisted_real_part: false,
        grading_branch: false,
        branch: None,
        branch_correct: false,
        a_j_dim: 0,
        intersection_dim: 0,
        doubled_real_part_dim: 0,
        compatibility_equivalent: None,
        real_part_flags: false,
        error: None,
    };
    if let Err(e) = fill_case(&mut report, case) {
        report.error = Some(e.to_string());
    }
    report
}

fn fill_case<R: RealScalar>(report: &mut CaseReport, case: &GeneratedCase<R>) -> Result<()> {
    let t = &case.triple;
    let axioms = check_axioms(t);
    report.axioms = axioms.passed() && axioms.ko_dimension == Some(case.ko);
    let (doubled, rho) = twist_by_grading(t, case.identification.as_ref())?;
    let twisted_axioms = check_axioms(&doubled);
    report.signs_preserved = twisted_axioms.signs == axioms.signs && twisted_axioms.inferred == axioms.inferred;
    report.inner = rho.is_inner();
    if rho.is_inner() {
        report.compatibility_equivalent = Some(check_compatibility(&doubled, &rho)?.equivalent);
    }
    let rp = real_part(&doubled, Some(&rho))?;
    report.real_part_flags = rp.flags.all();
    report.twisted_real_part = verify_twisted_real_part(&doubled, &rho)?.passed();
    let p2 = verify_grading_branch(t, case.identification.as_ref())?;
    report.grading_branch = p2.passed();
    report.branch = Some(p2.branch);
    report.branch_correct = p2.branch == expected_branch(case.ko) && p2.equal;
    report.a_j_dim = p2.a_j_dim;
    report.intersection_dim = p2.intersection_dim;
    report.doubled_real_part_dim = p2.doubled_real_part_dim;
    Ok(())
}

/// Generates and evaluates case `index` of the campaign `(seed, ko)`.
pub fn run_case<R: RealScalar>(seed: u64, index: u64, ko: u8) -> CaseReport {
    let mut rng = case_rng(seed, index);
    match random_triple::<R>(&mut rng, ko) {
        Ok(case) => evaluate_case(index, &case),
        Err(e) => CaseReport {
            index,
            ko,
            description: String::new(),
            hilbert_dim: 0,
            axioms: false,
            signs_preserved: false,
            inner: false,
            twisted_real_part: false,
            grading_branch: false,
            branch: None,
            branch_correct: false,
            a_j_dim: 0,
            intersection_dim: 0,
            doubled_real_part_dim: 0,
            compatibility_equivalent: None,
            real_part_flags: false,
            error: Some(e.to_string()),
        },
    }
}
