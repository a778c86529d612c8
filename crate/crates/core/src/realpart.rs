//! Real parts: `A_J = {a : aJ = Ja}`, the intersection `A ∩ A°`, and the
//! checks that relate them to the twist by grading.

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::linalg::{nullspace_of_columns, ComplexMatrix, Echelon, RealSubspaceBasis, SparseMatrix, SparseVec};
use crate::oneforms::check_twist_commutation;
use crate::scalar::RealScalar;
use crate::triple::{
    check_axioms, check_order_zero_on, check_twisted_first_order_on, ko_dimension, CheckEntry, CheckReport,
    FiniteRealTriple, Sign,
};
use crate::twist::{check_compatibility, twist_by_grading, TwistData};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RealPartFlags {
    pub is_subalgebra: bool,
    pub is_commutative: bool,
    pub is_central: bool,
    pub is_star_closed: bool,
    pub is_rho_stable: bool,
}

impl RealPartFlags {
    pub fn all(&self) -> bool {
        self.is_subalgebra && self.is_commutative && self.is_central && self.is_star_closed && self.is_rho_stable
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealPartResult<R: RealScalar> {
    /// Basis in algebra coordinates.
    pub basis: RealSubspaceBasis<R>,
    pub real_dimension: usize,
    pub flags: RealPartFlags,
    /// Isomorphism type as `R^p + C^q`, or `"unknown"`.
    pub structure: String,
}

/// Solves `π(x) U = U conj(π(x))` over the algebra coordinates.
fn commutant_of_j<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<RealSubspaceBasis<R>> {
    let j = t.real_structure().ok_or(Error::MissingRealStructure)?;
    let u = SparseMatrix::from_dense(j.matrix());
    let columns: Vec<SparseVec<R>> = (0..t.spec().real_dimension())
        .map(|k| {
            let e = t.rep().basis_sparse(k);
            (&(e * &u) - &(&u * &e.conj())).to_real_sparse()
        })
        .collect();
    Ok(nullspace_of_columns(&columns))
}

fn element<R: RealScalar>(t: &FiniteRealTriple<R>, v: &[R]) -> AlgebraElement<R> {
    AlgebraElement::new(t.spec(), v.to_vec()).expect("coordinates sized to the algebra")
}

fn commute<R: RealScalar>(a: &SparseMatrix<R>, b: &SparseMatrix<R>, scale: f64) -> bool {
    (&(a * b) - &(b * a)).is_negligible(scale * scale)
}

/// `A_J` with its structural flags. If `rho` has an implementing unitary,
/// it must be compatible with the real structure.
pub fn real_part<R: RealScalar>(t: &FiniteRealTriple<R>, rho: Option<&TwistData<R>>) -> Result<RealPartResult<R>> {
    if let Some(rho) = rho {
        rho.check_spec(t.spec())?;
        if rho.is_inner() {
            let c = check_compatibility(t, rho)?;
            if !c.compatible() {
                return Err(Error::Incompatible(format!("{c:?}")));
            }
        }
    }
    let basis = commutant_of_j(t)?;
    let scale = t.scale();
    let elems: Vec<AlgebraElement<R>> = basis.vectors().iter().map(|v| element(t, v)).collect();
    let images: Vec<SparseMatrix<R>> = elems.iter().map(|a| t.rep().apply_sparse(a)).collect();
    let algebra_basis: Vec<&SparseMatrix<R>> =
        (0..t.spec().real_dimension()).map(|k| t.rep().basis_sparse(k)).collect();

    let mut flags = RealPartFlags { is_rho_stable: true, ..Default::default() };
    flags.is_subalgebra =
        elems.iter().all(|a| elems.iter().all(|b| basis.contains(a.multiply(b).expect("same spec").coords())));
    flags.is_commutative = images.iter().all(|a| images.iter().all(|b| commute(a, b, scale)));
    flags.is_central = images.iter().all(|a| algebra_basis.iter().all(|b| commute(a, b, scale)));
    flags.is_star_closed = elems.iter().all(|a| basis.contains(a.star().coords()));
    if let Some(rho) = rho {
        flags.is_rho_stable = elems.iter().all(|a| basis.contains(&rho.apply_coords(t.spec(), a.coords())));
    }
    let structure =
        if flags.is_subalgebra && flags.is_commutative { structure_label(&elems) } else { "unknown".to_string() };
    Ok(RealPartResult { real_dimension: basis.dim(), basis, flags, structure })
}

/// Coordinate pairs `(a, b)`.
pub type CoordPairs<R> = Vec<(Vec<R>, Vec<R>)>;

/// `A ∩ A°` in algebra coordinates, together with pairs `(a, b)` spanning it
/// such that `a = b° = J π(b*) J⁻¹`.
pub fn intersect_with_opposite_pairs<R: RealScalar>(
    t: &FiniteRealTriple<R>,
) -> Result<(RealSubspaceBasis<R>, CoordPairs<R>)> {
    if t.real_structure().is_none() {
        return Err(Error::MissingRealStructure);
    }
    if !t.rep().is_injective() {
        return Err(Error::NotInjective);
    }
    let d = t.spec().real_dimension();
    let mut columns: Vec<SparseVec<R>> = (0..d).map(|k| t.rep().basis_sparse(k).to_real_sparse()).collect();
    for k in 0..d {
        let mut e = vec![R::zero(); d];
        e[k] = R::one();
        let opp = t.opposite_coords(&e)?;
        columns.push(opp.to_real_sparse().into_iter().map(|(i, v)| (i, -v)).collect());
    }
    let null = nullspace_of_columns(&columns);
    // Both π and b ↦ b° are injective, so the a-parts of the null vectors are
    // independent and determine the b-parts.
    let pairs: Vec<(Vec<R>, Vec<R>)> = null.vectors().iter().map(|v| (v[..d].to_vec(), v[d..].to_vec())).collect();
    let basis = RealSubspaceBasis::from_spanning(d, pairs.iter().map(|(x, _)| x.clone()).collect())?;
    Ok((basis, pairs))
}

/// `A ∩ A°` in algebra coordinates.
pub fn intersect_with_opposite<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<RealSubspaceBasis<R>> {
    intersect_with_opposite_pairs(t).map(|(b, _)| b)
}

/// Checks the three statements about `A_J` for a real twisted triple.
pub fn verify_twisted_real_part<R: RealScalar>(t: &FiniteRealTriple<R>, rho: &TwistData<R>) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    if rho.is_inner() {
        let c = check_compatibility(t, rho)?;
        report.push(CheckEntry::new(
            "twist compatible with J",
            c.compatible(),
            0.0,
            format!("eps''' = {}", c.eps_triple.map_or("none".into(), |s| s.to_string())),
        ));
    }
    let rp = real_part(t, None)?;
    let rho_stable = rp.basis.vectors().iter().all(|a| rp.basis.contains(&rho.apply_coords(t.spec(), a)));
    let flags = RealPartFlags { is_rho_stable: rho_stable, ..rp.flags };
    report.push(CheckEntry::new(
        "A_J is an involutive commutative central subalgebra",
        flags.is_subalgebra && flags.is_commutative && flags.is_central && flags.is_star_closed,
        0.0,
        format!("dim {}, {}", rp.real_dimension, rp.structure),
    ));
    report.push(CheckEntry::new("A_J is rho-stable", flags.is_rho_stable, 0.0, ""));

    let scale = t.scale();
    let mut eq8 = CheckEntry::new("a° = a* on A_J", true, 0.0, "");
    for (i, a) in rp.basis.vectors().iter().enumerate() {
        let a_star = element(t, a).star();
        let diff = &t.opposite_coords(a)? - &t.rep().apply_sparse(&a_star);
        eq8.residual = eq8.residual.max(diff.max_abs());
        if eq8.passed && !diff.is_negligible(scale * scale) {
            eq8.passed = false;
            eq8.detail = format!("A_J basis element {i}");
        }
    }
    report.push(eq8);

    let axioms = check_axioms(t);
    report.push(CheckEntry::new(
        "sub-triple axioms (D, grading, J)",
        axioms.passed(),
        0.0,
        axioms.checks.failures().map(|e| e.name.clone()).collect::<Vec<_>>().join(", "),
    ));
    let sub = rp.basis.vectors();
    let mut oz = check_order_zero_on(t, sub, sub)?;
    oz.name = "sub-triple order zero".into();
    report.push(oz);
    let mut fo = check_twisted_first_order_on(t, rho, sub, sub)?;
    fo.name = "sub-triple twisted first order".into();
    report.push(fo);
    report.push(check_twist_commutation(t, rho, &rp)?);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingBranch {
    /// `ε'' = +1`: pairs of elements of `A_J`.
    Product,
    /// `ε'' = −1`: pairs `(a, J a J⁻¹)` with `a ∈ A ∩ A°`.
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradingBranchReport {
    pub ko_dimension: u8,
    pub branch: GradingBranch,
    pub a_j_dim: usize,
    pub intersection_dim: usize,
    pub doubled_real_part_dim: usize,
    pub expected_dim: usize,
    /// The doubled real part equals the predicted subspace.
    pub equal: bool,
    pub a_j_in_intersection: bool,
    /// Compatibility of the flip with J, when the flip is inner.
    pub compatible: Option<bool>,
    /// The flip fixes every element of the doubled real part.
    pub rho_trivial_on_real_part: bool,
}

impl GradingBranchReport {
    pub fn passed(&self) -> bool {
        self.equal && self.a_j_in_intersection
    }
}

/// Computes the real part of the twist by grading and compares it with
/// the prediction for the KO class of `t`.
pub fn verify_grading_branch<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    identification: Option<&ComplexMatrix<R>>,
) -> Result<GradingBranchReport> {
    if t.grading().is_none() {
        return Err(Error::MissingGrading);
    }
    if t.real_structure().is_none() {
        return Err(Error::MissingRealStructure);
    }
    let axioms = check_axioms(t);
    if !axioms.passed() {
        let failed: Vec<_> = axioms.checks.failures().map(|e| e.name.clone()).collect();
        return Err(Error::Invalid(format!("input triple fails its axioms: {}", failed.join(", "))));
    }
    let signs = axioms.signs.expect("J present");
    let ko = ko_dimension(&signs)?;
    let (doubled, rho) = twist_by_grading(t, identification)?;
    let compatible = if rho.is_inner() { Some(check_compatibility(&doubled, &rho)?.compatible()) } else { None };

    let d = t.spec().real_dimension();
    let a_j = commutant_of_j(t)?;
    let (inter, inter_pairs) = intersect_with_opposite_pairs(t)?;
    let doubled_rp = commutant_of_j(&doubled)?;

    let (branch, expected) = match signs.eps_dprime.expect("graded") {
        Sign::Plus => {
            let mut vs = Vec::new();
            for v in a_j.vectors() {
                let mut first = v.clone();
                first.extend(vec![R::zero(); d]);
                let mut second = vec![R::zero(); d];
                second.extend(v.iter().cloned());
                vs.push(first);
                vs.push(second);
            }
            (GradingBranch::Product, RealSubspaceBasis::from_spanning(2 * d, vs)?)
        }
        Sign::Minus => {
            // a = b° gives J a J⁻¹ = J² π(b*) J⁻² = π(b*).
            let vs = inter_pairs
                .iter()
                .map(|(x, y)| {
                    let mut v = x.clone();
                    v.extend(element(t, y).star().into_coords());
                    v
                })
                .collect();
            (GradingBranch::Intersection, RealSubspaceBasis::from_spanning(2 * d, vs)?)
        }
    };

    let rho_trivial =
        doubled_rp.vectors().iter().all(|v| &rho.apply_coords(doubled.spec(), v) == v || v.iter().all(|x| x.is_zero()));
    Ok(GradingBranchReport {
        ko_dimension: ko,
        branch,
        a_j_dim: a_j.dim(),
        intersection_dim: inter.dim(),
        doubled_real_part_dim: doubled_rp.dim(),
        expected_dim: expected.dim(),
        equal: doubled_rp.same_span(&expected),
        a_j_in_intersection: a_j.is_subspace_of(&inter),
        compatible,
        rho_trivial_on_real_part: rho_trivial,
    })
}

/// Isomorphism type of a commutative semisimple real algebra with the given
/// basis, read off the minimal polynomial of a generic element: it has `p`
/// real roots and `q` conjugate pairs for `R^p + C^q`.
fn structure_label<R: RealScalar>(basis: &[AlgebraElement<R>]) -> String {
    let dim = basis.len();
    if dim == 0 {
        return "0".into();
    }
    let mut seed: u64 = 0x9e37_79b9;
    for _ in 0..8 {
        let mut x = AlgebraElement::zero(basis[0].spec());
        for b in basis {
            seed = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            let c = ((seed >> 33) % 19) as i64 - 9;
            x = x.add(&b.scale(&R::from_i64(c))).expect("same spec");
        }
        if let Some(m) = power_relation(&x, dim) {
            let p = sturm_real_roots(&m);
            if p <= dim && (dim - p).is_multiple_of(2) {
                return format_structure(p, (dim - p) / 2);
            }
        }
    }
    "unknown".into()
}

/// If `x, x², …, x^dim` are independent, the polynomial `m` of degree `dim`
/// with `x·m(x) = 0`, coefficients from the constant term up.
fn power_relation<R: RealScalar>(x: &AlgebraElement<R>, dim: usize) -> Option<Vec<R>> {
    let mut powers = vec![x.clone()];
    let mut ech = Echelon::new(x.coords().len());
    if !ech.insert(crate::linalg::to_sparse(x.coords())) {
        return None;
    }
    for _ in 1..dim {
        let next = powers.last().expect("nonempty").multiply(x).ok()?;
        if !ech.insert(crate::linalg::to_sparse(next.coords())) {
            return None;
        }
        powers.push(next);
    }
    powers.push(powers.last().expect("nonempty").multiply(x).ok()?);
    let columns: Vec<SparseVec<R>> = powers.iter().map(|p| crate::linalg::to_sparse(p.coords())).collect();
    let null = nullspace_of_columns(&columns);
    (null.dim() == 1).then(|| null.vectors()[0].clone())
}

fn trim<R: RealScalar>(mut p: Vec<R>) -> Vec<R> {
    let scale = p.iter().map(|c| c.magnitude()).fold(1.0, f64::max);
    while p.last().is_some_and(|c| c.is_negligible(scale)) {
        p.pop();
    }
    p
}

fn poly_rem<R: RealScalar>(a: &[R], b: &[R]) -> Vec<R> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty").clone() / lead.clone();
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= f.clone() * c.clone();
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Number of distinct real roots, by Sturm's theorem.
fn sturm_real_roots<R: RealScalar>(p: &[R]) -> usize {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return 0;
    }
    let deriv: Vec<R> = p.iter().enumerate().skip(1).map(|(i, c)| c.clone() * R::from_i64(i as i64)).collect();
    let mut seq = vec![p, trim(deriv)];
    while seq.last().is_some_and(|q| q.len() > 1) {
        let n = seq.len();
        let r: Vec<R> = poly_rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    let changes = |signs: Vec<i8>| {
        let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let at_pos = seq.iter().map(|q| q.last().expect("nonempty").sign(1.0)).collect();
    let at_neg = seq
        .iter()
        .map(|q| {
            let s = q.last().expect("nonempty").sign(1.0);
            if (q.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg).saturating_sub(changes(at_pos))
}

fn format_structure(p: usize, q: usize) -> String {
    let part = |n: usize, f: &str| match n {
        0 => None,
        1 => Some(f.to_string()),
        _ => Some(format!("{f}^{n}")),
    };
    [part(p, "R"), part(q, "C")].into_iter().flatten().collect::<Vec<_>>().join(" + ")
}
