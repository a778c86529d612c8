//! Finite real spectral triples and their axiom checkers.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AlgebraElement, AlgebraSpec, Representation};
use crate::error::{Error, Result};
use crate::linalg::{AntilinearOp, ComplexMatrix, SparseMatrix};
use crate::scalar::RealScalar;
use crate::twist::TwistData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

/// `J² = ε`, `JD = ε'DJ`, `JΓ = ε''ΓJ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KOSigns {
    pub eps: Sign,
    pub eps_prime: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_dprime: Option<Sign>,
}

impl KOSigns {
    pub fn new(eps: i64, eps_prime: i64, eps_dprime: Option<i64>) -> Self {
        let s = |v| Sign::from_value(v).expect("sign must be ±1");
        Self { eps: s(eps), eps_prime: s(eps_prime), eps_dprime: eps_dprime.map(s) }
    }
}

impl fmt::Display for KOSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eps_dprime {
            Some(e) => write!(f, "({}, {}, {})", self.eps, self.eps_prime, e),
            None => write!(f, "({}, {})", self.eps, self.eps_prime),
        }
    }
}

/// Even KO-dimension of a sign triple:
/// 0 ↔ (+,+,+), 2 ↔ (−,+,−), 4 ↔ (−,+,+), 6 ↔ (+,+,−).
pub fn ko_dimension(signs: &KOSigns) -> Result<u8> {
    use Sign::{Minus, Plus};
    match (signs.eps, signs.eps_prime, signs.eps_dprime) {
        (Plus, Plus, Some(Plus)) => Ok(0),
        (Minus, Plus, Some(Minus)) => Ok(2),
        (Minus, Plus, Some(Plus)) => Ok(4),
        (Plus, Plus, Some(Minus)) => Ok(6),
        _ => Err(Error::NotInKoTable(signs.to_string())),
    }
}

/// Algebra, representation, Dirac operator, and optional grading and real
/// structure. Construction only checks shapes; the axioms are checked by
/// [`check_axioms`].
#[derive(Clone, Debug)]
pub struct FiniteRealTriple<R: RealScalar> {
    rep: Representation<R>,
    d: ComplexMatrix<R>,
    gamma: Option<ComplexMatrix<R>>,
    j: Option<AntilinearOp<R>>,
    signs: Option<KOSigns>,
    sparse: SparseOps<R>,
}

#[derive(Clone, Debug)]
struct SparseOps<R: RealScalar> {
    d: SparseMatrix<R>,
    gamma: Option<SparseMatrix<R>>,
    u: Option<SparseMatrix<R>>,
    u_adj: Option<SparseMatrix<R>>,
}

impl<R: RealScalar> FiniteRealTriple<R> {
    pub fn new(
        rep: Representation<R>,
        d: ComplexMatrix<R>,
        gamma: Option<ComplexMatrix<R>>,
        j: Option<AntilinearOp<R>>,
        signs: Option<KOSigns>,
    ) -> Result<Self> {
        let n = rep.hilbert_dim();
        let shape_ok = |m: &ComplexMatrix<R>| m.rows() == n && m.cols() == n;
        if !shape_ok(&d) {
            return Err(Error::SpecMismatch(format!(
                "D is {}x{}, Hilbert space has dimension {n}",
                d.rows(),
                d.cols()
            )));
        }
        if gamma.as_ref().is_some_and(|g| !shape_ok(g)) {
            return Err(Error::SpecMismatch(format!("grading does not act on C^{n}")));
        }
        if j.as_ref().is_some_and(|j| j.dim() != n) {
            return Err(Error::SpecMismatch(format!("real structure does not act on C^{n}")));
        }
        if signs.is_some() && j.is_none() {
            return Err(Error::Invalid("KO signs given without a real structure".into()));
        }
        if let Some(s) = &signs {
            if s.eps_dprime.is_some() != gamma.is_some() {
                return Err(Error::Invalid("eps_dprime must be given exactly when a grading is present".into()));
            }
        }
        let sparse = SparseOps {
            d: SparseMatrix::from_dense(&d),
            gamma: gamma.as_ref().map(SparseMatrix::from_dense),
            u: j.as_ref().map(|j| SparseMatrix::from_dense(j.matrix())),
            u_adj: j.as_ref().map(|j| SparseMatrix::from_dense(&j.matrix().adjoint())),
        };
        Ok(Self { rep, d, gamma, j, signs, sparse })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.rep.spec()
    }

    pub fn rep(&self) -> &Representation<R> {
        &self.rep
    }

    pub fn hilbert_dim(&self) -> usize {
        self.rep.hilbert_dim()
    }

    pub fn dirac(&self) -> &ComplexMatrix<R> {
        &self.d
    }

    pub fn grading(&self) -> Option<&ComplexMatrix<R>> {
        self.gamma.as_ref()
    }

    pub fn real_structure(&self) -> Option<&AntilinearOp<R>> {
        self.j.as_ref()
    }

    pub fn signs(&self) -> Option<&KOSigns> {
        self.signs.as_ref()
    }

    pub fn with_signs(self, signs: Option<KOSigns>) -> Result<Self> {
        Self::new(self.rep, self.d, self.gamma, self.j, signs)
    }

    pub fn with_dirac(self, d: ComplexMatrix<R>) -> Result<Self> {
        Self::new(self.rep, d, self.gamma, self.j, self.signs)
    }

    pub fn dirac_sparse(&self) -> &SparseMatrix<R> {
        &self.sparse.d
    }

    pub fn grading_sparse(&self) -> Option<&SparseMatrix<R>> {
        self.sparse.gamma.as_ref()
    }

    /// `J A J⁻¹` on a sparse operator.
    pub fn j_conjugate_sparse(&self, a: &SparseMatrix<R>) -> Result<SparseMatrix<R>> {
        let (u, u_adj) = match (&self.sparse.u, &self.sparse.u_adj) {
            (Some(u), Some(ua)) => (u, ua),
            _ => return Err(Error::MissingRealStructure),
        };
        Ok(&(u * &a.conj()) * u_adj)
    }

    /// `b° = J π(b*) J⁻¹` for coordinates of `b`.
    pub fn opposite_coords(&self, b: &[R]) -> Result<SparseMatrix<R>> {
        let elem = AlgebraElement::new(self.spec(), b.to_vec())?;
        self.j_conjugate_sparse(&self.rep.apply_sparse(&elem.star()))
    }

    /// Largest entry of D, Γ, U and the basis images; float comparisons scale by it.
    pub fn scale(&self) -> f64 {
        let mut s = self.sparse.d.max_abs().max(1.0);
        for k in 0..self.spec().real_dimension() {
            s = s.max(self.rep.basis_sparse(k).max_abs());
        }
        s
    }
}

/// `J π(a*) J⁻¹`.
pub fn opposite_action<R: RealScalar>(t: &FiniteRealTriple<R>, a: &AlgebraElement<R>) -> Result<ComplexMatrix<R>> {
    if a.spec() != t.spec() {
        return Err(Error::SpecMismatch(format!("{} vs {}", a.spec().label(), t.spec().label())));
    }
    Ok(t.opposite_coords(a.coords())?.to_dense())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    /// Largest residual entry; always 0 for passing exact checks.
    pub residual: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, passed: bool, residual: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, residual, detail: detail.into() }
    }
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", if self.passed { "pass" } else { "FAIL" }, self.name)?;
        if self.residual != 0.0 {
            write!(f, " (residual {:.3e})", self.residual)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: CheckReport,
    /// Declared signs if given, otherwise inferred ones.
    pub signs: Option<KOSigns>,
    /// Whether `signs` came from inference.
    pub inferred: bool,
    /// Relations satisfied by both signs (the operator involved vanishes).
    pub ambiguous: Vec<String>,
    pub ko_dimension: Option<u8>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

fn zero_check<R: RealScalar>(name: &str, m: &SparseMatrix<R>, scale: f64) -> CheckEntry {
    CheckEntry::new(name, m.is_negligible(scale), m.max_abs(), "")
}

/// Which of `lhs = +rhs`, `lhs = −rhs` hold, with the residual of each.
fn sign_relation<R: RealScalar>(lhs: &SparseMatrix<R>, rhs: &SparseMatrix<R>, scale: f64) -> [(Sign, bool, f64); 2] {
    let plus = lhs - rhs;
    let minus = lhs + rhs;
    [
        (Sign::Plus, plus.is_negligible(scale), plus.max_abs()),
        (Sign::Minus, minus.is_negligible(scale), minus.max_abs()),
    ]
}

/// Checks every invariant of the triple and determines the KO signs.
///
/// A relation satisfied by both signs (which happens when, say, `D = 0`)
/// takes the declared sign, or `+1` if none was declared, and is listed as
/// ambiguous.
pub fn check_axioms<R: RealScalar>(t: &FiniteRealTriple<R>) -> AxiomReport {
    let scale = t.scale();
    let n = t.hilbert_dim();
    let d = t.dirac_sparse();
    let id = SparseMatrix::identity(n);
    let mut checks = CheckReport::default();
    checks.push(zero_check("D selfadjoint", &(d - &d.adjoint()), scale));

    let basis: Vec<&SparseMatrix<R>> = (0..t.spec().real_dimension()).map(|k| t.rep.basis_sparse(k)).collect();

    if let Some(g) = t.grading_sparse() {
        checks.push(zero_check("grading selfadjoint", &(g - &g.adjoint()), scale));
        checks.push(zero_check("grading squares to I", &(&(g * g) - &id), scale));
        checks.push(zero_check("grading anticommutes with D", &(&(g * d) + &(d * g)), scale));
        let mut entry = CheckEntry::new("grading commutes with the algebra", true, 0.0, "");
        for (k, a) in basis.iter().enumerate() {
            let c = &(g * *a) - &(*a * g);
            entry.residual = entry.residual.max(c.max_abs());
            if entry.passed && !c.is_negligible(scale) {
                entry.passed = false;
                entry.detail = format!("basis element {k}");
            }
        }
        checks.push(entry);
    }

    let mut report = AxiomReport { checks, signs: None, inferred: false, ambiguous: Vec::new(), ko_dimension: None };
    let Some(j) = t.real_structure() else {
        return report;
    };
    let u = SparseMatrix::from_dense(j.matrix());
    checks_push(&mut report, zero_check("real structure unitary", &(&(&u.adjoint() * &u) - &id), scale));

    let declared = t.signs().copied();
    let j2 = SparseMatrix::from_dense(&j.square());
    let jdj = t.j_conjugate_sparse(d).expect("J present");
    let mut relations = vec![
        ("J^2 = eps", sign_relation(&j2, &id, scale), declared.map(|s| s.eps)),
        ("JD = eps' DJ", sign_relation(&jdj, d, scale), declared.map(|s| s.eps_prime)),
    ];
    if let Some(g) = t.grading_sparse() {
        let jgj = t.j_conjugate_sparse(g).expect("J present");
        relations.push(("J Gamma = eps'' Gamma J", sign_relation(&jgj, g, scale), declared.and_then(|s| s.eps_dprime)));
    }

    let mut chosen = Vec::new();
    for (name, options, decl) in relations {
        let holding: Vec<Sign> = options.iter().filter(|o| o.1).map(|o| o.0).collect();
        let (sign, passed, residual) = match decl {
            Some(s) => {
                let o = options.iter().find(|o| o.0 == s).expect("both signs listed");
                (s, o.1, o.2)
            }
            None => match holding.first() {
                Some(&s) => (s, true, 0.0),
                None => {
                    let best = if options[0].2 <= options[1].2 { options[0] } else { options[1] };
                    (best.0, false, best.2)
                }
            },
        };
        if holding.len() == 2 {
            report.ambiguous.push(name.to_string());
        }
        let detail = if passed { format!("sign {sign}") } else { format!("fails for sign {sign}") };
        checks_push(&mut report, CheckEntry::new(name, passed, residual, detail));
        chosen.push(sign);
    }
    let signs = KOSigns { eps: chosen[0], eps_prime: chosen[1], eps_dprime: chosen.get(2).copied() };
    report.inferred = declared.is_none();
    report.signs = Some(signs);
    if signs.eps_dprime.is_some() {
        match ko_dimension(&signs) {
            Ok(k) => {
                report.ko_dimension = Some(k);
                checks_push(&mut report, CheckEntry::new("KO-dimension", true, 0.0, format!("{k} from signs {signs}")));
            }
            Err(e) => checks_push(&mut report, CheckEntry::new("KO-dimension", false, 0.0, e.to_string())),
        }
    }
    report
}

fn checks_push(report: &mut AxiomReport, entry: CheckEntry) {
    report.checks.push(entry);
}

fn unit_vectors<R: RealScalar>(d: usize) -> Vec<Vec<R>> {
    (0..d)
        .map(|k| {
            let mut v = vec![R::zero(); d];
            v[k] = R::one();
            v
        })
        .collect()
}

/// `[a, b°] = 0` on every basis pair.
pub fn check_order_zero<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<CheckEntry> {
    let basis = unit_vectors::<R>(t.spec().real_dimension());
    check_order_zero_on(t, &basis, &basis)
}

/// `[a, b°] = 0` for every `a` in `left` and `b` in `right` (coordinate vectors).
pub fn check_order_zero_on<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    left: &[Vec<R>],
    right: &[Vec<R>],
) -> Result<CheckEntry> {
    let scale = t.scale();
    let pa: Vec<SparseMatrix<R>> = left.iter().map(|a| t.rep.apply_coords(a)).collect();
    let pb: Vec<SparseMatrix<R>> = right.iter().map(|b| t.opposite_coords(b)).collect::<Result<_>>()?;
    let mut entry = CheckEntry::new("order zero", true, 0.0, "");
    for (i, a) in pa.iter().enumerate() {
        for (j, b) in pb.iter().enumerate() {
            let c = &(a * b) - &(b * a);
            record(&mut entry, &c, scale, || format!("pair ({i}, {j})"));
        }
    }
    Ok(entry)
}

fn record<R: RealScalar>(entry: &mut CheckEntry, m: &SparseMatrix<R>, scale: f64, what: impl FnOnce() -> String) {
    entry.residual = entry.residual.max(m.max_abs());
    if entry.passed && !m.is_negligible(scale * scale * scale) {
        entry.passed = false;
        entry.detail = format!("first violation at {}", what());
    }
}

/// `[[D, a], b°] = 0` on every basis pair.
pub fn check_first_order<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<CheckEntry> {
    let rho = TwistData::identity(t.spec().len());
    let mut entry = check_twisted_first_order(t, &rho)?;
    entry.name = "first order".into();
    Ok(entry)
}

/// `[[D, a]_ρ, b°]_{ρ°} = 0` on every basis pair.
pub fn check_twisted_first_order<R: RealScalar>(t: &FiniteRealTriple<R>, rho: &TwistData<R>) -> Result<CheckEntry> {
    let basis = unit_vectors::<R>(t.spec().real_dimension());
    check_twisted_first_order_on(t, rho, &basis, &basis)
}

/// Twisted first-order condition for `a` in `left`, `b` in `right`:
/// `T b° − ρ°(b°) T = 0` with `T = D π(a) − π(ρ(a)) D` and
/// `ρ°(b°) = J π((ρ⁻¹(b))*) J⁻¹`.
pub fn check_twisted_first_order_on<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    rho: &TwistData<R>,
    left: &[Vec<R>],
    right: &[Vec<R>],
) -> Result<CheckEntry> {
    rho.check_spec(t.spec())?;
    let scale = t.scale();
    let d = t.dirac_sparse();
    let spec = t.spec();
    let ts: Vec<SparseMatrix<R>> = left
        .iter()
        .map(|a| {
            let pa = t.rep.apply_coords(a);
            let pra = t.rep.apply_coords(&rho.apply_coords(spec, a));
            &(d * &pa) - &(&pra * d)
        })
        .collect();
    let mut pairs = Vec::with_capacity(right.len());
    for b in right {
        pairs.push((t.opposite_coords(b)?, t.opposite_coords(&rho.apply_inverse_coords(spec, b))?));
    }
    let mut entry = CheckEntry::new("twisted first order", true, 0.0, "");
    for (i, tm) in ts.iter().enumerate() {
        for (j, (bo, rbo)) in pairs.iter().enumerate() {
            let c = &(tm * bo) - &(rbo * tm);
            record(&mut entry, &c, scale, || format!("pair ({i}, {j})"));
        }
    }
    Ok(entry)
}

/// Largest `‖π(a) − π(ρ(a))‖` over basis elements: how far the twist is
/// from the identity on this representation.
pub fn twist_displacement<R: RealScalar>(t: &FiniteRealTriple<R>, rho: &TwistData<R>) -> Result<CheckEntry> {
    rho.check_spec(t.spec())?;
    let spec = t.spec();
    let mut worst: f64 = 0.0;
    for a in unit_vectors::<R>(spec.real_dimension()) {
        let diff = &t.rep.apply_coords(&a) - &t.rep.apply_coords(&rho.apply_coords(spec, &a));
        worst = worst.max(diff.max_abs());
    }
    Ok(CheckEntry::new("twist displacement max |a - rho(a)|", true, worst, "diagnostic"))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{build_representation, AssignmentPlan, BlockKind, PlanGroup};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Q = Rational;
    type M = ComplexMatrix<Q>;

    fn sigma1() -> M {
        M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)])
    }

    fn sigma3() -> M {
        M::from_ints(2, 2, &[(1, 0), (0, 0), (0, 0), (-1, 0)])
    }

    /// ℂ on ℂ² as z ↦ diag(z, z), or diag(z, z̄) when `conjugate_second`.
    pub(crate) fn complex_on_c2(conjugate_second: bool) -> Representation<Q> {
        let spec = AlgebraSpec::new(vec![BlockKind::ComplexField]).unwrap();
        let plan = AssignmentPlan {
            hilbert_dim: 2,
            groups: vec![
                PlanGroup { block: 0, conjugate: false, slots: vec![0] },
                PlanGroup { block: 0, conjugate: conjugate_second, slots: vec![1] },
            ],
        };
        build_representation(&spec, &plan).unwrap()
    }

    /// ℂ·I on ℂ², D = σ₁, Γ = σ₃, J = conj.
    pub(crate) fn ko0_toy() -> FiniteRealTriple<Q> {
        let rep = complex_on_c2(false);
        FiniteRealTriple::new(rep, sigma1(), Some(sigma3()), Some(AntilinearOp::conjugation(2)), None).unwrap()
    }

    /// ℂ·I on ℂ², D = t·σ₁, Γ = σ₃, J = σ₁∘conj.
    pub(crate) fn ko6_toy(t: i64) -> FiniteRealTriple<Q> {
        let rep = complex_on_c2(false);
        let d = sigma1().scale_real(&Q::from(t));
        FiniteRealTriple::new(rep, d, Some(sigma3()), Some(AntilinearOp::new(sigma1()).unwrap()), None).unwrap()
    }

    #[test]
    fn ko_table() {
        assert_eq!(ko_dimension(&KOSigns::new(1, 1, Some(-1))).unwrap(), 6);
        assert_eq!(ko_dimension(&KOSigns::new(-1, 1, Some(-1))).unwrap(), 2);
        assert_eq!(ko_dimension(&KOSigns::new(1, 1, Some(1))).unwrap(), 0);
        assert_eq!(ko_dimension(&KOSigns::new(-1, 1, Some(1))).unwrap(), 4);
        assert!(ko_dimension(&KOSigns::new(1, -1, Some(1))).is_err());
        assert!(ko_dimension(&KOSigns::new(1, 1, None)).is_err());
    }

    #[test]
    fn signs_serialize_as_integers() {
        let s = KOSigns::new(-1, 1, Some(-1));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"eps":-1,"eps_prime":1,"eps_dprime":-1}"#);
        assert_eq!(serde_json::from_str::<KOSigns>(&json).unwrap(), s);
        assert!(serde_json::from_str::<KOSigns>(r#"{"eps":2,"eps_prime":1}"#).is_err());
    }

    #[test]
    fn ko0_toy_passes_with_all_plus() {
        let t = ko0_toy();
        let r = check_axioms(&t);
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.signs, Some(KOSigns::new(1, 1, Some(1))));
        assert!(r.ambiguous.is_empty());
        assert_eq!(r.ko_dimension, Some(0));
        assert!(check_order_zero(&t).unwrap().passed);
        assert!(check_first_order(&t).unwrap().passed);
    }

    #[test]
    fn conjugate_action_fails_first_order() {
        // [σ₁, diag(z, z̄)] is off-diagonal and does not commute with diag(b, b̄).
        let t = FiniteRealTriple::new(
            complex_on_c2(true),
            sigma1(),
            Some(sigma3()),
            Some(AntilinearOp::conjugation(2)),
            None,
        )
        .unwrap();
        assert!(check_axioms(&t).passed());
        assert!(check_order_zero(&t).unwrap().passed);
        assert!(!check_first_order(&t).unwrap().passed);
    }

    #[test]
    fn ko6_toy_classifies() {
        let r = check_axioms(&ko6_toy(3));
        assert!(r.passed(), "{}", r.checks);
        assert_eq!(r.ko_dimension, Some(6));
    }

    #[test]
    fn non_selfadjoint_dirac_is_named() {
        let t = ko0_toy();
        let bad = M::from_ints(2, 2, &[(0, 0), (1, 0), (2, 0), (0, 0)]);
        let t = t.with_dirac(bad).unwrap();
        let r = check_axioms(&t);
        let failed: Vec<_> = r.checks.failures().map(|e| e.name.as_str()).collect();
        assert!(failed.contains(&"D selfadjoint"), "{failed:?}");
    }

    #[test]
    fn zero_dirac_makes_eps_prime_ambiguous() {
        let t = ko0_toy().with_dirac(M::zeros(2, 2)).unwrap();
        let r = check_axioms(&t);
        assert!(r.passed());
        assert_eq!(r.ambiguous, vec!["JD = eps' DJ".to_string()]);
        assert_eq!(r.signs.unwrap().eps_prime, Sign::Plus);
    }

    #[test]
    fn declared_wrong_sign_fails() {
        let t = ko0_toy().with_signs(Some(KOSigns::new(-1, 1, Some(1)))).unwrap();
        let r = check_axioms(&t);
        assert!(!r.passed());
        assert_eq!(r.checks.failures().next().unwrap().name, "J^2 = eps");
    }

    #[test]
    fn inferred_signs_are_unique() {
        for t in [ko0_toy(), ko6_toy(2)] {
            let signs = check_axioms(&t).signs.unwrap();
            let flips = [
                KOSigns { eps: signs.eps.flip(), ..signs },
                KOSigns { eps_prime: signs.eps_prime.flip(), ..signs },
                KOSigns { eps_dprime: signs.eps_dprime.map(Sign::flip), ..signs },
            ];
            for f in flips {
                assert!(!check_axioms(&t.clone().with_signs(Some(f)).unwrap()).passed());
            }
        }
    }

    #[test]
    fn corrupted_real_structure_breaks_order_zero() {
        // With J = conj on ℂ², b° = conj(π(b*)) is again a quaternion, and ℍ
        // does not commute with itself.
        let spec = AlgebraSpec::new(vec![BlockKind::Quaternions]).unwrap();
        let rep = Representation::<Q>::defining(&spec).unwrap();
        let t = FiniteRealTriple::new(rep, M::zeros(2, 2), None, Some(AntilinearOp::conjugation(2)), None).unwrap();
        let e = check_order_zero(&t).unwrap();
        assert!(!e.passed);
        assert!(e.detail.contains("pair"));
    }

    #[test]
    fn opposite_of_identity_is_identity() {
        let t = ko0_toy();
        let one = AlgebraElement::identity(t.spec());
        assert_eq!(opposite_action(&t, &one).unwrap(), M::identity(2));
    }

    proptest! {
        #[test]
        fn opposite_action_respects_adjoint(re in -4i64..4, im in -4i64..4) {
            for t in [ko0_toy(), ko6_toy(1)] {
                let a = AlgebraElement::new(t.spec(), vec![Q::from(re), Q::from(im)]).unwrap();
                prop_assert_eq!(opposite_action(&t, &a).unwrap().adjoint(), opposite_action(&t, &a.star()).unwrap());
            }
        }

        #[test]
        fn order_zero_extends_bilinearly(xs in proptest::collection::vec(-5i64..5, 4)) {
            let t = ko0_toy();
            let a = vec![Q::from(xs[0]), Q::from(xs[1])];
            let b = vec![Q::from(xs[2]), Q::from(xs[3])];
            prop_assert!(check_order_zero(&t).unwrap().passed);
            prop_assert!(check_order_zero_on(&t, &[a], &[b]).unwrap().passed);
        }
    }
}
