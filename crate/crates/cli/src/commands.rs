use std::fmt::Write as _;
use std::fs;

use clap::Args;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use spectral_twist::algebra::{AlgebraSpec, Representation};
use spectral_twist::document::{MatrixDoc, TripleDocument};
use spectral_twist::generate::{run_case, CaseReport};
use spectral_twist::realpart::{
    intersect_with_opposite, real_part, verify_grading_branch, verify_twisted_real_part, GradingBranch,
};
use spectral_twist::standard_model::{build_fiber_triple, build_twisted_sm, verify_sm_real_part, YukawaParams};
use spectral_twist::triple::{
    check_axioms, check_first_order, check_order_zero, check_twisted_first_order, CheckEntry, FiniteRealTriple, KOSigns,
};
use spectral_twist::twist::{check_compatibility, twist_by_grading, TwistData};
use spectral_twist::{Error, Rational, RealScalar};

use crate::{Cli, Command, Mode};

/// Metadata key marking documents produced by `twist-by-grading`.
const TWISTED_KEY: &str = "twist_by_grading";

pub struct Outcome {
    pub passed: bool,
    pub text: String,
}

impl Outcome {
    fn new(json: bool, passed: bool, value: Value, plain: String) -> Self {
        let text = if json { format!("{}\n", serde_json::to_string_pretty(&value).expect("json")) } else { plain };
        Self { passed, text }
    }
}

type CmdResult = Result<Outcome, String>;

#[derive(Debug, Args)]
pub struct SmArgs {
    /// Neutrino Yukawa coupling as "re,im".
    #[arg(long = "y-nu", allow_hyphen_values = true)]
    pub y_nu: Option<String>,
    #[arg(long = "y-e", allow_hyphen_values = true)]
    pub y_e: Option<String>,
    #[arg(long = "y-u", allow_hyphen_values = true)]
    pub y_u: Option<String>,
    #[arg(long = "y-d", allow_hyphen_values = true)]
    pub y_d: Option<String>,
    /// Majorana mass of the right-handed neutrino.
    #[arg(long = "k-r", allow_hyphen_values = true)]
    pub k_r: Option<String>,
    /// Also write the untwisted fiber triple document here.
    #[arg(long)]
    pub emit_fiber: Option<String>,
    /// Also write the twisted triple document here.
    #[arg(long)]
    pub emit_twisted: Option<String>,
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Validate { path } => {
            let doc = load(path)?;
            match mode_of(cli, Some(&doc)) {
                Mode::Exact => validate::<Rational>(cli, &doc),
                Mode::Float => validate::<f64>(cli, &doc),
            }
        }
        Command::TwistByGrading { path, out, identification } => {
            let doc = load(path)?;
            match mode_of(cli, Some(&doc)) {
                Mode::Exact => twist_cmd::<Rational>(cli, &doc, out.as_deref(), identification.as_deref()),
                Mode::Float => twist_cmd::<f64>(cli, &doc, out.as_deref(), identification.as_deref()),
            }
        }
        Command::RealPart { path } => {
            let doc = load(path)?;
            match mode_of(cli, Some(&doc)) {
                Mode::Exact => real_part_cmd::<Rational>(cli, &doc),
                Mode::Float => real_part_cmd::<f64>(cli, &doc),
            }
        }
        Command::Sm(args) => match mode_of(cli, None) {
            Mode::Exact => sm_cmd::<Rational>(cli, args),
            Mode::Float => sm_cmd::<f64>(cli, args),
        },
        Command::Fuzz { seed, count, ko } => match mode_of(cli, None) {
            Mode::Exact => fuzz_cmd::<Rational>(cli, *seed, *count, *ko),
            Mode::Float => fuzz_cmd::<f64>(cli, *seed, *count, *ko),
        },
    }
}

fn mode_of(cli: &Cli, doc: Option<&TripleDocument>) -> Mode {
    cli.mode.unwrap_or(match doc {
        Some(d) if d.mode == "float" => Mode::Float,
        _ => Mode::Exact,
    })
}

fn load(path: &str) -> Result<TripleDocument, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    TripleDocument::parse(&text).map_err(|e| format!("{path}: {e}"))
}

fn build<R: RealScalar>(doc: &TripleDocument) -> Result<(FiniteRealTriple<R>, Option<TwistData<R>>), String> {
    doc.to_triple().map_err(|e| e.to_string())
}

fn signs_text(signs: Option<&KOSigns>) -> String {
    match signs {
        None => "none".into(),
        Some(s) => {
            let dp = s.eps_dprime.map_or("-".to_string(), |x| x.to_string());
            format!("(eps, eps', eps'') = ({}, {}, {dp})", s.eps, s.eps_prime)
        }
    }
}

fn entry_line(out: &mut String, e: &CheckEntry) {
    let _ = writeln!(out, "{e}");
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn validate<R: RealScalar>(cli: &Cli, doc: &TripleDocument) -> CmdResult {
    let (t, rho) = build::<R>(doc)?;
    let axioms = check_axioms(&t);
    let mut entries: Vec<CheckEntry> = Vec::new();
    if t.real_structure().is_some() {
        entries.push(check_order_zero(&t).map_err(|e| e.to_string())?);
        match &rho {
            Some(rho) => {
                entries.push(check_twisted_first_order(&t, rho).map_err(|e| e.to_string())?);
                if rho.is_inner() {
                    let c = check_compatibility(&t, rho).map_err(|e| e.to_string())?;
                    entries.push(CheckEntry::new(
                        "twist compatible with J",
                        c.compatible(),
                        0.0,
                        format!("eps''' = {}", c.eps_triple.map_or("none".into(), |s| s.to_string())),
                    ));
                }
            }
            None => entries.push(check_first_order(&t).map_err(|e| e.to_string())?),
        }
    }
    let passed = axioms.passed() && entries.iter().all(|e| e.passed);
    let mut plain = String::new();
    for e in axioms.checks.entries.iter().chain(&entries) {
        entry_line(&mut plain, e);
    }
    let _ = writeln!(
        plain,
        "signs {} ({}), KO-dimension {}",
        signs_text(axioms.signs.as_ref()),
        if axioms.inferred { "inferred" } else { "declared" },
        axioms.ko_dimension.map_or("n/a".into(), |k| k.to_string())
    );
    if !axioms.ambiguous.is_empty() {
        let _ = writeln!(plain, "ambiguous: {}", axioms.ambiguous.join(", "));
    }
    let _ = writeln!(plain, "{}", verdict(passed));
    let value = json!({
        "command": "validate",
        "passed": passed,
        "axioms": axioms,
        "checks": entries,
    });
    Ok(Outcome::new(cli.json, passed, value, plain))
}

fn twist_cmd<R: RealScalar>(
    cli: &Cli,
    doc: &TripleDocument,
    out: Option<&str>,
    identification: Option<&str>,
) -> CmdResult {
    if doc.twist.is_some() {
        return Err("input already carries a twist; twisting it again is not supported".into());
    }
    let (t, _) = build::<R>(doc)?;
    let r = match identification {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let m: MatrixDoc = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
            Some(m.to_matrix::<R>("identification").map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let (doubled, rho) = twist_by_grading(&t, r.as_ref()).map_err(|e| e.to_string())?;
    let mut out_doc = TripleDocument::from_triple(&doubled, Some(&rho)).with_metadata(TWISTED_KEY, true);
    if let Some(label) = doc.metadata.get("name").and_then(Value::as_str) {
        out_doc = out_doc.with_metadata("name", format!("{label} (twisted by grading)"));
    }
    let text = out_doc.to_json_string();
    match out {
        None => Ok(Outcome { passed: true, text: format!("{text}\n") }),
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| format!("{path}: {e}"))?;
            let value = json!({
                "command": "twist-by-grading",
                "out": path,
                "algebra": doubled.spec().label(),
                "inner": rho.is_inner(),
            });
            let plain = format!(
                "wrote {path}: algebra {}, twist {}\n",
                doubled.spec().label(),
                if rho.is_inner() { "inner" } else { "without implementing unitary" }
            );
            Ok(Outcome::new(cli.json, true, value, plain))
        }
    }
}

/// Recovers the graded triple from its twist by grading: `π(a) = π(a, a)`.
fn untwisted_source<R: RealScalar>(t: &FiniteRealTriple<R>) -> Result<Option<FiniteRealTriple<R>>, Error> {
    let summands = &t.spec().summands;
    let half = summands.len() / 2;
    if summands.len() % 2 == 1 || summands[..half] != summands[half..] {
        return Ok(None);
    }
    let spec = AlgebraSpec::new(summands[..half].to_vec())?;
    let d = spec.real_dimension();
    let matrices: Vec<_> = (0..d).map(|k| (t.rep().basis_sparse(k) + t.rep().basis_sparse(k + d)).to_dense()).collect();
    let rep = Representation::from_matrices(&spec, &matrices)?;
    FiniteRealTriple::new(rep, t.dirac().clone(), t.grading().cloned(), t.real_structure().cloned(), t.signs().copied())
        .map(Some)
}

fn coords_json<R: RealScalar>(v: &[R]) -> Value {
    Value::Array(v.iter().map(RealScalar::to_json).collect())
}

fn real_part_cmd<R: RealScalar>(cli: &Cli, doc: &TripleDocument) -> CmdResult {
    let (t, rho) = build::<R>(doc)?;
    if t.real_structure().is_none() {
        return Err(Error::MissingRealStructure.to_string());
    }
    let rp = match real_part(&t, rho.as_ref()) {
        Ok(rp) => rp,
        Err(Error::Incompatible(msg)) => {
            let value = json!({ "command": "real-part", "passed": false, "error": format!("twist incompatible with J: {msg}") });
            return Ok(Outcome::new(cli.json, false, value, format!("twist incompatible with J: {msg}\nFAIL\n")));
        }
        Err(e) => return Err(e.to_string()),
    };
    let intersection = match intersect_with_opposite(&t) {
        Ok(b) => Some(b.dim()),
        Err(Error::NotInjective) => None,
        Err(e) => return Err(e.to_string()),
    };
    let mut passed = rp.flags.all();
    let mut plain = String::new();
    let _ = writeln!(plain, "real part: dimension {}, structure {}", rp.real_dimension, rp.structure);
    for v in rp.basis.vectors() {
        let coords: Vec<String> = v.iter().map(|x| x.to_json().to_string().trim_matches('"').to_string()).collect();
        let _ = writeln!(plain, "  basis [{}]", coords.join(", "));
    }
    let f = &rp.flags;
    let _ = writeln!(
        plain,
        "flags: subalgebra {}, commutative {}, central {}, star-closed {}, rho-stable {}",
        f.is_subalgebra, f.is_commutative, f.is_central, f.is_star_closed, f.is_rho_stable
    );
    let _ = writeln!(
        plain,
        "A ∩ A°: {}",
        intersection.map_or("n/a (representation not injective)".into(), |d| format!("dimension {d}"))
    );

    let mut twisted_json = Value::Null;
    if let Some(rho) = &rho {
        let report = verify_twisted_real_part(&t, rho).map_err(|e| e.to_string())?;
        passed &= report.passed();
        let _ = writeln!(plain, "twisted sub-triple checks:");
        for e in &report.entries {
            let _ = writeln!(plain, "  {e}");
        }
        twisted_json = json!(report);
    }

    let mut branch_json = Value::Null;
    let marked = doc.metadata.get(TWISTED_KEY).and_then(Value::as_bool).unwrap_or(false);
    if let (true, Some(rho)) = (marked, &rho) {
        if let Some(source) = untwisted_source(&t).map_err(|e| e.to_string())? {
            let p2 = verify_grading_branch(&source, rho.unitary.as_ref()).map_err(|e| e.to_string())?;
            passed &= p2.passed();
            let branch = match p2.branch {
                GradingBranch::Product => "A_J + A_J",
                GradingBranch::Intersection => "{(a, JaJ^-1) : a in A ∩ A°}",
            };
            let _ = writeln!(
                plain,
                "grading branch (KO {}): {branch}; predicted dimension {}, computed {}, {}",
                p2.ko_dimension,
                p2.expected_dim,
                p2.doubled_real_part_dim,
                if p2.equal { "equal" } else { "different" }
            );
            let _ = writeln!(
                plain,
                "original triple: A_J dimension {}, A ∩ A° dimension {}",
                p2.a_j_dim, p2.intersection_dim
            );
            branch_json = json!(p2);
        }
    }
    let _ = writeln!(plain, "{}", verdict(passed));
    let value = json!({
        "command": "real-part",
        "passed": passed,
        "dimension": rp.real_dimension,
        "structure": rp.structure,
        "basis": rp.basis.vectors().iter().map(|v| coords_json(v)).collect::<Vec<_>>(),
        "flags": rp.flags,
        "intersection_dimension": intersection,
        "twisted_checks": twisted_json,
        "grading_branch": branch_json,
    });
    Ok(Outcome::new(cli.json, passed, value, plain))
}

/// Decimal or `p/q` scalar.
fn parse_scalar<R: RealScalar>(s: &str) -> Result<R, String> {
    let s = s.trim();
    if let Ok(v) = R::from_json(&Value::String(s.to_string())) {
        return Ok(v);
    }
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').ok_or_else(|| format!("invalid number {s:?}"))?;
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(format!("invalid number {s:?}"));
    }
    let text = format!(
        "{}{}{}/1{}",
        if neg { "-" } else { "" },
        if int.is_empty() { "0" } else { int },
        frac,
        "0".repeat(frac.len())
    );
    R::from_json(&Value::String(text)).map_err(|e| format!("invalid number {s:?}: {e}"))
}

fn parse_complex<R: RealScalar>(flag: &str, s: &str) -> Result<Complex<R>, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let part = |x: &str| parse_scalar::<R>(x).map_err(|e| format!("--{flag}: {e}"));
    Ok(Complex::new(part(re)?, part(im)?))
}

fn sm_params<R: RealScalar>(args: &SmArgs) -> Result<YukawaParams<R>, String> {
    let mut p = YukawaParams::<R>::default();
    for (flag, value, slot) in [
        ("y-nu", &args.y_nu, &mut p.y_nu),
        ("y-e", &args.y_e, &mut p.y_e),
        ("y-u", &args.y_u, &mut p.y_u),
        ("y-d", &args.y_d, &mut p.y_d),
    ] {
        if let Some(v) = value {
            *slot = parse_complex(flag, v)?;
        }
    }
    if let Some(k) = &args.k_r {
        p.k_r = parse_scalar(k).map_err(|e| format!("--k-r: {e}"))?;
    }
    Ok(p)
}

#[derive(Serialize)]
struct SmOutput<'a> {
    command: &'static str,
    passed: bool,
    mode: &'static str,
    report: &'a spectral_twist::standard_model::SmReport,
    majorana_motivation: bool,
    seconds: f64,
}

fn sm_cmd<R: RealScalar>(cli: &Cli, args: &SmArgs) -> CmdResult {
    let p = sm_params::<R>(args)?;
    let start = std::time::Instant::now();
    let report = verify_sm_real_part(&p).map_err(|e| e.to_string())?;
    let seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &args.emit_fiber {
        let fiber = build_fiber_triple(&p).map_err(|e| e.to_string())?;
        let doc = TripleDocument::from_triple(&fiber, None).with_metadata("name", "standard model fiber");
        fs::write(path, doc.to_json_string() + "\n").map_err(|e| format!("{path}: {e}"))?;
    }
    if let Some(path) = &args.emit_twisted {
        let (t, rho) = build_twisted_sm(&p).map_err(|e| e.to_string())?;
        let doc = TripleDocument::from_triple(&t, Some(&rho))
            .with_metadata(TWISTED_KEY, true)
            .with_metadata("name", "standard model fiber (twisted by grading)");
        fs::write(path, doc.to_json_string() + "\n").map_err(|e| format!("{path}: {e}"))?;
    }
    let m = &report.majorana;
    let massive = !p.k_r.is_zero();
    let majorana_motivation = m.untwisted == 0 && if massive { m.twisted >= 1 } else { m.twisted == 0 };
    let passed = report.passed();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut plain = String::new();
    let ko = |k: Option<u8>| k.map_or("n/a".to_string(), |k| k.to_string());
    let _ = writeln!(
        plain,
        "internal triple: KO-dimension {}, axioms {}",
        ko(report.internal_ko),
        verdict(report.internal_axioms)
    );
    let _ =
        writeln!(plain, "fiber triple: KO-dimension {}, axioms {}", ko(report.fiber_ko), verdict(report.fiber_axioms));
    let _ = writeln!(plain, "twisted action matches the Q/M block pattern: {}", yes(report.block_pattern));
    let _ = writeln!(plain, "J exchanges the Q and M blocks conjugated: {}", yes(report.j_block_swap));
    let _ = writeln!(plain, "twist compatible with J: {}", yes(report.compatible));
    let _ = writeln!(plain, "twisted first order: {}", verdict(report.twisted_first_order));
    let _ = writeln!(
        plain,
        "real part: dimension {}, structure {}, scalar multiples of the identity: {}, fixed by the twist: {}",
        report.real_part_dim,
        report.real_part_structure,
        yes(report.real_part_is_scalar),
        yes(report.rho_fixes_real_part)
    );
    let _ = writeln!(
        plain,
        "untwisted fiber: A_J dimension {}, A ∩ A° dimension {}, equal: {}",
        report.fiber_a_j_dim,
        report.intersection_dim,
        yes(report.intersection_equals_a_j)
    );
    let _ = writeln!(plain, "real-part checks of the twisted triple: {}", verdict(report.twisted_real_part));
    let _ = writeln!(plain, "grading-branch prediction: {}", verdict(report.grading_branch));
    let _ = writeln!(
        plain,
        "Majorana one-forms: untwisted {}, twisted {}, doubled algebra untwisted {}",
        m.untwisted, m.twisted, m.doubled_untwisted
    );
    let _ = writeln!(
        plain,
        "Majorana block {} one-forms after twisting",
        if m.twisted > 0 { "contributes" } else { "contributes no" }
    );
    let _ = writeln!(plain, "{} ({seconds:.2} s)", verdict(passed));
    let out = SmOutput { command: "sm", passed, mode: R::MODE, report: &report, majorana_motivation, seconds };
    Ok(Outcome::new(cli.json, passed, json!(out), plain))
}

#[derive(Serialize)]
struct Campaign {
    ko: u8,
    total: usize,
    passed: usize,
    branch_correct: usize,
    product_branch: usize,
    intersection_branch: usize,
    strict_containment: usize,
    signs_preserved: usize,
    inner: usize,
    compatibility_equivalent: usize,
}

fn fuzz_cmd<R: RealScalar>(cli: &Cli, seed: u64, count: u64, ko: Option<u8>) -> CmdResult {
    let classes: Vec<u8> = match ko {
        Some(k) if [0, 2, 4, 6].contains(&k) => vec![k],
        Some(k) => return Err(format!("--ko must be 0, 2, 4 or 6, got {k}")),
        None => vec![0, 2, 4, 6],
    };
    let mut campaigns = Vec::new();
    let mut all_cases: Vec<CaseReport> = Vec::new();
    for &k in &classes {
        let mut cases: Vec<CaseReport> = (0..count).into_par_iter().map(|i| run_case::<R>(seed, i, k)).collect();
        cases.sort_by_key(|c| c.index);
        let n = |f: &dyn Fn(&CaseReport) -> bool| cases.iter().filter(|c| f(c)).count();
        campaigns.push(Campaign {
            ko: k,
            total: cases.len(),
            passed: n(&|c| c.passed()),
            branch_correct: n(&|c| c.branch_correct),
            product_branch: n(&|c| c.branch == Some(GradingBranch::Product)),
            intersection_branch: n(&|c| c.branch == Some(GradingBranch::Intersection)),
            strict_containment: n(&|c| c.a_j_dim < c.intersection_dim),
            signs_preserved: n(&|c| c.signs_preserved),
            inner: n(&|c| c.inner),
            compatibility_equivalent: n(&|c| c.compatibility_equivalent == Some(true)),
        });
        all_cases.extend(cases);
    }
    let passed = all_cases.iter().all(CaseReport::passed);
    let mut plain = String::new();
    for c in &campaigns {
        let _ = writeln!(
            plain,
            "KO {}: {}/{} passed; branch correct {}, product {}, intersection {}, strict A_J ⊊ A ∩ A° {}, signs preserved {}, inner {} (compatibility forms agree {})",
            c.ko,
            c.passed,
            c.total,
            c.branch_correct,
            c.product_branch,
            c.intersection_branch,
            c.strict_containment,
            c.signs_preserved,
            c.inner,
            c.compatibility_equivalent
        );
    }
    for c in all_cases.iter().filter(|c| !c.passed()) {
        let _ = writeln!(plain, "failed case KO {} #{}: {} {:?}", c.ko, c.index, c.description, c.error);
    }
    let _ = writeln!(plain, "{}", verdict(passed));
    let value = json!({
        "command": "fuzz",
        "seed": seed,
        "count": count,
        "mode": R::MODE,
        "passed": passed,
        "campaigns": campaigns,
        "cases": all_cases,
    });
    Ok(Outcome::new(cli.json, passed, value, plain))
}
