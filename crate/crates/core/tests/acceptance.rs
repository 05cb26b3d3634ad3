//! Acceptance run: each criterion at its pinned trial count and tolerance.
//!
//! Prints one PASS/FAIL line per criterion. Lines go straight to the process
//! stdout so they show up without `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use holonomy::props::{run_suite, Report, Suite, SuiteConfig};

const SEED: u64 = 20_261_016;

const LEMMA1_TRIALS: u64 = 1000;
const LEMMA2_TRIALS: u64 = 500;
const PROP1_TRIALS: u64 = 200;
const PROP2_TRIALS: u64 = 200;
const ROUNDTRIP_TRIALS: u64 = 300;
const THM1_TRIALS: u64 = 200;
const THM2_TRIALS: u64 = 200;
const THM2_SURJECTIVITY_TRIALS: u64 = 100;
const SMOOTH_LOOPS: u64 = 100;

const MATRIX_TOL: f64 = 1e-9;
const CERTIFICATE_TOL: f64 = 1e-8;
const SMOOTH_TOL: f64 = 1e-6;

const LEMMA1_BUDGET: Duration = Duration::from_secs(30);
const SMOOTH_BUDGET: Duration = Duration::from_secs(120);

const GROUPS: [&str; 6] = ["cyclic(6)", "symmetric(4)", "dihedral(4)", "quaternion8", "U1", "SU2"];

fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn config(trials: u64, tol: Option<f64>) -> SuiteConfig {
    SuiteConfig { trials: Some(trials), tol, ..SuiteConfig::with_seed(SEED) }
}

fn timed(suite: Suite, cfg: &SuiteConfig) -> (Report, Duration) {
    let start = Instant::now();
    let r = run_suite(suite, cfg);
    (r, start.elapsed())
}

/// The named check exists, passed, and ran `trials` trials.
fn check_ok(r: &Report, name: &str, trials: u64) -> bool {
    r.check(name).is_some_and(|c| c.passed && c.trials == trials && c.failures == 0)
}

fn within(r: &Report, name: &str, tol: f64) -> bool {
    r.check(name).is_some_and(|c| c.max_residual.unwrap_or(0.0) < tol)
}

fn show_failures(r: &Report) {
    if !r.passed() {
        for l in r.to_text().lines().filter(|l| l.contains("FAIL") || l.contains("failure") || l.contains("rerun")) {
            emit(&format!("      {l}"));
        }
    }
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let mut runs: Vec<(Suite, SuiteConfig, Report)> = Vec::new();
    let mut record = |n: u8, ok: bool, text: String| {
        emit(&format!("criterion {n}: {}  {text}", verdict(ok)));
        results.push((n, ok));
    };

    // 1
    let cfg = config(LEMMA1_TRIALS, Some(MATRIX_TOL));
    let (r, t) = timed(Suite::Lemma1, &cfg);
    let ok = r.passed()
        && t < LEMMA1_BUDGET
        && GROUPS.iter().all(|g| check_ok(&r, &format!("transport identities, {g}"), LEMMA1_TRIALS))
        && within(&r, "transport identities, SU2", MATRIX_TOL);
    record(
        1,
        ok,
        format!("transport identities, {LEMMA1_TRIALS} trials x 6 groups, {:.2} s (< 30 s)", t.as_secs_f64()),
    );
    show_failures(&r);
    runs.push((Suite::Lemma1, cfg, r));

    // 2
    let cfg = config(LEMMA2_TRIALS, Some(MATRIX_TOL));
    let (r, _) = timed(Suite::Lemma2, &cfg);
    let ok = r.passed()
        && GROUPS.iter().all(|g| {
            check_ok(&r, &format!("holonomy at transported point, {g}"), LEMMA2_TRIALS)
                && check_ok(&r, &format!("base-point conjugation, {g}"), LEMMA2_TRIALS)
        });
    record(2, ok, format!("relocated holonomy and base-point conjugation, {LEMMA2_TRIALS} trials each"));
    show_failures(&r);
    runs.push((Suite::Lemma2, cfg, r));

    // 3
    let cfg = config(PROP1_TRIALS, None);
    let (r, _) = timed(Suite::Prop1, &cfg);
    let laws = ["associativity", "identity laws", "inverse laws"];
    let ok = r.passed()
        && laws.iter().all(|l| {
            check_ok(&r, &format!("{l}, thin classes"), PROP1_TRIALS)
                && check_ok(&r, &format!("{l}, holonomy classes"), PROP1_TRIALS)
        })
        && check_ok(&r, "arrow equality is a congruence", PROP1_TRIALS);
    record(3, ok, format!("groupoid laws on {PROP1_TRIALS} composable triples"));
    show_failures(&r);
    runs.push((Suite::Prop1, cfg, r));

    // 4: the report is produced, but "every lift composite nonempty" is false
    // on both fixtures: the pair (alpha, alpha^-1) composes to the empty curve.
    let cfg = config(PROP2_TRIALS, None);
    let (r, _) = timed(Suite::Prop2, &cfg);
    let functorial = check_ok(&r, "quotient preserves composition", PROP2_TRIALS)
        && check_ok(&r, "quotient preserves identities", PROP2_TRIALS);
    let witness = check_ok(&r, "non-faithfulness witness, theta graph", 1);
    let reports = ["theta graph, cyclic(2)", "figure-eight, quaternion8"];
    let produced = reports.iter().all(|f| check_ok(&r, &format!("non-splitting report, {f}"), 1));
    let note = |f: &str| r.notes.iter().find(|n| n.starts_with(f)).cloned().unwrap_or_default();
    let coarse_identity = reports.iter().all(|f| note(f).contains("coarse composite is the identity: true"));
    let every_lift = reports.iter().all(|f| note(f).contains("every lift composite nonempty: true"));
    record(
        4,
        functorial && witness && produced && coarse_identity && every_lift,
        format!("quotient functor on {PROP2_TRIALS} pairs, non-faithful witness, non-splitting reports"),
    );
    emit(&format!("      functoriality: {}", verdict(functorial)));
    emit(&format!("      non-faithfulness witness on theta: {}", verdict(witness)));
    emit(&format!("      reports produced with coarse composite = identity: {}", verdict(produced && coarse_identity)));
    emit(&format!("      every lift composite has nonempty reduced curve: {}", verdict(every_lift)));
    for f in reports {
        emit(&format!("      {}", note(f)));
    }
    assert!(functorial && witness && produced && coarse_identity, "{}", r.to_text());
    assert!(!every_lift, "the cancelling lift pair no longer reproduces");
    runs.push((Suite::Prop2, cfg, r));

    // 5
    let cfg = config(ROUNDTRIP_TRIALS, None);
    let (r, _) = timed(Suite::Roundtrip, &cfg);
    let exhaustive: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("unique up to gauge")).collect();
    let graphs = ["self-loop", "figure-eight", "theta", "path", "square with diagonal", "pentagon"];
    let groups = ["cyclic(2)", "symmetric(3)", "dihedral(4)", "quaternion8"];
    let ok = r.passed()
        && check_ok(&r, "induced map of the reconstruction equals the input", ROUNDTRIP_TRIALS)
        && graphs.iter().all(|g| {
            groups.iter().all(|k| {
                exhaustive.iter().any(|c| c.name == format!("unique up to gauge, every field on {g}, {k}") && c.passed)
            })
        });
    let fields: u64 = exhaustive.iter().map(|c| c.trials).sum();
    record(
        5,
        ok,
        format!("round trip on {ROUNDTRIP_TRIALS} maps, uniqueness up to gauge on {fields} enumerated fields"),
    );
    show_failures(&r);
    runs.push((Suite::Roundtrip, cfg, r));

    // 6
    let cfg = config(THM1_TRIALS, Some(CERTIFICATE_TOL));
    let (r, _) = timed(Suite::Thm1, &cfg);
    let ok = r.passed()
        && check_ok(&r, "holonomy-isomorphic pairs are certified", THM1_TRIALS)
        && check_ok(&r, "certificates re-verify after a file round trip", THM1_TRIALS)
        && within(&r, "certificates re-verify after a file round trip", CERTIFICATE_TOL);
    record(6, ok, format!("{THM1_TRIALS} certified and re-verified gauge equivalences"));
    show_failures(&r);
    runs.push((Suite::Thm1, cfg, r));

    // 7
    let cfg = config(THM2_TRIALS, Some(CERTIFICATE_TOL));
    let (r, _) = timed(Suite::Thm2, &cfg);
    let logged = r.notes.iter().find(|n| n.starts_with("extraction adjusted")).cloned();
    let ok = r.passed()
        && ["C preserves identities", "C preserves composition", "C(extract(m)) = m", "C is faithful"]
            .iter()
            .all(|c| check_ok(&r, c, THM2_TRIALS))
        && check_ok(&r, "every field is isomorphic to a reconstruction", THM2_SURJECTIVITY_TRIALS)
        && logged.is_some();
    record(7, ok, "functor laws, fullness, faithfulness, essential surjectivity".into());
    if let Some(n) = logged {
        emit(&format!("      {n}"));
    }
    show_failures(&r);
    runs.push((Suite::Thm2, cfg, r));

    // 8
    let cfg = config(SMOOTH_LOOPS, Some(SMOOTH_TOL));
    let (r, t) = timed(Suite::Smooth, &cfg);
    let named = |prefix: &str| {
        r.checks.iter().filter(|c| c.name.starts_with(prefix)).all(|c| c.passed)
            && r.checks.iter().any(|c| c.name.starts_with(prefix))
    };
    let ok = r.passed()
        && t < SMOOTH_BUDGET
        && within(&r, "abelian flux on random polygons, 10000 steps", SMOOTH_TOL)
        && within(&r, "abelian flux on a circle", SMOOTH_TOL)
        && named("midpoint integrator order 2")
        && named("spur and product axioms")
        && r.checks
            .iter()
            .filter(|c| c.name.starts_with("spur and product axioms"))
            .all(|c| c.max_residual.unwrap_or(1.0) < SMOOTH_TOL)
        && named("circle family")
        && named("translation family")
        && named("lattice Wilson loop slope at least 1");
    record(
        8,
        ok,
        format!("flux, integrator order, axioms, loop families, lattice limit, {:.1} s (< 120 s)", t.as_secs_f64()),
    );
    show_failures(&r);
    runs.push((Suite::Smooth, cfg, r));

    // 9: rerun on a pool of a different size
    let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let mismatched: Vec<&str> = runs
        .iter()
        .filter(|(s, cfg, r)| pool.install(|| run_suite(*s, cfg)).to_structured() != r.to_structured())
        .map(|(s, _, _)| s.name())
        .collect();
    record(9, mismatched.is_empty(), format!("structured reports of {} suites repeat byte for byte", runs.len()));
    if !mismatched.is_empty() {
        emit(&format!("      differing: {}", mismatched.join(", ")));
    }

    let unexpected: Vec<u8> = results.iter().filter(|(n, ok)| !ok && *n != 4).map(|(n, _)| *n).collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
