use super::*;

fn small(seed: u64, trials: u64) -> SuiteConfig {
    SuiteConfig { trials: Some(trials), ..SuiteConfig::with_seed(seed) }
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    let err = "lemma9".parse::<Suite>().unwrap_err();
    assert!(err.contains("lemma1") && err.contains("smooth"));
}

#[test]
fn discrete_suites_pass_and_repeat() {
    for s in [Suite::Lemma1, Suite::Lemma2, Suite::Prop1, Suite::Prop2] {
        let cfg = small(5, 12);
        let a = run_suite(s, &cfg);
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_structured(), run_suite(s, &cfg).to_structured());
    }
}

#[test]
fn functor_suites_pass() {
    for s in [Suite::Thm1, Suite::Thm2] {
        let r = run_suite(s, &small(3, 12));
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn a_single_trial_replays() {
    let full = run_suite(Suite::Lemma2, &small(9, 6));
    let one = run_suite(Suite::Lemma2, &SuiteConfig { first_trial: 4, ..small(9, 1) });
    assert!(one.checks.iter().all(|c| c.trials == 1));
    // residuals of trial 4 are bounded by the full run's maxima
    for (a, b) in one.checks.iter().zip(&full.checks) {
        assert_eq!(a.name, b.name);
        assert!(a.max_residual.unwrap_or(0.0) <= b.max_residual.unwrap_or(0.0));
    }
}

#[test]
fn failures_carry_a_rerun_line() {
    let cfg = small(2, 3);
    let mut tally = Tally::new(Suite::Prop1, &cfg);
    let out =
        cfg.run(0, 3, |_, t| if t == 1 { Outcome::fail("x".into(), "broken".into()) } else { Outcome::pass(0.0) });
    tally.record("planted", None, out);
    let r = tally.finish();
    assert!(!r.passed());
    assert_eq!(r.failures[0].trial, 1);
    assert_eq!(r.failures[0].rerun, "hol props --suite prop1 --seed 2 --first-trial 1 --trials 1");
    let text = r.to_structured();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("\"suite\":\"prop1\""));
    assert_eq!(*lines.last().unwrap(), r#"{"verdict":"fail"}"#);
    assert!(r.to_text().contains("FAIL"));
}

#[test]
fn quotient_notes_record_the_cancelling_lift() {
    let r = run_suite(Suite::Prop2, &small(1, 4));
    assert!(r.notes.iter().any(|n| n.contains("every lift composite nonempty: false")), "{:?}", r.notes);
}
