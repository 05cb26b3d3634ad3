//! Seeded property suites. Every trial draws from its own stream of the
//! master seed, so a report is a pure function of its [`SuiteConfig`] and a
//! failing trial can be replayed on its own.

mod discrete;
mod functor;
mod smooth;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::group::GroupDescriptor;
use crate::reconstruct::SearchBounds;
use crate::seed::{trial_rng, TrialRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma1,
    Lemma2,
    Prop1,
    Prop2,
    Thm1,
    Thm2,
    Roundtrip,
    Smooth,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Prop1,
        Suite::Prop2,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Roundtrip,
        Suite::Smooth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Roundtrip => "roundtrip",
            Suite::Smooth => "smooth",
        }
    }

    /// Trials per sampled family when `--trials` is not given.
    pub fn default_trials(self) -> u64 {
        match self {
            Suite::Lemma1 => 1000,
            Suite::Lemma2 => 500,
            Suite::Roundtrip => 300,
            Suite::Smooth => 100,
            _ => 200,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of {}", Suite::ALL.map(|x| x.name()).join(", ")))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides [`Suite::default_trials`].
    pub trials: Option<u64>,
    /// Index of the first trial; with `trials = 1` this replays one trial.
    pub first_trial: u64,
    /// Overrides the matrix-kind comparison tolerance of each check.
    pub tol: Option<f64>,
    pub bounds: SearchBounds,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn trials_for(&self, suite: Suite) -> u64 {
        self.trials.unwrap_or_else(|| suite.default_trials())
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Runs `f` on trials `first_trial..first_trial + n` of family `family`,
    /// in parallel, returning outcomes in trial order.
    fn run<T, F>(&self, family: u64, n: u64, f: F) -> Vec<(u64, T)>
    where
        T: Send,
        F: Fn(&mut TrialRng, u64) -> T + Sync,
    {
        (self.first_trial..self.first_trial + n)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(self.seed, (family << 40) | t);
                (t, f(&mut rng, t))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    /// Largest deviation seen; absent for exact comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub passed: bool,
}

/// A failing trial with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub trial: u64,
    /// The command that reruns exactly this trial.
    pub rerun: String,
    pub inputs: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
    /// Diagnostics that do not affect the verdict.
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One JSON object per line: header, checks, failures, notes, verdict.
    pub fn to_structured(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, v: serde_json::Value| {
            out.push_str(&v.to_string());
            out.push('\n');
        };
        line(&mut out, serde_json::json!({"suite": self.suite, "seed": self.seed, "trials": self.trials}));
        for c in &self.checks {
            line(&mut out, serde_json::json!({ "check": c }));
        }
        for f in &self.failures {
            line(&mut out, serde_json::json!({ "failure": f }));
        }
        for n in &self.notes {
            line(&mut out, serde_json::json!({ "note": n }));
        }
        line(&mut out, serde_json::json!({"verdict": self.verdict()}));
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} (seed {}, {} trials)\n", self.suite, self.seed, self.trials);
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(s, "  {mark}  {:<66} {:>6} trials", c.name, c.trials);
            if c.failures > 0 {
                let _ = write!(s, ", {} failed", c.failures);
            }
            if let (Some(r), Some(t)) = (c.max_residual, c.tolerance) {
                let _ = write!(s, "  max residual {r:.3e} (tol {t:.0e})");
            }
            s.push('\n');
        }
        for f in self.failures.iter().take(20) {
            let _ = writeln!(
                s,
                "  failure in {} at trial {}: {}\n    inputs: {}\n    rerun: {}",
                f.check, f.trial, f.detail, f.inputs, f.rerun
            );
        }
        if self.failures.len() > 20 {
            let _ = writeln!(s, "  ... {} more failures in the structured report", self.failures.len() - 20);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict());
        s
    }
}

/// Result of one property on one trial.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    ok: bool,
    residual: f64,
    failure: Option<(String, String)>,
}

impl Outcome {
    pub(crate) fn pass(residual: f64) -> Self {
        Self { ok: true, residual, failure: None }
    }

    /// `inputs` and `detail` are only rendered on failure.
    pub(crate) fn new(
        ok: bool,
        residual: f64,
        inputs: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) -> Self {
        if ok {
            Self::pass(residual)
        } else {
            Self { ok, residual, failure: Some((inputs(), detail())) }
        }
    }

    pub(crate) fn fail(inputs: String, detail: String) -> Self {
        Self { ok: false, residual: f64::NAN, failure: Some((inputs, detail)) }
    }
}

/// Accumulates checks for one report.
pub(crate) struct Tally<'a> {
    cfg: &'a SuiteConfig,
    report: Report,
}

impl<'a> Tally<'a> {
    pub(crate) fn new(suite: Suite, cfg: &'a SuiteConfig) -> Self {
        let report = Report {
            suite,
            seed: cfg.seed,
            trials: cfg.trials_for(suite),
            checks: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        };
        Self { cfg, report }
    }

    /// Folds per-trial outcomes into a check. `tol` marks a numeric check
    /// whose largest residual is reported.
    pub(crate) fn record(&mut self, name: impl Into<String>, tol: Option<f64>, outcomes: Vec<(u64, Outcome)>) {
        let name = name.into();
        let mut failures = 0;
        let mut max_residual: f64 = 0.0;
        for (t, o) in outcomes.iter() {
            if o.residual.is_finite() {
                max_residual = max_residual.max(o.residual);
            }
            if !o.ok {
                failures += 1;
                let (inputs, detail) = o.failure.clone().unwrap_or_default();
                self.report.failures.push(Failure {
                    check: name.clone(),
                    trial: *t,
                    rerun: format!(
                        "hol props --suite {} --seed {} --first-trial {t} --trials 1",
                        self.report.suite, self.cfg.seed
                    ),
                    inputs,
                    detail,
                });
            }
        }
        self.report.checks.push(Check {
            name,
            trials: outcomes.len() as u64,
            failures,
            max_residual: tol.map(|_| max_residual),
            tolerance: tol,
            passed: failures == 0,
        });
    }

    /// Splits trials that evaluate several properties at once.
    pub(crate) fn record_many(&mut self, names: &[(String, Option<f64>)], outcomes: Vec<(u64, Vec<Outcome>)>) {
        for (i, (name, tol)) in names.iter().enumerate() {
            let column = outcomes.iter().map(|(t, v)| (*t, v[i].clone())).collect();
            self.record(name.clone(), *tol, column);
        }
    }

    /// A single deterministic check.
    pub(crate) fn single(&mut self, name: impl Into<String>, tol: Option<f64>, o: Outcome) {
        self.record(name, tol, vec![(0, o)]);
    }

    pub(crate) fn note(&mut self, n: impl Into<String>) {
        self.report.notes.push(n.into());
    }

    pub(crate) fn finish(self) -> Report {
        self.report
    }
}

/// Structure groups sampled by the discrete suites; `tol` replaces the
/// matrix tolerance.
pub fn sample_groups(tol: Option<f64>) -> Vec<GroupDescriptor> {
    let matrix = |g: GroupDescriptor| match tol {
        Some(t) => g.with_tolerance(t).expect("positive tolerance"),
        None => g,
    };
    vec![
        GroupDescriptor::cyclic(6).expect("valid"),
        GroupDescriptor::symmetric(4).expect("valid"),
        GroupDescriptor::dihedral(4).expect("valid"),
        GroupDescriptor::quaternion8(),
        matrix(GroupDescriptor::u1()),
        matrix(GroupDescriptor::su2()),
    ]
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Report {
    match suite {
        Suite::Lemma1 => discrete::transport_identities(cfg),
        Suite::Lemma2 => discrete::relocated_loops(cfg),
        Suite::Prop1 => discrete::groupoid_laws(cfg),
        Suite::Prop2 => discrete::quotient_functor(cfg),
        Suite::Thm1 => functor::equivalence_search(cfg),
        Suite::Thm2 => functor::functor_laws(cfg),
        Suite::Roundtrip => functor::round_trip(cfg),
        Suite::Smooth => smooth::smooth_bridge(cfg),
    }
}

#[cfg(test)]
mod tests;
