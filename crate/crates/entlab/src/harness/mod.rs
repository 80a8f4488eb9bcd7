//! Scenario generation, verification suites, separation search, and report
//! assembly.
//!
//! Reports are reproducible: each trial derives its own RNG stream from
//! (seed, trial index), trial results are assembled in index order, and the
//! canonical JSON body excludes wall-clock time, so two runs with the same
//! (suite, trials, seed) produce byte-identical bodies at any thread count.
//! ENTLAB_THREADS caps the rayon pool (unset or 0: default parallelism).

pub mod gen;
pub mod oracle_eq;
pub mod search;
pub mod suites;

use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Violation {
    pub trial: u64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub instances: u64,
    pub violations: Vec<Violation>,
    pub certificates: Vec<Value>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    /// Canonical body: everything except wall-clock. Byte-identical across
    /// runs and thread counts for a fixed (suite, trials, seed).
    pub fn canonical_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "instances": self.instances,
            "pass": self.pass(),
            "violations": self.violations.iter().map(|v| json!({
                "trial": v.trial,
                "message": v.message,
            })).collect::<Vec<_>>(),
            "certificates": self.certificates,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TimedReport {
    pub report: SuiteReport,
    pub wall_ms: u128,
}

impl TimedReport {
    /// Full JSON including wall-clock (not part of the canonical body).
    pub fn to_json(&self) -> Value {
        let mut v = self.report.canonical_json();
        v.as_object_mut()
            .unwrap()
            .insert("wall_clock_ms".into(), json!(self.wall_ms));
        v
    }
}

/// Per-trial outcome: a compact certificate and an optional violation.
pub struct TrialOutcome {
    pub certificate: Value,
    pub violation: Option<String>,
}

impl TrialOutcome {
    pub fn ok(certificate: Value) -> Self {
        TrialOutcome {
            certificate,
            violation: None,
        }
    }

    pub fn fail(message: String) -> Self {
        TrialOutcome {
            certificate: Value::Null,
            violation: Some(message),
        }
    }
}

pub fn threads_from_env() -> usize {
    std::env::var("ENTLAB_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

/// Runs trials in parallel, collecting outcomes in trial order.
pub fn run_trials<F>(trials: u64, f: F) -> Vec<TrialOutcome>
where
    F: Fn(u64) -> TrialOutcome + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads_from_env())
        .build();
    match pool {
        Ok(pool) => pool.install(|| (0..trials).into_par_iter().map(&f).collect()),
        Err(_) => (0..trials).map(f).collect(),
    }
}

pub fn assemble(suite: &str, trials: u64, seed: u64, outcomes: Vec<TrialOutcome>) -> SuiteReport {
    let mut violations = Vec::new();
    let mut certificates = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.into_iter().enumerate() {
        if let Some(message) = o.violation {
            violations.push(Violation {
                trial: i as u64,
                message,
            });
        }
        certificates.push(o.certificate);
    }
    SuiteReport {
        suite: suite.to_string(),
        trials,
        seed,
        instances: certificates.len() as u64,
        violations,
        certificates,
    }
}
