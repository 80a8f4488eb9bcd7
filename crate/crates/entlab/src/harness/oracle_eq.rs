//! Oracle equivalence: the greedy budget allocators (metric-avg extrema,
//! modulus-avg minimum, decomposable minimum) against the exact-rational
//! simplex on the same instances, value for value.

use rand::Rng;
use serde_json::json;

use super::gen::{random_bool_class, random_joint, trial_rng};
use super::{assemble, run_trials, TimedReport, TrialOutcome};
use crate::dist::EntropyParams;
use crate::entropy::lp::{solve, LpSolution};
use crate::entropy::oracle_lp::{lp_decomposable, lp_metric_avg, lp_modulus_avg};
use crate::entropy::{decomposable_check, metric_range, modulus_min, Variant};
use crate::rat::{format_rat, pow2_inv, rat_one};

fn lp_value(p: &crate::entropy::lp::LpProblem) -> Result<crate::rat::Rat, String> {
    match solve(p).map_err(|e| e.to_string())? {
        LpSolution::Optimal { value, .. } => Ok(value),
        other => Err(format!("unexpected LP outcome {other:?}")),
    }
}

fn oracle_trial(seed: u64, trial: u64) -> TrialOutcome {
    let mut rng = trial_rng(seed, trial);
    // domains up to 4 bits each, skewed toward small; every 25th trial
    // exercises a 4-bit side
    let (n, m) = if trial.is_multiple_of(25) {
        (4u32, rng.gen_range(1..=2u32))
    } else if trial % 25 == 1 {
        (rng.gen_range(1..=2u32), 4u32)
    } else {
        (rng.gen_range(1..=3u32), rng.gen_range(1..=3u32))
    };
    let j = match random_joint(&mut rng, n, m, 10) {
        Ok(j) => j,
        Err(e) => return TrialOutcome::fail(format!("error: {e}")),
    };
    let big = n + m > 6;
    let class = match random_bool_class(&mut rng, n, m, if big { 2 } else { 3 }, false) {
        Ok(c) => c,
        Err(e) => return TrialOutcome::fail(format!("error: {e}")),
    };
    let k = rng.gen_range(1..=n);
    let gamma = pow2_inv(k);

    for (i, d) in class.iter().enumerate() {
        // metric-avg: both extrema
        let greedy = match metric_range(&j, d, &gamma, Variant::Avg) {
            Ok(r) => r,
            Err(e) => return TrialOutcome::fail(format!("error: {e}")),
        };
        let lp_max = match lp_value(&lp_metric_avg(&j, d, &gamma, true)) {
            Ok(v) => v,
            Err(e) => return TrialOutcome::fail(e),
        };
        let lp_min = match lp_value(&lp_metric_avg(&j, d, &gamma, false)) {
            Ok(v) => v,
            Err(e) => return TrialOutcome::fail(e),
        };
        if lp_max != greedy.upper || lp_min != greedy.lower {
            return TrialOutcome::fail(format!(
                "member {i}: metric-avg mismatch (greedy [{}, {}], LP [{}, {}])",
                greedy.lower, greedy.upper, lp_min, lp_max
            ));
        }
        // modulus-avg
        let greedy_mod = match modulus_min(&j, d, &gamma, Variant::Avg) {
            Ok(v) => v.value,
            Err(e) => return TrialOutcome::fail(format!("error: {e}")),
        };
        let lp_mod = match lp_value(&lp_modulus_avg(&j, d, &gamma)) {
            Ok(v) => v,
            Err(e) => return TrialOutcome::fail(e),
        };
        if lp_mod != greedy_mod {
            return TrialOutcome::fail(format!(
                "member {i}: modulus-avg mismatch (greedy {}, LP {})",
                greedy_mod, lp_mod
            ));
        }
    }

    // decomposable over the whole class
    let params = match EntropyParams::new(gamma.clone(), rat_one(), None) {
        Ok(p) => p,
        Err(e) => return TrialOutcome::fail(format!("error: {e}")),
    };
    let greedy_dec = match decomposable_check(&j, &class, &params) {
        Ok(o) => o.value,
        Err(e) => return TrialOutcome::fail(format!("error: {e}")),
    };
    let lp_dec = match lp_value(&lp_decomposable(&j, &class, &gamma)) {
        Ok(v) => v,
        Err(e) => return TrialOutcome::fail(e),
    };
    if lp_dec != greedy_dec {
        return TrialOutcome::fail(format!(
            "decomposable mismatch (greedy {}, LP {})",
            greedy_dec, lp_dec
        ));
    }

    TrialOutcome::ok(json!({
        "n": n, "m": m,
        "class": class.len(),
        "gamma": format_rat(&gamma),
        "decomposable": format_rat(&greedy_dec),
    }))
}

/// Runs the oracle-equivalence comparison; 0 mismatches is PASS.
pub fn run(trials: u64, seed: u64) -> TimedReport {
    let start = std::time::Instant::now();
    let outcomes = run_trials(trials, |t| oracle_trial(seed, t));
    TimedReport {
        report: assemble("ORACLE-EQ", trials, seed, outcomes),
        wall_ms: start.elapsed().as_millis(),
    }
}
