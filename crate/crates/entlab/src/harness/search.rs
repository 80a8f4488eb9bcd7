//! Best-effort separation search between entropy notions.
//!
//! Looks for instances where the weaker notion holds at (gamma, eps) while
//! the stronger one fails at the same parameters, by mixing structured
//! opposite-sign candidates with random dyadic ones. Completing with no
//! witness is a valid outcome (and the provable one for single-z domains).

use rand::Rng;
use serde_json::{json, Value};

use super::gen::{random_bool_class, random_joint, trial_rng};
use crate::dist::Joint;
use crate::distinguisher::Distinguisher;
use crate::entropy::{decomposable_check, metric_distance, modulus_min, Variant};
use crate::error::{Error, Result};
use crate::rat::{format_rat, pow2_inv, rat_zero, Rat};
use crate::scenario::joint_to_json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationTarget {
    MetricVsModulus,
    MetricVsDecomposable,
}

impl SeparationTarget {
    pub fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "metric-vs-modulus" => SeparationTarget::MetricVsModulus,
            "metric-vs-decomposable" => SeparationTarget::MetricVsDecomposable,
            other => return Err(Error::Scenario(format!("unknown target {other:?}"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SeparationWitness {
    pub gap: Rat,
    pub weak_level: Rat,
    pub strong_level: Rat,
    pub gamma: Rat,
    pub scenario: Value,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub target: SeparationTarget,
    pub budget: u64,
    pub seed: u64,
    pub candidates: u64,
    pub best: Option<SeparationWitness>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "target": match self.target {
                SeparationTarget::MetricVsModulus => "metric-vs-modulus",
                SeparationTarget::MetricVsDecomposable => "metric-vs-decomposable",
            },
            "budget": self.budget,
            "seed": self.seed,
            "candidates": self.candidates,
            "found": self.best.is_some(),
            "best": self.best.as_ref().map(|w| json!({
                "gap": format_rat(&w.gap),
                "weak_level": format_rat(&w.weak_level),
                "strong_level": format_rat(&w.strong_level),
                "gamma": format_rat(&w.gamma),
                "scenario": w.scenario,
            })),
        })
    }
}

/// Levels at which the weak (metric-avg) and strong notion hold exactly
/// for this instance: the max over the class of each per-member optimum.
fn levels(
    target: SeparationTarget,
    j: &Joint,
    class: &[Distinguisher],
    gamma: &Rat,
) -> Result<(Rat, Rat)> {
    let mut weak = rat_zero();
    for d in class {
        let v = metric_distance(j, d, gamma, Variant::Avg)?;
        if v > weak {
            weak = v;
        }
    }
    let strong = match target {
        SeparationTarget::MetricVsModulus => {
            let mut worst = rat_zero();
            for d in class {
                let v = modulus_min(j, d, gamma, Variant::Avg)?.value;
                if v > worst {
                    worst = v;
                }
            }
            worst
        }
        SeparationTarget::MetricVsDecomposable => {
            let params = crate::dist::EntropyParams::new(
                gamma.clone(),
                crate::rat::rat_one(),
                None,
            )?;
            decomposable_check(j, class, &params)?.value
        }
    };
    Ok((weak, strong))
}

pub fn search_separation(
    target: SeparationTarget,
    budget: u64,
    seed: u64,
    n: u32,
    m: u32,
) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::Scenario("search needs n >= 1".into()));
    }
    if n > 4 || m > 4 {
        return Err(Error::Scenario(
            "separation search is exhaustive-small; keep n, m <= 4".into(),
        ));
    }
    let mut best: Option<SeparationWitness> = None;
    for trial in 0..budget {
        let mut rng = trial_rng(seed, trial);
        let j = random_joint(&mut rng, n, m, 4)?;
        let class = random_bool_class(&mut rng, n, m, 3, true)?;
        let k = rng.gen_range(1..=n);
        let gamma = pow2_inv(k);
        let (weak, strong) = levels(target, &j, &class, &gamma)?;
        let gap = &strong - &weak;
        if gap > rat_zero() && best.as_ref().is_none_or(|b| gap > b.gap) {
            let mut scenario = joint_to_json(&j);
            scenario.as_object_mut().unwrap().insert(
                "class_tables".into(),
                json!(class
                    .iter()
                    .map(|d| d
                        .values()
                        .iter()
                        .map(format_rat)
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            );
            best = Some(SeparationWitness {
                gap,
                weak_level: weak,
                strong_level: strong,
                gamma,
                scenario,
            });
        }
    }
    Ok(SearchReport {
        target,
        budget,
        seed,
        candidates: budget,
        best,
    })
}
