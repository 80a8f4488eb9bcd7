//! Exact decision procedures for every entropy notion: greedy waterfilling
//! for achievable intervals, piecewise-linear budget allocation for the
//! average-case variants, exact-rational LP for HILL and for ground truth,
//! and multiplicative-weights boosting for the Metric-to-HILL conversion.

pub mod boost;
pub mod interval;
pub mod lp;
pub mod oracle_lp;
pub mod piecewise;

use crate::dist::{Dist, Domain, EntropyParams, Joint};
use crate::distinguisher::Distinguisher;
use crate::error::{Error, Result};
use crate::rat::{rat_zero, Rat};
use num_traits::Zero;

use interval::AchievableInterval;
use piecewise::{
    allocate, clamp_cap, envelope, fixed_cap_sum, lower_curve, penalty_curve, upper_curve,
    WeightedCurve,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notion {
    Min,
    MetricUncond,
    MetricWorst,
    MetricAvg,
    ModulusAvg,
    ModulusWorst,
    HillAvg,
    Decomposable,
    Squared,
}

impl Notion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Notion::Min => "min",
            Notion::MetricUncond => "metric-uncond",
            Notion::MetricWorst => "metric-worst",
            Notion::MetricAvg => "metric-avg",
            Notion::ModulusAvg => "modulus-avg",
            Notion::ModulusWorst => "modulus-worst",
            Notion::HillAvg => "hill-avg",
            Notion::Decomposable => "decomposable",
            Notion::Squared => "squared",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "min" => Notion::Min,
            "metric-uncond" => Notion::MetricUncond,
            "metric-worst" => Notion::MetricWorst,
            "metric-avg" => Notion::MetricAvg,
            "modulus-avg" => Notion::ModulusAvg,
            "modulus-worst" => Notion::ModulusWorst,
            "hill-avg" => Notion::HillAvg,
            "decomposable" => Notion::Decomposable,
            "squared" => Notion::Squared,
            _ => return Err(Error::Scenario(format!("unknown notion {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Avg,
    Worst,
}

/// Per-z caps (and optional per-z tolerances) certifying an average-case
/// level: `sum_z P(z) caps[z] <= gamma`.
#[derive(Debug, Clone)]
pub struct BudgetAssignment {
    pub caps: Vec<Rat>,
    pub eps: Option<Vec<Rat>>,
}

#[derive(Debug, Clone)]
pub enum Witness {
    /// A class member whose exact violation is certified.
    FailingDistinguisher { index: usize, violation: Rat },
    /// A feasible (Y, Z) fooling the whole class (HILL).
    WitnessJoint(Joint),
    Budget(BudgetAssignment),
}

#[derive(Debug, Clone)]
pub struct EntropyVerdict {
    pub notion: Notion,
    pub params: EntropyParams,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Column view of a distinguisher against the X-side joint: per supported z,
/// the mass, the target a(z) = E D(X|z), and the column values.
pub(crate) struct ColumnData {
    pub mass: Vec<Rat>,
    pub targets: Vec<Rat>,
    pub columns: Vec<Vec<Rat>>,
}

pub(crate) fn column_data(j: &Joint, d: &Distinguisher) -> Result<ColumnData> {
    if j.x_domain().bits() != d.n_bits() || j.z_domain().bits() != d.m_bits() {
        return Err(Error::DomainMismatch);
    }
    let zs = j.z_domain().size();
    let xs = j.x_domain().size();
    let mut mass = Vec::with_capacity(zs);
    let mut targets = Vec::with_capacity(zs);
    let mut columns = Vec::with_capacity(zs);
    for z in 0..zs {
        let m = j.z_mass(z);
        let col = d.column(z);
        if m.is_zero() {
            targets.push(rat_zero());
        } else {
            let mut acc = rat_zero();
            for x in 0..xs {
                let v = &col[x];
                if !v.is_zero() {
                    acc += j.prob(x, z) * v;
                }
            }
            targets.push(acc / &m);
        }
        mass.push(m);
        columns.push(col);
    }
    Ok(ColumnData {
        mass,
        targets,
        columns,
    })
}

fn check_gamma(x_domain: Domain, gamma: &Rat) -> Result<Rat> {
    let min = x_domain.min_cap();
    if gamma < &min {
        return Err(Error::CapOutOfRange);
    }
    Ok(clamp_cap(gamma))
}

/// Range of E D(Y, Z) over feasible (Y, Z) sharing the Z-marginal:
/// worst-case caps every column at gamma; average-case optimizes per-z caps
/// under the budget sum_z P(z) m_z <= gamma.
pub fn metric_range(
    j: &Joint,
    d: &Distinguisher,
    gamma: &Rat,
    variant: Variant,
) -> Result<AchievableInterval> {
    let cap = check_gamma(j.x_domain(), gamma)?;
    let data = column_data(j, d)?;
    match variant {
        Variant::Worst => {
            let uppers: Vec<WeightedCurve> = data
                .columns
                .iter()
                .zip(&data.mass)
                .map(|(col, m)| WeightedCurve {
                    weight: m.clone(),
                    curve: upper_curve(col),
                })
                .collect();
            let lowers: Vec<WeightedCurve> = data
                .columns
                .iter()
                .zip(&data.mass)
                .map(|(col, m)| WeightedCurve {
                    weight: m.clone(),
                    curve: lower_curve(col),
                })
                .collect();
            Ok(AchievableInterval {
                lower: fixed_cap_sum(&lowers, &cap),
                upper: fixed_cap_sum(&uppers, &cap),
            })
        }
        Variant::Avg => {
            let uppers: Vec<WeightedCurve> = data
                .columns
                .iter()
                .zip(&data.mass)
                .map(|(col, m)| WeightedCurve {
                    weight: m.clone(),
                    curve: upper_curve(col),
                })
                .collect();
            let lowers: Vec<WeightedCurve> = data
                .columns
                .iter()
                .zip(&data.mass)
                .map(|(col, m)| WeightedCurve {
                    weight: m.clone(),
                    curve: lower_curve(col),
                })
                .collect();
            let upper = allocate(&uppers, &cap, false, false)?.value;
            let lower = allocate(&lowers, &cap, true, false)?.value;
            Ok(AchievableInterval { lower, upper })
        }
    }
}

/// Distance from E D(X, Z) to the feasible range; zero iff D cannot refute
/// the metric claim at this cap.
pub fn metric_distance(
    j: &Joint,
    d: &Distinguisher,
    gamma: &Rat,
    variant: Variant,
) -> Result<Rat> {
    let range = metric_range(j, d, gamma, variant)?;
    let target = d.expect(j)?;
    Ok(range.dist(&target))
}

#[derive(Debug, Clone)]
pub struct ModulusDetail {
    /// min over feasible Y of sum_z P(z) |a(z) - E D(Y|z)|.
    pub value: Rat,
    /// Optimal per-z caps (for Worst, all equal to the cap).
    pub assignment: Vec<Rat>,
}

/// Exact minimum of the modulus aggregate for one distinguisher.
pub fn modulus_min(
    j: &Joint,
    d: &Distinguisher,
    gamma: &Rat,
    variant: Variant,
) -> Result<ModulusDetail> {
    let cap = check_gamma(j.x_domain(), gamma)?;
    let data = column_data(j, d)?;
    let curves: Vec<WeightedCurve> = data
        .columns
        .iter()
        .zip(&data.mass)
        .zip(&data.targets)
        .map(|((col, m), a)| WeightedCurve {
            weight: m.clone(),
            curve: penalty_curve(a, col),
        })
        .collect();
    match variant {
        Variant::Worst => Ok(ModulusDetail {
            value: fixed_cap_sum(&curves, &cap),
            assignment: vec![cap.clone(); curves.len()],
        }),
        Variant::Avg => {
            let res = allocate(&curves, &cap, true, false)?;
            Ok(ModulusDetail {
                value: res.value,
                assignment: res.assignment,
            })
        }
    }
}

/// A feasible (Y, Z) witnessing the modulus optimum for `d`: per supported z
/// the projection of a(z) onto the achievable interval at the assigned cap.
pub fn modulus_witness(
    j: &Joint,
    d: &Distinguisher,
    assignment: &[Rat],
) -> Result<Joint> {
    let data = column_data(j, d)?;
    let xs = j.x_domain().size();
    let zs = j.z_domain().size();
    let mut probs = vec![rat_zero(); xs * zs];
    for z in 0..zs {
        if data.mass[z].is_zero() {
            continue;
        }
        let (_, col_dist) =
            interval::project_to_achievable(&data.columns[z], &assignment[z], &data.targets[z])?;
        for x in 0..xs {
            probs[x * zs + z] = &col_dist[x] * &data.mass[z];
        }
    }
    Joint::new(j.x_domain(), j.z_domain(), probs)
}

fn verdict_over_class<F>(
    notion: Notion,
    params: &EntropyParams,
    class: &[Distinguisher],
    mut measure: F,
) -> Result<EntropyVerdict>
where
    F: FnMut(&Distinguisher) -> Result<Rat>,
{
    for (i, d) in class.iter().enumerate() {
        let v = measure(d)?;
        if v > params.epsilon {
            return Ok(EntropyVerdict {
                notion,
                params: params.clone(),
                holds: false,
                witness: Some(Witness::FailingDistinguisher {
                    index: i,
                    violation: v,
                }),
            });
        }
    }
    Ok(EntropyVerdict {
        notion,
        params: params.clone(),
        holds: true,
        witness: None,
    })
}

/// Unconditional metric entropy of a plain distribution: the single-z
/// specialization of the conditional engines.
pub fn metric_uncond(
    x: &Dist,
    class: &[Distinguisher],
    params: &EntropyParams,
) -> Result<EntropyVerdict> {
    let j = Joint::independent(x, &Dist::uniform(Domain::new(0)?));
    verdict_over_class(Notion::MetricUncond, params, class, |d| {
        metric_distance(&j, d, &params.gamma, Variant::Worst)
    })
}

pub fn metric_cond(
    j: &Joint,
    class: &[Distinguisher],
    params: &EntropyParams,
    variant: Variant,
) -> Result<EntropyVerdict> {
    let notion = match variant {
        Variant::Worst => Notion::MetricWorst,
        Variant::Avg => Notion::MetricAvg,
    };
    verdict_over_class(notion, params, class, |d| {
        metric_distance(j, d, &params.gamma, variant)
    })
}

/// Modulus entropy is defined against deterministic boolean classes;
/// real-valued distinguishers go through the threshold conversion first.
/// The per-distinguisher optimizer [`modulus_min`] itself stays generic.
pub fn modulus_cond(
    j: &Joint,
    class: &[Distinguisher],
    params: &EntropyParams,
    variant: Variant,
) -> Result<EntropyVerdict> {
    if let Some(i) = class.iter().position(|d| !d.is_boolean()) {
        return Err(Error::Scenario(format!(
            "modulus entropy takes a boolean class; member {i} is real-valued \
             (convert it with the threshold route first)"
        )));
    }
    let notion = match variant {
        Variant::Worst => Notion::ModulusWorst,
        Variant::Avg => Notion::ModulusAvg,
    };
    verdict_over_class(notion, params, class, |d| {
        Ok(modulus_min(j, d, &params.gamma, variant)?.value)
    })
}

/// HILL average-case entropy by exact LP feasibility; returns the fooling
/// (Y, Z) as witness when it holds.
pub fn hill_cond_avg(
    j: &Joint,
    class: &[Distinguisher],
    params: &EntropyParams,
) -> Result<EntropyVerdict> {
    let cap = check_gamma(j.x_domain(), &params.gamma)?;
    let problem = oracle_lp::lp_hill_feasibility(j, class, &cap, &params.epsilon)?;
    match lp::solve(&problem)? {
        lp::LpSolution::Optimal { x, .. } => {
            let witness = oracle_lp::joint_from_q(j, &x)?;
            Ok(EntropyVerdict {
                notion: Notion::HillAvg,
                params: params.clone(),
                holds: true,
                witness: Some(Witness::WitnessJoint(witness)),
            })
        }
        lp::LpSolution::Infeasible => Ok(EntropyVerdict {
            notion: Notion::HillAvg,
            params: params.clone(),
            holds: false,
            witness: None,
        }),
        lp::LpSolution::Unbounded => unreachable!("feasibility LP cannot be unbounded"),
    }
}

#[derive(Debug, Clone)]
pub struct DecomposableOutcome {
    pub verdict: EntropyVerdict,
    pub assignment: BudgetAssignment,
    /// min over assignments of E_z eps_z(m_z).
    pub value: Rat,
}

/// Decomposable entropy: per z the simultaneous-over-class tradeoff curve
/// eps_z(m) (upper envelope of the per-D penalty curves), minimized over
/// budget assignments with E_z m_z = gamma.
pub fn decomposable_check(
    j: &Joint,
    class: &[Distinguisher],
    params: &EntropyParams,
) -> Result<DecomposableOutcome> {
    let cap = check_gamma(j.x_domain(), &params.gamma)?;
    let zs = j.z_domain().size();
    let mut per_d: Vec<ColumnData> = Vec::with_capacity(class.len());
    for d in class {
        per_d.push(column_data(j, d)?);
    }
    let mass = j.z_marginal();
    let mut curves = Vec::with_capacity(zs);
    for z in 0..zs {
        let pens: Vec<piecewise::Pl> = per_d
            .iter()
            .map(|data| penalty_curve(&data.targets[z], &data.columns[z]))
            .collect();
        let curve = if pens.is_empty() {
            piecewise::Pl::constant(j.x_domain().min_cap(), crate::rat::rat_one(), rat_zero())
        } else {
            envelope(&pens)
        };
        curves.push(WeightedCurve {
            weight: mass[z].clone(),
            curve,
        });
    }
    let res = allocate(&curves, &cap, true, true)?;
    let eps: Vec<Rat> = curves
        .iter()
        .zip(&res.assignment)
        .map(|(wc, m)| wc.curve.eval(m))
        .collect();
    let assignment = BudgetAssignment {
        caps: res.assignment.clone(),
        eps: Some(eps),
    };
    let holds = res.value <= params.epsilon;
    Ok(DecomposableOutcome {
        verdict: EntropyVerdict {
            notion: Notion::Decomposable,
            params: params.clone(),
            holds,
            witness: Some(Witness::Budget(assignment.clone())),
        },
        assignment,
        value: res.value,
    })
}

/// max over the class of sum_z P(z) eps_D(z)^2 between two joints sharing
/// their Z-marginal.
pub fn squared_advantage(
    jp: &Joint,
    jq: &Joint,
    class: &[Distinguisher],
) -> Result<Rat> {
    let mut best = rat_zero();
    for d in class {
        let prof = d.advantage_profile(jp, jq)?;
        let mut acc = rat_zero();
        for (pz, gap) in prof.z_mass.iter().zip(&prof.gaps) {
            if !pz.is_zero() && !gap.is_zero() {
                acc += pz * gap * gap;
            }
        }
        if acc > best {
            best = acc;
        }
    }
    Ok(best)
}
