//! Tightness demo: a function's output, given its input, has almost no
//! metric entropy against the trivial recompute-and-compare distinguisher.
//!
//! For f on m bits and the joint (f(U_m), U_m), the distinguisher
//! D(y, x) = [f(x) = y] accepts the real pair always, while any (Y, X)
//! with average cap 2^-3 can put little mass on the single accepted point
//! per column. The exact LP/greedy minimum of the advantage is certified
//! to be at least 1/12, and the classic split into a 2/3-mass set of good
//! columns with per-column gap 5/8 is reproduced on the worst witness.

use crate::circuit::Circuit;
use crate::dist::{Domain, Joint};
use crate::distinguisher::Distinguisher;
use crate::entropy::lp::{solve, LpSolution};
use crate::entropy::oracle_lp::{joint_from_q, lp_metric_avg};
use crate::entropy::piecewise::{allocate, upper_curve, WeightedCurve};
use crate::entropy::column_data;
use crate::error::{Error, Result};
use crate::rat::{rat, rat_one, rat_zero, Rat};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct TightnessReport {
    pub n_bits: u32,
    pub m_bits: u32,
    pub injective: bool,
    /// Exact min over feasible (Y, X) at avg cap 1/8 of the advantage.
    pub min_advantage: Rat,
    /// 1/12.
    pub bound: Rat,
    /// Greedy and LP optima agree exactly.
    pub lp_agrees: bool,
    /// Mass of x with worst-witness column cap at most 3/8 (>= 2/3).
    pub good_mass: Rat,
    /// Minimum per-good-x gap (>= 5/8).
    pub per_good_x_gap: Rat,
    pub transcript: Vec<String>,
}

/// Builds the joint (f(U_m), U_m) and the recompute distinguisher, then
/// certifies the advantage lower bound with both engines.
pub fn tightness_demo(f_outputs: &[Circuit]) -> Result<TightnessReport> {
    if f_outputs.is_empty() {
        return Err(Error::Scenario("f needs at least one output bit".into()));
    }
    let m = f_outputs[0].n_x();
    if f_outputs.iter().any(|c| c.n_x() != m || c.m_z() != 0) {
        return Err(Error::DomainMismatch);
    }
    let n = f_outputs.len() as u32;
    let x_domain = Domain::new(n)?;
    let z_domain = Domain::new(m)?;
    let inputs = 1usize << m;
    let outputs = 1usize << n;

    // tabulate f
    let mut table = Vec::with_capacity(inputs);
    for u in 0..inputs {
        let mut y = 0usize;
        for (bit, c) in f_outputs.iter().enumerate() {
            if c.eval(u, 0) {
                y |= 1 << bit;
            }
        }
        table.push(y);
    }
    let mut seen = std::collections::HashSet::new();
    let injective = table.iter().all(|y| seen.insert(*y));

    // joint (f(U_m), U_m): P(y, u) = 2^-m [y = f(u)]
    let w = crate::rat::pow2_inv(m);
    let mut probs = vec![rat_zero(); outputs * inputs];
    for (u, &y) in table.iter().enumerate() {
        probs[y * inputs + u] = w.clone();
    }
    let j = Joint::new(x_domain, z_domain, probs)?;

    // D(y, u) = [f(u) = y]
    let mut bits = vec![false; outputs * inputs];
    for (u, &y) in table.iter().enumerate() {
        bits[y * inputs + u] = true;
    }
    let d = Distinguisher::from_bool_table(n, m, &bits, f_outputs.iter().map(|c| c.size()).sum())?;

    let gamma = rat(1, 8); // avg cap 2^-3
    let target = d.expect(&j)?; // = 1

    // greedy maximum of E D(Y, X) under the budget
    let data = column_data(&j, &d)?;
    let curves: Vec<WeightedCurve> = data
        .columns
        .iter()
        .zip(&data.mass)
        .map(|(col, mass)| WeightedCurve {
            weight: mass.clone(),
            curve: upper_curve(col),
        })
        .collect();
    let greedy = allocate(&curves, &gamma, false, false)?;
    let min_advantage = &target - &greedy.value;

    // LP oracle + the worst witness
    let lp = solve(&lp_metric_avg(&j, &d, &gamma, true))?;
    let (lp_value, witness) = match lp {
        LpSolution::Optimal { value, x } => (value, joint_from_q(&j, &x)?),
        other => return Err(Error::Scenario(format!("unexpected LP outcome {other:?}"))),
    };
    let lp_agrees = lp_value == greedy.value;

    // the classic split on the worst witness: columns with cap <= 3/8
    let split_cap = rat(3, 8);
    let mut good_mass = rat_zero();
    let mut per_good_x_gap: Option<Rat> = None;
    for u in 0..inputs {
        let mass = witness.z_mass(u);
        if mass.is_zero() {
            continue;
        }
        let col = witness.condition(u)?;
        if col.guess_prob() <= split_cap {
            good_mass += &mass;
            // per-column gap: D accepts only y = f(u)
            let gap = rat_one() - col.prob(table[u]);
            if per_good_x_gap.as_ref().is_none_or(|g| &gap < g) {
                per_good_x_gap = Some(gap);
            }
        }
    }
    let per_good_x_gap = per_good_x_gap.unwrap_or_else(rat_one);

    let bound = rat(1, 12);
    let transcript = vec![
        format!("min advantage {} (greedy), {} (LP)", min_advantage, lp_value),
        format!(
            "good mass {} >= 2/3, per-good-x gap {} >= 5/8, bound 2/3 * 5/8 - 1/3 = 1/12",
            good_mass, per_good_x_gap
        ),
    ];
    Ok(TightnessReport {
        n_bits: n,
        m_bits: m,
        injective,
        min_advantage,
        bound,
        lp_agrees,
        good_mass,
        per_good_x_gap,
        transcript,
    })
}

/// The toy expanding function used by the verification suite:
/// (x0, x1) -> (x0, x1, x0 and x1, x0 xor x1), injective on 2 bits.
pub fn toy_expanding_function() -> Vec<Circuit> {
    vec![
        Circuit::parse_with_arity("x0", 2, 0).unwrap(),
        Circuit::parse_with_arity("x1", 2, 0).unwrap(),
        Circuit::parse_with_arity("and(x0, x1)", 2, 0).unwrap(),
        Circuit::parse_with_arity("xor(x0, x1)", 2, 0).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_function_report() {
        let report = tightness_demo(&toy_expanding_function()).unwrap();
        assert!(report.injective);
        assert_eq!(report.n_bits, 4);
        assert_eq!(report.m_bits, 2);
        assert!(report.lp_agrees);
        assert!(report.min_advantage >= report.bound);
        assert!(report.good_mass >= rat(2, 3));
        assert!(report.per_good_x_gap >= rat(5, 8));
    }

    #[test]
    fn exact_min_advantage_for_injective_f() {
        // with avg caps the best Y spends its whole budget on the accepted
        // points: max E D(Y, X) = 1/8, so the min advantage is 7/8
        let report = tightness_demo(&toy_expanding_function()).unwrap();
        assert_eq!(report.min_advantage, rat(7, 8));
    }
}
