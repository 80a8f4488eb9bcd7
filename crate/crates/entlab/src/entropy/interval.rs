//! Achievable expectation intervals under a max-probability cap.
//!
//! For a fixed z, the set of values E D(Y_z) over all distributions Y_z with
//! max-probability at most `cap` is a closed interval (the feasible set is
//! convex and compact, the map is linear). The upper endpoint is computed by
//! greedy waterfilling on descending D-values, the lower endpoint on
//! ascending values; ties break toward the lowest point index. For boolean
//! columns at integer k this reproduces min(1, 2^-k |D|).

use crate::error::{Error, Result};
use crate::rat::{clamp_to_interval, rat_one, rat_zero, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableInterval {
    pub lower: Rat,
    pub upper: Rat,
}

impl AchievableInterval {
    pub fn contains(&self, x: &Rat) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn dist(&self, x: &Rat) -> Rat {
        crate::rat::dist_to_interval(x, &self.lower, &self.upper)
    }
}

fn check_cap(len: usize, cap: &Rat) -> Result<()> {
    let min_cap = BigRational::new(BigInt::from(1), BigInt::from(len as i64));
    if cap < &min_cap || cap > &rat_one() {
        return Err(Error::CapOutOfRange);
    }
    Ok(())
}

/// Index order for waterfilling: by value (descending when maximizing,
/// ascending when minimizing), lowest index first on ties.
fn fill_order(values: &[Rat], maximize: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        let ord = values[a].cmp(&values[b]);
        let ord = if maximize { ord.reverse() } else { ord };
        ord.then(a.cmp(&b))
    });
    idx
}

/// Greedy mass-cap fill: the extreme value and its achieving distribution.
pub fn waterfill_extreme(values: &[Rat], cap: &Rat, maximize: bool) -> Result<(Rat, Vec<Rat>)> {
    check_cap(values.len(), cap)?;
    let mut probs = vec![rat_zero(); values.len()];
    let mut remaining = rat_one();
    let mut total = rat_zero();
    for i in fill_order(values, maximize) {
        if remaining == rat_zero() {
            break;
        }
        let take = if &remaining < cap {
            remaining.clone()
        } else {
            cap.clone()
        };
        remaining -= &take;
        total += &take * &values[i];
        probs[i] = take;
    }
    Ok((total, probs))
}

/// The achievable interval at `cap`, exact.
pub fn achievable_interval(values: &[Rat], cap: &Rat) -> Result<AchievableInterval> {
    let (upper, _) = waterfill_extreme(values, cap, true)?;
    let (lower, _) = waterfill_extreme(values, cap, false)?;
    Ok(AchievableInterval { lower, upper })
}

/// A cap-feasible distribution achieving exactly `target`, built as a mix of
/// the two extreme waterfilling distributions.
pub fn achieve_value(values: &[Rat], cap: &Rat, target: &Rat) -> Result<Vec<Rat>> {
    let (upper, up) = waterfill_extreme(values, cap, true)?;
    let (lower, lo) = waterfill_extreme(values, cap, false)?;
    if target < &lower || target > &upper {
        return Err(Error::InfeasibleWitness(format!(
            "target {} outside achievable [{}, {}]",
            target, lower, upper
        )));
    }
    if upper == lower {
        return Ok(up);
    }
    let w = (target - &lower) / (&upper - &lower);
    let wc = rat_one() - &w;
    Ok(up
        .iter()
        .zip(&lo)
        .map(|(u, l)| &w * u + &wc * l)
        .collect())
}

/// Projects `a` onto the achievable interval and returns the projected value
/// together with a cap-feasible distribution achieving it exactly.
pub fn project_to_achievable(values: &[Rat], cap: &Rat, a: &Rat) -> Result<(Rat, Vec<Rat>)> {
    let iv = achievable_interval(values, cap)?;
    let y = clamp_to_interval(a, &iv.lower, &iv.upper);
    let dist = achieve_value(values, cap, &y)?;
    Ok((y, dist))
}
