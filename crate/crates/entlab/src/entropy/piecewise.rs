//! Piecewise-linear curves over the cap domain [2^-n, 1] and the greedy
//! breakpoint allocators used by the average-case engines.
//!
//! The upper endpoint of the achievable interval, as a function of the cap,
//! is concave piecewise-linear with breakpoints at caps 1/r (value: average
//! of the top r column values); the lower endpoint is convex. Per-z penalty
//! curves (distance from a target to the interval) are convex non-increasing.
//! Sums of such curves under a mass budget are optimized exactly by sorting
//! segment slopes: marginal gain per unit of budget is the segment slope
//! itself, independent of the z-weight, so a single global sweep is optimal
//! for concave maximization and convex minimization alike.

use crate::error::Result;
use crate::rat::{rat_one, rat_zero, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// A continuous piecewise-linear function given by breakpoints with strictly
/// increasing abscissae. Defined on [first.0, last.0].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pl {
    pts: Vec<(Rat, Rat)>,
}

impl Pl {
    pub fn new(pts: Vec<(Rat, Rat)>) -> Self {
        debug_assert!(pts.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(!pts.is_empty());
        Pl { pts }
    }

    pub fn constant(lo: Rat, hi: Rat, v: Rat) -> Self {
        Pl::new(vec![(lo, v.clone()), (hi, v)])
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.pts[0].0, &self.pts[self.pts.len() - 1].0)
    }

    pub fn eval(&self, m: &Rat) -> Rat {
        let pts = &self.pts;
        if m <= &pts[0].0 {
            return pts[0].1.clone();
        }
        if m >= &pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1.clone();
        }
        for w in pts.windows(2) {
            if m <= &w[1].0 {
                let (m0, v0) = &w[0];
                let (m1, v1) = &w[1];
                if m == m0 {
                    return v0.clone();
                }
                return v0 + (v1 - v0) * (m - m0) / (m1 - m0);
            }
        }
        unreachable!()
    }

    /// Resamples onto a grid that must include this curve's domain ends.
    fn on_grid(&self, grid: &[Rat]) -> Vec<(Rat, Rat)> {
        grid.iter().map(|m| (m.clone(), self.eval(m))).collect()
    }
}

fn merge_grids(a: &Pl, b: &Pl) -> Vec<Rat> {
    let mut grid: Vec<Rat> = a
        .pts
        .iter()
        .map(|(m, _)| m.clone())
        .chain(b.pts.iter().map(|(m, _)| m.clone()))
        .collect();
    grid.sort();
    grid.dedup();
    grid
}

/// Pointwise max of two piecewise-linear curves on a shared domain, with
/// crossing points inserted so the result is exactly piecewise-linear.
pub fn envelope2(a: &Pl, b: &Pl) -> Pl {
    let grid = merge_grids(a, b);
    let av = a.on_grid(&grid);
    let bv = b.on_grid(&grid);
    let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(grid.len() + 4);
    for i in 0..grid.len() {
        if i > 0 {
            // insert an interior crossing if the difference changes sign
            let d0 = &av[i - 1].1 - &bv[i - 1].1;
            let d1 = &av[i].1 - &bv[i].1;
            if (d0 > rat_zero() && d1 < rat_zero()) || (d0 < rat_zero() && d1 > rat_zero()) {
                let span = &grid[i] - &grid[i - 1];
                let t = &d0 / (&d0 - &d1);
                let mx = &grid[i - 1] + &span * &t;
                let val = a.eval(&mx);
                pts.push((mx, val));
            }
        }
        let v = if av[i].1 >= bv[i].1 {
            av[i].1.clone()
        } else {
            bv[i].1.clone()
        };
        pts.push((grid[i].clone(), v));
    }
    Pl::new(pts)
}

/// Upper envelope (pointwise max) of several curves.
pub fn envelope(curves: &[Pl]) -> Pl {
    let mut it = curves.iter();
    let first = it.next().expect("envelope of empty set").clone();
    it.fold(first, |acc, c| envelope2(&acc, c))
}

/// Caps 1/r intersected with [2^-n, 1]: the breakpoint grid for value
/// curves over a column of 2^n points.
fn cap_grid(len: usize) -> Vec<Rat> {
    (1..=len)
        .rev()
        .map(|r| BigRational::new(BigInt::from(1), BigInt::from(r as i64)))
        .collect()
}

/// f(m) = max E D(Y) over caps m: concave, non-decreasing. Breakpoint at
/// 1/r holds the average of the r largest values.
pub fn upper_curve(values: &[Rat]) -> Pl {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    curve_from_sorted(&sorted)
}

/// g(m) = min E D(Y) over caps m: convex, non-increasing.
pub fn lower_curve(values: &[Rat]) -> Pl {
    let mut sorted = values.to_vec();
    sorted.sort();
    curve_from_sorted(&sorted)
}

fn curve_from_sorted(sorted: &[Rat]) -> Pl {
    let len = sorted.len();
    let grid = cap_grid(len);
    let mut prefix = rat_zero();
    let mut by_r: Vec<Rat> = Vec::with_capacity(len);
    for (r, v) in sorted.iter().enumerate() {
        prefix += v;
        let r = r + 1;
        by_r.push(&prefix / BigRational::from_integer(BigInt::from(r as i64)));
    }
    // grid runs r = len .. 1
    let pts = grid
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let r = len - i;
            (m, by_r[r - 1].clone())
        })
        .collect();
    Pl::new(pts)
}

/// max(0, f) with zero-crossings inserted.
pub fn clip_nonneg(f: &Pl) -> Pl {
    let zero = Pl::constant(f.pts[0].0.clone(), f.pts[f.pts.len() - 1].0.clone(), rat_zero());
    envelope2(f, &zero)
}

/// Penalty curve: distance from target `a` to the achievable interval as a
/// function of the cap. Convex, non-increasing, eventually zero.
pub fn penalty_curve(a: &Rat, values: &[Rat]) -> Pl {
    let up = upper_curve(values);
    let lo = lower_curve(values);
    // a - upper(m) and lower(m) - a are both convex and non-increasing;
    // at most one is ever positive.
    let above = Pl::new(
        up.pts
            .iter()
            .map(|(m, v)| (m.clone(), a - v))
            .collect(),
    );
    let below = Pl::new(
        lo.pts
            .iter()
            .map(|(m, v)| (m.clone(), v - a))
            .collect(),
    );
    clip_nonneg(&envelope2(&above, &below))
}

/// One weighted curve per z. Zero-weight entries are ignored by the
/// allocators and get the minimum cap in the returned assignment.
pub struct WeightedCurve {
    pub weight: Rat,
    pub curve: Pl,
}

#[derive(Debug, Clone)]
pub struct AllocResult {
    /// Optimal sum_z weight_z * curve_z(m_z).
    pub value: Rat,
    /// Per-z caps; entries start at the curve's domain minimum.
    pub assignment: Vec<Rat>,
}

/// Exact greedy allocation of the cap budget sum_z weight_z * m_z <= budget.
///
/// With `minimize` the curves must be convex (slopes non-decreasing per z);
/// otherwise concave (slopes non-increasing per z). `spend_all` keeps
/// allocating flat or unhelpful segments until the budget is exhausted,
/// which is used when the caller needs an equality budget.
pub fn allocate(
    curves: &[WeightedCurve],
    budget: &Rat,
    minimize: bool,
    spend_all: bool,
) -> Result<AllocResult> {
    let mut assignment: Vec<Rat> = Vec::with_capacity(curves.len());
    let mut value = rat_zero();
    // base: everything at the domain minimum
    let mut remaining = budget.clone();
    for wc in curves {
        let (lo, _) = wc.curve.domain();
        assignment.push(lo.clone());
        if wc.weight.is_zero() {
            continue;
        }
        value += &wc.weight * wc.curve.eval(lo);
        remaining -= &wc.weight * lo;
    }
    if remaining < rat_zero() {
        return Err(crate::error::Error::CapOutOfRange);
    }

    // segments: (slope, z, seg index, m0, m1, v0, v1)
    struct Seg {
        slope: Rat,
        z: usize,
        idx: usize,
        m0: Rat,
        m1: Rat,
        v0: Rat,
        v1: Rat,
    }
    let mut segs: Vec<Seg> = Vec::new();
    for (z, wc) in curves.iter().enumerate() {
        if wc.weight.is_zero() {
            continue;
        }
        for (idx, w) in wc.curve.points().windows(2).enumerate() {
            let (m0, v0) = &w[0];
            let (m1, v1) = &w[1];
            segs.push(Seg {
                slope: (v1 - v0) / (m1 - m0),
                z,
                idx,
                m0: m0.clone(),
                m1: m1.clone(),
                v0: v0.clone(),
                v1: v1.clone(),
            });
        }
    }
    // best marginal effect first: largest slope when maximizing, most
    // negative when minimizing; deterministic tie-break by (z, segment)
    segs.sort_by(|a, b| {
        let ord = if minimize {
            a.slope.cmp(&b.slope)
        } else {
            b.slope.cmp(&a.slope)
        };
        ord.then(a.z.cmp(&b.z)).then(a.idx.cmp(&b.idx))
    });

    for seg in &segs {
        if remaining.is_zero() {
            break;
        }
        let helpful = if minimize {
            seg.slope < rat_zero()
        } else {
            seg.slope > rat_zero()
        };
        if !helpful && !spend_all {
            break;
        }
        let w = &curves[seg.z].weight;
        let full_cost = w * (&seg.m1 - &seg.m0);
        if full_cost <= remaining {
            remaining -= &full_cost;
            value += w * (&seg.v1 - &seg.v0);
            assignment[seg.z] = seg.m1.clone();
        } else {
            let dm = &remaining / w;
            assignment[seg.z] = &seg.m0 + &dm;
            value += w * &seg.slope * dm;
            remaining = rat_zero();
        }
    }
    Ok(AllocResult { value, assignment })
}

/// Convenience: per-z caps all fixed to `cap` (the worst-case variants).
pub fn fixed_cap_sum(curves: &[WeightedCurve], cap: &Rat) -> Rat {
    let mut acc = rat_zero();
    for wc in curves {
        if wc.weight.is_zero() {
            continue;
        }
        acc += &wc.weight * wc.curve.eval(cap);
    }
    acc
}

/// The effective cap for a column: min(1, cap), never below 2^-n.
pub fn clamp_cap(cap: &Rat) -> Rat {
    if cap > &rat_one() {
        rat_one()
    } else {
        cap.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::interval::achievable_interval;
    use crate::rat::rat;

    #[test]
    fn curves_match_interval_endpoints() {
        let values = vec![rat(1, 1), rat(2, 3), rat(1, 5), rat(0, 1)];
        let up = upper_curve(&values);
        let lo = lower_curve(&values);
        for cap in [rat(1, 4), rat(2, 7), rat(1, 3), rat(5, 12), rat(1, 2), rat(1, 1)] {
            let iv = achievable_interval(&values, &cap).unwrap();
            assert_eq!(up.eval(&cap), iv.upper, "cap {cap}");
            assert_eq!(lo.eval(&cap), iv.lower, "cap {cap}");
        }
    }

    #[test]
    fn penalty_matches_interval_distance() {
        let values = vec![rat(1, 1), rat(1, 2), rat(1, 4), rat(0, 1)];
        for a in [rat(0, 1), rat(1, 8), rat(9, 16), rat(1, 1)] {
            let pen = penalty_curve(&a, &values);
            for cap in [rat(1, 4), rat(3, 10), rat(1, 2), rat(7, 8), rat(1, 1)] {
                let iv = achievable_interval(&values, &cap).unwrap();
                assert_eq!(pen.eval(&cap), iv.dist(&a), "a {a} cap {cap}");
            }
        }
    }

    #[test]
    fn envelope_is_pointwise_max() {
        let f = Pl::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))]);
        let g = Pl::new(vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))]);
        let e = envelope2(&f, &g);
        // crossing at 1/2 inserted
        assert_eq!(e.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(e.eval(&rat(1, 4)), rat(3, 4));
        assert_eq!(e.eval(&rat(3, 4)), rat(3, 4));
        assert!(e.points().iter().any(|(m, _)| m == &rat(1, 2)));
    }

    #[test]
    fn allocate_prefers_steep_segments() {
        // two columns: one with a high-value point, one flat
        let sharp = upper_curve(&[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        let flat = upper_curve(&vec![rat(1, 4); 4]);
        let curves = vec![
            WeightedCurve {
                weight: rat(1, 2),
                curve: sharp,
            },
            WeightedCurve {
                weight: rat(1, 2),
                curve: flat,
            },
        ];
        // budget gamma = 1/2: best is to raise the sharp column's cap to
        // m = 3/4 (cost 1/2 * (3/4 - 1/4) extra) and leave the flat one
        let res = allocate(&curves, &rat(1, 2), false, false).unwrap();
        assert_eq!(res.assignment[0], rat(3, 4));
        assert_eq!(res.assignment[1], rat(1, 4));
        // value = 1/2 * 3/4 + 1/2 * 1/4 = 1/2
        assert_eq!(res.value, rat(1, 2));
    }

    #[test]
    fn allocate_budget_too_small_errors() {
        let c = upper_curve(&[rat(1, 1), rat(0, 1)]);
        let curves = vec![WeightedCurve {
            weight: rat(1, 1),
            curve: c,
        }];
        assert!(allocate(&curves, &rat(1, 4), false, false).is_err());
    }

    #[test]
    fn spend_all_exhausts_budget() {
        let c = penalty_curve(&rat(0, 1), &[rat(0, 1), rat(0, 1)]); // identically zero
        let curves = vec![WeightedCurve {
            weight: rat(1, 1),
            curve: c,
        }];
        let res = allocate(&curves, &rat(7, 8), true, true).unwrap();
        assert_eq!(res.assignment[0], rat(7, 8));
        assert_eq!(res.value, rat(0, 1));
    }
}
