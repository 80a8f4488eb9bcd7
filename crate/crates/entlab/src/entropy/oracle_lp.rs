//! LP formulations of the average-case optimizations.
//!
//! These are the straight, unoptimized encodings over per-point witness
//! variables q(x,z) and per-z caps m_z. They serve two roles: the HILL
//! feasibility and game-value programs are engine functionality, and the
//! metric/modulus/decomposable programs are the independent oracle that the
//! greedy breakpoint allocators are checked against.
//!
//! Shared variable layout: q(x,z) at index x*2^m + z, then m_z. Feasibility
//! rows: column sums equal the Z-marginal, q(x,z) <= P(z) m_z, the cap
//! budget sum_z P(z) m_z <= gamma, and m_z <= 1.

use super::lp::{Cmp, LpProblem};
use crate::dist::Joint;
use crate::distinguisher::Distinguisher;
use crate::error::{Error, Result};
use crate::rat::{rat_one, rat_zero, Rat};
use num_traits::Zero;

struct Dims {
    xs: usize,
    zs: usize,
    nq: usize,
}

fn dims(j: &Joint) -> Dims {
    let xs = j.x_domain().size();
    let zs = j.z_domain().size();
    Dims { xs, zs, nq: xs * zs }
}

/// Core feasibility rows over `n_vars` total variables where q occupies
/// [q0, q0 + nq) and m_z occupies [m0, m0 + zs).
fn feasibility_rows(
    j: &Joint,
    n_vars: usize,
    q0: usize,
    m0: usize,
    rows: &mut Vec<(Vec<Rat>, Cmp, Rat)>,
) {
    let d = dims(j);
    let zm = j.z_marginal();
    for z in 0..d.zs {
        let mut a = vec![rat_zero(); n_vars];
        for x in 0..d.xs {
            a[q0 + x * d.zs + z] = rat_one();
        }
        rows.push((a, Cmp::Eq, zm[z].clone()));
    }
    for x in 0..d.xs {
        for z in 0..d.zs {
            let mut a = vec![rat_zero(); n_vars];
            a[q0 + x * d.zs + z] = rat_one();
            a[m0 + z] = -&zm[z];
            rows.push((a, Cmp::Le, rat_zero()));
        }
    }
    let mut budget = vec![rat_zero(); n_vars];
    for z in 0..d.zs {
        budget[m0 + z] = zm[z].clone();
    }
    rows.push((budget, Cmp::Le, rat_zero()));
    // caller fixes the rhs of the budget row afterwards
    for z in 0..d.zs {
        let mut a = vec![rat_zero(); n_vars];
        a[m0 + z] = rat_one();
        rows.push((a, Cmp::Le, rat_one()));
    }
}

fn with_budget(
    j: &Joint,
    n_vars: usize,
    q0: usize,
    m0: usize,
    gamma: &Rat,
) -> Vec<(Vec<Rat>, Cmp, Rat)> {
    let d = dims(j);
    let mut rows = Vec::new();
    feasibility_rows(j, n_vars, q0, m0, &mut rows);
    let budget_row = d.zs + d.nq;
    rows[budget_row].2 = gamma.clone();
    rows
}

/// Extracts the witness joint from an LP solution whose first block is q.
pub fn joint_from_q(j: &Joint, x: &[Rat]) -> Result<Joint> {
    let d = dims(j);
    if x.len() < d.nq {
        return Err(Error::Scenario("LP solution too short".into()));
    }
    Joint::new(j.x_domain(), j.z_domain(), x[..d.nq].to_vec())
}

/// Feasibility program for HILL average-case entropy: is there one (Y, Z)
/// with budgeted caps fooling the whole class within eps?
pub fn lp_hill_feasibility(
    j: &Joint,
    class: &[Distinguisher],
    gamma: &Rat,
    eps: &Rat,
) -> Result<LpProblem> {
    let d = dims(j);
    let n_vars = d.nq + d.zs;
    let mut rows = with_budget(j, n_vars, 0, d.nq, gamma);
    for dst in class {
        let target = dst.expect(j)?;
        let mut a = vec![rat_zero(); n_vars];
        for x in 0..d.xs {
            for z in 0..d.zs {
                a[x * d.zs + z] = dst.value(x, z).clone();
            }
        }
        rows.push((a.clone(), Cmp::Ge, &target - eps));
        rows.push((a, Cmp::Le, &target + eps));
    }
    Ok(LpProblem {
        minimize: true,
        objective: vec![rat_zero(); n_vars],
        rows,
    })
}

/// Game-value program: minimize u such that some feasible (Y, Z) keeps
/// every class member's signed gap within [-u, u]. The optimum is the
/// zero-sum game value min_Y max_D |E D(X,Z) - E D(Y,Z)|.
pub fn lp_game_value(j: &Joint, class: &[Distinguisher], gamma: &Rat) -> Result<LpProblem> {
    let d = dims(j);
    let n_vars = d.nq + d.zs + 1;
    let u = n_vars - 1;
    let mut rows = with_budget(j, n_vars, 0, d.nq, gamma);
    for dst in class {
        let target = dst.expect(j)?;
        let mut a = vec![rat_zero(); n_vars];
        for x in 0..d.xs {
            for z in 0..d.zs {
                a[x * d.zs + z] = dst.value(x, z).clone();
            }
        }
        a[u] = rat_one();
        rows.push((a.clone(), Cmp::Ge, target.clone())); // u >= target - s
        let mut b: Vec<Rat> = a.iter().map(|v| -v).collect();
        b[u] = rat_one();
        rows.push((b, Cmp::Ge, -target)); // u >= s - target
    }
    let mut objective = vec![rat_zero(); n_vars];
    objective[u] = rat_one();
    Ok(LpProblem {
        minimize: true,
        objective,
        rows,
    })
}

/// Oracle for the metric-avg allocator: extremum of E D(Y, Z) over the
/// budgeted feasible set.
pub fn lp_metric_avg(
    j: &Joint,
    dst: &Distinguisher,
    gamma: &Rat,
    maximize: bool,
) -> LpProblem {
    let d = dims(j);
    let n_vars = d.nq + d.zs;
    let rows = with_budget(j, n_vars, 0, d.nq, gamma);
    let mut objective = vec![rat_zero(); n_vars];
    for x in 0..d.xs {
        for z in 0..d.zs {
            objective[x * d.zs + z] = dst.value(x, z).clone();
        }
    }
    LpProblem {
        minimize: !maximize,
        objective,
        rows,
    }
}

/// Oracle for the modulus-avg allocator: minimize sum_z P(z) |a(z) - E D(Y|z)|
/// via per-z absolute-value variables t_z >= |c_z - s_z| where
/// c_z = sum_x P(x,z) D(x,z) and s_z = sum_x q(x,z) D(x,z).
pub fn lp_modulus_avg(j: &Joint, dst: &Distinguisher, gamma: &Rat) -> LpProblem {
    let d = dims(j);
    let n_vars = d.nq + d.zs + d.zs;
    let t0 = d.nq + d.zs;
    let mut rows = with_budget(j, n_vars, 0, d.nq, gamma);
    for z in 0..d.zs {
        let mut c = rat_zero();
        for x in 0..d.xs {
            let v = dst.value(x, z);
            if !v.is_zero() {
                c += j.prob(x, z) * v;
            }
        }
        let mut a = vec![rat_zero(); n_vars];
        for x in 0..d.xs {
            a[x * d.zs + z] = dst.value(x, z).clone();
        }
        a[t0 + z] = rat_one();
        rows.push((a.clone(), Cmp::Ge, c.clone())); // t + s >= c
        let mut b: Vec<Rat> = a.iter().map(|v| -v).collect();
        b[t0 + z] = rat_one();
        rows.push((b, Cmp::Ge, -c)); // t - s >= -c
    }
    let mut objective = vec![rat_zero(); n_vars];
    for z in 0..d.zs {
        objective[t0 + z] = rat_one();
    }
    LpProblem {
        minimize: true,
        objective,
        rows,
    }
}

/// Oracle for the decomposable allocator: shared per-z caps m_z, one
/// witness block q^d per class member, and per-z envelopes
/// e_z >= |c^d_z - s^d_z| for every d. Minimizes sum_z e_z.
pub fn lp_decomposable(j: &Joint, class: &[Distinguisher], gamma: &Rat) -> LpProblem {
    let d = dims(j);
    let k = class.len();
    let m0 = k * d.nq;
    let e0 = m0 + d.zs;
    let n_vars = e0 + d.zs;
    let zm = j.z_marginal();
    let mut rows: Vec<(Vec<Rat>, Cmp, Rat)> = Vec::new();
    for (di, dst) in class.iter().enumerate() {
        let q0 = di * d.nq;
        for z in 0..d.zs {
            let mut a = vec![rat_zero(); n_vars];
            for x in 0..d.xs {
                a[q0 + x * d.zs + z] = rat_one();
            }
            rows.push((a, Cmp::Eq, zm[z].clone()));
        }
        for x in 0..d.xs {
            for z in 0..d.zs {
                let mut a = vec![rat_zero(); n_vars];
                a[q0 + x * d.zs + z] = rat_one();
                a[m0 + z] = -&zm[z];
                rows.push((a, Cmp::Le, rat_zero()));
            }
        }
        for z in 0..d.zs {
            let mut c = rat_zero();
            for x in 0..d.xs {
                let v = dst.value(x, z);
                if !v.is_zero() {
                    c += j.prob(x, z) * v;
                }
            }
            let mut a = vec![rat_zero(); n_vars];
            for x in 0..d.xs {
                a[q0 + x * d.zs + z] = dst.value(x, z).clone();
            }
            a[e0 + z] = rat_one();
            rows.push((a.clone(), Cmp::Ge, c.clone()));
            let mut b: Vec<Rat> = a.iter().map(|v| -v).collect();
            b[e0 + z] = rat_one();
            rows.push((b, Cmp::Ge, -c));
        }
    }
    let mut budget = vec![rat_zero(); n_vars];
    for z in 0..d.zs {
        budget[m0 + z] = zm[z].clone();
    }
    rows.push((budget, Cmp::Le, gamma.clone()));
    for z in 0..d.zs {
        let mut a = vec![rat_zero(); n_vars];
        a[m0 + z] = rat_one();
        rows.push((a, Cmp::Le, rat_one()));
    }
    let mut objective = vec![rat_zero(); n_vars];
    for z in 0..d.zs {
        objective[e0 + z] = rat_one();
    }
    LpProblem {
        minimize: true,
        objective,
        rows,
    }
}
