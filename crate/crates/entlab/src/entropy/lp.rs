//! Exact-rational dense simplex with Bland's rule.
//!
//! Two-phase, full tableau, no tolerances: every pivot is exact, and Bland's
//! rule (lowest-index entering column, lowest-index basic variable on ratio
//! ties) rules out cycling. Guarded to desk-scale instances; this solver is
//! the ground truth the greedy allocators are checked against.

use crate::error::{Error, Result};
use crate::rat::{rat_zero, Rat};
use num_traits::Zero;

pub const LP_VAR_GUARD: usize = 2048;
pub const LP_ROW_GUARD: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub minimize: bool,
    /// Objective over the structural variables (all x >= 0).
    pub objective: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Cmp, Rat)>,
}

#[derive(Debug, Clone)]
pub enum LpSolution {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimal(&self) -> Option<(&Rat, &[Rat])> {
        match self {
            LpSolution::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>, // m rows, each n_cols + 1 (rhs last)
    obj: Vec<Rat>,       // z_j - c_j, length n_cols + 1 (objective value last)
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = {
            let p = &self.rows[row][col];
            debug_assert!(!p.is_zero());
            p.recip()
        };
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland: entering = lowest index with z_j - c_j > 0; leaving = lowest
    /// basic-variable index among the minimum ratios. Returns false at
    /// optimality; errors as Unbounded via None ratio.
    fn step(&mut self) -> std::result::Result<bool, ()> {
        let entering = (0..self.n_cols).find(|&j| self.obj[j] > rat_zero());
        let entering = match entering {
            Some(j) => j,
            None => return Ok(false),
        };
        let mut best: Option<(Rat, usize, usize)> = None; // ratio, basis var, row
        for (i, r) in self.rows.iter().enumerate() {
            if r[entering] > rat_zero() {
                let ratio = &r[self.n_cols] / &r[entering];
                let key = (ratio, self.basis[i], i);
                if best
                    .as_ref()
                    .is_none_or(|b| (&key.0, key.1) < (&b.0, b.1))
                {
                    best = Some(key);
                }
            }
        }
        match best {
            Some((_, _, row)) => {
                self.pivot(row, entering);
                Ok(true)
            }
            None => Err(()),
        }
    }
}

pub fn solve(lp: &LpProblem) -> Result<LpSolution> {
    let n = lp.objective.len();
    if n > LP_VAR_GUARD {
        return Err(Error::LpBudgetExceeded { vars: n });
    }
    if lp.rows.len() > LP_ROW_GUARD {
        return Err(Error::LpBudgetExceeded { vars: lp.rows.len() });
    }
    for (a, _, _) in &lp.rows {
        if a.len() != n {
            return Err(Error::Scenario("LP row width mismatch".into()));
        }
    }

    let m = lp.rows.len();
    let n_slack = lp
        .rows
        .iter()
        .filter(|(_, c, _)| matches!(c, Cmp::Le | Cmp::Ge))
        .count();
    let n_art_max = m;
    let n_cols = n + n_slack + n_art_max;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let mut art_cols: Vec<usize> = Vec::new();
    let mut slack_idx = n;
    let mut art_idx = n + n_slack;

    for (i, (a, cmp, b)) in lp.rows.iter().enumerate() {
        let flip = b < &rat_zero();
        let mut row = vec![rat_zero(); n_cols + 1];
        for (j, v) in a.iter().enumerate() {
            row[j] = if flip { -v } else { v.clone() };
        }
        row[n_cols] = if flip { -b } else { b.clone() };
        let cmp = if flip {
            match cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            }
        } else {
            *cmp
        };
        match cmp {
            Cmp::Le => {
                row[slack_idx] = crate::rat::rat_one();
                basis[i] = slack_idx;
                slack_idx += 1;
            }
            Cmp::Ge => {
                row[slack_idx] = -crate::rat::rat_one();
                slack_idx += 1;
                row[art_idx] = crate::rat::rat_one();
                basis[i] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
            Cmp::Eq => {
                row[art_idx] = crate::rat::rat_one();
                basis[i] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: vec![rat_zero(); n_cols + 1],
        basis,
        n_cols,
    };

    // Phase 1: minimize the artificial sum. z_j - c_j with c = 1 on
    // artificials: sum the rows whose basic variable is artificial.
    if !art_cols.is_empty() {
        for i in 0..m {
            if art_cols.contains(&t.basis[i]) {
                let row = t.rows[i].clone();
                for (v, rv) in t.obj.iter_mut().zip(&row) {
                    *v += rv;
                }
            }
        }
        for &c in &art_cols {
            t.obj[c] = rat_zero();
        }
        loop {
            match t.step() {
                Ok(true) => continue,
                Ok(false) => break,
                Err(()) => unreachable!("phase 1 objective is bounded below by 0"),
            }
        }
        if t.obj[n_cols] != rat_zero() {
            return Ok(LpSolution::Infeasible);
        }
        // drive remaining artificial basics out or drop redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if art_cols.contains(&t.basis[i]) {
                let col = (0..n + n_slack).find(|&j| !t.rows[i][j].is_zero());
                match col {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        // neutralize artificial columns for phase 2
        for r in t.rows.iter_mut() {
            for &c in &art_cols {
                r[c] = rat_zero();
            }
        }
    }

    // Phase 2 objective row: z_j - c_j = sum_i c_B[i] a_ij - c_j.
    let sign = if lp.minimize { 1 } else { -1 };
    let cost = |j: usize| -> Rat {
        if j < n {
            if sign == 1 {
                lp.objective[j].clone()
            } else {
                -&lp.objective[j]
            }
        } else {
            rat_zero()
        }
    };
    t.obj = vec![rat_zero(); n_cols + 1];
    for j in 0..n_cols {
        t.obj[j] = -cost(j);
    }
    for i in 0..t.rows.len() {
        let cb = cost(t.basis[i]);
        if !cb.is_zero() {
            let row = t.rows[i].clone();
            for (v, rv) in t.obj.iter_mut().zip(&row) {
                if !rv.is_zero() {
                    *v += &cb * rv;
                }
            }
        }
    }
    for &c in &art_cols {
        t.obj[c] = rat_zero();
    }

    loop {
        match t.step() {
            Ok(true) => continue,
            Ok(false) => break,
            Err(()) => return Ok(LpSolution::Unbounded),
        }
    }

    let mut x = vec![rat_zero(); n];
    let mut value = rat_zero();
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if b < n {
            x[b] = t.rows[i][n_cols].clone();
            if !lp.objective[b].is_zero() {
                value += &lp.objective[b] * &x[b];
            }
        }
    }
    Ok(LpSolution::Optimal { value, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn lp(
        minimize: bool,
        objective: Vec<Rat>,
        rows: Vec<(Vec<Rat>, Cmp, Rat)>,
    ) -> LpProblem {
        LpProblem {
            minimize,
            objective,
            rows,
        }
    }

    #[test]
    fn maximize_simple() {
        // max 3x + 2y st x + y <= 4, x <= 2
        let p = lp(
            false,
            vec![rat(3, 1), rat(2, 1)],
            vec![
                (vec![rat(1, 1), rat(1, 1)], Cmp::Le, rat(4, 1)),
                (vec![rat(1, 1), rat(0, 1)], Cmp::Le, rat(2, 1)),
            ],
        );
        match solve(&p).unwrap() {
            LpSolution::Optimal { value, x } => {
                assert_eq!(value, rat(10, 1));
                assert_eq!(x, vec![rat(2, 1), rat(2, 1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge() {
        // min x + y st x + 2y = 3, x >= 1
        let p = lp(
            true,
            vec![rat(1, 1), rat(1, 1)],
            vec![
                (vec![rat(1, 1), rat(2, 1)], Cmp::Eq, rat(3, 1)),
                (vec![rat(1, 1), rat(0, 1)], Cmp::Ge, rat(1, 1)),
            ],
        );
        match solve(&p).unwrap() {
            LpSolution::Optimal { value, x } => {
                assert_eq!(value, rat(2, 1));
                assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let p = lp(
            true,
            vec![rat(1, 1)],
            vec![
                (vec![rat(1, 1)], Cmp::Ge, rat(2, 1)),
                (vec![rat(1, 1)], Cmp::Le, rat(1, 1)),
            ],
        );
        assert!(matches!(solve(&p).unwrap(), LpSolution::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let p = lp(
            false,
            vec![rat(1, 1)],
            vec![(vec![rat(1, 1)], Cmp::Ge, rat(1, 1))],
        );
        assert!(matches!(solve(&p).unwrap(), LpSolution::Unbounded));
    }

    #[test]
    fn degenerate_does_not_cycle() {
        // classic Beale-style degeneracy, rational coefficients
        let p = lp(
            true,
            vec![rat(-3, 4), rat(150, 1), rat(-1, 50), rat(6, 1)],
            vec![
                (
                    vec![rat(1, 4), rat(-60, 1), rat(-1, 25), rat(9, 1)],
                    Cmp::Le,
                    rat(0, 1),
                ),
                (
                    vec![rat(1, 2), rat(-90, 1), rat(-1, 50), rat(3, 1)],
                    Cmp::Le,
                    rat(0, 1),
                ),
                (vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1)], Cmp::Le, rat(1, 1)),
            ],
        );
        match solve(&p).unwrap() {
            LpSolution::Optimal { value, .. } => assert_eq!(value, rat(-1, 20)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_normalization() {
        // min x st -x <= -2  (i.e. x >= 2)
        let p = lp(
            true,
            vec![rat(1, 1)],
            vec![(vec![rat(-1, 1)], Cmp::Le, rat(-2, 1))],
        );
        match solve(&p).unwrap() {
            LpSolution::Optimal { value, x } => {
                assert_eq!(value, rat(2, 1));
                assert_eq!(x[0], rat(2, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn guard_fires() {
        let p = lp(true, vec![rat(0, 1); LP_VAR_GUARD + 1], vec![]);
        assert!(matches!(solve(&p), Err(Error::LpBudgetExceeded { .. })));
    }
}
