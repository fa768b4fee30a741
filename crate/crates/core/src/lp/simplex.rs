//! Two-phase primal simplex over exact rationals.
//!
//! Dense tableau, Bland's anti-cycling rule for both the entering and the
//! leaving variable, so termination is guaranteed and every reported
//! optimum is exact. Free variables are split into positive and negative
//! parts internally.

use crate::{Error, Rational, Result};
use num::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct LinearProgramSpec {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    /// One flag per variable; false means the variable is free.
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub status: SolveStatus,
    /// Exact optimum in the program's own sense; None unless Optimal.
    pub optimum: Option<Rational>,
    /// Optimal point over the original variables; None unless Optimal.
    pub point: Option<Vec<Rational>>,
    pub pivot_count: u64,
}

struct Tableau {
    /// rows[i] = constraint row, cols structural..slack..artificial, then rhs
    rows: Vec<Vec<Rational>>,
    /// reduced-cost row; last entry is minus the current objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// first artificial column, also the eligibility cutoff in phase 2
    art_start: usize,
    pivots: u64,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Bland's rule: smallest eligible column with negative reduced cost,
    /// then the ratio test breaking ties by smallest basis variable.
    fn run(&mut self, eligible: usize) -> Result<bool> {
        loop {
            let rhs = self.width();
            let Some(col) = (0..eligible).find(|&j| self.cost[j].is_negative()) else {
                return Ok(true); // optimal
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[rhs] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return Ok(false); // unbounded in the entering direction
            };
            self.pivot(row, col);
        }
    }
}

/// Solves the program, reporting exact status, optimum, point, and the
/// number of simplex pivots performed.
pub fn simplex_solve(spec: &LinearProgramSpec) -> Result<SimplexSolution> {
    let n = spec.objective.len();
    if spec.nonneg.len() != n {
        return Err(Error::domain(format!(
            "{} nonnegativity flags for {n} variables",
            spec.nonneg.len()
        )));
    }
    for (i, c) in spec.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(Error::domain(format!(
                "constraint {i} has {} coefficients for {n} variables",
                c.coeffs.len()
            )));
        }
    }

    // Column map: every variable gets a positive part; free ones also get a
    // negated copy.
    let mut pos_col = vec![0usize; n];
    let mut neg_col = vec![None; n];
    let mut cols = 0usize;
    for j in 0..n {
        pos_col[j] = cols;
        cols += 1;
        if !spec.nonneg[j] {
            neg_col[j] = Some(cols);
            cols += 1;
        }
    }
    let structural = cols;

    let minimize_obj: Vec<Rational> = match spec.sense {
        Sense::Minimize => spec.objective.clone(),
        Sense::Maximize => spec.objective.iter().map(|c| -c).collect(),
    };

    let m = spec.constraints.len();
    let mut slack_count = 0usize;
    let mut art_count = 0usize;
    // (relation after rhs normalization)
    let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
    for c in &spec.constraints {
        let mut coeffs = vec![Rational::zero(); structural];
        for j in 0..n {
            coeffs[pos_col[j]] = c.coeffs[j].clone();
            if let Some(nc) = neg_col[j] {
                coeffs[nc] = -c.coeffs[j].clone();
            }
        }
        let mut relation = c.relation;
        let mut rhs = c.rhs.clone();
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        match relation {
            Relation::Le => slack_count += 1,
            Relation::Ge => {
                slack_count += 1;
                art_count += 1;
            }
            Relation::Eq => art_count += 1,
        }
        normalized.push((coeffs, relation, rhs));
    }

    let slack_start = structural;
    let art_start = structural + slack_count;
    let width = art_start + art_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_slack = slack_start;
    let mut next_art = art_start;
    for (coeffs, relation, rhs) in normalized {
        let mut row = vec![Rational::zero(); width + 1];
        row[..structural].clone_from_slice(&coeffs);
        row[width] = rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: vec![Rational::zero(); width + 1],
        basis,
        art_start,
        pivots: 0,
    };

    // Phase 1: minimize the sum of artificials.
    if art_count > 0 {
        for j in art_start..width {
            t.cost[j] = Rational::one();
        }
        for i in 0..m {
            if t.basis[i] >= art_start {
                let row = t.rows[i].clone();
                for (v, p) in t.cost.iter_mut().zip(&row) {
                    *v -= p;
                }
            }
        }
        if !t.run(width)? {
            return Err(Error::internal("phase 1 reported unbounded"));
        }
        let z1 = -t.cost[width].clone();
        if !z1.is_zero() {
            return Ok(SimplexSolution {
                status: SolveStatus::Infeasible,
                optimum: None,
                point: None,
                pivot_count: t.pivots,
            });
        }
        // Drive leftover artificials out of the basis; rows that cannot
        // pivot on a real column are redundant and dropped.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                if let Some(col) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, col);
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    // Phase 2: swap in the real objective, eliminating basic columns.
    for v in t.cost.iter_mut() {
        *v = Rational::zero();
    }
    for j in 0..n {
        t.cost[pos_col[j]] = minimize_obj[j].clone();
        if let Some(nc) = neg_col[j] {
            t.cost[nc] = -minimize_obj[j].clone();
        }
    }
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if !t.cost[b].is_zero() {
            let f = t.cost[b].clone();
            let row = t.rows[i].clone();
            for (v, p) in t.cost.iter_mut().zip(&row) {
                *v -= &f * p;
            }
        }
    }
    let art_cutoff = t.art_start;
    if !t.run(art_cutoff)? {
        return Ok(SimplexSolution {
            status: SolveStatus::Unbounded,
            optimum: None,
            point: None,
            pivot_count: t.pivots,
        });
    }

    // Extract the point over original variables.
    let width_idx = t.width();
    let mut assignment = vec![Rational::zero(); width_idx];
    for (i, &b) in t.basis.iter().enumerate() {
        assignment[b] = t.rows[i][width_idx].clone();
    }
    let point: Vec<Rational> = (0..n)
        .map(|j| {
            let mut v = assignment[pos_col[j]].clone();
            if let Some(nc) = neg_col[j] {
                v -= &assignment[nc];
            }
            v
        })
        .collect();
    let optimum: Rational = spec
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    // tableau's tracked value agrees with the recomputed objective
    let z_min = -t.cost[width_idx].clone();
    let expect = match spec.sense {
        Sense::Minimize => optimum.clone(),
        Sense::Maximize => -optimum.clone(),
    };
    if z_min != expect {
        return Err(Error::internal(format!(
            "tableau objective {z_min} disagrees with recomputed {expect}"
        )));
    }

    Ok(SimplexSolution {
        status: SolveStatus::Optimal,
        optimum: Some(optimum),
        point: Some(point),
        pivot_count: t.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn spec(
        sense: Sense,
        objective: Vec<Rational>,
        constraints: Vec<(Vec<Rational>, Relation, Rational)>,
    ) -> LinearProgramSpec {
        let nonneg = vec![true; objective.len()];
        LinearProgramSpec {
            sense,
            objective,
            constraints: constraints
                .into_iter()
                .map(|(coeffs, relation, rhs)| Constraint {
                    coeffs,
                    relation,
                    rhs,
                })
                .collect(),
            nonneg,
        }
    }

    #[test]
    fn max_with_slack_only() {
        let s = spec(
            Sense::Maximize,
            vec![rat_int(3), rat_int(2)],
            vec![
                (vec![rat_int(1), rat_int(1)], Relation::Le, rat_int(4)),
                (vec![rat_int(1), rat_int(0)], Relation::Le, rat_int(2)),
            ],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.optimum.unwrap(), rat_int(10));
        assert_eq!(sol.point.unwrap(), vec![rat_int(2), rat_int(2)]);
        assert!(sol.pivot_count > 0);
    }

    #[test]
    fn min_with_phase_one() {
        let s = spec(
            Sense::Minimize,
            vec![rat_int(1), rat_int(1)],
            vec![
                (vec![rat_int(1), rat_int(2)], Relation::Ge, rat_int(3)),
                (vec![rat_int(2), rat_int(1)], Relation::Ge, rat_int(3)),
            ],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.optimum.unwrap(), rat_int(2));
        assert_eq!(sol.point.unwrap(), vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn equality_constraints() {
        let s = spec(
            Sense::Maximize,
            vec![rat_int(1), rat_int(1)],
            vec![
                (vec![rat_int(1), rat_int(1)], Relation::Eq, rat_int(3)),
                (vec![rat_int(1), rat_int(0)], Relation::Le, rat_int(1)),
            ],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.optimum.unwrap(), rat_int(3));
    }

    #[test]
    fn infeasible_detected() {
        let s = spec(
            Sense::Minimize,
            vec![rat_int(1)],
            vec![
                (vec![rat_int(1)], Relation::Le, rat_int(1)),
                (vec![rat_int(1)], Relation::Ge, rat_int(2)),
            ],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let s = spec(
            Sense::Maximize,
            vec![rat_int(1)],
            vec![(vec![rat_int(1)], Relation::Ge, rat_int(1))],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Unbounded);
    }

    #[test]
    fn free_variable_split() {
        let mut s = spec(
            Sense::Minimize,
            vec![rat_int(1)],
            vec![(vec![rat_int(1)], Relation::Ge, rat_int(-5))],
        );
        s.nonneg = vec![false];
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.optimum.unwrap(), rat_int(-5));
        assert_eq!(sol.point.unwrap(), vec![rat_int(-5)]);
    }

    #[test]
    fn negative_rhs_normalization() {
        // x >= 2 written as -x <= -2
        let s = spec(
            Sense::Minimize,
            vec![rat_int(1)],
            vec![(vec![rat_int(-1)], Relation::Le, rat_int(-2))],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.optimum.unwrap(), rat_int(2));
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // classic degenerate instance that cycles without Bland's rule
        let s = spec(
            Sense::Minimize,
            vec![rat(-3, 4), rat_int(150), rat(-1, 50), rat_int(6)],
            vec![
                (
                    vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
                    Relation::Le,
                    rat_int(0),
                ),
                (
                    vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
                    Relation::Le,
                    rat_int(0),
                ),
                (
                    vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)],
                    Relation::Le,
                    rat_int(1),
                ),
            ],
        );
        let sol = simplex_solve(&s).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.optimum.unwrap(), rat(-1, 20));
    }

    #[test]
    fn shape_validation() {
        let mut s = spec(Sense::Minimize, vec![rat_int(1)], vec![]);
        s.nonneg = vec![true, true];
        assert!(simplex_solve(&s).is_err());
    }
}
