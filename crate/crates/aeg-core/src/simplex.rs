//! Exact rational simplex with Bland's rule.
//!
//! Dense two-phase tableau over big rationals: no tolerances, no scaling,
//! guaranteed termination. Sized for the small structured programs built by
//! the zero-cycle search, not for general-purpose optimization.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::value::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `minimize c^T x  subject to  A x {<=,=,>=} b,  x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Relation, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    ncols: usize,
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cost: Vec<Rational>,
    obj: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.a[row][col].clone();
        debug_assert!(!piv.is_zero());
        for x in self.a[row].iter_mut() {
            *x /= piv.clone();
        }
        self.b[row] /= piv.clone();
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let t = self.a[row][j].clone() * f.clone();
                self.a[i][j] -= t;
            }
            let t = self.b[row].clone() * f;
            self.b[i] -= t;
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for j in 0..self.ncols {
                let t = self.a[row][j].clone() * f.clone();
                self.cost[j] -= t;
            }
            let t = self.b[row].clone() * f;
            self.obj -= t;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: smallest entering index with negative reduced cost,
    /// smallest basic index among the minimum-ratio rows.
    fn run(&mut self, allowed: &[bool]) -> Result<(), ()> {
        loop {
            let enter = (0..self.ncols).find(|&j| allowed[j] && self.cost[j].is_negative());
            let enter = match enter {
                Some(j) => j,
                None => return Ok(()),
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if self.a[i][enter].is_positive() {
                    let ratio = self.b[i].clone() / self.a[i][enter].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return Err(()), // unbounded
            }
        }
    }
}

/// Solves the program exactly. Termination is guaranteed by Bland's rule.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let m = lp.rows.len();
    let nv = lp.num_vars;

    // count slacks and artificials
    let mut nslack = 0;
    let mut nart = 0;
    for (_, rel, rhs) in &lp.rows {
        let flip = rhs.is_negative();
        let rel = effective_relation(*rel, flip);
        match rel {
            Relation::Le => nslack += 1,
            Relation::Ge => {
                nslack += 1;
                nart += 1;
            }
            Relation::Eq => nart += 1,
        }
    }
    let ncols = nv + nslack + nart;

    let mut a = alloc::vec![alloc::vec![Rational::zero(); ncols]; m];
    let mut b = alloc::vec![Rational::zero(); m];
    let mut basis = alloc::vec![0usize; m];
    let mut is_artificial = alloc::vec![false; ncols];

    let mut next_slack = nv;
    let mut next_art = nv + nslack;
    for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
        assert_eq!(coeffs.len(), nv, "row width mismatch");
        let flip = rhs.is_negative();
        let sign = if flip { -Rational::one() } else { Rational::one() };
        for (j, c) in coeffs.iter().enumerate() {
            a[i][j] = c.clone() * sign.clone();
        }
        b[i] = rhs.clone() * sign.clone();
        match effective_relation(*rel, flip) {
            Relation::Le => {
                a[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                a[i][next_slack] = -Rational::one();
                next_slack += 1;
                a[i][next_art] = Rational::one();
                is_artificial[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                a[i][next_art] = Rational::one();
                is_artificial[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        ncols,
        a,
        b,
        cost: alloc::vec![Rational::zero(); ncols],
        obj: Rational::zero(),
        basis,
    };

    // phase one: minimize the sum of artificials
    if nart > 0 {
        for j in 0..ncols {
            if is_artificial[j] {
                t.cost[j] = Rational::one();
            }
        }
        // reduce the cost row against the starting basis
        for i in 0..m {
            if is_artificial[t.basis[i]] {
                for j in 0..ncols {
                    let v = t.a[i][j].clone();
                    t.cost[j] -= v;
                }
                t.obj -= t.b[i].clone();
            }
        }
        let allowed = alloc::vec![true; ncols];
        t.run(&allowed).expect("phase one is bounded below by zero");
        if !t.obj.is_zero() {
            return LpOutcome::Infeasible;
        }
        // pivot leftover artificials out of the basis, dropping them for good
        for i in 0..m {
            if is_artificial[t.basis[i]] {
                if let Some(col) = (0..nv + nslack).find(|&j| !t.a[i][j].is_zero()) {
                    t.pivot(i, col);
                }
                // a fully zero row is redundant; its artificial stays basic
                // at value zero and the column stays banned below
            }
        }
    }

    // phase two
    t.cost = alloc::vec![Rational::zero(); ncols];
    for j in 0..nv {
        t.cost[j] = lp.objective[j].clone();
    }
    t.obj = Rational::zero();
    for i in 0..m {
        let bj = t.basis[i];
        if !t.cost[bj].is_zero() {
            let f = t.cost[bj].clone();
            for j in 0..ncols {
                let v = t.a[i][j].clone() * f.clone();
                t.cost[j] -= v;
            }
            t.obj -= t.b[i].clone() * f;
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_artificial[j]).collect();
    if t.run(&allowed).is_err() {
        return LpOutcome::Unbounded;
    }

    let mut solution = alloc::vec![Rational::zero(); nv];
    for i in 0..m {
        if t.basis[i] < nv {
            solution[t.basis[i]] = t.b[i].clone();
        }
    }
    LpOutcome::Optimal {
        value: -t.obj,
        solution,
    }
}

fn effective_relation(rel: Relation, flipped: bool) -> Relation {
    if !flipped {
        return rel;
    }
    match rel {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn two_variable_minimum() {
        // minimize x + y  s.t.  x + 2y >= 4, 3x + y >= 6
        let lp = LinearProgram {
            num_vars: 2,
            objective: alloc::vec![r(1, 1), r(1, 1)],
            rows: alloc::vec![
                (alloc::vec![r(1, 1), r(2, 1)], Relation::Ge, r(4, 1)),
                (alloc::vec![r(3, 1), r(1, 1)], Relation::Ge, r(6, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, r(14, 5));
                assert_eq!(solution, alloc::vec![r(8, 5), r(6, 5)]);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn equality_and_upper_bound() {
        // minimize -x  s.t.  x + y = 3, x <= 2
        let lp = LinearProgram {
            num_vars: 2,
            objective: alloc::vec![r(-1, 1), r(0, 1)],
            rows: alloc::vec![
                (alloc::vec![r(1, 1), r(1, 1)], Relation::Eq, r(3, 1)),
                (alloc::vec![r(1, 1), r(0, 1)], Relation::Le, r(2, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, r(-2, 1));
                assert_eq!(solution, alloc::vec![r(2, 1), r(1, 1)]);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn infeasible_program() {
        // x >= 2 and x <= 1
        let lp = LinearProgram {
            num_vars: 1,
            objective: alloc::vec![r(1, 1)],
            rows: alloc::vec![
                (alloc::vec![r(1, 1)], Relation::Ge, r(2, 1)),
                (alloc::vec![r(1, 1)], Relation::Le, r(1, 1)),
            ],
        };
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_program() {
        let lp = LinearProgram {
            num_vars: 1,
            objective: alloc::vec![r(-1, 1)],
            rows: alloc::vec![(alloc::vec![r(1, 1)], Relation::Ge, r(0, 1))],
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // minimize x  s.t.  -x <= -3   (i.e. x >= 3)
        let lp = LinearProgram {
            num_vars: 1,
            objective: alloc::vec![r(1, 1)],
            rows: alloc::vec![(alloc::vec![r(-1, 1)], Relation::Le, r(-3, 1))],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(3, 1)),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn degenerate_program_terminates() {
        // a classic cycling-prone instance; Bland's rule must terminate
        let lp = LinearProgram {
            num_vars: 4,
            objective: alloc::vec![r(-3, 4), r(150, 1), r(-1, 50), r(6, 1)],
            rows: alloc::vec![
                (
                    alloc::vec![r(1, 4), r(-60, 1), r(-1, 25), r(9, 1)],
                    Relation::Le,
                    r(0, 1),
                ),
                (
                    alloc::vec![r(1, 2), r(-90, 1), r(-1, 50), r(3, 1)],
                    Relation::Le,
                    r(0, 1),
                ),
                (
                    alloc::vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)],
                    Relation::Le,
                    r(1, 1),
                ),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(-1, 20)),
            other => panic!("unexpected: {other:?}"),
        }
    }
}
