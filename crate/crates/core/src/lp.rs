//! Exact linear-program feasibility over arbitrary-precision rationals.
//!
//! Decides feasibility of systems `A x ⋈ b`, `x ≥ 0` (with `⋈` one of `=`,
//! `≥`, `≤` per row) using a phase-one simplex method on the standard-form
//! tableau. Pivot selection follows Bland's smallest-index rule, which rules
//! out cycling, so the procedure always terminates. All arithmetic is done in
//! `BigRational`, so answers are exact: a reported feasible point satisfies
//! every constraint precisely, and "infeasible" is a proof of emptiness.
//!
//! Only feasibility is needed by the callers (circulation and effect-cone
//! queries); there is deliberately no objective-function interface.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Comparison operator of a single linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintOp {
    /// Left-hand side equals the right-hand side.
    Eq,
    /// Left-hand side is at least the right-hand side.
    Ge,
    /// Left-hand side is at most the right-hand side.
    Le,
}

/// A linear feasibility problem over nonnegative rational variables.
///
/// Variables are indexed `0..num_vars` and implicitly constrained to be
/// nonnegative. Rows are added with [`LinearProgram::constrain`] and the
/// system is decided by [`LinearProgram::find_feasible`].
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Row>,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, BigRational)>,
    op: ConstraintOp,
    rhs: BigRational,
}

impl LinearProgram {
    /// Creates an empty system over `num_vars` nonnegative variables.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
        }
    }

    /// Number of variables of the system.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds the constraint `Σ coeffs[i].1 · x[coeffs[i].0] op rhs`.
    ///
    /// Repeated variable indices are accumulated. Panics if a variable index
    /// is out of range.
    pub fn constrain<I>(&mut self, coeffs: I, op: ConstraintOp, rhs: BigRational)
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        let coeffs: Vec<(usize, BigRational)> = coeffs.into_iter().collect();
        for &(var, _) in &coeffs {
            assert!(var < self.num_vars, "variable index {var} out of range");
        }
        self.rows.push(Row { coeffs, op, rhs });
    }

    /// Decides feasibility, returning a satisfying assignment if one exists.
    ///
    /// Runs a phase-one simplex with Bland's rule: slack/surplus variables
    /// turn every row into an equality, one artificial variable per row gives
    /// a trivial starting basis, and the sum of artificials is minimized. The
    /// system is feasible iff that minimum is zero, in which case the basic
    /// solution restricted to the original variables is returned.
    pub fn find_feasible(&self) -> Option<Vec<BigRational>> {
        let n = self.num_vars;
        let m = self.rows.len();
        if m == 0 {
            return Some(vec![BigRational::zero(); n]);
        }

        // Column layout: original variables, then one slack per inequality
        // row, then one artificial per row, then the right-hand side.
        let num_slacks = self
            .rows
            .iter()
            .filter(|r| r.op != ConstraintOp::Eq)
            .count();
        let total = n + num_slacks + m;
        let rhs_col = total;

        let mut tableau: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); total + 1]; m];
        let mut next_slack = n;
        for (i, row) in self.rows.iter().enumerate() {
            for (var, coeff) in &row.coeffs {
                tableau[i][*var] += coeff.clone();
            }
            match row.op {
                ConstraintOp::Eq => {}
                ConstraintOp::Ge => {
                    tableau[i][next_slack] = -BigRational::one();
                    next_slack += 1;
                }
                ConstraintOp::Le => {
                    tableau[i][next_slack] = BigRational::one();
                    next_slack += 1;
                }
            }
            tableau[i][rhs_col] = row.rhs.clone();
            if tableau[i][rhs_col].is_negative() {
                for entry in tableau[i].iter_mut() {
                    *entry = -std::mem::take(entry);
                }
            }
            // Artificial variable for row i.
            tableau[i][n + num_slacks + i] = BigRational::one();
        }

        // Basis starts as the artificial columns; the phase-one objective is
        // the sum of artificials, so the reduced-cost row is the negated sum
        // of all tableau rows on non-artificial columns (and zero on the
        // artificial columns themselves).
        let mut basis: Vec<usize> = (0..m).map(|i| n + num_slacks + i).collect();
        let mut cost: Vec<BigRational> = vec![BigRational::zero(); total + 1];
        for row in &tableau {
            for (j, entry) in row.iter().enumerate() {
                if j < n + num_slacks || j == rhs_col {
                    cost[j] -= entry.clone();
                }
            }
        }
        // Artificial columns that have left the basis are barred from
        // re-entering; this keeps Bland's termination argument intact while
        // preventing useless pivots.
        let mut banned = vec![false; total];

        loop {
            // Bland: entering column = smallest index with negative reduced cost.
            let entering = (0..total)
                .find(|&j| !banned[j] && cost[j].is_negative());
            let Some(enter) = entering else { break };

            // Ratio test; ties broken by smallest basis variable index (Bland).
            let mut leave: Option<usize> = None;
            let mut best: Option<BigRational> = None;
            for i in 0..m {
                if tableau[i][enter].is_positive() {
                    let ratio = &tableau[i][rhs_col] / &tableau[i][enter];
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            ratio < *b
                                || (ratio == *b
                                    && basis[i] < basis[leave.expect("tie requires prior row")])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            // The phase-one objective is bounded below by zero, so an
            // unbounded ray is impossible.
            let pivot_row = leave.expect("phase-one simplex cannot be unbounded");

            let leaving_var = basis[pivot_row];
            if leaving_var >= n + num_slacks {
                banned[leaving_var] = true;
            }

            // Pivot on (pivot_row, enter).
            let pivot = tableau[pivot_row][enter].clone();
            for entry in tableau[pivot_row].iter_mut() {
                *entry /= pivot.clone();
            }
            for i in 0..m {
                if i != pivot_row && !tableau[i][enter].is_zero() {
                    let factor = tableau[i][enter].clone();
                    for j in 0..=total {
                        let delta = &factor * &tableau[pivot_row][j];
                        tableau[i][j] -= delta;
                    }
                }
            }
            if !cost[enter].is_zero() {
                let factor = cost[enter].clone();
                for j in 0..=total {
                    let delta = &factor * &tableau[pivot_row][j];
                    cost[j] -= delta;
                }
            }
            basis[pivot_row] = enter;
        }

        // Feasible iff every artificial still in the basis sits at level zero.
        for i in 0..m {
            if basis[i] >= n + num_slacks && !tableau[i][rhs_col].is_zero() {
                return None;
            }
        }

        let mut solution = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                solution[basis[i]] = tableau[i][rhs_col].clone();
            }
        }
        Some(solution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check(solution: &[BigRational], rows: &[(Vec<(usize, i64)>, ConstraintOp, i64)]) {
        for (coeffs, op, rhs) in rows {
            let lhs: BigRational = coeffs
                .iter()
                .map(|&(v, c)| rat(c) * &solution[v])
                .sum();
            let rhs = rat(*rhs);
            let ok = match op {
                ConstraintOp::Eq => lhs == rhs,
                ConstraintOp::Ge => lhs >= rhs,
                ConstraintOp::Le => lhs <= rhs,
            };
            assert!(ok, "constraint {coeffs:?} {op:?} {rhs} violated by {lhs}");
        }
        for value in solution {
            assert!(!value.is_negative(), "negative component in {solution:?}");
        }
    }

    #[test]
    fn simple_equalities_and_inequalities() {
        let rows = vec![
            (vec![(0, 1), (1, 1)], ConstraintOp::Eq, 3),
            (vec![(0, 1), (1, -1)], ConstraintOp::Ge, 1),
        ];
        let mut lp = LinearProgram::new(2);
        for (coeffs, op, rhs) in &rows {
            lp.constrain(
                coeffs.iter().map(|&(v, c)| (v, rat(c))),
                *op,
                rat(*rhs),
            );
        }
        let solution = lp.find_feasible().expect("system is feasible");
        check(&solution, &rows);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new(2);
        lp.constrain([(0, rat(1)), (1, rat(1))], ConstraintOp::Eq, rat(1));
        lp.constrain([(0, rat(1)), (1, rat(1))], ConstraintOp::Ge, rat(2));
        assert!(lp.find_feasible().is_none());
    }

    #[test]
    fn nonnegativity_blocks_negative_requirements() {
        // x0 + x1 <= 0 with x0 >= 1 is impossible for nonnegative variables.
        let mut lp = LinearProgram::new(2);
        lp.constrain([(0, rat(1)), (1, rat(1))], ConstraintOp::Le, rat(0));
        lp.constrain([(0, rat(1))], ConstraintOp::Ge, rat(1));
        assert!(lp.find_feasible().is_none());
    }

    #[test]
    fn exact_rational_solutions() {
        // 3x = 1 forces x = 1/3 exactly.
        let mut lp = LinearProgram::new(1);
        lp.constrain([(0, rat(3))], ConstraintOp::Eq, rat(1));
        let solution = lp.find_feasible().expect("feasible");
        assert_eq!(solution[0], rational(1, 3));
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // -x0 + x1 = -2 has solutions such as x0 = 2, x1 = 0.
        let rows = vec![
            (vec![(0, -1), (1, 1)], ConstraintOp::Eq, -2),
            (vec![(1, 1)], ConstraintOp::Le, 5),
        ];
        let mut lp = LinearProgram::new(2);
        for (coeffs, op, rhs) in &rows {
            lp.constrain(
                coeffs.iter().map(|&(v, c)| (v, rat(c))),
                *op,
                rat(*rhs),
            );
        }
        let solution = lp.find_feasible().expect("feasible");
        check(&solution, &rows);
    }

    #[test]
    fn duplicate_variable_mentions_accumulate() {
        // x + x = 4 means 2x = 4.
        let mut lp = LinearProgram::new(1);
        lp.constrain([(0, rat(1)), (0, rat(1))], ConstraintOp::Eq, rat(4));
        let solution = lp.find_feasible().expect("feasible");
        assert_eq!(solution[0], rat(2));
    }

    #[test]
    fn degenerate_rows_terminate() {
        // Highly degenerate system (many zero right-hand sides) exercises the
        // anti-cycling rule.
        let mut lp = LinearProgram::new(4);
        for i in 0..4 {
            lp.constrain([(i, rat(1)), ((i + 1) % 4, rat(-1))], ConstraintOp::Eq, rat(0));
        }
        lp.constrain([(0, rat(1))], ConstraintOp::Ge, rat(0));
        lp.constrain([(0, rat(1)), (1, rat(1)), (2, rat(1)), (3, rat(1))], ConstraintOp::Le, rat(0));
        let solution = lp.find_feasible().expect("all-zero point is feasible");
        assert!(solution.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn empty_program_is_feasible() {
        let lp = LinearProgram::new(3);
        let solution = lp.find_feasible().expect("no rows means feasible");
        assert_eq!(solution, vec![BigRational::zero(); 3]);
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let mut lp = LinearProgram::new(2);
        for _ in 0..3 {
            lp.constrain([(0, rat(1)), (1, rat(2))], ConstraintOp::Eq, rat(6));
        }
        lp.constrain([(0, rat(1))], ConstraintOp::Ge, rat(2));
        let solution = lp.find_feasible().expect("feasible");
        assert!(&solution[0] + rat(2) * &solution[1] == rat(6));
        assert!(solution[0] >= rat(2));
    }
}
