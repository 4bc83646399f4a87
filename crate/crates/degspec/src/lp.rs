//! Exact linear programming over the rationals.
//!
//! Small dense two-phase simplex with Bland's rule, used for effective-cone
//! membership and for the degree norm. No floating point anywhere.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

/// Minimize c.x subject to A x = b, x >= 0.
pub fn minimize(c: &[Rational], a: &QMatrix, b: &[Rational]) -> Result<LpOutcome> {
    let m = a.rows();
    let n = a.cols();
    if c.len() != n || b.len() != m {
        return Err(Error::Dimension(format!(
            "LP shape mismatch: A is {m}x{n}, c has {} entries, b has {}",
            c.len(),
            b.len()
        )));
    }

    // rows with b normalized nonnegative; columns n..n+m are artificials
    let total = n + m;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        let negate = b[i] < Rational::zero();
        let mut row: Vec<Rational> = (0..total).map(|_| Rational::zero()).collect();
        for j in 0..n {
            row[j] = if negate { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        row[n + i] = Rational::one();
        rows.push(row);
        rhs.push(if negate { -b[i].clone() } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize sum of artificials
    let phase1_cost: Vec<Rational> = (0..total)
        .map(|j| if j >= n { Rational::one() } else { Rational::zero() })
        .collect();
    match run_simplex(&mut rows, &mut rhs, &mut basis, &phase1_cost, total)? {
        SimplexEnd::Unbounded => {
            return Err(Error::ModelData("phase-1 LP unbounded".into()));
        }
        SimplexEnd::Optimal(value) => {
            if !value.is_zero() {
                return Ok(LpOutcome::Infeasible);
            }
        }
    }

    // drive artificial variables out of the basis where possible
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !rows[i][j].is_zero()) {
                pivot(&mut rows, &mut rhs, &mut basis, i, j, total);
            }
            // a remaining artificial basic variable sits on a redundant
            // zero row; it stays basic at value zero and never re-enters
        }
    }

    // phase 2
    let mut phase2_cost: Vec<Rational> = c.to_vec();
    phase2_cost.resize(total, Rational::zero());
    // forbid artificials from re-entering
    let artificial_barrier = n;
    match run_simplex_restricted(
        &mut rows,
        &mut rhs,
        &mut basis,
        &phase2_cost,
        total,
        artificial_barrier,
    )? {
        SimplexEnd::Unbounded => Ok(LpOutcome::Unbounded),
        SimplexEnd::Optimal(value) => {
            let mut x = vec![Rational::zero(); n];
            for (i, &bi) in basis.iter().enumerate() {
                if bi < n {
                    x[bi] = rhs[i].clone();
                }
            }
            Ok(LpOutcome::Optimal { x, value })
        }
    }
}

/// Is there x >= 0 with A x = b?
pub fn feasible(a: &QMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let zero_cost = vec![Rational::zero(); a.cols()];
    match minimize(&zero_cost, a, b)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::ModelData("feasibility LP reported unbounded".into())),
        LpOutcome::Optimal { x, .. } => Ok(Some(x)),
    }
}

enum SimplexEnd {
    Optimal(Rational),
    Unbounded,
}

fn run_simplex(
    rows: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    cost: &[Rational],
    total: usize,
) -> Result<SimplexEnd> {
    run_simplex_restricted(rows, rhs, basis, cost, total, total)
}

/// Bland's rule simplex; columns >= `allowed` may not enter the basis.
fn run_simplex_restricted(
    rows: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    cost: &[Rational],
    total: usize,
    allowed: usize,
) -> Result<SimplexEnd> {
    let m = rows.len();
    loop {
        // reduced costs: c_j - c_B . column_j
        let mut entering = None;
        for j in 0..allowed.min(total) {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for i in 0..m {
                if !rows[i][j].is_zero() {
                    reduced -= &cost[basis[i]] * &rows[i][j];
                }
            }
            if reduced < Rational::zero() {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let j = match entering {
            Some(j) => j,
            None => {
                let mut value = Rational::zero();
                for i in 0..m {
                    value += &cost[basis[i]] * &rhs[i];
                }
                return Ok(SimplexEnd::Optimal(value));
            }
        };

        // ratio test, Bland tie-break on smallest basis index
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if rows[i][j] > Rational::zero() {
                let ratio = &rhs[i] / &rows[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (i, _) = match leave {
            Some(l) => l,
            None => return Ok(SimplexEnd::Unbounded),
        };
        pivot(rows, rhs, basis, i, j, total);
    }
}

fn pivot(
    rows: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    pivot_row: usize,
    pivot_col: usize,
    total: usize,
) {
    let p = rows[pivot_row][pivot_col].clone();
    for j in 0..total {
        rows[pivot_row][j] = &rows[pivot_row][j] / &p;
    }
    rhs[pivot_row] = &rhs[pivot_row] / &p;
    for i in 0..rows.len() {
        if i == pivot_row || rows[i][pivot_col].is_zero() {
            continue;
        }
        let f = rows[i][pivot_col].clone();
        for j in 0..total {
            let sub = &f * &rows[pivot_row][j];
            rows[i][j] -= sub;
        }
        let sub = &f * &rhs[pivot_row];
        rhs[i] -= sub;
    }
    basis[pivot_row] = pivot_col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn feasible_positive_orthant() {
        // x1 + x2 = 3, x >= 0
        let a = QMatrix::from_i64(&[vec![1, 1]]);
        let x = feasible(&a, &[rat_int(3)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], rat_int(3));
    }

    #[test]
    fn infeasible_negative_target() {
        // x1 = -1, x >= 0
        let a = QMatrix::from_i64(&[vec![1]]);
        assert!(feasible(&a, &[rat_int(-1)]).unwrap().is_none());
    }

    #[test]
    fn minimize_simple() {
        // min x1 + 2 x2 s.t. x1 + x2 = 4
        let a = QMatrix::from_i64(&[vec![1, 1]]);
        let c = vec![rat_int(1), rat_int(2)];
        match minimize(&c, &a, &[rat_int(4)]).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat_int(4));
                assert_eq!(x[0], rat_int(4));
                assert_eq!(x[1], rat_int(0));
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 1 (x1 can grow with x2)
        let a = QMatrix::from_i64(&[vec![1, -1]]);
        let c = vec![rat_int(-1), rat_int(0)];
        match minimize(&c, &a, &[rat_int(1)]).unwrap() {
            LpOutcome::Unbounded => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn redundant_rows_handled() {
        // duplicated constraint keeps an artificial basic at zero
        let a = QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        let x = feasible(&a, &[rat_int(2), rat_int(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], rat_int(2));
    }
}
