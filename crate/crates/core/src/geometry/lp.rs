//! Exact phase-one simplex for `A x = b, x >= 0`.
//!
//! Pivoting follows Bland's rule (smallest entering index, smallest leaving
//! basic index on ratio ties), so the returned vertex is a deterministic
//! function of the system.

use num_traits::{Signed, Zero};

use super::Scalar;

/// Equality system `rows * x = rhs` with `x >= 0` implied.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub vars: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub rhs: Vec<Scalar>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Scalar>, rhs: Scalar) {
        debug_assert_eq!(row.len(), self.vars);
        self.rows.push(row);
        self.rhs.push(rhs);
    }
}

/// Returns a basic feasible solution of the system, or `None` if it is infeasible.
pub fn feasible_vertex(sys: &LinearSystem) -> Option<Vec<Scalar>> {
    let m = sys.rows.len();
    let n = sys.vars;
    if m == 0 {
        return Some(vec![Scalar::zero(); n]);
    }
    let width = n + m + 1;
    let rhs_col = n + m;
    let mut tab: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    for (i, (row, b)) in sys.rows.iter().zip(&sys.rhs).enumerate() {
        let neg = b.is_negative();
        let mut r = Vec::with_capacity(width);
        for a in row {
            r.push(if neg { -a } else { a.clone() });
        }
        for k in 0..m {
            r.push(if k == i {
                Scalar::from_integer(1.into())
            } else {
                Scalar::zero()
            });
        }
        r.push(if neg { -b } else { b.clone() });
        tab.push(r);
    }
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![Scalar::zero(); width];
    for r in &tab {
        for j in 0..n {
            cost[j] -= &r[j];
        }
        cost[rhs_col] -= &r[rhs_col];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for (i, r) in tab.iter().enumerate() {
            if r[enter].is_positive() {
                let q = &r[rhs_col] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lq)) => q < *lq || (q == *lq && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, q));
                }
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot row
        let (row, _) = leave.expect("phase-one simplex is bounded");
        pivot(&mut tab, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][rhs_col].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Scalar>], cost: &mut [Scalar], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0  ->  x = y = 1/2
        let mut s = LinearSystem::new(2);
        s.push(vec![int(1), int(1)], int(1));
        s.push(vec![int(1), int(-1)], int(0));
        let x = feasible_vertex(&s).unwrap();
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn infeasible_system() {
        // x + y = -1 with x, y >= 0
        let mut s = LinearSystem::new(2);
        s.push(vec![int(1), int(1)], int(-1));
        assert!(feasible_vertex(&s).is_none());
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let mut s = LinearSystem::new(3);
        s.push(vec![int(1), int(1), int(1)], int(1));
        s.push(vec![int(2), int(2), int(2)], int(2));
        let x = feasible_vertex(&s).unwrap();
        let sum: Scalar = x.iter().sum();
        assert_eq!(sum, int(1));
        assert!(x.iter().all(|v| !v.is_negative()));
    }
}
