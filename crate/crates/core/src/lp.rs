//! Dense exact simplex for `max c.x` subject to `A x <= b`, `x >= 0`, `b >= 0`.
//!
//! The origin is feasible, so no phase one is needed. Bland's rule guarantees
//! termination.

use num_traits::{Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    /// Optimal dual multipliers, one per constraint row.
    pub duals: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let rows = a.len();
    let vars = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != vars) {
        return invalid("constraint matrix shape mismatch");
    }
    if b.iter().any(|v| v.is_negative()) {
        return invalid("right-hand sides must be nonnegative");
    }
    let width = vars + rows;
    // tableau rows: [A | I | b]; last row: [-c | 0 | 0]
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = Vec::with_capacity(width + 1);
        r.extend(row.iter().cloned());
        for j in 0..rows {
            r.push(if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            });
        }
        r.push(b[i].clone());
        t.push(r);
    }
    let mut obj: Vec<Rational> = c.iter().map(|v| -v).collect();
    obj.resize(width + 1, Rational::zero());
    t.push(obj);
    let mut basis: Vec<usize> = (vars..width).collect();
    let mut pivots = 0;

    while let Some(enter) = (0..width).find(|&j| t[rows][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = t[i][width].clone();
        }
    }
    let duals = (vars..width).map(|j| t[rows][j].clone()).collect();
    Ok(LpSolution {
        x,
        duals,
        objective: t[rows][width].clone(),
        pivots,
    })
}

fn pivot(t: &mut [Vec<Rational>], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v /= &p;
    }
    let prow = t[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
}
