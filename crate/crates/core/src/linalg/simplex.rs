//! Feasibility of the normalized cone slice of a subspace.
//!
//! Given a basis of a subspace K of R^m, decides whether some x in K
//! satisfies x >= -eps entrywise and sum(x) = 1. A positive answer exhibits a
//! (tolerance-relaxed) nonnegative direction in K; a negative answer
//! certifies that K meets the nonnegative orthant only in 0.
//!
//! Phase-1 simplex with Bland's rule on the standard-form system
//!
//! ```text
//!   -(B^t y)_i + u_i = eps   (i = 1..m, u >= 0)
//!    sum_i (B^t y)_i + a0 = 1   (a0 >= 0 artificial)
//! ```
//!
//! with y split into nonnegative parts. Feasible iff min a0 = 0.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

/// Floating-point variant, `eps`-relaxed.
pub fn cone_slice_feasible(basis: &[Vec<f64>], ambient: usize, eps: f64) -> Option<bool> {
    let k = basis.len();
    let m = ambient;
    debug_assert!(basis.iter().all(|v| v.len() == m));
    let ncols = 2 * k + m + 1;
    let nrows = m + 1;
    let mut a = vec![vec![0.0f64; ncols]; nrows];
    let mut b = vec![0.0f64; nrows];
    for i in 0..m {
        for (j, v) in basis.iter().enumerate() {
            a[i][j] = -v[i];
            a[i][k + j] = v[i];
        }
        a[i][2 * k + i] = 1.0;
        b[i] = eps;
    }
    for (j, v) in basis.iter().enumerate() {
        let s: f64 = v.iter().sum();
        a[m][j] = s;
        a[m][k + j] = -s;
    }
    a[m][2 * k + m] = 1.0;
    b[m] = 1.0;

    let mut basics: Vec<usize> = (0..m).map(|i| 2 * k + i).collect();
    basics.push(2 * k + m);
    // Phase-1 cost: minimize a0. Reduced costs start as c_j - row_m[j].
    let mut z: Vec<f64> = (0..ncols).map(|j| -a[m][j]).collect();
    z[2 * k + m] = 0.0;
    let mut obj = -b[m];

    for _ in 0..MAX_PIVOTS {
        // Bland: first improving column.
        let Some(enter) = (0..ncols).find(|&j| z[j] < -PIVOT_TOL) else {
            return Some(-obj <= FEAS_TOL);
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..nrows {
            if a[r][enter] > PIVOT_TOL {
                let ratio = b[r] / a[r][enter];
                if ratio < best - PIVOT_TOL
                    || (ratio < best + PIVOT_TOL
                        && leave.is_none_or(|l| basics[r] < basics[l]))
                {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            // Unbounded phase-1 objective cannot happen; bail out.
            return None;
        };
        pivot_f64(&mut a, &mut b, &mut z, &mut obj, lr, enter);
        basics[lr] = enter;
    }
    None
}

fn pivot_f64(
    a: &mut [Vec<f64>],
    b: &mut [f64],
    z: &mut [f64],
    obj: &mut f64,
    row: usize,
    col: usize,
) {
    let p = a[row][col];
    for x in a[row].iter_mut() {
        *x /= p;
    }
    b[row] /= p;
    for r in 0..a.len() {
        if r != row && a[r][col] != 0.0 {
            let c = a[r][col];
            let pivot_row = a[row].clone();
            for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                *x -= c * y;
            }
            a[r][col] = 0.0;
            b[r] -= c * b[row];
        }
    }
    let c = z[col];
    if c != 0.0 {
        for (x, y) in z.iter_mut().zip(a[row].iter()) {
            *x -= c * y;
        }
        z[col] = 0.0;
        *obj -= c * b[row];
    }
}

/// Exact variant over the rationals with `eps = 0`: decides whether K meets
/// the nonnegative orthant nontrivially, with no tolerances at all.
pub fn cone_slice_feasible_exact(basis: &[Vec<Rat>], ambient: usize) -> bool {
    let k = basis.len();
    let m = ambient;
    debug_assert!(basis.iter().all(|v| v.len() == m));
    let ncols = 2 * k + m + 1;
    let nrows = m + 1;
    let mut a = vec![vec![Rat::zero(); ncols]; nrows];
    let mut b = vec![Rat::zero(); nrows];
    for i in 0..m {
        for (j, v) in basis.iter().enumerate() {
            a[i][j] = -v[i].clone();
            a[i][k + j] = v[i].clone();
        }
        a[i][2 * k + i] = Rat::one();
    }
    for (j, v) in basis.iter().enumerate() {
        let s: Rat = v.iter().sum();
        a[m][j] = s.clone();
        a[m][k + j] = -s;
    }
    a[m][2 * k + m] = Rat::one();
    b[m] = Rat::one();

    let mut basics: Vec<usize> = (0..m).map(|i| 2 * k + i).collect();
    basics.push(2 * k + m);
    let mut z: Vec<Rat> = (0..ncols).map(|j| -a[m][j].clone()).collect();
    z[2 * k + m] = Rat::zero();
    let mut obj = -b[m].clone();

    loop {
        let Some(enter) = (0..ncols).find(|&j| z[j].is_negative()) else {
            return obj.is_zero();
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for r in 0..nrows {
            if a[r][enter].is_positive() {
                let ratio = &b[r] / &a[r][enter];
                let better = match &best {
                    None => true,
                    Some(bst) => {
                        ratio < *bst
                            || (ratio == *bst && leave.is_none_or(|l| basics[r] < basics[l]))
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        // Bland's rule terminates; phase 1 is bounded below by 0.
        let lr = leave.expect("phase-1 simplex cannot be unbounded");
        let p = a[lr][enter].clone();
        for x in a[lr].iter_mut() {
            *x /= &p;
        }
        b[lr] /= &p;
        let pivot_row = a[lr].clone();
        let pivot_rhs = b[lr].clone();
        for r in 0..nrows {
            if r != lr && !a[r][enter].is_zero() {
                let c = a[r][enter].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &c * y;
                }
                a[r][enter] = Rat::zero();
                b[r] -= &c * &pivot_rhs;
            }
        }
        let c = z[enter].clone();
        if !c.is_zero() {
            for (x, y) in z.iter_mut().zip(pivot_row.iter()) {
                *x -= &c * y;
            }
            z[enter] = Rat::zero();
            obj -= &c * &pivot_rhs;
        }
        basics[lr] = enter;
    }
}
