//! Exact linear solves over Gaussian rationals.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::Gaussian;

/// One solution of `A x = b` (free unknowns set to zero), or `None` when the
/// system is inconsistent. `a` is row-major with `cols` columns.
pub(crate) fn solve(mut a: Vec<Vec<Gaussian>>, mut b: Vec<Gaussian>, cols: usize) -> Option<Vec<Gaussian>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Gaussian::new(num_traits::One::one(), Zero::zero()) / a[r][c].clone();
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let t = &f * &a[r][k];
                    a[i][k] = &a[i][k] - &t;
                }
                let t = &f * &b[r];
                b[i] = &b[i] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = alloc::vec![Gaussian::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{gauss_int, gauss_rat};
    use alloc::vec;

    #[test]
    fn solves_square_system() {
        // x + y = 3, x - y = 1
        let a = vec![vec![gauss_int(1), gauss_int(1)], vec![gauss_int(1), gauss_int(-1)]];
        let x = solve(a, vec![gauss_int(3), gauss_int(1)], 2).unwrap();
        assert_eq!(x, vec![gauss_int(2), gauss_int(1)]);
    }

    #[test]
    fn underdetermined_and_inconsistent() {
        let a = vec![vec![gauss_int(2), gauss_int(4)]];
        let x = solve(a, vec![gauss_int(1)], 2).unwrap();
        assert_eq!(x, vec![gauss_rat(1, 2), gauss_int(0)]);
        let a = vec![vec![gauss_int(1)], vec![gauss_int(2)]];
        assert!(solve(a, vec![gauss_int(1), gauss_int(3)], 1).is_none());
    }
}
