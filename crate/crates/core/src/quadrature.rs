//! Gauss–Hermite rules and deterministic summation.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Nodes and weights of the `m`-point Gauss–Hermite rule for the weight
/// `exp(-x²)`, nodes in increasing order.
pub fn gauss_hermite(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let pim4 = libm::pow(core::f64::consts::PI, -0.25);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let half = m.div_ceil(2);
    let mf = m as f64;
    let mut z = 0.0;
    for i in 0..half {
        // starting guesses for the largest roots, then extrapolate from the previous ones
        z = match i {
            0 => libm::sqrt(2.0 * mf + 1.0) - 1.85575 * libm::pow(2.0 * mf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(mf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..m {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * libm::sqrt(2.0 / (jf + 1.0)) * p2 - libm::sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = libm::sqrt(2.0 * mf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if libm::fabs(z - z1) <= 3e-15 * libm::fabs(z).max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::InvalidArgument("Gauss–Hermite root search did not converge".into()));
        }
        x[i] = z;
        x[m - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[m - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    Ok((x, w))
}

/// Pairwise (cascade) summation with a fixed split order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
