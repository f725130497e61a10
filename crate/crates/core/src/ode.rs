//! Explicit integrators for `y' = f(t, y)` that land exactly on requested
//! sample times.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepper {
    /// Classical fourth-order Runge–Kutta. Each interval between sample
    /// times is split into `ceil(Δt/dt)` equal steps.
    Rk4 { dt: f64 },
    /// Dormand–Prince 5(4) with error control on the mixed norm
    /// `|e_i| / (abs_tol + rel_tol·|y_i|)`.
    Adaptive { abs_tol: f64, rel_tol: f64, initial_dt: f64 },
}

impl Default for Stepper {
    fn default() -> Self {
        Stepper::Rk4 { dt: 1e-3 }
    }
}

impl Stepper {
    pub fn adaptive() -> Self {
        Stepper::Adaptive {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            initial_dt: 1e-3,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Stepper::Rk4 { dt } => dt > 0.0 && dt.is_finite(),
            Stepper::Adaptive {
                abs_tol,
                rel_tol,
                initial_dt,
            } => abs_tol > 0.0 && rel_tol >= 0.0 && initial_dt > 0.0 && initial_dt.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(alloc::format!("bad stepper settings {self:?}")))
        }
    }
}

fn check_finite(t: f64, y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Integrates from `t = 0`, returning the state at every entry of `times`
/// (which must be finite, non-negative and non-decreasing).
pub fn integrate<F>(mut f: F, y0: &[f64], times: &[f64], stepper: Stepper) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    stepper.validate()?;
    let mut prev = 0.0;
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::InvalidArgument("sample times must be finite and non-decreasing from 0".into()));
        }
        prev = t;
    }
    check_finite(0.0, y0)?;
    let mut out = Vec::with_capacity(times.len());
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut work = Work::new(y.len());
    let mut h_adapt = match stepper {
        Stepper::Adaptive { initial_dt, .. } => initial_dt,
        Stepper::Rk4 { .. } => 0.0,
    };
    for &target in times {
        match stepper {
            Stepper::Rk4 { dt } => {
                let span = target - t;
                if span > 0.0 {
                    let n = libm::ceil(span / dt - 1e-9).max(1.0) as u64;
                    let h = span / n as f64;
                    for k in 0..n {
                        let tk = t + h * k as f64;
                        rk4_step(&mut f, tk, &mut y, h, &mut work)?;
                        check_finite(tk + h, &y)?;
                    }
                    t = target;
                }
            }
            Stepper::Adaptive { abs_tol, rel_tol, .. } => {
                dopri_to(&mut f, &mut t, &mut y, target, &mut h_adapt, abs_tol, rel_tol, &mut work)?;
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

struct Work {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y5: Vec<f64>,
}

impl Work {
    fn new(n: usize) -> Self {
        Work {
            k: core::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y5: vec![0.0; n],
        }
    }
}

fn rk4_step<F>(f: &mut F, t: f64, y: &mut [f64], h: f64, w: &mut Work) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let [k1, k2, k3, k4, ..] = &mut w.k;
    f(t, y, k1)?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(t + 0.5 * h, &w.tmp, k2)?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(t + 0.5 * h, &w.tmp, k3)?;
    for i in 0..n {
        w.tmp[i] = y[i] + h * k3[i];
    }
    f(t + h, &w.tmp, k4)?;
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(())
}

// Dormand–Prince tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[allow(clippy::too_many_arguments)]
fn dopri_to<F>(
    f: &mut F,
    t: &mut f64,
    y: &mut [f64],
    target: f64,
    h: &mut f64,
    atol: f64,
    rtol: f64,
    w: &mut Work,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    while *t < target {
        let min_h = 1e-14 * t.abs().max(1.0);
        let remaining = target - *t;
        let last = *h >= remaining;
        let step = if last { remaining } else { *h };
        for s in 0..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, a) in A[s].iter().enumerate().take(s) {
                    acc += step * a * w.k[j][i];
                }
                w.tmp[i] = acc;
            }
            f(*t + C[s] * step, &w.tmp, &mut w.k[s])?;
        }
        let mut err = 0.0;
        for i in 0..n {
            let mut y5 = y[i];
            let mut e = 0.0;
            for s in 0..7 {
                y5 += step * B5[s] * w.k[s][i];
                e += step * (B5[s] - B4[s]) * w.k[s][i];
            }
            w.y5[i] = y5;
            let sc = atol + rtol * y[i].abs().max(y5.abs());
            err += (e / sc) * (e / sc);
        }
        // a non-finite trial step is treated as a rejection
        let err = libm::sqrt(err / n.max(1) as f64);
        let err = if err.is_finite() { err } else { f64::INFINITY };
        if err <= 1.0 {
            *t = if last { target } else { *t + step };
            y.copy_from_slice(&w.y5);
            check_finite(*t, y)?;
        }
        let factor = if err == 0.0 {
            5.0
        } else if err.is_infinite() {
            0.2
        } else {
            (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
        };
        // keep the controller's step when only clipped to hit the sample
        if !(last && err <= 1.0) {
            *h = step * factor;
        }
        if *h < min_h && *t < target {
            return Err(Error::StepUnderflow { t: *t });
        }
    }
    Ok(())
}
