//! Semiclassical propagation of quantum trajectories through ħ².
//!
//! The state carries the classical trajectory `u0`, its first quantum
//! correction `u1` and the Jacobi fields `J^i_{,k} = ∂u0^i/∂ξ^k` and
//! `J^i_{,kl} = ∂²u0^i/∂ξ^k∂ξ^l`. With `F^i = {ξ^i, H}` and the correction
//! operator
//!
//! ```text
//! Δg = -(1/16) I^{k1 l1} I^{k2 l2} J^a_{,k1k2} J^b_{,l1l2} g_{,ab}
//!      -(1/24) I^{k1 l1} I^{k2 l2} J^a_{,k1} J^b_{,k2} J^c_{,l1l2} g_{,abc}
//! ```
//!
//! the equations of motion are
//!
//! ```text
//! u0' = F(u0)
//! J^i_{,k}'  = F^i_{,m} J^m_{,k}
//! J^i_{,kl}' = F^i_{,mn} J^m_{,k} J^n_{,l} + F^i_{,m} J^m_{,kl}
//! u1^i'      = F^i_{,k} u1^k + ΔF^i
//! ```
//!
//! and an observable evolves as `f(u0) + ħ² (u1^i f_{,i} + Δf)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::ode::{integrate, Stepper};
use crate::oracle::{Jet, PhaseFunction};
use crate::{Error, Result};

/// Sign `s` with `I^{k, conj(k)} = s`.
fn sigma(n: usize, k: usize) -> f64 {
    if k < n {
        -1.0
    } else {
        1.0
    }
}

fn conj(n: usize, k: usize) -> usize {
    if k < n {
        k + n
    } else {
        k - n
    }
}

/// Index of `(k, l)`, `k ≤ l`, in the packed upper triangle of a `d×d`
/// symmetric matrix: `k·d - k(k-1)/2 + (l-k)`.
pub fn packed_index(d: usize, k: usize, l: usize) -> usize {
    let (k, l) = if k <= l { (k, l) } else { (l, k) };
    k * d - k * k.saturating_sub(1) / 2 + (l - k)
}

fn packed_len(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Numeric state of the semiclassical system for one initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryState {
    dim: usize,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    /// `J^i_{,k}` at `[i*dim + k]`.
    pub j1: Vec<f64>,
    /// `J^i_{,kl}` at `[i*P + packed_index(dim,k,l)]` with `P = dim(dim+1)/2`.
    pub j2: Vec<f64>,
}

impl TrajectoryState {
    /// Initial conditions: `u0 = ξ`, `J1 = 1`, `u1 = 0`, `J2 = 0`.
    pub fn initial(xi: &[f64]) -> Result<Self> {
        let d = xi.len();
        if d == 0 || !d.is_multiple_of(2) {
            return Err(Error::BadDimension(d));
        }
        let mut j1 = vec![0.0; d * d];
        for i in 0..d {
            j1[i * d + i] = 1.0;
        }
        Ok(TrajectoryState {
            dim: d,
            u0: xi.to_vec(),
            u1: vec![0.0; d],
            j1,
            j2: vec![0.0; d * packed_len(d)],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flat_len(dim: usize) -> usize {
        2 * dim + dim * dim + dim * packed_len(dim)
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(Self::flat_len(self.dim));
        v.extend_from_slice(&self.u0);
        v.extend_from_slice(&self.u1);
        v.extend_from_slice(&self.j1);
        v.extend_from_slice(&self.j2);
        v
    }

    pub fn from_flat(dim: usize, v: &[f64]) -> Result<Self> {
        if v.len() != Self::flat_len(dim) {
            return Err(Error::DimensionMismatch {
                expected: Self::flat_len(dim),
                found: v.len(),
            });
        }
        let (u0, rest) = v.split_at(dim);
        let (u1, rest) = rest.split_at(dim);
        let (j1, j2) = rest.split_at(dim * dim);
        Ok(TrajectoryState {
            dim,
            u0: u0.to_vec(),
            u1: u1.to_vec(),
            j1: j1.to_vec(),
            j2: j2.to_vec(),
        })
    }

    pub fn j1(&self, i: usize, k: usize) -> f64 {
        self.j1[i * self.dim + k]
    }

    pub fn j2(&self, i: usize, k: usize, l: usize) -> f64 {
        self.j2[i * packed_len(self.dim) + packed_index(self.dim, k, l)]
    }

    /// `J^{i,kl} = I^{k k'} I^{l l'} J^i_{,k'l'}`.
    pub fn j2_raised(&self, i: usize, k: usize, l: usize) -> f64 {
        let n = self.dim / 2;
        sigma(n, k) * sigma(n, l) * self.j2(i, conj(n, k), conj(n, l))
    }

    /// `u0 + ħ² u1`.
    pub fn quantum_point(&self, hbar: f64) -> Vec<f64> {
        self.u0.iter().zip(&self.u1).map(|(a, b)| a + hbar * hbar * b).collect()
    }

    /// Determinant of `J^i_{,k}`.
    pub fn det_j1(&self) -> f64 {
        determinant(&self.j1, self.dim)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &[f64], d: usize) -> f64 {
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..d {
        let mut piv = c;
        for r in c + 1..d {
            if a[r * d + c].abs() > a[piv * d + c].abs() {
                piv = r;
            }
        }
        if a[piv * d + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for k in 0..d {
                a.swap(c * d + k, piv * d + k);
            }
            det = -det;
        }
        let p = a[c * d + c];
        det *= p;
        for r in c + 1..d {
            let f = a[r * d + c] / p;
            for k in c..d {
                a[r * d + k] -= f * a[c * d + k];
            }
        }
    }
    det
}

/// Contracted Jacobi-field tensors entering `Δ`:
/// `A^{ab} = I^{k1l1}I^{k2l2} J^a_{,k1k2} J^b_{,l1l2}` and
/// `B^{abc} = I^{k1l1}I^{k2l2} J^a_{,k1} J^b_{,k2} J^c_{,l1l2}`.
fn correction_tensors(s: &TrajectoryState) -> (Vec<f64>, Vec<f64>) {
    let d = s.dim;
    let n = d / 2;
    let mut a_t = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            let mut acc = 0.0;
            for k1 in 0..d {
                for k2 in 0..d {
                    let w = sigma(n, k1) * sigma(n, k2);
                    acc += w * s.j2(a, k1, k2) * s.j2(b, conj(n, k1), conj(n, k2));
                }
            }
            a_t[a * d + b] = acc;
        }
    }
    let mut b_t = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut acc = 0.0;
                for k1 in 0..d {
                    for k2 in 0..d {
                        let w = sigma(n, k1) * sigma(n, k2);
                        acc += w * s.j1(a, k1) * s.j1(b, k2) * s.j2(c, conj(n, k1), conj(n, k2));
                    }
                }
                b_t[(a * d + b) * d + c] = acc;
            }
        }
    }
    (a_t, b_t)
}

/// `Δg` given the order-2 and order-3 derivative tensors of `g`.
fn apply_correction(a_t: &[f64], b_t: &[f64], g2: &[f64], g3: &[f64]) -> f64 {
    let s2: f64 = a_t.iter().zip(g2).map(|(x, y)| x * y).sum();
    let s3: f64 = b_t.iter().zip(g3).map(|(x, y)| x * y).sum();
    -s2 / 16.0 - s3 / 24.0
}

/// Derivatives of `F^i = {ξ^i, H} = s_i ∂_{conj(i)} H` from a jet of `H`:
/// returns the order-`r` tensor of `F^i` (row-major, `dim^r` entries).
fn flow_field_tensor(jet: &Jet, i: usize, r: usize) -> Vec<f64> {
    let d = jet.dim();
    let n = d / 2;
    let s = -sigma(n, i);
    let t = jet.tensor(r + 1);
    let block = d.pow(r as u32);
    let c = conj(n, i);
    t[c * block..(c + 1) * block].iter().map(|v| s * v).collect()
}

/// Partial derivative of the flow field `F^i` at `x`.
pub fn flow_field_derivative<H: PhaseFunction + ?Sized>(h: &H, x: &[f64], i: usize, idx: &[usize]) -> Result<f64> {
    let d = h.dim();
    let n = d / 2;
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, dim: d });
    }
    let mut full = Vec::with_capacity(idx.len() + 1);
    full.push(conj(n, i));
    full.extend_from_slice(idx);
    Ok(-sigma(n, i) * h.derivative(x, &full)?)
}

/// Time derivative of `state` under the Hamiltonian `h`.
pub fn rhs<H: PhaseFunction + ?Sized>(state: &TrajectoryState, h: &H) -> Result<TrajectoryState> {
    let d = state.dim;
    if h.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: d,
        });
    }
    let jet = h.jet(&state.u0, 4)?;
    let (a_t, b_t) = correction_tensors(state);
    let pl = packed_len(d);
    let mut out = TrajectoryState {
        dim: d,
        u0: vec![0.0; d],
        u1: vec![0.0; d],
        j1: vec![0.0; d * d],
        j2: vec![0.0; d * pl],
    };
    for i in 0..d {
        let f0 = flow_field_tensor(&jet, i, 0);
        let f1 = flow_field_tensor(&jet, i, 1);
        let f2 = flow_field_tensor(&jet, i, 2);
        let f3 = flow_field_tensor(&jet, i, 3);
        out.u0[i] = f0[0];
        for k in 0..d {
            out.j1[i * d + k] = (0..d).map(|m| f1[m] * state.j1(m, k)).sum();
        }
        for k in 0..d {
            for l in k..d {
                let mut acc = 0.0;
                for m in 0..d {
                    acc += f1[m] * state.j2(m, k, l);
                    for nn in 0..d {
                        acc += f2[m * d + nn] * state.j1(m, k) * state.j1(nn, l);
                    }
                }
                out.j2[i * pl + packed_index(d, k, l)] = acc;
            }
        }
        let lin: f64 = (0..d).map(|k| f1[k] * state.u1[k]).sum();
        out.u1[i] = lin + apply_correction(&a_t, &b_t, &f2, &f3);
    }
    Ok(out)
}

/// `γ⁽⁰⁾f + ħ²γ⁽²⁾f` at the given state.
pub fn evolve_observable<F: PhaseFunction + ?Sized>(f: &F, state: &TrajectoryState, hbar: f64) -> Result<f64> {
    if f.dim() != state.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: state.dim,
        });
    }
    let jet = f.jet(&state.u0, 3)?;
    let (a_t, b_t) = correction_tensors(state);
    let lin: f64 = state.u1.iter().zip(jet.tensor(1)).map(|(a, b)| a * b).sum();
    let corr = apply_correction(&a_t, &b_t, jet.tensor(2), jet.tensor(3));
    Ok(jet.value() + hbar * hbar * (lin + corr))
}

pub fn hamiltonian_derivatives<H: PhaseFunction + ?Sized>(h: &H, point: &[f64], idx: &[usize]) -> Result<f64> {
    h.derivative(point, idx)
}

/// One sampled state.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: TrajectoryState,
}

/// Integrates from the initial conditions at `xi` and returns the state at
/// each of `times` (non-decreasing, starting at or after 0).
pub fn propagate<H: PhaseFunction + ?Sized>(xi: &[f64], h: &H, times: &[f64], stepper: Stepper) -> Result<Vec<Sample>> {
    if xi.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: xi.len(),
        });
    }
    let d = xi.len();
    let init = TrajectoryState::initial(xi)?;
    let field = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let s = TrajectoryState::from_flat(d, y)?;
        let r = rhs(&s, h)?;
        dy.copy_from_slice(&r.to_flat());
        Ok(())
    };
    let states = integrate(field, &init.to_flat(), times, stepper)?;
    times
        .iter()
        .zip(states)
        .map(|(&t, y)| {
            Ok(Sample {
                t,
                state: TrajectoryState::from_flat(d, &y)?,
            })
        })
        .collect()
}

/// Final state at `t_end`.
pub fn propagate_to<H: PhaseFunction + ?Sized>(xi: &[f64], h: &H, t_end: f64, stepper: Stepper) -> Result<TrajectoryState> {
    let mut s = propagate(xi, h, &[t_end], stepper)?;
    Ok(s.pop().expect("one sample").state)
}

/// [`propagate`] for every point, in order; failures stay per point.
pub fn batch_propagate<H: PhaseFunction + ?Sized>(
    points: &[Vec<f64>],
    h: &H,
    times: &[f64],
    stepper: Stepper,
) -> Result<Vec<Result<Vec<Sample>>>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no initial points".into()));
    }
    Ok(points.iter().map(|x| propagate(x, h, times, stepper)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::PolyFunction;
    use crate::poly::{gauss_rat, PolySymbol};

    fn harmonic() -> PolyFunction {
        let q = PolySymbol::q(2, 0);
        let p = PolySymbol::p(2, 0);
        PolyFunction::new(&(&q.pow(2) + &p.pow(2)).scale(&gauss_rat(1, 2)), 0.0).unwrap()
    }

    fn quartic() -> PolyFunction {
        let q = PolySymbol::q(2, 0);
        let p = PolySymbol::p(2, 0);
        PolyFunction::new(&(&p.pow(2).scale(&gauss_rat(1, 2)) + &q.pow(4).scale(&gauss_rat(1, 4))), 0.0).unwrap()
    }

    #[test]
    fn packing_is_a_bijection() {
        for d in [2usize, 4, 6] {
            let mut seen = vec![false; packed_len(d)];
            for k in 0..d {
                for l in k..d {
                    let i = packed_index(d, k, l);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(packed_index(d, l, k), i);
                }
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn flat_round_trip() {
        let mut s = TrajectoryState::initial(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        s.j2[7] = 2.5;
        s.u1[3] = -1.0;
        assert_eq!(TrajectoryState::from_flat(4, &s.to_flat()).unwrap(), s);
    }

    #[test]
    fn harmonic_rhs_has_no_quantum_drive() {
        let mut s = TrajectoryState::initial(&[0.3, -0.8]).unwrap();
        s.j2.iter_mut().enumerate().for_each(|(i, v)| *v = 0.1 * i as f64);
        let r = rhs(&s, &harmonic()).unwrap();
        assert_eq!(r.u1, vec![0.0, 0.0]);
    }

    #[test]
    fn quartic_rhs_at_start_has_no_quantum_drive() {
        let s = TrajectoryState::initial(&[1.0, 0.0]).unwrap();
        let r = rhs(&s, &quartic()).unwrap();
        assert_eq!(r.u1, vec![0.0, 0.0]);
        assert_eq!(r.u0, vec![0.0, -1.0]);
    }

    #[test]
    fn zero_hamiltonian_keeps_state() {
        let h = PolyFunction::new(&PolySymbol::zero(2), 0.0).unwrap();
        let s = propagate_to(&[0.4, 0.9], &h, 1.0, Stepper::default()).unwrap();
        assert_eq!(s, TrajectoryState::initial(&[0.4, 0.9]).unwrap());
    }

    #[test]
    fn harmonic_quarter_turn() {
        let t = core::f64::consts::FRAC_PI_2;
        let s = propagate_to(&[1.0, 0.0], &harmonic(), t, Stepper::default()).unwrap();
        assert!(s.u0[0].abs() < 1e-10);
        assert!((s.u0[1] + 1.0).abs() < 1e-10);
        assert!(s.u1.iter().all(|v| v.abs() <= 1e-12));
        assert!((s.det_j1() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_matches_rk4() {
        let h = quartic();
        let a = propagate_to(&[1.0, 0.3], &h, 2.0, Stepper::default()).unwrap();
        let b = propagate_to(&[1.0, 0.3], &h, 2.0, Stepper::adaptive()).unwrap();
        for (x, y) in a.to_flat().iter().zip(b.to_flat()) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn linear_observable_reads_trajectory() {
        let h = quartic();
        let s = propagate_to(&[1.0, 0.3], &h, 0.5, Stepper::default()).unwrap();
        let q = PolyFunction::new(&PolySymbol::q(2, 0), 0.0).unwrap();
        let v = evolve_observable(&q, &s, 0.2).unwrap();
        assert!((v - (s.u0[0] + 0.04 * s.u1[0])).abs() < 1e-15);
    }

    #[test]
    fn raised_jacobi_field_uses_symplectic_contraction() {
        let mut s = TrajectoryState::initial(&[0.0, 0.0]).unwrap();
        // J^0_{,01} = 2
        s.j2[packed_index(2, 0, 1)] = 2.0;
        // J^{0,01} = I^{0 1} I^{1 0} J^0_{,10} = (-1)(1)(2)
        assert_eq!(s.j2_raised(0, 0, 1), -2.0);
    }

    #[test]
    fn batch_keeps_order_and_errors() {
        let h = harmonic();
        let pts = vec![vec![1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0]];
        let out = batch_propagate(&pts, &h, &[0.5], Stepper::default()).unwrap();
        assert!(out[1].is_err());
        assert!((out[2].as_ref().unwrap()[0].state.u0[0] - libm::sin(0.5)).abs() < 1e-12);
        assert!(batch_propagate(&[], &h, &[0.5], Stepper::default()).is_err());
    }
}
