//! Star product through ħ² for smooth numeric symbols.
//!
//! ```text
//! f ∘ g = fg - (ħ²/8) f𝒫²g + O(ħ⁴)
//! f ∧ g = f𝒫g - (ħ²/24) f𝒫³g + O(ħ⁴)
//! ```
//!
//! The derivatives come from any [`PhaseFunction`].

use alloc::vec;
use alloc::vec::Vec;

use crate::oracle::{AnalyticFunction, FiniteDifference, PhaseFunction};
use crate::symplectic::SymplecticStructure;
use crate::{Error, Result};

/// ħ⁰ and ħ² coefficients of `f ∘ g` and `f ∧ g` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarCoefficients {
    pub circ0: f64,
    pub circ2: f64,
    pub wedge0: f64,
    pub wedge2: f64,
}

impl StarCoefficients {
    pub fn circ(&self, hbar: f64) -> f64 {
        self.circ0 + hbar * hbar * self.circ2
    }

    pub fn wedge(&self, hbar: f64) -> f64 {
        self.wedge0 + hbar * hbar * self.wedge2
    }
}

/// `f 𝒫^s g` at `x`, for `s ≤ 3`.
pub fn poisson_power_value<F: PhaseFunction, G: PhaseFunction>(f: &F, g: &G, x: &[f64], s: usize) -> Result<f64> {
    let dim = f.dim();
    if g.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: g.dim(),
        });
    }
    let sym = SymplecticStructure::from_dim(dim)?;
    let jf = f.jet(x, s)?;
    let jg = g.jet(x, s)?;
    // 𝒫 pairs ∂_k on f with ∂_{conj k} on g, sign +1 for coordinates
    let mut total = 0.0;
    let mut ks = vec![0usize; s];
    let mut ls = vec![0usize; s];
    loop {
        let mut sign = 1.0;
        for (k, l) in ks.iter().zip(ls.iter_mut()) {
            *l = sym.conjugate(*k);
            if !sym.is_coordinate(*k) {
                sign = -sign;
            }
        }
        total += sign * jf.get(&ks) * jg.get(&ls);
        let mut i = 0;
        while i < s {
            ks[i] += 1;
            if ks[i] < dim {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
        if i == s {
            break;
        }
    }
    Ok(total)
}

pub fn star_coefficients<F: PhaseFunction, G: PhaseFunction>(f: &F, g: &G, x: &[f64]) -> Result<StarCoefficients> {
    let p: Vec<f64> = (0..4).map(|s| poisson_power_value(f, g, x, s)).collect::<Result<_>>()?;
    Ok(StarCoefficients {
        circ0: p[0],
        circ2: -p[2] / 8.0,
        wedge0: p[1],
        wedge2: -p[3] / 24.0,
    })
}

/// `(f ∘ g, f ∧ g)` at `point`, truncated after ħ².
pub fn star_truncated<F: PhaseFunction, G: PhaseFunction>(f: &F, g: &G, point: &[f64], hbar: f64) -> Result<(f64, f64)> {
    let c = star_coefficients(f, g, point)?;
    Ok((c.circ(hbar), c.wedge(hbar)))
}

/// Shipped canonical maps `(Q, P) -> (q, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalMap {
    /// Generating function `S₂(q, P) = qP`.
    Identity,
    /// Generating function `S₂(q, P) = qP + q³ + qP²`, giving
    /// `q = Q/(1+2P)` and `p = P + 3q² + P²`.
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// Computed and closed-form ħ² coefficients of `q ∘ p` and `q ∧ p` in the
/// new variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingMapReport {
    pub point: [f64; 2],
    pub hbar: f64,
    pub coefficients: StarCoefficients,
    pub circ_value: f64,
    pub wedge_value: f64,
    pub computed_circ_h2: f64,
    pub expected_circ_h2: f64,
    pub computed_wedge_h2: f64,
    pub expected_wedge_h2: f64,
    /// Relative errors (absolute when the expected value is zero).
    pub abs_rel_errors: [f64; 2],
}

fn rel_err(got: f64, want: f64) -> f64 {
    let d = libm::fabs(got - want);
    if want == 0.0 {
        d
    } else {
        d / libm::fabs(want)
    }
}

/// `∂_P^j (1+2P)^{-k}`.
fn inv_power_derivative(a: f64, k: i32, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c *= -2.0 * (k + i as i32) as f64;
    }
    c * libm::pow(a, -(k + j as i32) as f64)
}

fn split_index(idx: &[usize]) -> (usize, usize) {
    let i = idx.iter().filter(|&&k| k == 0).count();
    (i, idx.len() - i)
}

fn cubic_q(x: &[f64], idx: &[usize]) -> Option<f64> {
    let (i, j) = split_index(idx);
    let a = 1.0 + 2.0 * x[1];
    let dq = match i {
        0 => x[0],
        1 => 1.0,
        _ => 0.0,
    };
    Some(dq * inv_power_derivative(a, 1, j))
}

fn cubic_p(x: &[f64], idx: &[usize]) -> Option<f64> {
    let (i, j) = split_index(idx);
    let (big_q, big_p) = (x[0], x[1]);
    let a = 1.0 + 2.0 * big_p;
    let dq2 = match i {
        0 => big_q * big_q,
        1 => 2.0 * big_q,
        2 => 2.0,
        _ => 0.0,
    };
    let quad = match (i, j) {
        (0, 0) => big_p + big_p * big_p,
        (0, 1) => 1.0 + 2.0 * big_p,
        (0, 2) => 2.0,
        _ => 0.0,
    };
    Some(quad + 3.0 * dq2 * inv_power_derivative(a, 2, j))
}

fn identity_component(k: usize) -> impl Fn(&[f64], &[usize]) -> Option<f64> + Send + Sync + 'static {
    move |x, idx| {
        Some(match idx {
            [] => x[k],
            [l] if *l == k => 1.0,
            _ => 0.0,
        })
    }
}

fn map_values(map: CanonicalMap, x: &[f64]) -> (f64, f64) {
    match map {
        CanonicalMap::Identity => (x[0], x[1]),
        CanonicalMap::Cubic => {
            let q = x[0] / (1.0 + 2.0 * x[1]);
            (q, x[1] + 3.0 * q * q + x[1] * x[1])
        }
    }
}

/// Star-product coefficients of the map components at `(Q, P)`.
pub fn generating_map_report(map: CanonicalMap, big_q: f64, big_p: f64, hbar: f64, mode: DerivativeMode) -> Result<GeneratingMapReport> {
    let a = 1.0 + 2.0 * big_p;
    if map == CanonicalMap::Cubic && a == 0.0 {
        return Err(Error::Singular("1 + 2P = 0".into()));
    }
    let point = [big_q, big_p];
    let coefficients = match (mode, map) {
        (DerivativeMode::Analytic, CanonicalMap::Cubic) => {
            let q = AnalyticFunction::new(2, 3, cubic_q);
            let p = AnalyticFunction::new(2, 3, cubic_p);
            star_coefficients(&q, &p, &point)?
        }
        (DerivativeMode::Analytic, CanonicalMap::Identity) => {
            let q = AnalyticFunction::new(2, 3, identity_component(0));
            let p = AnalyticFunction::new(2, 3, identity_component(1));
            star_coefficients(&q, &p, &point)?
        }
        (DerivativeMode::FiniteDifference, _) => {
            let q = FiniteDifference::new(2, 3, move |x| map_values(map, x).0);
            let p = FiniteDifference::new(2, 3, move |x| map_values(map, x).1);
            star_coefficients(&q, &p, &point)?
        }
    };
    let (expected_circ_h2, expected_wedge_h2) = match map {
        CanonicalMap::Identity => (0.0, 0.0),
        CanonicalMap::Cubic => (6.0 * big_q * libm::pow(a, -5.0), 24.0 * libm::pow(a, -6.0)),
    };
    let report = GeneratingMapReport {
        point,
        hbar,
        coefficients,
        circ_value: coefficients.circ(hbar),
        wedge_value: coefficients.wedge(hbar),
        computed_circ_h2: coefficients.circ2,
        expected_circ_h2,
        computed_wedge_h2: coefficients.wedge2,
        expected_wedge_h2,
        abs_rel_errors: [
            rel_err(coefficients.circ2, expected_circ_h2),
            rel_err(coefficients.wedge2, expected_wedge_h2),
        ],
    };
    if !report.circ_value.is_finite() || !report.wedge_value.is_finite() {
        return Err(Error::Singular("non-finite star product".into()));
    }
    Ok(report)
}

/// The cubic map with analytic derivatives.
pub fn generating_map_example(big_q: f64, big_p: f64, hbar: f64) -> Result<GeneratingMapReport> {
    generating_map_report(CanonicalMap::Cubic, big_q, big_p, hbar, DerivativeMode::Analytic)
}
