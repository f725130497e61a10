//! Expectation values against Gaussian Wigner functions.
//!
//! States stay fixed; the caller supplies the evolved observable as a
//! function of the initial phase-space point.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::quadrature::{gauss_hermite, pairwise_sum};
use crate::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// `d×d` matrix (row-major).
pub fn cholesky(a: &[f64], d: usize) -> Result<Vec<f64>> {
    if a.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: a.len(),
        });
    }
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * d + i] = libm::sqrt(s);
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Ok(l)
}

/// Normalized Gaussian Wigner function with the given mean and covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianWignerState {
    mean: Vec<f64>,
    covariance: Vec<f64>,
    chol: Vec<f64>,
}

impl GaussianWignerState {
    pub fn new(mean: Vec<f64>, covariance: Vec<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 || !d.is_multiple_of(2) {
            return Err(Error::BadDimension(d));
        }
        if covariance.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: covariance.len(),
            });
        }
        for i in 0..d {
            for j in 0..i {
                let (a, b) = (covariance[i * d + j], covariance[j * d + i]);
                if libm::fabs(a - b) > 1e-12 * libm::fabs(a).max(libm::fabs(b)).max(1.0) {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let chol = cholesky(&covariance, d)?;
        Ok(GaussianWignerState {
            mean,
            covariance,
            chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    /// `mean + L z`.
    pub fn transform(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| self.mean[i] + (0..=i).map(|k| self.chol[i * d + k] * z[k]).sum::<f64>())
            .collect()
    }

    /// Tensor-product Gauss–Hermite nodes and weights (weights sum to 1).
    /// Limited to `n ≤ 3`.
    pub fn quadrature_grid(&self, degree: usize) -> Result<Vec<(Vec<f64>, f64)>> {
        let d = self.dim();
        if d > 6 {
            return Err(Error::InvalidArgument("tensor quadrature supports n ≤ 3".into()));
        }
        let (x, w) = gauss_hermite(degree)?;
        let sqrt2 = core::f64::consts::SQRT_2;
        let norm = 1.0 / libm::sqrt(core::f64::consts::PI);
        let mut out = Vec::with_capacity(degree.pow(d as u32));
        let mut idx = vec![0usize; d];
        loop {
            let z: Vec<f64> = idx.iter().map(|&i| sqrt2 * x[i]).collect();
            let weight: f64 = idx.iter().map(|&i| w[i] * norm).product();
            out.push((self.transform(&z), weight));
            let mut k = 0;
            while k < d {
                idx[k] += 1;
                if idx[k] < degree {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        Ok(out)
    }
}

/// Default nodes per axis.
pub const DEFAULT_DEGREE: usize = 20;

/// `∫ W(ξ) f(ξ) dξ` on the Gauss–Hermite tensor grid.
pub fn expectation_quadrature<F>(state: &GaussianWignerState, f: F, degree: usize) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let grid = state.quadrature_grid(degree)?;
    let values = evaluate_on(&grid, f)?;
    Ok(pairwise_sum(&values))
}

/// Weighted integrand values `w_k f(x_k)` in grid order.
pub fn evaluate_on<F>(grid: &[(Vec<f64>, f64)], mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    grid.iter().map(|(x, w)| Ok(w * f(x)?)).collect()
}

/// Points drawn from the state with a ChaCha8 stream seeded by `seed`.
pub fn sample_points(state: &GaussianWignerState, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = state.dim();
    (0..samples)
        .map(|_| {
            let z: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            state.transform(&z)
        })
        .collect()
}

/// Sample mean and its standard error from precomputed values.
pub fn mean_and_stderr(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mean = pairwise_sum(values) / n as f64;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n as f64 - 1.0);
    Ok((mean, libm::sqrt(var / n as f64)))
}

/// Monte Carlo estimate `(mean, stderr)`; deterministic for a fixed seed.
pub fn expectation_montecarlo<F>(state: &GaussianWignerState, mut f: F, samples: usize, seed: u64) -> Result<(f64, f64)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let pts = sample_points(state, samples, seed);
    let values = pts.iter().map(|x| f(x)).collect::<Result<Vec<_>>>()?;
    mean_and_stderr(&values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> GaussianWignerState {
        GaussianWignerState::new(vec![0.5, -0.2], vec![0.3, 0.1, 0.1, 0.2]).unwrap()
    }

    #[test]
    fn normalization() {
        let s = state();
        let v = expectation_quadrature(&s, |_| Ok(1.0), DEFAULT_DEGREE).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        let (m, e) = expectation_montecarlo(&s, |_| Ok(1.0), 100, 7).unwrap();
        assert_eq!((m, e), (1.0, 0.0));
    }

    #[test]
    fn gaussian_moments() {
        let s = state();
        let mq = expectation_quadrature(&s, |x| Ok(x[0]), 4).unwrap();
        assert!((mq - 0.5).abs() < 1e-14);
        let cov = expectation_quadrature(&s, |x| Ok((x[0] - 0.5) * (x[1] + 0.2)), 4).unwrap();
        assert!((cov - 0.1).abs() < 1e-14);
        // E[(q - m)^4] = 3 σ⁴
        let k4 = expectation_quadrature(&s, |x| Ok(libm::pow(x[0] - 0.5, 4.0)), 3).unwrap();
        assert!((k4 - 3.0 * 0.09).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_covariance() {
        assert_eq!(
            GaussianWignerState::new(vec![0.0, 0.0], vec![1.0, 2.0, 2.0, 1.0]),
            Err(Error::NotPositiveDefinite)
        );
        assert_eq!(
            GaussianWignerState::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.0, 1.0]),
            Err(Error::NotPositiveDefinite)
        );
        assert!(GaussianWignerState::new(vec![0.0; 8], vec![0.0; 64]).is_err());
    }

    #[test]
    fn montecarlo_is_deterministic_and_consistent() {
        let s = state();
        let f = |x: &[f64]| Ok(x[0] * x[0] + x[1]);
        let a = expectation_montecarlo(&s, f, 4000, 42).unwrap();
        let b = expectation_montecarlo(&s, f, 4000, 42).unwrap();
        assert_eq!(a, b);
        let exact = expectation_quadrature(&s, f, DEFAULT_DEGREE).unwrap();
        assert!((a.0 - exact).abs() < 3.0 * a.1, "{a:?} vs {exact}");
    }

    #[test]
    fn grid_limit() {
        let s = GaussianWignerState::new(vec![0.0; 8], {
            let mut c = vec![0.0; 64];
            for i in 0..8 {
                c[i * 8 + i] = 1.0;
            }
            c
        })
        .unwrap();
        assert!(s.quadrature_grid(3).is_err());
        let (m, _) = expectation_montecarlo(&s, |x| Ok(x[3]), 10, 1).unwrap();
        assert!(m.is_finite());
    }
}
