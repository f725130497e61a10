//! Numeric phase-space functions with partial derivatives.
//!
//! [`PhaseFunction`] is what the semiclassical propagator and the numeric
//! star product consume: a real function on `R^{2n}` that can report its
//! partial derivatives up to some order. Three backings are provided:
//! exact polynomial differentiation ([`PolyFunction`]), analytic closures
//! ([`AnalyticFunction`]) and central finite differences
//! ([`FiniteDifference`]).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{rational_to_f64, PolySymbol};
use crate::{Error, Result};

/// All partial derivatives of a function up to some order at one point,
/// stored as full (symmetric) tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    dim: usize,
    /// `tensors[r]` holds the order-`r` derivatives, row-major, `dim^r` entries.
    tensors: Vec<Vec<f64>>,
}

impl Jet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.tensors.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.tensors[0][0]
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for &i in idx {
            flat = flat * self.dim + i;
        }
        self.tensors[idx.len()][flat]
    }

    /// The order-`r` tensor, row-major.
    pub fn tensor(&self, r: usize) -> &[f64] {
        &self.tensors[r]
    }
}

/// Sorted multi-indices `i_1 ≤ … ≤ i_r` over `0..dim`.
pub fn sorted_multi_indices(dim: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; r];
    if r == 0 {
        out.push(Vec::new());
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut k = r;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] + 1 < dim {
                cur[k] += 1;
                let v = cur[k];
                for c in cur.iter_mut().skip(k + 1) {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// Writes `value` into every permutation slot of the sorted index `idx`.
fn fill_symmetric(tensor: &mut [f64], dim: usize, idx: &[usize], value: f64) {
    let mut perm = idx.to_vec();
    // idx is sorted, so iterating lexicographic permutations from it visits each once
    loop {
        let mut flat = 0;
        for &i in &perm {
            flat = flat * dim + i;
        }
        tensor[flat] = value;
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A real function on phase space with partial derivatives.
pub trait PhaseFunction {
    fn dim(&self) -> usize;

    /// Highest derivative order available.
    fn max_order(&self) -> usize;

    /// `∂^{|idx|} f / ∂ξ^{idx_1} … ∂ξ^{idx_r}` at `x`; `idx = []` is the value.
    fn derivative(&self, x: &[f64], idx: &[usize]) -> Result<f64>;

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.derivative(x, &[])
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.len(),
            });
        }
        if order > self.max_order() {
            return Err(Error::DerivativeOrder {
                requested: order,
                available: self.max_order(),
            });
        }
        let mut tensors = Vec::with_capacity(order + 1);
        let mut size = 1;
        for r in 0..=order {
            let mut t = vec![0.0; size];
            for idx in sorted_multi_indices(dim, r) {
                let v = self.derivative(x, &idx)?;
                fill_symmetric(&mut t, dim, &idx, v);
            }
            tensors.push(t);
            size *= dim;
        }
        Ok(Jet { dim, tensors })
    }
}

impl<T: PhaseFunction + ?Sized> PhaseFunction for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn derivative(&self, x: &[f64], idx: &[usize]) -> Result<f64> {
        (**self).derivative(x, idx)
    }
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        (**self).jet(x, order)
    }
}

/// Floating-point image of a polynomial: `(exponents, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq)]
struct RealPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl RealPoly {
    fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= libm::pow(*xi, f64::from(k));
                }
            }
            acc += m;
        }
        acc
    }
}

/// A Hermitian polynomial symbol with ħ fixed, differentiated exactly.
///
/// Every derivative polynomial up to `max_order` is formed with exact
/// arithmetic on construction and only evaluated in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFunction {
    dim: usize,
    max_order: usize,
    index: BTreeMap<Vec<usize>, RealPoly>,
}

impl PolyFunction {
    /// Derivatives up to order 5.
    pub fn new(f: &PolySymbol, hbar: f64) -> Result<Self> {
        Self::with_order(f, hbar, 5)
    }

    pub fn with_order(f: &PolySymbol, hbar: f64, max_order: usize) -> Result<Self> {
        if !f.is_hermitian_symbol() {
            return Err(Error::NonHermitian(alloc::format!("{f}")));
        }
        let dim = f.dim();
        let mut index = BTreeMap::new();
        for r in 0..=max_order {
            for idx in sorted_multi_indices(dim, r) {
                let d = f.derivative(&idx)?;
                let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
                for (m, h, c) in d.terms() {
                    let v = rational_to_f64(&c.re) * libm::pow(hbar, f64::from(h));
                    *acc.entry(m.exponents().to_vec()).or_insert(0.0) += v;
                }
                let terms = acc.into_iter().filter(|(_, c)| *c != 0.0).collect();
                index.insert(idx, RealPoly { terms });
            }
        }
        Ok(PolyFunction { dim, max_order, index })
    }
}

impl PhaseFunction for PolyFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn max_order(&self) -> usize {
        self.max_order
    }
    fn derivative(&self, x: &[f64], idx: &[usize]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if idx.len() > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: idx.len(),
                available: self.max_order,
            });
        }
        let mut key = idx.to_vec();
        key.sort_unstable();
        if let Some(&bad) = key.iter().find(|&&k| k >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        Ok(self.index[&key].eval(x))
    }
}

type DerivFn = dyn Fn(&[f64], &[usize]) -> Option<f64> + Send + Sync;

/// Derivatives supplied by a closure `(x, idx) -> Some(value)`.
pub struct AnalyticFunction {
    dim: usize,
    max_order: usize,
    f: Box<DerivFn>,
}

impl AnalyticFunction {
    pub fn new<F>(dim: usize, max_order: usize, f: F) -> Self
    where
        F: Fn(&[f64], &[usize]) -> Option<f64> + Send + Sync + 'static,
    {
        AnalyticFunction {
            dim,
            max_order,
            f: Box::new(f),
        }
    }
}

impl PhaseFunction for AnalyticFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn max_order(&self) -> usize {
        self.max_order
    }
    fn derivative(&self, x: &[f64], idx: &[usize]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if idx.len() > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: idx.len(),
                available: self.max_order,
            });
        }
        (self.f)(x, idx).ok_or(Error::DerivativeOrder {
            requested: idx.len(),
            available: self.max_order,
        })
    }
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Central finite differences of a closure.
///
/// An order-`r` derivative uses the `2^r`-point product stencil with step
/// `h_k = ε^{1/(r+2)} · max(1, |x_k|)` along each differentiated axis.
pub struct FiniteDifference {
    dim: usize,
    max_order: usize,
    f: Box<ValueFn>,
}

impl FiniteDifference {
    pub fn new<F>(dim: usize, max_order: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        FiniteDifference {
            dim,
            max_order,
            f: Box::new(f),
        }
    }

    pub fn step(order: usize, x: f64) -> f64 {
        libm::pow(f64::EPSILON, 1.0 / (order as f64 + 2.0)) * libm::fabs(x).max(1.0)
    }
}

impl PhaseFunction for FiniteDifference {
    fn dim(&self) -> usize {
        self.dim
    }
    fn max_order(&self) -> usize {
        self.max_order
    }
    fn derivative(&self, x: &[f64], idx: &[usize]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let r = idx.len();
        if r > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: r,
                available: self.max_order,
            });
        }
        if let Some(&bad) = idx.iter().find(|&&k| k >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        let steps: Vec<f64> = idx.iter().map(|&k| Self::step(r, x[k])).collect();
        let mut acc = 0.0;
        let mut y = x.to_vec();
        for mask in 0u32..(1 << r) {
            y.copy_from_slice(x);
            let mut sign = 1.0;
            for (bit, (&k, &h)) in idx.iter().zip(&steps).enumerate() {
                if mask & (1 << bit) != 0 {
                    y[k] -= h;
                    sign = -sign;
                } else {
                    y[k] += h;
                }
            }
            acc += sign * (self.f)(&y);
        }
        let denom: f64 = steps.iter().map(|h| 2.0 * h).product();
        Ok(acc / denom)
    }
}
