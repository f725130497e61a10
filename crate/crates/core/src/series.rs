//! Truncated power series with symbol coefficients.
//!
//! [`TauSeries`] is a series in one evolution parameter, [`BiSeries`] in two
//! (used for the two-time composition checks and for flows seen through a
//! second, unitary map). Both implement [`SymbolSeries`], which is what
//! [`compose`] needs to substitute series into polynomial symbols.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::moyal::{moyal_and_circ, poisson_bracket, star_product};
use crate::poly::{Gaussian, PolySymbol, Rational};
use crate::{Error, Result};

/// Binary operation used to multiply symbol coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Star,
    Dot,
    Circ,
    Wedge,
    Poisson,
}

pub fn apply_product(a: &PolySymbol, b: &PolySymbol, op: Product) -> Result<PolySymbol> {
    if a.is_zero() || b.is_zero() {
        a.check_dim(b)?;
        return Ok(PolySymbol::zero(a.dim()));
    }
    match op {
        Product::Star => star_product(a, b),
        Product::Dot => a.multiply(b),
        Product::Circ => Ok(moyal_and_circ(a, b)?.0),
        Product::Wedge => Ok(moyal_and_circ(a, b)?.1),
        Product::Poisson => poisson_bracket(a, b),
    }
}

/// Ring-like interface shared by plain symbols and truncated series.
pub trait SymbolSeries: Clone {
    fn symbol_dim(&self) -> usize;
    /// The zero element with the same truncation.
    fn zero_like(&self) -> Self;
    /// `c` embedded as the parameter-independent term.
    fn constant_like(&self, c: &PolySymbol) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_sub(&self, other: &Self) -> Result<Self>;
    /// Multiplies every coefficient by `c · ħ^hbar_power`.
    fn scale_term(&self, c: &Gaussian, hbar_power: u32) -> Self;
    fn product(&self, other: &Self, op: Product) -> Result<Self>;
    fn is_zero_series(&self) -> bool;
}

impl SymbolSeries for PolySymbol {
    fn symbol_dim(&self) -> usize {
        self.dim()
    }
    fn zero_like(&self) -> Self {
        PolySymbol::zero(self.dim())
    }
    fn constant_like(&self, c: &PolySymbol) -> Self {
        c.clone()
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn scale_term(&self, c: &Gaussian, hbar_power: u32) -> Self {
        self.scale(c).mul_hbar(hbar_power)
    }
    fn product(&self, other: &Self, op: Product) -> Result<Self> {
        apply_product(self, other, op)
    }
    fn is_zero_series(&self) -> bool {
        self.is_zero()
    }
}

/// Truncated series `Σ_{s=0}^{K} τ^s c_s` with symbol coefficients.
///
/// Coefficient `s` already carries any `1/s!` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSeries {
    coeffs: Vec<PolySymbol>,
}

impl TauSeries {
    pub fn new(coeffs: Vec<PolySymbol>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("series needs at least one coefficient".into()))?;
        for c in &coeffs {
            first.check_dim(c)?;
        }
        Ok(TauSeries { coeffs })
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        TauSeries {
            coeffs: vec![PolySymbol::zero(dim); order + 1],
        }
    }

    pub fn constant(c: PolySymbol, order: usize) -> Self {
        let dim = c.dim();
        let mut coeffs = vec![PolySymbol::zero(dim); order + 1];
        coeffs[0] = c;
        TauSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeff(&self, s: usize) -> &PolySymbol {
        &self.coeffs[s]
    }

    pub fn coeffs(&self) -> &[PolySymbol] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<PolySymbol> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, s: usize, c: PolySymbol) {
        self.coeffs[s] = c;
    }

    pub fn truncate(&self, order: usize) -> TauSeries {
        let keep = order.min(self.order()) + 1;
        TauSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn map<F>(&self, mut f: F) -> Result<TauSeries>
    where
        F: FnMut(&PolySymbol) -> Result<PolySymbol>,
    {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(TauSeries { coeffs })
    }

    /// Coefficient-wise ħ-grade extraction.
    pub fn grade_extract(&self, k: u32) -> TauSeries {
        TauSeries {
            coeffs: self.coeffs.iter().map(|c| c.grade_extract(k)).collect(),
        }
    }

    pub fn truncate_hbar(&self, max: u32) -> TauSeries {
        TauSeries {
            coeffs: self.coeffs.iter().map(|c| c.truncate_hbar(max)).collect(),
        }
    }

    /// Multiplies by `τ^k`, keeping the truncation order.
    pub fn shift(&self, k: usize) -> TauSeries {
        let dim = self.dim();
        let order = self.order();
        let mut coeffs = vec![PolySymbol::zero(dim); order + 1];
        for s in 0..=order {
            if s + k <= order {
                coeffs[s + k] = self.coeffs[s].clone();
            }
        }
        TauSeries { coeffs }
    }

    /// Substitutes `τ -> -τ`.
    pub fn reverse_time(&self) -> TauSeries {
        TauSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| if s % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Value of the truncated series at a numeric point.
    pub fn evaluate(&self, point: &[f64], hbar: f64, tau: f64) -> Result<Complex<f64>> {
        let mut acc = Complex::new(0.0, 0.0);
        let mut w = 1.0;
        for c in &self.coeffs {
            acc += c.evaluate(point, hbar)? * w;
            w *= tau;
        }
        Ok(acc)
    }
}

impl SymbolSeries for TauSeries {
    fn symbol_dim(&self) -> usize {
        self.dim()
    }
    fn zero_like(&self) -> Self {
        TauSeries::zero(self.dim(), self.order())
    }
    fn constant_like(&self, c: &PolySymbol) -> Self {
        TauSeries::constant(c.clone(), self.order())
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|s| self.coeffs[s].checked_add(&other.coeffs[s]))
            .collect::<Result<Vec<_>>>()?;
        Ok(TauSeries { coeffs })
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|s| self.coeffs[s].checked_sub(&other.coeffs[s]))
            .collect::<Result<Vec<_>>>()?;
        Ok(TauSeries { coeffs })
    }
    fn scale_term(&self, c: &Gaussian, hbar_power: u32) -> Self {
        TauSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| x.scale(c).mul_hbar(hbar_power))
                .collect(),
        }
    }
    fn product(&self, other: &Self, op: Product) -> Result<Self> {
        let order = self.order().min(other.order());
        let dim = self.dim();
        let mut coeffs = vec![PolySymbol::zero(dim); order + 1];
        for (a, ca) in self.coeffs.iter().enumerate().take(order + 1) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate().take(order + 1 - a) {
                if cb.is_zero() {
                    continue;
                }
                let t = apply_product(ca, cb, op)?;
                coeffs[a + b] = coeffs[a + b].checked_add(&t)?;
            }
        }
        Ok(TauSeries { coeffs })
    }
    fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Truncated two-parameter series `Σ σ^a τ^b c_{ab}` over the index set
/// `a ≤ max_a, b ≤ max_b, a + b ≤ max_total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    dim: usize,
    max_a: usize,
    max_b: usize,
    max_total: usize,
    coeffs: Vec<Vec<PolySymbol>>,
}

impl BiSeries {
    pub fn zero(dim: usize, max_a: usize, max_b: usize, max_total: usize) -> Self {
        let coeffs = (0..=max_a.min(max_total))
            .map(|a| vec![PolySymbol::zero(dim); max_b.min(max_total - a) + 1])
            .collect();
        BiSeries {
            dim,
            max_a,
            max_b,
            max_total,
            coeffs,
        }
    }

    /// Embeds a series in the first parameter.
    pub fn from_first(s: &TauSeries, max_b: usize, max_total: usize) -> Self {
        let mut out = Self::zero(s.dim(), s.order(), max_b, max_total);
        for a in 0..out.coeffs.len() {
            out.coeffs[a][0] = s.coeff(a).clone();
        }
        out
    }

    /// Embeds a series in the second parameter.
    pub fn from_second(s: &TauSeries, max_a: usize, max_total: usize) -> Self {
        let mut out = Self::zero(s.dim(), max_a, s.order(), max_total);
        for b in 0..out.coeffs[0].len() {
            out.coeffs[0][b] = s.coeff(b).clone();
        }
        out
    }

    pub fn bounds(&self) -> (usize, usize, usize) {
        (self.max_a, self.max_b, self.max_total)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.coeffs.len() && b < self.coeffs[a].len()
    }

    pub fn coeff(&self, a: usize, b: usize) -> &PolySymbol {
        &self.coeffs[a][b]
    }

    pub fn set_coeff(&mut self, a: usize, b: usize, c: PolySymbol) {
        self.coeffs[a][b] = c;
    }

    /// Iterates `(a, b, coefficient)` over the index set.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &PolySymbol)> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().enumerate().map(move |(b, c)| (a, b, c)))
    }

    /// Multiplies by `σ^da τ^db`.
    pub fn shift(&self, da: usize, db: usize) -> BiSeries {
        let mut out = self.zero_like();
        for (a, b, c) in self.entries() {
            if out.contains(a + da, b + db) {
                out.coeffs[a + da][b + db] = c.clone();
            }
        }
        out
    }

    fn combine(&self, other: &Self) -> BiSeries {
        BiSeries::zero(
            self.dim,
            self.max_a.min(other.max_a),
            self.max_b.min(other.max_b),
            self.max_total.min(other.max_total),
        )
    }
}

impl SymbolSeries for BiSeries {
    fn symbol_dim(&self) -> usize {
        self.dim
    }
    fn zero_like(&self) -> Self {
        BiSeries::zero(self.dim, self.max_a, self.max_b, self.max_total)
    }
    fn constant_like(&self, c: &PolySymbol) -> Self {
        let mut out = self.zero_like();
        out.coeffs[0][0] = c.clone();
        out
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.combine(other);
        for a in 0..out.coeffs.len() {
            for b in 0..out.coeffs[a].len() {
                out.coeffs[a][b] = self.coeffs[a][b].checked_add(&other.coeffs[a][b])?;
            }
        }
        Ok(out)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.combine(other);
        for a in 0..out.coeffs.len() {
            for b in 0..out.coeffs[a].len() {
                out.coeffs[a][b] = self.coeffs[a][b].checked_sub(&other.coeffs[a][b])?;
            }
        }
        Ok(out)
    }
    fn scale_term(&self, c: &Gaussian, hbar_power: u32) -> Self {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for x in row.iter_mut() {
                *x = x.scale(c).mul_hbar(hbar_power);
            }
        }
        out
    }
    fn product(&self, other: &Self, op: Product) -> Result<Self> {
        let mut out = self.combine(other);
        for (a1, b1, x) in self.entries() {
            if x.is_zero() || !out.contains(a1, b1) {
                continue;
            }
            for (a2, b2, y) in other.entries() {
                if y.is_zero() || !out.contains(a1 + a2, b1 + b2) {
                    continue;
                }
                let t = apply_product(x, y, op)?;
                out.coeffs[a1 + a2][b1 + b2] = out.coeffs[a1 + a2][b1 + b2].checked_add(&t)?;
            }
        }
        Ok(out)
    }
    fn is_zero_series(&self) -> bool {
        self.entries().all(|(_, _, c)| c.is_zero())
    }
}

/// Substitutes the components `comps` into the polynomial `f`.
///
/// With `Product::Star` this is the star-composition `f(⋆u)`: every monomial
/// `ξ^α` becomes the fully symmetrized product of the components, computed as
/// `(α!/|α|!) · W_α` where `W_α = Σ_j W_{α-e_j} ⋆ u^j` sums all distinct
/// words with content `α`. With `Product::Dot` the same recursion yields the
/// ordinary composition `f(u)`.
pub fn compose<S: SymbolSeries>(f: &PolySymbol, comps: &[S], op: Product) -> Result<S> {
    if comps.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: comps.len(),
        });
    }
    let base = &comps[0];
    let target_dim = base.symbol_dim();
    for c in comps {
        if c.symbol_dim() != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: c.symbol_dim(),
            });
        }
    }
    let mut result = base.zero_like();
    if f.is_zero() {
        return Ok(result);
    }

    // every multi-index below a support monomial is needed by the recursion
    let mut needed: BTreeMap<(u32, Vec<u32>), ()> = BTreeMap::new();
    for (m, _, _) in f.terms() {
        let e = m.exponents();
        let mut cur = vec![0u32; e.len()];
        loop {
            needed.insert((cur.iter().sum(), cur.clone()), ());
            let mut i = 0;
            while i < cur.len() {
                if cur[i] < e[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
    }

    let one = base.constant_like(&PolySymbol::one(target_dim));
    let mut words: BTreeMap<Vec<u32>, S> = BTreeMap::new();
    for ((deg, alpha), ()) in needed {
        if deg == 0 {
            words.insert(alpha, one.clone());
            continue;
        }
        let mut acc = base.zero_like();
        for j in 0..alpha.len() {
            if alpha[j] == 0 {
                continue;
            }
            let mut prev = alpha.clone();
            prev[j] -= 1;
            let w = &words[&prev];
            if w.is_zero_series() {
                continue;
            }
            acc = acc.try_add(&w.product(&comps[j], op)?)?;
        }
        words.insert(alpha, acc);
    }

    for (m, h, c) in f.terms() {
        let alpha = m.exponents();
        let deg: u32 = alpha.iter().sum();
        let mut num = BigInt::one();
        for &a in alpha {
            num *= factorial(a);
        }
        let weight = Rational::new(num, factorial(deg));
        let coeff = c * Complex::new(weight, Rational::zero());
        let w = &words[alpha];
        result = result.try_add(&w.scale_term(&coeff, h))?;
    }
    Ok(result)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
