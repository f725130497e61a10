//! Exact sparse polynomial symbols over phase space.
//!
//! A [`PolySymbol`] is a finite sum `Σ c · ħ^h · ξ^e` where `ξ^e` is a
//! monomial in the `2n` canonical variables and `c` a Gaussian rational.
//! Terms live in a sorted map keyed by `(exponents, ħ-power)`; zero
//! coefficients are never stored, so structural equality is mathematical
//! equality.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;
pub type Gaussian = Complex<Rational>;

/// Exponent vector of length `2n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// One coefficient entry of a symbol at a fixed monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub re: Rational,
    pub im: Rational,
    pub hbar_power: u32,
}

impl Coefficient {
    pub fn value(&self) -> Gaussian {
        Complex::new(self.re.clone(), self.im.clone())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

pub fn gauss_int(n: i64) -> Gaussian {
    Complex::new(rat(n, 1), Rational::zero())
}

pub fn gauss_rat(n: i64, d: i64) -> Gaussian {
    Complex::new(rat(n, d), Rational::zero())
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolySymbol {
    dim: usize,
    terms: BTreeMap<(Monomial, u32), Gaussian>,
}

impl PolySymbol {
    /// The zero symbol on a `dim`-dimensional phase space.
    ///
    /// Panics if `dim` is zero or odd.
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0 && dim.is_multiple_of(2), "phase-space dimension must be even");
        PolySymbol {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Gaussian) -> Self {
        let mut s = Self::zero(dim);
        s.add_term(Monomial::one(dim), 0, c);
        s
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Gaussian::one())
    }

    pub fn from_int(dim: usize, v: i64) -> Self {
        Self::constant(dim, gauss_int(v))
    }

    /// The coordinate symbol `ξ^k` (0-based).
    pub fn var(dim: usize, k: usize) -> Self {
        assert!(k < dim, "variable index out of range");
        let mut s = Self::zero(dim);
        s.add_term(Monomial::var(dim, k), 0, Gaussian::one());
        s
    }

    pub fn try_var(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        Ok(Self::var(dim, k))
    }

    /// `q_a` (0-based degree of freedom).
    pub fn q(dim: usize, a: usize) -> Self {
        Self::var(dim, a)
    }

    /// `p_a` (0-based degree of freedom).
    pub fn p(dim: usize, a: usize) -> Self {
        Self::var(dim, dim / 2 + a)
    }

    /// The formal parameter ħ as a constant symbol.
    pub fn hbar(dim: usize) -> Self {
        let mut s = Self::zero(dim);
        s.add_term(Monomial::one(dim), 1, Gaussian::one());
        s
    }

    /// A single term `c · ħ^h · ξ^e`.
    pub fn monomial(dim: usize, exponents: Vec<u32>, hbar_power: u32, c: Gaussian) -> Result<Self> {
        if exponents.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: exponents.len(),
            });
        }
        let mut s = Self::zero(dim);
        s.add_term(Monomial(exponents), hbar_power, c);
        Ok(s)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u32, Gaussian)>,
    {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::BadDimension(dim));
        }
        let mut s = Self::zero(dim);
        for (e, h, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            s.add_term(Monomial(e), h, c);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulates `c · ħ^h · ξ^m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, hbar_power: u32, c: Gaussian) {
        debug_assert_eq!(m.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry((m, hbar_power)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Iterates `(monomial, ħ-power, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32, &Gaussian)> {
        self.terms.iter().map(|((m, h), c)| (m, *h, c))
    }

    /// Coefficients grouped by monomial.
    pub fn coefficients(&self) -> Vec<(Monomial, Vec<Coefficient>)> {
        let mut out: Vec<(Monomial, Vec<Coefficient>)> = Vec::new();
        for ((m, h), c) in &self.terms {
            let entry = Coefficient {
                re: c.re.clone(),
                im: c.im.clone(),
                hbar_power: *h,
            };
            match out.last_mut() {
                Some((last, v)) if last == m => v.push(entry),
                _ => out.push((m.clone(), vec![entry])),
            }
        }
        out
    }

    /// Coefficient of `ħ^h ξ^m`, zero if absent.
    pub fn coefficient(&self, exponents: &[u32], hbar_power: u32) -> Gaussian {
        self.terms
            .get(&(Monomial(exponents.to_vec()), hbar_power))
            .cloned()
            .unwrap_or_else(Gaussian::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn max_hbar_power(&self) -> u32 {
        self.terms.keys().map(|(_, h)| *h).max().unwrap_or(0)
    }

    /// The coefficient symbol of `ħ^k`.
    pub fn grade_extract(&self, k: u32) -> PolySymbol {
        let mut s = Self::zero(self.dim);
        for ((m, h), c) in &self.terms {
            if *h == k {
                s.terms.insert((m.clone(), 0), c.clone());
            }
        }
        s
    }

    /// Drops all terms with ħ-power above `max`.
    pub fn truncate_hbar(&self, max: u32) -> PolySymbol {
        PolySymbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|((_, h), _)| *h <= max)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Gaussian) -> PolySymbol {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        PolySymbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> PolySymbol {
        self.scale(&Complex::new(r.clone(), Rational::zero()))
    }

    /// Multiplies by `ħ^k`.
    pub fn mul_hbar(&self, k: u32) -> PolySymbol {
        PolySymbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|((m, h), v)| ((m.clone(), h + k), v.clone()))
                .collect(),
        }
    }

    /// Complex conjugate with ħ treated as real.
    pub fn conj(&self) -> PolySymbol {
        PolySymbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.conj()))
                .collect(),
        }
    }

    /// True iff the symbol equals its complex conjugate (real ħ), i.e. it is
    /// the symbol of a Hermitian operator.
    pub fn is_hermitian_symbol(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub(crate) fn check_dim(&self, other: &PolySymbol) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((m, h), c) in &other.terms {
            out.add_term(m.clone(), *h, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((m, h), c) in &other.terms {
            out.add_term(m.clone(), *h, -c.clone());
        }
        Ok(out)
    }

    /// Ordinary (dot) product of symbols; ħ-powers add.
    pub fn multiply(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for ((m1, h1), c1) in &self.terms {
            for ((m2, h2), c2) in &other.terms {
                out.add_term(m1.mul(m2), h1 + h2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> PolySymbol {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `∂f/∂ξ^k` with 0-based `k`.
    pub fn partial_derivative(&self, k: usize) -> Result<PolySymbol> {
        if k >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for ((m, h), c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[k] -= 1;
            out.add_term(
                Monomial(exps),
                *h,
                c * Complex::new(rat(e as i64, 1), Rational::zero()),
            );
        }
        Ok(out)
    }

    /// Mixed partial derivative along a list of 0-based indices.
    pub fn derivative(&self, indices: &[usize]) -> Result<PolySymbol> {
        let mut out = self.clone();
        for &k in indices {
            out = out.partial_derivative(k)?;
        }
        Ok(out)
    }

    /// True iff the symbol does not depend on `ξ^k`.
    pub fn is_independent_of(&self, k: usize) -> bool {
        self.terms.keys().all(|(m, _)| m.0[k] == 0)
    }

    /// Numeric value at `point` with ħ substituted.
    pub fn evaluate(&self, point: &[f64], hbar: f64) -> Result<Complex<f64>> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for ((m, h), c) in &self.terms {
            let mut w = libm::pow(hbar, *h as f64);
            for (x, e) in point.iter().zip(&m.0) {
                w *= libm::pow(*x, *e as f64);
            }
            re += rational_to_f64(&c.re) * w;
            im += rational_to_f64(&c.im) * w;
        }
        Ok(Complex::new(re, im))
    }

    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, point: &[Rational], hbar: &Rational) -> Result<Gaussian> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut acc = Gaussian::zero();
        for ((m, h), c) in &self.terms {
            let mut w = num_traits::pow(hbar.clone(), *h as usize);
            for (x, e) in point.iter().zip(&m.0) {
                w *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += c * Complex::new(w, Rational::zero());
        }
        Ok(acc)
    }

    /// Name of variable `k` in printed output: `q, p` for one degree of
    /// freedom, `q1.., p1..` otherwise.
    pub fn variable_name(dim: usize, k: usize) -> String {
        let n = dim / 2;
        let (base, idx) = if k < n { ("q", k) } else { ("p", k - n) };
        if n == 1 {
            String::from(base)
        } else {
            format!("{}{}", base, idx + 1)
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((m, h), c) in &self.terms {
            let coeff = if c.im.is_zero() {
                fmt_rational(&c.re)
            } else if c.re.is_zero() {
                format!("{}i", fmt_rational(&c.im))
            } else {
                let sign = if c.im.is_negative() { "-" } else { "+" };
                format!("({}{}{}i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            let is_unit = c.is_one();
            if !is_unit || (m.is_one() && *h == 0) {
                factors.push(coeff);
            }
            match *h {
                0 => {}
                1 => factors.push(String::from("hbar")),
                k => factors.push(format!("hbar^{}", k)),
            }
            for (k, e) in m.0.iter().enumerate() {
                let name = Self::variable_name(self.dim, k);
                match *e {
                    0 => {}
                    1 => factors.push(name),
                    e => factors.push(format!("{}^{}", name, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a PolySymbol> for &'a PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        self.checked_add(rhs).expect("dimension mismatch in symbol addition")
    }
}

impl<'a> Sub<&'a PolySymbol> for &'a PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        self.checked_sub(rhs).expect("dimension mismatch in symbol subtraction")
    }
}

impl<'a> Mul<&'a PolySymbol> for &'a PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        self.multiply(rhs).expect("dimension mismatch in symbol product")
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        self.scale(&gauss_int(-1))
    }
}

impl Add for PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: PolySymbol) -> PolySymbol {
        &self + &rhs
    }
}

impl Sub for PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: PolySymbol) -> PolySymbol {
        &self - &rhs
    }
}

impl Mul for PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: PolySymbol) -> PolySymbol {
        &self * &rhs
    }
}

impl Neg for PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        -&self
    }
}
