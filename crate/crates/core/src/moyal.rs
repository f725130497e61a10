//! Poisson bracket, Groenewold star product and its symmetric (`∘`) and
//! skew-symmetric (`∧`, Moyal bracket) parts.
//!
//! With the Poisson operator `𝒫 = -I^{kl} ←∂_k →∂_l`,
//!
//! ```text
//! f ⋆ g = f exp(iħ𝒫/2) g = f ∘ g + (iħ/2) f ∧ g
//! f ∘ g = Σ_{s even} (iħ/2)^s / s! · f 𝒫^s g
//! f ∧ g = Σ_{s odd}  (iħ/2)^{s-1} / s! · f 𝒫^s g
//! ```
//!
//! For polynomial symbols every series terminates at
//! `s = min(deg f, deg g)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::poly::{Gaussian, Monomial, PolySymbol, Rational};
use crate::{Error, Result};

/// Terms `(1/s!) f 𝒫^s g` for `s = 0..=max_s` (fewer if the series ends).
///
/// `𝒫` splits into the commuting pieces `∂_{q_a} ⊗ ∂_{p_a}` and
/// `-∂_{p_a} ⊗ ∂_{q_a}`; the multinomial expansion of `𝒫^s / s!` is done
/// monomial pair by monomial pair.
pub fn poisson_powers(f: &PolySymbol, g: &PolySymbol, max_s: usize) -> Result<Vec<PolySymbol>> {
    f.check_dim(g)?;
    let dim = f.dim();
    let n = dim / 2;
    let top = (f.total_degree().min(g.total_degree()) as usize).min(max_s);
    let mut out = vec![PolySymbol::zero(dim); top + 1];

    // Per (s, monomial, ħ) accumulate exact products before inserting.
    let mut buckets: Vec<BTreeMap<(Monomial, u32), Gaussian>> = vec![BTreeMap::new(); top + 1];

    // ranges for the 2n shift counts: alpha_a (q on f, p on g), beta_a (p on f, q on g)
    let mut counts = vec![0u32; 2 * n];
    for (mf, hf, cf) in f.terms() {
        let ef = mf.exponents();
        for (mg, hg, cg) in g.terms() {
            let eg = mg.exponents();
            let limits: Vec<u32> = (0..n)
                .map(|a| ef[a].min(eg[n + a]))
                .chain((0..n).map(|a| ef[n + a].min(eg[a])))
                .collect();
            let prod = cf * cg;
            counts.iter_mut().for_each(|c| *c = 0);
            loop {
                let s: u32 = counts.iter().sum();
                if (s as usize) <= top {
                    let mut factor = BigInt::one();
                    let mut exps = vec![0u32; dim];
                    let mut beta_total = 0u32;
                    for a in 0..n {
                        let al = counts[a];
                        let be = counts[n + a];
                        beta_total += be;
                        // ∂_q^al f · ∂_p^al g / al!  and  ∂_p^be f · ∂_q^be g / be!
                        factor *= binomial(ef[a], al) * falling(eg[n + a], al);
                        factor *= binomial(ef[n + a], be) * falling(eg[a], be);
                        exps[a] = ef[a] - al + eg[a] - be;
                        exps[n + a] = ef[n + a] - be + eg[n + a] - al;
                    }
                    if beta_total % 2 == 1 {
                        factor = -factor;
                    }
                    let c = &prod * Complex::new(Rational::from_integer(factor), Rational::zero());
                    let key = (Monomial::new(exps), hf + hg);
                    let slot = buckets[s as usize].entry(key).or_insert_with(Gaussian::zero);
                    *slot += c;
                }
                // odometer over counts within limits
                let mut idx = 0;
                loop {
                    if idx == counts.len() {
                        break;
                    }
                    if counts[idx] < limits[idx] {
                        counts[idx] += 1;
                        break;
                    }
                    counts[idx] = 0;
                    idx += 1;
                }
                if idx == counts.len() {
                    break;
                }
            }
        }
    }
    for (s, bucket) in buckets.into_iter().enumerate() {
        for ((m, h), c) in bucket {
            out[s].add_term(m, h, c);
        }
    }
    Ok(out)
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn falling(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r *= BigInt::from(n - i);
    }
    r
}

/// `(i/2)^s` as an exact Gaussian rational.
fn half_i_power(s: usize) -> Gaussian {
    let mag = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), s));
    match s % 4 {
        0 => Complex::new(mag, Rational::zero()),
        1 => Complex::new(Rational::zero(), mag),
        2 => Complex::new(-mag, Rational::zero()),
        _ => Complex::new(Rational::zero(), -mag),
    }
}

/// `{f, g} = -I^{kl} ∂_k f ∂_l g`.
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    let terms = poisson_powers(f, g, 1)?;
    Ok(terms.into_iter().nth(1).unwrap_or_else(|| PolySymbol::zero(f.dim())))
}

/// Groenewold star product `f ⋆ g`.
pub fn star_product(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    let terms = poisson_powers(f, g, usize::MAX)?;
    let mut out = PolySymbol::zero(f.dim());
    for (s, t) in terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        out = &out + &t.scale(&half_i_power(s)).mul_hbar(s as u32);
    }
    Ok(out)
}

/// Symmetric part `f ∘ g = (f⋆g + g⋆f)/2`.
pub fn circ(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    Ok(moyal_and_circ(f, g)?.0)
}

/// Moyal bracket `f ∧ g = (f⋆g - g⋆f)/(iħ)`.
pub fn wedge(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    Ok(moyal_and_circ(f, g)?.1)
}

/// Returns `(f ∘ g, f ∧ g)`.
pub fn moyal_and_circ(f: &PolySymbol, g: &PolySymbol) -> Result<(PolySymbol, PolySymbol)> {
    let terms = poisson_powers(f, g, usize::MAX)?;
    let dim = f.dim();
    let mut c = PolySymbol::zero(dim);
    let mut w = PolySymbol::zero(dim);
    for (s, t) in terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        if s % 2 == 0 {
            c = &c + &t.scale(&half_i_power(s)).mul_hbar(s as u32);
        } else {
            w = &w + &t.scale(&half_i_power(s - 1)).mul_hbar(s as u32 - 1);
        }
    }
    Ok((c, w))
}

/// Average over all orderings of the left-nested `∘`-products
/// `((f_{σ1} ∘ f_{σ2}) ∘ f_{σ3}) ∘ …`.
///
/// The empty list is rejected: the constant term of a star-composition is
/// handled by the caller.
pub fn symmetrized_circ_power(factors: &[PolySymbol]) -> Result<PolySymbol> {
    let first = factors.first().ok_or(Error::EmptyProduct)?;
    for f in factors {
        first.check_dim(f)?;
    }
    let k = factors.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut total = PolySymbol::zero(first.dim());
    let mut count: u64 = 0;
    loop {
        let mut acc = factors[perm[0]].clone();
        for &i in &perm[1..] {
            acc = circ(&acc, &factors[i])?;
        }
        total = &total + &acc;
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total.scale_rational(&Rational::new(BigInt::one(), BigInt::from(count))))
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{gauss, gauss_int, gauss_rat, rat};

    fn q() -> PolySymbol {
        PolySymbol::q(2, 0)
    }
    fn p() -> PolySymbol {
        PolySymbol::p(2, 0)
    }
    fn ihbar(re_num: i64, re_den: i64, power: u32) -> PolySymbol {
        PolySymbol::hbar(2)
            .pow(power)
            .scale(&gauss(Rational::zero(), rat(re_num, re_den)))
    }

    #[test]
    fn canonical_bracket_is_plus_one() {
        assert_eq!(poisson_bracket(&q(), &p()).unwrap(), PolySymbol::one(2));
        assert_eq!(poisson_bracket(&p(), &q()).unwrap(), PolySymbol::from_int(2, -1));
    }

    #[test]
    fn bracket_of_squares() {
        let b = poisson_bracket(&q().pow(2), &p().pow(2)).unwrap();
        assert_eq!(b, PolySymbol::from_int(2, 4) * q() * p());
        let f = q().pow(3) * p() + p();
        assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn star_examples() {
        let s = star_product(&q(), &p()).unwrap();
        assert_eq!(s, &(q() * p()) + &ihbar(1, 2, 1));

        let s2 = star_product(&q().pow(2), &p().pow(2)).unwrap();
        let expected = q().pow(2) * p().pow(2)
            + ihbar(2, 1, 1) * q() * p()
            + PolySymbol::hbar(2).pow(2).scale(&gauss_rat(-1, 2));
        assert_eq!(s2, expected);

        let f = q().pow(3) * p() + PolySymbol::from_int(2, 5);
        assert_eq!(star_product(&f, &PolySymbol::one(2)).unwrap(), f);
        assert_eq!(star_product(&PolySymbol::one(2), &f).unwrap(), f);
    }

    #[test]
    fn circ_wedge_examples() {
        let (c, w) = moyal_and_circ(&q(), &p()).unwrap();
        assert_eq!(c, q() * p());
        assert_eq!(w, PolySymbol::one(2));

        let (c, w) = moyal_and_circ(&q().pow(2), &p().pow(2)).unwrap();
        assert_eq!(
            c,
            q().pow(2) * p().pow(2) + PolySymbol::hbar(2).pow(2).scale(&gauss_rat(-1, 2))
        );
        assert_eq!(w, PolySymbol::from_int(2, 4) * q() * p());

        let f = q().pow(2) * p() + p().pow(3);
        let (c, w) = moyal_and_circ(&f, &f).unwrap();
        assert!(w.is_zero());
        assert_eq!(c, star_product(&f, &f).unwrap());
    }

    #[test]
    fn star_splits_into_circ_and_wedge() {
        let f = q().pow(3) + q() * p().pow(2);
        let g = p().pow(3) * q() + q();
        let (c, w) = moyal_and_circ(&f, &g).unwrap();
        let half_i_hbar = ihbar(1, 2, 1);
        let rebuilt = &c + &w.multiply(&half_i_hbar).unwrap();
        assert_eq!(rebuilt, star_product(&f, &g).unwrap());
    }

    #[test]
    fn wedge_of_coordinates_is_minus_i() {
        for n in 1..=3 {
            let dim = 2 * n;
            for i in 0..dim {
                for j in 0..dim {
                    let w = wedge(&PolySymbol::var(dim, i), &PolySymbol::var(dim, j)).unwrap();
                    let expected = crate::symplectic::symplectic_entry(n, i, j);
                    assert_eq!(w, PolySymbol::from_int(dim, -expected as i64));
                }
            }
        }
    }

    #[test]
    fn symmetrized_power_examples() {
        assert_eq!(symmetrized_circ_power(&[q()]).unwrap(), q());
        assert_eq!(symmetrized_circ_power(&[q(), p()]).unwrap(), q() * p());
        assert!(matches!(symmetrized_circ_power(&[]), Err(Error::EmptyProduct)));
        // three factors: explicit average over the 3! orderings
        let fs = [q(), q(), p()];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut acc = PolySymbol::zero(2);
        for o in orders {
            let t = circ(&circ(&fs[o[0]], &fs[o[1]]).unwrap(), &fs[o[2]]).unwrap();
            acc = &acc + &t;
        }
        let avg = acc.scale(&gauss_rat(1, 6));
        assert_eq!(symmetrized_circ_power(&fs).unwrap(), avg);
        // Weyl ordering of q^2 p is q^2 p itself
        assert_eq!(avg, q().pow(2) * p());
    }

    #[test]
    fn hbar_zero_limits() {
        let f = q().pow(2) * p() + q();
        let g = p().pow(3) + q() * p();
        assert_eq!(star_product(&f, &g).unwrap().grade_extract(0), &f * &g);
        assert_eq!(
            wedge(&f, &g).unwrap().grade_extract(0),
            poisson_bracket(&f, &g).unwrap()
        );
    }

    #[test]
    fn two_degrees_of_freedom_bracket() {
        let dim = 4;
        let f = PolySymbol::q(dim, 0) * PolySymbol::q(dim, 1);
        let g = PolySymbol::p(dim, 0) * PolySymbol::p(dim, 1);
        // {q1 q2, p1 p2} = q2 p2 + q1 p1
        let expected = PolySymbol::q(dim, 1) * PolySymbol::p(dim, 1)
            + PolySymbol::q(dim, 0) * PolySymbol::p(dim, 0);
        assert_eq!(poisson_bracket(&f, &g).unwrap(), expected);
        let _ = gauss_int(0);
    }
}
