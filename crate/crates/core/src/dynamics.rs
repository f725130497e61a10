//! Exact τ-series for quantum and classical phase flows, observables and the
//! identities they satisfy.
//!
//! The quantum flow `u^i(ξ,τ)` has coefficients `(1/s!) (…(ξ^i ∧ H) ∧ H …)`
//! with `s` Moyal brackets; the classical flow `c^i(ξ,τ)` uses Poisson
//! brackets instead. Observables evolve as `f(⋆u(ξ,τ))`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;

use crate::moyal::poisson_bracket;
use crate::poly::{PolySymbol, Rational};
use crate::report::ResidualReport;
use crate::series::{apply_product, compose, BiSeries, Product, SymbolSeries, TauSeries};
use crate::symplectic::symplectic_entry;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    Quantum,
    Classical,
}

impl FlowMode {
    fn bracket(self) -> Product {
        match self {
            FlowMode::Quantum => Product::Wedge,
            FlowMode::Classical => Product::Poisson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    MoyalInvariance,
    EnergyConservation,
    CompositionLaw,
    ClassicalQuantumConnector,
}

impl IdentityKind {
    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::MoyalInvariance => "moyal-invariance",
            IdentityKind::EnergyConservation => "energy-conservation",
            IdentityKind::CompositionLaw => "composition-law",
            IdentityKind::ClassicalQuantumConnector => "classical-quantum-connector",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            IdentityKind::MoyalInvariance,
            IdentityKind::EnergyConservation,
            IdentityKind::CompositionLaw,
            IdentityKind::ClassicalQuantumConnector,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

fn recip(k: usize) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(k))
}

/// `Σ_s τ^s (1/s!) ad^s f` with `ad f = f ∧ H` (or `{f, H}`).
pub fn bracket_series(f: &PolySymbol, h: &PolySymbol, k: usize, mode: FlowMode) -> Result<TauSeries> {
    f.check_dim(h)?;
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(f.clone());
    for s in 1..=k {
        let prev: &PolySymbol = &coeffs[s - 1];
        let next = apply_product(prev, h, mode.bracket())?.scale_rational(&recip(s));
        coeffs.push(next);
    }
    TauSeries::new(coeffs)
}

/// Flow components `u^i` (quantum) or `c^i` (classical) to order `k`.
pub fn flow_series(h: &PolySymbol, k: usize, mode: FlowMode) -> Result<Vec<TauSeries>> {
    let dim = h.dim();
    (0..dim)
        .map(|i| bracket_series(&PolySymbol::var(dim, i), h, k, mode))
        .collect()
}

/// Heisenberg-picture observable `f(ξ,τ)` to order `k`.
pub fn observable_series(f: &PolySymbol, h: &PolySymbol, k: usize) -> Result<TauSeries> {
    bracket_series(f, h, k, FlowMode::Quantum)
}

/// Classical Liouville solution `f(c(ξ,τ))` to order `k`.
pub fn classical_observable_series(f: &PolySymbol, h: &PolySymbol, k: usize) -> Result<TauSeries> {
    bracket_series(f, h, k, FlowMode::Classical)
}

fn check_orders(u: &[TauSeries]) -> Result<()> {
    if let Some(first) = u.first() {
        for c in u {
            if c.order() != first.order() {
                return Err(Error::OrderMismatch(first.order(), c.order()));
            }
        }
    }
    Ok(())
}

/// Star-composition `f(⋆u)`.
pub fn star_compose(f: &PolySymbol, u: &[TauSeries]) -> Result<TauSeries> {
    check_orders(u)?;
    compose(f, u, Product::Star)
}

/// Ordinary composition `f(u)`.
pub fn dot_compose(f: &PolySymbol, u: &[TauSeries]) -> Result<TauSeries> {
    check_orders(u)?;
    compose(f, u, Product::Dot)
}

/// Composes a τ-dependent symbol `g(ζ,τ) = Σ τ^r g_r(ζ)` with series
/// components in the same τ: `Σ τ^r g_r(⋆u)` (or dot).
pub fn compose_tau_dependent(g: &TauSeries, u: &[TauSeries], op: Product) -> Result<TauSeries> {
    check_orders(u)?;
    let mut acc = TauSeries::zero(g.dim(), u.first().map_or(g.order(), |c| c.order()));
    for (r, gr) in g.coeffs().iter().enumerate() {
        if r > acc.order() {
            break;
        }
        let term = compose(gr, u, op)?.shift(r);
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

fn require_hermitian(h: &PolySymbol) -> Result<()> {
    if h.is_hermitian_symbol() {
        Ok(())
    } else {
        Err(Error::NonHermitian(format!("{h}")))
    }
}

fn identity_constant(dim: usize, i: usize, j: usize) -> PolySymbol {
    let n = dim / 2;
    PolySymbol::from_int(dim, i64::from(symplectic_entry(n, i, j)))
}

/// Runs one exact identity check on the flow of `h`.
///
/// `k` is the truncation order in τ (combined order for the two-time
/// composition law). The connector check compares through ħ².
pub fn verify_identity(kind: IdentityKind, h: &PolySymbol, k: usize) -> Result<ResidualReport> {
    require_hermitian(h)?;
    if k == 0 {
        return Err(Error::InvalidArgument("identity checks need order ≥ 1".into()));
    }
    let dim = h.dim();
    match kind {
        IdentityKind::MoyalInvariance => {
            let u = flow_series(h, k, FlowMode::Quantum)?;
            let mut rep = ResidualReport::new(kind.name(), vec![k], None);
            for i in 0..dim {
                for j in 0..dim {
                    let w = u[i].product(&u[j], Product::Wedge)?;
                    let c = TauSeries::constant(identity_constant(dim, i, j), k);
                    rep.push_series(&format!("u{}^u{}", i + 1, j + 1), &w.try_add(&c)?);
                }
            }
            Ok(rep)
        }
        IdentityKind::EnergyConservation => {
            let u = flow_series(h, k, FlowMode::Quantum)?;
            let e = star_compose(h, &u)?;
            let mut rep = ResidualReport::new(kind.name(), vec![k], None);
            rep.push_series("H(*u)-H", &e.try_sub(&TauSeries::constant(h.clone(), k))?);
            Ok(rep)
        }
        IdentityKind::CompositionLaw => composition_law(h, k),
        IdentityKind::ClassicalQuantumConnector => connector(h, k),
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `u(ξ,τ₁+τ₂) - u(⋆u(ξ,τ₁),τ₂)` over `a + b ≤ k`, where `a`, `b` are the
/// powers of `τ₁`, `τ₂`.
fn composition_law(h: &PolySymbol, k: usize) -> Result<ResidualReport> {
    let u = flow_series(h, k, FlowMode::Quantum)?;
    composition_residual(&u, IdentityKind::CompositionLaw.name())
}

/// Two-time composition residual for arbitrary series components `u`
/// (all of the same order `k`), compared over `a + b ≤ k`.
pub fn composition_residual(u: &[TauSeries], identity: &str) -> Result<ResidualReport> {
    check_orders(u)?;
    let k = u.first().map_or(0, TauSeries::order);
    let mut rep = ResidualReport::new(identity, vec![k], None);
    for (i, ui) in u.iter().enumerate() {
        for b in 0..=k {
            let inner: Vec<TauSeries> = u.iter().map(|c| c.truncate(k - b)).collect();
            let rhs = star_compose(ui.coeff(b), &inner)?;
            for a in 0..=(k - b) {
                let lhs = ui
                    .coeff(a + b)
                    .scale_rational(&Rational::from_integer(binomial(a + b, a)));
                rep.push(&format!("u{}", i + 1), vec![a, b], lhs.checked_sub(rhs.coeff(a))?);
            }
        }
    }
    Ok(rep)
}

/// `f(⋆u(ξ,τ)) - f_c(c(⋆u(ξ,τ),-τ),τ)` through ħ² for the coordinate
/// functions and the Hamiltonian.
fn connector(h: &PolySymbol, k: usize) -> Result<ResidualReport> {
    let dim = h.dim();
    let u = flow_series(h, k, FlowMode::Quantum)?;
    let c_back: Vec<TauSeries> = flow_series(h, k, FlowMode::Classical)?
        .iter()
        .map(TauSeries::reverse_time)
        .collect();
    let mut rep = ResidualReport::new(IdentityKind::ClassicalQuantumConnector.name(), vec![k], Some(2));
    let mut probes: Vec<(alloc::string::String, PolySymbol)> = (0..dim)
        .map(|i| (format!("x{}", i + 1), PolySymbol::var(dim, i)))
        .collect();
    probes.push(("H".into(), h.clone()));
    for (label, f) in probes {
        let quantum = star_compose(&f, &u)?;
        let fc = classical_observable_series(&f, h, k)?;
        // g(ζ,τ) = f_c(c(ζ,-τ),τ)
        let g = compose_tau_dependent(&fc, &c_back, Product::Dot)?;
        let rhs = compose_tau_dependent(&g, &u, Product::Star)?;
        rep.push_series(&label, &quantum.try_sub(&rhs)?);
        let direct = observable_series(&f, h, k)?;
        rep.push_series(&format!("{label}:oracle"), &quantum.try_sub(&direct)?);
    }
    Ok(rep)
}

/// `D^{ij} = {u^i, u^j} + I^{ij}` as exact series.
pub fn canonicity_deviation(h: &PolySymbol, k: usize) -> Result<Vec<Vec<TauSeries>>> {
    let dim = h.dim();
    let u = flow_series(h, k, FlowMode::Quantum)?;
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let b = u[i].product(&u[j], Product::Poisson)?;
            row.push(b.try_add(&TauSeries::constant(identity_constant(dim, i, j), k))?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Series in `σ` of the unitary map generated by `w`, embedded in a
/// two-parameter series with bounds `(s, k, s + k)`.
fn map_components(w: &PolySymbol, s: usize, k: usize, sign: bool) -> Result<Vec<BiSeries>> {
    Ok(flow_series(w, s, FlowMode::Quantum)?
        .iter()
        .map(|c| {
            let c = if sign { c.clone() } else { c.reverse_time() };
            BiSeries::from_first(&c, k, s + k)
        })
        .collect())
}

/// Substitutes a τ-series `Σ τ^b g_b(ζ)` at `ζ = ⋆x` where `x` is a
/// two-parameter series in `(σ, τ)`.
fn compose_second(g: &TauSeries, x: &[BiSeries]) -> Result<BiSeries> {
    let (a, b, t) = x[0].bounds();
    let mut acc = BiSeries::zero(g.dim(), a, b, t);
    for (r, gr) in g.coeffs().iter().enumerate() {
        acc = acc.try_add(&compose(gr, x, Product::Star)?.shift(0, r))?;
    }
    Ok(acc)
}

/// Result of [`conjugate_flow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationReport {
    /// `u'(υ,τ) - flow of H'(υ)` with `H'(υ) = H(⋆v₊(υ))`.
    pub flow: ResidualReport,
    /// Star-product invariance under `ζ = ⋆v₊(υ)` on sample pairs.
    pub product_invariance: ResidualReport,
}

/// Compares `u'(υ,τ) = v₋(⋆u(⋆v₊(υ),τ))` with the flow of
/// `H'(υ) = H(⋆v₊(υ))`, where `v₊`/`v₋` are the flows of `w` at `±σ`.
/// Coefficients are kept for `σ^a τ^b` with `a ≤ s`, `b ≤ k`.
pub fn conjugate_flow(h: &PolySymbol, w: &PolySymbol, s: usize, k: usize) -> Result<ConjugationReport> {
    require_hermitian(h)?;
    require_hermitian(w)?;
    h.check_dim(w)?;
    let dim = h.dim();
    let v_plus = map_components(w, s, k, true)?;
    let v_minus: Vec<TauSeries> = flow_series(w, s, FlowMode::Quantum)?
        .iter()
        .map(TauSeries::reverse_time)
        .collect();
    let u = flow_series(h, k, FlowMode::Quantum)?;

    // x = u(⋆v₊(υ),τ), then u' = v₋(⋆x) with v₋ a σ-series
    let x: Vec<BiSeries> = u.iter().map(|ui| compose_second(ui, &v_plus)).collect::<Result<_>>()?;
    let mut u_prime = Vec::with_capacity(dim);
    for vm in &v_minus {
        let mut acc = BiSeries::zero(dim, s, k, s + k);
        for (a, va) in vm.coeffs().iter().enumerate() {
            acc = acc.try_add(&compose(va, &x, Product::Star)?.shift(a, 0))?;
        }
        u_prime.push(acc);
    }

    // flow of H' = H(⋆v₊) with σ-dependent coefficients
    let h_prime = compose(h, &v_plus, Product::Star)?;
    let mut flow = ResidualReport::new("conjugated-flow", vec![s, k], None);
    for i in 0..dim {
        let mut term = BiSeries::zero(dim, s, k, s + k).constant_like(&PolySymbol::var(dim, i));
        let mut total = term.clone();
        for b in 1..=k {
            term = term
                .product(&h_prime, Product::Wedge)?
                .scale_term(&Complex::new(recip(b), Rational::zero()), 0);
            total = total.try_add(&term.shift(0, b))?;
        }
        flow.push_bi_series(&format!("u'{}", i + 1), &u_prime[i].try_sub(&total)?);
    }

    let mut samples: Vec<PolySymbol> = (0..dim).map(|i| PolySymbol::var(dim, i)).collect();
    samples.push(h.clone());
    let mut inv = ResidualReport::new("star-invariance", vec![s], None);
    for (ia, f) in samples.iter().enumerate() {
        for (ib, g) in samples.iter().enumerate() {
            let r = star_invariance_residual(f, g, w, s)?;
            inv.push_series(&format!("{}*{}", ia + 1, ib + 1), &r);
        }
    }
    Ok(ConjugationReport {
        flow,
        product_invariance: inv,
    })
}

/// `(f ⋆ g)(⋆v₊) - f(⋆v₊) ⋆ g(⋆v₊)` as a σ-series of order `s`, with `v₊`
/// the star-flow of `w`.
pub fn star_invariance_residual(f: &PolySymbol, g: &PolySymbol, w: &PolySymbol, s: usize) -> Result<TauSeries> {
    let v = flow_series(w, s, FlowMode::Quantum)?;
    let lhs = star_compose(&crate::moyal::star_product(f, g)?, &v)?;
    let fv = star_compose(f, &v)?;
    let gv = star_compose(g, &v)?;
    lhs.try_sub(&fv.product(&gv, Product::Star)?)
}

/// Motion by inertia `a^i(υ,τ) = υ^i + {υ^i, H'(υ)} τ` for a Hamiltonian
/// depending on momenta only.
pub fn inertia_flow(h_prime: &PolySymbol, k: usize) -> Result<Vec<TauSeries>> {
    let dim = h_prime.dim();
    let n = dim / 2;
    for a in 0..n {
        if !h_prime.is_independent_of(a) {
            return Err(Error::DependsOnCoordinate(a));
        }
    }
    (0..dim)
        .map(|i| {
            let x = PolySymbol::var(dim, i);
            let mut coeffs = vec![PolySymbol::zero(dim); k + 1];
            if k >= 1 {
                coeffs[1] = poisson_bracket(&x, h_prime)?;
            }
            coeffs[0] = x;
            TauSeries::new(coeffs)
        })
        .collect()
}

/// Residuals `a^i ∧ a^j + I^{ij}` and `{a^i, a^j} + I^{ij}`.
pub fn bracket_table_residual(a: &[TauSeries], op: Product) -> Result<ResidualReport> {
    let dim = a.len();
    let k = a.first().map_or(0, TauSeries::order);
    let mut rep = ResidualReport::new(
        match op {
            Product::Poisson => "poisson-table",
            _ => "moyal-table",
        },
        vec![k],
        None,
    );
    for i in 0..dim {
        for j in 0..dim {
            let w = a[i].product(&a[j], op)?;
            let c = TauSeries::constant(identity_constant(dim, i, j), k);
            rep.push_series(&format!("{}{}", i + 1, j + 1), &w.try_add(&c)?);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{gauss_int, gauss_rat, rat};

    fn q() -> PolySymbol {
        PolySymbol::q(2, 0)
    }
    fn p() -> PolySymbol {
        PolySymbol::p(2, 0)
    }
    fn harmonic() -> PolySymbol {
        (&q().pow(2) + &p().pow(2)).scale(&gauss_rat(1, 2))
    }
    fn quartic_1d() -> PolySymbol {
        &p().pow(2).scale(&gauss_rat(1, 2)) + &q().pow(4).scale(&gauss_rat(1, 4))
    }
    fn quartic_iso() -> PolySymbol {
        (&q().pow(2) + &p().pow(2)).pow(2)
    }

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    #[test]
    fn harmonic_flow_is_rotation() {
        let u = flow_series(&harmonic(), 8, FlowMode::Quantum).unwrap();
        for s in 0..=8usize {
            // q cos τ + p sin τ,  p cos τ - q sin τ
            let (cq, sq) = match s % 4 {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            let f = factorial(s as i64);
            let eq = &q().scale(&gauss_rat(cq, f)) + &p().scale(&gauss_rat(sq, f));
            let ep = &p().scale(&gauss_rat(cq, f)) - &q().scale(&gauss_rat(sq, f));
            assert_eq!(u[0].coeff(s), &eq);
            assert_eq!(u[1].coeff(s), &ep);
        }
    }

    #[test]
    fn zero_hamiltonian_flow_is_identity() {
        let u = flow_series(&PolySymbol::zero(2), 4, FlowMode::Quantum).unwrap();
        assert_eq!(u[0], TauSeries::constant(q(), 4));
        assert_eq!(u[1], TauSeries::constant(p(), 4));
    }

    #[test]
    fn quartic_quantum_correction_starts_at_fifth_order() {
        let u = flow_series(&quartic_1d(), 6, FlowMode::Quantum).unwrap();
        let gq = u[0].grade_extract(2);
        let gp = u[1].grade_extract(2);
        for s in 0..5 {
            assert!(gq.coeff(s).is_zero() && gp.coeff(s).is_zero(), "order {s}");
        }
        // the momentum picks up the correction first, the coordinate one order later
        assert_eq!(gp.coeff(5), &q().scale(&gauss_rat(-3, 40)));
        assert!(gq.coeff(5).is_zero());
        assert_eq!(gq.coeff(6), &q().scale(&gauss_rat(-1, 80)));
    }

    #[test]
    fn quantum_flow_reduces_to_classical() {
        let h = quartic_iso();
        let uq = flow_series(&h, 5, FlowMode::Quantum).unwrap();
        let uc = flow_series(&h, 5, FlowMode::Classical).unwrap();
        for i in 0..2 {
            assert_eq!(uq[i].grade_extract(0), uc[i]);
        }
    }

    #[test]
    fn observable_series_examples() {
        let h = harmonic();
        let u = flow_series(&h, 6, FlowMode::Quantum).unwrap();
        assert_eq!(observable_series(&q(), &h, 6).unwrap(), u[0]);
        assert_eq!(observable_series(&h, &h, 6).unwrap(), TauSeries::constant(h.clone(), 6));
        let one = PolySymbol::one(2);
        assert_eq!(observable_series(&one, &h, 3).unwrap(), TauSeries::constant(one.clone(), 3));
    }

    #[test]
    fn star_compose_matches_observable_series() {
        let h = quartic_1d();
        let u = flow_series(&h, 5, FlowMode::Quantum).unwrap();
        let f = &q().pow(2) + &(q() * p());
        assert_eq!(star_compose(&f, &u).unwrap(), observable_series(&f, &h, 5).unwrap());
        assert_eq!(star_compose(&q(), &u).unwrap(), u[0]);
    }

    #[test]
    fn star_compose_rejects_mixed_orders() {
        let u = vec![TauSeries::constant(q(), 2), TauSeries::constant(p(), 3)];
        assert_eq!(star_compose(&q(), &u), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn identities_hold_for_quartic() {
        let h = quartic_1d();
        for kind in [
            IdentityKind::MoyalInvariance,
            IdentityKind::EnergyConservation,
            IdentityKind::CompositionLaw,
            IdentityKind::ClassicalQuantumConnector,
        ] {
            let rep = verify_identity(kind, &h, 4).unwrap();
            assert!(rep.is_zero(), "{}: {:?}", kind.name(), rep.first_nonzero());
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let h = &harmonic() + &PolySymbol::constant(2, crate::poly::gauss(rat(0, 1), rat(1, 1)));
        assert!(matches!(
            verify_identity(IdentityKind::EnergyConservation, &h, 2),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn canonicity_fails_for_quartic_iso_at_second_order() {
        let d = canonicity_deviation(&quartic_iso(), 2).unwrap();
        let c = d[0][1].coeff(2).grade_extract(2);
        assert!(!c.is_zero());
        assert!(d[0][1].coeff(1).is_zero());
        assert!(d[0][1].coeff(2).grade_extract(0).is_zero());
        for row in canonicity_deviation(&harmonic(), 4).unwrap() {
            for e in row {
                assert!(e.is_zero_series());
            }
        }
    }

    #[test]
    fn conjugation_with_trivial_map() {
        let r = conjugate_flow(&quartic_1d(), &PolySymbol::zero(2), 1, 3).unwrap();
        assert!(r.flow.is_zero());
        assert!(r.product_invariance.is_zero());
    }

    #[test]
    fn conjugation_harmonic_with_quadratic_generator() {
        let r = conjugate_flow(&harmonic(), &q().pow(2), 2, 3).unwrap();
        assert!(r.flow.is_zero(), "{:?}", r.flow.first_nonzero());
        assert!(r.product_invariance.is_zero());
    }

    #[test]
    fn conjugation_quartic_with_cubic_generator() {
        let r = conjugate_flow(&quartic_1d(), &q().pow(3), 2, 2).unwrap();
        assert!(r.flow.is_zero(), "{:?}", r.flow.first_nonzero());
        assert!(r.product_invariance.is_zero());
    }

    #[test]
    fn inertia_flow_examples() {
        let a = inertia_flow(&p().pow(2).scale(&gauss_rat(1, 2)), 3).unwrap();
        assert_eq!(a[0].coeff(1), &p());
        assert!(a[0].coeff(2).is_zero());
        assert!(a[1].coeff(1).is_zero());

        let a = inertia_flow(&p().pow(4), 2).unwrap();
        assert_eq!(a[0].coeff(1), &p().pow(3).scale(&gauss_int(4)));
        assert!(bracket_table_residual(&a, Product::Wedge).unwrap().is_zero());
        assert!(bracket_table_residual(&a, Product::Poisson).unwrap().is_zero());

        let c = inertia_flow(&PolySymbol::from_int(2, 3), 2).unwrap();
        assert_eq!(c[0], TauSeries::constant(q(), 2));

        assert_eq!(inertia_flow(&q(), 1), Err(Error::DependsOnCoordinate(0)));
    }

    #[test]
    fn identity_names_round_trip() {
        for k in [
            IdentityKind::MoyalInvariance,
            IdentityKind::EnergyConservation,
            IdentityKind::CompositionLaw,
            IdentityKind::ClassicalQuantumConnector,
        ] {
            assert_eq!(IdentityKind::parse(k.name()), Some(k));
        }
        assert_eq!(IdentityKind::parse("nope"), None);
    }
}
