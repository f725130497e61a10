use proptest::prelude::*;

use qchar_core::dynamics::{
    bracket_table_residual, canonicity_deviation, flow_series, observable_series, star_compose, verify_identity, FlowMode,
    IdentityKind,
};
use qchar_core::moyal::{circ, moyal_and_circ, poisson_bracket, star_product, wedge};
use qchar_core::poly::{gauss, gauss_int, rat};
use qchar_core::series::{Product, SymbolSeries};
use qchar_core::PolySymbol;

/// Real polynomial in `dim` variables with total degree ≤ `deg`.
fn poly(dim: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = PolySymbol> {
    prop::collection::vec((prop::collection::vec(0u32..=deg, dim), -4i64..=4), 1..=max_terms).prop_map(move |terms| {
        let mut out = PolySymbol::zero(dim);
        for (mut e, c) in terms {
            while e.iter().sum::<u32>() > deg {
                if let Some(x) = e.iter_mut().find(|x| **x > 0) {
                    *x -= 1;
                }
            }
            out = &out + &PolySymbol::monomial(dim, e, 0, gauss_int(c)).unwrap();
        }
        out
    })
}

fn quartic_iso() -> PolySymbol {
    let q = PolySymbol::q(2, 0);
    let p = PolySymbol::p(2, 0);
    (&q.pow(2) + &p.pow(2)).pow(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_is_associative(f in poly(2, 3, 3), g in poly(2, 3, 3), h in poly(2, 2, 3)) {
        let l = star_product(&star_product(&f, &g).unwrap(), &h).unwrap();
        let r = star_product(&f, &star_product(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn star_is_associative_in_two_degrees_of_freedom(f in poly(4, 2, 3), g in poly(4, 2, 3), h in poly(4, 2, 2)) {
        let l = star_product(&star_product(&f, &g).unwrap(), &h).unwrap();
        let r = star_product(&f, &star_product(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn brackets_are_antisymmetric_and_circ_symmetric(f in poly(2, 4, 4), g in poly(2, 4, 4)) {
        prop_assert_eq!(wedge(&f, &g).unwrap(), -&wedge(&g, &f).unwrap());
        prop_assert_eq!(poisson_bracket(&f, &g).unwrap(), -&poisson_bracket(&g, &f).unwrap());
        prop_assert_eq!(circ(&f, &g).unwrap(), circ(&g, &f).unwrap());
        prop_assert!(wedge(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(f in poly(2, 3, 3), g in poly(2, 3, 3), h in poly(2, 3, 3)) {
        for br in [poisson_bracket, wedge] {
            let a = br(&f, &br(&g, &h).unwrap()).unwrap();
            let b = br(&g, &br(&h, &f).unwrap()).unwrap();
            let c = br(&h, &br(&f, &g).unwrap()).unwrap();
            prop_assert!((&(&a + &b) + &c).is_zero());
        }
    }

    #[test]
    fn classical_limit(f in poly(4, 3, 4), g in poly(4, 3, 4)) {
        let (c, w) = moyal_and_circ(&f, &g).unwrap();
        prop_assert_eq!(c.grade_extract(0), &f * &g);
        prop_assert_eq!(w.grade_extract(0), poisson_bracket(&f, &g).unwrap());
        prop_assert!(c.max_hbar_power() % 2 == 0 && w.max_hbar_power() % 2 == 0);
    }

    #[test]
    fn real_symbols_close_under_circ_and_wedge(f in poly(2, 4, 4), g in poly(2, 4, 4)) {
        let (c, w) = moyal_and_circ(&f, &g).unwrap();
        prop_assert!(c.is_hermitian_symbol());
        prop_assert!(w.is_hermitian_symbol());
        // f ⋆ g = f ∘ g + (iħ/2) f ∧ g
        let star = star_product(&f, &g).unwrap();
        let rebuilt = &c + &w.scale(&gauss(rat(0, 1), rat(1, 2))).mul_hbar(1);
        prop_assert_eq!(star, rebuilt);
    }

    #[test]
    fn quantum_flow_reduces_to_classical(h in poly(2, 4, 3)) {
        let u = flow_series(&h, 4, FlowMode::Quantum).unwrap();
        let c = flow_series(&h, 4, FlowMode::Classical).unwrap();
        for (ui, ci) in u.iter().zip(&c) {
            prop_assert_eq!(&ui.grade_extract(0), ci);
        }
    }

    #[test]
    fn star_composition_evolves_observables(h in poly(2, 4, 3), f in poly(2, 3, 3)) {
        let u = flow_series(&h, 4, FlowMode::Quantum).unwrap();
        prop_assert_eq!(star_compose(&f, &u).unwrap(), observable_series(&f, &h, 4).unwrap());
    }

    #[test]
    fn quadratic_flows_stay_canonical(h in poly(2, 2, 4)) {
        for row in canonicity_deviation(&h, 5).unwrap() {
            for d in row {
                prop_assert!(d.is_zero_series());
            }
        }
    }

    #[test]
    fn random_hamiltonians_satisfy_exact_identities(h in poly(2, 4, 3)) {
        for kind in [IdentityKind::MoyalInvariance, IdentityKind::EnergyConservation, IdentityKind::CompositionLaw] {
            let r = verify_identity(kind, &h, 3).unwrap();
            prop_assert!(r.is_zero(), "{:?}", r.first_nonzero());
        }
    }
}

#[test]
fn classical_flow_breaks_moyal_invariance() {
    let h = quartic_iso();
    let c = flow_series(&h, 4, FlowMode::Classical).unwrap();
    assert!(bracket_table_residual(&c, Product::Poisson).unwrap().is_zero());
    let r = bracket_table_residual(&c, Product::Wedge).unwrap();
    assert!(!r.is_zero());
    let u = flow_series(&h, 4, FlowMode::Quantum).unwrap();
    assert!(bracket_table_residual(&u, Product::Wedge).unwrap().is_zero());
    assert!(!bracket_table_residual(&u, Product::Poisson).unwrap().is_zero());
}

#[test]
fn perturbed_flow_fails_energy_conservation() {
    let h = quartic_iso();
    let mut u = flow_series(&h, 3, FlowMode::Quantum).unwrap();
    let c2 = u[0].coeff(2).clone();
    u[0].set_coeff(2, &c2 + &PolySymbol::hbar(2).mul_hbar(1));
    let e = star_compose(&h, &u).unwrap();
    assert!(!e.try_sub(&qchar_core::TauSeries::constant(h, 3)).unwrap().is_zero_series());
}
