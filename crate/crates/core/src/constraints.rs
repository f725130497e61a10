//! Second-class constraints in symplectic basis and skew-gradient
//! projections.
//!
//! Constraints `G_a`, `a = 0..2m`, satisfy `{G_a, G_b} = I_ab` and
//! `G_a ∧ G_b = I_ab` with `I = [[0, E_m], [-E_m, 0]]`; indices are raised
//! with `I^{ab} = -I_ab`, so `G^a = -G_{a+m}` for `a < m` and
//! `G^{m+a} = G_a`. The projection of `f` is
//!
//! ```text
//! f_s = Σ_k (1/k!) {…{f, G^{a1}}, …, G^{ak}} G_{a1} ⋯ G_{ak}
//! ```
//!
//! and its quantum version replaces `{,}` by `∧` and the products by
//! left-nested `∘`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dynamics::{
    classical_observable_series, composition_residual, dot_compose, flow_series, observable_series, star_compose,
    FlowMode,
};
use crate::linsolve::solve;
use crate::moyal::{circ, poisson_bracket, wedge};
use crate::poly::{Gaussian, Monomial, PolySymbol, Rational};
use crate::report::ResidualReport;
use crate::series::{compose, Product, SymbolSeries, TauSeries};
use crate::{Error, Result};

pub const DEFAULT_MAX_K: usize = 8;

/// Validated constraint functions in symplectic basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    dim: usize,
    m: usize,
    g: Vec<PolySymbol>,
}

/// `I_ab` for `2m` constraints.
pub fn constraint_matrix_entry(m: usize, a: usize, b: usize) -> i64 {
    if a < m && b == a + m {
        1
    } else if a >= m && b + m == a {
        -1
    } else {
        0
    }
}

fn exact_det(mut a: Vec<Vec<Gaussian>>) -> Gaussian {
    let n = a.len();
    let mut det = Gaussian::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Gaussian::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] = &a[r][k] - &t;
            }
        }
    }
    det
}

/// Checks `{G_a, G_b} = I_ab` and `G_a ∧ G_b = I_ab` exactly.
pub fn validate_symplectic_basis(g: Vec<PolySymbol>) -> Result<ConstraintSet> {
    let count = g.len();
    let first = g
        .first()
        .ok_or_else(|| Error::InvalidArgument("no constraint functions".into()))?;
    let dim = first.dim();
    if !count.is_multiple_of(2) || count >= dim {
        return Err(Error::InvalidArgument(format!(
            "need an even number of constraints below the phase-space dimension {dim}, got {count}"
        )));
    }
    for c in &g {
        first.check_dim(c)?;
        if !c.is_hermitian_symbol() {
            return Err(Error::NonHermitian(format!("{c}")));
        }
    }
    let m = count / 2;
    for (kind, op) in [("poisson", 0u8), ("moyal", 1u8)] {
        let mut table = Vec::with_capacity(count);
        for a in 0..count {
            let mut row = Vec::with_capacity(count);
            for b in 0..count {
                let v = if op == 0 {
                    poisson_bracket(&g[a], &g[b])?
                } else {
                    wedge(&g[a], &g[b])?
                };
                row.push(v);
            }
            table.push(row);
        }
        let constant = table.iter().flatten().all(|v| v.total_degree() == 0 && v.max_hbar_power() == 0);
        if constant {
            let values: Vec<Vec<Gaussian>> = table
                .iter()
                .map(|row| row.iter().map(|v| v.coefficient(&vec![0; dim], 0)).collect())
                .collect();
            if exact_det(values).is_zero() {
                return Err(Error::DegenerateConstraints);
            }
        }
        for a in 0..count {
            for b in 0..count {
                let target = PolySymbol::from_int(dim, constraint_matrix_entry(m, a, b));
                let residual = table[a][b].checked_sub(&target)?;
                if !residual.is_zero() {
                    return Err(Error::BasisViolation {
                        a,
                        b,
                        residual: format!("{kind}: {residual}"),
                    });
                }
            }
        }
    }
    Ok(ConstraintSet { dim, m, g })
}

impl ConstraintSet {
    pub fn new(g: Vec<PolySymbol>) -> Result<Self> {
        validate_symplectic_basis(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of constraint pairs.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn constraints(&self) -> &[PolySymbol] {
        &self.g
    }

    /// `G^a = I^{ab} G_b`.
    pub fn raised(&self, a: usize) -> PolySymbol {
        if a < self.m {
            -&self.g[a + self.m]
        } else {
            self.g[a - self.m].clone()
        }
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let c = 2 * self.m;
        (0..c)
            .map(|a| (0..c).map(|b| constraint_matrix_entry(self.m, a, b)).collect())
            .collect()
    }
}

fn factorial_recip(k: usize) -> Rational {
    let f = (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Rational::new(BigInt::one(), f)
}

/// Skew-gradient projection of `f` (classical or quantum).
pub fn project(f: &PolySymbol, cs: &ConstraintSet, max_k: usize, mode: FlowMode) -> Result<PolySymbol> {
    f.check_dim(&cs.g[0])?;
    let raised: Vec<PolySymbol> = (0..cs.g.len()).map(|a| cs.raised(a)).collect();
    let bracket = |x: &PolySymbol, y: &PolySymbol| match mode {
        FlowMode::Classical => poisson_bracket(x, y),
        FlowMode::Quantum => wedge(x, y),
    };
    let times = |x: &PolySymbol, y: &PolySymbol| match mode {
        FlowMode::Classical => x.multiply(y),
        FlowMode::Quantum => circ(x, y),
    };
    let mut total = f.clone();
    // (nested bracket, indices) for the current depth
    let mut level: Vec<(PolySymbol, Vec<usize>)> = vec![(f.clone(), Vec::new())];
    for k in 1..=max_k + 1 {
        let mut next = Vec::new();
        for (b, idx) in &level {
            for (a, ga) in raised.iter().enumerate() {
                let nb = bracket(b, ga)?;
                if !nb.is_zero() {
                    let mut i = idx.clone();
                    i.push(a);
                    next.push((nb, i));
                }
            }
        }
        if next.is_empty() {
            return Ok(total);
        }
        if k > max_k {
            return Err(Error::NonTerminating(max_k));
        }
        let w = factorial_recip(k);
        for (b, idx) in &next {
            let mut term = b.clone();
            for &a in idx {
                term = times(&term, &cs.g[a])?;
            }
            total = total.checked_add(&term.scale_rational(&w))?;
        }
        level = next;
    }
    Ok(total)
}

pub fn classical_project(f: &PolySymbol, cs: &ConstraintSet, max_k: usize) -> Result<PolySymbol> {
    project(f, cs, max_k, FlowMode::Classical)
}

pub fn quantum_project(f: &PolySymbol, cs: &ConstraintSet, max_k: usize) -> Result<PolySymbol> {
    project(f, cs, max_k, FlowMode::Quantum)
}

/// Projected coordinate functions `ξ_s` or `ξ_t`.
pub fn projected_coordinates(cs: &ConstraintSet, max_k: usize, mode: FlowMode) -> Result<Vec<PolySymbol>> {
    (0..cs.dim)
        .map(|i| project(&PolySymbol::var(cs.dim, i), cs, max_k, mode))
        .collect()
}

pub fn projected_hamiltonian(h: &PolySymbol, cs: &ConstraintSet, mode: FlowMode) -> Result<PolySymbol> {
    project(h, cs, DEFAULT_MAX_K, mode)
}

/// `{f, G_a}` (or `f ∧ G_a`) for every constraint.
pub fn involution_residual(f: &PolySymbol, cs: &ConstraintSet, mode: FlowMode) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new("involution", vec![], None);
    for (a, g) in cs.g.iter().enumerate() {
        let r = match mode {
            FlowMode::Classical => poisson_bracket(f, g)?,
            FlowMode::Quantum => wedge(f, g)?,
        };
        rep.push(&format!("G{}", a + 1), vec![], r);
    }
    Ok(rep)
}

fn projected_flow(h: &PolySymbol, cs: &ConstraintSet, k: usize, mode: FlowMode) -> Result<Vec<TauSeries>> {
    let hp = projected_hamiltonian(h, cs, mode)?;
    flow_series(&hp, k, mode)
}

/// `G_a(c(ξ,τ)) - G_a` (dot) or `G_a(⋆u(ξ,τ)) - G_a` under the flow of the
/// projected Hamiltonian.
pub fn check_constraint_preservation(h: &PolySymbol, cs: &ConstraintSet, k: usize, mode: FlowMode) -> Result<ResidualReport> {
    let u = projected_flow(h, cs, k, mode)?;
    let mut rep = ResidualReport::new("constraint-preservation", vec![k], None);
    for (a, g) in cs.g.iter().enumerate() {
        let moved = match mode {
            FlowMode::Classical => dot_compose(g, &u)?,
            FlowMode::Quantum => star_compose(g, &u)?,
        };
        rep.push_series(&format!("G{}", a + 1), &moved.try_sub(&TauSeries::constant(g.clone(), k))?);
    }
    Ok(rep)
}

/// Projects every τ-coefficient.
fn project_series(s: &TauSeries, cs: &ConstraintSet, mode: FlowMode) -> Result<TauSeries> {
    s.map(|c| project(c, cs, DEFAULT_MAX_K, mode))
}

/// Flow/projection commutativity under the projected Hamiltonian:
/// `c_s(ξ,τ) = c(ξ_s(ξ),τ) = ξ_s(c(ξ,τ))` classically and
/// `u_t(ξ,τ) = u(⋆ξ_t(ξ),τ) = ξ_t(⋆u(ξ,τ))` quantum-mechanically (through
/// ħ²). The quantum check also covers the composition law of the
/// projected trajectories `u_t` at order `min(k, 3)`.
pub fn check_flow_projection_commute(h: &PolySymbol, cs: &ConstraintSet, k: usize, mode: FlowMode) -> Result<ResidualReport> {
    let u = projected_flow(h, cs, k, mode)?;
    let xi_p = projected_coordinates(cs, DEFAULT_MAX_K, mode)?;
    let op = match mode {
        FlowMode::Classical => Product::Dot,
        FlowMode::Quantum => Product::Star,
    };
    let cap = match mode {
        FlowMode::Classical => None,
        FlowMode::Quantum => Some(2),
    };
    let mut rep = ResidualReport::new("flow-projection-commute", vec![k], cap);
    let mut projected = Vec::with_capacity(cs.dim);
    for (i, ui) in u.iter().enumerate() {
        let up = project_series(ui, cs, mode)?;
        // u(ξ_p, τ): substitute the projected point into every coefficient
        let mut at_projected = Vec::with_capacity(k + 1);
        for c in ui.coeffs() {
            at_projected.push(compose(c, &xi_p, op)?);
        }
        let at_projected = TauSeries::new(at_projected)?;
        let after = compose(&xi_p[i], &u, op)?;
        rep.push_series(&format!("u{}:proj-vs-start", i + 1), &up.try_sub(&at_projected)?);
        rep.push_series(&format!("u{}:proj-vs-end", i + 1), &up.try_sub(&after)?);
        projected.push(up);
    }
    if mode == FlowMode::Quantum {
        let kc = k.min(3);
        let trunc: Vec<TauSeries> = projected.iter().map(|s| s.truncate(kc)).collect();
        let mut comp = composition_residual(&trunc, "projected-composition")?;
        for t in comp.nonzero.iter_mut() {
            t.residual = t.residual.truncate_hbar(2);
        }
        comp.nonzero.retain(|t| !t.residual.is_zero());
        rep.absorb(comp);
    }
    Ok(rep)
}

/// Polynomial `φ` with `φ(⋆ξ_t) = f_t`, searched over monomials of total
/// degree `≤ degree` with ħ powers up to those of `f_t`.
pub fn find_representation(f_t: &PolySymbol, xi_t: &[PolySymbol], degree: u32) -> Result<PolySymbol> {
    let dim = f_t.dim();
    let max_h = f_t.max_hbar_power();
    let mut basis_monos: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; dim];
    loop {
        if cur.iter().sum::<u32>() <= degree {
            basis_monos.push(cur.clone());
        }
        let mut i = 0;
        while i < dim {
            cur[i] += 1;
            if cur[i] <= degree {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    let mut columns: Vec<(Vec<u32>, u32, PolySymbol)> = Vec::new();
    for e in &basis_monos {
        let mono = PolySymbol::monomial(dim, e.clone(), 0, Gaussian::one())?;
        let image = compose(&mono, xi_t, Product::Star)?;
        for h in 0..=max_h {
            columns.push((e.clone(), h, image.mul_hbar(h)));
        }
    }
    // one equation per (monomial, ħ power) appearing anywhere
    let mut keys: Vec<(Monomial, u32)> = f_t.terms().map(|(m, h, _)| (m.clone(), h)).collect();
    for (_, _, c) in &columns {
        keys.extend(c.terms().map(|(m, h, _)| (m.clone(), h)));
    }
    keys.sort();
    keys.dedup();
    let a: Vec<Vec<Gaussian>> = keys
        .iter()
        .map(|(m, h)| columns.iter().map(|(_, _, c)| c.coefficient(m.exponents(), *h)).collect())
        .collect();
    let b: Vec<Gaussian> = keys.iter().map(|(m, h)| f_t.coefficient(m.exponents(), *h)).collect();
    let x = solve(a, b, columns.len()).ok_or_else(|| Error::NoRepresentation(format!("{f_t}")))?;
    let mut phi = PolySymbol::zero(dim);
    for ((e, h, _), c) in columns.iter().zip(x) {
        if !c.is_zero() {
            phi.add_term(Monomial::new(e.clone()), *h, c);
        }
    }
    Ok(phi)
}

/// Result of [`constrained_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedSolution {
    /// `f(c_s(ξ,τ))` or `φ(⋆u_t(ξ,τ))`.
    pub series: TauSeries,
    /// The representation `φ` (quantum mode), `f` itself classically.
    pub phi: PolySymbol,
    /// Difference to the evolution of the projected observable under the
    /// projected Hamiltonian.
    pub residual: ResidualReport,
}

/// Evolves a projected observable through projected characteristics.
pub fn constrained_solution(f: &PolySymbol, h: &PolySymbol, cs: &ConstraintSet, k: usize, mode: FlowMode) -> Result<ConstrainedSolution> {
    let u = projected_flow(h, cs, k, mode)?;
    let hp = projected_hamiltonian(h, cs, mode)?;
    let fp = project(f, cs, DEFAULT_MAX_K, mode)?;
    let projected: Vec<TauSeries> = u.iter().map(|s| project_series(s, cs, mode)).collect::<Result<_>>()?;
    let (series, phi, reference) = match mode {
        FlowMode::Classical => (
            dot_compose(f, &projected)?,
            f.clone(),
            classical_observable_series(&fp, &hp, k)?,
        ),
        FlowMode::Quantum => {
            let xi_t = projected_coordinates(cs, DEFAULT_MAX_K, mode)?;
            let phi = find_representation(&fp, &xi_t, fp.total_degree().max(1))?;
            (star_compose(&phi, &projected)?, phi, observable_series(&fp, &hp, k)?)
        }
    };
    let mut residual = ResidualReport::new("constrained-solution", vec![k], None);
    residual.push_series("f", &series.try_sub(&reference)?);
    Ok(ConstrainedSolution { series, phi, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{gauss_int, gauss_rat};

    const D: usize = 4;

    fn x(i: usize) -> PolySymbol {
        PolySymbol::q(D, i)
    }
    fn y(i: usize) -> PolySymbol {
        PolySymbol::p(D, i)
    }
    fn linear() -> ConstraintSet {
        ConstraintSet::new(vec![x(1), y(1)]).unwrap()
    }
    fn oscillators() -> PolySymbol {
        (&(&x(0).pow(2) + &y(0).pow(2)) + &(&x(1).pow(2) + &y(1).pow(2))).scale(&gauss_rat(1, 2))
    }

    #[test]
    fn basis_validation() {
        let cs = linear();
        assert_eq!(cs.m(), 1);
        assert_eq!(cs.matrix(), vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(ConstraintSet::new(vec![x(1), x(1)]), Err(Error::DegenerateConstraints));
        assert!(matches!(
            ConstraintSet::new(vec![x(1), y(1).scale(&gauss_int(2))]),
            Err(Error::BasisViolation { a: 0, b: 1, .. })
        ));
        assert!(ConstraintSet::new(vec![x(1)]).is_err());
        assert!(ConstraintSet::new(vec![&x(1) + &x(0).pow(2), y(1)]).is_ok());
    }

    #[test]
    fn raising_matches_matrix() {
        let cs = linear();
        assert_eq!(cs.raised(0), -&y(1));
        assert_eq!(cs.raised(1), x(1));
    }

    #[test]
    fn coordinate_projection() {
        let cs = linear();
        let xs = projected_coordinates(&cs, DEFAULT_MAX_K, FlowMode::Classical).unwrap();
        assert_eq!(xs, vec![x(0), PolySymbol::zero(D), y(0), PolySymbol::zero(D)]);
        let xt = projected_coordinates(&cs, DEFAULT_MAX_K, FlowMode::Quantum).unwrap();
        assert_eq!(xs, xt);
    }

    #[test]
    fn bracket_ladder_example() {
        let cs = linear();
        let f = &(&x(0) * &y(0)) + &(&x(1) * &y(1));
        assert_eq!(classical_project(&f, &cs, DEFAULT_MAX_K).unwrap(), &x(0) * &y(0));
        assert_eq!(classical_project(&PolySymbol::from_int(D, 5), &cs, 1).unwrap(), PolySymbol::from_int(D, 5));
        assert_eq!(quantum_project(&PolySymbol::one(D), &cs, 1).unwrap(), PolySymbol::one(D));
    }

    #[test]
    fn quantum_projection_of_constraint_product_vanishes() {
        let cs = linear();
        let f = circ(&x(1), &y(1)).unwrap();
        let ft = quantum_project(&f, &cs, DEFAULT_MAX_K).unwrap();
        assert!(ft.is_zero());
        assert!(involution_residual(&ft, &cs, FlowMode::Quantum).unwrap().is_zero());
    }

    #[test]
    fn projected_hamiltonian_drops_constrained_pair() {
        let cs = linear();
        let hs = projected_hamiltonian(&oscillators(), &cs, FlowMode::Classical).unwrap();
        assert_eq!(hs, (&x(0).pow(2) + &y(0).pow(2)).scale(&gauss_rat(1, 2)));
        assert_eq!(projected_hamiltonian(&oscillators(), &cs, FlowMode::Quantum).unwrap(), hs);
        assert_eq!(projected_hamiltonian(&hs, &cs, FlowMode::Classical).unwrap(), hs);
    }

    #[test]
    fn non_termination_is_reported() {
        // the flow of x2 + x1 p1 rescales x1, so the ladder never ends
        let cs = ConstraintSet::new(vec![&x(1) + &(&x(0) * &y(0)), y(1)]).unwrap();
        assert_eq!(classical_project(&x(0), &cs, 4), Err(Error::NonTerminating(4)));
    }

    #[test]
    fn nonlinear_constraints_project_into_involution() {
        let cs = ConstraintSet::new(vec![&x(1) + &y(0).pow(2), &y(1) + &y(0).pow(3)]).unwrap();
        for f in [x(0).pow(3), &x(0).pow(2) * &x(1), &x(0) * &y(1).pow(2), &x(0).pow(2) * &y(0).pow(2)] {
            for mode in [FlowMode::Classical, FlowMode::Quantum] {
                let fp = project(&f, &cs, DEFAULT_MAX_K, mode).unwrap();
                assert!(involution_residual(&fp, &cs, mode).unwrap().is_zero(), "{f} {mode:?}");
                assert_eq!(project(&fp, &cs, DEFAULT_MAX_K, mode).unwrap(), fp);
            }
            let c = classical_project(&f, &cs, DEFAULT_MAX_K).unwrap();
            let qt = quantum_project(&f, &cs, DEFAULT_MAX_K).unwrap();
            assert_eq!(qt.grade_extract(0), c);
        }
    }

    #[test]
    fn preservation_and_commutation_on_linear_family() {
        let cs = linear();
        let h = &oscillators() + &(&x(0).pow(2) * &x(1));
        for mode in [FlowMode::Classical, FlowMode::Quantum] {
            let r = check_constraint_preservation(&h, &cs, 4, mode).unwrap();
            assert!(r.is_zero(), "{mode:?}");
            let r = check_flow_projection_commute(&h, &cs, 3, mode).unwrap();
            assert!(r.is_zero(), "{mode:?} {:?}", r.first_nonzero());
        }
        let zero = PolySymbol::zero(D);
        assert!(check_constraint_preservation(&zero, &cs, 2, FlowMode::Quantum).unwrap().is_zero());
    }

    #[test]
    fn constrained_solutions() {
        let cs = linear();
        let h = oscillators();
        for mode in [FlowMode::Classical, FlowMode::Quantum] {
            let s = constrained_solution(&x(0), &h, &cs, 5, mode).unwrap();
            assert!(s.residual.is_zero());
            assert_eq!(s.series.coeff(1), &y(0));
            assert_eq!(s.series.coeff(2), &x(0).scale(&gauss_rat(-1, 2)));
            let s = constrained_solution(&x(1), &h, &cs, 3, mode).unwrap();
            assert!(s.series.is_zero_series());
            let s = constrained_solution(&PolySymbol::one(D), &h, &cs, 3, mode).unwrap();
            assert_eq!(s.series, TauSeries::constant(PolySymbol::one(D), 3));
        }
        let f = &x(0).pow(2) * &y(0);
        let s = constrained_solution(&f, &(&h + &x(0).pow(4)), &cs, 4, FlowMode::Quantum).unwrap();
        assert!(s.residual.is_zero());
    }
}
