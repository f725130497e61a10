//! Phase-space quantum dynamics by the method of quantum characteristics.
//!
//! Symbols are exact sparse polynomials in the canonical variables
//! `ξ = (q_1..q_n, p_1..p_n)` with Gaussian-rational coefficients graded by
//! powers of ħ. On top of that algebra the crate provides:
//!
//! * the Groenewold star product and its `∘` / `∧` parts ([`moyal`]),
//! * exact τ-series for quantum and classical phase flows, star-composition
//!   and residual checks of the flow identities ([`series`], [`dynamics`]),
//! * a numeric ODE propagator for classical trajectories, Jacobi fields and
//!   the first ħ² correction ([`semiclassical`]),
//! * Gaussian Wigner expectation values ([`wigner`]),
//! * skew-gradient projection for second-class constraints ([`constraints`]),
//! * a truncated star product for smooth non-polynomial symbols
//!   ([`numeric_star`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constraints;
pub mod dynamics;
mod error;
mod linsolve;
pub mod moyal;
pub mod numeric_star;
pub mod ode;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod semiclassical;
pub mod series;
pub mod symplectic;
pub mod wigner;

pub use error::{Error, Result};
pub use poly::{Coefficient, Gaussian, Monomial, PolySymbol, Rational};
pub use series::{BiSeries, TauSeries};
pub use symplectic::SymplecticStructure;
