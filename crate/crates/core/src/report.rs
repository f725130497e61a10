//! Residual reports produced by the exact identity checks.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::poly::PolySymbol;
use crate::series::{BiSeries, TauSeries};

/// One nonzero residual coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualTerm {
    /// Which component or pair the residual belongs to, e.g. `"u1^u2"`.
    pub label: String,
    /// Powers of the evolution parameters for this coefficient.
    pub orders: Vec<usize>,
    pub residual: PolySymbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub identity: String,
    /// Truncation orders used for the check.
    pub orders: Vec<usize>,
    /// Highest ħ power compared, `None` for all.
    pub hbar_cap: Option<u32>,
    /// Number of coefficients compared.
    pub checked: usize,
    pub nonzero: Vec<ResidualTerm>,
}

impl ResidualReport {
    pub fn new(identity: &str, orders: Vec<usize>, hbar_cap: Option<u32>) -> Self {
        ResidualReport {
            identity: identity.to_string(),
            orders,
            hbar_cap,
            checked: 0,
            nonzero: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }

    pub fn first_nonzero(&self) -> Option<&ResidualTerm> {
        self.nonzero.first()
    }

    pub fn push(&mut self, label: &str, orders: Vec<usize>, residual: PolySymbol) {
        self.checked += 1;
        let r = match self.hbar_cap {
            Some(cap) => residual.truncate_hbar(cap),
            None => residual,
        };
        if !r.is_zero() {
            self.nonzero.push(ResidualTerm {
                label: label.to_string(),
                orders,
                residual: r,
            });
        }
    }

    pub fn push_series(&mut self, label: &str, residual: &TauSeries) {
        for (s, c) in residual.coeffs().iter().enumerate() {
            self.push(label, alloc::vec![s], c.clone());
        }
    }

    pub fn push_bi_series(&mut self, label: &str, residual: &BiSeries) {
        for (a, b, c) in residual.entries() {
            self.push(label, alloc::vec![a, b], c.clone());
        }
    }

    /// Folds another report's counts and residuals into this one.
    pub fn absorb(&mut self, other: ResidualReport) {
        self.checked += other.checked;
        self.nonzero.extend(other.nonzero);
    }
}
