//! Canonical symplectic structure on `R^{2n}`.
//!
//! Variables are ordered `ξ = (q_1..q_n, p_1..p_n)`. The matrix `I^{kl}` is
//! the block `[[0, -E_n], [E_n, 0]]` and the Poisson bracket is
//! `{f, g} = -I^{kl} ∂_k f ∂_l g`, so that `{q_a, p_a} = +1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticStructure {
    n: usize,
}

impl SymplecticStructure {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension(0));
        }
        Ok(Self { n })
    }

    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::BadDimension(dim));
        }
        Ok(Self { n: dim / 2 })
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Phase-space dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Entry `I^{kl}`.
    #[inline]
    pub fn entry(&self, k: usize, l: usize) -> i32 {
        symplectic_entry(self.n, k, l)
    }

    pub fn matrix(&self) -> Vec<Vec<i32>> {
        let d = self.dim();
        (0..d)
            .map(|k| (0..d).map(|l| self.entry(k, l)).collect())
            .collect()
    }

    /// Index of the variable conjugate to `k` (q_a <-> p_a).
    pub fn conjugate(&self, k: usize) -> usize {
        if k < self.n {
            k + self.n
        } else {
            k - self.n
        }
    }

    pub fn is_coordinate(&self, k: usize) -> bool {
        k < self.n
    }

    /// `I·I`, which must equal `-1`.
    pub fn square(&self) -> Vec<Vec<i32>> {
        let d = self.dim();
        let mut out = vec![vec![0; d]; d];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..d).map(|k| self.entry(i, k) * self.entry(k, j)).sum();
            }
        }
        out
    }
}

/// `I^{kl}` for `n` degrees of freedom.
#[inline]
pub fn symplectic_entry(n: usize, k: usize, l: usize) -> i32 {
    if k < n && l == k + n {
        -1
    } else if k >= n && k < 2 * n && l + n == k {
        1
    } else {
        0
    }
}

/// Dense `I^{kl}` as `f64`, used by the numeric modules.
pub fn symplectic_matrix_f64(dim: usize) -> Vec<f64> {
    let n = dim / 2;
    let mut m = vec![0.0; dim * dim];
    for k in 0..dim {
        for l in 0..dim {
            m[k * dim + l] = symplectic_entry(n, k, l) as f64;
        }
    }
    m
}
