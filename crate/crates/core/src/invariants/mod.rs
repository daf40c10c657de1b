//! Crossed matrix invariants.
//!
//! `Z_{m1..mN}(X1..XN)` is the coefficient of `a1^m1 .. aN^mN` in
//! `det(I + a1 X1 + .. + aN XN)`. It vanishes when any index is negative or
//! the order `m1 + .. + mN` exceeds the matrix size, and reduces to the
//! elementary symmetric functions of the eigenvalues for a single matrix.
//!
//! Three independent evaluation routes are provided: interpolation of the
//! determinant on an integer grid ([`z_value`]), the expansion of
//! `exp(Tr log(I + M))` over truncated polynomials ([`z_via_tracelog`]) and
//! cofactor expansion of a polynomial matrix ([`z_via_cofactor`]).

mod derivative;
mod engine;
mod identities;
mod poly;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use thiserror::Error;

use crate::numcore::NumError;

pub use derivative::{
    derivative_expand, derivative_expand_n, liouville_residual, signature_value, DerivSignature,
};
pub use engine::{
    closed_form, z3_unit_cube_coefficient, z_value, z_value_interpolated, z_via_cofactor,
    z_via_tracelog, MAX_INTERPOLATION_DIM,
};
pub use identities::{
    collapse_repeated, det_factorization, duality_pair, epsilon_first_order, richardson_ratio,
    EpsilonExpansion,
};
pub use poly::{TruncatedMultiPoly, DROP_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("interpolation route is ill-conditioned for n = {n} > {max}")]
    ConditioningWarning { n: usize, max: usize },
    #[error("no closed trace form for index {0}")]
    UnsupportedIndex(MultiIndex),
    #[error("singular matrix")]
    SingularMatrix,
    #[error(transparent)]
    Num(#[from] NumError),
}

pub type InvariantResult<T> = Result<T, InvariantError>;

/// Index vector `(m1, .., mN)` of a crossed invariant. Negative entries are
/// allowed and name the zero invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(indices: Vec<i64>) -> Self {
        Self(indices)
    }

    pub fn order(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&m| m < 0)
    }
}

impl Deref for MultiIndex {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = String;

    /// Parses `a,b,c`.
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad index entry {p:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
