//! Second differentiation of determinant invariants under `X'' = X E`.
//!
//! Invariants of `X` and its derivatives are written over the symbols
//! `X E^q` and `X' E^q`, differentiated slot by slot, and reduced by a fixed
//! set of rewriting rules (see [`canonicalize`]). [`explore`] searches for a
//! finite set of states closed under second differentiation: for `n = 2` it
//! finds `det X`, `det X'` with constant coefficients in `tr E` and `det E`;
//! for `n > 2` the state set keeps growing under these rules.

mod explore;
mod numeric;
mod rewrite;
mod symbols;

use thiserror::Error;

use crate::invariants::InvariantError;
use crate::numcore::NumError;
use crate::reflection::ReflectionError;

pub use explore::{explore, ClosureReport, DEFAULT_MAX_DEPTH};
pub use numeric::{first_derivative_defect, numeric_verify, state_value};
pub use rewrite::{
    canonicalize, differentiate_signature, first_derivative, second_derivative, CanonicalTerm,
};
pub use symbols::{
    ArgSymbol, CanonicalSignature, ConstantFactor, ConstantPoly, EInvariant, Expansion,
    RawSignature,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosureError {
    #[error("closure search for n = {n} did not close; no transition to verify")]
    NotClosed { n: usize },
    #[error("report is for n = {report}, system has n = {system}")]
    DimensionMismatch { report: usize, system: usize },
    #[error(transparent)]
    Reflection(#[from] ReflectionError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Num(#[from] NumError),
}

pub type ClosureResult<T> = Result<T, ClosureError>;
