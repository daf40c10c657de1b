//! The algebra of operators `A0 + A1 C` on `C^n`, where `C z = conj(z)`.
//!
//! `C^2 = I` and `C A = conj(A) C` let every element be written with `C`
//! on the right, so the algebra is `M (+) M` graded by the power of `C`.
//! [`rho`] realises it faithfully as real `2n x 2n` matrices.

mod element;
mod system;

use thiserror::Error;

use crate::numcore::NumError;

pub use element::{
    from_rho, ginv, gmul, gpow, neumann_identity_check, rho, rho_spectral_radius, rho_vec,
    unrho_vec, GradedElement,
};
pub use system::{
    ansatz_coeffs, fundamental_pair_residual, reduce_to_canonical, rho_fundamental,
    second_order_coeffs, second_order_residual, solve_fundamental_pair, solve_rho_trajectory,
    ComplexSystem, FundamentalPair, PairSample,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConjError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not invertible ({0})")]
    NotInvertible(String),
    #[error("spectral radius {radius:.4} times |t| = {t} is not below 1")]
    NotContractive { radius: f64, t: f64 },
    #[error("B is singular; only the first-order system is available")]
    SingularB,
    #[error("Omega is singular")]
    SingularOmega,
    #[error(transparent)]
    Num(#[from] NumError),
}

pub type ConjResult<T> = Result<T, ConjError>;
