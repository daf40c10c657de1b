//! Dense linear algebra, hyperbolic matrix series, RK4 integration and
//! finite differences.

mod diff;
mod error;
mod lu;
mod matrix;
mod ode;
mod path;
mod scalar;
mod series;

pub use diff::{
    central_diff, central_diff_truncation, second_diff, second_diff5, try_central_diff,
    try_second_diff, try_second_diff5, try_third_diff, Linear,
};
pub use error::{NumError, NumResult};
pub use lu::{adjugate, condition_inf, determinant, inverse, solve, PIVOT_RTOL};
pub use matrix::{CMatrix, Matrix, RMatrix};
pub use ode::{rk4_integrate, Sample};
pub use path::PolyPath;
pub use scalar::Scalar;
pub use series::{even_series, expm_via_series, odd_series, MAX_TERMS, STOP_RTOL};
