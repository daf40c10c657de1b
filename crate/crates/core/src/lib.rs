//! Reflection differential systems and generalized matrix invariants.
//!
//! * [`numcore`]: dense matrices over `f64`/`Complex64`, LU, hyperbolic
//!   matrix series, RK4 and finite differences.
//! * [`reflection`]: systems `F u'(t) + G u'(-t) + A u(t) + B u(-t) = 0`,
//!   their fundamental matrix, the determinant ODE for `n = 2` and the
//!   Riccati matrix `Y = X^-1 X'`.
//! * [`conjalg`]: the Z2-graded algebra of elements `A0 + A1 C` (`C` complex
//!   conjugation) and complex systems `z' + A z + B conj(z) = 0`.
//! * [`invariants`]: crossed invariants `Z_{m1..mN}(X1..XN)`, the
//!   coefficients of `det(I + sum a_i X_i)`, with their identities and
//!   derivative calculus.
//! * [`closure`]: symbolic second differentiation of determinant invariants
//!   under `X'' = X E`.
//! * [`cli`]: the batch front end behind the `refinv` binary.

pub mod cli;
pub mod closure;
pub mod conjalg;
pub mod invariants;
pub mod numcore;
pub mod random;
pub mod reflection;
