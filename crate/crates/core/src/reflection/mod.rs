//! Linear systems with reflection `F u'(t) + G u'(-t) + A u(t) + B u(-t) = 0`.
//!
//! With `E = (F-G)^-1 (A-B) (F+G)^-1 (A+B)` and `M+ = (F+G)^-1 (A+B)` the
//! matrix `X(t) = C(t) - M+ S(t)` built from the even/odd series in `E` is a
//! fundamental matrix. It satisfies `X(0) = I`, `X'(0) = -M+` and
//! `X'' = X E`.

mod ajl;
mod riccati;

use thiserror::Error;

use crate::numcore::{condition_inf, even_series, inverse, odd_series, NumError, RMatrix};
use crate::random::{uniform_matrix, Rng};

pub use ajl::{ajl_integrate, AjlMode, AjlSample, AjlState};
pub use riccati::{
    riccati_residual, riccati_truncation_estimate, trace_truncation_estimate, y_closed_form,
    y_direct, y_trace_identity, TraceIdentity, TRUNCATION_PROBE_STEP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    FMinusG,
    FPlusG,
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficient::FMinusG => f.write_str("F-G"),
            Coefficient::FPlusG => f.write_str("F+G"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReflectionError {
    #[error("{0} is singular")]
    SingularCoefficient(Coefficient),
    #[error("fundamental matrix is singular at t = {t}")]
    SingularFundamentalMatrix { t: f64 },
    #[error("closed-form denominator -S(t)M+ + C(t) is singular at t = {t}")]
    SingularDenominator { t: f64 },
    #[error("Y(t) is singular at t = {t}")]
    SingularY { t: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

pub type ReflectionResult<T> = Result<T, ReflectionError>;

/// The four real coefficient matrices of a reflection system.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSystem {
    pub f: RMatrix,
    pub g: RMatrix,
    pub a: RMatrix,
    pub b: RMatrix,
}

/// `E` and `M+` of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionOperators {
    pub e: RMatrix,
    pub m_plus: RMatrix,
}

impl ReflectionSystem {
    pub fn new(f: RMatrix, g: RMatrix, a: RMatrix, b: RMatrix) -> ReflectionResult<Self> {
        let n = f.square_dim()?;
        for (name, m) in [("G", &g), ("A", &a), ("B", &b)] {
            if m.rows() != n || m.cols() != n {
                return Err(ReflectionError::DimensionMismatch(format!(
                    "{name} is {}x{}, F is {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self { f, g, a, b })
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    /// Largest Frobenius norm among the four coefficients.
    pub fn norm(&self) -> f64 {
        [&self.f, &self.g, &self.a, &self.b]
            .iter()
            .map(|m| m.frobenius())
            .fold(0.0, f64::max)
    }

    /// `u' + a u = 0`, i.e. `F = I`, `G = 0`, `B = 0`.
    pub fn plain(a: RMatrix) -> ReflectionResult<Self> {
        let n = a.square_dim()?;
        Self::new(
            RMatrix::identity(n),
            RMatrix::zeros(n, n),
            a,
            RMatrix::zeros(n, n),
        )
    }

    /// Random system: entries uniform in `[-1, 1]`, resampled until
    /// `cond(F - G)` and `cond(F + G)` are below 100; when `e_bound` is set,
    /// `A` and `B` are then rescaled by a common factor so that
    /// `|E|_F <= e_bound` (`E` is quadratic in `(A, B)`).
    pub fn random(rng: &mut Rng, n: usize, e_bound: Option<f64>) -> Self {
        loop {
            let f = uniform_matrix(rng, n, n);
            let g = uniform_matrix(rng, n, n);
            let a = uniform_matrix(rng, n, n);
            let b = uniform_matrix(rng, n, n);
            if condition_inf(&(&f - &g)) >= 100.0 || condition_inf(&(&f + &g)) >= 100.0 {
                continue;
            }
            let mut sys = Self { f, g, a, b };
            if let Some(bound) = e_bound {
                let Ok(ops) = sys.operators() else { continue };
                let norm = ops.e.frobenius();
                if norm > bound {
                    let s = (bound / norm).sqrt();
                    sys.a = sys.a.scale(s);
                    sys.b = sys.b.scale(s);
                }
            }
            return sys;
        }
    }

    /// `E` and `M+`; fails when `F - G` or `F + G` is singular.
    pub fn operators(&self) -> ReflectionResult<ReflectionOperators> {
        derive_operators(self)
    }
}

pub fn derive_operators(sys: &ReflectionSystem) -> ReflectionResult<ReflectionOperators> {
    let minus_inv = inverse(&(&sys.f - &sys.g))
        .map_err(|_| ReflectionError::SingularCoefficient(Coefficient::FMinusG))?;
    let plus_inv = inverse(&(&sys.f + &sys.g))
        .map_err(|_| ReflectionError::SingularCoefficient(Coefficient::FPlusG))?;
    let m_plus = &plus_inv * &(&sys.a + &sys.b);
    let e = &(&minus_inv * &(&sys.a - &sys.b)) * &m_plus;
    Ok(ReflectionOperators { e, m_plus })
}

/// `C(t)`, `S(t)` for the system's `E`.
pub(crate) fn hyperbolic_pair(
    ops: &ReflectionOperators,
    t: f64,
) -> ReflectionResult<(RMatrix, RMatrix)> {
    Ok((even_series(&ops.e, t)?, odd_series(&ops.e, t)?))
}

/// `X(t) = C(t) - M+ S(t)`.
pub fn fundamental_matrix(sys: &ReflectionSystem, t: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    fundamental_from_ops(&ops, t)
}

/// `X'(t) = S(t) E - M+ C(t)`.
pub fn fundamental_matrix_derivative(sys: &ReflectionSystem, t: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    fundamental_derivative_from_ops(&ops, t)
}

pub(crate) fn fundamental_from_ops(ops: &ReflectionOperators, t: f64) -> ReflectionResult<RMatrix> {
    let (c, s) = hyperbolic_pair(ops, t)?;
    Ok(&c - &(&ops.m_plus * &s))
}

pub(crate) fn fundamental_derivative_from_ops(
    ops: &ReflectionOperators,
    t: f64,
) -> ReflectionResult<RMatrix> {
    let (c, s) = hyperbolic_pair(ops, t)?;
    Ok(&(&s * &ops.e) - &(&ops.m_plus * &c))
}

/// Value and derivative of a (matrix-valued) trial solution.
pub type Trial = (RMatrix, RMatrix);

/// `F u'(t) + G u'(-t) + A u(t) + B u(-t)`, columnwise for matrix-valued `u`.
pub fn reflection_residual<U>(sys: &ReflectionSystem, t: f64, u: U) -> ReflectionResult<RMatrix>
where
    U: Fn(f64) -> ReflectionResult<Trial>,
{
    let (u_pos, du_pos) = u(t)?;
    let (u_neg, du_neg) = u(-t)?;
    let terms = [
        sys.f.try_mul(&du_pos)?,
        sys.g.try_mul(&du_neg)?,
        sys.a.try_mul(&u_pos)?,
        sys.b.try_mul(&u_neg)?,
    ];
    let mut acc = terms[0].clone();
    for term in &terms[1..] {
        acc = acc.try_add(term)?;
    }
    Ok(acc)
}

/// Residual of the fundamental matrix itself.
pub fn fundamental_residual(sys: &ReflectionSystem, t: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    reflection_residual(sys, t, |s| {
        Ok((
            fundamental_from_ops(&ops, s)?,
            fundamental_derivative_from_ops(&ops, s)?,
        ))
    })
}
