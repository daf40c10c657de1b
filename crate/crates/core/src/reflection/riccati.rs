//! The log-derivative matrix `Y = X^-1 X'`, which solves `Y' = E - Y^2`.

use crate::numcore::{
    central_diff_truncation, determinant, inverse, try_central_diff, try_third_diff, RMatrix,
};

use super::{
    fundamental_derivative_from_ops, fundamental_from_ops, hyperbolic_pair, ReflectionError,
    ReflectionResult, ReflectionSystem,
};

/// `X(t)^-1 X'(t)`.
pub fn y_direct(sys: &ReflectionSystem, t: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    let x = fundamental_from_ops(&ops, t)?;
    let x_inv = inverse(&x).map_err(|_| ReflectionError::SingularFundamentalMatrix { t })?;
    Ok(&x_inv * &fundamental_derivative_from_ops(&ops, t)?)
}

/// `(-C M+ + E S)(-S M+ + C)^-1`, the linearised solution of the Riccati
/// equation with `Y(0) = -M+`.
pub fn y_closed_form(sys: &ReflectionSystem, t: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    let (c, s) = hyperbolic_pair(&ops, t)?;
    let numer = &(&ops.e * &s) - &(&c * &ops.m_plus);
    let denom = &c - &(&s * &ops.m_plus);
    let denom_inv = inverse(&denom).map_err(|_| ReflectionError::SingularDenominator { t })?;
    Ok(&numer * &denom_inv)
}

/// `Y'(t) - (E - Y(t)^2)` with `Y'` by central difference of step `h`.
pub fn riccati_residual(sys: &ReflectionSystem, t: f64, h: f64) -> ReflectionResult<RMatrix> {
    let ops = sys.operators()?;
    let dy = try_central_diff(|s| y_direct(sys, s), t, h)?;
    let y = y_direct(sys, t)?;
    Ok(&dy - &(&ops.e - &(&y * &y)))
}

/// Step used to estimate third derivatives for the truncation estimates.
pub const TRUNCATION_PROBE_STEP: f64 = 1e-2;

/// Estimated truncation error of the central difference of `Y` with step `h`,
/// from a coarse third difference of `Y` itself. Large near poles of `Y`.
pub fn riccati_truncation_estimate(
    sys: &ReflectionSystem,
    t: f64,
    h: f64,
) -> ReflectionResult<f64> {
    let d3 = try_third_diff(|s| y_direct(sys, s), t, TRUNCATION_PROBE_STEP)?;
    Ok(central_diff_truncation(d3.max_abs(), h))
}

fn log_abs_det_y(sys: &ReflectionSystem, s: f64) -> ReflectionResult<f64> {
    let d = determinant(&y_direct(sys, s)?)?;
    if d == 0.0 {
        return Err(ReflectionError::SingularY { t: s });
    }
    Ok(d.abs().ln())
}

/// Estimated truncation error of the central difference of `log|det Y|` with
/// step `h`. Large near zeros of `det Y`.
pub fn trace_truncation_estimate(sys: &ReflectionSystem, t: f64, h: f64) -> ReflectionResult<f64> {
    let d3 = try_third_diff(|s| log_abs_det_y(sys, s), t, TRUNCATION_PROBE_STEP)?;
    Ok(central_diff_truncation(d3, h))
}

/// Terms of the trace identity for `Y`.
///
/// `Y' = E - Y^2` gives `(log|det Y|)' = Tr(Y^-1 Y') = Tr(Y^-1 E) - Tr(Y)`,
/// hence `Tr(Y^-1 E) = Tr(Y) + (log|det Y|)'`. The variant
/// `Tr(Y) - (log|det Y|)'` only agrees when `det Y` is stationary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceIdentity {
    /// `Tr(Y^-1 E)`.
    pub lhs: f64,
    pub trace_y: f64,
    /// `(log|det Y|)'` by central difference.
    pub dlog_det: f64,
}

impl TraceIdentity {
    /// `Tr(Y) + (log|det Y|)'`.
    pub fn rhs(&self) -> f64 {
        self.trace_y + self.dlog_det
    }

    /// `Tr(Y) - (log|det Y|)'`.
    pub fn rhs_opposite_sign(&self) -> f64 {
        self.trace_y - self.dlog_det
    }

    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs()).abs()
    }

    pub fn defect_opposite_sign(&self) -> f64 {
        (self.lhs - self.rhs_opposite_sign()).abs()
    }
}

pub fn y_trace_identity(sys: &ReflectionSystem, t: f64, h: f64) -> ReflectionResult<TraceIdentity> {
    let ops = sys.operators()?;
    let y = y_direct(sys, t)?;
    let y_inv = inverse(&y).map_err(|_| ReflectionError::SingularY { t })?;
    let dlog_det = try_central_diff(|s| log_abs_det_y(sys, s), t, h)?;
    Ok(TraceIdentity {
        lhs: (&y_inv * &ops.e).trace(),
        trace_y: y.trace(),
        dlog_det,
    })
}
