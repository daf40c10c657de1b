//! Square-root-free hyperbolic series in a matrix argument.
//!
//! `C(t) = sum_k E^k t^(2k) / (2k)!` and `S(t) = sum_k E^k t^(2k+1) / (2k+1)!`,
//! i.e. `cosh(Wt)` and `W^-1 sinh(Wt)` for any `W` with `W^2 = E`.

use super::error::{NumError, NumResult};
use super::matrix::Matrix;
use super::scalar::Scalar;

/// Hard cap on the number of summed terms.
pub const MAX_TERMS: usize = 300;
/// A term smaller than this fraction of the running sum (max-abs norm) stops
/// the summation.
pub const STOP_RTOL: f64 = 1e-16;

fn sum_series<T: Scalar>(e: &Matrix<T>, t: f64, odd: bool) -> NumResult<Matrix<T>> {
    let n = e.square_dim()?;
    let t2 = t * t;
    let first = if odd { t } else { 1.0 };
    let mut term = Matrix::<T>::identity(n).scale_re(first);
    let mut acc = term.clone();
    let offset = if odd { 1.0 } else { 0.0 };
    for k in 1..MAX_TERMS {
        let kk = k as f64;
        // (2k - 1 + offset)(2k + offset)
        let denom = (2.0 * kk - 1.0 + offset) * (2.0 * kk + offset);
        term = (&term * e).scale_re(t2 / denom);
        acc = &acc + &term;
        if !acc.is_finite() {
            return Err(NumError::SeriesDiverged { terms: k + 1 });
        }
        if term.max_abs() <= STOP_RTOL * acc.max_abs() {
            return Ok(acc);
        }
    }
    Err(NumError::SeriesDiverged { terms: MAX_TERMS })
}

/// Even series `C(t)`.
pub fn even_series<T: Scalar>(e: &Matrix<T>, t: f64) -> NumResult<Matrix<T>> {
    sum_series(e, t, false)
}

/// Odd series `S(t)`.
pub fn odd_series<T: Scalar>(e: &Matrix<T>, t: f64) -> NumResult<Matrix<T>> {
    sum_series(e, t, true)
}

/// `exp(m t) = C(t) + m S(t)` with `E = m^2`.
pub fn expm_via_series<T: Scalar>(m: &Matrix<T>, t: f64) -> NumResult<Matrix<T>> {
    let e = m.try_mul(m)?;
    let c = even_series(&e, t)?;
    let s = odd_series(&e, t)?;
    Ok(&c + &(m * &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::RMatrix;

    #[test]
    fn zero_argument_truncates() {
        let e = RMatrix::zeros(3, 3);
        assert_eq!(even_series(&e, 0.7).unwrap(), RMatrix::identity(3));
        assert_eq!(
            odd_series(&e, 0.7).unwrap(),
            RMatrix::identity(3).scale(0.7)
        );
        assert_eq!(
            odd_series(&RMatrix::identity(2), 0.0).unwrap(),
            RMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn scalar_cosh_sinh() {
        let e = RMatrix::identity(1);
        let c = even_series(&e, 1.0).unwrap()[(0, 0)];
        let s = odd_series(&e, 1.0).unwrap()[(0, 0)];
        assert!((c - 1.0f64.cosh()).abs() < 1e-15);
        assert!((c - 1.5430806348).abs() < 1e-10);
        assert!((s - 1.0f64.sinh()).abs() < 1e-15);
        // E = -1 gives cos and sin
        let c = even_series(&RMatrix::from_rows(&[[-1.0]]), 2.0).unwrap()[(0, 0)];
        assert!((c - 2.0f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn huge_argument_diverges() {
        // overflows
        let e = RMatrix::identity(2).scale(1e6);
        assert!(matches!(
            even_series(&e, 1.0),
            Err(NumError::SeriesDiverged { .. })
        ));
        // finite but needs more than MAX_TERMS terms
        let e = RMatrix::identity(2).scale(2.5e5);
        assert!(matches!(
            odd_series(&e, 1.0),
            Err(NumError::SeriesDiverged { terms: MAX_TERMS })
        ));
    }
}
