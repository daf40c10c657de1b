//! Finite-difference referees for derivative identities.

use super::matrix::Matrix;
use super::scalar::Scalar;

/// Values that can be combined linearly by a difference stencil.
pub trait Linear: Sized {
    /// `sum_i w_i v_i`.
    fn combine(terms: &[(f64, &Self)]) -> Self;
}

impl Linear for f64 {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        terms.iter().map(|(w, v)| w * **v).sum()
    }
}

impl Linear for Vec<f64> {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let len = terms.first().map_or(0, |(_, v)| v.len());
        let mut out = vec![0.0; len];
        for (w, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += w * x;
            }
        }
        out
    }
}

impl<T: Scalar> Linear for Matrix<T> {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let (_, first) = terms[0];
        let mut out = Matrix::zeros(first.rows(), first.cols());
        for (w, v) in terms {
            out = &out + &v.scale_re(*w);
        }
        out
    }
}

/// `(f(t+h) - f(t-h)) / 2h`.
pub fn central_diff<V: Linear>(f: impl Fn(f64) -> V, t: f64, h: f64) -> V {
    let fp = f(t + h);
    let fm = f(t - h);
    V::combine(&[(0.5 / h, &fp), (-0.5 / h, &fm)])
}

/// `(f(t+h) - 2 f(t) + f(t-h)) / h^2`.
pub fn second_diff<V: Linear>(f: impl Fn(f64) -> V, t: f64, h: f64) -> V {
    let fp = f(t + h);
    let f0 = f(t);
    let fm = f(t - h);
    let w = 1.0 / (h * h);
    V::combine(&[(w, &fp), (-2.0 * w, &f0), (w, &fm)])
}

/// Fourth-order five-point central second difference
/// `(-f(t+2h) + 16 f(t+h) - 30 f(t) + 16 f(t-h) - f(t-2h)) / 12 h^2`.
pub fn second_diff5<V: Linear>(f: impl Fn(f64) -> V, t: f64, h: f64) -> V {
    let w = 1.0 / (12.0 * h * h);
    let vals: Vec<V> = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|k| f(t + k * h))
        .collect();
    V::combine(&[
        (-w, &vals[0]),
        (16.0 * w, &vals[1]),
        (-30.0 * w, &vals[2]),
        (16.0 * w, &vals[3]),
        (-w, &vals[4]),
    ])
}

/// Fallible [`central_diff`].
pub fn try_central_diff<V: Linear, E>(
    f: impl Fn(f64) -> Result<V, E>,
    t: f64,
    h: f64,
) -> Result<V, E> {
    let fp = f(t + h)?;
    let fm = f(t - h)?;
    Ok(V::combine(&[(0.5 / h, &fp), (-0.5 / h, &fm)]))
}

/// Fallible [`second_diff`].
pub fn try_second_diff<V: Linear, E>(
    f: impl Fn(f64) -> Result<V, E>,
    t: f64,
    h: f64,
) -> Result<V, E> {
    let fp = f(t + h)?;
    let f0 = f(t)?;
    let fm = f(t - h)?;
    let w = 1.0 / (h * h);
    Ok(V::combine(&[(w, &fp), (-2.0 * w, &f0), (w, &fm)]))
}

/// Fallible [`second_diff5`].
pub fn try_second_diff5<V: Linear, E>(
    f: impl Fn(f64) -> Result<V, E>,
    t: f64,
    h: f64,
) -> Result<V, E> {
    let w = 1.0 / (12.0 * h * h);
    let mut vals = Vec::with_capacity(5);
    for k in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        vals.push(f(t + k * h)?);
    }
    Ok(V::combine(&[
        (-w, &vals[0]),
        (16.0 * w, &vals[1]),
        (-30.0 * w, &vals[2]),
        (16.0 * w, &vals[3]),
        (-w, &vals[4]),
    ]))
}

/// Fallible central third difference
/// `(f(t+2h) - 2 f(t+h) + 2 f(t-h) - f(t-2h)) / 2 h^3`.
pub fn try_third_diff<V: Linear, E>(
    f: impl Fn(f64) -> Result<V, E>,
    t: f64,
    h: f64,
) -> Result<V, E> {
    let w = 0.5 / (h * h * h);
    let mut vals = Vec::with_capacity(4);
    for k in [-2.0, -1.0, 1.0, 2.0] {
        vals.push(f(t + k * h)?);
    }
    Ok(V::combine(&[
        (-w, &vals[0]),
        (2.0 * w, &vals[1]),
        (-2.0 * w, &vals[2]),
        (w, &vals[3]),
    ]))
}

/// Truncation error estimate `h^2 |f'''| / 6` of [`central_diff`], given a
/// third derivative estimate.
pub fn central_diff_truncation(third: f64, h: f64) -> f64 {
    h * h * third.abs() / 6.0
}
