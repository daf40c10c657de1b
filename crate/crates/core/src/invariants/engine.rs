use crate::numcore::{determinant, NumError, RMatrix};

use super::poly::TruncatedMultiPoly;
use super::{InvariantError, InvariantResult, MultiIndex};

/// Largest matrix size accepted by the interpolation route.
pub const MAX_INTERPOLATION_DIM: usize = 8;

/// Largest matrix size accepted by the cofactor route.
const MAX_COFACTOR_DIM: usize = 6;

/// Checks `ms`/`xs` and returns the common matrix size (0 for no matrices).
fn common_dim(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<usize> {
    if ms.len() != xs.len() {
        return Err(InvariantError::DimensionMismatch(format!(
            "{} indices for {} matrices",
            ms.len(),
            xs.len()
        )));
    }
    let Some(first) = xs.first() else {
        return Ok(0);
    };
    let n = first.square_dim()?;
    if xs.iter().any(|x| x.rows() != n || x.cols() != n) {
        return Err(InvariantError::DimensionMismatch(
            "all matrices must be square of equal size".into(),
        ));
    }
    Ok(n)
}

fn vanishes(ms: &[i64], n: usize) -> bool {
    ms.iter().any(|&m| m < 0) || ms.iter().sum::<i64>() > n as i64
}

/// `Z_ms(xs)`: zero for a negative index or order above `n`, otherwise the
/// interpolation route.
pub fn z_value(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<f64> {
    let n = common_dim(ms, xs)?;
    if vanishes(ms, n) {
        return Ok(0.0);
    }
    z_value_interpolated(ms, xs)
}

/// Symmetric integer nodes `0, 1, -1, 2, -2, ..` (`count` of them).
fn nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let mag = k.div_ceil(2) as f64;
            if k % 2 == 1 {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Coefficient of `x^power` in the polynomial interpolating `(xs, ys)`,
/// via Newton divided differences.
fn newton_coefficient(xs: &[f64], ys: &[f64], power: usize) -> f64 {
    let k = xs.len();
    if power >= k {
        return 0.0;
    }
    let mut dd = ys.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner on the Newton form, tracking monomial coefficients
    let mut poly = vec![dd[k - 1]];
    for j in (0..k - 1).rev() {
        let mut next = vec![0.0; poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * xs[j];
        }
        next[0] += dd[j];
        poly = next;
    }
    poly[power]
}

/// `Z_ms(xs)` by evaluating `det(I + sum b_i s X_i)` on the grid of
/// symmetric integer nodes `b_i` (`n + 1` per active variable), with
/// `s = 1 / (1 + max ||X_i||)`, and extracting the coefficient by nested
/// Newton interpolation, innermost variable first.
///
/// Only negative indices are short-circuited; orders above `n` are computed
/// and come out as roundoff-level values.
pub fn z_value_interpolated(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<f64> {
    let n = common_dim(ms, xs)?;
    if ms.iter().any(|&m| m < 0) {
        return Ok(0.0);
    }
    if n > MAX_INTERPOLATION_DIM {
        return Err(InvariantError::ConditioningWarning {
            n,
            max: MAX_INTERPOLATION_DIM,
        });
    }
    // variables with a zero index only need the slice a_i = 0
    let active: Vec<usize> = (0..ms.len()).filter(|&i| ms[i] > 0).collect();
    if active.iter().any(|&i| ms[i] as usize > n) {
        return Ok(0.0);
    }
    let scale = 1.0
        / (1.0
            + active
                .iter()
                .map(|&i| xs[i].frobenius())
                .fold(0.0, f64::max));
    let scaled: Vec<RMatrix> = active.iter().map(|&i| xs[i].scale(scale)).collect();
    let grid = nodes(n + 1);
    let per_axis = grid.len();
    let total = per_axis.pow(active.len() as u32);

    let mut values = Vec::with_capacity(total);
    let mut digits = vec![0usize; active.len()];
    for _ in 0..total {
        let mut m = RMatrix::identity(n);
        for (x, &d) in scaled.iter().zip(&digits) {
            if d != 0 {
                m = &m + &x.scale(grid[d]);
            }
        }
        values.push(determinant(&m)?);
        // odometer, last axis fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < per_axis {
                break;
            }
            *d = 0;
        }
    }

    for &var in active.iter().rev() {
        let power = ms[var] as usize;
        values = values
            .chunks(per_axis)
            .map(|ys| newton_coefficient(&grid, ys, power))
            .collect();
    }
    let order: i64 = ms.iter().sum();
    Ok(values[0] / scale.powi(order as i32))
}

type PolyMatrix = Vec<Vec<TruncatedMultiPoly>>;

/// `sum_i a_i X_i` (plus `I` when `with_identity`) with truncated entries.
fn poly_matrix(
    ms: &[i64],
    xs: &[RMatrix],
    n: usize,
    with_identity: bool,
) -> (PolyMatrix, TruncatedMultiPoly) {
    let caps = ms.iter().map(|&m| m as u32).collect();
    let zero = TruncatedMultiPoly::zero_with_caps(caps, n as u32);
    let mut out = vec![vec![zero.clone(); n]; n];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let mut p = if with_identity && r == c {
                zero.constant_like(1.0)
            } else {
                zero.clone()
            };
            for (i, x) in xs.iter().enumerate() {
                p = &p + &zero.variable_like(i, x[(r, c)]);
            }
            *entry = p;
        }
    }
    (out, zero)
}

fn poly_matmul(a: &PolyMatrix, b: &PolyMatrix, zero: &TruncatedMultiPoly) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (0..n).fold(zero.clone(), |acc, k| &acc + &(&a[r][k] * &b[k][c])))
                .collect()
        })
        .collect()
}

fn monomial(ms: &[i64]) -> Vec<u32> {
    ms.iter().map(|&m| m as u32).collect()
}

/// `Z_ms(xs)` as a coefficient of `exp(L)`, `L = Tr log(I + M)`
/// `= sum_k (-1)^{k+1} Tr(M^k) / k`, `M = sum_i a_i X_i`, both series cut at
/// order `n` over truncated polynomials.
pub fn z_via_tracelog(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<f64> {
    let n = common_dim(ms, xs)?;
    if ms.iter().any(|&m| m < 0) {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    let (m, zero) = poly_matrix(ms, xs, n, false);
    let trace = |p: &PolyMatrix| (0..n).fold(zero.clone(), |acc, i| &acc + &p[i][i]);

    let mut log = zero.clone();
    let mut power = m.clone();
    for k in 1..=n {
        if k > 1 {
            power = poly_matmul(&power, &m, &zero);
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log = &log + &trace(&power).scale(sign / k as f64);
    }

    let mut term = zero.constant_like(1.0);
    let mut exp = term.clone();
    for j in 1..=n {
        term = (&term * &log).scale(1.0 / j as f64);
        exp = &exp + &term;
    }
    Ok(exp.coeff(&monomial(ms)))
}

fn poly_det(m: &PolyMatrix, zero: &TruncatedMultiPoly) -> TruncatedMultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = zero.clone();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: PolyMatrix = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &poly_det(&minor, zero);
        acc = if j % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// `Z_ms(xs)` by cofactor expansion of `det(I + sum a_i X_i)` over
/// truncated polynomial entries (`n <= 6`).
pub fn z_via_cofactor(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<f64> {
    let n = common_dim(ms, xs)?;
    if ms.iter().any(|&m| m < 0) {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    if n > MAX_COFACTOR_DIM {
        return Err(NumError::Unsupported(format!(
            "cofactor expansion limited to n <= {MAX_COFACTOR_DIM}"
        ))
        .into());
    }
    let (m, zero) = poly_matrix(ms, xs, n, true);
    Ok(poly_det(&m, &zero).coeff(&monomial(ms)))
}

fn power_trace(x: &RMatrix, k: u32) -> InvariantResult<f64> {
    Ok(x.pow(k)?.trace())
}

/// Trace formulas: `Z_1 = Tr X`, `Z_2 = (Tr(X)^2 - Tr(X^2)) / 2`,
/// `Z_3 = (Tr(X)^3 - 3 Tr(X^2) Tr(X) + 2 Tr(X^3)) / 6`,
/// `Z_{1,1}(X, Y) = Tr(X) Tr(Y) - Tr(XY)` and `Z_n = det X`.
pub fn closed_form(ms: &[i64], xs: &[RMatrix]) -> InvariantResult<f64> {
    let n = common_dim(ms, xs)?;
    let unsupported = || InvariantError::UnsupportedIndex(MultiIndex(ms.to_vec()));
    match ms {
        [m] if *m == n as i64 => Ok(determinant(&xs[0])?),
        [1] => Ok(xs[0].trace()),
        [2] => {
            let p1 = xs[0].trace();
            Ok(0.5 * (p1 * p1 - power_trace(&xs[0], 2)?))
        }
        [3] => {
            let p1 = xs[0].trace();
            let p2 = power_trace(&xs[0], 2)?;
            let p3 = power_trace(&xs[0], 3)?;
            Ok((p1.powi(3) - 3.0 * p2 * p1 + 2.0 * p3) / 6.0)
        }
        [1, 1] => Ok(xs[0].trace() * xs[1].trace() - (&xs[0] * &xs[1]).trace()),
        _ => Err(unsupported()),
    }
}

/// The cubic trace formula with coefficient 1 on `Tr(X^3)`,
/// `(Tr(X)^3 - 3 Tr(X^2) Tr(X) + Tr(X^3)) / 6`, a common slip.
/// It differs from `Z_3` by `Tr(X^3) / 6`.
pub fn z3_unit_cube_coefficient(x: &RMatrix) -> InvariantResult<f64> {
    let p1 = x.trace();
    let p2 = power_trace(x, 2)?;
    let p3 = power_trace(x, 3)?;
    Ok((p1.powi(3) - 3.0 * p2 * p1 + p3) / 6.0)
}
