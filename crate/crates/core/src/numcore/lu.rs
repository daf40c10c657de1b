//! LU factorisation with partial pivoting and the routines built on it.

use super::error::{NumError, NumResult};
use super::matrix::Matrix;
use super::scalar::Scalar;

/// Relative pivot tolerance: a pivot below `PIVOT_RTOL * max|m_ij|` marks
/// the matrix as singular for inversion.
pub const PIVOT_RTOL: f64 = 1e-12;

struct Lu<T: Scalar> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
    sign_flips: usize,
    /// First column whose pivot was exactly zero, if any.
    zero_pivot: Option<usize>,
    min_pivot: (usize, f64),
}

impl<T: Scalar> Lu<T> {
    fn factor(m: &Matrix<T>) -> NumResult<Self> {
        let n = m.square_dim()?;
        let mut lu = m.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        let mut zero_pivot = None;
        let mut min_pivot = (0, f64::INFINITY);
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < min_pivot.1 {
                min_pivot = (k, best);
            }
            if best == 0.0 {
                zero_pivot.get_or_insert(k);
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign_flips += 1;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= factor * u;
                }
            }
        }
        Ok(Self {
            n,
            lu,
            perm,
            sign_flips,
            zero_pivot,
            min_pivot,
        })
    }

    fn det(&self) -> T {
        if self.zero_pivot.is_some() {
            return T::zero();
        }
        let mut d = T::one();
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        if self.sign_flips % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Solves for every column of the permuted identity.
    fn inverse(&self) -> Matrix<T> {
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        let mut col = vec![T::zero(); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = if self.perm[i] == j {
                    T::one()
                } else {
                    T::zero()
                };
            }
            for i in 0..n {
                let mut s = col[i];
                for k in 0..i {
                    s -= self.lu[i * n + k] * col[k];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in i + 1..n {
                    s -= self.lu[i * n + k] * col[k];
                }
                col[i] = s / self.lu[i * n + i];
            }
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Determinant via LU with partial pivoting. Returns exactly zero when a
/// column has no nonzero pivot candidate.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> NumResult<T> {
    Ok(Lu::factor(m)?.det())
}

/// Inverse via LU. Fails with `SingularMatrix` when a pivot falls below
/// `1e-12 * max|m_ij|`.
pub fn inverse<T: Scalar>(m: &Matrix<T>) -> NumResult<Matrix<T>> {
    let lu = Lu::factor(m)?;
    let tol = PIVOT_RTOL * m.max_abs();
    let (col, pivot) = lu.min_pivot;
    if lu.zero_pivot.is_some() || pivot <= tol {
        return Err(NumError::SingularMatrix { col, pivot, tol });
    }
    Ok(lu.inverse())
}

/// Solves `m x = b` for every column of `b`.
pub fn solve<T: Scalar>(m: &Matrix<T>, b: &Matrix<T>) -> NumResult<Matrix<T>> {
    Ok(&inverse(m)? * b)
}

fn minor<T: Scalar>(m: &Matrix<T>, skip_row: usize, skip_col: usize) -> Matrix<T> {
    let n = m.rows();
    Matrix::from_fn(n - 1, n - 1, |i, j| {
        let r = if i < skip_row { i } else { i + 1 };
        let c = if j < skip_col { j } else { j + 1 };
        m[(r, c)]
    })
}

fn adjugate_cofactor<T: Scalar>(m: &Matrix<T>) -> NumResult<Matrix<T>> {
    let n = m.rows();
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut adj = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = determinant(&minor(m, j, i))?;
            adj[(i, j)] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    Ok(adj)
}

/// Transpose of the cofactor matrix, so that `adj(m) * m = det(m) I`.
///
/// Cofactor expansion for `n <= 4`; `det(m) * inverse(m)` above that, with a
/// cofactor fallback for singular input up to `n = 6`.
pub fn adjugate<T: Scalar>(m: &Matrix<T>) -> NumResult<Matrix<T>> {
    let n = m.square_dim()?;
    if n <= 4 {
        return adjugate_cofactor(m);
    }
    match inverse(m) {
        Ok(inv) => Ok(inv.scale(determinant(m)?)),
        Err(NumError::SingularMatrix { .. }) if n <= 6 => adjugate_cofactor(m),
        Err(NumError::SingularMatrix { .. }) => Err(NumError::Unsupported(format!(
            "adjugate of a singular {n}x{n} matrix"
        ))),
        Err(e) => Err(e),
    }
}

/// Infinity-norm condition number `|m| |m^-1|`; infinite when singular.
pub fn condition_inf<T: Scalar>(m: &Matrix<T>) -> f64 {
    match inverse(m) {
        Ok(inv) => m.norm_inf() * inv.norm_inf(),
        Err(_) => f64::INFINITY,
    }
}
