use num_complex::Complex64;

use crate::numcore::{inverse, CMatrix, RMatrix};
use crate::random::{uniform_cmatrix, Rng};

use super::{ConjError, ConjResult};

/// `A0 + A1 C`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    pub a0: CMatrix,
    pub a1: CMatrix,
}

impl GradedElement {
    pub fn new(a0: CMatrix, a1: CMatrix) -> ConjResult<Self> {
        let n = a0.square_dim()?;
        if a1.rows() != n || a1.cols() != n {
            return Err(ConjError::DimensionMismatch(format!(
                "A1 is {}x{}, A0 is {n}x{n}",
                a1.rows(),
                a1.cols()
            )));
        }
        Ok(Self { a0, a1 })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a0: CMatrix::identity(n),
            a1: CMatrix::zeros(n, n),
        }
    }

    /// The conjugation operator `C` itself.
    pub fn conjugation(n: usize) -> Self {
        Self {
            a0: CMatrix::zeros(n, n),
            a1: CMatrix::identity(n),
        }
    }

    pub fn even(a0: CMatrix) -> Self {
        let n = a0.rows();
        Self {
            a0,
            a1: CMatrix::zeros(n, n),
        }
    }

    pub fn random(rng: &mut Rng, n: usize) -> Self {
        let a0 = uniform_cmatrix(rng, n, n);
        let a1 = uniform_cmatrix(rng, n, n);
        Self { a0, a1 }
    }

    pub fn dim(&self) -> usize {
        self.a0.rows()
    }

    /// Multiplies by a real scalar (both components).
    pub fn scale(&self, s: f64) -> Self {
        Self {
            a0: self.a0.scale_re(s),
            a1: self.a1.scale_re(s),
        }
    }

    pub fn add(&self, other: &Self) -> ConjResult<Self> {
        Ok(Self {
            a0: self.a0.try_add(&other.a0)?,
            a1: self.a1.try_add(&other.a1)?,
        })
    }

    pub fn sub(&self, other: &Self) -> ConjResult<Self> {
        Ok(Self {
            a0: self.a0.try_sub(&other.a0)?,
            a1: self.a1.try_sub(&other.a1)?,
        })
    }

    /// Largest entry modulus over both components.
    pub fn max_abs(&self) -> f64 {
        self.a0.max_abs().max(self.a1.max_abs())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a0
            .max_abs_diff(&other.a0)
            .max(self.a1.max_abs_diff(&other.a1))
    }

    /// `A0 z + A1 conj(z)`.
    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += self.a0[(i, j)] * z[j] + self.a1[(i, j)] * z[j].conj();
                }
                acc
            })
            .collect()
    }
}

/// `(A0 B0 + A1 conj(B1)) + (A0 B1 + A1 conj(B0)) C`.
pub fn gmul(a: &GradedElement, b: &GradedElement) -> ConjResult<GradedElement> {
    if a.dim() != b.dim() {
        return Err(ConjError::DimensionMismatch(format!(
            "cannot multiply elements of size {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let b0c = b.a0.conj();
    let b1c = b.a1.conj();
    Ok(GradedElement {
        a0: &(&a.a0 * &b.a0) + &(&a.a1 * &b1c),
        a1: &(&a.a0 * &b.a1) + &(&a.a1 * &b0c),
    })
}

/// `(A0 - A1 conj(A0^-1 A1))^-1`.
fn delta(a0: &CMatrix, a1: &CMatrix) -> ConjResult<CMatrix> {
    let a0_inv = inverse(a0).map_err(|_| ConjError::NotInvertible("A0 in Delta".into()))?;
    let inner = (&a0_inv * a1).conj();
    inverse(&(a0 - &(a1 * &inner)))
        .map_err(|_| ConjError::NotInvertible("A0 - A1 conj(A0^-1 A1)".into()))
}

fn ginv_delta(a: &GradedElement) -> ConjResult<GradedElement> {
    let n = a.dim();
    if a.a1.is_zero() {
        let inv = inverse(&a.a0).map_err(|_| ConjError::NotInvertible("A0".into()))?;
        return Ok(GradedElement::even(inv));
    }
    if a.a0.is_zero() {
        let inv = inverse(&a.a1.conj()).map_err(|_| ConjError::NotInvertible("conj(A1)".into()))?;
        return Ok(GradedElement {
            a0: CMatrix::zeros(n, n),
            a1: inv,
        });
    }
    Ok(GradedElement {
        a0: delta(&a.a0, &a.a1)?,
        a1: delta(&a.a1.conj(), &a.a0.conj())?,
    })
}

/// Inverse through `Delta(A0, A1) + Delta(conj A1, conj A0) C`, falling back
/// to inverting `rho(a)` when an intermediate of that route is singular.
pub fn ginv(a: &GradedElement) -> ConjResult<GradedElement> {
    match ginv_delta(a) {
        Ok(inv) => Ok(inv),
        Err(ConjError::NotInvertible(route)) => {
            let r_inv = inverse(&rho(a)).map_err(|_| {
                ConjError::NotInvertible(format!("{route} singular and rho(a) singular"))
            })?;
            Ok(from_rho(&r_inv))
        }
        Err(e) => Err(e),
    }
}

/// `a^k` by repeated multiplication; `a^0` is the identity.
pub fn gpow(a: &GradedElement, k: u32) -> GradedElement {
    let mut acc = GradedElement::identity(a.dim());
    for _ in 0..k {
        acc = gmul(&acc, a).expect("equal sizes");
    }
    acc
}

fn rho_matrix(a: &CMatrix) -> RMatrix {
    let n = a.rows();
    RMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = a[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// `rho(A0) + rho(A1) rho(C)` with `rho(A) = [[Re A, -Im A], [Im A, Re A]]`
/// and `rho(C) = diag(I, -I)`.
pub fn rho(a: &GradedElement) -> RMatrix {
    let n = a.dim();
    let r0 = rho_matrix(&a.a0);
    let mut r1 = rho_matrix(&a.a1);
    // right multiplication by diag(I, -I) negates the last n columns
    for i in 0..2 * n {
        for j in n..2 * n {
            r1[(i, j)] = -r1[(i, j)];
        }
    }
    &r0 + &r1
}

/// Inverse of [`rho`]: every real `2n x 2n` matrix is the image of exactly
/// one graded element.
pub fn from_rho(r: &RMatrix) -> GradedElement {
    let n = r.rows() / 2;
    let block = |bi: usize, bj: usize| RMatrix::from_fn(n, n, |i, j| r[(bi * n + i, bj * n + j)]);
    let (p, q, s, u) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
    let re0 = (&p + &u).scale(0.5);
    let re1 = (&p - &u).scale(0.5);
    let im0 = (&s - &q).scale(0.5);
    let im1 = (&s + &q).scale(0.5);
    GradedElement {
        a0: CMatrix::from_parts(&re0, &im0),
        a1: CMatrix::from_parts(&re1, &im1),
    }
}

/// `[Re z; Im z]`.
pub fn rho_vec(z: &[Complex64]) -> Vec<f64> {
    z.iter()
        .map(|c| c.re)
        .chain(z.iter().map(|c| c.im))
        .collect()
}

pub fn unrho_vec(w: &[f64]) -> Vec<Complex64> {
    let n = w.len() / 2;
    (0..n).map(|i| Complex64::new(w[i], w[n + i])).collect()
}

/// Upper estimate of the spectral radius of `rho(a)` from the growth of
/// `|rho(a)^k|_F^(1/k)`, `k = 2^12`, using normalised repeated squaring.
pub fn rho_spectral_radius(a: &GradedElement) -> f64 {
    let mut b = rho(a);
    let norm = b.frobenius();
    if norm == 0.0 {
        return 0.0;
    }
    b = b.scale(1.0 / norm);
    let mut log_scale = norm.ln();
    let mut power = 1.0;
    for _ in 0..12 {
        let sq = &b * &b;
        let nrm = sq.frobenius();
        if nrm == 0.0 {
            return 0.0;
        }
        log_scale = 2.0 * log_scale + nrm.ln();
        power *= 2.0;
        b = sq.scale(1.0 / nrm);
    }
    (log_scale / power).exp()
}

/// `|(I - t a)^-1 - sum_{k <= kmax} t^k a^k|` (largest entry modulus).
pub fn neumann_identity_check(a: &GradedElement, t: f64, kmax: u32) -> ConjResult<f64> {
    let radius = rho_spectral_radius(a);
    if radius * t.abs() >= 1.0 {
        return Err(ConjError::NotContractive { radius, t });
    }
    let n = a.dim();
    let lhs = ginv(&GradedElement::identity(n).sub(&a.scale(t))?)?;
    let step = a.scale(t);
    let mut term = GradedElement::identity(n);
    let mut sum = term.clone();
    for _ in 0..kmax {
        term = gmul(&term, &step)?;
        sum = sum.add(&term)?;
    }
    Ok(lhs.max_abs_diff(&sum))
}
