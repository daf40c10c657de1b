use crate::numcore::{determinant, inverse, RMatrix};

use super::engine::z_value;
use super::{binomial, InvariantError, InvariantResult};

/// `Z_{l,ms}(a, bs)` and `det(a) Z_{n-l-|ms|,ms}(a^-1, a^-1 b_1, ..)`.
pub fn duality_pair(
    l: i64,
    ms: &[i64],
    a: &RMatrix,
    bs: &[RMatrix],
) -> InvariantResult<(f64, f64)> {
    let n = a.square_dim()? as i64;
    let a_inv = inverse(a).map_err(|_| InvariantError::SingularMatrix)?;
    let mut lhs_ms = vec![l];
    lhs_ms.extend_from_slice(ms);
    let mut lhs_xs = vec![a.clone()];
    lhs_xs.extend_from_slice(bs);
    let lhs = z_value(&lhs_ms, &lhs_xs)?;

    let mut rhs_ms = vec![n - l - ms.iter().sum::<i64>()];
    rhs_ms.extend_from_slice(ms);
    let mut rhs_xs = vec![a_inv.clone()];
    for b in bs {
        rhs_xs.push(a_inv.try_mul(b)?);
    }
    let rhs = determinant(a)? * z_value(&rhs_ms, &rhs_xs)?;
    Ok((lhs, rhs))
}

/// `Z_{n-|ms|,ms}(x, x y_1, ..)` and `det(x) Z_ms(ys)`.
pub fn det_factorization(ms: &[i64], x: &RMatrix, ys: &[RMatrix]) -> InvariantResult<(f64, f64)> {
    let n = x.square_dim()? as i64;
    let mut lhs_ms = vec![n - ms.iter().sum::<i64>()];
    lhs_ms.extend_from_slice(ms);
    let mut lhs_xs = vec![x.clone()];
    for y in ys {
        lhs_xs.push(x.try_mul(y)?);
    }
    let lhs = z_value(&lhs_ms, &lhs_xs)?;
    let rhs = determinant(x)? * z_value(ms, ys)?;
    Ok((lhs, rhs))
}

/// `Z_{a,b}(w, w)` and `C(a+b, a) Z_{a+b}(w)`.
pub fn collapse_repeated(a: u32, b: u32, w: &RMatrix) -> InvariantResult<(f64, f64)> {
    let lhs = z_value(&[a as i64, b as i64], &[w.clone(), w.clone()])?;
    let coeff = binomial((a + b) as u64, a as u64) as f64;
    let rhs = coeff * z_value(&[(a + b) as i64], std::slice::from_ref(w))?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonExpansion {
    /// `Z_{l,ms}(a1 + eps a2, bs) - Z_{l,ms}(a1, bs)`.
    pub exact_delta: f64,
    /// `eps Z_{l-1,1,ms}(a1, a2, bs)`.
    pub predicted_delta: f64,
    pub eps: f64,
}

impl EpsilonExpansion {
    pub fn error(&self) -> f64 {
        (self.exact_delta - self.predicted_delta).abs()
    }
}

/// First-order change of `Z_{l,ms}` when the first argument is perturbed.
pub fn epsilon_first_order(
    l: i64,
    ms: &[i64],
    a1: &RMatrix,
    a2: &RMatrix,
    bs: &[RMatrix],
    eps: f64,
) -> InvariantResult<EpsilonExpansion> {
    let with = |first: RMatrix, lead: &[i64], extra: Option<&RMatrix>| {
        let mut idx = lead.to_vec();
        idx.extend_from_slice(ms);
        let mut xs = vec![first];
        xs.extend(extra.cloned());
        xs.extend_from_slice(bs);
        z_value(&idx, &xs)
    };
    let perturbed = a1.try_add(&a2.scale(eps))?;
    let exact_delta = with(perturbed, &[l], None)? - with(a1.clone(), &[l], None)?;
    let predicted_delta = eps * with(a1.clone(), &[l - 1, 1], Some(a2))?;
    Ok(EpsilonExpansion {
        exact_delta,
        predicted_delta,
        eps,
    })
}

/// Ratio of first-order errors at `eps = 1e-3` and `eps = 5e-4`; close to 4
/// when the remainder is quadratic. `None` when the error at `1e-3` is at
/// roundoff level (the invariant is affine in its first argument, `l <= 1`).
pub fn richardson_ratio(
    l: i64,
    ms: &[i64],
    a1: &RMatrix,
    a2: &RMatrix,
    bs: &[RMatrix],
) -> InvariantResult<Option<f64>> {
    let coarse = epsilon_first_order(l, ms, a1, a2, bs, 1e-3)?;
    let fine = epsilon_first_order(l, ms, a1, a2, bs, 5e-4)?;
    let floor = 1e-12 * (1.0 + coarse.exact_delta.abs() / coarse.eps);
    if coarse.error() <= floor {
        return Ok(None);
    }
    Ok(Some(coarse.error() / fine.error()))
}
