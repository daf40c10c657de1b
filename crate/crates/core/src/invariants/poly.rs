use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients below this magnitude are discarded after every operation.
pub const DROP_TOL: f64 = 1e-14;

/// Real polynomial in `var_count` variables truncated to total degree
/// `total_cap` and, per variable, to degree `caps[i] <= total_cap`.
///
/// Truncation is compatible with multiplication, so arithmetic on truncated
/// values gives the truncation of the exact result.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMultiPoly {
    caps: Vec<u32>,
    total_cap: u32,
    coeffs: BTreeMap<Vec<u32>, f64>,
}

impl TruncatedMultiPoly {
    pub fn zero(var_count: usize, total_cap: u32) -> Self {
        Self::zero_with_caps(vec![total_cap; var_count], total_cap)
    }

    pub fn zero_with_caps(caps: Vec<u32>, total_cap: u32) -> Self {
        let caps = caps.into_iter().map(|c| c.min(total_cap)).collect();
        Self {
            caps,
            total_cap,
            coeffs: BTreeMap::new(),
        }
    }

    /// Zero polynomial with the same variables and caps.
    pub fn zero_like(&self) -> Self {
        Self {
            caps: self.caps.clone(),
            total_cap: self.total_cap,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: f64) -> Self {
        self.monomial_like(&vec![0; self.var_count()], c)
    }

    /// `c * a_i`, or zero if `a_i` is truncated away.
    pub fn variable_like(&self, i: usize, c: f64) -> Self {
        let mut exps = vec![0; self.var_count()];
        exps[i] = 1;
        self.monomial_like(&exps, c)
    }

    pub fn monomial_like(&self, exps: &[u32], c: f64) -> Self {
        let mut p = self.zero_like();
        p.insert(exps.to_vec(), c);
        p
    }

    pub fn var_count(&self) -> usize {
        self.caps.len()
    }

    pub fn total_cap(&self) -> u32 {
        self.total_cap
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Whether a monomial survives truncation.
    pub fn admits(&self, exps: &[u32]) -> bool {
        exps.len() == self.caps.len()
            && exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
            && exps.iter().sum::<u32>() <= self.total_cap
    }

    pub fn coeff(&self, exps: &[u32]) -> f64 {
        self.coeffs.get(exps).copied().unwrap_or(0.0)
    }

    /// Non-zero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = self.zero_like();
        for (k, v) in &self.coeffs {
            p.insert(k.clone(), v * s);
        }
        p
    }

    fn insert(&mut self, exps: Vec<u32>, c: f64) {
        if c.abs() >= DROP_TOL && self.admits(&exps) {
            self.coeffs.insert(exps, c);
        }
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: f64) {
        if !self.admits(&exps) {
            return;
        }
        *self.coeffs.entry(exps).or_insert(0.0) += c;
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, v| v.abs() >= DROP_TOL);
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.caps == other.caps && self.total_cap == other.total_cap,
            "truncated polynomials with different caps"
        );
    }
}

impl Add for &TruncatedMultiPoly {
    type Output = TruncatedMultiPoly;

    fn add(self, rhs: &TruncatedMultiPoly) -> TruncatedMultiPoly {
        self.check_compatible(rhs);
        let mut p = self.clone();
        for (k, v) in &rhs.coeffs {
            p.accumulate(k.clone(), *v);
        }
        p.prune();
        p
    }
}

impl Neg for &TruncatedMultiPoly {
    type Output = TruncatedMultiPoly;

    fn neg(self) -> TruncatedMultiPoly {
        self.scale(-1.0)
    }
}

impl Sub for &TruncatedMultiPoly {
    type Output = TruncatedMultiPoly;

    fn sub(self, rhs: &TruncatedMultiPoly) -> TruncatedMultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &TruncatedMultiPoly {
    type Output = TruncatedMultiPoly;

    fn mul(self, rhs: &TruncatedMultiPoly) -> TruncatedMultiPoly {
        self.check_compatible(rhs);
        let mut p = self.zero_like();
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &rhs.coeffs {
                let exps: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                p.accumulate(exps, va * vb);
            }
        }
        p.prune();
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_product() {
        let z = TruncatedMultiPoly::zero(2, 2);
        let one_plus_a = &z.constant_like(1.0) + &z.variable_like(0, 1.0);
        let one_plus_b = &z.constant_like(1.0) + &z.variable_like(1, 1.0);
        let p = &(&one_plus_a * &one_plus_a) * &one_plus_b;
        // (1 + a)^2 (1 + b) truncated to total degree 2
        assert_eq!(p.coeff(&[0, 0]), 1.0);
        assert_eq!(p.coeff(&[1, 0]), 2.0);
        assert_eq!(p.coeff(&[0, 1]), 1.0);
        assert_eq!(p.coeff(&[2, 0]), 1.0);
        assert_eq!(p.coeff(&[1, 1]), 2.0);
        assert_eq!(p.coeff(&[2, 1]), 0.0);
        assert!(p.terms().all(|(e, _)| e.iter().sum::<u32>() <= 2));
    }

    #[test]
    fn per_variable_caps() {
        let z = TruncatedMultiPoly::zero_with_caps(vec![1, 3], 3);
        let a = z.variable_like(0, 1.0);
        assert!((&a * &a).is_zero());
        let b = z.variable_like(1, 2.0);
        assert_eq!((&(&b * &b) * &b).coeff(&[0, 3]), 8.0);
        assert!(!z.admits(&[2, 0]));
        assert!(!z.admits(&[1, 3]));
    }

    #[test]
    fn tiny_terms_dropped() {
        let z = TruncatedMultiPoly::zero(1, 2);
        let p = &z.variable_like(0, 1.0) - &z.variable_like(0, 1.0 - 1e-16);
        assert!(p.is_zero());
        assert!(z.constant_like(1e-15).is_zero());
    }
}
