use std::collections::BTreeMap;
use std::fmt;

use crate::numcore::{determinant, inverse, PolyPath};

use super::engine::z_value;
use super::{InvariantError, InvariantResult, MultiIndex};

/// `Z^{(m0,m1,..)}(X) = Z_{m0,m1,..}(X, X', X'', ..)`, stored without
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DerivSignature(Vec<u32>);

impl DerivSignature {
    pub fn new(mut indices: Vec<u32>) -> Self {
        while indices.last() == Some(&0) {
            indices.pop();
        }
        Self(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Highest derivative of `X` appearing, or `None` for the empty signature.
    pub fn max_derivative(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn to_multi_index(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|&m| m as i64).collect())
    }
}

impl fmt::Display for DerivSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "Z^({})", parts.join(","))
    }
}

/// First derivative: `sum_{i>=1} (m_i + 1) Z^{(.., m_{i-1} - 1, m_i + 1, ..)}`,
/// dropping terms whose decremented index would be negative.
pub fn derivative_expand(sig: &DerivSignature) -> Vec<(u64, DerivSignature)> {
    let m = &sig.0;
    let mut out = Vec::new();
    for i in 1..=m.len() {
        if m[i - 1] == 0 {
            continue;
        }
        let mut next = m.clone();
        if i == next.len() {
            next.push(0);
        }
        let coeff = next[i] as u64 + 1;
        next[i - 1] -= 1;
        next[i] += 1;
        out.push((coeff, DerivSignature::new(next)));
    }
    out
}

/// `k`-th derivative with equal signatures merged, in signature order.
pub fn derivative_expand_n(sig: &DerivSignature, k: usize) -> Vec<(u64, DerivSignature)> {
    let mut current = BTreeMap::from([(sig.clone(), 1u64)]);
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for (s, c) in &current {
            for (d, t) in derivative_expand(s) {
                *next.entry(t).or_insert(0) += c * d;
            }
        }
        current = next;
    }
    current.into_iter().map(|(s, c)| (c, s)).collect()
}

/// Value of the signature on `X(t)` given by a polynomial path.
pub fn signature_value(sig: &DerivSignature, path: &PolyPath, t: f64) -> InvariantResult<f64> {
    let Some(top) = sig.max_derivative() else {
        return Ok(1.0);
    };
    let jet = path.jet(top, t);
    z_value(&sig.to_multi_index(), &jet)
}

/// `|Z_{n-1,1}(X, X') - det(X) Tr(X^-1 X')|` at `t`.
pub fn liouville_residual(path: &PolyPath, t: f64) -> InvariantResult<f64> {
    let n = path.dim() as i64;
    let jet = path.jet(1, t);
    let via_z = z_value(&[n - 1, 1], &jet)?;
    let x_inv = inverse(&jet[0]).map_err(|_| InvariantError::SingularMatrix)?;
    let via_trace = determinant(&jet[0])? * (&x_inv * &jet[1]).trace();
    Ok((via_z - via_trace).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{central_diff, RMatrix};
    use crate::random::{seeded, uniform_matrix};

    fn sig(v: &[u32]) -> DerivSignature {
        DerivSignature::new(v.to_vec())
    }

    #[test]
    fn low_order_derivative_formulas() {
        let m = 5;
        assert_eq!(derivative_expand(&sig(&[m])), vec![(1, sig(&[m - 1, 1]))]);
        assert_eq!(
            derivative_expand_n(&sig(&[m]), 2),
            vec![(2, sig(&[m - 2, 2])), (1, sig(&[m - 1, 0, 1]))]
        );
        assert_eq!(
            derivative_expand_n(&sig(&[m]), 3),
            vec![
                (6, sig(&[m - 3, 3])),
                (3, sig(&[m - 2, 1, 1])),
                (1, sig(&[m - 1, 0, 0, 1]))
            ]
        );
    }

    #[test]
    fn expansion_preserves_order_and_drops_negatives() {
        for s in [sig(&[0, 2]), sig(&[1, 0, 3]), sig(&[2, 1, 1])] {
            for (_, t) in derivative_expand_n(&s, 3) {
                assert_eq!(t.order(), s.order());
            }
        }
        assert_eq!(derivative_expand(&sig(&[0, 2])), vec![(1, sig(&[0, 1, 1]))]);
        assert!(derivative_expand(&sig(&[])).is_empty());
        assert_eq!(sig(&[1, 0, 0]), sig(&[1]));
    }

    #[test]
    fn values_on_paths() {
        let mut rng = seeded(61);
        let coeffs: Vec<RMatrix> = (0..3).map(|_| uniform_matrix(&mut rng, 3, 3)).collect();
        let path = PolyPath::new(coeffs).unwrap();
        let t = 0.4;
        let det = determinant(&path.eval(t)).unwrap();
        assert!((signature_value(&sig(&[3]), &path, t).unwrap() - det).abs() < 1e-12);

        let constant = PolyPath::constant(path.eval(t)).unwrap();
        assert_eq!(signature_value(&sig(&[2, 1]), &constant, t).unwrap(), 0.0);
        assert_eq!(
            signature_value(&sig(&[1, 0, 1]), &constant, t).unwrap(),
            0.0
        );

        for s in [sig(&[3]), sig(&[2, 1]), sig(&[1, 1, 1]), sig(&[0, 2])] {
            let fd = central_diff(|u| signature_value(&s, &path, u).unwrap(), t, 1e-4);
            let expanded: f64 = derivative_expand(&s)
                .iter()
                .map(|(c, d)| *c as f64 * signature_value(d, &path, t).unwrap())
                .sum();
            assert!((fd - expanded).abs() < 1e-6, "{s}: {fd} vs {expanded}");
        }
    }

    #[test]
    fn liouville_examples() {
        // truncated exponential series path e^t I
        let n = 3;
        let coeffs: Vec<RMatrix> = (0..12)
            .scan(1.0, |fact, k| {
                if k > 0 {
                    *fact *= k as f64;
                }
                Some(RMatrix::identity(n).scale(1.0 / *fact))
            })
            .collect();
        let path = PolyPath::new(coeffs).unwrap();
        let jet = path.jet(1, 0.3);
        let det = determinant(&jet[0]).unwrap();
        let ddet = z_value(&[2, 1], &jet).unwrap();
        assert!((ddet - 3.0 * det).abs() < 1e-9);
        assert!(liouville_residual(&path, 0.3).unwrap() < 1e-10);

        let mut rng = seeded(62);
        let constant = PolyPath::constant(uniform_matrix(&mut rng, 3, 3)).unwrap();
        assert!(liouville_residual(&constant, 0.0).unwrap() < 1e-15);
        let path = PolyPath::new((0..3).map(|_| uniform_matrix(&mut rng, 3, 3)).collect()).unwrap();
        assert!(liouville_residual(&path, 0.7).unwrap() < 1e-8);

        let singular = PolyPath::constant(RMatrix::zeros(2, 2)).unwrap();
        assert_eq!(
            liouville_residual(&singular, 0.0),
            Err(InvariantError::SingularMatrix)
        );
    }
}
