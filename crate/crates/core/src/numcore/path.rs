use super::error::{NumError, NumResult};
use super::matrix::RMatrix;

/// Matrix polynomial path `X(t) = sum_k t^k X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath {
    coeffs: Vec<RMatrix>,
}

impl PolyPath {
    pub fn new(coeffs: Vec<RMatrix>) -> NumResult<Self> {
        let first = coeffs.first().ok_or_else(|| {
            NumError::InvalidArgument("path needs at least one coefficient".into())
        })?;
        let n = first.square_dim()?;
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(NumError::DimensionMismatch(
                "path coefficients must be square of equal size".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(x: RMatrix) -> NumResult<Self> {
        Self::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RMatrix] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> RMatrix {
        let mut acc = self.coeffs[self.degree()].clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(t) + c;
        }
        acc
    }

    /// Term-wise derivative; the derivative of a constant is the zero path.
    pub fn derivative(&self) -> PolyPath {
        if self.coeffs.len() == 1 {
            let n = self.dim();
            return PolyPath {
                coeffs: vec![RMatrix::zeros(n, n)],
            };
        }
        PolyPath {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(k as f64))
                .collect(),
        }
    }

    /// `X^{(k)}(t)`.
    pub fn eval_derivative(&self, k: usize, t: f64) -> RMatrix {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(t)
    }

    /// `[X(t), X'(t), ..., X^{(k)}(t)]`.
    pub fn jet(&self, k: usize, t: f64) -> Vec<RMatrix> {
        let mut out = Vec::with_capacity(k + 1);
        let mut p = self.clone();
        for _ in 0..=k {
            out.push(p.eval(t));
            p = p.derivative();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_derivatives() {
        let i = RMatrix::identity(2);
        let a = RMatrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]]);
        let p = PolyPath::new(vec![i.clone(), a.clone(), i.clone()]).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.derivative().degree(), 1);
        let t = 0.5;
        let expected = &(&i + &a.scale(t)) + &i.scale(t * t);
        assert!(p.eval(t).max_abs_diff(&expected) < 1e-15);
        assert!(
            p.eval_derivative(1, t)
                .max_abs_diff(&(&a + &i.scale(2.0 * t)))
                < 1e-15
        );
        assert_eq!(p.eval_derivative(2, t), i.scale(2.0));
        assert_eq!(p.eval_derivative(3, t), RMatrix::zeros(2, 2));
    }
}
