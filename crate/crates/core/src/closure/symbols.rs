use std::collections::BTreeMap;
use std::fmt;

use crate::invariants::{z_value, DerivSignature, InvariantResult};
use crate::numcore::{determinant, RMatrix};

/// Argument `X E^q` (parity 0) or `X' E^q` (parity 1). Under `X'' = X E`
/// the `k`-th derivative of `X` is the symbol with `k = 2q + parity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgSymbol {
    pub parity: u8,
    pub epower: u32,
}

impl ArgSymbol {
    pub const X: ArgSymbol = ArgSymbol {
        parity: 0,
        epower: 0,
    };
    pub const DX: ArgSymbol = ArgSymbol {
        parity: 1,
        epower: 0,
    };

    pub fn new(parity: u8, epower: u32) -> Self {
        assert!(parity <= 1, "parity must be 0 or 1");
        Self { parity, epower }
    }

    /// Symbol of `X^{(k)}`.
    pub fn from_derivative(k: usize) -> Self {
        Self::new((k % 2) as u8, (k / 2) as u32)
    }

    pub fn derivative_order(self) -> usize {
        2 * self.epower as usize + self.parity as usize
    }

    /// `X E^q -> X' E^q`, `X' E^q -> X E^{q+1}`.
    pub fn differentiate(self) -> Self {
        match self.parity {
            0 => Self::new(1, self.epower),
            _ => Self::new(0, self.epower + 1),
        }
    }

    /// `X E^q` or `X' E^q` for concrete `X`, `X'`, `E`.
    pub fn evaluate(self, x: &RMatrix, dx: &RMatrix, e: &RMatrix) -> RMatrix {
        let base = if self.parity == 0 { x } else { dx };
        let mut m = base.clone();
        for _ in 0..self.epower {
            m = &m * e;
        }
        m
    }
}

impl fmt::Display for ArgSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.parity == 0 { "X" } else { "X'" })?;
        match self.epower {
            0 => Ok(()),
            1 => f.write_str("E"),
            q => write!(f, "E^{q}"),
        }
    }
}

/// Crossed invariant of `n x n` arguments with arguments listed by
/// position; symbols may repeat and indices may be zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSignature {
    pub n: usize,
    pub slots: Vec<(ArgSymbol, u32)>,
}

impl RawSignature {
    pub fn new(n: usize, slots: Vec<(ArgSymbol, u32)>) -> Self {
        Self { n, slots }
    }

    /// `Z^{(m0,m1,..)}(X)` with `X^{(k)}` replaced by its symbol.
    pub fn from_deriv(n: usize, sig: &DerivSignature) -> Self {
        let slots = sig
            .indices()
            .iter()
            .enumerate()
            .map(|(k, &m)| (ArgSymbol::from_derivative(k), m))
            .collect();
        Self { n, slots }
    }
}

/// Crossed invariant in normal form: distinct symbols, positive indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSignature {
    pub n: usize,
    pub slots: BTreeMap<ArgSymbol, u32>,
}

impl CanonicalSignature {
    pub fn new(n: usize, slots: impl IntoIterator<Item = (ArgSymbol, u32)>) -> Self {
        Self {
            n,
            slots: slots.into_iter().filter(|&(_, m)| m > 0).collect(),
        }
    }

    /// `det X` (`parity = 0`) or `det X'` (`parity = 1`).
    pub fn base(n: usize, parity: u8) -> Self {
        Self::new(n, [(ArgSymbol::new(parity, 0), n as u32)])
    }

    pub fn order(&self) -> u32 {
        self.slots.values().sum()
    }

    pub fn is_base(&self) -> bool {
        self.slots.len() == 1
            && self
                .slots
                .iter()
                .all(|(s, &m)| s.epower == 0 && m as usize == self.n)
    }

    /// Value for concrete `X`, `X'`, `E`.
    pub fn evaluate(&self, x: &RMatrix, dx: &RMatrix, e: &RMatrix) -> InvariantResult<f64> {
        let ms: Vec<i64> = self.slots.values().map(|&m| m as i64).collect();
        let args: Vec<RMatrix> = self.slots.keys().map(|s| s.evaluate(x, dx, e)).collect();
        z_value(&ms, &args)
    }

    /// Arguments and indices as `[("X", 1), ("X'E", 2)]`.
    pub fn index_map(&self) -> Vec<(String, u32)> {
        self.slots
            .iter()
            .map(|(s, &m)| (s.to_string(), m))
            .collect()
    }
}

impl fmt::Display for CanonicalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_base() {
            let s = self.slots.keys().next().expect("base has one slot");
            return write!(f, "det({s})");
        }
        let idx: Vec<String> = self.slots.values().map(|m| m.to_string()).collect();
        let args: Vec<String> = self.slots.keys().map(|s| s.to_string()).collect();
        write!(f, "Z_{{{}}}({})", idx.join(","), args.join(", "))
    }
}

/// `Z_{m1,..}(E^{q1}, ..)`, stored as sorted `(q, m)` pairs.
pub type EInvariant = Vec<(u32, u32)>;

/// Time-independent product `det(E)^k * prod Z(E-monomials)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ConstantFactor {
    pub det_power: u32,
    pub z: Vec<EInvariant>,
}

impl ConstantFactor {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn det_e() -> Self {
        Self {
            det_power: 1,
            z: Vec::new(),
        }
    }

    pub fn trace_e() -> Self {
        Self::from_parts(0, vec![vec![(1, 1)]])
    }

    pub fn from_parts(det_power: u32, z: Vec<EInvariant>) -> Self {
        let mut z: Vec<EInvariant> = z
            .into_iter()
            .filter(|f| !f.is_empty())
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        z.sort();
        Self { det_power, z }
    }

    pub fn is_one(&self) -> bool {
        self.det_power == 0 && self.z.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut z = self.z.clone();
        z.extend(other.z.iter().cloned());
        Self::from_parts(self.det_power + other.det_power, z)
    }

    pub fn evaluate(&self, e: &RMatrix) -> InvariantResult<f64> {
        let mut value = determinant(e)?.powi(self.det_power as i32);
        for f in &self.z {
            let ms: Vec<i64> = f.iter().map(|&(_, m)| m as i64).collect();
            let mut args = Vec::with_capacity(f.len());
            for &(q, _) in f {
                args.push(e.pow(q)?);
            }
            value *= z_value(&ms, &args)?;
        }
        Ok(value)
    }
}

fn e_power(q: u32) -> String {
    match q {
        0 => "I".into(),
        1 => "E".into(),
        q => format!("E^{q}"),
    }
}

impl fmt::Display for ConstantFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.det_power {
            0 => {}
            1 => parts.push("det(E)".to_string()),
            k => parts.push(format!("det(E)^{k}")),
        }
        for z in &self.z {
            if z.as_slice() == [(1, 1)] {
                parts.push("tr(E)".into());
                continue;
            }
            let idx: Vec<String> = z.iter().map(|(_, m)| m.to_string()).collect();
            let args: Vec<String> = z.iter().map(|&(q, _)| e_power(q)).collect();
            parts.push(format!("Z_{{{}}}({})", idx.join(","), args.join(", ")));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Integer combination of constant factors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstantPoly(pub BTreeMap<ConstantFactor, i64>);

impl ConstantPoly {
    pub fn add_term(&mut self, coeff: i64, factor: ConstantFactor) {
        let entry = self.0.entry(factor.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.0.remove(&factor);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self, e: &RMatrix) -> InvariantResult<f64> {
        let mut acc = 0.0;
        for (factor, &c) in &self.0 {
            acc += c as f64 * factor.evaluate(e)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for ConstantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (factor, &c)) in self.0.iter().enumerate() {
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag, factor.is_one()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => write!(f, "{factor}")?,
                _ => write!(f, "{mag}*{factor}")?,
            }
        }
        Ok(())
    }
}

/// Linear combination of canonical signatures with constant coefficients.
pub type Expansion = BTreeMap<CanonicalSignature, ConstantPoly>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_calculus() {
        let s = ArgSymbol::X;
        assert_eq!(s.differentiate(), ArgSymbol::DX);
        assert_eq!(ArgSymbol::DX.differentiate(), ArgSymbol::new(0, 1));
        for k in 0..7 {
            let sym = ArgSymbol::from_derivative(k);
            assert_eq!(sym.derivative_order(), k);
            assert_eq!(sym.differentiate(), ArgSymbol::from_derivative(k + 1));
        }
        assert_eq!(ArgSymbol::new(1, 2).to_string(), "X'E^2");
        assert!(ArgSymbol::new(0, 5) < ArgSymbol::new(1, 0));
    }

    #[test]
    fn display_forms() {
        let sig = CanonicalSignature::new(3, [(ArgSymbol::X, 1), (ArgSymbol::DX, 2)]);
        assert_eq!(sig.to_string(), "Z_{1,2}(X, X')");
        assert_eq!(CanonicalSignature::base(2, 1).to_string(), "det(X')");
        let mut p = ConstantPoly::default();
        p.add_term(2, ConstantFactor::det_e());
        p.add_term(-1, ConstantFactor::trace_e());
        p.add_term(3, ConstantFactor::one());
        assert_eq!(p.to_string(), "3 - tr(E) + 2*det(E)");
        p.add_term(-3, ConstantFactor::one());
        assert_eq!(p.0.len(), 2);
        let odd = ConstantFactor::from_parts(2, vec![vec![(2, 1), (1, 1)]]);
        assert_eq!(odd.to_string(), "det(E)^2*Z_{1,1}(E, E^2)");
    }

    #[test]
    fn constant_factor_values() {
        let e = RMatrix::from_rows(&[[2.0, 1.0], [0.0, 3.0]]);
        assert!((ConstantFactor::trace_e().evaluate(&e).unwrap() - 5.0).abs() < 1e-12);
        assert!((ConstantFactor::det_e().evaluate(&e).unwrap() - 6.0).abs() < 1e-12);
        let both = ConstantFactor::det_e().mul(&ConstantFactor::trace_e());
        assert!((both.evaluate(&e).unwrap() - 30.0).abs() < 1e-11);
    }
}
