use std::collections::BTreeMap;

use super::symbols::{ArgSymbol, CanonicalSignature, ConstantFactor, Expansion, RawSignature};

/// `coeff * factor * sig`; a zero `coeff` stands for a vanishing term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTerm {
    pub coeff: i64,
    pub factor: ConstantFactor,
    pub sig: CanonicalSignature,
}

/// One time derivative: each slot in turn moves one unit of index to the
/// symbol of its derivative, weighted by the target's new index.
pub fn differentiate_signature(sig: &CanonicalSignature) -> Vec<(i64, RawSignature)> {
    let mut out = Vec::with_capacity(sig.slots.len());
    for &source in sig.slots.keys() {
        let mut slots = sig.slots.clone();
        let left = slots.get_mut(&source).expect("slot present");
        *left -= 1;
        if *left == 0 {
            slots.remove(&source);
        }
        let target = slots.entry(source.differentiate()).or_insert(0);
        *target += 1;
        let coeff = *target as i64;
        out.push((coeff, RawSignature::new(sig.n, slots.into_iter().collect())));
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Normal form of `coeff * raw`:
///
/// 1. drop zero-index slots;
/// 2. merge repeated symbols, `Z_{a,b}(W, W) = C(a+b, a) Z_{a+b}(W)`;
/// 3. (symbols already encode `X'' = X E`);
/// 4. when every slot has the same parity `p` and the order is `n`, factor
///    `Z_{a, m..}(W E^{q0}, W E^{q..}) = det(W) det(E)^{q0} Z_{m..}(E^{q.. - q0})`
///    with `W = X` or `X'` and `q0` the smallest power.
///
/// Orders above `n` vanish and come back with `coeff = 0`.
pub fn canonicalize(coeff: i64, raw: &RawSignature) -> CanonicalTerm {
    let n = raw.n;
    let mut coeff = coeff;
    let mut slots: BTreeMap<ArgSymbol, u32> = BTreeMap::new();
    for &(sym, m) in &raw.slots {
        if m == 0 {
            continue;
        }
        let entry = slots.entry(sym).or_insert(0);
        coeff *= binomial(*entry + m, m);
        *entry += m;
    }
    let sig = CanonicalSignature { n, slots };
    let order = sig.order() as usize;
    if order > n {
        return CanonicalTerm {
            coeff: 0,
            factor: ConstantFactor::one(),
            sig,
        };
    }

    let mut parities = sig.slots.keys().map(|s| s.parity);
    let single_parity = parities.next().filter(|&p| parities.all(|q| q == p));
    match single_parity {
        Some(p) if order == n => {
            let q0 = sig.slots.keys().map(|s| s.epower).min().expect("non-empty");
            let others = sig
                .slots
                .iter()
                .filter(|(s, _)| s.epower != q0)
                .map(|(s, &m)| (s.epower - q0, m))
                .collect();
            CanonicalTerm {
                coeff,
                factor: ConstantFactor::from_parts(q0, vec![others]),
                sig: CanonicalSignature::base(n, p),
            }
        }
        _ => CanonicalTerm {
            coeff,
            factor: ConstantFactor::one(),
            sig,
        },
    }
}

fn accumulate(out: &mut Expansion, coeff: i64, factor: ConstantFactor, sig: CanonicalSignature) {
    if coeff == 0 {
        return;
    }
    let poly = out.entry(sig.clone()).or_default();
    poly.add_term(coeff, factor);
    if poly.is_zero() {
        out.remove(&sig);
    }
}

/// Canonical first derivative of `sig`.
pub fn first_derivative(sig: &CanonicalSignature) -> Expansion {
    let mut out = Expansion::new();
    for (c, raw) in differentiate_signature(sig) {
        let term = canonicalize(c, &raw);
        accumulate(&mut out, term.coeff, term.factor, term.sig);
    }
    out
}

/// Canonical second derivative of `sig`.
pub fn second_derivative(sig: &CanonicalSignature) -> Expansion {
    let mut out = Expansion::new();
    for (inner, poly) in first_derivative(sig) {
        for (f1, c1) in &poly.0 {
            for (c2, raw) in differentiate_signature(&inner) {
                let term = canonicalize(c2, &raw);
                accumulate(&mut out, c1 * term.coeff, f1.mul(&term.factor), term.sig);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::DerivSignature;

    fn sig(n: usize, slots: &[((u8, u32), u32)]) -> CanonicalSignature {
        CanonicalSignature::new(
            n,
            slots.iter().map(|&((p, q), m)| (ArgSymbol::new(p, q), m)),
        )
    }

    fn canonical(raw: Vec<(i64, RawSignature)>) -> Vec<(i64, CanonicalSignature)> {
        raw.into_iter()
            .map(|(c, r)| (c, CanonicalSignature::new(r.n, r.slots)))
            .collect()
    }

    #[test]
    fn differentiation_examples() {
        let n = 4;
        assert_eq!(
            canonical(differentiate_signature(&CanonicalSignature::base(n, 0))),
            vec![(1, sig(n, &[((0, 0), 3), ((1, 0), 1)]))]
        );
        assert_eq!(
            canonical(differentiate_signature(&CanonicalSignature::base(2, 1))),
            vec![(1, sig(2, &[((1, 0), 1), ((0, 1), 1)]))]
        );
        assert_eq!(
            canonical(differentiate_signature(&sig(
                2,
                &[((0, 0), 1), ((1, 0), 1)]
            ))),
            vec![
                (2, sig(2, &[((1, 0), 2)])),
                (1, sig(2, &[((0, 0), 1), ((0, 1), 1)]))
            ]
        );
    }

    #[test]
    fn canonicalization_examples() {
        for n in 2..=5 {
            // Z^{(n-1,0,1)} = det(X) tr(E)
            let raw = RawSignature::from_deriv(n, &DerivSignature::new(vec![n as u32 - 1, 0, 1]));
            let term = canonicalize(1, &raw);
            assert_eq!(term.sig, CanonicalSignature::base(n, 0));
            assert_eq!(term.factor, ConstantFactor::trace_e());
        }
        let raw = RawSignature::from_deriv(2, &DerivSignature::new(vec![0, 2]));
        let term = canonicalize(1, &raw);
        assert_eq!(
            (term.coeff, term.sig.clone()),
            (1, CanonicalSignature::base(2, 1))
        );
        assert!(term.factor.is_one());

        let raw = RawSignature::new(2, vec![(ArgSymbol::DX, 1), (ArgSymbol::new(1, 1), 1)]);
        let term = canonicalize(1, &raw);
        assert_eq!(term.sig, CanonicalSignature::base(2, 1));
        assert_eq!(term.factor, ConstantFactor::trace_e());

        // merging Z_{1,1}(X', X') = 2 det(X') and zero-index removal
        let raw = RawSignature::new(
            2,
            vec![(ArgSymbol::DX, 1), (ArgSymbol::X, 0), (ArgSymbol::DX, 1)],
        );
        let term = canonicalize(3, &raw);
        assert_eq!((term.coeff, term.sig), (6, CanonicalSignature::base(2, 1)));

        let raw = RawSignature::new(2, vec![(ArgSymbol::X, 2), (ArgSymbol::DX, 1)]);
        assert_eq!(canonicalize(1, &raw).coeff, 0);

        // X E^2 with index 2, n = 2: det(X) det(E)^2
        let raw = RawSignature::new(2, vec![(ArgSymbol::new(0, 2), 2)]);
        let term = canonicalize(1, &raw);
        assert_eq!(term.factor, ConstantFactor::from_parts(2, vec![]));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let raws = [
            RawSignature::new(
                3,
                vec![
                    (ArgSymbol::X, 1),
                    (ArgSymbol::DX, 1),
                    (ArgSymbol::new(0, 2), 1),
                ],
            ),
            RawSignature::new(3, vec![(ArgSymbol::new(1, 1), 2), (ArgSymbol::DX, 1)]),
            RawSignature::new(3, vec![(ArgSymbol::X, 1), (ArgSymbol::DX, 1)]),
        ];
        for raw in raws {
            let once = canonicalize(1, &raw);
            let again = canonicalize(
                once.coeff,
                &RawSignature::new(3, once.sig.slots.clone().into_iter().collect()),
            );
            assert_eq!(again.sig, once.sig);
            assert_eq!(again.coeff, once.coeff);
            assert!(again.factor.is_one());
        }
    }

    #[test]
    fn second_derivatives_for_two_by_two() {
        let det_x = CanonicalSignature::base(2, 0);
        let det_dx = CanonicalSignature::base(2, 1);
        let d2 = second_derivative(&det_x);
        assert_eq!(d2.len(), 2);
        assert_eq!(d2[&det_x].to_string(), "tr(E)");
        assert_eq!(d2[&det_dx].to_string(), "2");
        let d2 = second_derivative(&det_dx);
        assert_eq!(d2[&det_x].to_string(), "2*det(E)");
        assert_eq!(d2[&det_dx].to_string(), "tr(E)");
    }

    #[test]
    fn order_is_preserved() {
        let s = sig(4, &[((0, 0), 2), ((1, 0), 1), ((0, 1), 1)]);
        for (_, raw) in differentiate_signature(&s) {
            assert_eq!(raw.slots.iter().map(|(_, m)| m).sum::<u32>(), 4);
        }
    }
}
