use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::rewrite::{first_derivative, second_derivative};
use super::symbols::{ArgSymbol, CanonicalSignature, ConstantPoly, Expansion};

/// Default depth cap for [`explore`].
pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Outcome of repeatedly taking second derivatives starting from `det X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub n: usize,
    pub max_depth: usize,
    /// States in discovery order; `states[0]` is `det X`.
    pub states: Vec<CanonicalSignature>,
    /// Depth at which each state was discovered.
    pub state_depths: Vec<usize>,
    /// New states found at each depth (`[1, ..]`, depth 0 holds `det X`).
    pub new_per_depth: Vec<usize>,
    pub closed: bool,
    /// Second derivatives of the processed states in the state basis.
    pub second_derivatives: Vec<Expansion>,
    /// Signatures met as first derivatives of processed states.
    pub intermediates: BTreeSet<CanonicalSignature>,
}

impl ClosureReport {
    /// Cumulative state counts after each depth.
    pub fn state_counts(&self) -> Vec<usize> {
        self.new_per_depth
            .iter()
            .scan(0, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }

    /// `T` with `s_i'' = sum_j T_ij s_j`, when closed.
    pub fn transition(&self) -> Option<Vec<Vec<ConstantPoly>>> {
        if !self.closed {
            return None;
        }
        let index: BTreeMap<&CanonicalSignature, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let k = self.states.len();
        let mut t = vec![vec![ConstantPoly::default(); k]; k];
        for (i, exp) in self.second_derivatives.iter().enumerate() {
            for (sig, poly) in exp {
                t[i][index[sig]] = poly.clone();
            }
        }
        Some(t)
    }

    /// Derivative orders `k` of the signatures `Z^{(n-2,1,0,..,0,1)}`, i.e.
    /// `Z_{n-2,1,1}(X, X', X^{(k)})` with `k >= 2`, among states and
    /// intermediates.
    pub fn chain_orders(&self) -> Vec<usize> {
        if self.n < 3 {
            return Vec::new();
        }
        let mut ks: Vec<usize> = self
            .states
            .iter()
            .chain(&self.intermediates)
            .filter_map(|s| {
                if s.slots.len() != 3
                    || s.slots.get(&ArgSymbol::X) != Some(&(self.n as u32 - 2))
                    || s.slots.get(&ArgSymbol::DX) != Some(&1)
                {
                    return None;
                }
                s.slots
                    .iter()
                    .find(|(sym, &m)| sym.derivative_order() >= 2 && m == 1)
                    .map(|(sym, _)| sym.derivative_order())
            })
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// Structured form: states as argument-to-index maps, the transition
    /// matrix row-major with entries as text.
    pub fn to_json(&self) -> Value {
        let states: Vec<Value> = self
            .states
            .iter()
            .zip(&self.state_depths)
            .map(|(s, d)| {
                let map: serde_json::Map<String, Value> = s
                    .index_map()
                    .into_iter()
                    .map(|(k, m)| (k, json!(m)))
                    .collect();
                json!({ "name": s.to_string(), "depth": d, "indices": map })
            })
            .collect();
        let transition = self.transition().map(|t| {
            t.iter()
                .map(|row| row.iter().map(|p| p.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        json!({
            "n": self.n,
            "max_depth": self.max_depth,
            "closed": self.closed,
            "new_states_per_depth": self.new_per_depth,
            "state_counts": self.state_counts(),
            "states": states,
            "transition": transition,
            "chain_orders": self.chain_orders(),
        })
    }
}

/// Breadth-first closure search from `det X` for `n x n` matrices: every
/// state discovered at one depth is differentiated twice and canonicalized at
/// the next; unseen signatures become states. Stops at a fixpoint or after
/// `max_depth` depths.
pub fn explore(n: usize, max_depth: usize) -> ClosureReport {
    let start = CanonicalSignature::base(n, 0);
    let mut states = vec![start.clone()];
    let mut state_depths = vec![0];
    let mut index = BTreeMap::from([(start, 0usize)]);
    let mut second_derivatives = Vec::new();
    let mut intermediates = BTreeSet::new();
    let mut new_per_depth = vec![1];
    let mut frontier = vec![0usize];

    for depth in 1..=max_depth {
        let mut fresh = Vec::new();
        for &i in &frontier {
            intermediates.extend(first_derivative(&states[i]).into_keys());
            let exp = second_derivative(&states[i]);
            for sig in exp.keys() {
                if !index.contains_key(sig) {
                    index.insert(sig.clone(), states.len());
                    fresh.push(states.len());
                    states.push(sig.clone());
                    state_depths.push(depth);
                }
            }
            second_derivatives.push(exp);
        }
        new_per_depth.push(fresh.len());
        frontier = fresh;
        if frontier.is_empty() {
            break;
        }
    }

    ClosureReport {
        n,
        max_depth,
        closed: frontier.is_empty(),
        states,
        state_depths,
        new_per_depth,
        second_derivatives,
        intermediates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closes() {
        for depth in [2, 6] {
            let r = explore(2, depth);
            assert!(r.closed);
            assert_eq!(r.states.len(), 2);
            assert_eq!(r.new_per_depth, vec![1, 1, 0]);
            let t = r.transition().unwrap();
            let text: Vec<Vec<String>> = t
                .iter()
                .map(|row| row.iter().map(|p| p.to_string()).collect())
                .collect();
            assert_eq!(text, vec![vec!["tr(E)", "2"], vec!["2*det(E)", "tr(E)"]]);
        }
    }

    #[test]
    fn larger_sizes_keep_growing() {
        for n in 3..=5 {
            let r = explore(n, DEFAULT_MAX_DEPTH);
            assert!(!r.closed);
            assert!(r.transition().is_none());
            let counts = r.state_counts();
            assert!(counts.windows(2).all(|w| w[1] > w[0]), "n={n}: {counts:?}");
            let chain = r.chain_orders();
            assert!((2..=6).all(|k| chain.contains(&k)), "n={n}: {chain:?}");
        }
    }

    #[test]
    fn report_json_shape() {
        let v = explore(2, 6).to_json();
        assert_eq!(v["closed"], json!(true));
        assert_eq!(v["states"][1]["indices"], json!({"X'": 2}));
        assert_eq!(v["transition"][1][0], json!("2*det(E)"));
    }
}
