//! Lower bounds on the number of tokens the rest of a derivation must add.
//!
//! Inside a finished derivation of the goal, every formula of a partial
//! judgement is discharged by a cut against a separate subderivation. Only
//! the subderivation holding the goal may carry formulas of its own, so all
//! the others are closed and their tokens end up in the final word. `cost`
//! bounds the tokens of such a closed partner. When a partner absorbs a whole
//! group of formulas through one tensor, its tokens are spread evenly over the
//! group, which keeps the sum over a sequent a valid bound.

use std::collections::{BTreeMap, BTreeSet};

use crate::mll::Formula;

const EPS: f64 = 1e-9;
const ROUNDS: usize = 256;

pub(super) struct Residual {
    cost: BTreeMap<Formula, f64>,
    /// Largest number of formulas a single partner can absorb.
    group: usize,
}

struct Rule {
    sequent: Vec<Formula>,
    tokens: f64,
}

impl Residual {
    /// `rules` are the flattened axioms and identity seeds with their token
    /// counts.
    pub(super) fn new(rules: &[(Vec<Formula>, usize)]) -> Self {
        let rules: Vec<Rule> = rules
            .iter()
            .map(|(s, t)| Rule {
                sequent: s.clone(),
                tokens: *t as f64,
            })
            .collect();
        let mut universe = BTreeSet::new();
        for r in &rules {
            for f in &r.sequent {
                collect(f, &mut universe);
            }
        }
        let group = universe
            .iter()
            .filter(|f| matches!(f, Formula::Times(..)))
            .map(|f| f.negate().par_components().len())
            .max()
            .unwrap_or(1)
            .max(1);
        let mut cost: BTreeMap<Formula, f64> =
            universe.iter().map(|f| (f.clone(), f64::INFINITY)).collect();
        // Iterating from infinity gives the cheapest partner of bounded depth
        // at each round. Only a stable point is a bound on every partner.
        let mut stable = false;
        for _ in 0..ROUNDS {
            let mut changed = false;
            for f in &universe {
                let v = option_min(f, &rules, &cost);
                if v < cost[f] - EPS {
                    cost.insert(f.clone(), v);
                    changed = true;
                }
            }
            if !changed {
                stable = true;
                break;
            }
        }
        if !stable {
            cost.values_mut().for_each(|v| *v = 0.0);
        }
        Residual { cost, group }
    }

    pub(super) fn of(&self, f: &Formula) -> f64 {
        self.cost.get(f).copied().unwrap_or(0.0)
    }

    /// Tokens still to come for a judgement with this sequent. The group
    /// attached to the goal is left out by dropping the largest costs.
    pub(super) fn bound(&self, sequent: &[Formula]) -> f64 {
        self.bound_costs(sequent.iter().map(|f| self.of(f)))
    }

    fn bound_costs(&self, costs: impl Iterator<Item = f64>) -> f64 {
        let mut costs: Vec<f64> = costs.collect();
        costs.sort_by(|a, b| b.total_cmp(a));
        costs.iter().skip(self.group).sum()
    }

    /// Whether a judgement with this sequent and label length can still end in
    /// a word of at most `max_len` tokens.
    pub(super) fn allows(&self, sequent: &[Formula], label_length: usize, max_len: usize) -> bool {
        label_length as f64 + self.bound(sequent) <= max_len as f64 + EPS
    }

    pub(super) fn allows_costs(
        &self,
        costs: impl Iterator<Item = f64>,
        label_length: usize,
        max_len: usize,
    ) -> bool {
        label_length as f64 + self.bound_costs(costs) <= max_len as f64 + EPS
    }
}

fn collect(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    if matches!(f, Formula::Times(..)) {
        for c in f.negate().par_components() {
            collect(&c, out);
        }
    }
}

fn option_min(f: &Formula, rules: &[Rule], cost: &BTreeMap<Formula, f64>) -> f64 {
    // A tensor is absorbed by its components, which may sit in several
    // partners at once.
    if matches!(f, Formula::Times(..)) {
        return 0.0;
    }
    let others = |r: &Rule, p: usize| -> f64 {
        r.sequent
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != p)
            .map(|(_, g)| cost.get(g).copied().unwrap_or(0.0))
            .sum::<f64>()
    };
    let dual = f.negate();
    let mut best = f64::INFINITY;
    for r in rules {
        for (p, g) in r.sequent.iter().enumerate() {
            if *g == dual {
                best = best.min(r.tokens + others(r, p));
            } else if matches!(g, Formula::Times(..)) {
                let comps = g.negate().par_components();
                if comps.contains(f) {
                    best = best.min((r.tokens + others(r, p)) / comps.len() as f64);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mll::parse_sequent;

    fn rules(src: &[(&str, usize)]) -> Vec<(Vec<Formula>, usize)> {
        src.iter()
            .map(|(s, t)| (parse_sequent(s).unwrap(), *t))
            .collect()
    }

    #[test]
    fn every_open_slot_needs_a_token() {
        let r = Residual::new(&rules(&[("S", 1), ("~S, ~S, S", 0)]));
        let seq = parse_sequent("~S, ~S, ~S, S").unwrap();
        assert!((r.bound(&seq) - 3.0).abs() < EPS);
        assert!(r.allows(&seq, 2, 5));
        assert!(!r.allows(&seq, 3, 5));
    }

    #[test]
    fn tensors_share_their_tokens() {
        let r = Residual::new(&rules(&[("S", 1), ("~S, ~S, S * S", 2), ("~S, ~S, S", 0)]));
        assert!((r.of(&Formula::neg("S")) - 1.0).abs() < EPS);
    }

    #[test]
    fn formulas_without_partners_are_hopeless() {
        let r = Residual::new(&rules(&[("S", 1), ("~S, T", 0)]));
        assert_eq!(r.bound(&parse_sequent("T").unwrap()), 0.0);
        assert!(r.bound(&parse_sequent("T, T").unwrap()).is_infinite());
    }
}
