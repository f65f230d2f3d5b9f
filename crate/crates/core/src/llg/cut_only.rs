use std::collections::HashMap;
use std::sync::Arc;

use super::arena::{Arena, DerivedJudgement, Item, Step};
use super::{Generation, Llg, LlgError, SearchOptions};
use crate::boundary::Boundary;
use crate::mll::{interpret_formula, Formula};
use crate::multiword::Multiword;

struct Axiom {
    literals: Vec<Formula>,
    boundaries: Vec<Boundary>,
    body: Multiword,
}

struct State<'a> {
    opts: &'a SearchOptions,
    axioms: Vec<Axiom>,
    items: Vec<Item>,
    seen: HashMap<(Formula, Multiword), usize>,
    /// literal -> size -> closed items
    buckets: HashMap<Formula, Vec<Vec<usize>>>,
    max_size: usize,
}

impl State<'_> {
    fn offer(&mut self, literal: Formula, body: Multiword, size: usize, step: Step) -> bool {
        if !self.opts.fits(&body) {
            return false;
        }
        let key = (literal, body);
        if self.seen.contains_key(&key) {
            return false;
        }
        let id = self.items.len();
        self.seen.insert(key.clone(), id);
        let (literal, body) = key;
        let slot = self.buckets.entry(literal.clone()).or_default();
        while slot.len() <= size {
            slot.push(Vec::new());
        }
        slot[size].push(id);
        self.max_size = self.max_size.max(size);
        self.items.push(Item {
            sequent: vec![literal],
            body,
            size,
            step,
            order: vec![0],
        });
        true
    }

    fn bucket(&self, literal: &Formula, size: usize) -> &[usize] {
        self.buckets
            .get(literal)
            .and_then(|v| v.get(size))
            .map_or(&[], Vec::as_slice)
    }

    /// Closed items of size exactly `s`.
    fn produce(&mut self, s: usize, first_only: bool) -> usize {
        let mut added = 0;
        for ax in 0..self.axioms.len() {
            let n = self.axioms[ax].literals.len();
            if n < 2 {
                continue;
            }
            for pivot in 0..n {
                let open: Vec<usize> = (0..n).rev().filter(|&j| j != pivot).collect();
                let mut combos = Vec::new();
                self.choose(ax, &open, s - 1, &mut Vec::new(), &mut combos);
                for children in combos {
                    if self.close(ax, pivot, children, s) {
                        added += 1;
                        if first_only {
                            return added;
                        }
                    }
                }
            }
        }
        added
    }

    /// Children for the literals in `open` whose sizes plus one sum to `remaining`.
    fn choose(
        &self,
        ax: usize,
        open: &[usize],
        remaining: usize,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let k = chosen.len();
        let Some(&j) = open.get(k) else {
            if remaining == 0 {
                out.push(chosen.clone());
            }
            return;
        };
        let need = self.axioms[ax].literals[j].negate();
        let left_after = open.len() - k - 1;
        if remaining < 2 * (left_after + 1) {
            return;
        }
        let lo = if left_after == 0 { remaining - 1 } else { 1 };
        let hi = remaining - 1 - 2 * left_after;
        for size in lo..=hi {
            for &c in self.bucket(&need, size) {
                chosen.push((j, c));
                self.choose(ax, open, remaining - size - 1, chosen, out);
                chosen.pop();
            }
        }
    }

    fn close(&mut self, ax: usize, pivot: usize, children: Vec<(usize, usize)>, size: usize) -> bool {
        let a = &self.axioms[ax];
        let mut body = a.body.clone();
        let mut cur: Vec<usize> = (0..a.literals.len()).collect();
        for &(j, child) in &children {
            let at = cur.iter().position(|&x| x == j).expect("open literal");
            let sizes: Vec<usize> = cur.iter().map(|&x| a.boundaries[x].cardinality()).collect();
            let mut order: Vec<usize> = (0..cur.len()).filter(|&k| k != at).collect();
            order.push(at);
            body = body.permute_blocks(&sizes, &order);
            cur.remove(at);
            let rest: usize = cur.iter().map(|&x| a.boundaries[x].cardinality()).sum();
            body = body
                .tensor(&self.items[child].body)
                .iterated_contraction(rest, &a.boundaries[j].dual())
                .expect("dual blocks contract");
            if self.opts.max_len.is_some_and(|k| body.label_length() > k) {
                return false;
            }
        }
        let literal = a.literals[pivot].clone();
        self.offer(literal, body, size, Step::Close { axiom: ax, children })
    }
}

pub(super) fn run(g: &Llg, opts: &SearchOptions) -> Result<Generation, LlgError> {
    let mut axioms = Vec::new();
    for ax in &g.lexicon.axioms {
        let boundaries = ax
            .sequent
            .iter()
            .map(|f| interpret_formula(&g.lexicon.atoms, f))
            .collect::<Result<_, _>>()?;
        axioms.push(Axiom {
            literals: ax.sequent.clone(),
            boundaries,
            body: ax.body.clone(),
        });
    }
    let max_arity = axioms.iter().map(|a| a.literals.len()).max().unwrap_or(0);
    let mut st = State {
        opts,
        axioms,
        items: Vec::new(),
        seen: HashMap::new(),
        buckets: HashMap::new(),
        max_size: 0,
    };
    let budget = opts.budget.unwrap_or(usize::MAX);
    // A new item has a cheapest derivation whose children are all known, so
    // nothing new can appear past this size.
    let horizon = |m: usize| 1 + max_arity.saturating_sub(1) * (m + 1);
    if budget >= 1 {
        for ax in 0..st.axioms.len() {
            if st.axioms[ax].literals.len() == 1 {
                let literal = st.axioms[ax].literals[0].clone();
                let body = st.axioms[ax].body.clone();
                st.offer(
                    literal,
                    body,
                    1,
                    Step::Close {
                        axiom: ax,
                        children: vec![],
                    },
                );
            }
        }
    }
    let mut s = 2;
    while s <= budget && s <= horizon(st.max_size) {
        st.produce(s, false);
        s += 1;
    }
    let goal = g.initial_formula();
    let found: Vec<usize> = (0..st.items.len())
        .filter(|&id| st.items[id].sequent[0] == goal)
        .collect();
    let mut exhausted = false;
    if opts.budget.is_some() && opts.detect_exhaustion {
        while s <= horizon(st.max_size) {
            if st.produce(s, true) > 0 {
                exhausted = true;
                break;
            }
            s += 1;
        }
    }
    let arena = Arc::new(Arena {
        lexicon: g.lexicon.clone(),
        items: st.items,
    });
    Ok(Generation {
        judgements: found
            .into_iter()
            .map(|id| DerivedJudgement::from_arena(&arena, id))
            .collect(),
        exhausted,
    })
}
