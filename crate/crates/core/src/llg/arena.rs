use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::cowordism::Cowordism;
use crate::mll::{Formula, Lexicon, MllProof};
use crate::multiword::Multiword;
use crate::word::Word;

/// How an item was obtained. Every step is followed by the item's reordering.
#[derive(Debug, Clone)]
pub(crate) enum Step {
    /// A lexicon axiom with its par formulas flattened in place.
    Axiom { index: usize },
    /// `⊢F⊥, F` flattened in place.
    Identity { formula: Formula },
    /// Cuts formula `at` of `left` against the components `comps` of `right`.
    Cut {
        left: usize,
        right: usize,
        at: usize,
        comps: Vec<usize>,
    },
    /// A flattened axiom whose literals are closed off one by one, in list order,
    /// by cuts against closed single-literal items.
    Close {
        axiom: usize,
        children: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub sequent: Vec<Formula>,
    pub body: Multiword,
    pub size: usize,
    pub step: Step,
    pub order: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct Arena {
    pub lexicon: Lexicon,
    pub items: Vec<Item>,
}

impl Arena {
    fn proof(&self, id: usize, memo: &mut HashMap<usize, Arc<MllProof>>) -> Arc<MllProof> {
        if let Some(p) = memo.get(&id) {
            return p.clone();
        }
        let item = &self.items[id];
        let raw = match &item.step {
            Step::Axiom { index } => {
                flatten_in_place(Arc::new(MllProof::axiom(&self.lexicon.axioms[*index])))
            }
            Step::Identity { formula } => flatten_in_place(Arc::new(MllProof::id(formula.clone()))),
            Step::Cut {
                left,
                right,
                at,
                comps,
            } => {
                let l = self.proof(*left, memo);
                let n1 = l.conclusion.len();
                let l = MllProof::move_formula(l, *at, n1 - 1);
                let r = self.proof(*right, memo);
                let mut order: Vec<usize> = (0..r.conclusion.len())
                    .filter(|k| !comps.contains(k))
                    .collect();
                order.extend(comps);
                let r = MllProof::permute(r, &order);
                let r = rebuild(r, &l.conclusion[n1 - 1].negate());
                let m = r.conclusion.len();
                let r = MllProof::move_formula(r, m - 1, 0);
                Arc::new(MllProof::cut(l, r).expect("cut formulas are dual"))
            }
            Step::Close { axiom, children } => {
                let mut p =
                    flatten_in_place(Arc::new(MllProof::axiom(&self.lexicon.axioms[*axiom])));
                let mut cur: Vec<usize> = (0..p.conclusion.len()).collect();
                for (j, child) in children {
                    let at = cur.iter().position(|x| x == j).expect("literal still open");
                    p = MllProof::move_formula(p, at, cur.len() - 1);
                    cur.remove(at);
                    let c = self.proof(*child, memo);
                    p = Arc::new(MllProof::cut(p, c).expect("cut formulas are dual"));
                }
                p
            }
        };
        let p = MllProof::permute(raw, &item.order);
        memo.insert(id, p.clone());
        p
    }
}

/// Replaces each par formula by its two halves at the same place, using a cut
/// against `⊢B⊥⊗A⊥, A, B`. The body is unchanged.
fn flatten_in_place(mut p: Arc<MllProof>) -> Arc<MllProof> {
    while let Some(i) = p
        .conclusion
        .iter()
        .position(|f| matches!(f, Formula::Par(..)))
    {
        let Formula::Par(a, b) = p.conclusion[i].clone() else {
            unreachable!()
        };
        let n = p.conclusion.len();
        p = MllProof::move_formula(p, i, n - 1);
        p = Arc::new(MllProof::cut(p, scaffold(&a, &b)).expect("scaffold matches"));
        p = MllProof::move_formula(p, n - 1, i);
        p = MllProof::move_formula(p, n, i + 1);
    }
    p
}

fn scaffold(a: &Formula, b: &Formula) -> Arc<MllProof> {
    let ib = Arc::new(MllProof::id(b.clone()));
    let ib = Arc::new(MllProof::ex(ib, 0).expect("two formulas"));
    let ia = Arc::new(MllProof::id(a.clone()));
    let t = Arc::new(MllProof::times(ib, ia).expect("nonempty premises"));
    let t = Arc::new(MllProof::ex(t, 0).expect("three formulas"));
    Arc::new(MllProof::ex(t, 1).expect("three formulas"))
}

/// Reassembles `f` from its par components, which occupy the last slots.
fn rebuild(p: Arc<MllProof>, f: &Formula) -> Arc<MllProof> {
    let Formula::Par(l, r) = f else {
        return p;
    };
    let kl = l.par_components().len();
    let p = rebuild(p, r);
    let n = p.conclusion.len();
    let p = MllProof::move_formula(p, n - 1, n - 1 - kl);
    let p = rebuild(p, l);
    let n = p.conclusion.len();
    let p = Arc::new(MllProof::ex(p, n - 2).expect("two formulas"));
    Arc::new(MllProof::par(p).expect("two formulas"))
}

/// A handle on the derivation of a judgement, expanded to a proof on demand.
#[derive(Clone)]
pub struct Provenance {
    pub(crate) arena: Arc<Arena>,
    pub(crate) id: usize,
}

impl Provenance {
    pub fn proof(&self) -> MllProof {
        let p = self.arena.proof(self.id, &mut HashMap::new());
        Arc::try_unwrap(p).unwrap_or_else(|a| (*a).clone())
    }

    /// The axioms used, in derivation order.
    pub fn axioms_used(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_axioms(self.id, &mut out);
        out
    }

    fn collect_axioms(&self, id: usize, out: &mut Vec<String>) {
        match &self.arena.items[id].step {
            Step::Axiom { index } => out.push(self.arena.lexicon.axioms[*index].name.clone()),
            Step::Identity { formula } => out.push(format!("Id({formula})")),
            Step::Cut { left, right, .. } => {
                self.collect_axioms(*left, out);
                self.collect_axioms(*right, out);
            }
            Step::Close { axiom, children } => {
                out.push(self.arena.lexicon.axioms[*axiom].name.clone());
                for (_, c) in children {
                    self.collect_axioms(*c, out);
                }
            }
        }
    }
}

impl fmt::Debug for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Provenance(#{})", self.id)
    }
}

/// A derived closed cowordism together with the size of its cheapest derivation.
#[derive(Debug, Clone)]
pub struct DerivedJudgement {
    pub sequent: Vec<Formula>,
    pub body: Cowordism,
    pub size: usize,
    pub provenance: Provenance,
}

impl DerivedJudgement {
    pub(crate) fn from_arena(arena: &Arc<Arena>, id: usize) -> Self {
        let item = &arena.items[id];
        DerivedJudgement {
            sequent: item.sequent.clone(),
            body: Cowordism::closed(item.body.clone()),
            size: item.size,
            provenance: Provenance {
                arena: arena.clone(),
                id,
            },
        }
    }
}

/// Sorts a sequent. Blocks holding equal formulas are arranged to give the
/// least body, so judgements differing only by such a swap coincide.
/// Returns the reordering with `order[k]` the old index placed at `k`.
pub(crate) fn canonicalize(
    seq: &[Formula],
    body: &Multiword,
    sizes: &[usize],
) -> (Vec<Formula>, Multiword, Vec<usize>) {
    let sigs = signatures(seq, body, sizes);
    let mut base: Vec<usize> = (0..seq.len()).collect();
    base.sort_by(|&a, &b| seq[a].cmp(&seq[b]).then_with(|| sigs[a].cmp(&sigs[b])));
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < base.len() {
        let mut e = k + 1;
        while e < base.len() && seq[base[e]] == seq[base[k]] && sigs[base[e]] == sigs[base[k]] {
            e += 1;
        }
        if e - k > 1 {
            groups.push((k, e));
        }
        k = e;
    }
    let sorted: Vec<Formula> = base.iter().map(|&i| seq[i].clone()).collect();
    let apply = |order: &[usize]| body.permute_blocks(sizes, order);
    let candidates: usize = groups
        .iter()
        .map(|(s, e)| (1..=e - s).product::<usize>())
        .product();
    if groups.is_empty() || candidates > 720 {
        let b = apply(&base);
        return (sorted, b, base);
    }
    let mut best: Option<(Multiword, Vec<usize>)> = None;
    let mut order = base.clone();
    permute_groups(&groups, 0, &mut order, &mut |o| {
        let b = apply(o);
        if best.as_ref().map_or(true, |(bb, _)| &b < bb) {
            best = Some((b, o.to_vec()));
        }
    });
    let (b, o) = best.expect("at least one candidate");
    (sorted, b, o)
}

type Signature<'a> = Vec<(usize, bool, &'a Word, &'a Formula, usize)>;

/// For each block, what its points are wired to: offset, direction, label and
/// the formula and offset at the far end. Invariant under moving blocks.
fn signatures<'a>(seq: &'a [Formula], body: &'a Multiword, sizes: &[usize]) -> Vec<Signature<'a>> {
    let mut owner = Vec::new();
    for (b, &n) in sizes.iter().enumerate() {
        owner.extend((0..n).map(|o| (b, o)));
    }
    let mut sigs: Vec<Signature<'a>> = vec![Vec::new(); seq.len()];
    for e in body.edges() {
        let (bs, os) = owner[e.source - 1];
        let (bt, ot) = owner[e.target - 1];
        sigs[bs].push((os, true, &e.label, &seq[bt], ot));
        sigs[bt].push((ot, false, &e.label, &seq[bs], os));
    }
    for s in &mut sigs {
        s.sort();
    }
    sigs
}

fn permute_groups(
    groups: &[(usize, usize)],
    g: usize,
    order: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let Some(&(s, e)) = groups.get(g) else {
        visit(order);
        return;
    };
    heap_permutations(order, s, e, e - s, &mut |o| permute_groups(groups, g + 1, o, visit));
}

fn heap_permutations(
    order: &mut Vec<usize>,
    s: usize,
    e: usize,
    k: usize,
    visit: &mut dyn FnMut(&mut Vec<usize>),
) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(order, s, e, k - 1, visit);
        if k % 2 == 0 {
            order.swap(s + i, s + k - 1);
        } else {
            order.swap(s, s + k - 1);
        }
    }
    heap_permutations(order, s, e, k - 1, visit);
}
