use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::arena::{canonicalize, Arena, DerivedJudgement, Item, Step};
use super::residual::Residual;
use super::{flatten_sequent, Generation, Llg, LlgError, SearchOptions};
use crate::boundary::Boundary;
use crate::cowordism::Cowordism;
use crate::mll::{interpret_formula, Formula};
use crate::multiword::Multiword;
use crate::word::Token;

struct State<'a> {
    g: &'a Llg,
    opts: &'a SearchOptions,
    items: Vec<Item>,
    seen: HashMap<(Vec<Formula>, Multiword), usize>,
    layers: Vec<Vec<usize>>,
    boundaries: HashMap<Formula, Boundary>,
    checks: Vec<Check>,
    /// Per item and check: tokens used so far and the cost of each formula.
    used: Vec<Vec<usize>>,
    costs: Vec<Vec<Vec<f64>>>,
}

/// A cap on the tokens of one kind (or of any kind) in the final word.
struct Check {
    token: Option<Token>,
    limit: usize,
    residual: Residual,
}

impl Check {
    fn count(&self, body: &Multiword) -> usize {
        match &self.token {
            None => body.label_length(),
            Some(t) => count_token(body, t),
        }
    }
}

fn count_token(body: &Multiword, t: &Token) -> usize {
    let edges = body.edges().iter().map(|e| &e.label);
    let cycles = body.singular().iter().map(|c| c.canonical());
    edges
        .chain(cycles)
        .map(|w| w.tokens().iter().filter(|x| *x == t).count())
        .sum()
}

impl<'a> State<'a> {
    fn boundary(&mut self, f: &Formula) -> Result<Boundary, LlgError> {
        if let Some(b) = self.boundaries.get(f) {
            return Ok(b.clone());
        }
        let b = interpret_formula(&self.g.lexicon.atoms, f)?;
        self.boundaries.insert(f.clone(), b.clone());
        Ok(b)
    }

    fn sizes(&mut self, seq: &[Formula]) -> Result<Vec<usize>, LlgError> {
        seq.iter().map(|f| Ok(self.boundary(f)?.cardinality())).collect()
    }

    fn admissible(&self, seq: &[Formula], body: &Multiword) -> bool {
        self.opts.fits(body)
            && self
                .checks
                .iter()
                .all(|c| c.residual.allows(seq, c.count(body), c.limit))
    }

    /// Adds a judgement unless it is pruned or already known. Returns whether it was new.
    fn offer(
        &mut self,
        seq: Vec<Formula>,
        body: Multiword,
        size: usize,
        step: Step,
    ) -> Result<bool, LlgError> {
        if !self.admissible(&seq, &body) {
            return Ok(false);
        }
        let sizes = self.sizes(&seq)?;
        let (sequent, body, order) = canonicalize(&seq, &body, &sizes);
        let key = (sequent, body);
        if self.seen.contains_key(&key) {
            return Ok(false);
        }
        let id = self.items.len();
        self.seen.insert(key.clone(), id);
        let (sequent, body) = key;
        while self.layers.len() <= size {
            self.layers.push(Vec::new());
        }
        self.layers[size].push(id);
        self.used.push(self.checks.iter().map(|c| c.count(&body)).collect());
        self.costs.push(
            self.checks
                .iter()
                .map(|c| sequent.iter().map(|f| c.residual.of(f)).collect())
                .collect(),
        );
        self.items.push(Item {
            sequent,
            body,
            size,
            step,
            order,
        });
        Ok(true)
    }

    /// Every cut producing a judgement of size exactly `s`. One premise is
    /// always an axiom or identity seed: a tree of axioms can be assembled by
    /// adding one leaf at a time, so this reaches every judgement at its
    /// least size. Stops at the first new judgement when `first_only` is set.
    fn produce(&mut self, s: usize, first_only: bool) -> Result<usize, LlgError> {
        let mut added = 0;
        if s < 3 {
            return Ok(0);
        }
        let grown = self.layers.get(s - 2).cloned().unwrap_or_default();
        let leaves = self.layers[1].clone();
        for &j in &grown {
            for &leaf in &leaves {
                for (j1, j2) in [(j, leaf), (leaf, j)] {
                    let seq1 = self.items[j1].sequent.clone();
                    for (a, f) in seq1.iter().enumerate() {
                        if !matches!(f, Formula::Pos(_) | Formula::Times(..)) {
                            continue;
                        }
                        let comps = f.negate().par_components();
                        let mut assignments = Vec::new();
                        assign(&comps, &self.items[j2].sequent, &mut Vec::new(), &mut assignments);
                        for chosen in assignments {
                            if !self.promising(j1, a, j2, &chosen) {
                                continue;
                            }
                            if self.cut(j1, a, j2, chosen, s)? {
                                added += 1;
                                if first_only {
                                    return Ok(added);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(added)
    }

    /// Cheap necessary conditions on a cut, checked before building its body.
    fn promising(&self, j1: usize, a: usize, j2: usize, comps: &[usize]) -> bool {
        self.checks.iter().enumerate().all(|(k, c)| {
            let used = self.used[j1][k] + self.used[j2][k];
            if used > c.limit {
                return false;
            }
            let rest = self.costs[j1][k]
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != a)
                .chain(self.costs[j2][k].iter().enumerate().filter(|(i, _)| !comps.contains(i)))
                .map(|(_, &x)| x);
            c.residual.allows_costs(rest, used, c.limit)
        })
    }

    fn cut(
        &mut self,
        j1: usize,
        a: usize,
        j2: usize,
        comps: Vec<usize>,
        size: usize,
    ) -> Result<bool, LlgError> {
        let seq1 = self.items[j1].sequent.clone();
        let seq2 = self.items[j2].sequent.clone();
        let sizes1 = self.sizes(&seq1)?;
        let sizes2 = self.sizes(&seq2)?;
        let mut order1: Vec<usize> = (0..seq1.len()).filter(|&k| k != a).collect();
        order1.push(a);
        let left = self.items[j1].body.permute_blocks(&sizes1, &order1);
        let mut order2 = comps.clone();
        order2.extend((0..seq2.len()).filter(|k| !comps.contains(k)));
        let right = self.items[j2].body.permute_blocks(&sizes2, &order2);
        let x = self.boundary(&seq1[a])?;
        let gamma: usize = order1[..order1.len() - 1].iter().map(|&k| sizes1[k]).sum();
        let body = left
            .tensor(&right)
            .iterated_contraction(gamma, &x.dual())
            .expect("dual blocks contract");
        let mut seq: Vec<Formula> = order1[..order1.len() - 1]
            .iter()
            .map(|&k| seq1[k].clone())
            .collect();
        seq.extend(order2[comps.len()..].iter().map(|&k| seq2[k].clone()));
        self.offer(
            seq,
            body,
            size,
            Step::Cut {
                left: j1,
                right: j2,
                at: a,
                comps,
            },
        )
    }
}

/// Injective choices of positions in `seq` holding `comps` in order.
fn assign(comps: &[Formula], seq: &[Formula], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(c) = comps.get(chosen.len()) else {
        out.push(chosen.clone());
        return;
    };
    for (k, f) in seq.iter().enumerate() {
        if f == c && !chosen.contains(&k) {
            chosen.push(k);
            assign(comps, seq, chosen, out);
            chosen.pop();
        }
    }
}

/// Tensor formulas that can occur as hypotheses when a tensor formula of the
/// grammar is cut. They are seeded with identity judgements.
fn identity_seeds(g: &Llg) -> BTreeSet<Formula> {
    fn visit(f: &Formula, out: &mut BTreeSet<Formula>) {
        for c in f.negate().par_components() {
            if matches!(c, Formula::Times(..)) && out.insert(c.clone()) {
                visit(&c, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for ax in &g.lexicon.axioms {
        for f in flatten_sequent(&ax.sequent) {
            if matches!(f, Formula::Times(..)) {
                visit(&f, &mut out);
            }
        }
    }
    out
}

pub(super) fn run(g: &Llg, opts: &SearchOptions) -> Result<Generation, LlgError> {
    let budget = opts.budget.ok_or(LlgError::Unbounded)?;
    let mut st = State {
        g,
        opts,
        items: Vec::new(),
        seen: HashMap::new(),
        layers: vec![Vec::new(); 2],
        boundaries: HashMap::new(),
        checks: Vec::new(),
        used: Vec::new(),
        costs: Vec::new(),
    };
    let seeds = identity_seeds(g);
    let mut caps: Vec<(Option<Token>, usize)> = Vec::new();
    if let Some(k) = opts.max_len {
        caps.push((None, k));
    }
    if let Some(w) = &opts.target {
        for t in g.alphabet.tokens() {
            caps.push((Some(t.clone()), w.tokens().iter().filter(|x| *x == t).count()));
        }
    }
    for (token, limit) in caps {
        let weigh = |body: &Multiword| match &token {
            None => body.label_length(),
            Some(t) => count_token(body, t),
        };
        let mut rules: Vec<(Vec<Formula>, usize)> = g
            .lexicon
            .axioms
            .iter()
            .map(|ax| (flatten_sequent(&ax.sequent), weigh(&ax.body)))
            .collect();
        rules.extend(seeds.iter().map(|f| (flatten_sequent(&[f.negate(), f.clone()]), 0)));
        st.checks.push(Check {
            token,
            limit,
            residual: Residual::new(&rules),
        });
    }
    if budget >= 1 {
        for (index, ax) in g.lexicon.axioms.iter().enumerate() {
            st.offer(
                flatten_sequent(&ax.sequent),
                ax.body.clone(),
                1,
                Step::Axiom { index },
            )?;
        }
        for f in seeds {
            let body = Cowordism::identity(&st.boundary(&f)?).into_body();
            st.offer(
                flatten_sequent(&[f.negate(), f.clone()]),
                body,
                1,
                Step::Identity { formula: f },
            )?;
        }
    }
    for s in 2..=budget {
        st.produce(s, false)?;
    }
    let goal = vec![g.initial_formula()];
    let found: Vec<usize> = (0..st.items.len())
        .filter(|&id| st.items[id].sequent == goal && st.items[id].size <= budget)
        .collect();
    let mut exhausted = false;
    if opts.detect_exhaustion && budget >= 1 {
        // Sizes are odd and each layer grows only from the one before it.
        for s in budget + 1..=budget + 2 {
            if st.produce(s, true)? > 0 {
                exhausted = true;
                break;
            }
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
