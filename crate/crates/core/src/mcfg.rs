//! Multiple context-free grammars, their fixpoint semantics and the two
//! compilations between them and tensor-free linear logic grammars.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::boundary::Boundary;
use crate::cowordism::Cowordism;
use crate::llg::{flatten_par, validate_llg, Llg, LlgError};
use crate::mll::{interpret_formula, AxiomEntry, Formula, Lexicon};
use crate::multiword::{Edge, Multiword};
use crate::word::{token, Alphabet, Token, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Token(Token),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub vars: Vec<String>,
}

/// `B1(x..), …, Bn(x..) ⊢ A(s1, …, sk)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub head: String,
    pub head_args: Vec<Vec<Symbol>>,
    pub body: Vec<Predicate>,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .body
            .iter()
            .map(|p| format!("{}({})", p.name, p.vars.join(", ")))
            .collect();
        let args: Vec<String> = self
            .head_args
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "eps".to_string()
                } else {
                    s.iter()
                        .map(|x| match x {
                            Symbol::Token(t) => t.as_str().to_string(),
                            Symbol::Var(v) => v.clone(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            })
            .collect();
        if !body.is_empty() {
            write!(f, "{} ", body.join(", "))?;
        }
        write!(f, "-> {}({})", self.head, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcfg {
    pub alphabet: Alphabet,
    pub nonterminals: BTreeMap<String, usize>,
    pub productions: Vec<Production>,
    pub initial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McfgError {
    #[error("production {index}: {message}")]
    Production { index: usize, message: String },
    #[error("initial symbol `{0}` must be declared unary")]
    Initial(String),
    #[error("multiword has cycles and no pattern")]
    Singular,
    #[error("axiom `{0}` contains a tensor")]
    Tensor(String),
    #[error("fresh variable `{0}` clashes with a token")]
    VariableClash(String),
    #[error(transparent)]
    Llg(#[from] LlgError),
}

pub fn validate_mcfg(g: &Mcfg) -> Result<(), McfgError> {
    if g.nonterminals.get(&g.initial) != Some(&1) {
        return Err(McfgError::Initial(g.initial.clone()));
    }
    for (index, p) in g.productions.iter().enumerate() {
        let fail = |message: String| McfgError::Production { index, message };
        let arity = |n: &str| {
            g.nonterminals
                .get(n)
                .copied()
                .ok_or_else(|| fail(format!("undeclared nonterminal `{n}`")))
        };
        if arity(&p.head)? != p.head_args.len() {
            return Err(fail(format!("`{}` used with the wrong arity", p.head)));
        }
        let mut vars = BTreeMap::new();
        for b in &p.body {
            if arity(&b.name)? != b.vars.len() {
                return Err(fail(format!("`{}` used with the wrong arity", b.name)));
            }
            for v in &b.vars {
                if vars.insert(v.as_str(), 0usize).is_some() {
                    return Err(fail(format!("variable `{v}` bound twice")));
                }
            }
        }
        for sym in p.head_args.iter().flatten() {
            match sym {
                Symbol::Token(t) if !g.alphabet.contains(t) => {
                    return Err(fail(format!("token `{t}` is not in the alphabet")))
                }
                Symbol::Token(_) => {}
                Symbol::Var(v) => match vars.get_mut(v.as_str()) {
                    Some(n) => *n += 1,
                    None => return Err(fail(format!("variable `{v}` is not bound"))),
                },
            }
        }
        if let Some((v, n)) = vars.iter().find(|(_, n)| **n != 1) {
            return Err(fail(format!("variable `{v}` occurs {n} times")));
        }
    }
    Ok(())
}

/// A derivable predicate formula `A(w1, …, wk)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub predicate: String,
    pub args: Vec<Word>,
}

/// Least fixpoint of the productions over formulas whose arguments all have
/// length at most `bound`.
pub fn mcfg_derive(g: &Mcfg, bound: usize) -> BTreeSet<Fact> {
    let mut all: BTreeMap<&str, BTreeSet<Vec<Word>>> = BTreeMap::new();
    let mut delta: BTreeMap<&str, BTreeSet<Vec<Word>>> = BTreeMap::new();
    let mut first = true;
    loop {
        let mut fresh: BTreeMap<&str, BTreeSet<Vec<Word>>> = BTreeMap::new();
        for p in &g.productions {
            if !first && p.body.is_empty() {
                continue;
            }
            // the premise at `pivot` comes from the last round, earlier ones from older rounds
            let pivots: Vec<Option<usize>> = if p.body.is_empty() {
                vec![None]
            } else {
                (0..p.body.len()).map(Some).collect()
            };
            let empty = BTreeSet::new();
            for pivot in pivots {
                let mut choices: Vec<Vec<&Vec<Word>>> = vec![Vec::new()];
                for (j, b) in p.body.iter().enumerate() {
                    let all_b = all.get(b.name.as_str()).unwrap_or(&empty);
                    let delta_b = delta.get(b.name.as_str()).unwrap_or(&empty);
                    let pool: Vec<&Vec<Word>> = match pivot {
                        Some(k) if j < k => all_b.iter().filter(|t| !delta_b.contains(*t)).collect(),
                        Some(k) if j == k => delta_b.iter().collect(),
                        _ => all_b.iter().collect(),
                    };
                    let mut next = Vec::new();
                    for c in &choices {
                        for t in &pool {
                            let mut c2 = c.clone();
                            c2.push(*t);
                            next.push(c2);
                        }
                    }
                    choices = next;
                }
                for c in choices {
                    let args = apply(p, &c);
                    if args.iter().all(|w| w.len() <= bound)
                        && !all.get(p.head.as_str()).is_some_and(|s| s.contains(&args))
                    {
                        fresh.entry(p.head.as_str()).or_default().insert(args);
                    }
                }
            }
        }
        first = false;
        if fresh.values().all(BTreeSet::is_empty) {
            break;
        }
        for (k, v) in &fresh {
            all.entry(k).or_default().extend(v.iter().cloned());
        }
        delta = fresh;
    }
    all.into_iter()
        .flat_map(|(p, set)| {
            set.into_iter().map(move |args| Fact {
                predicate: p.to_string(),
                args,
            })
        })
        .collect()
}

fn apply(p: &Production, premises: &[&Vec<Word>]) -> Vec<Word> {
    let mut env: BTreeMap<&str, &Word> = BTreeMap::new();
    for (b, args) in p.body.iter().zip(premises) {
        for (v, w) in b.vars.iter().zip(args.iter()) {
            env.insert(v, w);
        }
    }
    p.head_args
        .iter()
        .map(|s| {
            let mut out = Vec::new();
            for sym in s {
                match sym {
                    Symbol::Token(t) => out.push(t.clone()),
                    Symbol::Var(v) => out.extend(env[v.as_str()].tokens().iter().cloned()),
                }
            }
            Word::from_tokens(out)
        })
        .collect()
}

pub fn mcfg_language(g: &Mcfg, bound: usize) -> BTreeSet<Word> {
    mcfg_derive(g, bound)
        .into_iter()
        .filter(|f| f.predicate == g.initial)
        .map(|mut f| f.args.remove(0))
        .collect()
}

/// `(2k, {2, 4, …, 2k})`: argument `i` starts at the left point `2i` and ends at `2i−1`.
pub fn predicate_boundary(arity: usize) -> Boundary {
    let left: Vec<usize> = (1..=arity).map(|i| 2 * i).collect();
    Boundary::new(2 * arity, &left).expect("valid")
}

/// The closed multiword on `B1⊥ … ` blocks laid out as `Bn⊥ ⊗ … ⊗ B1⊥ ⊗ A`.
pub fn production_body(g: &Mcfg, p: &Production) -> Multiword {
    let arities: Vec<usize> = p.body.iter().map(|b| b.vars.len()).collect();
    let n = arities.len();
    let offset = |j: usize| -> usize { arities[j + 1..].iter().map(|k| 2 * k).sum() };
    let head_offset: usize = arities.iter().map(|k| 2 * k).sum();
    let mut where_is: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (j, b) in p.body.iter().enumerate() {
        for (i, v) in b.vars.iter().enumerate() {
            where_is.insert(v, (j, i + 1));
        }
    }
    let mut edges = Vec::new();
    for (m, s) in p.head_args.iter().enumerate() {
        let mut source = head_offset + 2 * (m + 1);
        let mut label = Vec::new();
        for sym in s {
            match sym {
                Symbol::Token(t) => label.push(t.clone()),
                Symbol::Var(v) => {
                    let (j, i) = where_is[v.as_str()];
                    let k = arities[j];
                    let start = offset(j) + 2 * k + 1 - 2 * i;
                    edges.push(Edge::new(source, Word::from_tokens(std::mem::take(&mut label)), start));
                    source = offset(j) + 2 * k + 2 - 2 * i;
                }
            }
        }
        edges.push(Edge::new(source, Word::from_tokens(label), head_offset + 2 * m + 1));
    }
    let boundary = (0..n)
        .rev()
        .map(|j| predicate_boundary(arities[j]).dual())
        .chain(std::iter::once(predicate_boundary(g.nonterminals[&p.head])))
        .fold(Boundary::unit(), |acc, b| acc.tensor(&b));
    Multiword::new(boundary, edges, vec![]).expect("production wiring is a perfect matching")
}

/// One axiom `⊢ Bn⊥, …, B1⊥, A` per production, named `r1`, `r2`, … in order.
pub fn mcfg_to_llg(g: &Mcfg) -> Llg {
    let atoms = g
        .nonterminals
        .iter()
        .map(|(n, k)| (n.clone(), predicate_boundary(*k)))
        .collect();
    let axioms = g
        .productions
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut sequent: Vec<Formula> = p.body.iter().rev().map(|b| Formula::neg(&b.name)).collect();
            sequent.push(Formula::pos(&p.head));
            AxiomEntry {
                name: format!("r{}", i + 1),
                sequent,
                body: production_body(g, p),
            }
        })
        .collect();
    Llg {
        alphabet: g.alphabet.clone(),
        lexicon: Lexicon { atoms, axioms },
        initial: g.initial.clone(),
    }
}

/// An unlabeled regular multiword; `pairs` lists `(source, target)` by ascending source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub boundary: Boundary,
    pub pairs: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn arity(&self) -> usize {
        self.pairs.len()
    }

    /// The pattern with edge `j` labeled by `labels[j]`.
    pub fn labeled(&self, labels: &[Word]) -> Multiword {
        let edges = self
            .pairs
            .iter()
            .zip(labels)
            .map(|(&(s, t), w)| Edge::new(s, w.clone(), t))
            .collect();
        Multiword::new(self.boundary.clone(), edges, vec![]).expect("pattern is a matching")
    }
}

pub fn pattern_of(m: &Multiword) -> Result<Pattern, McfgError> {
    if !m.is_regular() {
        return Err(McfgError::Singular);
    }
    let mut pairs: Vec<(usize, usize)> = m.edges().iter().map(|e| (e.source, e.target)).collect();
    pairs.sort();
    Ok(Pattern {
        boundary: m.boundary().clone(),
        pairs,
    })
}

/// All polarity-respecting perfect matchings, in lexicographic order.
pub fn possible_patterns(x: &Boundary) -> Vec<Pattern> {
    let left = x.left_set();
    let right = x.right_set();
    if left.len() != right.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    fn go(
        left: &[usize],
        right: &[usize],
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        x: &Boundary,
        out: &mut Vec<Pattern>,
    ) {
        let Some(&s) = left.get(cur.len()) else {
            out.push(Pattern {
                boundary: x.clone(),
                pairs: cur.clone(),
            });
            return;
        };
        for (k, &t) in right.iter().enumerate() {
            if !used[k] {
                used[k] = true;
                cur.push((s, t));
                go(left, right, used, cur, x, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    go(&left, &right, &mut vec![false; right.len()], &mut Vec::new(), x, &mut out);
    out
}

/// A typed slot of `prod_of_cowordism`: a nonterminal base name with its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub name: String,
    pub boundary: Boundary,
}

/// `A^k`, where `k` indexes `π` among the possible patterns of the slot.
pub fn pattern_name(slot: &Slot, pattern: &Pattern) -> String {
    let k = possible_patterns(&slot.boundary)
        .iter()
        .position(|p| p == pattern)
        .expect("pattern of this boundary");
    format!("{}^{}", slot.name, k)
}

/// The productions read off `sigma : X1⊗…⊗Xn → X` for every choice of input patterns
/// that yields a regular result. Input `i` edge `j` carries the variable `x_i_j`.
pub fn prod_of_cowordism(
    sigma: &Cowordism,
    inputs: &[Slot],
    output: &Slot,
    alphabet: &Alphabet,
) -> Result<Vec<Production>, McfgError> {
    let per_input: Vec<Vec<Pattern>> = inputs.iter().map(|s| possible_patterns(&s.boundary)).collect();
    let mut vars = BTreeSet::new();
    for (i, pats) in per_input.iter().enumerate() {
        let k = pats.first().map_or(0, Pattern::arity);
        for j in 1..=k {
            let v = format!("x_{}_{}", i + 1, j);
            if alphabet.contains(&token(&v)) {
                return Err(McfgError::VariableClash(v));
            }
            vars.insert(v);
        }
    }
    let mut out = Vec::new();
    let mut choice: Vec<usize> = vec![0; inputs.len()];
    if per_input.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let mut input = Multiword::empty();
        let mut body = Vec::new();
        for (i, &c) in choice.iter().enumerate() {
            let pat = &per_input[i][c];
            let names: Vec<String> = (1..=pat.arity()).map(|j| format!("x_{}_{}", i + 1, j)).collect();
            let labels: Vec<Word> = names.iter().map(|v| Word::single(token(v))).collect();
            input = input.tensor(&pat.labeled(&labels));
            body.push(Predicate {
                name: pattern_name(&inputs[i], pat),
                vars: names,
            });
        }
        let result = Cowordism::closed(input)
            .compose(sigma)
            .expect("input boundaries match the domain");
        if result.is_regular() {
            let pat = pattern_of(result.body())?;
            let head_args = pat
                .pairs
                .iter()
                .map(|&(s, _)| {
                    let e = result.body().edge_from(s).expect("edge at source");
                    e.label
                        .tokens()
                        .iter()
                        .map(|t| {
                            if vars.contains(t.as_str()) {
                                Symbol::Var(t.as_str().to_string())
                            } else {
                                Symbol::Token(t.clone())
                            }
                        })
                        .collect()
                })
                .collect();
            out.push(Production {
                head: pattern_name(output, &pat),
                head_args,
                body,
            });
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < per_input[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn literal_slot(g: &Llg, f: &Formula) -> Result<Slot, McfgError> {
    let name = match f {
        Formula::Pos(a) => a.clone(),
        Formula::Neg(a) => format!("~{a}"),
        _ => unreachable!("flat sequent"),
    };
    Ok(Slot {
        name,
        boundary: interpret_formula(&g.lexicon.atoms, f).map_err(LlgError::from)?,
    })
}

/// The MCFG over nonterminals `A^π` for literals `A` and patterns `π` of `ξ(A)`.
/// Each flat axiom `⊢A1…An` contributes, for every pivot `i`, the productions of
/// the rotation `A(i+1)…An A1…A(i−1) ⊢ Ai` read as a cowordism into `ξ(Ai)`.
pub fn llg_to_mcfg(g: &Llg) -> Result<Mcfg, McfgError> {
    validate_llg(g)?;
    if let Some(ax) = g.lexicon.axioms.iter().find(|a| a.sequent.iter().any(Formula::contains_times)) {
        return Err(McfgError::Tensor(ax.name.clone()));
    }
    let flat = flatten_par(g)?;
    let mut productions: BTreeSet<Production> = BTreeSet::new();
    let mut nonterminals = BTreeMap::new();
    for ax in &flat.lexicon.axioms {
        let n = ax.sequent.len();
        let slots: Vec<Slot> = ax.sequent.iter().map(|f| literal_slot(&flat, f)).collect::<Result<_, _>>()?;
        let sizes: Vec<usize> = slots.iter().map(|s| s.boundary.cardinality()).collect();
        for pivot in 0..n {
            let mut order: Vec<usize> = (pivot + 1..n).chain(0..pivot).collect();
            let prefix = order.clone();
            order.push(pivot);
            let body = ax.body.permute_blocks(&sizes, &order);
            let dom = prefix
                .iter()
                .fold(Boundary::unit(), |acc, &k| acc.tensor(&slots[k].boundary))
                .dual();
            let sigma = Cowordism::new(dom, slots[pivot].boundary.clone(), body)
                .expect("rotated body matches");
            let inputs: Vec<Slot> = prefix
                .iter()
                .rev()
                .map(|&k| literal_slot(&flat, &ax.sequent[k].negate()))
                .collect::<Result<_, _>>()?;
            for p in prod_of_cowordism(&sigma, &inputs, &slots[pivot], &g.alphabet)? {
                nonterminals.insert(p.head.clone(), p.head_args.len());
                for b in &p.body {
                    nonterminals.insert(b.name.clone(), b.vars.len());
                }
                productions.insert(p);
            }
        }
    }
    let s = literal_slot(&flat, &flat.initial_formula())?;
    let initial = format!("{}^0", s.name);
    nonterminals.insert(initial.clone(), 1);
    Ok(Mcfg {
        alphabet: g.alphabet.clone(),
        nonterminals,
        productions: productions.into_iter().collect(),
        initial,
    })
}

/// A small random MCFG: initial `S/1` plus up to two nonterminals of arity 1 or 2,
/// at most six productions, each with at most two premises.
pub fn random_mcfg(rng: &mut impl Rng, alphabet: &Alphabet) -> Mcfg {
    let mut nonterminals = BTreeMap::from([("S".to_string(), 1usize)]);
    for name in ["A", "B"].iter().take(rng.gen_range(0..=2)) {
        nonterminals.insert(name.to_string(), rng.gen_range(1..=2));
    }
    let names: Vec<String> = nonterminals.keys().cloned().collect();
    let tokens: Vec<Token> = alphabet.tokens().cloned().collect();
    let count = rng.gen_range(1..=6);
    let mut productions = Vec::new();
    for _ in 0..count {
        let head = names[rng.gen_range(0..names.len())].clone();
        let premises = if productions.is_empty() { 0 } else { rng.gen_range(0..=2) };
        let mut body = Vec::new();
        let mut symbols: Vec<Symbol> = Vec::new();
        for j in 0..premises {
            let name = names[rng.gen_range(0..names.len())].clone();
            let vars: Vec<String> = (0..nonterminals[&name]).map(|i| format!("v{j}{i}")).collect();
            symbols.extend(vars.iter().cloned().map(Symbol::Var));
            body.push(Predicate { name, vars });
        }
        for _ in 0..rng.gen_range(0..=2) {
            symbols.push(Symbol::Token(tokens[rng.gen_range(0..tokens.len())].clone()));
        }
        // shuffle, then cut into the head's arguments
        for i in (1..symbols.len()).rev() {
            symbols.swap(i, rng.gen_range(0..=i));
        }
        let k = nonterminals[&head];
        let mut head_args = vec![Vec::new(); k];
        for s in symbols {
            head_args[rng.gen_range(0..k)].push(s);
        }
        productions.push(Production {
            head,
            head_args,
            body,
        });
    }
    Mcfg {
        alphabet: alphabet.clone(),
        nonterminals,
        productions,
        initial: "S".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Symbol {
        Symbol::Var(x.into())
    }

    fn t(x: &str) -> Symbol {
        Symbol::Token(token(x))
    }

    fn pred(name: &str, vars: &[&str]) -> Predicate {
        Predicate {
            name: name.into(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn copy_grammar() -> Mcfg {
        Mcfg {
            alphabet: Alphabet::new(["a", "b"]).unwrap().with_separator(""),
            nonterminals: BTreeMap::from([("P".into(), 2), ("S".into(), 1)]),
            productions: vec![
                Production {
                    head: "P".into(),
                    head_args: vec![vec![], vec![]],
                    body: vec![],
                },
                Production {
                    head: "P".into(),
                    head_args: vec![vec![v("x"), t("a")], vec![v("y"), t("a")]],
                    body: vec![pred("P", &["x", "y"])],
                },
                Production {
                    head: "S".into(),
                    head_args: vec![vec![v("x"), v("y")]],
                    body: vec![pred("P", &["x", "y"])],
                },
            ],
            initial: "S".into(),
        }
    }

    #[test]
    fn fixpoint() {
        let g = copy_grammar();
        validate_mcfg(&g).unwrap();
        let words: Vec<String> = mcfg_language(&g, 4).iter().map(Word::to_text).collect();
        assert_eq!(words, vec!["eps", "a a", "a a a a"]);
    }

    #[test]
    fn patterns() {
        assert_eq!(possible_patterns(&Boundary::new(2, &[2]).unwrap()).len(), 1);
        assert_eq!(possible_patterns(&Boundary::new(4, &[2, 4]).unwrap()).len(), 2);
        assert_eq!(possible_patterns(&Boundary::new(3, &[2]).unwrap()).len(), 0);
        let m = Multiword::new(
            Boundary::new(4, &[1, 3]).unwrap(),
            vec![Edge::new(3, Word::parse("c"), 4), Edge::new(1, Word::parse("a b"), 2)],
            vec![],
        )
        .unwrap();
        assert_eq!(pattern_of(&m).unwrap().pairs, vec![(1, 2), (3, 4)]);
        assert!(pattern_of(&m.with_cycle(Word::parse("a"))).is_err());
    }

    #[test]
    fn round_trip_preserves_language() {
        let g = copy_grammar();
        let llg = mcfg_to_llg(&g);
        validate_llg(&llg).unwrap();
        let back = llg_to_mcfg(&llg).unwrap();
        validate_mcfg(&back).unwrap();
        for b in 0..=6 {
            assert_eq!(mcfg_language(&g, b), mcfg_language(&back, b));
        }
    }

    #[test]
    fn rejects_bad_productions() {
        let mut g = copy_grammar();
        g.productions[2].head_args = vec![vec![v("x")]];
        assert!(validate_mcfg(&g).is_err());
        let mut g = copy_grammar();
        g.productions[1].head_args[0].push(t("c"));
        assert!(validate_mcfg(&g).is_err());
        let mut g = copy_grammar();
        g.initial = "P".into();
        assert!(validate_mcfg(&g).is_err());
    }
}
