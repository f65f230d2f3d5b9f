//! Randomized checks of the category structure on small instances.
//!
//! Every law is an equation between cowordisms built from random parts and is
//! checked with `==`, which compares domain, codomain, edges and cycles.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::acg::{str_type, string_signature, xi0};
use crate::boundary::Boundary;
use crate::cowordism::Cowordism;
use crate::lambda::{beta_normalize, infer, interpret_derivation, Term};
use crate::multiword::{Edge, Multiword};
use crate::word::{Alphabet, CyclicWord, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Law {
    Associativity,
    LeftUnit,
    RightUnit,
    SymmetryInvolution,
    SymmetryNaturality,
    TensorFunctoriality,
    TensorAssociativity,
    DualInvolution,
    DualContravariance,
    SnakeLeft,
    SnakeRight,
}

impl Law {
    pub const ALL: [Law; 11] = [
        Law::Associativity,
        Law::LeftUnit,
        Law::RightUnit,
        Law::SymmetryInvolution,
        Law::SymmetryNaturality,
        Law::TensorFunctoriality,
        Law::TensorAssociativity,
        Law::DualInvolution,
        Law::DualContravariance,
        Law::SnakeLeft,
        Law::SnakeRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Associativity => "associativity",
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::SymmetryInvolution => "symmetry involution",
            Law::SymmetryNaturality => "symmetry naturality",
            Law::TensorFunctoriality => "tensor functoriality",
            Law::TensorAssociativity => "tensor associativity",
            Law::DualInvolution => "dual involution",
            Law::DualContravariance => "dual contravariance",
            Law::SnakeLeft => "snake (A)",
            Law::SnakeRight => "snake (A dual)",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A deliberately broken composition, used to check that the suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// Exchanges the labels of the first two edges of every composite.
    LabelSwap,
}

#[derive(Debug, Clone)]
pub struct LawConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_cardinality: usize,
    pub alphabet_size: usize,
    pub mutant: Option<Mutant>,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: 0,
            cases: 500,
            max_cardinality: 6,
            alphabet_size: 3,
            mutant: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub law: Law,
    pub case: usize,
    pub lhs: Cowordism,
    pub rhs: Cowordism,
    pub inputs: Vec<Cowordism>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} fails at case {}", self.law, self.case)?;
        for (k, c) in self.inputs.iter().enumerate() {
            writeln!(f, "input {}:\n{}", k + 1, c.to_text())?;
        }
        writeln!(f, "left side:\n{}", self.lhs.to_text())?;
        write!(f, "right side:\n{}", self.rhs.to_text())
    }
}

#[derive(Debug, Clone)]
pub struct LawOutcome {
    pub law: Law,
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.counterexample.is_none())
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.outcomes.iter().find_map(|o| o.counterexample.as_ref())
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.counterexample.is_some() { "FAIL" } else { "ok" };
            writeln!(f, "{:<22} {:>6} cases  {}", o.law.name(), o.cases, status)?;
        }
        if let Some(c) = self.first_counterexample() {
            write!(f, "\n{c}")?;
        }
        Ok(())
    }
}

/// The tokens `a`, `b`, `c`, … used for random labels.
pub fn law_alphabet(size: usize) -> Alphabet {
    let names: Vec<String> = (0..size.max(1))
        .map(|k| char::from(b'a' + k as u8).to_string())
        .collect();
    Alphabet::new(names).expect("distinct single letters")
}

/// A random boundary with `cardinality ≤ max` and left count minus right
/// count equal to `balance`. Needs `|balance| ≤ max`.
pub fn random_boundary<R: Rng>(rng: &mut R, max: usize, balance: i64) -> Boundary {
    let lo = balance.unsigned_abs() as usize;
    let sizes: Vec<usize> = (lo..=max.max(lo)).filter(|n| (n - lo) % 2 == 0).collect();
    let n = *sizes.choose(rng).expect("at least |balance|");
    let left = ((n as i64 + balance) / 2) as usize;
    let mut pol: Vec<bool> = (0..n).map(|k| k < left).collect();
    pol.shuffle(rng);
    Boundary::from_polarities(pol)
}

fn random_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_len: usize) -> Word {
    let tokens: Vec<_> = alphabet.tokens().cloned().collect();
    let n = rng.gen_range(0..=max_len);
    Word::from_tokens((0..n).map(|_| tokens.choose(rng).expect("nonempty").clone()).collect())
}

/// A random multiword on a balanced boundary, occasionally with a cycle.
pub fn random_multiword<R: Rng>(rng: &mut R, boundary: &Boundary, alphabet: &Alphabet) -> Multiword {
    let n = boundary.cardinality();
    let sources: Vec<usize> = (1..=n).filter(|&i| boundary.is_left(i)).collect();
    let mut targets: Vec<usize> = (1..=n).filter(|&i| boundary.is_right(i)).collect();
    assert_eq!(sources.len(), targets.len(), "boundary must be balanced");
    targets.shuffle(rng);
    let edges = sources
        .into_iter()
        .zip(targets)
        .map(|(s, t)| Edge::new(s, random_word(rng, alphabet, 2), t))
        .collect();
    let mut singular = Vec::new();
    if rng.gen_bool(0.15) {
        let mut w = random_word(rng, alphabet, 2);
        if w.is_empty() {
            w = random_word(rng, alphabet, 0);
        }
        singular.push(CyclicWord::new(w));
    }
    Multiword::new(boundary.clone(), edges, singular).expect("perfect matching by construction")
}

pub fn random_cowordism<R: Rng>(
    rng: &mut R,
    dom: &Boundary,
    cod: &Boundary,
    alphabet: &Alphabet,
) -> Cowordism {
    let body = random_multiword(rng, &dom.dual().tensor(cod), alphabet);
    Cowordism::new(dom.clone(), cod.clone(), body).expect("boundary matches")
}

struct Suite {
    rng: ChaCha8Rng,
    cfg: LawConfig,
    alphabet: Alphabet,
}

impl Suite {
    fn compose(&self, a: &Cowordism, b: &Cowordism) -> Cowordism {
        let c = a.compose(b).expect("composable by construction");
        match self.cfg.mutant {
            None => c,
            Some(Mutant::LabelSwap) => swap_first_labels(&c),
        }
    }

    fn boundaries(&mut self, k: usize) -> Vec<Boundary> {
        let max = self.cfg.max_cardinality as i64;
        let balance = self.rng.gen_range(-max..=max) / 2;
        (0..k)
            .map(|_| random_boundary(&mut self.rng, self.cfg.max_cardinality, balance))
            .collect()
    }

    fn arrow(&mut self, x: &Boundary, y: &Boundary) -> Cowordism {
        random_cowordism(&mut self.rng, x, y, &self.alphabet)
    }

    /// Small boundaries for laws whose sides grow with the sum of several.
    fn half(&mut self) -> usize {
        (self.cfg.max_cardinality / 2).max(1)
    }

    fn case(&mut self, law: Law) -> (Cowordism, Cowordism, Vec<Cowordism>) {
        match law {
            Law::Associativity => {
                let b = self.boundaries(4);
                let (s, t, r) = (self.arrow(&b[0], &b[1]), self.arrow(&b[1], &b[2]), self.arrow(&b[2], &b[3]));
                let lhs = self.compose(&self.compose(&s, &t), &r);
                let rhs = self.compose(&s, &self.compose(&t, &r));
                (lhs, rhs, vec![s, t, r])
            }
            Law::LeftUnit => {
                let b = self.boundaries(2);
                let s = self.arrow(&b[0], &b[1]);
                (self.compose(&Cowordism::identity(&b[0]), &s), s.clone(), vec![s])
            }
            Law::RightUnit => {
                let b = self.boundaries(2);
                let s = self.arrow(&b[0], &b[1]);
                (self.compose(&s, &Cowordism::identity(&b[1])), s.clone(), vec![s])
            }
            Law::SymmetryInvolution => {
                let b = self.boundaries(2);
                let there = Cowordism::symmetry(&b[0], &b[1]);
                let back = Cowordism::symmetry(&b[1], &b[0]);
                let lhs = self.compose(&there, &back);
                (lhs, Cowordism::identity(&b[0].tensor(&b[1])), vec![])
            }
            Law::SymmetryNaturality => {
                let h = self.half();
                let b = self.boundaries_with(h, 2);
                let c = self.boundaries_with(h, 2);
                let sigma = self.arrow(&b[0], &b[1]);
                let tau = self.arrow(&c[0], &c[1]);
                let lhs = self.compose(&sigma.tensor(&tau), &Cowordism::symmetry(&b[1], &c[1]));
                let rhs = self.compose(&Cowordism::symmetry(&b[0], &c[0]), &tau.tensor(&sigma));
                (lhs, rhs, vec![sigma, tau])
            }
            Law::TensorFunctoriality => {
                let h = self.half();
                let b = self.boundaries_with(h, 3);
                let c = self.boundaries_with(h, 3);
                let (s1, s2) = (self.arrow(&b[0], &b[1]), self.arrow(&b[1], &b[2]));
                let (t1, t2) = (self.arrow(&c[0], &c[1]), self.arrow(&c[1], &c[2]));
                let lhs = self.compose(&s1.tensor(&t1), &s2.tensor(&t2));
                let rhs = self.compose(&s1, &s2).tensor(&self.compose(&t1, &t2));
                (lhs, rhs, vec![s1, s2, t1, t2])
            }
            Law::TensorAssociativity => {
                let h = self.half();
                let mut parts = Vec::new();
                for _ in 0..3 {
                    let b = self.boundaries_with(h, 2);
                    parts.push(self.arrow(&b[0], &b[1]));
                }
                let lhs = parts[0].tensor(&parts[1]).tensor(&parts[2]);
                let rhs = parts[0].tensor(&parts[1].tensor(&parts[2]));
                (lhs, rhs, parts)
            }
            Law::DualInvolution => {
                let b = self.boundaries(2);
                let s = self.arrow(&b[0], &b[1]);
                (s.dual().dual(), s.clone(), vec![s])
            }
            Law::DualContravariance => {
                let b = self.boundaries(3);
                let (s, t) = (self.arrow(&b[0], &b[1]), self.arrow(&b[1], &b[2]));
                let lhs = self.compose(&s, &t).dual();
                let rhs = self.compose(&t.dual(), &s.dual());
                (lhs, rhs, vec![s, t])
            }
            Law::SnakeLeft => {
                let a = self.any_boundary();
                let id = Cowordism::identity(&a);
                let lhs = self.compose(
                    &id.tensor(&Cowordism::unit_of(&a)),
                    &Cowordism::counit(&a).tensor(&id),
                );
                (lhs, id, vec![])
            }
            Law::SnakeRight => {
                let a = self.any_boundary();
                let id = Cowordism::identity(&a.dual());
                let lhs = self.compose(
                    &Cowordism::unit_of(&a).tensor(&id),
                    &id.tensor(&Cowordism::counit(&a)),
                );
                (lhs, id, vec![])
            }
        }
    }

    fn boundaries_with(&mut self, max: usize, k: usize) -> Vec<Boundary> {
        let m = max as i64;
        let balance = self.rng.gen_range(-m..=m) / 2;
        (0..k).map(|_| random_boundary(&mut self.rng, max, balance)).collect()
    }

    fn any_boundary(&mut self) -> Boundary {
        let n = self.rng.gen_range(0..=self.cfg.max_cardinality);
        Boundary::from_polarities((0..n).map(|_| self.rng.gen_bool(0.5)).collect())
    }
}

fn swap_first_labels(c: &Cowordism) -> Cowordism {
    let body = c.body();
    let edges = body.edges();
    if edges.len() < 2 {
        return c.clone();
    }
    let mut swapped = edges.to_vec();
    let l0 = swapped[0].label.clone();
    swapped[0].label = swapped[1].label.clone();
    swapped[1].label = l0;
    let m = Multiword::new(body.boundary().clone(), swapped, body.singular().to_vec())
        .expect("labels do not affect validity");
    Cowordism::new(c.dom().clone(), c.cod().clone(), m).expect("same boundary")
}

/// Runs every law for `cfg.cases` random instances, stopping each law at its
/// first counterexample. The same configuration always gives the same report.
pub fn run_laws(cfg: &LawConfig) -> LawReport {
    let mut suite = Suite {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg: cfg.clone(),
        alphabet: law_alphabet(cfg.alphabet_size),
    };
    let mut outcomes = Vec::new();
    for law in Law::ALL {
        let mut counterexample = None;
        let mut done = 0;
        for case in 0..cfg.cases {
            let (lhs, rhs, inputs) = suite.case(law);
            done += 1;
            if lhs != rhs {
                counterexample = Some(Counterexample {
                    law,
                    case,
                    lhs,
                    rhs,
                    inputs,
                });
                break;
            }
        }
        outcomes.push(LawOutcome {
            law,
            cases: done,
            counterexample,
        });
    }
    LawReport { outcomes }
}

/// A random closed linear term of type `O -> O` over the string signature,
/// obtained from a word by random η- and β-expansions, so it usually holds
/// redexes at several types.
pub fn random_string_term<R: Rng>(rng: &mut R, alphabet: &Alphabet, steps: usize) -> Term {
    let w = random_word(rng, alphabet, 4);
    let mut t = crate::acg::rho(&w);
    let mut fresh = 0usize;
    for _ in 0..steps {
        let positions = subterm_paths(&t);
        let path = positions.choose(rng).expect("the root is a subterm").clone();
        let s = subterm(&t, &path).clone();
        fresh += 1;
        let y = format!("r{fresh}");
        let expanded = match (rng.gen_range(0..3), &s) {
            // η: a constant c becomes λy. c y
            (0, Term::Const(_)) => Term::lam(&y, Term::app(s.clone(), Term::var(&y))),
            // β around an enclosing subterm: D[s] becomes (λy. D[y]) s
            (1, _) if path.len() >= 2 => {
                let cut = rng.gen_range(0..path.len());
                let outer = &path[..cut];
                let inner = &path[cut..];
                if binds_free_of(&t, outer, inner) {
                    continue;
                }
                let d = subterm(&t, outer).clone();
                let abstracted = replace(&d, inner, Term::var(&y));
                let redex = Term::app(Term::lam(&y, abstracted), s.clone());
                t = replace(&t, outer, redex);
                continue;
            }
            _ => Term::app(Term::lam(&y, Term::var(&y)), s.clone()),
        };
        t = replace(&t, &path, expanded);
    }
    t
}

/// Child indices: 0 = function or body, 1 = argument.
fn subterm_paths(t: &Term) -> Vec<Vec<u8>> {
    fn go(t: &Term, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        out.push(cur.clone());
        match t {
            Term::App(f, a) => {
                cur.push(0);
                go(f, cur, out);
                cur.pop();
                cur.push(1);
                go(a, cur, out);
                cur.pop();
            }
            Term::Lam(_, b) => {
                cur.push(0);
                go(b, cur, out);
                cur.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn subterm<'a>(t: &'a Term, path: &[u8]) -> &'a Term {
    match (t, path.split_first()) {
        (_, None) => t,
        (Term::App(f, _), Some((0, rest))) => subterm(f, rest),
        (Term::App(_, a), Some((1, rest))) => subterm(a, rest),
        (Term::Lam(_, b), Some((0, rest))) => subterm(b, rest),
        _ => unreachable!("path inside the term"),
    }
}

fn replace(t: &Term, path: &[u8], new: Term) -> Term {
    match (t, path.split_first()) {
        (_, None) => new,
        (Term::App(f, a), Some((0, rest))) => Term::app(replace(f, rest, new), (**a).clone()),
        (Term::App(f, a), Some((1, rest))) => Term::app((**f).clone(), replace(a, rest, new)),
        (Term::Lam(x, b), Some((0, rest))) => Term::lam(x, replace(b, rest, new)),
        _ => unreachable!("path inside the term"),
    }
}

/// Whether a binder on the way from `outer` to `outer ++ inner` binds a
/// variable of the subterm there, which would escape its scope when moved.
fn binds_free_of(t: &Term, outer: &[u8], inner: &[u8]) -> bool {
    let target = subterm(t, &[outer, inner].concat());
    let free = crate::lambda::free_variables(target);
    let mut cur = subterm(t, outer);
    for &step in inner {
        match (cur, step) {
            (Term::Lam(x, b), _) => {
                if free.contains_key(x) {
                    return true;
                }
                cur = b;
            }
            (Term::App(f, _), 0) => cur = f,
            (Term::App(_, a), _) => cur = a,
            _ => unreachable!("path inside the term"),
        }
    }
    false
}

/// Interprets a closed string term before and after β-normalization.
pub fn beta_eta_sides(alphabet: &Alphabet, t: &Term) -> Result<(Cowordism, Cowordism), String> {
    let sig = string_signature(alphabet);
    let xi = xi0(alphabet);
    let ty = str_type();
    let before = infer(&sig, &[], t, Some(&ty)).map_err(|e| e.to_string())?;
    let normal = beta_normalize(t).map_err(|e| e.to_string())?;
    let after = infer(&sig, &[], &normal, Some(&ty)).map_err(|e| e.to_string())?;
    Ok((
        interpret_derivation(&xi, &before).map_err(|e| e.to_string())?,
        interpret_derivation(&xi, &after).map_err(|e| e.to_string())?,
    ))
}
