//! Multiplicative linear logic: formulas, sequent proofs and their cowordism semantics.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::boundary::Boundary;
use crate::cowordism::{CategoryError, Cowordism};
use crate::multiword::Multiword;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pos(String),
    Neg(String),
    Times(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn pos(a: &str) -> Formula {
        Formula::Pos(a.to_string())
    }

    pub fn neg(a: &str) -> Formula {
        Formula::Neg(a.to_string())
    }

    pub fn times(a: Formula, b: Formula) -> Formula {
        Formula::Times(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    /// `(p⊥)⊥ = p`, `(A⊗B)⊥ = B⊥⅋A⊥`, `(A⅋B)⊥ = B⊥⊗A⊥`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Pos(a) => Formula::Neg(a.clone()),
            Formula::Neg(a) => Formula::Pos(a.clone()),
            Formula::Times(a, b) => Formula::par(b.negate(), a.negate()),
            Formula::Par(a, b) => Formula::times(b.negate(), a.negate()),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Pos(_) | Formula::Neg(_))
    }

    pub fn contains_times(&self) -> bool {
        match self {
            Formula::Pos(_) | Formula::Neg(_) => false,
            Formula::Times(..) => true,
            Formula::Par(a, b) => a.contains_times() || b.contains_times(),
        }
    }

    /// Splits top-level pars, left to right.
    pub fn par_components(&self) -> Vec<Formula> {
        match self {
            Formula::Par(a, b) => {
                let mut v = a.par_components();
                v.extend(b.par_components());
                v
            }
            _ => vec![self.clone()],
        }
    }

    pub fn atoms(&self) -> Vec<&str> {
        match self {
            Formula::Pos(a) | Formula::Neg(a) => vec![a.as_str()],
            Formula::Times(a, b) | Formula::Par(a, b) => {
                let mut v = a.atoms();
                v.extend(b.atoms());
                v
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, x: &Formula| {
            if x.is_literal() {
                write!(f, "{x}")
            } else {
                write!(f, "({x})")
            }
        };
        match self {
            Formula::Pos(a) => f.write_str(a),
            Formula::Neg(a) => write!(f, "~{a}"),
            Formula::Times(a, b) => {
                sub(f, a)?;
                f.write_str(" * ")?;
                sub(f, b)
            }
            Formula::Par(a, b) => {
                sub(f, a)?;
                f.write_str(" | ")?;
                sub(f, b)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn sequent_to_string(gamma: &[Formula]) -> String {
    gamma
        .iter()
        .map(Formula::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaSyntaxError {
    #[error("unexpected `{found}` in formula `{input}`")]
    Unexpected { found: String, input: String },
    #[error("unexpected end of formula `{0}`")]
    Eof(String),
}

/// Parses `p`, `~p`, `A * B`, `A | B` with parentheses. `*` binds tighter
/// than `|`; both associate to the right. `~` applies to atoms only.
pub fn parse_formula(s: &str) -> Result<Formula, FormulaSyntaxError> {
    let toks = lex_formula(s);
    let mut pos = 0;
    let f = parse_par(&toks, &mut pos, s)?;
    if pos < toks.len() {
        return Err(FormulaSyntaxError::Unexpected {
            found: toks[pos].clone(),
            input: s.to_string(),
        });
    }
    Ok(f)
}

/// Parses a comma-separated sequent. An empty string is the empty sequent.
pub fn parse_sequent(s: &str) -> Result<Vec<Formula>, FormulaSyntaxError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_formula(&s[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(parse_formula(&s[start..])?);
    Ok(out)
}

fn lex_formula(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        if c.is_whitespace() || "()*|~".contains(c) {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_par(t: &[String], pos: &mut usize, input: &str) -> Result<Formula, FormulaSyntaxError> {
    let left = parse_times(t, pos, input)?;
    if t.get(*pos).map(String::as_str) == Some("|") {
        *pos += 1;
        return Ok(Formula::par(left, parse_par(t, pos, input)?));
    }
    Ok(left)
}

fn parse_times(t: &[String], pos: &mut usize, input: &str) -> Result<Formula, FormulaSyntaxError> {
    let left = parse_unit(t, pos, input)?;
    if t.get(*pos).map(String::as_str) == Some("*") {
        *pos += 1;
        return Ok(Formula::times(left, parse_times(t, pos, input)?));
    }
    Ok(left)
}

fn parse_unit(t: &[String], pos: &mut usize, input: &str) -> Result<Formula, FormulaSyntaxError> {
    let tok = t
        .get(*pos)
        .ok_or_else(|| FormulaSyntaxError::Eof(input.to_string()))?;
    *pos += 1;
    let unexpected = |found: &str| FormulaSyntaxError::Unexpected {
        found: found.to_string(),
        input: input.to_string(),
    };
    match tok.as_str() {
        "(" => {
            let f = parse_par(t, pos, input)?;
            match t.get(*pos).map(String::as_str) {
                Some(")") => {
                    *pos += 1;
                    Ok(f)
                }
                Some(other) => Err(unexpected(other)),
                None => Err(FormulaSyntaxError::Eof(input.to_string())),
            }
        }
        "~" => {
            let a = t
                .get(*pos)
                .ok_or_else(|| FormulaSyntaxError::Eof(input.to_string()))?;
            if "()*|~".contains(a.as_str()) {
                return Err(unexpected(a));
            }
            *pos += 1;
            Ok(Formula::neg(a))
        }
        ")" | "*" | "|" => Err(unexpected(tok)),
        a => Ok(Formula::pos(a)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretError {
    #[error("atom `{0}` has no boundary")]
    UnmappedAtom(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("proof does not check: {0}")]
    Invalid(#[from] ProofViolation),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// `ξ(A⊗B) = ξ(A⅋B) = ξ(A)⊗ξ(B)` and `ξ(p⊥) = ξ(p)⊥`.
pub fn interpret_formula(
    atoms: &BTreeMap<String, Boundary>,
    a: &Formula,
) -> Result<Boundary, InterpretError> {
    match a {
        Formula::Pos(p) => atoms
            .get(p)
            .cloned()
            .ok_or_else(|| InterpretError::UnmappedAtom(p.clone())),
        Formula::Neg(p) => Ok(interpret_formula(atoms, &Formula::pos(p))?.dual()),
        Formula::Times(x, y) | Formula::Par(x, y) => {
            Ok(interpret_formula(atoms, x)?.tensor(&interpret_formula(atoms, y)?))
        }
    }
}

pub fn interpret_sequent(
    atoms: &BTreeMap<String, Boundary>,
    gamma: &[Formula],
) -> Result<Boundary, InterpretError> {
    gamma.iter().try_fold(Boundary::unit(), |acc, a| {
        Ok(acc.tensor(&interpret_formula(atoms, a)?))
    })
}

/// A named cowordism typing judgement `M / ⊢Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomEntry {
    pub name: String,
    pub sequent: Vec<Formula>,
    pub body: Multiword,
}

/// Atom boundaries plus named axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub atoms: BTreeMap<String, Boundary>,
    pub axioms: Vec<AxiomEntry>,
}

impl Lexicon {
    pub fn axiom(&self, name: &str) -> Option<&AxiomEntry> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MllRule {
    Id,
    /// Cuts the last formula of the first premise against the first formula of the second.
    Cut,
    /// Swaps the formulas at `index` and `index + 1`.
    Ex {
        index: usize,
    },
    /// Joins the last two formulas.
    Par,
    /// Joins the last formula of the first premise with the first formula of the second.
    Times,
    Axiom(String),
}

impl fmt::Display for MllRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MllRule::Id => f.write_str("Id"),
            MllRule::Cut => f.write_str("Cut"),
            MllRule::Ex { index } => write!(f, "Ex@{index}"),
            MllRule::Par => f.write_str("Par"),
            MllRule::Times => f.write_str("Times"),
            MllRule::Axiom(n) => write!(f, "Axiom {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MllProof {
    pub rule: MllRule,
    pub conclusion: Vec<Formula>,
    pub premises: Vec<Arc<MllProof>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} at {path:?}: {message}")]
pub struct ProofViolation {
    pub path: Vec<usize>,
    pub rule: MllRule,
    pub message: String,
}

impl MllProof {
    pub fn id(x: Formula) -> MllProof {
        MllProof {
            rule: MllRule::Id,
            conclusion: vec![x.negate(), x],
            premises: vec![],
        }
    }

    pub fn axiom(entry: &AxiomEntry) -> MllProof {
        MllProof {
            rule: MllRule::Axiom(entry.name.clone()),
            conclusion: entry.sequent.clone(),
            premises: vec![],
        }
    }

    /// Returns `None` when the cut formulas do not match.
    pub fn cut(left: Arc<MllProof>, right: Arc<MllProof>) -> Option<MllProof> {
        let (x, gamma) = left.conclusion.split_last()?;
        let (y, delta) = right.conclusion.split_first()?;
        if y != &x.negate() {
            return None;
        }
        let mut conclusion = gamma.to_vec();
        conclusion.extend(delta.iter().cloned());
        Some(MllProof {
            rule: MllRule::Cut,
            conclusion,
            premises: vec![left, right],
        })
    }

    pub fn ex(p: Arc<MllProof>, index: usize) -> Option<MllProof> {
        if index + 1 >= p.conclusion.len() {
            return None;
        }
        let mut conclusion = p.conclusion.clone();
        conclusion.swap(index, index + 1);
        Some(MllProof {
            rule: MllRule::Ex { index },
            conclusion,
            premises: vec![p],
        })
    }

    pub fn par(p: Arc<MllProof>) -> Option<MllProof> {
        let n = p.conclusion.len();
        if n < 2 {
            return None;
        }
        let mut conclusion = p.conclusion[..n - 2].to_vec();
        conclusion.push(Formula::par(
            p.conclusion[n - 2].clone(),
            p.conclusion[n - 1].clone(),
        ));
        Some(MllProof {
            rule: MllRule::Par,
            conclusion,
            premises: vec![p],
        })
    }

    pub fn times(left: Arc<MllProof>, right: Arc<MllProof>) -> Option<MllProof> {
        let (x, gamma) = left.conclusion.split_last()?;
        let (y, delta) = right.conclusion.split_first()?;
        let mut conclusion = gamma.to_vec();
        conclusion.push(Formula::times(x.clone(), y.clone()));
        conclusion.extend(delta.iter().cloned());
        Some(MllProof {
            rule: MllRule::Times,
            conclusion,
            premises: vec![left, right],
        })
    }

    /// Moves the formula at `from` to position `to` by adjacent exchanges.
    pub fn move_formula(p: Arc<MllProof>, from: usize, to: usize) -> Arc<MllProof> {
        let mut cur = p;
        let mut at = from;
        while at < to {
            cur = Arc::new(MllProof::ex(cur, at).expect("index in range"));
            at += 1;
        }
        while at > to {
            cur = Arc::new(MllProof::ex(cur, at - 1).expect("index in range"));
            at -= 1;
        }
        cur
    }

    /// Realizes an arbitrary reordering: the result's formula `k` is the
    /// premise's formula `order[k]`.
    pub fn permute(p: Arc<MllProof>, order: &[usize]) -> Arc<MllProof> {
        let mut current: Vec<usize> = (0..order.len()).collect();
        let mut cur = p;
        for (k, &want) in order.iter().enumerate() {
            let at = current.iter().position(|&x| x == want).expect("permutation");
            cur = MllProof::move_formula(cur, at, k);
            let v = current.remove(at);
            current.insert(k, v);
        }
        cur
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Number of Id, Cut and Axiom nodes.
    pub fn logical_size(&self) -> usize {
        let own = matches!(self.rule, MllRule::Id | MllRule::Cut | MllRule::Axiom(_)) as usize;
        own + self.premises.iter().map(|p| p.logical_size()).sum::<usize>()
    }

    /// Indented rendering, conclusion first.
    pub fn render(&self) -> String {
        let mut out = String::new();
        fn go(p: &MllProof, depth: usize, out: &mut String) {
            out.push_str(&format!(
                "{}|- {}   [{}]\n",
                "  ".repeat(depth),
                sequent_to_string(&p.conclusion),
                p.rule
            ));
            for q in &p.premises {
                go(q, depth + 1, out);
            }
        }
        go(self, 0, &mut out);
        out
    }
}

pub fn check_proof(pf: &MllProof, lexicon: &Lexicon) -> Result<(), ProofViolation> {
    check_node(pf, lexicon, &mut Vec::new())
}

fn check_node(pf: &MllProof, lex: &Lexicon, path: &mut Vec<usize>) -> Result<(), ProofViolation> {
    let fail = |m: &str| ProofViolation {
        path: path.clone(),
        rule: pf.rule.clone(),
        message: m.to_string(),
    };
    let arity = match pf.rule {
        MllRule::Id | MllRule::Axiom(_) => 0,
        MllRule::Ex { .. } | MllRule::Par => 1,
        MllRule::Cut | MllRule::Times => 2,
    };
    if pf.premises.len() != arity {
        return Err(fail("wrong number of premises"));
    }
    let expected = match &pf.rule {
        MllRule::Id => match pf.conclusion.as_slice() {
            [a, b] if a == &b.negate() => None,
            _ => return Err(fail("expected |- X~, X")),
        },
        MllRule::Axiom(name) => {
            let entry = lex
                .axiom(name)
                .ok_or_else(|| fail("axiom is not in the lexicon"))?;
            Some(entry.sequent.clone())
        }
        MllRule::Cut => Some(
            MllProof::cut(pf.premises[0].clone(), pf.premises[1].clone())
                .ok_or_else(|| fail("cut formulas are not dual"))?
                .conclusion,
        ),
        MllRule::Ex { index } => Some(
            MllProof::ex(pf.premises[0].clone(), *index)
                .ok_or_else(|| fail("exchange index out of range"))?
                .conclusion,
        ),
        MllRule::Par => Some(
            MllProof::par(pf.premises[0].clone())
                .ok_or_else(|| fail("par needs two formulas"))?
                .conclusion,
        ),
        MllRule::Times => Some(
            MllProof::times(pf.premises[0].clone(), pf.premises[1].clone())
                .ok_or_else(|| fail("times needs non-empty premises"))?
                .conclusion,
        ),
    };
    if let Some(e) = expected {
        if e != pf.conclusion {
            return Err(fail(&format!(
                "conclusion should be |- {}",
                sequent_to_string(&e)
            )));
        }
    }
    for (k, p) in pf.premises.iter().enumerate() {
        path.push(k);
        check_node(p, lex, path)?;
        path.pop();
    }
    Ok(())
}

fn formula_sizes(
    atoms: &BTreeMap<String, Boundary>,
    gamma: &[Formula],
) -> Result<Vec<usize>, InterpretError> {
    gamma
        .iter()
        .map(|a| Ok(interpret_formula(atoms, a)?.cardinality()))
        .collect()
}

/// The closed cowordism `1 → ξ(Γ)` of a proof of `⊢Γ`.
pub fn interpret_proof(lex: &Lexicon, pf: &MllProof) -> Result<Cowordism, InterpretError> {
    check_proof(pf, lex)?;
    Ok(Cowordism::closed(interpret_body(lex, pf)?))
}

fn interpret_body(lex: &Lexicon, pf: &MllProof) -> Result<Multiword, InterpretError> {
    let atoms = &lex.atoms;
    match &pf.rule {
        MllRule::Id => {
            let x = interpret_formula(atoms, &pf.conclusion[1])?;
            Ok(Cowordism::identity(&x).into_body())
        }
        MllRule::Axiom(name) => {
            let entry = lex
                .axiom(name)
                .ok_or_else(|| InterpretError::UnknownAxiom(name.clone()))?;
            Ok(entry.body.clone())
        }
        MllRule::Cut => {
            let (l, r) = (&pf.premises[0], &pf.premises[1]);
            let x = interpret_formula(atoms, l.conclusion.last().expect("checked"))?;
            let gamma = interpret_sequent(atoms, &l.conclusion[..l.conclusion.len() - 1])?;
            let joined = interpret_body(lex, l)?.tensor(&interpret_body(lex, r)?);
            Ok(joined
                .iterated_contraction(gamma.cardinality(), &x.dual())
                .map_err(CategoryError::from)?)
        }
        MllRule::Ex { index } => {
            let p = &pf.premises[0];
            let sizes = formula_sizes(atoms, &p.conclusion)?;
            let mut order: Vec<usize> = (0..sizes.len()).collect();
            order.swap(*index, index + 1);
            Ok(interpret_body(lex, p)?.permute_blocks(&sizes, &order))
        }
        MllRule::Par => interpret_body(lex, &pf.premises[0]),
        MllRule::Times => Ok(interpret_body(lex, &pf.premises[0])?
            .tensor(&interpret_body(lex, &pf.premises[1])?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiword::Edge;
    use crate::word::Word;

    fn atoms() -> BTreeMap<String, Boundary> {
        BTreeMap::from([
            ("p".to_string(), Boundary::new(1, &[]).unwrap()),
            ("q".to_string(), Boundary::new(2, &[2]).unwrap()),
            ("r".to_string(), Boundary::new(3, &[1]).unwrap()),
        ])
    }

    fn lex() -> Lexicon {
        Lexicon {
            atoms: atoms(),
            axioms: vec![],
        }
    }

    #[test]
    fn negation_unfolds() {
        let p = Formula::pos("p");
        assert_eq!(p.negate(), Formula::neg("p"));
        assert_eq!(p.negate().negate(), p);
        let pq = Formula::times(Formula::pos("p"), Formula::pos("q"));
        assert_eq!(pq.negate(), Formula::par(Formula::neg("q"), Formula::neg("p")));
    }

    #[test]
    fn formula_syntax_round_trips() {
        let f = parse_formula("(~S * NP) | ~NP | S").unwrap();
        assert_eq!(
            f,
            Formula::par(
                Formula::times(Formula::neg("S"), Formula::pos("NP")),
                Formula::par(Formula::neg("NP"), Formula::pos("S"))
            )
        );
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        let seq = parse_sequent("~P, (~Q | S), Q").unwrap();
        assert_eq!(seq.len(), 3);
        assert!(parse_formula("p *").is_err());
        assert!(parse_formula("~(p)").is_err());
    }

    #[test]
    fn formula_interpretation() {
        let a = atoms();
        assert_eq!(
            interpret_formula(&a, &Formula::pos("q")).unwrap(),
            Boundary::new(2, &[2]).unwrap()
        );
        let f = Formula::times(Formula::pos("p"), Formula::par(Formula::pos("q"), Formula::pos("r")));
        assert_eq!(
            interpret_formula(&a, &f).unwrap(),
            a["p"].tensor(&a["q"]).tensor(&a["r"])
        );
        assert_eq!(interpret_sequent(&a, &[]).unwrap(), Boundary::unit());
        assert_eq!(
            interpret_sequent(&a, &[Formula::neg("p"), Formula::pos("p")]).unwrap(),
            Boundary::new(2, &[1]).unwrap()
        );
    }

    #[test]
    fn id_is_a_single_wire() {
        let pf = MllProof::id(Formula::pos("p"));
        assert_eq!(check_proof(&pf, &lex()), Ok(()));
        let c = interpret_proof(&lex(), &pf).unwrap();
        assert_eq!(c.dom(), &Boundary::unit());
        assert_eq!(
            c.body().edges(),
            &[Edge::new(1, Word::empty(), 2)]
        );
    }

    #[test]
    fn cut_of_identities_is_identity() {
        for atom in ["p", "q", "r"] {
            let id = Arc::new(MllProof::id(Formula::pos(atom)));
            let cut = MllProof::cut(id.clone(), id.clone()).unwrap();
            assert_eq!(cut.conclusion, id.conclusion);
            assert_eq!(check_proof(&cut, &lex()), Ok(()));
            assert_eq!(
                interpret_proof(&lex(), &cut).unwrap(),
                interpret_proof(&lex(), &id).unwrap()
            );
        }
    }

    #[test]
    fn par_keeps_the_body() {
        let id = Arc::new(MllProof::id(Formula::pos("q")));
        let par = MllProof::par(id.clone()).unwrap();
        assert_eq!(par.conclusion, vec![Formula::par(Formula::neg("q"), Formula::pos("q"))]);
        assert_eq!(
            interpret_proof(&lex(), &par).unwrap().body(),
            interpret_proof(&lex(), &id).unwrap().body()
        );
    }

    #[test]
    fn ill_formed_times_is_reported() {
        let id = Arc::new(MllProof::id(Formula::pos("p")));
        let mut t = MllProof::times(id.clone(), id.clone()).unwrap();
        t.conclusion.swap(0, 1);
        let err = check_proof(&t, &lex()).unwrap_err();
        assert_eq!(err.rule, MllRule::Times);
    }

    #[test]
    fn ex_is_postcomposition_with_symmetry() {
        let a = atoms();
        let idq = Arc::new(MllProof::id(Formula::pos("q")));
        let idr = Arc::new(MllProof::id(Formula::pos("r")));
        let t = Arc::new(MllProof::times(idq, idr).unwrap());
        // |- ~q, q * ~r, r
        for index in 0..2 {
            let ex = MllProof::ex(t.clone(), index).unwrap();
            let before = interpret_proof(&lex(), &t).unwrap();
            let sizes: Vec<Boundary> = t
                .conclusion
                .iter()
                .map(|f| interpret_formula(&a, f).unwrap())
                .collect();
            let mut post = Cowordism::identity(&Boundary::unit());
            let mut k = 0;
            while k < sizes.len() {
                if k == index {
                    post = post.tensor(&Cowordism::symmetry(&sizes[k], &sizes[k + 1]));
                    k += 2;
                } else {
                    post = post.tensor(&Cowordism::identity(&sizes[k]));
                    k += 1;
                }
            }
            assert_eq!(
                interpret_proof(&lex(), &ex).unwrap(),
                before.compose(&post).unwrap()
            );
        }
    }

    #[test]
    fn permute_realizes_the_order() {
        let idq = Arc::new(MllProof::id(Formula::pos("q")));
        let idr = Arc::new(MllProof::id(Formula::pos("r")));
        let t = Arc::new(MllProof::times(idq, idr).unwrap());
        let p = MllProof::permute(t.clone(), &[2, 0, 1]);
        assert_eq!(
            p.conclusion,
            vec![t.conclusion[2].clone(), t.conclusion[0].clone(), t.conclusion[1].clone()]
        );
        assert_eq!(check_proof(&p, &lex()), Ok(()));
    }
}
