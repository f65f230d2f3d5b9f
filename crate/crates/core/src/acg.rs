//! Abstract categorial grammars over a string signature, their cowordism
//! interpretation and their translation into linear logic grammars.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::boundary::Boundary;
use crate::lambda::{
    beta_normalize, infer, interpret_derivation, interpret_type, Interpretation, LinType,
    SemanticsError, Signature, Term, TypeError,
};
use crate::llg::{language_with, Language, Llg, LlgError, SearchOptions};
use crate::mll::{AxiomEntry, Formula, Lexicon};
use crate::multiword::Multiword;
use crate::word::{token, Alphabet, Word};

/// The only atom of a string signature.
pub const STRING_ATOM: &str = "O";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcgError {
    #[error("{item}: {message}")]
    Invalid { item: String, message: String },
    #[error("term {0} does not denote a string")]
    NotAString(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Llg(#[from] LlgError),
}

/// `O -> O`.
pub fn str_type() -> LinType {
    LinType::imp(LinType::atom(STRING_ATOM), LinType::atom(STRING_ATOM))
}

/// One atom `O` and a constant `c : O -> O` per token.
pub fn string_signature(alphabet: &Alphabet) -> Signature {
    let mut sig = Signature::new();
    sig.add_atom(STRING_ATOM);
    for t in alphabet.tokens() {
        sig.add_constant(t.as_str(), str_type());
    }
    sig
}

/// `a1…an ↦ λx. an (… (a1 x))`.
pub fn rho(w: &Word) -> Term {
    let body = w
        .tokens()
        .iter()
        .fold(Term::var("x"), |acc, t| Term::app(Term::constant(t.as_str()), acc));
    Term::lam("x", body)
}

/// Reads back the word denoted by a closed term of type `O -> O`.
pub fn unrho(alphabet: &Alphabet, t: &Term) -> Result<Word, AcgError> {
    let sig = string_signature(alphabet);
    infer(&sig, &[], t, Some(&str_type()))?;
    let n = beta_normalize(t)?;
    let not_string = || AcgError::NotAString(t.to_string());
    match &n {
        Term::Const(c) => Ok(Word::single(token(c))),
        Term::Lam(x, body) => {
            let mut spine = Vec::new();
            let mut cur = body.as_ref();
            loop {
                match cur {
                    Term::Var(y) if y == x => break,
                    Term::App(f, a) => match f.as_ref() {
                        Term::Const(c) => {
                            spine.push(token(c));
                            cur = a;
                        }
                        _ => return Err(not_string()),
                    },
                    _ => return Err(not_string()),
                }
            }
            spine.reverse();
            Ok(Word::from_tokens(spine))
        }
        _ => Err(not_string()),
    }
}

/// `O ↦ (1,∅)` and `c ↦ [1,c,2]` on `(2,{1})`.
pub fn xi0(alphabet: &Alphabet) -> Interpretation {
    let mut xi = Interpretation::default();
    xi.atoms
        .insert(STRING_ATOM.to_string(), Boundary::new(1, &[]).expect("valid"));
    for t in alphabet.tokens() {
        xi.constants
            .insert(t.as_str().to_string(), Multiword::single_edge(Word::single(t.clone())));
    }
    xi
}

/// A lexicon from an abstract signature into the string signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexiconHom {
    pub types: BTreeMap<String, LinType>,
    pub terms: BTreeMap<String, Term>,
}

impl LexiconHom {
    pub fn map_type(&self, a: &LinType) -> Option<LinType> {
        a.substitute(&|p| self.types.get(p).cloned())
    }

    /// Substitutes lexicon terms for constants, then normalizes.
    pub fn map_term(&self, t: &Term) -> Result<Term, AcgError> {
        for c in t.constants() {
            if !self.terms.contains_key(c) {
                return Err(AcgError::Invalid {
                    item: c.to_string(),
                    message: "constant has no lexicon entry".into(),
                });
            }
        }
        Ok(beta_normalize(&t.map_constants(&|c| self.terms.get(c).cloned()))?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringAcg {
    pub signature: Signature,
    pub alphabet: Alphabet,
    pub lexicon: LexiconHom,
    pub initial: String,
}

impl StringAcg {
    pub fn object_signature(&self) -> Signature {
        string_signature(&self.alphabet)
    }

    /// The word of a closed abstract term.
    pub fn realize(&self, t: &Term) -> Result<Word, AcgError> {
        unrho(&self.alphabet, &self.lexicon.map_term(t)?)
    }
}

pub fn validate_acg(g: &StringAcg) -> Result<(), AcgError> {
    let invalid = |item: &str, message: String| AcgError::Invalid {
        item: item.to_string(),
        message,
    };
    if !g.signature.atoms.contains(&g.initial) {
        return Err(invalid(&g.initial, "initial type is not an atom of the signature".into()));
    }
    for a in &g.signature.atoms {
        let ty = g
            .lexicon
            .types
            .get(a)
            .ok_or_else(|| invalid(a, "atom has no image".into()))?;
        if let Some(bad) = ty.atoms().into_iter().find(|p| *p != STRING_ATOM) {
            return Err(invalid(a, format!("image mentions `{bad}`, not a string atom")));
        }
    }
    let image = g.lexicon.types.get(&g.initial).expect("checked above");
    if image != &str_type() {
        return Err(invalid(&g.initial, format!("initial type maps to {image}, not O -> O")));
    }
    let obj = g.object_signature();
    for (c, ty) in &g.signature.constants {
        let term = g
            .lexicon
            .terms
            .get(c)
            .ok_or_else(|| invalid(c, "constant has no lexicon entry".into()))?;
        for k in term.constants() {
            if obj.type_of(k).is_none() {
                return Err(invalid(c, format!("`{k}` is not a token")));
            }
        }
        let target = g
            .lexicon
            .map_type(ty)
            .ok_or_else(|| invalid(c, format!("type {ty} mentions an unknown atom")))?;
        infer(&obj, &[], term, Some(&target)).map_err(|e| invalid(c, e.to_string()))?;
    }
    Ok(())
}

/// Boundaries of abstract atoms and multiwords of abstract constants,
/// obtained by pulling the string interpretation back through the lexicon.
pub fn acg_interpret(g: &StringAcg) -> Result<Interpretation, AcgError> {
    validate_acg(g)?;
    let xi = xi0(&g.alphabet);
    let obj = g.object_signature();
    let mut out = Interpretation::default();
    for a in &g.signature.atoms {
        out.atoms
            .insert(a.clone(), interpret_type(&xi, &g.lexicon.types[a])?);
    }
    for (c, ty) in &g.signature.constants {
        let target = g.lexicon.map_type(ty).expect("validated");
        let d = infer(&obj, &[], &g.lexicon.terms[c], Some(&target))?;
        out.constants
            .insert(c.clone(), interpret_derivation(&xi, &d)?.into_body());
    }
    Ok(out)
}

/// `p ↦ p` and `A -> B ↦ A⊥ ⅋ B`.
pub fn translate_type(a: &LinType) -> Formula {
    match a {
        LinType::Atom(p) => Formula::pos(p),
        LinType::Imp(a, b) => Formula::par(translate_type(a).negate(), translate_type(b)),
    }
}

/// One axiom `⊢ A⁺` per constant `c : A`, with the interpreted lexicon entry as body.
pub fn acg_to_llg(g: &StringAcg) -> Result<Llg, AcgError> {
    let xi = acg_interpret(g)?;
    let axioms = g
        .signature
        .constants
        .iter()
        .map(|(c, ty)| AxiomEntry {
            name: c.clone(),
            sequent: vec![translate_type(ty)],
            body: xi.constants[c].clone(),
        })
        .collect();
    Ok(Llg {
        alphabet: g.alphabet.clone(),
        lexicon: Lexicon {
            atoms: xi.atoms,
            axioms,
        },
        initial: g.initial.clone(),
    })
}

/// Words of the grammar reachable by linear logic derivations of at most
/// `budget` axiom, identity and cut steps.
pub fn acg_language(g: &StringAcg, opts: &SearchOptions) -> Result<Language, AcgError> {
    Ok(language_with(&acg_to_llg(g)?, opts)?)
}

/// Words of all closed η-long normal abstract terms of the initial type with at
/// most `budget` nodes, realized directly through the lexicon.
pub fn acg_language_native(g: &StringAcg, budget: usize) -> Result<BTreeSet<Word>, AcgError> {
    validate_acg(g)?;
    enumerate_terms(&g.signature, &LinType::atom(&g.initial), budget)
        .iter()
        .map(|t| g.realize(t))
        .collect()
}

/// Closed η-long β-normal terms of type `ty` with at most `budget` nodes.
pub fn enumerate_terms(sig: &Signature, ty: &LinType, budget: usize) -> Vec<Term> {
    let mut en = Enumerator {
        sig,
        memo: HashMap::new(),
    };
    let mut out: Vec<(Term, usize)> = en.gen(&[], ty, budget, 0);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out.into_iter().map(|(t, _)| t).collect()
}

type Ctx = Vec<(String, LinType)>;

struct Enumerator<'a> {
    sig: &'a Signature,
    memo: HashMap<(Ctx, LinType, usize, usize), Vec<(Term, usize)>>,
}

impl Enumerator<'_> {
    fn gen(&mut self, ctx: &[(String, LinType)], ty: &LinType, budget: usize, depth: usize) -> Vec<(Term, usize)> {
        if budget == 0 {
            return Vec::new();
        }
        let key = (ctx.to_vec(), ty.clone(), budget, depth);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = match ty {
            LinType::Imp(a, b) => {
                let x = format!("v{depth}");
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), a.as_ref().clone()));
                self.gen(&inner, b, budget - 1, depth + 1)
                    .into_iter()
                    .map(|(t, s)| (Term::lam(&x, t), s + 1))
                    .collect()
            }
            LinType::Atom(p) => self.neutral(ctx, p, budget, depth),
        };
        self.memo.insert(key, out.clone());
        out
    }

    fn neutral(&mut self, ctx: &[(String, LinType)], p: &str, budget: usize, depth: usize) -> Vec<(Term, usize)> {
        let mut heads: Vec<(Term, LinType, Ctx)> = Vec::new();
        for (i, (x, a)) in ctx.iter().enumerate() {
            if a.uncurried().1 == p {
                let mut rest = ctx.to_vec();
                rest.remove(i);
                heads.push((Term::var(x), a.clone(), rest));
            }
        }
        for (c, a) in &self.sig.constants {
            if a.uncurried().1 == p {
                heads.push((Term::constant(c), a.clone(), ctx.to_vec()));
            }
        }
        let mut out = Vec::new();
        for (head, a, rest) in heads {
            let args: Vec<LinType> = a.uncurried().0.into_iter().cloned().collect();
            let n = args.len();
            if 1 + 2 * n > budget {
                continue;
            }
            if n == 0 {
                if rest.is_empty() {
                    out.push((head, 1));
                }
                continue;
            }
            for split in distributions(&rest, n) {
                let mut partial = vec![(head.clone(), 1 + n)];
                for (k, arg_ty) in args.iter().enumerate() {
                    let mut next = Vec::new();
                    for (t, used) in &partial {
                        let room = budget - used - (n - k - 1);
                        for (u, s) in self.gen(&split[k], arg_ty, room, depth) {
                            next.push((Term::app(t.clone(), u), used + s));
                        }
                    }
                    partial = next;
                }
                out.extend(partial);
            }
        }
        out
    }
}

/// Every way to hand each context entry to one of `n` argument slots, keeping order.
fn distributions(ctx: &[(String, LinType)], n: usize) -> Vec<Vec<Ctx>> {
    let mut out = vec![vec![Vec::new(); n]];
    for entry in ctx {
        out = out
            .into_iter()
            .flat_map(|parts| {
                (0..n).map(move |k| {
                    let mut p = parts.clone();
                    p[k].push(entry.clone());
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn rho_and_back() {
        let w = Word::parse("a b a");
        assert_eq!(rho(&w).to_string(), "\\x. a (b (a x))");
        assert_eq!(unrho(&ab(), &rho(&w)).unwrap(), w);
        assert_eq!(unrho(&ab(), &rho(&Word::empty())).unwrap(), Word::empty());
        assert_eq!(unrho(&ab(), &Term::constant("b")).unwrap(), Word::parse("b"));
        let composed = parse_term("(\\f. \\g. \\x. g (f x)) a b", &[]).unwrap();
        assert_eq!(unrho(&ab(), &composed).unwrap(), Word::parse("a b"));
        assert!(unrho(&ab(), &Term::constant("c")).is_err());
    }

    /// `S ↦ O -> O`, `e : S`, `w : S -> S` with `w = λs x. b (s (a x))`.
    fn anbn() -> StringAcg {
        let mut sig = Signature::new();
        sig.add_atom("S");
        sig.add_constant("e", LinType::atom("S"));
        sig.add_constant("w", LinType::imp(LinType::atom("S"), LinType::atom("S")));
        let lexicon = LexiconHom {
            types: BTreeMap::from([("S".to_string(), str_type())]),
            terms: BTreeMap::from([
                ("e".to_string(), parse_term("\\x. x", &[]).unwrap()),
                ("w".to_string(), parse_term("\\s x. b (s (a x))", &[]).unwrap()),
            ]),
        };
        StringAcg {
            signature: sig,
            alphabet: ab(),
            lexicon,
            initial: "S".into(),
        }
    }

    #[test]
    fn native_language() {
        let g = anbn();
        validate_acg(&g).unwrap();
        let words: Vec<String> = acg_language_native(&g, 5)
            .unwrap()
            .iter()
            .map(Word::to_text)
            .collect();
        assert_eq!(words, vec!["eps", "a a b b", "a b"]);
    }

    #[test]
    fn enumeration_is_eta_long() {
        let g = anbn();
        let s = LinType::atom("S");
        let terms = enumerate_terms(&g.signature, &LinType::imp(s.clone(), s), 4);
        let shown: Vec<String> = terms.iter().map(Term::to_string).collect();
        assert_eq!(shown, vec!["\\v0. v0", "\\v0. w v0"]);
    }

    #[test]
    fn llg_translation_agrees() {
        let g = anbn();
        let llg = acg_to_llg(&g).unwrap();
        let via_llg = acg_language(&g, &SearchOptions::budget(7).pruned()).unwrap();
        assert_eq!(via_llg.words, acg_language_native(&g, 7).unwrap());
        assert_eq!(llg.lexicon.axioms[1].sequent[0].to_string(), "~S | S");
    }

    #[test]
    fn validation_reports_bad_lexicon() {
        let mut g = anbn();
        g.lexicon
            .terms
            .insert("w".into(), parse_term("\\s x. s x", &[]).unwrap());
        validate_acg(&g).unwrap();
        g.lexicon
            .terms
            .insert("w".into(), parse_term("\\s x. c (s x)", &[]).unwrap());
        assert!(validate_acg(&g).is_err());
        let mut g = anbn();
        g.lexicon.types.insert("S".into(), LinType::atom("O"));
        assert!(validate_acg(&g).is_err());
    }
}
