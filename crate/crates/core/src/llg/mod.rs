//! Linear logic grammars: validation, bounded derivation and language extraction.

mod arena;
mod cut_only;
mod forward;
mod residual;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::boundary::Boundary;
use crate::cowordism::Cowordism;
use crate::mll::{interpret_sequent, sequent_to_string, AxiomEntry, Formula, InterpretError, Lexicon};
use crate::multiword::Multiword;
use crate::word::{Alphabet, Token, Word};

pub use arena::{DerivedJudgement, Provenance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Llg {
    pub alphabet: Alphabet,
    pub lexicon: Lexicon,
    pub initial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LlgError {
    #[error("initial atom `{0}` is not declared")]
    UnknownInitial(String),
    #[error("initial boundary {0} must have two points and exactly one left endpoint")]
    InitialBoundary(Boundary),
    #[error("axiom `{axiom}`: {message}")]
    Axiom { axiom: String, message: String },
    #[error("axiom `{0}` contains a tensor")]
    HasTensor(String),
    #[error("axiom `{0}` is not flat; flatten the grammar first")]
    NotFlat(String),
    #[error("an unbounded search needs a length bound")]
    Unbounded,
    #[error(transparent)]
    Interpret(#[from] InterpretError),
}

impl Llg {
    pub fn initial_formula(&self) -> Formula {
        Formula::pos(&self.initial)
    }

    pub fn is_flat(&self) -> bool {
        self.lexicon
            .axioms
            .iter()
            .all(|a| a.sequent.iter().all(Formula::is_literal))
    }

    pub fn is_tensor_free(&self) -> bool {
        self.lexicon
            .axioms
            .iter()
            .all(|a| !a.sequent.iter().any(Formula::contains_times))
    }
}

pub fn validate_llg(g: &Llg) -> Result<(), LlgError> {
    let s = g
        .lexicon
        .atoms
        .get(&g.initial)
        .ok_or_else(|| LlgError::UnknownInitial(g.initial.clone()))?;
    if s.cardinality() != 2 || s.left_set().len() != 1 {
        return Err(LlgError::InitialBoundary(s.clone()));
    }
    let mut names = BTreeSet::new();
    for ax in &g.lexicon.axioms {
        let fail = |m: String| LlgError::Axiom {
            axiom: ax.name.clone(),
            message: m,
        };
        if !names.insert(ax.name.as_str()) {
            return Err(fail("duplicate axiom name".into()));
        }
        let expected = interpret_sequent(&g.lexicon.atoms, &ax.sequent).map_err(|e| fail(e.to_string()))?;
        if ax.body.boundary() != &expected {
            return Err(fail(format!(
                "body boundary {} does not match the sequent boundary {}",
                ax.body.boundary(),
                expected
            )));
        }
        ax.body.validate().map_err(|v| fail(v.to_string()))?;
        let labels = ax
            .body
            .edges()
            .iter()
            .map(|e| &e.label)
            .chain(ax.body.singular().iter().map(|c| c.canonical()));
        for w in labels {
            for t in w.tokens() {
                if !g.alphabet.contains(t) {
                    return Err(fail(format!("token `{t}` is not in the alphabet")));
                }
            }
        }
    }
    Ok(())
}

/// Replaces every formula by its par components, in place. Bodies are unchanged.
pub fn flatten_par(g: &Llg) -> Result<Llg, LlgError> {
    let mut out = g.clone();
    for ax in &mut out.lexicon.axioms {
        if ax.sequent.iter().any(Formula::contains_times) {
            return Err(LlgError::HasTensor(ax.name.clone()));
        }
        ax.sequent = flatten_sequent(&ax.sequent);
    }
    Ok(out)
}

pub(crate) fn flatten_sequent(seq: &[Formula]) -> Vec<Formula> {
    seq.iter().flat_map(Formula::par_components).collect()
}

/// Search limits. `budget` bounds the number of axiom, identity and cut
/// steps in a derivation; `max_len` bounds the total label length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Option<usize>,
    pub max_len: Option<usize>,
    pub prune_singular: bool,
    pub detect_exhaustion: bool,
    /// Keep only judgements that can still grow into this word.
    pub target: Option<Word>,
}

impl SearchOptions {
    pub fn budget(b: usize) -> Self {
        SearchOptions {
            budget: Some(b),
            max_len: None,
            prune_singular: false,
            detect_exhaustion: true,
            target: None,
        }
    }

    /// Restricts the search to derivations of `w`.
    pub fn targeting(mut self, w: &Word) -> Self {
        self.max_len = Some(w.len());
        self.prune_singular = true;
        self.target = Some(w.clone());
        self
    }

    /// Label checks shared by the engines.
    pub(crate) fn fits(&self, body: &Multiword) -> bool {
        if self.prune_singular && !body.is_regular() {
            return false;
        }
        if let Some(k) = self.max_len {
            if body.label_length() > k {
                return false;
            }
        }
        let Some(w) = &self.target else {
            return true;
        };
        // Every label ends up as its own piece of the final word.
        let mut budget: BTreeMap<&Token, usize> = BTreeMap::new();
        for t in w.tokens() {
            *budget.entry(t).or_default() += 1;
        }
        for e in body.edges() {
            if !e.label.is_factor_of(w) {
                return false;
            }
            for t in e.label.tokens() {
                match budget.get_mut(t) {
                    Some(n) if *n > 0 => *n -= 1,
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn with_max_len(mut self, k: usize) -> Self {
        self.max_len = Some(k);
        self
    }

    pub fn pruned(mut self) -> Self {
        self.prune_singular = true;
        self
    }
}

/// Judgements at the initial sequent. `exhausted` is set when the budget cut
/// the search short, so an absent word is only absent at this budget.
#[derive(Debug, Clone)]
pub struct Generation {
    pub judgements: Vec<DerivedJudgement>,
    pub exhausted: bool,
}

impl Generation {
    pub fn bodies(&self) -> BTreeSet<Cowordism> {
        self.judgements.iter().map(|j| j.body.clone()).collect()
    }
}

/// Forward saturation over all sequents.
pub fn generate(g: &Llg, budget: usize) -> Result<Generation, LlgError> {
    generate_with(g, &SearchOptions::budget(budget))
}

pub fn generate_with(g: &Llg, opts: &SearchOptions) -> Result<Generation, LlgError> {
    validate_llg(g)?;
    if opts.budget.is_none() {
        return Err(LlgError::Unbounded);
    }
    forward::run(g, opts)
}

/// Saturation by cuts into closed single-literal judgements. Requires a flat grammar.
pub fn generate_cut_only(g: &Llg, budget: usize) -> Result<Generation, LlgError> {
    generate_cut_only_with(g, &SearchOptions::budget(budget))
}

pub fn generate_cut_only_with(g: &Llg, opts: &SearchOptions) -> Result<Generation, LlgError> {
    validate_llg(g)?;
    if let Some(ax) = g
        .lexicon
        .axioms
        .iter()
        .find(|a| !a.sequent.iter().all(Formula::is_literal))
    {
        return Err(LlgError::NotFlat(ax.name.clone()));
    }
    if opts.budget.is_none() && opts.max_len.is_none() {
        return Err(LlgError::Unbounded);
    }
    cut_only::run(g, opts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub words: BTreeSet<Word>,
    pub exhausted: bool,
}

/// Words labelling regular initial-type judgements. Flat grammars use the
/// cut-only engine and may omit the budget when a length bound is given.
pub fn language_with(g: &Llg, opts: &SearchOptions) -> Result<Language, LlgError> {
    let gen = search(g, opts)?;
    Ok(Language {
        words: gen
            .judgements
            .iter()
            .filter_map(|j| single_label(&j.body))
            .filter(|w| opts.max_len.map_or(true, |k| w.len() <= k))
            .collect(),
        exhausted: gen.exhausted,
    })
}

pub fn language(g: &Llg, budget: usize) -> Result<Language, LlgError> {
    language_with(g, &SearchOptions::budget(budget).pruned())
}

fn search(g: &Llg, opts: &SearchOptions) -> Result<Generation, LlgError> {
    if g.is_flat() {
        generate_cut_only_with(g, opts)
    } else {
        generate_with(g, opts)
    }
}

/// The label of a regular single-edge body.
pub fn single_label(c: &Cowordism) -> Option<Word> {
    match (c.body().edges(), c.body().is_regular()) {
        ([e], true) => Some(e.label.clone()),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub enum Membership {
    Yes(Box<DerivedJudgement>),
    NoAtBudget(Option<usize>),
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }
}

/// Bounded membership. A negative answer is relative to the budget.
pub fn member(g: &Llg, w: &Word, budget: Option<usize>) -> Result<Membership, LlgError> {
    let opts = SearchOptions {
        budget,
        detect_exhaustion: false,
        ..SearchOptions::default()
    }
    .targeting(w);
    let gen = search(g, &opts)?;
    Ok(gen
        .judgements
        .into_iter()
        .filter(|j| single_label(&j.body).as_ref() == Some(w))
        .min_by_key(|j| j.size)
        .map(|j| Membership::Yes(Box::new(j)))
        .unwrap_or(Membership::NoAtBudget(budget)))
}

/// Renders the axioms of a grammar for diagnostics.
pub fn describe_axioms(g: &Llg) -> BTreeMap<String, String> {
    g.lexicon
        .axioms
        .iter()
        .map(|a: &AxiomEntry| (a.name.clone(), sequent_to_string(&a.sequent)))
        .collect()
}
