use std::collections::BTreeMap;

use thiserror::Error;

use super::{LinType, Rule, TypingDerivation};
use crate::boundary::Boundary;
use crate::cowordism::{CategoryError, Cowordism};
use crate::multiword::Multiword;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("atom `{0}` has no boundary")]
    UnmappedAtom(String),
    #[error("constant `{0}` has no multiword")]
    UnmappedConstant(String),
    #[error("constant `{name}` has boundary {found}, its type requires {expected}")]
    ConstantBoundary {
        name: String,
        expected: Boundary,
        found: Boundary,
    },
    #[error("malformed derivation node {0}")]
    Malformed(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Boundaries for atoms and closed multiwords for constants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub atoms: BTreeMap<String, Boundary>,
    pub constants: BTreeMap<String, Multiword>,
}

/// `ξ(p)` for atoms and `ξ(A⊸B) = ξ(A)⊥⊗ξ(B)`.
pub fn interpret_type(xi: &Interpretation, ty: &LinType) -> Result<Boundary, SemanticsError> {
    match ty {
        LinType::Atom(a) => xi
            .atoms
            .get(a)
            .cloned()
            .ok_or_else(|| SemanticsError::UnmappedAtom(a.clone())),
        LinType::Imp(a, b) => Ok(interpret_type(xi, a)?.dual().tensor(&interpret_type(xi, b)?)),
    }
}

fn context_boundary(
    xi: &Interpretation,
    ctx: &[(String, LinType)],
) -> Result<Boundary, SemanticsError> {
    ctx.iter().try_fold(Boundary::unit(), |acc, (_, a)| {
        Ok(acc.tensor(&interpret_type(xi, a)?))
    })
}

/// The cowordism `ξ(A1)⊗…⊗ξ(An) → ξ(A)` of a derivation of `x1:A1..xn:An ⊢ t:A`.
pub fn interpret_derivation(
    xi: &Interpretation,
    d: &TypingDerivation,
) -> Result<Cowordism, SemanticsError> {
    match &d.rule {
        Rule::Id => Ok(Cowordism::identity(&interpret_type(xi, &d.ty)?)),
        Rule::SigAxiom => {
            let name = match &d.term {
                super::Term::Const(c) => c,
                _ => return Err(SemanticsError::Malformed(d.judgement())),
            };
            let body = xi
                .constants
                .get(name)
                .ok_or_else(|| SemanticsError::UnmappedConstant(name.clone()))?;
            let expected = interpret_type(xi, &d.ty)?;
            if body.boundary() != &expected {
                return Err(SemanticsError::ConstantBoundary {
                    name: name.clone(),
                    expected,
                    found: body.boundary().clone(),
                });
            }
            Ok(Cowordism::closed(body.clone()))
        }
        Rule::ImpI { position } => {
            let [p] = d.premises.as_slice() else {
                return Err(SemanticsError::Malformed(d.judgement()));
            };
            let inner = interpret_derivation(xi, p)?;
            let gamma = context_boundary(xi, &p.context[..*position])?;
            let a = interpret_type(xi, &p.context[*position].1)?;
            let delta = context_boundary(xi, &p.context[*position + 1..])?;
            let b = inner.cod().clone();
            // premise body [Δ⊥][A⊥][Γ⊥][B] becomes [Δ⊥][Γ⊥][A⊥][B]
            let body = inner.body().permute_blocks(
                &[
                    delta.cardinality(),
                    a.cardinality(),
                    gamma.cardinality(),
                    b.cardinality(),
                ],
                &[0, 2, 1, 3],
            );
            Ok(Cowordism::new(gamma.tensor(&delta), a.dual().tensor(&b), body)?)
        }
        Rule::ImpE => {
            let [s, t] = d.premises.as_slice() else {
                return Err(SemanticsError::Malformed(d.judgement()));
            };
            let arg = interpret_derivation(xi, s)?;
            let fun = interpret_derivation(xi, t)?;
            let gamma = arg.dom().clone();
            let a = arg.cod().clone();
            let delta = fun.dom().clone();
            let b = interpret_type(xi, &d.ty)?;
            // [Γ⊥][A][Δ⊥][A⊥][B] becomes [Δ⊥][Γ⊥][A][A⊥][B], then A meets A⊥
            let joined = arg.body().tensor(fun.body()).permute_blocks(
                &[
                    gamma.cardinality(),
                    a.cardinality(),
                    delta.cardinality(),
                    a.cardinality(),
                    b.cardinality(),
                ],
                &[2, 0, 1, 3, 4],
            );
            let body = joined
                .iterated_contraction(delta.cardinality() + gamma.cardinality(), &a.dual())
                .map_err(CategoryError::from)?;
            Ok(Cowordism::new(gamma.tensor(&delta), b, body)?)
        }
    }
}
