use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::reduce::{free_variables, linearity_witness};
use super::{LinType, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Id,
    SigAxiom,
    /// Discharges the hypothesis at `position` of the premise context.
    ImpI {
        position: usize,
    },
    /// Premises are `[argument, function]`.
    ImpE,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Id => f.write_str("Id"),
            Rule::SigAxiom => f.write_str("Ax"),
            Rule::ImpI { position } => write!(f, "-oI@{position}"),
            Rule::ImpE => f.write_str("-oE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypingDerivation {
    pub rule: Rule,
    pub context: Vec<(String, LinType)>,
    pub term: Term,
    pub ty: LinType,
    pub premises: Vec<TypingDerivation>,
}

impl TypingDerivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(TypingDerivation::size).sum::<usize>()
    }

    pub fn judgement(&self) -> String {
        let ctx: Vec<String> = self
            .context
            .iter()
            .map(|(x, a)| format!("{x}:{a}"))
            .collect();
        format!("{} |- {} : {}", ctx.join(", "), self.term, self.ty)
    }

    /// Subderivations in post-order, ending with `self`.
    pub fn post_order(&self) -> Vec<&TypingDerivation> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a TypingDerivation, out: &mut Vec<&'a TypingDerivation>) {
            for p in &d.premises {
                go(p, out);
            }
            out.push(d);
        }
        go(self, &mut out);
        out
    }
}

/// A node that does not instantiate its rule. `path` lists premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} at {path:?}: {message}")]
pub struct TypingViolation {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("variable `{0}` is not used linearly")]
    NonLinear(String),
    #[error("variable `{0}` is not in the context")]
    UnboundVariable(String),
    #[error("context variable `{0}` is unused")]
    UnusedContext(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("type mismatch: cannot unify {left} with {right}")]
    Mismatch { left: String, right: String },
    #[error("type of `{0}` is not determined")]
    Ambiguous(String),
    #[error("context order {found:?} is not derivable; the term requires {expected:?}")]
    ContextOrder {
        expected: Vec<String>,
        found: Vec<String>,
    },
}

pub fn check_derivation(sig: &Signature, d: &TypingDerivation) -> Result<(), TypingViolation> {
    check_node(sig, d, &mut Vec::new())
}

fn check_node(
    sig: &Signature,
    d: &TypingDerivation,
    path: &mut Vec<usize>,
) -> Result<(), TypingViolation> {
    let fail = |m: &str| TypingViolation {
        path: path.clone(),
        rule: d.rule.clone(),
        message: m.to_string(),
    };
    let names: BTreeSet<&str> = d.context.iter().map(|(x, _)| x.as_str()).collect();
    if names.len() != d.context.len() {
        return Err(fail("context variables are not distinct"));
    }
    let arity = match d.rule {
        Rule::Id | Rule::SigAxiom => 0,
        Rule::ImpI { .. } => 1,
        Rule::ImpE => 2,
    };
    if d.premises.len() != arity {
        return Err(fail("wrong number of premises"));
    }
    match &d.rule {
        Rule::Id => match (d.context.as_slice(), &d.term) {
            ([(x, a)], Term::Var(y)) if x == y && a == &d.ty => {}
            _ => return Err(fail("expected x:A |- x:A")),
        },
        Rule::SigAxiom => {
            if !d.context.is_empty() {
                return Err(fail("signature axioms have an empty context"));
            }
            match &d.term {
                Term::Const(c) if sig.type_of(c) == Some(&d.ty) => {}
                Term::Const(_) => return Err(fail("constant type disagrees with the signature")),
                _ => return Err(fail("expected a constant")),
            }
        }
        Rule::ImpI { position } => {
            let p = &d.premises[0];
            if *position >= p.context.len() {
                return Err(fail("discharged position out of range"));
            }
            let (x, a) = &p.context[*position];
            let mut rest = p.context.clone();
            rest.remove(*position);
            if rest != d.context {
                return Err(fail("conclusion context must drop exactly the discharged hypothesis"));
            }
            if d.term != Term::lam(x, p.term.clone()) {
                return Err(fail("term must abstract the discharged variable"));
            }
            if d.ty != LinType::imp(a.clone(), p.ty.clone()) {
                return Err(fail("type must be A -> B"));
            }
        }
        Rule::ImpE => {
            let (s, t) = (&d.premises[0], &d.premises[1]);
            if t.ty != LinType::imp(s.ty.clone(), d.ty.clone()) {
                return Err(fail("function type must be A -> B with A the argument type"));
            }
            if d.term != Term::app(t.term.clone(), s.term.clone()) {
                return Err(fail("term must be the application of the function to the argument"));
            }
            let mut ctx = s.context.clone();
            ctx.extend(t.context.iter().cloned());
            if ctx != d.context {
                return Err(fail("context must be the concatenation of the premise contexts"));
            }
        }
    }
    for (k, p) in d.premises.iter().enumerate() {
        path.push(k);
        check_node(sig, p, path)?;
        path.pop();
    }
    Ok(())
}

#[derive(Clone)]
enum Meta {
    Atom(String),
    Imp(Box<Meta>, Box<Meta>),
    Var(usize),
}

impl Meta {
    fn of(t: &LinType) -> Meta {
        match t {
            LinType::Atom(a) => Meta::Atom(a.clone()),
            LinType::Imp(a, b) => Meta::Imp(Box::new(Meta::of(a)), Box::new(Meta::of(b))),
        }
    }
}

#[derive(Default)]
struct Unifier {
    slots: Vec<Option<Meta>>,
}

impl Unifier {
    fn fresh(&mut self) -> Meta {
        self.slots.push(None);
        Meta::Var(self.slots.len() - 1)
    }

    fn shallow(&self, m: &Meta) -> Meta {
        let mut cur = m.clone();
        while let Meta::Var(v) = cur {
            match &self.slots[v] {
                Some(next) => cur = next.clone(),
                None => return cur,
            }
        }
        cur
    }

    fn occurs(&self, v: usize, m: &Meta) -> bool {
        match self.shallow(m) {
            Meta::Var(w) => v == w,
            Meta::Atom(_) => false,
            Meta::Imp(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    fn show(&self, m: &Meta) -> String {
        match self.shallow(m) {
            Meta::Var(v) => format!("?{v}"),
            Meta::Atom(a) => a,
            Meta::Imp(a, b) => format!("({} -> {})", self.show(&a), self.show(&b)),
        }
    }

    fn unify(&mut self, a: &Meta, b: &Meta) -> Result<(), TypeError> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Meta::Var(v), Meta::Var(w)) if v == w => Ok(()),
            (Meta::Var(v), other) | (other, Meta::Var(v)) => {
                if self.occurs(*v, other) {
                    return Err(self.mismatch(&a, &b));
                }
                self.slots[*v] = Some(other.clone());
                Ok(())
            }
            (Meta::Atom(x), Meta::Atom(y)) if x == y => Ok(()),
            (Meta::Imp(a1, b1), Meta::Imp(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(self.mismatch(&a, &b)),
        }
    }

    fn mismatch(&self, a: &Meta, b: &Meta) -> TypeError {
        TypeError::Mismatch {
            left: self.show(a),
            right: self.show(b),
        }
    }

    fn zonk(&self, m: &Meta) -> Option<LinType> {
        match self.shallow(m) {
            Meta::Var(_) => None,
            Meta::Atom(a) => Some(LinType::Atom(a)),
            Meta::Imp(a, b) => Some(LinType::imp(self.zonk(&a)?, self.zonk(&b)?)),
        }
    }
}

struct Annot {
    ty: Meta,
    kids: Vec<Annot>,
}

fn annotate(
    sig: &Signature,
    t: &Term,
    env: &mut Vec<(String, Meta)>,
    u: &mut Unifier,
) -> Result<Annot, TypeError> {
    match t {
        Term::Var(x) => {
            let ty = env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, m)| m.clone())
                .ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
            Ok(Annot {
                ty,
                kids: vec![],
            })
        }
        Term::Const(c) => {
            let ty = sig
                .type_of(c)
                .ok_or_else(|| TypeError::UnknownConstant(c.clone()))?;
            Ok(Annot {
                ty: Meta::of(ty),
                kids: vec![],
            })
        }
        Term::App(f, a) => {
            let fa = annotate(sig, f, env, u)?;
            let aa = annotate(sig, a, env, u)?;
            let result = u.fresh();
            u.unify(
                &fa.ty,
                &Meta::Imp(Box::new(aa.ty.clone()), Box::new(result.clone())),
            )?;
            Ok(Annot {
                ty: result,
                kids: vec![fa, aa],
            })
        }
        Term::Lam(x, b) => {
            let m = u.fresh();
            env.push((x.clone(), m.clone()));
            let ba = annotate(sig, b, env, u);
            env.pop();
            let ba = ba?;
            Ok(Annot {
                ty: Meta::Imp(Box::new(m), Box::new(ba.ty.clone())),
                kids: vec![ba],
            })
        }
    }
}

fn build(t: &Term, a: &Annot, u: &Unifier) -> Result<TypingDerivation, TypeError> {
    let ty = u
        .zonk(&a.ty)
        .ok_or_else(|| TypeError::Ambiguous(t.to_string()))?;
    match t {
        Term::Var(x) => Ok(TypingDerivation {
            rule: Rule::Id,
            context: vec![(x.clone(), ty.clone())],
            term: t.clone(),
            ty,
            premises: vec![],
        }),
        Term::Const(_) => Ok(TypingDerivation {
            rule: Rule::SigAxiom,
            context: vec![],
            term: t.clone(),
            ty,
            premises: vec![],
        }),
        Term::App(f, arg) => {
            let df = build(f, &a.kids[0], u)?;
            let da = build(arg, &a.kids[1], u)?;
            let mut context = da.context.clone();
            context.extend(df.context.iter().cloned());
            Ok(TypingDerivation {
                rule: Rule::ImpE,
                context,
                term: t.clone(),
                ty,
                premises: vec![da, df],
            })
        }
        Term::Lam(x, b) => {
            let db = build(b, &a.kids[0], u)?;
            let position = db
                .context
                .iter()
                .position(|(y, _)| y == x)
                .ok_or_else(|| TypeError::NonLinear(x.clone()))?;
            let mut context = db.context.clone();
            context.remove(position);
            Ok(TypingDerivation {
                rule: Rule::ImpI { position },
                context,
                term: t.clone(),
                ty,
                premises: vec![db],
            })
        }
    }
}

/// Reconstructs a derivation of `context |- t : expected`. When `expected` is
/// `None` the principal type must be fully determined by the constants.
pub fn infer(
    sig: &Signature,
    context: &[(String, LinType)],
    t: &Term,
    expected: Option<&LinType>,
) -> Result<TypingDerivation, TypeError> {
    if let Some(x) = linearity_witness(t) {
        return Err(TypeError::NonLinear(x));
    }
    let free = free_variables(t);
    for x in free.keys() {
        if !context.iter().any(|(y, _)| y == x) {
            return Err(TypeError::UnboundVariable(x.clone()));
        }
    }
    for (x, _) in context {
        if !free.contains_key(x) {
            return Err(TypeError::UnusedContext(x.clone()));
        }
    }
    let mut u = Unifier::default();
    let mut env: Vec<(String, Meta)> = context
        .iter()
        .map(|(x, a)| (x.clone(), Meta::of(a)))
        .collect();
    let annot = annotate(sig, t, &mut env, &mut u)?;
    if let Some(e) = expected {
        u.unify(&annot.ty, &Meta::of(e))?;
    }
    let d = build(t, &annot, &u)?;
    if d.context != context {
        return Err(TypeError::ContextOrder {
            expected: d.context.iter().map(|(x, _)| x.clone()).collect(),
            found: context.iter().map(|(x, _)| x.clone()).collect(),
        });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn str_sig(letters: &[&str]) -> Signature {
        let mut sig = Signature::new();
        sig.add_atom("O");
        for c in letters {
            sig.add_constant(c, LinType::imp(LinType::atom("O"), LinType::atom("O")));
        }
        sig
    }

    fn str_ty() -> LinType {
        LinType::imp(LinType::atom("O"), LinType::atom("O"))
    }

    #[test]
    fn id_node_checks() {
        let sig = Signature::new();
        let d = TypingDerivation {
            rule: Rule::Id,
            context: vec![("x".into(), LinType::atom("A"))],
            term: Term::var("x"),
            ty: LinType::atom("A"),
            premises: vec![],
        };
        assert_eq!(check_derivation(&sig, &d), Ok(()));
        let lam = TypingDerivation {
            rule: Rule::ImpI { position: 0 },
            context: vec![],
            term: Term::lam("x", Term::var("x")),
            ty: LinType::imp(LinType::atom("A"), LinType::atom("A")),
            premises: vec![d],
        };
        assert_eq!(check_derivation(&sig, &lam), Ok(()));
    }

    #[test]
    fn overlapping_contexts_are_rejected() {
        let sig = Signature::new();
        let a = LinType::atom("A");
        let f_ty = LinType::imp(a.clone(), a.clone());
        let id = |x: &str, t: &LinType| TypingDerivation {
            rule: Rule::Id,
            context: vec![(x.into(), t.clone())],
            term: Term::var(x),
            ty: t.clone(),
            premises: vec![],
        };
        let bad = TypingDerivation {
            rule: Rule::ImpE,
            context: vec![("x".into(), a.clone()), ("x".into(), f_ty.clone())],
            term: Term::app(Term::var("x"), Term::var("x")),
            ty: a.clone(),
            premises: vec![id("x", &a), id("x", &f_ty)],
        };
        let err = check_derivation(&sig, &bad).unwrap_err();
        assert_eq!(err.rule, Rule::ImpE);
        assert!(err.path.is_empty());
    }

    #[test]
    fn infer_rho_ab() {
        let sig = str_sig(&["a", "b"]);
        let t = parse_term("\\x. b (a x)", &[]).unwrap();
        let d = infer(&sig, &[], &t, Some(&str_ty())).unwrap();
        assert_eq!(d.ty, str_ty());
        assert_eq!(check_derivation(&sig, &d), Ok(()));
        assert_eq!(d.rule, Rule::ImpI { position: 0 });
    }

    #[test]
    fn infer_rejects_non_linear_and_ill_typed() {
        let sig = str_sig(&["a"]);
        assert!(matches!(
            infer(&sig, &[], &parse_term("\\x. \\y. x", &[]).unwrap(), None),
            Err(TypeError::NonLinear(_))
        ));
        assert!(matches!(
            infer(&sig, &[], &parse_term("a a", &[]).unwrap(), None),
            Err(TypeError::Mismatch { .. })
        ));
        assert!(matches!(
            infer(&sig, &[], &parse_term("zz", &[]).unwrap(), None),
            Err(TypeError::UnknownConstant(_))
        ));
    }

    #[test]
    fn infer_through_redexes() {
        let sig = str_sig(&["a"]);
        let t = parse_term("(\\f. f) (\\x. a x)", &[]).unwrap();
        let d = infer(&sig, &[], &t, None).unwrap();
        assert_eq!(d.ty, str_ty());
        assert_eq!(check_derivation(&sig, &d), Ok(()));
    }

    #[test]
    fn context_order_follows_the_term() {
        let sig = str_sig(&[]);
        let o = LinType::atom("O");
        let ctx = vec![("y".to_string(), o.clone()), ("f".to_string(), str_ty())];
        let t = parse_term("f y", &["f", "y"]).unwrap();
        assert!(infer(&sig, &ctx, &t, None).is_ok());
        let swapped = vec![ctx[1].clone(), ctx[0].clone()];
        assert!(matches!(
            infer(&sig, &swapped, &t, None),
            Err(TypeError::ContextOrder { .. })
        ));
    }
}
