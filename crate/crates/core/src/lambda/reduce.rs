use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{Term, TypeError};

static FRESH: AtomicUsize = AtomicUsize::new(0);

fn fresh(base: &str) -> String {
    let stem = base.split('\'').next().unwrap_or(base);
    format!("{stem}'{}", FRESH.fetch_add(1, Ordering::Relaxed))
}

/// Free variables with their occurrence counts.
pub fn free_variables(t: &Term) -> BTreeMap<String, usize> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeMap<String, usize>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    *out.entry(x.clone()).or_default() += 1;
                }
            }
            Term::Const(_) => {}
            Term::App(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
            Term::Lam(x, b) => {
                bound.push(x.clone());
                go(b, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Every bound variable occurs exactly once in its scope and every free
/// variable at most once.
pub fn is_linear(t: &Term) -> bool {
    linearity_witness(t).is_none()
}

pub(crate) fn linearity_witness(t: &Term) -> Option<String> {
    fn go(t: &Term) -> Result<BTreeMap<String, usize>, String> {
        match t {
            Term::Var(x) => Ok(BTreeMap::from([(x.clone(), 1)])),
            Term::Const(_) => Ok(BTreeMap::new()),
            Term::App(f, a) => {
                let mut m = go(f)?;
                for (x, n) in go(a)? {
                    *m.entry(x).or_default() += n;
                }
                Ok(m)
            }
            Term::Lam(x, b) => {
                let mut m = go(b)?;
                if m.remove(x) != Some(1) {
                    return Err(x.clone());
                }
                Ok(m)
            }
        }
    }
    match go(t) {
        Err(x) => Some(x),
        Ok(m) => m.into_iter().find(|(_, n)| *n > 1).map(|(x, _)| x),
    }
}

fn substitute(t: &Term, x: &str, arg: &Term, arg_free: &BTreeMap<String, usize>) -> Term {
    match t {
        Term::Var(y) if y == x => arg.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(
            substitute(f, x, arg, arg_free),
            substitute(a, x, arg, arg_free),
        ),
        Term::Lam(y, _) if y == x => t.clone(),
        Term::Lam(y, b) => {
            if arg_free.contains_key(y) {
                let z = fresh(y);
                let renamed = substitute(b, y, &Term::Var(z.clone()), &BTreeMap::new());
                Term::lam(&z, substitute(&renamed, x, arg, arg_free))
            } else {
                Term::lam(y, substitute(b, x, arg, arg_free))
            }
        }
    }
}

/// One leftmost-outermost β-step.
fn step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(x, body) = f.as_ref() {
                return Some(substitute(body, x, a, &free_variables(a)));
            }
            if let Some(f2) = step(f) {
                return Some(Term::App(Box::new(f2), a.clone()));
            }
            step(a).map(|a2| Term::App(f.clone(), Box::new(a2)))
        }
        Term::Lam(x, b) => step(b).map(|b2| Term::Lam(x.clone(), Box::new(b2))),
        _ => None,
    }
}

/// β-normal form by leftmost-outermost reduction. Rejects non-linear terms.
pub fn beta_normalize(t: &Term) -> Result<Term, TypeError> {
    if let Some(x) = linearity_witness(t) {
        return Err(TypeError::NonLinear(x));
    }
    let mut cur = t.clone();
    while let Some(next) = step(&cur) {
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s, &[]).unwrap()
    }

    fn alpha_eq(a: &Term, b: &Term) -> bool {
        fn go(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    match env.iter().rev().find(|(p, q)| p == x || q == y) {
                        Some((p, q)) => p == x && q == y,
                        None => x == y,
                    }
                }
                (Term::Const(c), Term::Const(d)) => c == d,
                (Term::App(f, a), Term::App(g, b)) => go(f, g, env) && go(a, b, env),
                (Term::Lam(x, s), Term::Lam(y, t)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(s, t, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(a, b, &mut Vec::new())
    }

    #[test]
    fn identity_redex() {
        assert_eq!(beta_normalize(&p("(\\x. x) c")).unwrap(), p("c"));
    }

    #[test]
    fn nested_redex() {
        let n = beta_normalize(&p("(\\f. \\x. f x) (\\y. y)")).unwrap();
        assert!(alpha_eq(&n, &p("\\x. x")));
    }

    #[test]
    fn capture_is_avoided() {
        let t = Term::app(p("\\f. \\x. f x"), Term::lam("y", Term::app(Term::var("x"), Term::var("y"))));
        let n = beta_normalize(&Term::lam("x", t)).unwrap();
        assert!(alpha_eq(&n, &p("\\x. \\z. x z")));
    }

    #[test]
    fn non_linear_terms_are_rejected() {
        assert!(matches!(
            beta_normalize(&p("\\x. \\y. x")),
            Err(TypeError::NonLinear(v)) if v == "y"
        ));
        assert!(!is_linear(&p("\\x. f x x")));
        assert!(is_linear(&p("\\x. f x")));
    }
}
