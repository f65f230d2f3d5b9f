use thiserror::Error;

use super::{LinType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected end of input in `{0}`")]
    Eof(String),
    #[error("unexpected `{found}` in `{input}`")]
    Unexpected { found: String, input: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Arrow,
    Ident(String),
}

fn lex(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '\\' | 'λ' => {
                chars.next();
                out.push(Tok::Lambda);
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot);
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            '-' if s[i..].starts_with("->") => {
                chars.next();
                chars.next();
                out.push(Tok::Arrow);
            }
            _ => {
                let start = i;
                let mut end = s.len();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_whitespace()
                        || matches!(d, '\\' | 'λ' | '.' | '(' | ')')
                        || s[j..].starts_with("->")
                    {
                        end = j;
                        break;
                    }
                    chars.next();
                }
                out.push(Tok::Ident(s[start..end].to_string()));
            }
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, SyntaxError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| SyntaxError::Eof(self.input.to_string()))?;
        self.pos += 1;
        Ok(t)
    }

    fn unexpected(&self, t: &Tok) -> SyntaxError {
        let found = match t {
            Tok::Lambda => "\\".to_string(),
            Tok::Dot => ".".to_string(),
            Tok::Open => "(".to_string(),
            Tok::Close => ")".to_string(),
            Tok::Arrow => "->".to_string(),
            Tok::Ident(s) => s.clone(),
        };
        SyntaxError::Unexpected {
            found,
            input: self.input.to_string(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(self.unexpected(&t))
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.unexpected(&t.clone())),
        }
    }

    fn ty(&mut self) -> Result<LinType, SyntaxError> {
        let left = match self.next()? {
            Tok::Ident(a) => LinType::Atom(a),
            Tok::Open => {
                let t = self.ty()?;
                self.expect(Tok::Close)?;
                t
            }
            t => return Err(self.unexpected(&t)),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(LinType::imp(left, self.ty()?))
        } else {
            Ok(left)
        }
    }

    fn term(&mut self, scope: &mut Vec<String>) -> Result<Term, SyntaxError> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let mut binders = Vec::new();
            loop {
                match self.next()? {
                    Tok::Ident(x) => binders.push(x),
                    Tok::Dot if !binders.is_empty() => break,
                    t => return Err(self.unexpected(&t)),
                }
            }
            let depth = scope.len();
            scope.extend(binders.iter().cloned());
            let body = self.term(scope)?;
            scope.truncate(depth);
            return Ok(binders
                .iter()
                .rev()
                .fold(body, |b, x| Term::lam(x, b)));
        }
        let mut head = self.atom(scope)?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Open) => {
                    let arg = self.atom(scope)?;
                    head = Term::app(head, arg);
                }
                Some(Tok::Lambda) => {
                    let arg = self.term(scope)?;
                    return Ok(Term::app(head, arg));
                }
                _ => return Ok(head),
            }
        }
    }

    fn atom(&mut self, scope: &mut Vec<String>) -> Result<Term, SyntaxError> {
        match self.next()? {
            Tok::Ident(x) => Ok(if scope.contains(&x) {
                Term::Var(x)
            } else {
                Term::Const(x)
            }),
            Tok::Open => {
                let t = self.term(scope)?;
                self.expect(Tok::Close)?;
                Ok(t)
            }
            t => Err(self.unexpected(&t)),
        }
    }
}

/// Parses a type; `->` associates to the right.
pub fn parse_type(s: &str) -> Result<LinType, SyntaxError> {
    let mut p = Parser {
        toks: lex(s),
        pos: 0,
        input: s,
    };
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term. Identifiers bound by an enclosing `\` or listed in `free`
/// are variables; all others are constants.
pub fn parse_term(s: &str, free: &[&str]) -> Result<Term, SyntaxError> {
    let mut p = Parser {
        toks: lex(s),
        pos: 0,
        input: s,
    };
    let mut scope: Vec<String> = free.iter().map(|x| x.to_string()).collect();
    let t = p.term(&mut scope)?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_associate_right() {
        let t = parse_type("NP -> NP -> S").unwrap();
        assert_eq!(
            t,
            LinType::imp(
                LinType::atom("NP"),
                LinType::imp(LinType::atom("NP"), LinType::atom("S"))
            )
        );
        let t = parse_type("(NP -> S) -> NP").unwrap();
        assert_eq!(t.to_string(), "(NP -> S) -> NP");
        assert!(parse_type("A ->").is_err());
    }

    #[test]
    fn terms_distinguish_variables() {
        let t = parse_term("\\x y. f (g x) y", &[]).unwrap();
        assert_eq!(
            t,
            Term::lam(
                "x",
                Term::lam(
                    "y",
                    Term::apply(
                        Term::constant("f"),
                        [Term::app(Term::constant("g"), Term::var("x")), Term::var("y")]
                    )
                )
            )
        );
        assert_eq!(parse_term("z", &["z"]).unwrap(), Term::var("z"));
        assert_eq!(parse_term(&t.to_string(), &[]).unwrap(), t);
    }

    #[test]
    fn trailing_lambda_argument() {
        let t = parse_term("f \\y. y", &[]).unwrap();
        assert_eq!(t, Term::app(Term::constant("f"), Term::lam("y", Term::var("y"))));
        assert!(parse_term("(f", &[]).is_err());
    }
}
