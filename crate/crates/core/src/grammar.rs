//! The line-oriented grammar file format.
//!
//! A file has an `[alphabet]` section and exactly one of `[acg]`, `[llg]`
//! or `[mcfg]`. Lines starting with `#` are comments.
//!
//! ```text
//! [alphabet]
//! tokens = a b
//! separator = ""
//!
//! [llg]
//! atom S = boundary 2 left=2
//! axiom close : S =
//!     2 -> 1 : a
//! initial S
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::acg::{validate_acg, AcgError, LexiconHom, StringAcg};
use crate::boundary::Boundary;
use crate::lambda::{parse_term, parse_type, Signature};
use crate::llg::{validate_llg, Llg, LlgError};
use crate::mcfg::{validate_mcfg, Mcfg, McfgError, Predicate, Production, Symbol};
use crate::mll::{parse_sequent, sequent_to_string, AxiomEntry, Lexicon};
use crate::multiword::{parse_body_lines, Multiword};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing [alphabet] section")]
    NoAlphabet,
    #[error("expected exactly one of [acg], [llg], [mcfg]")]
    SectionCount,
    #[error("invalid grammar: {0}")]
    Acg(#[from] AcgError),
    #[error("invalid grammar: {0}")]
    Llg(#[from] LlgError),
    #[error("invalid grammar: {0}")]
    Mcfg(#[from] McfgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grammar {
    Acg(StringAcg),
    Llg(Llg),
    Mcfg(Mcfg),
}

impl Grammar {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Grammar::Acg(g) => &g.alphabet,
            Grammar::Llg(g) => &g.alphabet,
            Grammar::Mcfg(g) => &g.alphabet,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Grammar::Acg(_) => "acg",
            Grammar::Llg(_) => "llg",
            Grammar::Mcfg(_) => "mcfg",
        }
    }

    pub fn validate(&self) -> Result<(), GrammarError> {
        match self {
            Grammar::Acg(g) => validate_acg(g)?,
            Grammar::Llg(g) => validate_llg(g)?,
            Grammar::Mcfg(g) => validate_mcfg(g)?,
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_alphabet(self.alphabet(), &mut out);
        out.push('\n');
        match self {
            Grammar::Acg(g) => write_acg(g, &mut out),
            Grammar::Llg(g) => write_llg(g, &mut out),
            Grammar::Mcfg(g) => write_mcfg(g, &mut out),
        }
        out
    }
}

type Lines<'a> = Vec<(usize, &'a str)>;

fn syntax(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses and validates a grammar file.
pub fn parse_grammar(src: &str) -> Result<Grammar, GrammarError> {
    let mut sections: Vec<(String, usize, Lines)> = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let ln = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push((name.trim().to_string(), ln, Vec::new()));
            continue;
        }
        let Some(last) = sections.last_mut() else {
            return Err(syntax(ln, "content before the first section"));
        };
        last.2.push((ln, raw));
    }
    let alphabet_lines = sections
        .iter()
        .find(|s| s.0 == "alphabet")
        .ok_or(GrammarError::NoAlphabet)?;
    let alphabet = parse_alphabet(&alphabet_lines.2)?;
    let mut grammars = sections.iter().filter(|s| s.0 != "alphabet");
    let (name, ln, lines) = grammars.next().ok_or(GrammarError::SectionCount)?;
    if grammars.next().is_some() {
        return Err(GrammarError::SectionCount);
    }
    let g = match name.as_str() {
        "acg" => Grammar::Acg(parse_acg(alphabet, lines)?),
        "llg" => Grammar::Llg(parse_llg(alphabet, lines)?),
        "mcfg" => Grammar::Mcfg(parse_mcfg(alphabet, lines)?),
        other => return Err(syntax(*ln, format!("unknown section [{other}]"))),
    };
    g.validate()?;
    Ok(g)
}

fn key_value(ln: usize, line: &str) -> Result<(&str, &str), GrammarError> {
    line.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| syntax(ln, "expected `key = value`"))
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .unwrap_or(v)
}

fn parse_alphabet(lines: &Lines) -> Result<Alphabet, GrammarError> {
    let mut tokens = None;
    let mut separator = " ".to_string();
    for &(ln, line) in lines {
        match key_value(ln, line)? {
            ("tokens", v) => tokens = Some((ln, v.split_whitespace().collect::<Vec<_>>())),
            ("separator", v) => separator = unquote(v).to_string(),
            (k, _) => return Err(syntax(ln, format!("unknown alphabet key `{k}`"))),
        }
    }
    let (ln, tokens) = tokens.ok_or_else(|| syntax(0, "alphabet has no `tokens` line"))?;
    Ok(Alphabet::new(tokens)
        .map_err(|e| syntax(ln, e.to_string()))?
        .with_separator(&separator))
}

fn write_alphabet(a: &Alphabet, out: &mut String) {
    let toks: Vec<&str> = a.tokens().map(|t| t.as_str()).collect();
    out.push_str("[alphabet]\n");
    out.push_str(&format!("tokens = {}\n", toks.join(" ")));
    out.push_str(&format!("separator = \"{}\"\n", a.separator()));
}

/// `initial S` or `initial = S`.
fn initial_of(rest: &str) -> &str {
    rest.trim().trim_start_matches('=').trim()
}

fn parse_acg(alphabet: Alphabet, lines: &Lines) -> Result<StringAcg, GrammarError> {
    let mut signature = Signature::new();
    let mut lexicon = LexiconHom::default();
    let mut initial = None;
    for &(ln, line) in lines {
        let line = line.trim();
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let err = |e: &dyn std::fmt::Display| syntax(ln, e.to_string());
        match kw {
            "atoms" => {
                for a in rest.trim().trim_start_matches('=').split_whitespace() {
                    signature.add_atom(a);
                }
            }
            "constant" | "constants" => {
                let (c, ty) = rest.split_once(':').ok_or_else(|| syntax(ln, "expected `c : TYPE`"))?;
                signature.add_constant(c.trim(), parse_type(ty).map_err(|e| err(&e))?);
            }
            "map" => {
                let (a, ty) = key_value(ln, rest)?;
                lexicon
                    .types
                    .insert(a.to_string(), parse_type(ty).map_err(|e| err(&e))?);
            }
            "lexicon" => {
                let (c, t) = key_value(ln, rest)?;
                lexicon
                    .terms
                    .insert(c.to_string(), parse_term(t, &[]).map_err(|e| err(&e))?);
            }
            "initial" => initial = Some(initial_of(rest).to_string()),
            other => return Err(syntax(ln, format!("unknown acg keyword `{other}`"))),
        }
    }
    Ok(StringAcg {
        signature,
        alphabet,
        lexicon,
        initial: initial.ok_or_else(|| syntax(0, "missing `initial`"))?,
    })
}

fn write_acg(g: &StringAcg, out: &mut String) {
    out.push_str("[acg]\n");
    let atoms: Vec<&str> = g.signature.atoms.iter().map(String::as_str).collect();
    out.push_str(&format!("atoms = {}\n", atoms.join(" ")));
    for (c, ty) in &g.signature.constants {
        out.push_str(&format!("constant {c} : {ty}\n"));
    }
    for (a, ty) in &g.lexicon.types {
        out.push_str(&format!("map {a} = {ty}\n"));
    }
    for (c, t) in &g.lexicon.terms {
        out.push_str(&format!("lexicon {c} = {t}\n"));
    }
    out.push_str(&format!("initial {}\n", g.initial));
}

fn parse_llg(alphabet: Alphabet, lines: &Lines) -> Result<Llg, GrammarError> {
    let mut atoms = BTreeMap::new();
    let mut axioms = Vec::new();
    let mut initial = None;
    let mut k = 0;
    while k < lines.len() {
        let (ln, raw) = lines[k];
        k += 1;
        let line = raw.trim();
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "atom" => {
                let (p, b) = key_value(ln, rest)?;
                let b = b
                    .strip_prefix("boundary")
                    .ok_or_else(|| syntax(ln, "expected `boundary <n> left=<list>`"))?;
                let b = Boundary::parse_text(b).map_err(|e| syntax(ln, e.to_string()))?;
                atoms.insert(p.to_string(), b);
            }
            "axiom" => {
                let (name, rest) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(ln, "expected `axiom NAME : SEQUENT =`"))?;
                let seq = rest
                    .trim()
                    .strip_suffix('=')
                    .ok_or_else(|| syntax(ln, "axiom header must end with `=`"))?;
                let sequent = parse_sequent(seq).map_err(|e| syntax(ln, e.to_string()))?;
                let mut body_lines = Vec::new();
                while k < lines.len() && lines[k].1.starts_with(char::is_whitespace) {
                    body_lines.push((lines[k].0, lines[k].1.trim()));
                    k += 1;
                }
                let (edges, singular) =
                    parse_body_lines(body_lines.into_iter()).map_err(|e| syntax(ln, e.to_string()))?;
                let boundary = crate::mll::interpret_sequent(&atoms, &sequent)
                    .map_err(|e| syntax(ln, e.to_string()))?;
                let body = Multiword::new(boundary, edges, singular)
                    .map_err(|e| syntax(ln, format!("axiom `{}`: {e}", name.trim())))?;
                axioms.push(AxiomEntry {
                    name: name.trim().to_string(),
                    sequent,
                    body,
                });
            }
            "initial" => initial = Some(initial_of(rest).to_string()),
            other => return Err(syntax(ln, format!("unknown llg keyword `{other}`"))),
        }
    }
    Ok(Llg {
        alphabet,
        lexicon: Lexicon { atoms, axioms },
        initial: initial.ok_or_else(|| syntax(0, "missing `initial`"))?,
    })
}

fn write_llg(g: &Llg, out: &mut String) {
    out.push_str("[llg]\n");
    for (p, b) in &g.lexicon.atoms {
        out.push_str(&format!("atom {p} = boundary {}\n", b.to_text()));
    }
    for ax in &g.lexicon.axioms {
        out.push_str(&format!("axiom {} : {} =\n", ax.name, sequent_to_string(&ax.sequent)));
        let mut body = String::new();
        ax.body.write_body(&mut body);
        for l in body.lines() {
            out.push_str(&format!("    {l}\n"));
        }
    }
    out.push_str(&format!("initial {}\n", g.initial));
}

fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_atom(ln: usize, s: &str) -> Result<(String, Vec<String>), GrammarError> {
    let (name, rest) = s
        .split_once('(')
        .ok_or_else(|| syntax(ln, format!("expected `Name(...)`, found `{s}`")))?;
    let args = rest
        .trim_end()
        .strip_suffix(')')
        .ok_or_else(|| syntax(ln, format!("missing `)` in `{s}`")))?;
    let args = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',').map(|a| a.trim().to_string()).collect()
    };
    Ok((name.trim().to_string(), args))
}

fn parse_mcfg(alphabet: Alphabet, lines: &Lines) -> Result<Mcfg, GrammarError> {
    let mut nonterminals = BTreeMap::new();
    let mut productions = Vec::new();
    let mut initial = None;
    for &(ln, raw) in lines {
        let line = raw.trim();
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "nonterminal" => {
                let (n, k) = rest
                    .trim()
                    .rsplit_once('/')
                    .ok_or_else(|| syntax(ln, "expected `nonterminal NAME/ARITY`"))?;
                let k = k.parse().map_err(|_| syntax(ln, "bad arity"))?;
                nonterminals.insert(n.to_string(), k);
            }
            "rule" => {
                let (lhs, rhs) = rest
                    .rsplit_once("->")
                    .ok_or_else(|| syntax(ln, "expected `premises -> Head(args)`"))?;
                let mut body = Vec::new();
                for atom in split_top(lhs) {
                    let (name, vars) = parse_atom(ln, atom)?;
                    body.push(Predicate { name, vars });
                }
                let (head, args) = parse_atom(ln, rhs.trim())?;
                let bound: Vec<&String> = body.iter().flat_map(|p| p.vars.iter()).collect();
                let head_args = args
                    .iter()
                    .map(|a| {
                        a.split_whitespace()
                            .filter(|x| *x != "eps")
                            .map(|x| {
                                if bound.iter().any(|v| v.as_str() == x) {
                                    Symbol::Var(x.to_string())
                                } else {
                                    Symbol::Token(crate::word::token(x))
                                }
                            })
                            .collect()
                    })
                    .collect();
                productions.push(Production {
                    head,
                    head_args,
                    body,
                });
            }
            "initial" => initial = Some(initial_of(rest).to_string()),
            other => return Err(syntax(ln, format!("unknown mcfg keyword `{other}`"))),
        }
    }
    Ok(Mcfg {
        alphabet,
        nonterminals,
        productions,
        initial: initial.ok_or_else(|| syntax(0, "missing `initial`"))?,
    })
}

fn write_mcfg(g: &Mcfg, out: &mut String) {
    out.push_str("[mcfg]\n");
    for (n, k) in &g.nonterminals {
        out.push_str(&format!("nonterminal {n}/{k}\n"));
    }
    for p in &g.productions {
        out.push_str(&format!("rule {p}\n"));
    }
    out.push_str(&format!("initial {}\n", g.initial));
}

/// Formats a word with the alphabet's separator.
pub fn show_word(a: &Alphabet, w: &Word) -> String {
    a.display(w)
}

/// The grammars shipped with the library.
pub mod fixtures {
    use super::{parse_grammar, Grammar};

    pub const LOVE: &str = include_str!("../fixtures/love.grammar");
    pub const LOVE_NP: &str = include_str!("../fixtures/love_np.grammar");
    pub const WAWB: &str = include_str!("../fixtures/wawb.grammar");
    pub const SSP: &str = include_str!("../fixtures/ssp.grammar");
    pub const SSP_FLAT: &str = include_str!("../fixtures/ssp_flat.grammar");

    pub fn load(src: &str) -> Grammar {
        parse_grammar(src).expect("bundled grammar is valid")
    }

    pub fn love() -> crate::acg::StringAcg {
        match load(LOVE) {
            Grammar::Acg(g) => g,
            _ => unreachable!(),
        }
    }

    pub fn love_np() -> crate::acg::StringAcg {
        match load(LOVE_NP) {
            Grammar::Acg(g) => g,
            _ => unreachable!(),
        }
    }

    pub fn wawb() -> crate::mcfg::Mcfg {
        match load(WAWB) {
            Grammar::Mcfg(g) => g,
            _ => unreachable!(),
        }
    }

    pub fn ssp() -> crate::llg::Llg {
        match load(SSP) {
            Grammar::Llg(g) => g,
            _ => unreachable!(),
        }
    }

    /// The subset-sum grammar with every axiom flattened to literals. Without
    /// the tensor in `push` the two pushed slots can never meet again, so only
    /// lists with an empty slot survive.
    pub fn ssp_flat() -> crate::llg::Llg {
        match load(SSP_FLAT) {
            Grammar::Llg(g) => g,
            _ => unreachable!(),
        }
    }
}
