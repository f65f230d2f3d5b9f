//! Terminals, words and cyclic words.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An opaque terminal symbol. Tokens compare by their spelling.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(Arc<str>);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("token `{0}` is not in the alphabet")]
    Foreign(String),
    #[error("invalid token `{0}`")]
    Invalid(String),
    #[error("cannot split `{0}` into alphabet tokens")]
    Untokenizable(String),
}

/// A finite alphabet of tokens together with the separator used to display words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    tokens: BTreeSet<Token>,
    separator: String,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for t in tokens {
            let t = t.as_ref();
            if t.is_empty() || t.chars().any(char::is_whitespace) || t == "eps" {
                return Err(AlphabetError::Invalid(t.to_string()));
            }
            set.insert(Token(Arc::from(t)));
        }
        Ok(Alphabet {
            tokens: set,
            separator: " ".to_string(),
        })
    }

    pub fn with_separator(mut self, separator: &str) -> Self {
        self.separator = separator.to_string();
        self
    }

    pub fn separator(&self) -> &str {
        &self.separator
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &Token) -> bool {
        self.tokens.contains(token)
    }

    /// Looks up a terminal by spelling.
    pub fn terminal(&self, s: &str) -> Result<Token, AlphabetError> {
        self.tokens
            .iter()
            .find(|t| t.as_str() == s)
            .cloned()
            .ok_or_else(|| AlphabetError::Foreign(s.to_string()))
    }

    /// Builds a word from whitespace-separated token spellings.
    pub fn word(&self, s: &str) -> Result<Word, AlphabetError> {
        s.split_whitespace()
            .map(|t| self.terminal(t))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from_tokens)
    }

    /// Reads a displayed word back. With an empty separator the input is split
    /// by greedy longest match against the alphabet.
    pub fn parse_display(&self, s: &str) -> Result<Word, AlphabetError> {
        if s == "eps" || s == "ε" {
            return Ok(Word::empty());
        }
        if !self.separator.is_empty() {
            return self.word(s);
        }
        let mut rest = s.trim();
        let mut out = Vec::new();
        while !rest.is_empty() {
            let best = self
                .tokens
                .iter()
                .filter(|t| rest.starts_with(t.as_str()))
                .max_by_key(|t| t.as_str().len())
                .ok_or_else(|| AlphabetError::Untokenizable(s.to_string()))?;
            out.push(best.clone());
            rest = rest[best.as_str().len()..].trim_start();
        }
        Ok(Word::from_tokens(out))
    }

    /// Displays a word with this alphabet's separator; the empty word shows as `ε`.
    pub fn display(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.tokens()
            .iter()
            .map(Token::as_str)
            .collect::<Vec<_>>()
            .join(&self.separator)
    }
}

/// Creates a token without alphabet membership checks. Used by parsers that
/// validate membership separately and by internal variable names.
pub fn token(s: &str) -> Token {
    Token(Arc::from(s))
}

/// A finite sequence of tokens.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Token>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_tokens(tokens: Vec<Token>) -> Self {
        Word(tokens)
    }

    pub fn single(t: Token) -> Self {
        Word(vec![t])
    }

    /// Splits on whitespace without alphabet checks. `eps` denotes the empty word.
    pub fn parse(s: &str) -> Self {
        let s = s.trim();
        if s == "eps" || s == "ε" {
            return Word::empty();
        }
        Word(s.split_whitespace().map(token).collect())
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Whether `self` occurs as a contiguous piece of `other`.
    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    /// Space-separated form, `eps` when empty. This is the form used by the
    /// multiword text serialization.
    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            "eps".to_string()
        } else {
            self.0
                .iter()
                .map(Token::as_str)
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_text())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromIterator<Token> for Word {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A word up to rotation, stored as its least rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn new(w: Word) -> Self {
        let n = w.len();
        if n == 0 {
            return CyclicWord(w);
        }
        let toks = w.tokens();
        let best = (0..n)
            .min_by(|&a, &b| {
                (0..n)
                    .map(|k| &toks[(a + k) % n])
                    .cmp((0..n).map(|k| &toks[(b + k) % n]))
            })
            .unwrap_or(0);
        CyclicWord((0..n).map(|k| toks[(best + k) % n].clone()).collect())
    }

    pub fn canonical(&self) -> &Word {
        &self.0
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_share_a_canonical_form() {
        let a = CyclicWord::new(Word::parse("b c a"));
        let b = CyclicWord::new(Word::parse("a b c"));
        let c = CyclicWord::new(Word::parse("c a b"));
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.canonical(), &Word::parse("a b c"));
        assert_ne!(a, CyclicWord::new(Word::parse("a c b")));
    }

    #[test]
    fn greedy_tokenization() {
        let alpha = Alphabet::new(["a", "ab", "b"]).unwrap().with_separator("");
        assert_eq!(alpha.parse_display("abab").unwrap(), Word::parse("ab ab"));
        assert_eq!(alpha.parse_display("aab").unwrap(), Word::parse("a ab"));
        assert!(alpha.parse_display("c").is_err());
        assert_eq!(alpha.display(&Word::parse("ab a")), "aba");
    }

    #[test]
    fn foreign_tokens_are_rejected() {
        let alpha = Alphabet::new(["John", "loves"]).unwrap();
        assert!(alpha.word("John loves").is_ok());
        assert_eq!(
            alpha.word("John hates"),
            Err(AlphabetError::Foreign("hates".into()))
        );
    }

    #[test]
    fn concatenation_unit() {
        let w = Word::parse("x y");
        assert_eq!(w.concat(&Word::empty()), w);
        assert_eq!(Word::empty().concat(&w), w);
    }
}
