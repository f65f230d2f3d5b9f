//! Multiwords: word-labelled perfect matchings on a boundary plus a multiset
//! of cyclic words, with tensor and contraction.

use std::fmt;

use thiserror::Error;

use crate::boundary::{shift, Boundary, BoundaryError};
use crate::word::{CyclicWord, Word};

/// An edge `[source, label, target]` running from a left endpoint to a right endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub label: Word,
    pub target: usize,
}

impl Edge {
    pub fn new(source: usize, label: Word, target: usize) -> Self {
        Edge {
            source,
            label,
            target,
        }
    }
}

/// First broken invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("vertex {vertex} is outside the boundary of cardinality {cardinality}")]
    OutOfRange { vertex: usize, cardinality: usize },
    #[error("vertex {vertex} has degree {degree}")]
    Degree { vertex: usize, degree: usize },
    #[error("vertex {vertex} is used as a {used} endpoint but has the opposite polarity")]
    Polarity { vertex: usize, used: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiwordError {
    #[error("invalid multiword: {0}")]
    Invalid(#[from] Violation),
    #[error("contraction position {n} out of range for cardinality {cardinality}")]
    ContractionOutOfRange { n: usize, cardinality: usize },
    #[error("positions {n} and {} have the same polarity", n + 1)]
    SamePolarity { n: usize },
    #[error("block at offset {offset} is not a contractible subboundary")]
    NotSubboundary { offset: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

/// Checks that `edges` form a polarity-respecting perfect matching on `boundary`.
pub fn validate(boundary: &Boundary, edges: &[Edge]) -> Result<(), Violation> {
    let n = boundary.cardinality();
    let mut degree = vec![0usize; n + 1];
    for e in edges {
        for v in [e.source, e.target] {
            if v == 0 || v > n {
                return Err(Violation::OutOfRange {
                    vertex: v,
                    cardinality: n,
                });
            }
        }
        if !boundary.is_left(e.source) {
            return Err(Violation::Polarity {
                vertex: e.source,
                used: "source",
            });
        }
        if !boundary.is_right(e.target) {
            return Err(Violation::Polarity {
                vertex: e.target,
                used: "target",
            });
        }
        degree[e.source] += 1;
        degree[e.target] += 1;
    }
    for (v, &d) in degree.iter().enumerate().skip(1) {
        if d != 1 {
            return Err(Violation::Degree {
                vertex: v,
                degree: d,
            });
        }
    }
    Ok(())
}

/// Edges are kept sorted by source and cycles sorted, so structural equality
/// is equality of the underlying set and multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiword {
    boundary: Boundary,
    edges: Vec<Edge>,
    singular: Vec<CyclicWord>,
}

impl Multiword {
    pub fn new(
        boundary: Boundary,
        edges: Vec<Edge>,
        singular: Vec<CyclicWord>,
    ) -> Result<Self, MultiwordError> {
        validate(&boundary, &edges)?;
        Ok(Self::from_parts(boundary, edges, singular))
    }

    /// Builds a multiword from parts known to be valid.
    pub(crate) fn from_parts(
        boundary: Boundary,
        mut edges: Vec<Edge>,
        mut singular: Vec<CyclicWord>,
    ) -> Self {
        edges.sort();
        singular.sort();
        debug_assert_eq!(validate(&boundary, &edges), Ok(()));
        Multiword {
            boundary,
            edges,
            singular,
        }
    }

    pub fn empty() -> Self {
        Multiword {
            boundary: Boundary::unit(),
            edges: Vec::new(),
            singular: Vec::new(),
        }
    }

    /// The multiword `{[1, w, 2]}` on `(2,{1})`.
    pub fn single_edge(w: Word) -> Self {
        Multiword {
            boundary: Boundary::from_polarities(vec![true, false]),
            edges: vec![Edge::new(1, w, 2)],
            singular: Vec::new(),
        }
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn singular(&self) -> &[CyclicWord] {
        &self.singular
    }

    pub fn is_regular(&self) -> bool {
        self.singular.is_empty()
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate(&self.boundary, &self.edges)
    }

    pub fn edge_from(&self, source: usize) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&source, |e| e.source)
            .ok()
            .map(|k| &self.edges[k])
    }

    pub fn edge_to(&self, target: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.target == target)
    }

    /// Total number of tokens over all edge labels and cycles.
    pub fn label_length(&self) -> usize {
        self.edges.iter().map(|e| e.label.len()).sum::<usize>()
            + self
                .singular
                .iter()
                .map(|c| c.canonical().len())
                .sum::<usize>()
    }

    /// Disjoint union; the second operand's indices are shifted by `|X|`.
    pub fn tensor(&self, other: &Multiword) -> Multiword {
        let off = self.boundary.cardinality();
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| Edge::new(e.source + off, e.label.clone(), e.target + off)),
        );
        let mut singular = self.singular.clone();
        singular.extend(other.singular.iter().cloned());
        Self::from_parts(self.boundary.tensor(&other.boundary), edges, singular)
    }

    /// Glues positions `n` and `n + 1`.
    pub fn elementary_contraction(&self, n: usize) -> Result<Multiword, MultiwordError> {
        let card = self.boundary.cardinality();
        if n == 0 || n >= card {
            return Err(MultiwordError::ContractionOutOfRange {
                n,
                cardinality: card,
            });
        }
        let (x, y) = match (self.boundary.is_left(n), self.boundary.is_left(n + 1)) {
            (false, true) => (n, n + 1),
            (true, false) => (n + 1, n),
            _ => return Err(MultiwordError::SamePolarity { n }),
        };
        let mut singular = self.singular.clone();
        let mut edges: Vec<Edge> = Vec::with_capacity(self.edges.len());
        let mut into_x = None;
        let mut out_of_y = None;
        for e in &self.edges {
            if e.source == y && e.target == x {
                singular.push(CyclicWord::new(e.label.clone()));
            } else if e.target == x {
                into_x = Some(e);
            } else if e.source == y {
                out_of_y = Some(e);
            } else {
                edges.push(e.clone());
            }
        }
        if let (Some(a), Some(b)) = (into_x, out_of_y) {
            edges.push(Edge::new(a.source, a.label.concat(&b.label), b.target));
        }
        let renumber = |i: usize| if i > n + 1 { i - 2 } else { i };
        for e in &mut edges {
            e.source = renumber(e.source);
            e.target = renumber(e.target);
        }
        let mut pol = self.boundary.polarities().to_vec();
        pol.drain(n - 1..n + 1);
        Ok(Self::from_parts(Boundary::from_polarities(pol), edges, singular))
    }

    /// Contracts the block `i + Y⊥⊗Y` pair by pair from the middle outwards.
    pub fn iterated_contraction(&self, i: usize, y: &Boundary) -> Result<Multiword, MultiwordError> {
        let block = y.dual().tensor(y);
        if !self.boundary.is_subboundary(i, &block) {
            return Err(MultiwordError::NotSubboundary { offset: i });
        }
        let mut m = self.clone();
        for k in (1..=y.cardinality()).rev() {
            m = m.elementary_contraction(i + k)?;
        }
        Ok(m)
    }

    /// Renumbers endpoints through a bijection `perm[old - 1] = new` onto `boundary`.
    /// The caller guarantees polarities are preserved.
    pub(crate) fn renumber(&self, boundary: Boundary, perm: &[usize]) -> Multiword {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.source - 1], e.label.clone(), perm[e.target - 1]))
            .collect();
        Self::from_parts(boundary, edges, self.singular.clone())
    }

    /// Reorders consecutive blocks of the boundary. `sizes` lists block sizes in
    /// current order and `order[k]` names the current block placed at slot `k`.
    pub fn permute_blocks(&self, sizes: &[usize], order: &[usize]) -> Multiword {
        let (perm, boundary) = block_permutation(&self.boundary, sizes, order);
        self.renumber(boundary, &perm)
    }

    /// Adds a cycle to the singular part.
    pub fn with_cycle(&self, w: Word) -> Multiword {
        let mut singular = self.singular.clone();
        singular.push(CyclicWord::new(w));
        Self::from_parts(self.boundary.clone(), self.edges.clone(), singular)
    }

    /// Applies `f` to every edge label and cycle.
    pub fn map_labels(&self, f: impl Fn(&Word) -> Word) -> Multiword {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.source, f(&e.label), e.target))
            .collect();
        let singular = self
            .singular
            .iter()
            .map(|c| CyclicWord::new(f(c.canonical())))
            .collect();
        Self::from_parts(self.boundary.clone(), edges, singular)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("boundary {}\n", self.boundary.to_text());
        self.write_body(&mut out);
        out
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        for e in &self.edges {
            out.push_str(&format!("{} -> {} : {}\n", e.source, e.target, e.label.to_text()));
        }
        for c in &self.singular {
            out.push_str(&format!("cycle : {}\n", c.canonical().to_text()));
        }
    }

    /// Parses the text form produced by [`Multiword::to_text`].
    pub fn parse_text(s: &str) -> Result<Multiword, MultiwordError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or(MultiwordError::Syntax {
            line: 1,
            message: "missing boundary header".into(),
        })?;
        let rest = header.strip_prefix("boundary").ok_or(MultiwordError::Syntax {
            line: ln,
            message: "expected `boundary`".into(),
        })?;
        let boundary = Boundary::parse_text(rest)?;
        let (edges, singular) = parse_body_lines(lines)?;
        Multiword::new(boundary, edges, singular)
    }
}

pub(crate) fn parse_body_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<(Vec<Edge>, Vec<CyclicWord>), MultiwordError> {
    let mut edges = Vec::new();
    let mut singular = Vec::new();
    for (ln, line) in lines {
        let syntax = |m: &str| MultiwordError::Syntax {
            line: ln,
            message: m.to_string(),
        };
        let (lhs, label) = line.split_once(':').ok_or_else(|| syntax("expected `:`"))?;
        let label = Word::parse(label);
        let lhs = lhs.trim();
        if lhs == "cycle" {
            singular.push(CyclicWord::new(label));
            continue;
        }
        let (s, t) = lhs.split_once("->").ok_or_else(|| syntax("expected `->`"))?;
        let s = s.trim().parse().map_err(|_| syntax("bad source index"))?;
        let t = t.trim().parse().map_err(|_| syntax("bad target index"))?;
        edges.push(Edge::new(s, label, t));
    }
    Ok((edges, singular))
}

/// Computes the renumbering for a block reordering, with the resulting boundary.
pub(crate) fn block_permutation(
    boundary: &Boundary,
    sizes: &[usize],
    order: &[usize],
) -> (Vec<usize>, Boundary) {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    debug_assert_eq!(acc, boundary.cardinality());
    let mut perm = vec![0; acc];
    let mut pol = Vec::with_capacity(acc);
    let mut next = 1;
    for &b in order {
        for k in 0..sizes[b] {
            perm[starts[b] + k] = next;
            next += 1;
            pol.push(boundary.polarities()[starts[b] + k]);
        }
    }
    (perm, Boundary::from_polarities(pol))
}

/// Applies `shift(k, s, ·)` to both endpoints of an edge.
pub fn shifted(k: usize, s: usize, e: &Edge) -> Edge {
    Edge::new(shift(k, s, e.source), e.label.clone(), shift(k, s, e.target))
}

impl fmt::Debug for Multiword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {{", self.boundary)?;
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " [{},{},{}]", e.source, e.label.to_text(), e.target)?;
        }
        for c in &self.singular {
            write!(f, " {:?}", c)?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, l: &[usize]) -> Boundary {
        Boundary::new(n, l).unwrap()
    }

    fn mw(n: usize, l: &[usize], edges: &[(usize, &str, usize)]) -> Multiword {
        Multiword::new(
            b(n, l),
            edges
                .iter()
                .map(|&(s, w, t)| Edge::new(s, Word::parse(w), t))
                .collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn tensor_shifts_second_operand() {
        let m = mw(2, &[1], &[(1, "a", 2)]);
        let n = mw(2, &[1], &[(1, "b", 2)]);
        assert_eq!(m.tensor(&n), mw(4, &[1, 3], &[(1, "a", 2), (3, "b", 4)]));
        assert_eq!(Multiword::empty().tensor(&n), n);
    }

    #[test]
    fn tensor_adds_cycle_multiplicities() {
        let m = Multiword::empty().with_cycle(Word::parse("u"));
        let t = m.tensor(&m);
        assert_eq!(t.singular().len(), 2);
        assert_eq!(t.singular()[0], t.singular()[1]);
    }

    #[test]
    fn contraction_fuses_edges() {
        let m = mw(4, &[1, 3], &[(1, "a b", 2), (3, "c", 4)]);
        assert_eq!(
            m.elementary_contraction(2).unwrap(),
            mw(2, &[1], &[(1, "a b c", 2)])
        );
        let m = mw(4, &[1, 3], &[(1, "w", 2), (3, "eps", 4)]);
        assert_eq!(m.elementary_contraction(2).unwrap(), mw(2, &[1], &[(1, "w", 2)]));
    }

    #[test]
    fn contraction_closes_cycles() {
        let m = mw(2, &[2], &[(2, "w", 1)]);
        let c = m.elementary_contraction(1).unwrap();
        assert_eq!(c.boundary(), &Boundary::unit());
        assert!(c.edges().is_empty());
        assert_eq!(c.singular(), &[CyclicWord::new(Word::parse("w"))]);
    }

    #[test]
    fn contraction_rejects_bad_positions() {
        let m = mw(4, &[1, 3], &[(1, "a", 2), (3, "b", 4)]);
        assert!(matches!(
            m.elementary_contraction(4),
            Err(MultiwordError::ContractionOutOfRange { .. })
        ));
        let m = mw(4, &[1, 2], &[(1, "a", 3), (2, "b", 4)]);
        assert_eq!(
            m.elementary_contraction(1),
            Err(MultiwordError::SamePolarity { n: 1 })
        );
    }

    #[test]
    fn iterated_contraction_base_cases() {
        let m = mw(4, &[1, 3], &[(1, "a", 2), (3, "b", 4)]);
        assert_eq!(m.iterated_contraction(1, &Boundary::unit()).unwrap(), m);
        let y = b(1, &[1]);
        assert_eq!(
            m.iterated_contraction(1, &y).unwrap(),
            m.elementary_contraction(2).unwrap()
        );
        assert!(m.iterated_contraction(0, &y).is_err());
    }

    #[test]
    fn validate_reports_first_violation() {
        let bd = b(3, &[1]);
        let edges = vec![
            Edge::new(1, Word::parse("a"), 2),
            Edge::new(1, Word::parse("b"), 3),
        ];
        assert_eq!(
            validate(&bd, &edges),
            Err(Violation::Degree {
                vertex: 1,
                degree: 2
            })
        );
        let edges = vec![Edge::new(2, Word::parse("a"), 1)];
        assert_eq!(
            validate(&b(2, &[1]), &edges),
            Err(Violation::Polarity {
                vertex: 2,
                used: "source"
            })
        );
    }

    #[test]
    fn text_round_trip() {
        let m = mw(4, &[1, 4], &[(1, "a b", 3), (4, "eps", 2)]).with_cycle(Word::parse("c d"));
        let text = m.to_text();
        assert_eq!(
            text,
            "boundary 4 left=1,4\n1 -> 3 : a b\n4 -> 2 : eps\ncycle : c d\n"
        );
        assert_eq!(Multiword::parse_text(&text).unwrap(), m);
    }

    #[test]
    fn block_permutation_moves_labels() {
        let m = mw(4, &[1, 3], &[(1, "a", 2), (3, "b", 4)]);
        let p = m.permute_blocks(&[2, 2], &[1, 0]);
        assert_eq!(p, mw(4, &[1, 3], &[(1, "b", 2), (3, "a", 4)]));
    }
}
