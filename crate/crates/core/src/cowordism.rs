//! Cowordisms `X → Y`: multiwords on `X⊥⊗Y`, with the compact closed structure.

use std::fmt;

use thiserror::Error;

use crate::boundary::Boundary;
use crate::multiword::{shifted, Edge, Multiword, MultiwordError};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("boundary mismatch: expected {expected}, found {found}")]
    BoundaryMismatch { expected: Boundary, found: Boundary },
    #[error("split point {split} exceeds boundary cardinality {cardinality}")]
    SplitOutOfRange { split: usize, cardinality: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Multiword(#[from] MultiwordError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cowordism {
    dom: Boundary,
    cod: Boundary,
    body: Multiword,
}

impl Cowordism {
    pub fn new(dom: Boundary, cod: Boundary, body: Multiword) -> Result<Self, CategoryError> {
        let expected = dom.dual().tensor(&cod);
        if body.boundary() != &expected {
            return Err(CategoryError::BoundaryMismatch {
                expected,
                found: body.boundary().clone(),
            });
        }
        Ok(Cowordism { dom, cod, body })
    }

    /// A closed multiword viewed as a cowordism from the unit.
    pub fn closed(body: Multiword) -> Self {
        Cowordism {
            dom: Boundary::unit(),
            cod: body.boundary().clone(),
            body,
        }
    }

    pub fn dom(&self) -> &Boundary {
        &self.dom
    }

    pub fn cod(&self) -> &Boundary {
        &self.cod
    }

    pub fn body(&self) -> &Multiword {
        &self.body
    }

    pub fn into_body(self) -> Multiword {
        self.body
    }

    pub fn is_regular(&self) -> bool {
        self.body.is_regular()
    }

    pub fn identity(x: &Boundary) -> Cowordism {
        let n = x.cardinality();
        let mut edges = Vec::with_capacity(n);
        for i in 1..=n {
            if x.is_left(i) {
                edges.push(Edge::new(n + i, Word::empty(), n - i + 1));
            } else {
                edges.push(Edge::new(n - i + 1, Word::empty(), n + i));
            }
        }
        Cowordism {
            dom: x.clone(),
            cod: x.clone(),
            body: Multiword::from_parts(x.dual().tensor(x), edges, Vec::new()),
        }
    }

    /// `self ; tau`, gluing `self.cod` to `tau.dom`.
    pub fn compose(&self, tau: &Cowordism) -> Result<Cowordism, CategoryError> {
        if self.cod != tau.dom {
            return Err(CategoryError::BoundaryMismatch {
                expected: self.cod.clone(),
                found: tau.dom.clone(),
            });
        }
        let glued = self.body.tensor(&tau.body);
        let body = glued.iterated_contraction(self.dom.cardinality(), &self.cod.dual())?;
        Ok(Cowordism {
            dom: self.dom.clone(),
            cod: tau.cod.clone(),
            body,
        })
    }

    /// `σ⊗τ : X⊗Z → Y⊗T`.
    pub fn tensor(&self, tau: &Cowordism) -> Cowordism {
        let (x, y, z) = (
            self.dom.cardinality(),
            self.cod.cardinality(),
            tau.dom.cardinality(),
        );
        let mut edges: Vec<Edge> = self.body.edges().iter().map(|e| shifted(1, z, e)).collect();
        edges.extend(tau.body.edges().iter().map(|e| shifted(z + 1, x + y, e)));
        let mut singular = self.body.singular().to_vec();
        singular.extend(tau.body.singular().iter().cloned());
        let dom = self.dom.tensor(&tau.dom);
        let cod = self.cod.tensor(&tau.cod);
        let boundary = dom.dual().tensor(&cod);
        Cowordism {
            dom,
            cod,
            body: Multiword::from_parts(boundary, edges, singular),
        }
    }

    /// The symmetry `X⊗Y → Y⊗X`.
    pub fn symmetry(x: &Boundary, y: &Boundary) -> Cowordism {
        let (nx, ny) = (x.cardinality(), y.cardinality());
        let mut edges = Vec::with_capacity(nx + ny);
        for i in 1..=ny {
            if y.is_left(i) {
                edges.push(Edge::new(nx + ny + i, Word::empty(), ny - i + 1));
            } else {
                edges.push(Edge::new(ny - i + 1, Word::empty(), nx + ny + i));
            }
        }
        for i in 1..=nx {
            if x.is_left(i) {
                edges.push(Edge::new(nx + 2 * ny + i, Word::empty(), ny + nx - i + 1));
            } else {
                edges.push(Edge::new(ny + nx - i + 1, Word::empty(), nx + 2 * ny + i));
            }
        }
        let dom = x.tensor(y);
        let cod = y.tensor(x);
        let boundary = dom.dual().tensor(&cod);
        Cowordism {
            dom,
            cod,
            body: Multiword::from_parts(boundary, edges, Vec::new()),
        }
    }

    /// `σ⊥ : Y⊥ → X⊥`.
    pub fn dual(&self) -> Cowordism {
        let (x, y) = (self.dom.cardinality(), self.cod.cardinality());
        Cowordism {
            dom: self.cod.dual(),
            cod: self.dom.dual(),
            body: self.body.permute_blocks(&[x, y], &[1, 0]),
        }
    }

    /// `Hom(Y⊗X, Z) → Hom(X, Y⊥⊗Z)` where `|Y| = split`. The body is unchanged.
    pub fn curry(&self, split: usize) -> Result<Cowordism, CategoryError> {
        let n = self.dom.cardinality();
        if split > n {
            return Err(CategoryError::SplitOutOfRange {
                split,
                cardinality: n,
            });
        }
        let y = self.dom.slice(0, split);
        let x = self.dom.slice(split, n - split);
        Ok(Cowordism {
            dom: x,
            cod: y.dual().tensor(&self.cod),
            body: self.body.clone(),
        })
    }

    /// `Hom(X, W⊗Z) → Hom(W⊥⊗X, Z)` where `|W| = split`. Inverse of [`Cowordism::curry`].
    pub fn uncurry(&self, split: usize) -> Result<Cowordism, CategoryError> {
        let n = self.cod.cardinality();
        if split > n {
            return Err(CategoryError::SplitOutOfRange {
                split,
                cardinality: n,
            });
        }
        let w = self.cod.slice(0, split);
        let z = self.cod.slice(split, n - split);
        Ok(Cowordism {
            dom: w.dual().tensor(&self.dom),
            cod: z,
            body: self.body.clone(),
        })
    }

    /// The counit `A⊗A⊥ → 1`.
    pub fn counit(a: &Boundary) -> Cowordism {
        Cowordism::identity(&a.dual())
            .uncurry(a.cardinality())
            .expect("split equals cardinality")
    }

    /// The unit `1 → A⊥⊗A`.
    pub fn unit_of(a: &Boundary) -> Cowordism {
        Cowordism::identity(a)
            .curry(a.cardinality())
            .expect("split equals cardinality")
    }

    /// Applies `f` to every label of the body.
    pub fn map_labels(&self, f: impl Fn(&Word) -> Word) -> Cowordism {
        Cowordism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: self.body.map_labels(f),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "dom {}\ncod {}\nboundary {}\n",
            self.dom.to_text(),
            self.cod.to_text(),
            self.body.boundary().to_text()
        );
        self.body.write_body(&mut out);
        out
    }

    pub fn parse_text(s: &str) -> Result<Cowordism, CategoryError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<Boundary, CategoryError> {
            let (ln, line) = lines.next().ok_or(CategoryError::Syntax {
                line: 0,
                message: format!("missing `{key}` line"),
            })?;
            let rest = line.strip_prefix(key).ok_or(CategoryError::Syntax {
                line: ln,
                message: format!("expected `{key}`"),
            })?;
            Boundary::parse_text(rest)
                .map_err(|e| CategoryError::Multiword(MultiwordError::Boundary(e)))
        };
        let dom = header("dom")?;
        let cod = header("cod")?;
        let boundary = header("boundary")?;
        let (edges, singular) = crate::multiword::parse_body_lines(lines)?;
        let body = Multiword::new(boundary, edges, singular)?;
        Cowordism::new(dom, cod, body)
    }

    /// Graphviz rendering: domain points on the left, codomain points on the right.
    pub fn to_dot(&self) -> String {
        let nx = self.dom.cardinality();
        let mut out = String::from("digraph cowordism {\n  rankdir=LR;\n  node [shape=point];\n");
        let name = |v: usize| {
            if v <= nx {
                format!("dom{}", nx - v + 1)
            } else {
                format!("cod{}", v - nx)
            }
        };
        out.push_str("  subgraph cluster_dom { label=\"dom\";");
        for i in 1..=nx {
            out.push_str(&format!(" dom{i};"));
        }
        out.push_str(" }\n  subgraph cluster_cod { label=\"cod\";");
        for i in 1..=self.cod.cardinality() {
            out.push_str(&format!(" cod{i};"));
        }
        out.push_str(" }\n");
        for e in self.body.edges() {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                name(e.source),
                name(e.target),
                dot_escape(&e.label.to_text())
            ));
        }
        for (k, c) in self.body.singular().iter().enumerate() {
            out.push_str(&format!(
                "  cycle{k} [shape=circle, label=\"{}\"];\n",
                dot_escape(&c.canonical().to_text())
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl fmt::Debug for Cowordism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} : {:?}", self.dom, self.cod, self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, l: &[usize]) -> Boundary {
        Boundary::new(n, l).unwrap()
    }

    fn letter(w: &str) -> Cowordism {
        Cowordism::new(b(1, &[]), b(1, &[]), Multiword::single_edge(Word::parse(w))).unwrap()
    }

    fn edges(c: &Cowordism) -> Vec<(usize, String, usize)> {
        c.body()
            .edges()
            .iter()
            .map(|e| (e.source, e.label.to_text(), e.target))
            .collect()
    }

    #[test]
    fn identity_on_one_right_point() {
        let id = Cowordism::identity(&b(1, &[]));
        assert_eq!(id.body().boundary(), &b(2, &[1]));
        assert_eq!(edges(&id), vec![(1, "eps".to_string(), 2)]);
        assert_eq!(Cowordism::identity(&Boundary::unit()).body(), &Multiword::empty());
    }

    #[test]
    fn identity_has_one_wire_per_point() {
        let x = b(4, &[3]);
        let id = Cowordism::identity(&x);
        assert_eq!(id.body().edges().len(), 4);
        assert_eq!(
            edges(&id),
            vec![
                (1, "eps".to_string(), 8),
                (3, "eps".to_string(), 6),
                (4, "eps".to_string(), 5),
                (7, "eps".to_string(), 2)
            ]
        );
    }

    #[test]
    fn composing_letters_concatenates() {
        let ab = letter("a").compose(&letter("b")).unwrap();
        assert_eq!(edges(&ab), vec![(1, "a b".to_string(), 2)]);
    }

    #[test]
    fn compose_checks_boundaries() {
        let id2 = Cowordism::identity(&b(2, &[1]));
        assert!(matches!(
            letter("a").compose(&id2),
            Err(CategoryError::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn tensor_of_letters() {
        let t = letter("a").tensor(&letter("b"));
        assert_eq!(t.body().boundary(), &b(4, &[1, 2]));
        // σ₀ shifted by |Z| = 1 gives [2,a,3]; τ₀ through shift(2, 2, ·) gives [1,b,4]
        assert_eq!(
            edges(&t),
            vec![(1, "b".to_string(), 4), (2, "a".to_string(), 3)]
        );
    }

    #[test]
    fn symmetry_on_two_points_crosses() {
        let x = b(1, &[]);
        let s = Cowordism::symmetry(&x, &x);
        assert_eq!(
            edges(&s),
            vec![(1, "eps".to_string(), 3), (2, "eps".to_string(), 4)]
        );
        assert_eq!(Cowordism::symmetry(&x, &Boundary::unit()), Cowordism::identity(&x));
    }

    #[test]
    fn dual_of_letter() {
        let d = letter("a").dual();
        assert_eq!(d.dom(), &b(1, &[1]));
        assert_eq!(d.cod(), &b(1, &[1]));
        assert_eq!(edges(&d), vec![(2, "a".to_string(), 1)]);
    }

    #[test]
    fn curry_of_identity_is_the_name() {
        let y = b(1, &[]);
        let name = Cowordism::identity(&y).curry(1).unwrap();
        assert_eq!(name.dom(), &Boundary::unit());
        assert_eq!(name.cod(), &y.dual().tensor(&y));
        assert_eq!(name.uncurry(1).unwrap(), Cowordism::identity(&y));
        assert!(name.curry(1).is_err());
    }

    #[test]
    fn snake_equations_on_single_points() {
        for x in [b(1, &[]), b(1, &[1])] {
            // (η ⊗ id) ; (id ⊗ ε) = id on X, with η : 1 → X⊗X⊥ and ε : X⊥⊗X → 1
            let eta = Cowordism::unit_of(&x.dual());
            let eps = Cowordism::counit(&x.dual());
            let id = Cowordism::identity(&x);
            let left = eta.tensor(&id);
            let right = id.tensor(&eps);
            assert_eq!(left.compose(&right).unwrap(), id);
        }
    }

    #[test]
    fn text_round_trip() {
        let s = Cowordism::symmetry(&b(2, &[1]), &b(1, &[])).compose(&Cowordism::identity(&b(3, &[2]))).unwrap();
        assert_eq!(Cowordism::parse_text(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn dot_mentions_every_edge() {
        let d = letter("a").to_dot();
        assert!(d.contains("dom1 -> cod1 [label=\"a\"]"));
    }
}
