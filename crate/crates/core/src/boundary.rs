//! Boundaries: finite ordered sets of endpoints with left/right polarity.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("left endpoint {index} outside 1..={cardinality}")]
    OutOfRange { index: usize, cardinality: usize },
    #[error("malformed boundary text `{0}`")]
    Syntax(String),
}

/// Indices are 1-based. `left[i - 1]` records whether endpoint `i` is a left endpoint.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Boundary {
    left: Vec<bool>,
}

/// The shifted embedding: `i` if `i < k`, otherwise `i + s`.
pub fn shift(k: usize, s: usize, i: usize) -> usize {
    if i < k {
        i
    } else {
        i + s
    }
}

impl Boundary {
    pub fn unit() -> Self {
        Boundary { left: Vec::new() }
    }

    pub fn new(cardinality: usize, left_set: &[usize]) -> Result<Self, BoundaryError> {
        let mut left = vec![false; cardinality];
        for &i in left_set {
            if i == 0 || i > cardinality {
                return Err(BoundaryError::OutOfRange {
                    index: i,
                    cardinality,
                });
            }
            left[i - 1] = true;
        }
        Ok(Boundary { left })
    }

    pub fn from_polarities(left: Vec<bool>) -> Self {
        Boundary { left }
    }

    pub fn polarities(&self) -> &[bool] {
        &self.left
    }

    pub fn cardinality(&self) -> usize {
        self.left.len()
    }

    pub fn is_unit(&self) -> bool {
        self.left.is_empty()
    }

    pub fn is_left(&self, i: usize) -> bool {
        i >= 1 && i <= self.left.len() && self.left[i - 1]
    }

    pub fn is_right(&self, i: usize) -> bool {
        i >= 1 && i <= self.left.len() && !self.left[i - 1]
    }

    pub fn left_set(&self) -> Vec<usize> {
        (1..=self.cardinality()).filter(|&i| self.is_left(i)).collect()
    }

    pub fn right_set(&self) -> Vec<usize> {
        (1..=self.cardinality()).filter(|&i| self.is_right(i)).collect()
    }

    pub fn tensor(&self, other: &Boundary) -> Boundary {
        let mut left = self.left.clone();
        left.extend_from_slice(&other.left);
        Boundary { left }
    }

    /// Order and polarity reversal.
    pub fn dual(&self) -> Boundary {
        Boundary {
            left: self.left.iter().rev().map(|l| !l).collect(),
        }
    }

    /// Whether `i + Y` sits inside `self` with matching polarities.
    pub fn is_subboundary(&self, i: usize, y: &Boundary) -> bool {
        i + y.cardinality() <= self.cardinality()
            && y
                .left
                .iter()
                .enumerate()
                .all(|(k, &l)| self.left[i + k] == l)
    }

    /// The sub-boundary of `len` points starting after `offset` points.
    pub fn slice(&self, offset: usize, len: usize) -> Boundary {
        Boundary {
            left: self.left[offset..offset + len].to_vec(),
        }
    }

    pub fn to_text(&self) -> String {
        let list: Vec<String> = self.left_set().iter().map(|i| i.to_string()).collect();
        format!("{} left={}", self.cardinality(), list.join(","))
    }

    /// Parses `<n> left=<comma-list>`.
    pub fn parse_text(s: &str) -> Result<Self, BoundaryError> {
        let err = || BoundaryError::Syntax(s.to_string());
        let mut parts = s.split_whitespace();
        let n: usize = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
        let lefts = match parts.next() {
            None => Vec::new(),
            Some(p) => {
                let list = p.strip_prefix("left=").ok_or_else(err)?;
                list.split(',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<usize>().map_err(|_| err()))
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        if parts.next().is_some() {
            return Err(err());
        }
        Boundary::new(n, &lefts)
    }
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.left_set().iter().map(|i| i.to_string()).collect();
        write!(f, "({},{{{}}})", self.cardinality(), list.join(","))
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, l: &[usize]) -> Boundary {
        Boundary::new(n, l).unwrap()
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(b(2, &[2]).tensor(&b(2, &[2])), b(4, &[2, 4]));
        assert_eq!(Boundary::unit().tensor(&b(3, &[1])), b(3, &[1]));
        assert_eq!(b(4, &[3]).tensor(&b(4, &[2])), b(8, &[3, 6]));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(b(2, &[2]).dual(), b(2, &[2]));
        assert_eq!(Boundary::unit().dual(), Boundary::unit());
        // |X|+1-X_r with X_r = {1,2,4}
        assert_eq!(b(4, &[3]).dual(), b(4, &[1, 3, 4]));
    }

    #[test]
    fn subboundary_examples() {
        assert!(b(4, &[1, 3]).is_subboundary(2, &b(2, &[1])));
        let x = b(5, &[2, 5]);
        assert!(x.is_subboundary(0, &x));
        assert!(!b(2, &[1]).is_subboundary(1, &b(2, &[1])));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(2, 2, 1), 1);
        assert_eq!(shift(2, 2, 2), 4);
        assert_eq!(shift(3, 4, 5), 9);
    }

    #[test]
    fn text_round_trip() {
        let x = b(6, &[1, 4, 6]);
        assert_eq!(x.to_text(), "6 left=1,4,6");
        assert_eq!(Boundary::parse_text(&x.to_text()).unwrap(), x);
        assert_eq!(Boundary::parse_text("3 left=").unwrap(), b(3, &[]));
        assert!(Boundary::parse_text("2 left=3").is_err());
    }
}
