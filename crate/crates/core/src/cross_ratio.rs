//! References to ends and the two kinds of cross-ratio conditions.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// A reference to an end of a curve: a marked point `x<j>` or a
/// non-contracted end `e<t>` carrying degree label `t`. Both are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndRef {
    MarkedPoint(usize),
    EndLabel(usize),
}

impl EndRef {
    /// Leaf index of this reference in a tree whose leaves are the `n`
    /// marked points followed by `ends` labeled ends.
    pub fn leaf(self, n: usize, ends: usize) -> Result<usize, CoreError> {
        match self {
            EndRef::MarkedPoint(j) if (1..=n).contains(&j) => Ok(j - 1),
            EndRef::EndLabel(t) if (1..=ends).contains(&t) => Ok(n + t - 1),
            other => Err(CoreError::UnresolvedRef(other)),
        }
    }

    /// Inverse of [`EndRef::leaf`].
    pub fn from_leaf(leaf: usize, n: usize) -> EndRef {
        if leaf < n {
            EndRef::MarkedPoint(leaf + 1)
        } else {
            EndRef::EndLabel(leaf - n + 1)
        }
    }

    pub fn is_point(self) -> bool {
        matches!(self, EndRef::MarkedPoint(_))
    }
}

impl fmt::Display for EndRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndRef::MarkedPoint(j) => write!(f, "x{j}"),
            EndRef::EndLabel(t) => write!(f, "e{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed end reference {0:?}; expected x<j> or e<t>")]
pub struct ParseEndRefError(pub String);

impl FromStr for EndRef {
    type Err = ParseEndRefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseEndRefError(s.to_string());
        let (kind, digits) = s.split_at_checked(1).ok_or_else(err)?;
        let index: usize = digits.parse().map_err(|_| err())?;
        if index == 0 {
            return Err(err());
        }
        match kind {
            "x" => Ok(EndRef::MarkedPoint(index)),
            "e" => Ok(EndRef::EndLabel(index)),
            _ => Err(err()),
        }
    }
}

impl Serialize for EndRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndRef {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A pairing `(a b | c d)` of four distinct references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pairing(pub [EndRef; 4]);

impl Pairing {
    pub fn new(refs: [EndRef; 4]) -> Result<Self, CoreError> {
        for i in 0..4 {
            for j in i + 1..4 {
                if refs[i] == refs[j] {
                    return Err(CoreError::RepeatedRef(refs[i]));
                }
            }
        }
        Ok(Pairing(refs))
    }

    pub fn refs(&self) -> [EndRef; 4] {
        self.0
    }

    /// The three pairings of the same four references, starting with this
    /// one: `(ab|cd)`, `(ac|bd)`, `(ad|bc)`.
    pub fn alternatives(&self) -> [Pairing; 3] {
        let [a, b, c, d] = self.0;
        [
            Pairing([a, b, c, d]),
            Pairing([a, c, b, d]),
            Pairing([a, d, b, c]),
        ]
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a} {b} | {c} {d})")
    }
}

/// A degenerated cross-ratio: a set of four references whose paths must
/// meet in a single vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegCrossRatio {
    refs: [EndRef; 4],
}

impl DegCrossRatio {
    /// Stores the references in canonical order (marked points first).
    pub fn new(mut refs: [EndRef; 4]) -> Result<Self, CoreError> {
        refs.sort();
        Pairing::new(refs)?;
        Ok(DegCrossRatio { refs })
    }

    pub fn refs(&self) -> [EndRef; 4] {
        self.refs
    }

    /// The default pairing `(β1 β2 | β3 β4)` in canonical order.
    pub fn default_pairing(&self) -> Pairing {
        Pairing(self.refs)
    }

    pub fn point_count(&self) -> usize {
        self.refs.iter().filter(|r| r.is_point()).count()
    }
}

impl fmt::Display for DegCrossRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.refs;
        write!(f, "{{{a},{b},{c},{d}}}")
    }
}

/// A cross-ratio condition with positive length on a pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossRatio {
    pub pairing: Pairing,
    pub length: BigRational,
}

impl CrossRatio {
    pub fn new(pairing: Pairing, length: BigRational) -> Result<Self, CoreError> {
        if !length.is_positive() {
            return Err(CoreError::InvalidTree(
                "cross-ratio length must be positive".into(),
            ));
        }
        Ok(CrossRatio { pairing, length })
    }

    /// The degenerated condition obtained by forgetting the length.
    pub fn degenerate(&self) -> DegCrossRatio {
        DegCrossRatio::new(self.pairing.0).expect("pairing refs are distinct")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["x1", "e12", "x7"] {
            assert_eq!(s.parse::<EndRef>().unwrap().to_string(), s);
        }
        assert!("y1".parse::<EndRef>().is_err());
        assert!("x0".parse::<EndRef>().is_err());
        assert!("x".parse::<EndRef>().is_err());
    }

    #[test]
    fn leaves_resolve_against_context() {
        assert_eq!(EndRef::MarkedPoint(2).leaf(7, 9).unwrap(), 1);
        assert_eq!(EndRef::EndLabel(1).leaf(7, 9).unwrap(), 7);
        assert!(EndRef::EndLabel(10).leaf(7, 9).is_err());
        assert_eq!(EndRef::from_leaf(7, 7), EndRef::EndLabel(1));
    }

    #[test]
    fn canonical_order_puts_points_first() {
        let l = DegCrossRatio::new([
            EndRef::EndLabel(7),
            EndRef::MarkedPoint(2),
            EndRef::EndLabel(8),
            EndRef::MarkedPoint(1),
        ])
        .unwrap();
        assert_eq!(l.to_string(), "{x1,x2,e7,e8}");
        assert_eq!(l.point_count(), 2);
    }

    #[test]
    fn repeated_refs_are_rejected() {
        let x = EndRef::MarkedPoint(1);
        assert!(
            DegCrossRatio::new([x, x, EndRef::MarkedPoint(2), EndRef::MarkedPoint(3)]).is_err()
        );
    }
}
