//! Problem files: the degree, the number of marked points and the
//! cross-ratio conditions of a counting problem, as JSON.
//!
//! ```json
//! {
//!   "degree": { "delta_d": 3 },
//!   "n": 7,
//!   "cross_ratios": [["x1", "x2", "e7", "e8"]],
//!   "seed": 0
//! }
//! ```
//!
//! A degree is `{"delta_d": d}`, `{"hirzebruch": {"s", "b", "alpha",
//! "beta"}}` or `{"polytope": {"vertices": [[x, y], ...], "partitions":
//! [[...], ...]}}` (unit partitions when omitted). A cross-ratio is a list
//! of four references, or `{"refs": [...], "length": "3/2"}` to give it a
//! positive length for the oracle.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crcount_core::degree::unit_partitions;
use crcount_core::{
    builtin_degree, degree_from_polytope, BuiltinDegree, CoreError, DegCrossRatio, Degree, EndRef, IntVec2,
    LatticePolytope,
};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unresolved reference {0}")]
    UnresolvedRef(EndRef),
    #[error("condition count mismatch: n + #cross-ratios = {points} + {lambdas} but |Δ| - 1 = {expected}")]
    ConditionCountMismatch { points: usize, lambdas: usize, expected: usize },
    #[error("degenerate cross-ratio: {0} appears twice")]
    DegenerateCrossRatio(EndRef),
    #[error("cross-ratio lengths must be positive, got {0}")]
    NonpositiveLength(BigRational),
    #[error("cross-ratio lengths must be pairwise distinct, {0} repeats")]
    RepeatedLength(BigRational),
    #[error("either all cross-ratios carry a length or none does")]
    PartialLengths,
    #[error("invalid degree: {0}")]
    Degree(#[from] CoreError),
}

/// How the degree of a problem is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSpec {
    DeltaD(u64),
    Hirzebruch {
        s: u64,
        b: u64,
        alpha: Vec<u64>,
        beta: Vec<u64>,
    },
    Polytope {
        vertices: Vec<[i64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        partitions: Option<Vec<Vec<u64>>>,
    },
}

impl DegreeSpec {
    /// The polygon `Σ` dual to the degree.
    pub fn polytope(&self) -> Result<LatticePolytope, CoreError> {
        match self {
            DegreeSpec::DeltaD(d) => LatticePolytope::standard_triangle(*d),
            DegreeSpec::Hirzebruch { s, b, .. } => LatticePolytope::hirzebruch(*s, *b),
            DegreeSpec::Polytope { vertices, .. } => {
                LatticePolytope::hull(vertices.iter().map(|&[x, y]| IntVec2::new(x, y)))
            }
        }
    }

    pub fn degree(&self) -> Result<Degree, CoreError> {
        match self {
            DegreeSpec::DeltaD(d) => builtin_degree(&BuiltinDegree::DeltaD(*d)),
            DegreeSpec::Hirzebruch { s, b, alpha, beta } => builtin_degree(&BuiltinDegree::Hirzebruch {
                s: *s,
                b: *b,
                alpha: alpha.clone(),
                beta: beta.clone(),
            }),
            DegreeSpec::Polytope { partitions, .. } => {
                let polytope = self.polytope()?;
                let partitions = partitions.clone().unwrap_or_else(|| unit_partitions(&polytope));
                degree_from_polytope(&polytope, &partitions)
            }
        }
    }

    /// Whether every end has weight one, so that the degree is `Δ(Σ)`.
    pub fn has_unit_ends(&self) -> bool {
        match self {
            DegreeSpec::DeltaD(_) => true,
            DegreeSpec::Hirzebruch { alpha, beta, .. } => alpha.iter().chain(beta).all(|&a| a == 1),
            DegreeSpec::Polytope { partitions, .. } => partitions
                .as_ref()
                .is_none_or(|p| p.iter().flatten().all(|&a| a == 1)),
        }
    }

    pub fn delta_d(&self) -> Option<u64> {
        match self {
            DegreeSpec::DeltaD(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSpec::DeltaD(d) => write!(f, "Δ_{d}"),
            DegreeSpec::Hirzebruch { s, b, alpha, beta } => {
                write!(f, "Hirzebruch(s={s}, b={b}, α={alpha:?}, β={beta:?})")
            }
            DegreeSpec::Polytope { vertices, .. } => write!(f, "Δ(conv {vertices:?})"),
        }
    }
}

/// A positive rational length, written as `"p/q"` or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LengthText", into = "String")]
pub struct Length(pub BigRational);

#[derive(Deserialize)]
#[serde(untagged)]
enum LengthText {
    Integer(i64),
    Text(String),
}

impl TryFrom<LengthText> for Length {
    type Error = String;

    fn try_from(value: LengthText) -> Result<Self, Self::Error> {
        match value {
            LengthText::Integer(i) => Ok(Length(BigRational::from_integer(i.into()))),
            LengthText::Text(s) => BigRational::from_str(&s)
                .map(Length)
                .map_err(|e| format!("bad length {s:?}: {e}")),
        }
    }
}

impl From<Length> for String {
    fn from(value: Length) -> Self {
        value.0.to_string()
    }
}

/// One cross-ratio condition of a problem file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CrossRatioSpec {
    Degenerate([EndRef; 4]),
    WithLength { refs: [EndRef; 4], length: Length },
}

impl CrossRatioSpec {
    pub fn refs(&self) -> [EndRef; 4] {
        match self {
            CrossRatioSpec::Degenerate(refs) | CrossRatioSpec::WithLength { refs, .. } => *refs,
        }
    }

    pub fn length(&self) -> Option<&BigRational> {
        match self {
            CrossRatioSpec::Degenerate(_) => None,
            CrossRatioSpec::WithLength { length, .. } => Some(&length.0),
        }
    }
}

/// The algorithms a problem can be counted with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Floor,
    LatticePath,
    Oracle,
    CrossCheck,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Floor => "floor",
            Algorithm::LatticePath => "lattice-path",
            Algorithm::Oracle => "oracle",
            Algorithm::CrossCheck => "cross-check",
        })
    }
}

/// A validated counting problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub degree: DegreeSpec,
    pub n: usize,
    #[serde(default)]
    pub cross_ratios: Vec<CrossRatioSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<Algorithm>,
}

impl ProblemFile {
    /// Checks the references, the condition count and the lengths.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let ends = self.degree.degree()?.len();
        for cr in &self.cross_ratios {
            let refs = cr.refs();
            for (i, r) in refs.iter().enumerate() {
                if refs[..i].contains(r) {
                    return Err(ProblemError::DegenerateCrossRatio(*r));
                }
                if r.leaf(self.n, ends).is_err() {
                    return Err(ProblemError::UnresolvedRef(*r));
                }
            }
        }
        if self.n + self.cross_ratios.len() + 1 != ends {
            return Err(ProblemError::ConditionCountMismatch {
                points: self.n,
                lambdas: self.cross_ratios.len(),
                expected: ends.saturating_sub(1),
            });
        }
        let lengths: Vec<&BigRational> = self.cross_ratios.iter().filter_map(CrossRatioSpec::length).collect();
        if !lengths.is_empty() && lengths.len() != self.cross_ratios.len() {
            return Err(ProblemError::PartialLengths);
        }
        for (i, l) in lengths.iter().enumerate() {
            if !l.is_positive() {
                return Err(ProblemError::NonpositiveLength((*l).clone()));
            }
            if lengths[..i].contains(l) {
                return Err(ProblemError::RepeatedLength((*l).clone()));
            }
        }
        Ok(())
    }

    /// The degenerated cross-ratios.
    pub fn lambdas(&self) -> Vec<DegCrossRatio> {
        self.cross_ratios
            .iter()
            .map(|cr| DegCrossRatio::new(cr.refs()).expect("validated problems have distinct references"))
            .collect()
    }

    /// Whether every cross-ratio carries a length.
    pub fn has_lengths(&self) -> bool {
        !self.cross_ratios.is_empty() && self.cross_ratios.iter().all(|cr| cr.length().is_some())
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let problem: ProblemFile = serde_json::from_str(text)?;
    problem.validate()?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_problem_parses() {
        let p = parse_problem(r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1", "x2", "e7", "e8"]]}"#)
            .unwrap();
        assert_eq!(p.n, 7);
        assert_eq!(p.lambdas()[0].refs()[2], EndRef::EndLabel(7));
    }

    #[test]
    fn too_many_conditions() {
        let err = parse_problem(
            r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","x3","x4"], ["x1","x2","x3","x5"]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("condition count mismatch"));
    }

    #[test]
    fn end_label_out_of_range() {
        let err = parse_problem(r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","e7","e10"]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("unresolved reference e10"));
    }

    #[test]
    fn repeated_reference() {
        let err = parse_problem(r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","x1","e8"]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("degenerate cross-ratio"));
    }

    #[test]
    fn lengths_parse_as_rationals() {
        let p = parse_problem(
            r#"{"degree": {"delta_d": 2}, "n": 4, "cross_ratios": [{"refs": ["x1","x2","x3","x4"], "length": "3/2"}]}"#,
        )
        .unwrap();
        assert!(p.has_lengths());
        let again: ProblemFile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(again, p);
    }
}
