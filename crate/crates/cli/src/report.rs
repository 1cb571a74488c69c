//! The machine-readable result of a run.

use serde::{Deserialize, Serialize};

use crate::problem::{Algorithm, ProblemFile};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// What a record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    /// A class of floor diagrams differing only in end labels.
    FloorDiagram,
    /// A lattice path subdivision with its dual curve.
    Subdivision,
    /// A curve found by the brute-force oracle.
    Curve,
}

/// One counted object. `contribution = multiplicity * labelings`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub kind: RecordKind,
    /// The combinatorial type in words.
    pub description: String,
    pub multiplicity: u64,
    /// Product of the local ev-multiplicities, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_ev: Option<u64>,
    /// Product of the resolution weights, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<u64>,
    /// Number of labeled objects the record stands for.
    pub labelings: u64,
    pub contribution: u64,
    pub detail: serde_json::Value,
}

/// The labeled count divided by the number of relabelings of ends that
/// no cross-ratio refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnlabeledCount {
    /// An integer, or a fraction `p/q` when the factor does not divide.
    pub count: String,
    pub relabeling_factor: u64,
}

/// The count of one algorithm in a cross-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmCount {
    pub algorithm: Algorithm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultReport {
    pub schema_version: u32,
    pub problem: ProblemFile,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unlabeled: Option<UnlabeledCount>,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_check: Vec<AlgorithmCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ResultReport {
    /// Whether every algorithm of a cross-check that ran reported the same
    /// count. Trivially true for single-algorithm runs.
    pub fn agrees(&self) -> bool {
        let counts: Vec<u64> = self.cross_check.iter().filter_map(|c| c.count).collect();
        counts.windows(2).all(|w| w[0] == w[1])
    }
}
