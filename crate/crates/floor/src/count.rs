//! The weighted count of cross-ratio floor diagrams.

use crcount_core::DegCrossRatio;

use crate::enumerate::{enumerate_diagrams, DiagramClass};
use crate::piece::{DiagramPiece, PieceSolver};
use crate::FloorError;

/// A diagram class of nonzero multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountedDiagram {
    pub class: DiagramClass,
    /// Multiplicity of the piece at each vertex.
    pub pieces: Vec<u64>,
    /// Product of the piece multiplicities.
    pub multiplicity: u64,
}

impl CountedDiagram {
    /// Contribution of the whole class to the count.
    pub fn contribution(&self) -> u64 {
        self.multiplicity * self.class.labelings
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorCount {
    pub count: u64,
    /// Diagram classes with nonzero multiplicity.
    pub diagrams: Vec<CountedDiagram>,
    /// Number of valid diagram classes, including those of multiplicity 0.
    pub classes: usize,
}

/// Counts rational curves of degree Δ_d through `n` points satisfying
/// degenerated 4-point cross-ratios via floor diagrams.
pub fn floor_count(d: u64, n: usize, lambdas: &[DegCrossRatio]) -> Result<FloorCount, FloorError> {
    floor_count_with(d, n, lambdas, &mut PieceSolver::new(0))
}

/// As [`floor_count`], reusing a piece solver.
pub fn floor_count_with(
    d: u64,
    n: usize,
    lambdas: &[DegCrossRatio],
    solver: &mut PieceSolver,
) -> Result<FloorCount, FloorError> {
    let classes = enumerate_diagrams(d, n, lambdas)?;
    let total = classes.len();
    let mut diagrams = Vec::new();
    let mut count = 0u64;
    'class: for class in classes {
        let mut pieces = Vec::with_capacity(n);
        for v in 0..n {
            let m = solver.multiplicity(&DiagramPiece::from_diagram(&class.diagram, v, lambdas)?)?;
            if m == 0 {
                continue 'class;
            }
            pieces.push(m);
        }
        let multiplicity = pieces.iter().product();
        let counted = CountedDiagram {
            class,
            pieces,
            multiplicity,
        };
        count = count
            .checked_add(counted.contribution())
            .ok_or(FloorError::Overflow)?;
        diagrams.push(counted);
    }
    Ok(FloorCount {
        count,
        diagrams,
        classes: total,
    })
}
