//! Pieces of a floor diagram and their multiplicities.
//!
//! The piece of a vertex keeps the vertex with its ends and cuts every
//! elevator to it into an end of the local degree. Its multiplicity is
//! the number of local curves through the marked point that meet the
//! prescribed heights on the thin elevators and the localized
//! cross-ratios, counted with the oracle.

use std::collections::HashMap;

use num_rational::BigRational;

use crcount_core::{CrossRatio, DegCrossRatio, Degree, EndRef, IntVec2, Pairing, RatPoint};
use crcount_oracle::{OracleCount, ProblemInstance, ProblemShape, SolveOptions, TypeCache, DEFAULT_RETRY_BUDGET};

use crate::diagram::{label_class, CrossRatioFloorDiagram, HalfEdge, LabelClass};
use crate::FloorError;

/// A cut elevator of a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PieceElevator {
    /// Index of the edge in the diagram.
    pub edge: usize,
    /// The vertex the elevator used to connect to.
    pub neighbor: usize,
    pub weight: u64,
    /// Whether the elevator comes from a smaller vertex.
    pub incoming: bool,
    /// Mark of the half-edge at the center.
    pub mark: HalfEdge,
}

/// An entry of a localized cross-ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceRef {
    /// The marked point of the center.
    Point,
    /// A cut elevator, by index into [`DiagramPiece::elevators`].
    Elevator(usize),
    /// An end of the center, by degree label.
    End(usize),
}

/// The piece of a floor diagram at one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramPiece {
    pub center: usize,
    pub size: u64,
    pub diagonal_labels: Vec<usize>,
    pub bottom_labels: Vec<usize>,
    pub left_labels: Vec<usize>,
    pub elevators: Vec<PieceElevator>,
    /// Localized cross-ratios in pairing order `(r0 r1 | r2 r3)`, each with
    /// the index of the cross-ratio it comes from.
    pub lambdas: Vec<(usize, [PieceRef; 4])>,
}

impl DiagramPiece {
    /// Cuts the piece at `v` out of a diagram satisfying `lambdas`.
    pub fn from_diagram(
        diagram: &CrossRatioFloorDiagram,
        v: usize,
        lambdas: &[DegCrossRatio],
    ) -> Result<Self, FloorError> {
        let d = diagram.d;
        let vertex = &diagram.vertices[v];
        let by_class = |c| -> Vec<usize> {
            vertex
                .labels
                .iter()
                .copied()
                .filter(|&t| label_class(d, t) == Some(c))
                .collect()
        };
        let mut elevators: Vec<PieceElevator> = diagram
            .incident(v)
            .map(|e| {
                let edge = diagram.edges[e];
                PieceElevator {
                    edge: e,
                    neighbor: edge.other(v),
                    weight: edge.weight,
                    incoming: edge.target == v,
                    mark: edge.mark_at(v),
                }
            })
            .collect();
        elevators.sort_by_key(|el| el.neighbor);
        let mut local = Vec::new();
        for (i, l) in lambdas.iter().enumerate() {
            if diagram.satisfies(l) != Some(v) {
                continue;
            }
            let refs = l.default_pairing().refs();
            let mut mapped = [PieceRef::Point; 4];
            for (slot, r) in mapped.iter_mut().zip(refs) {
                let u = diagram.vertex_of(r).ok_or(FloorError::UnresolvedRef(r))?;
                *slot = if u == v {
                    match r {
                        EndRef::MarkedPoint(_) => PieceRef::Point,
                        EndRef::EndLabel(t) => PieceRef::End(t),
                    }
                } else {
                    let next = diagram.path(v, u)[1];
                    let k = elevators
                        .iter()
                        .position(|el| el.neighbor == next)
                        .expect("the path leaves through an incident edge");
                    PieceRef::Elevator(k)
                };
            }
            local.push((i, mapped));
        }
        Ok(DiagramPiece {
            center: v,
            size: vertex.size,
            diagonal_labels: by_class(LabelClass::Diagonal),
            bottom_labels: by_class(LabelClass::Bottom),
            left_labels: by_class(LabelClass::Left),
            elevators,
            lambdas: local,
        })
    }

    /// Weights of the incoming elevators.
    pub fn alpha(&self) -> Vec<u64> {
        self.elevators.iter().filter(|e| e.incoming).map(|e| e.weight).collect()
    }

    /// Weights of the outgoing elevators.
    pub fn beta(&self) -> Vec<u64> {
        self.elevators.iter().filter(|e| !e.incoming).map(|e| e.weight).collect()
    }

    /// The local degree: diagonal, bottom and left ends followed by the
    /// elevators, incoming ones pointing left.
    pub fn local_degree(&self) -> Result<Degree, FloorError> {
        let mut vectors = Vec::new();
        vectors.extend(self.diagonal_labels.iter().map(|_| IntVec2::new(1, 1)));
        vectors.extend(self.bottom_labels.iter().map(|_| IntVec2::new(0, -1)));
        vectors.extend(self.left_labels.iter().map(|_| IntVec2::new(-1, 0)));
        for e in &self.elevators {
            let w = e.weight as i64;
            vectors.push(IntVec2::new(if e.incoming { -w } else { w }, 0));
        }
        Ok(Degree::local(vectors)?)
    }

    /// Local label (1-based) of the `k`-th elevator.
    pub fn elevator_label(&self, k: usize) -> usize {
        self.diagonal_labels.len() + self.bottom_labels.len() + self.left_labels.len() + k + 1
    }

    /// Local label of a global end label of the center.
    pub fn end_label(&self, t: usize) -> Option<usize> {
        self.diagonal_labels
            .iter()
            .chain(&self.bottom_labels)
            .chain(&self.left_labels)
            .position(|&x| x == t)
            .map(|i| i + 1)
    }

    fn local_ref(&self, r: PieceRef) -> Result<EndRef, FloorError> {
        Ok(match r {
            PieceRef::Point => EndRef::MarkedPoint(1),
            PieceRef::Elevator(k) => EndRef::EndLabel(self.elevator_label(k)),
            PieceRef::End(t) => EndRef::EndLabel(self.end_label(t).ok_or(FloorError::UnresolvedRef(EndRef::EndLabel(t)))?),
        })
    }

    /// Local pairings of the localized cross-ratios.
    pub fn pairings(&self) -> Result<Vec<Pairing>, FloorError> {
        self.lambdas
            .iter()
            .map(|(_, refs)| {
                let mut local = [EndRef::MarkedPoint(1); 4];
                for (slot, &r) in local.iter_mut().zip(refs) {
                    *slot = self.local_ref(r)?;
                }
                Ok(Pairing::new(local)?)
            })
            .collect()
    }

    /// Local labels of the elevators with a thin half-edge at the center,
    /// whose heights are prescribed.
    pub fn thin_labels(&self) -> Vec<usize> {
        self.elevators
            .iter()
            .enumerate()
            .filter(|(_, e)| e.mark == HalfEdge::Thin)
            .map(|(k, _)| self.elevator_label(k))
            .collect()
    }

    /// A height condition on an end of weight ω cuts out its curves with
    /// multiplicity ω. This factor makes the multiplicities of the pieces
    /// multiply to the determinant of the glued curve.
    pub fn height_factor(&self) -> u64 {
        self.elevators
            .iter()
            .filter(|e| e.mark == HalfEdge::Thin)
            .map(|e| e.weight)
            .product()
    }

    /// The local counting problem without its generic data.
    pub fn shape(&self) -> Result<ProblemShape, FloorError> {
        Ok(ProblemShape {
            degree: self.local_degree()?,
            points: 1,
            pairings: self.pairings()?,
            height_ends: self.thin_labels(),
        })
    }

    /// The local problem for a concrete point, heights indexed by
    /// elevator, and cross-ratio lengths indexed by global cross-ratio.
    pub fn instance(
        &self,
        point: RatPoint,
        heights: &[Option<BigRational>],
        lengths: &[BigRational],
    ) -> Result<ProblemInstance, FloorError> {
        let shape = self.shape()?;
        let cross_ratios = shape
            .pairings
            .iter()
            .zip(&self.lambdas)
            .map(|(p, (i, _))| CrossRatio {
                pairing: *p,
                length: lengths[*i].clone(),
            })
            .collect();
        let mut prescribed = Vec::new();
        for (k, e) in self.elevators.iter().enumerate() {
            if e.mark == HalfEdge::Thin {
                let h = heights[k]
                    .clone()
                    .ok_or_else(|| FloorError::Reconstruction(format!("no height for elevator {}", e.edge)))?;
                prescribed.push((self.elevator_label(k), h));
            }
        }
        Ok(ProblemInstance {
            degree: shape.degree,
            points: vec![point],
            cross_ratios,
            heights: prescribed,
        })
    }
}

/// Local counts are taken with every solution kept, since pieces whose
/// ends are all horizontal only have overlapping solutions.
pub(crate) const PIECE_OPTIONS: SolveOptions = SolveOptions { require_simple: false };

/// Memoizing solver for piece multiplicities.
#[derive(Debug, Default)]
pub struct PieceSolver {
    seed: u64,
    types: TypeCache,
    memo: HashMap<ProblemShape, u64>,
}

impl PieceSolver {
    pub fn new(seed: u64) -> Self {
        PieceSolver {
            seed,
            ..Default::default()
        }
    }

    pub fn multiplicity(&mut self, piece: &DiagramPiece) -> Result<u64, FloorError> {
        let shape = piece.shape()?;
        if let Some(&m) = self.memo.get(&shape) {
            return Ok(m);
        }
        let types = self.types.get(&shape)?;
        let m = types
            .count_generic_with(self.seed, DEFAULT_RETRY_BUDGET, PIECE_OPTIONS)?
            .count
            * piece.height_factor();
        self.memo.insert(shape, m);
        Ok(m)
    }

    /// Solves a concrete local problem.
    pub fn solve(&mut self, instance: &ProblemInstance) -> Result<OracleCount, FloorError> {
        let types = self.types.get(&instance.shape())?;
        Ok(types.count_with(instance, PIECE_OPTIONS)?)
    }
}

/// Multiplicity of a single piece for generic local data.
pub fn piece_multiplicity(piece: &DiagramPiece) -> Result<u64, FloorError> {
    PieceSolver::new(0).multiplicity(piece)
}
