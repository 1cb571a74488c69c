//! Definition-level ground truth: enumerate every trivalent combinatorial
//! type, solve the exact linear conditions for generic data and sum the
//! absolute determinants of the solutions with positive edge lengths.

mod trees;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crcount_core::linalg::{clear_denominators, solve};
use crcount_core::multiplicity::{ev_ft_matrix, ExtraConditions};
use crcount_core::{
    CoreError, CrossRatio, DegCrossRatio, Degree, EndRef, IntVec2, MarkedTree, MultiplicityError,
    Pairing, RatPoint, StableMap,
};

pub use trees::{enumerate_trivalent_types, trivalent_tree_count, EdgeList, TreeIterator};
use trees::{edges_to_tree, mask_sum, Builder, RootedMasks};

/// Largest number of leaves the oracle accepts.
pub const MAX_LEAVES: usize = 16;

/// Default number of generic configurations tried before giving up.
pub const DEFAULT_RETRY_BUDGET: u32 = 32;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("at least three leaves are needed, got {0}")]
    TooFewLeaves(usize),
    #[error("{0} leaves exceed the brute-force limit")]
    TooLarge(usize),
    #[error("condition count mismatch: {conditions} conditions for {unknowns} unknowns")]
    ConditionCountMismatch { conditions: usize, unknowns: usize },
    #[error("non-generic configuration")]
    NonGeneric,
    #[error("no generic configuration found after {0} attempts")]
    RetriesExhausted(u32),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Multiplicity(#[from] MultiplicityError),
}

/// A concrete counting problem: points, cross-ratios with positive
/// lengths, and prescribed heights of ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub degree: Degree,
    pub points: Vec<RatPoint>,
    pub cross_ratios: Vec<CrossRatio>,
    /// `(degree label, height)` pairs.
    pub heights: Vec<(usize, BigRational)>,
}

/// The shape of a problem without its generic data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProblemShape {
    pub degree: Degree,
    pub points: usize,
    pub pairings: Vec<Pairing>,
    pub height_ends: Vec<usize>,
}

impl ProblemShape {
    /// Degenerated cross-ratios are realized on their default pairing.
    pub fn from_degenerate(degree: Degree, points: usize, lambdas: &[DegCrossRatio]) -> Self {
        ProblemShape {
            degree,
            points,
            pairings: lambdas.iter().map(DegCrossRatio::default_pairing).collect(),
            height_ends: Vec::new(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.points + self.degree.len()
    }

    fn check(&self) -> Result<(), OracleError> {
        let leaves = self.leaves();
        if leaves < 3 {
            return Err(OracleError::TooFewLeaves(leaves));
        }
        if leaves > MAX_LEAVES {
            return Err(OracleError::TooLarge(leaves));
        }
        let conditions = 2 * self.points + self.pairings.len() + self.height_ends.len();
        let unknowns = leaves - 1;
        if conditions != unknowns {
            return Err(OracleError::ConditionCountMismatch { conditions, unknowns });
        }
        for p in &self.pairings {
            for r in p.refs() {
                r.leaf(self.points, self.degree.len())?;
            }
        }
        for &t in &self.height_ends {
            EndRef::EndLabel(t).leaf(self.points, self.degree.len())?;
        }
        Ok(())
    }

    /// Draws generic data: integer points in a wide box, distinct small
    /// decreasing cross-ratio lengths, and integer heights.
    pub fn sample(&self, rng: &mut impl Rng) -> ProblemInstance {
        const SPREAD: i64 = 1_000_000;
        let mut coord = || BigRational::from_integer(BigInt::from(rng.gen_range(-SPREAD..=SPREAD)));
        let points = (0..self.points)
            .map(|_| RatPoint::new(coord(), coord()))
            .collect();
        let heights = self.height_ends.iter().map(|&t| (t, coord())).collect();
        let mut lengths: Vec<i64> = Vec::new();
        while lengths.len() < self.pairings.len() {
            let v = rng.gen_range(1..=1000);
            if !lengths.contains(&v) {
                lengths.push(v);
            }
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        let cross_ratios = self
            .pairings
            .iter()
            .zip(lengths)
            .map(|(p, l)| CrossRatio {
                pairing: *p,
                length: BigRational::from_integer(l.into()),
            })
            .collect();
        ProblemInstance {
            degree: self.degree.clone(),
            points,
            cross_ratios,
            heights,
        }
    }
}

impl ProblemInstance {
    pub fn shape(&self) -> ProblemShape {
        ProblemShape {
            degree: self.degree.clone(),
            points: self.points.len(),
            pairings: self.cross_ratios.iter().map(|c| c.pairing).collect(),
            height_ends: self.heights.iter().map(|h| h.0).collect(),
        }
    }

    fn rhs(&self) -> Vec<BigRational> {
        let mut rhs = Vec::new();
        for p in &self.points {
            rhs.push(p.x.clone());
            rhs.push(p.y.clone());
        }
        rhs.extend(self.cross_ratios.iter().map(|c| c.length.clone()));
        rhs.extend(self.heights.iter().map(|h| h.1.clone()));
        rhs
    }
}

/// A curve through the conditions with its multiplicity `|det|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedCurve {
    pub map: StableMap,
    pub multiplicity: u64,
}

/// Per-edge weighted directions `a → b` of a tree with the given degree.
pub fn directions_from_degree(tree: &MarkedTree, degree: &Degree, points: usize) -> Result<Vec<IntVec2>, CoreError> {
    let map = StableMap::new(tree.clone(), degree.clone(), points)?;
    Ok((0..tree.edge_count())
        .map(|e| map.direction(e, tree.edge(e).0))
        .collect())
}

fn extra<'a>(pairings: &'a [Pairing], heights: &'a [usize]) -> ExtraConditions<'a> {
    ExtraConditions {
        cross_ratios: pairings,
        height_ends: heights,
    }
}

/// How solutions are screened for genericity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Treat a solution that is not a simple curve as a sign of
    /// non-generic data. Local problems whose ends are all parallel have
    /// non-simple solutions for every choice of data and switch this off.
    pub require_simple: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { require_simple: true }
    }
}

/// Solves the conditions on one combinatorial type. Returns the curve if
/// the system is nonsingular and every bounded edge gets positive length;
/// a zero length or a non-simple solution signals non-generic data.
pub fn solve_instance(tree: &MarkedTree, instance: &ProblemInstance) -> Result<Option<SolvedCurve>, OracleError> {
    solve_instance_with(tree, instance, SolveOptions::default())
}

/// As [`solve_instance`] with explicit screening options.
pub fn solve_instance_with(
    tree: &MarkedTree,
    instance: &ProblemInstance,
    options: SolveOptions,
) -> Result<Option<SolvedCurve>, OracleError> {
    let shape = instance.shape();
    shape.check()?;
    let map = StableMap::new(tree.clone(), instance.degree.clone(), instance.points.len())?;
    let a = ev_ft_matrix(&map, extra(&shape.pairings, &shape.height_ends))?;
    let (rhs, scale) = clear_denominators(&instance.rhs());
    let Some(sol) = solve(&a, &rhs) else {
        return Ok(None);
    };
    let lengths = 2..a.cols();
    if sol.any_zero(lengths.clone()) {
        return Err(OracleError::NonGeneric);
    }
    if !sol.all_positive(lengths.clone()) {
        return Ok(None);
    }
    let scale = BigRational::from_integer(scale);
    let values: Vec<BigRational> = sol.values().into_iter().map(|v| v / &scale).collect();
    let anchor = RatPoint::new(values[0].clone(), values[1].clone());
    let map = map.with_metric(anchor, values[2..].to_vec())?;
    if options.require_simple {
        let contracted = map.contract_edges(|e| map.direction(e, map.tree().edge(e).0).is_zero())?;
        if !contracted.is_simple()? {
            return Err(OracleError::NonGeneric);
        }
    }
    let multiplicity = u64::try_from(sol.det.abs()).expect("multiplicity fits in u64");
    Ok(Some(SolvedCurve { map, multiplicity }))
}

/// The combinatorial types with nonsingular condition matrix for a
/// problem shape. Singularity does not depend on the generic data, so the
/// list is computed once and reused for every configuration.
#[derive(Debug, Clone)]
pub struct OracleTypes {
    shape: ProblemShape,
    types: Vec<EdgeList>,
    examined: u64,
    filter: FastFilter,
}

impl OracleTypes {
    /// Enumerates trees by inserting the non-contracted ends first and the
    /// marked points afterwards. Two marked points never share a cherry
    /// (they would coincide), and without cross-ratio rows a bounded edge of
    /// direction zero gives a zero column; both prunings only drop types
    /// whose determinant vanishes.
    pub fn enumerate(shape: &ProblemShape) -> Result<Self, OracleError> {
        shape.check()?;
        let leaves = shape.leaves();
        let n = shape.points;
        let mut vectors = vec![IntVec2::ZERO; n];
        vectors.extend(shape.degree.vectors());
        let pairings: Vec<[usize; 4]> = shape
            .pairings
            .iter()
            .map(|p| p.refs().map(|r| r.leaf(n, shape.degree.len()).expect("checked")))
            .collect();
        let heights: Vec<usize> = shape.height_ends.iter().map(|&t| n + t - 1).collect();
        let filter = FastFilter {
            n,
            vectors,
            pairings,
            heights,
        };
        let order: Vec<usize> = (n..leaves).chain(0..n).collect();
        let ends_done = shape.degree.len().max(3);
        let mut builder = Builder::star(leaves, &order[..3]);
        let mut state = Search {
            filter: &filter,
            order: &order,
            ends_done,
            prune_zero: shape.pairings.is_empty(),
            types: Vec::new(),
            examined: 0,
        };
        state.recurse(&mut builder, 3);
        let (types, examined) = (state.types, state.examined);
        Ok(OracleTypes {
            shape: shape.clone(),
            types,
            examined,
            filter,
        })
    }

    pub fn shape(&self) -> &ProblemShape {
        &self.shape
    }

    /// Number of types whose determinant was computed.
    pub fn examined(&self) -> u64 {
        self.examined
    }

    pub fn nonsingular(&self) -> usize {
        self.types.len()
    }

    pub fn trees(&self) -> impl Iterator<Item = MarkedTree> + '_ {
        self.types.iter().map(|e| edges_to_tree(self.shape.leaves(), e))
    }

    /// Counts curves through one concrete configuration.
    pub fn count(&self, instance: &ProblemInstance) -> Result<OracleCount, OracleError> {
        self.count_with(instance, SolveOptions::default())
    }

    /// As [`OracleTypes::count`] with explicit screening options.
    pub fn count_with(&self, instance: &ProblemInstance, options: SolveOptions) -> Result<OracleCount, OracleError> {
        if instance.shape() != self.shape {
            return Err(OracleError::ConditionCountMismatch {
                conditions: instance.shape().pairings.len(),
                unknowns: self.shape.pairings.len(),
            });
        }
        let (rhs, _) = clear_denominators(&instance.rhs());
        let quick_rhs: Option<Vec<i128>> = rhs.iter().map(i128::try_from).map(Result::ok).collect();
        let leaves = self.shape.leaves();
        let mut curves = Vec::new();
        for edges in &self.types {
            if let Some(b) = &quick_rhs {
                if let Quick::Reject = self.filter.matrix(leaves, edges).quick_solve(b) {
                    continue;
                }
            }
            if let Some(c) = solve_instance_with(&edges_to_tree(leaves, edges), instance, options)? {
                curves.push(c);
            }
        }
        let count = curves.iter().map(|c| c.multiplicity).sum();
        Ok(OracleCount {
            count,
            curves,
            instance: instance.clone(),
            attempts: 1,
        })
    }

    /// Counts curves for generic data drawn from `seed`, drawing fresh data
    /// whenever the configuration turns out to be non-generic.
    pub fn count_generic(&self, seed: u64, budget: u32) -> Result<OracleCount, OracleError> {
        self.count_generic_with(seed, budget, SolveOptions::default())
    }

    /// As [`OracleTypes::count_generic`] with explicit screening options.
    pub fn count_generic_with(&self, seed: u64, budget: u32, options: SolveOptions) -> Result<OracleCount, OracleError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 1..=budget {
            let instance = self.shape.sample(&mut rng);
            match self.count_with(&instance, options) {
                Ok(mut c) => {
                    c.attempts = attempt;
                    return Ok(c);
                }
                Err(OracleError::NonGeneric) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(OracleError::RetriesExhausted(budget))
    }
}

/// Result of an oracle run.
#[derive(Debug, Clone)]
pub struct OracleCount {
    pub count: u64,
    pub curves: Vec<SolvedCurve>,
    pub instance: ProblemInstance,
    pub attempts: u32,
}

/// Counts curves through a concrete configuration by brute force.
pub fn oracle_count(instance: &ProblemInstance) -> Result<OracleCount, OracleError> {
    OracleTypes::enumerate(&instance.shape())?.count(instance)
}

/// Counts curves for generic data derived from `seed`.
pub fn oracle_count_generic(shape: &ProblemShape, seed: u64) -> Result<OracleCount, OracleError> {
    OracleTypes::enumerate(shape)?.count_generic(seed, DEFAULT_RETRY_BUDGET)
}

/// Shared cache of enumerated types keyed by problem shape.
#[derive(Debug, Default)]
pub struct TypeCache {
    entries: HashMap<ProblemShape, OracleTypes>,
}

impl TypeCache {
    pub fn get(&mut self, shape: &ProblemShape) -> Result<&OracleTypes, OracleError> {
        if !self.entries.contains_key(shape) {
            let types = OracleTypes::enumerate(shape)?;
            self.entries.insert(shape.clone(), types);
        }
        Ok(&self.entries[shape])
    }
}

/// The degenerated curve obtained by contracting every bounded edge that
/// enters some cross-ratio with nonzero sign.
pub fn degenerate_curve(curve: &StableMap, pairings: &[Pairing]) -> Result<StableMap, CoreError> {
    let mut signed = vec![false; curve.tree().edge_count()];
    for p in pairings {
        for e in curve.tree().bounded_edges() {
            if curve.separation_sign(e, p)? != 0 {
                signed[e] = true;
            }
        }
    }
    curve.contract_edges(|e| signed[e])
}

#[derive(Debug, Clone)]
struct FastFilter {
    n: usize,
    vectors: Vec<IntVec2>,
    pairings: Vec<[usize; 4]>,
    heights: Vec<usize>,
}

impl FastFilter {
    fn has_zero_bounded_edge(&self, leaves: usize, edges: &[(u8, u8)]) -> bool {
        let masks = RootedMasks::new(leaves, edges);
        masks
            .edges
            .iter()
            .any(|&(m, bounded)| bounded && mask_sum(&self.vectors, m).is_zero())
    }

    /// The ev-ft matrix of an edge list in a fixed-size array, with
    /// columns for the anchor followed by the bounded edges in list order.
    fn matrix(&self, leaves: usize, edges: &[(u8, u8)]) -> Square {
        let masks = RootedMasks::new(leaves, edges);
        let mut a = [[0i128; DIM]; DIM];
        for r in 0..self.n {
            a[2 * r][0] = 1;
            a[2 * r + 1][1] = 1;
        }
        let lambda_row = 2 * self.n;
        let height_row = lambda_row + self.pairings.len();
        for r in 0..self.heights.len() {
            a[height_row + r][1] = 1;
        }
        let mut col = 2;
        for &(mask, bounded) in &masks.edges {
            if !bounded {
                continue;
            }
            let dir = mask_sum(&self.vectors, mask);
            let mut pts = mask & ((1u64 << self.n) - 1);
            while pts != 0 {
                let leaf = pts.trailing_zeros() as usize;
                a[2 * leaf][col] = dir.x as i128;
                a[2 * leaf + 1][col] = dir.y as i128;
                pts &= pts - 1;
            }
            for (r, p) in self.pairings.iter().enumerate() {
                let [s0, s1, s2, s3] = p.map(|l| mask >> l & 1);
                a[lambda_row + r][col] = if s0 == s1 && s2 == s3 && s0 != s2 {
                    1
                } else if s0 == s3 && s1 == s2 && s0 != s1 {
                    -1
                } else {
                    0
                };
            }
            for (r, &leaf) in self.heights.iter().enumerate() {
                if mask >> leaf & 1 == 1 {
                    a[height_row + r][col] = dir.y as i128;
                }
            }
            col += 1;
        }
        debug_assert_eq!(col, leaves - 1);
        Square { a, k: leaves - 1 }
    }
}

const DIM: usize = MAX_LEAVES - 1;

#[derive(Clone, Copy)]
struct Square {
    a: [[i128; DIM]; DIM],
    k: usize,
}

/// Outcome of the machine-integer solve of one type.
enum Quick {
    Reject,
    Accept,
    Undecided,
}

/// Fraction-free elimination in checked machine integers; `None` on
/// overflow.
macro_rules! bareiss {
    ($name:ident, $t:ty) => {
        fn $name(a: &mut [[$t; DIM]; DIM], k: usize) -> Option<$t> {
            let mut sign = 1;
            let mut prev = 1;
            for p in 0..k.saturating_sub(1) {
                if a[p][p] == 0 {
                    match (p + 1..k).find(|&r| a[r][p] != 0) {
                        Some(r) => {
                            a.swap(p, r);
                            sign = -sign;
                        }
                        None => return Some(0),
                    }
                }
                let pivot = a[p][p];
                for i in p + 1..k {
                    let f = a[i][p];
                    if f == 0 {
                        for j in p + 1..k {
                            a[i][j] = a[i][j].checked_mul(pivot)? / prev;
                        }
                        continue;
                    }
                    for j in p + 1..k {
                        let x = a[i][j].checked_mul(pivot)?.checked_sub(f.checked_mul(a[p][j])?)?;
                        a[i][j] = x / prev;
                    }
                    a[i][p] = 0;
                }
                prev = pivot;
            }
            Some(sign * a[k - 1][k - 1])
        }
    };
}

bareiss!(bareiss_i64, i64);
bareiss!(bareiss_i128, i128);

impl Square {
    /// Exact determinant; `None` if it does not fit in `i128`.
    fn det(self) -> Option<i128> {
        let mut narrow = [[0i64; DIM]; DIM];
        let mut fits = true;
        for (row, src) in narrow.iter_mut().zip(&self.a).take(self.k) {
            for (x, &y) in row.iter_mut().zip(src).take(self.k) {
                match i64::try_from(y) {
                    Ok(v) => *x = v,
                    Err(_) => fits = false,
                }
            }
        }
        if fits {
            if let Some(d) = bareiss_i64(&mut narrow, self.k) {
                return Some(d as i128);
            }
        }
        let mut a = self.a;
        bareiss_i128(&mut a, self.k)
    }

    /// Decides by Cramer's rule whether all edge lengths are positive.
    fn quick_solve(&self, rhs: &[i128]) -> Quick {
        let Some(det) = self.det() else {
            return Quick::Undecided;
        };
        if det == 0 {
            return Quick::Reject;
        }
        for col in 2..self.k {
            let mut m = *self;
            for (r, &b) in rhs.iter().enumerate() {
                m.a[r][col] = b;
            }
            match m.det() {
                None => return Quick::Undecided,
                Some(0) => return Quick::Undecided,
                Some(x) if (x > 0) != (det > 0) => return Quick::Reject,
                Some(_) => {}
            }
        }
        Quick::Accept
    }
}

struct Search<'a> {
    filter: &'a FastFilter,
    order: &'a [usize],
    ends_done: usize,
    prune_zero: bool,
    types: Vec<EdgeList>,
    examined: u64,
}

impl Search<'_> {
    fn recurse(&mut self, builder: &mut Builder, k: usize) {
        let leaves = builder.leaves;
        if k == self.ends_done && self.prune_zero && self.filter.has_zero_bounded_edge(leaves, &builder.edges) {
            return;
        }
        if k == self.order.len() {
            self.examined += 1;
            if self.filter.matrix(leaves, &builder.edges).det() != Some(0) {
                self.types.push(builder.edges.clone());
            }
            return;
        }
        let leaf = self.order[k];
        let is_point = leaf < self.filter.n;
        for i in 0..builder.edges.len() {
            if is_point && (builder.edges[i].1 as usize) < self.filter.n {
                continue;
            }
            builder.insert(i, leaf);
            self.recurse(builder, k + 1);
            builder.undo(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crcount_core::{builtin_degree, BuiltinDegree};

    #[test]
    fn line_through_two_points() {
        let shape = ProblemShape {
            degree: builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap(),
            points: 2,
            pairings: vec![],
            height_ends: vec![],
        };
        let c = oracle_count_generic(&shape, 7).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.curves.len(), 1);
    }

    #[test]
    fn condition_mismatch_is_reported() {
        let shape = ProblemShape {
            degree: builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap(),
            points: 1,
            pairings: vec![],
            height_ends: vec![],
        };
        assert!(matches!(
            OracleTypes::enumerate(&shape),
            Err(OracleError::ConditionCountMismatch { .. })
        ));
    }
}
