//! Multiplicities of curves satisfying point, height and cross-ratio
//! conditions: global determinants and their local factorization.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::cross_ratio::{DegCrossRatio, Pairing};
use crate::curve::{separation_sign, StableMap};
use crate::error::MultiplicityError;
use crate::lattice::IntVec2;
use crate::linalg::{determinant, IntMatrix};

/// Rows beyond the point conditions: cross-ratios with positive length
/// (entered through their pairing signs) and height conditions on ends.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExtraConditions<'a> {
    pub cross_ratios: &'a [Pairing],
    /// Degree labels of ends whose vertical position is prescribed.
    pub height_ends: &'a [usize],
}

/// Leaf-side endpoint of every bounded edge relative to the vertex of
/// leaf 0, with the edge direction pointing away from that vertex.
fn outward_orientation(map: &StableMap) -> Vec<Option<(usize, IntVec2)>> {
    let t = map.tree();
    (0..t.edge_count())
        .map(|e| {
            if !t.is_bounded(e) {
                return None;
            }
            let (a, b) = t.edge(e);
            let near = if t.far_side(e, a) & 1 == 1 { b } else { a };
            Some((near, map.direction(e, near)))
        })
        .collect()
}

/// The Jacobian of the evaluation, height and cross-ratio maps with respect
/// to the anchor (image of the vertex of leaf 0) and the bounded edge
/// lengths, in the order of [`crate::MarkedTree::bounded_edges`].
pub fn ev_ft_matrix(
    map: &StableMap,
    extra: ExtraConditions<'_>,
) -> Result<IntMatrix, MultiplicityError> {
    let t = map.tree();
    let bounded: Vec<usize> = t.bounded_edges().collect();
    let n = map.point_count();
    let rows = 2 * n + extra.cross_ratios.len() + extra.height_ends.len();
    let cols = 2 + bounded.len();
    if rows != cols {
        return Err(MultiplicityError::ConditionCountMismatch { rows, cols });
    }
    let orient = outward_orientation(map);
    let mut m = IntMatrix::zeros(rows, cols);
    let position_rows = |m: &mut IntMatrix, leaf: usize, row_x: Option<usize>, row_y: usize| {
        if let Some(r) = row_x {
            m.set(r, 0, 1);
        }
        m.set(row_y, 1, 1);
        for (col, &e) in bounded.iter().enumerate() {
            let (near, dir) = orient[e].expect("bounded");
            if t.far_side(e, near) >> leaf & 1 == 1 {
                if let Some(r) = row_x {
                    m.set(r, 2 + col, dir.x);
                }
                m.set(row_y, 2 + col, dir.y);
            }
        }
    };
    for leaf in 0..n {
        position_rows(&mut m, leaf, Some(2 * leaf), 2 * leaf + 1);
    }
    let mut row = 2 * n;
    for p in extra.cross_ratios {
        let leaves = map.resolve(p)?;
        for (col, &e) in bounded.iter().enumerate() {
            m.set(row, 2 + col, separation_sign(t, e, leaves) as i64);
        }
        row += 1;
    }
    for &label in extra.height_ends {
        let leaf = map.leaf_of(crate::EndRef::EndLabel(label))?;
        position_rows(&mut m, leaf, None, row);
        row += 1;
    }
    Ok(m)
}

/// The matrix of the same conditions with vertex positions as additional
/// unknowns: every bounded edge contributes the two equations
/// `pos(b) - pos(a) - len·dir = 0`.
pub fn theta_matrix(
    map: &StableMap,
    extra: ExtraConditions<'_>,
) -> Result<IntMatrix, MultiplicityError> {
    let t = map.tree();
    let bounded: Vec<usize> = t.bounded_edges().collect();
    let vertex_count = t.node_count() - t.leaf_count();
    let vcol = |v: usize| 2 * (v - t.leaf_count());
    let lcol = |i: usize| 2 * vertex_count + i;
    let n = map.point_count();
    let rows = 2 * bounded.len() + 2 * n + extra.cross_ratios.len() + extra.height_ends.len();
    let cols = 2 * vertex_count + bounded.len();
    if rows != cols {
        return Err(MultiplicityError::ConditionCountMismatch { rows, cols });
    }
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, &e) in bounded.iter().enumerate() {
        let (a, b) = t.edge(e);
        let dir = map.direction(e, a);
        for (k, comp) in [dir.x, dir.y].into_iter().enumerate() {
            let r = 2 * i + k;
            m.add_to(r, vcol(b) + k, 1);
            m.add_to(r, vcol(a) + k, -1);
            m.set(r, lcol(i), -comp);
        }
    }
    let mut row = 2 * bounded.len();
    for leaf in 0..n {
        let v = t.base_vertex(leaf);
        m.set(row, vcol(v), 1);
        m.set(row + 1, vcol(v) + 1, 1);
        row += 2;
    }
    for p in extra.cross_ratios {
        let leaves = map.resolve(p)?;
        for (i, &e) in bounded.iter().enumerate() {
            m.set(row, lcol(i), separation_sign(t, e, leaves) as i64);
        }
        row += 1;
    }
    for &label in extra.height_ends {
        let leaf = map.leaf_of(crate::EndRef::EndLabel(label))?;
        m.set(row, vcol(t.base_vertex(leaf)) + 1, 1);
        row += 1;
    }
    Ok(m)
}

/// `|det|` of the ev-ft matrix.
pub fn ev_ft_det(map: &StableMap, extra: ExtraConditions<'_>) -> Result<BigInt, MultiplicityError> {
    Ok(determinant(&ev_ft_matrix(map, extra)?).abs())
}

/// `|det|` of the matrix with vertex positions as unknowns.
pub fn theta_matrix_det(
    map: &StableMap,
    extra: ExtraConditions<'_>,
) -> Result<BigInt, MultiplicityError> {
    Ok(determinant(&theta_matrix(map, extra)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// The branch is pinned by the conditions it contains.
    Fixed,
    /// The branch keeps one degree of freedom.
    Free,
}

/// Classification of the branch of a vertex behind one adjacent edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentClass {
    pub edge: usize,
    pub neighbor: usize,
    pub kind: ComponentKind,
    /// Non-contracted ends in the branch plus one for the cut edge.
    pub ends: usize,
    /// Marked points and cross-ratio carriers in the branch.
    pub constraints: usize,
}

/// Classifies the branches at `v` of a curve carrying the degenerated
/// cross-ratios `lambdas`. Contracted ends adjacent to `v` are skipped.
pub fn classify_components(
    map: &StableMap,
    lambdas: &[DegCrossRatio],
    v: usize,
) -> Result<Vec<ComponentClass>, MultiplicityError> {
    let carriers = map.lambda_carriers(lambdas)?;
    classify_with_carriers(map, &carriers, v)
}

fn classify_with_carriers(
    map: &StableMap,
    carriers: &[Option<usize>],
    v: usize,
) -> Result<Vec<ComponentClass>, MultiplicityError> {
    let t = map.tree();
    let first_edge = first_edges_from(map, v);
    let n = map.point_count();
    let mut out = Vec::new();
    for (e, w, mask) in t.branches(v) {
        if w < n {
            continue;
        }
        let points = (mask & low_bits(n)).count_ones() as usize;
        let ends = (mask & !low_bits(n)).count_ones() as usize + 1;
        let lambdas_in = carriers
            .iter()
            .filter(|c| c.is_some_and(|c| c != v && first_edge[c] == Some(e)))
            .count();
        let constraints = points + lambdas_in;
        let kind = match ends.checked_sub(constraints) {
            Some(1) => ComponentKind::Fixed,
            Some(2) => ComponentKind::Free,
            _ => {
                return Err(MultiplicityError::NotFixed {
                    vertex: v,
                    ends,
                    constraints,
                })
            }
        };
        out.push(ComponentClass {
            edge: e,
            neighbor: w,
            kind,
            ends,
            constraints,
        });
    }
    Ok(out)
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// For every node, the edge at `v` through which it is reached.
fn first_edges_from(map: &StableMap, v: usize) -> Vec<Option<usize>> {
    let t = map.tree();
    let mut first = vec![None; t.node_count()];
    let mut seen = vec![false; t.node_count()];
    seen[v] = true;
    let mut queue = VecDeque::new();
    for &(w, e) in t.neighbors(v) {
        first[w] = Some(e);
        seen[w] = true;
        queue.push_back(w);
    }
    while let Some(u) = queue.pop_front() {
        for &(w, _) in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                first[w] = first[u];
                queue.push_back(w);
            }
        }
    }
    first
}

/// `|det(w1, w2)|` of the weighted outward directions of the two fixed
/// branches at `v`, or 1 if a marked point sits at `v`.
pub fn local_ev_mult(
    map: &StableMap,
    v: usize,
    classes: &[ComponentClass],
) -> Result<u64, MultiplicityError> {
    let t = map.tree();
    if t.neighbors(v).iter().any(|&(w, _)| w < map.point_count()) {
        return Ok(1);
    }
    let fixed: Vec<&ComponentClass> = classes
        .iter()
        .filter(|c| c.kind == ComponentKind::Fixed)
        .collect();
    if fixed.len() != 2 {
        return Err(MultiplicityError::FixedCount {
            vertex: v,
            fixed: fixed.len(),
        });
    }
    let a = map.direction(fixed[0].edge, v);
    let b = map.direction(fixed[1].edge, v);
    Ok(a.det(b).unsigned_abs())
}

/// Weight of a vertex of valence `valence` carrying the cross-ratios
/// `pairings`, each given by four local edge indices `(a b | c d)` and
/// processed in order: the sum over all splittings of the vertex whose new
/// edge separates the first pairing, with every other cross-ratio moving to
/// one of the two new vertices, of the product of the two weights.
pub fn local_resolution_weight(
    valence: usize,
    pairings: &[[usize; 4]],
) -> Result<u64, MultiplicityError> {
    if valence != 3 + pairings.len() {
        return Err(MultiplicityError::ValenceMismatch {
            valence,
            lambdas: pairings.len(),
        });
    }
    if pairings.len() <= 1 {
        return Ok(1);
    }
    let [a, b, c, d] = pairings[0];
    let rest = &pairings[1..];
    let others: Vec<usize> = (0..valence).filter(|x| ![a, b, c, d].contains(x)).collect();
    let mut total = 0;
    'split: for choice in 0u32..(1 << others.len()) {
        let mut in_first = vec![false; valence];
        in_first[a] = true;
        in_first[b] = true;
        for (i, &x) in others.iter().enumerate() {
            in_first[x] = choice >> i & 1 == 1;
        }
        let mut sides: [Vec<[usize; 4]>; 2] = [Vec::new(), Vec::new()];
        for p in rest {
            let in_second = p.iter().filter(|&&x| !in_first[x]).count();
            let side = match in_second {
                0 | 1 => 0,
                3 | 4 => 1,
                _ => continue 'split,
            };
            sides[side].push(*p);
        }
        let mut weight = 1;
        for (side, lambdas) in sides.iter().enumerate() {
            let members: Vec<usize> = (0..valence)
                .filter(|&x| in_first[x] == (side == 0))
                .collect();
            let new_edge = members.len();
            let local = |x: usize| members.iter().position(|&m| m == x).unwrap_or(new_edge);
            let relabeled: Vec<[usize; 4]> = lambdas.iter().map(|p| p.map(local)).collect();
            if members.len() + 1 != 3 + relabeled.len() {
                continue 'split;
            }
            weight *= local_resolution_weight(members.len() + 1, &relabeled)?;
        }
        total += weight;
    }
    Ok(total)
}

/// Local factors of the multiplicity at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexMultiplicity {
    pub vertex: usize,
    pub ev: u64,
    pub resolution: u64,
}

/// Product decomposition of the multiplicity of a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityBreakdown {
    pub vertices: Vec<VertexMultiplicity>,
    pub total: u64,
}

impl MultiplicityBreakdown {
    pub fn ev_part(&self) -> u64 {
        self.vertices.iter().map(|v| v.ev).product()
    }

    pub fn resolution_part(&self) -> u64 {
        self.vertices.iter().map(|v| v.resolution).product()
    }
}

/// Multiplicity of a curve satisfying degenerated cross-ratios, as the
/// product of local ev-multiplicities and resolution weights, using the
/// default pairing of every cross-ratio.
pub fn total_multiplicity(
    map: &StableMap,
    lambdas: &[DegCrossRatio],
) -> Result<MultiplicityBreakdown, MultiplicityError> {
    let pairings: Vec<Pairing> = lambdas.iter().map(DegCrossRatio::default_pairing).collect();
    total_multiplicity_with_pairings(map, &pairings)
}

/// As [`total_multiplicity`], with an explicit pairing per cross-ratio.
pub fn total_multiplicity_with_pairings(
    map: &StableMap,
    pairings: &[Pairing],
) -> Result<MultiplicityBreakdown, MultiplicityError> {
    let lambdas: Vec<DegCrossRatio> = pairings
        .iter()
        .map(|p| DegCrossRatio::new(p.refs()))
        .collect::<Result<_, _>>()?;
    if !map.validate_constrained_type(&lambdas) {
        return Err(MultiplicityError::InvalidConstrainedType);
    }
    let carriers = map.lambda_carriers(&lambdas)?;
    let t = map.tree();
    let mut vertices = Vec::new();
    for v in t.vertices() {
        let classes = classify_with_carriers(map, &carriers, v)?;
        let ev = local_ev_mult(map, v, &classes)?;
        let branch_masks: Vec<u64> = t.branches(v).map(|(_, _, m)| m).collect();
        let local: Vec<[usize; 4]> = pairings
            .iter()
            .zip(&carriers)
            .filter(|(_, c)| **c == Some(v))
            .map(|(p, _)| {
                map.resolve(p).map(|leaves| {
                    leaves.map(|leaf| {
                        branch_masks
                            .iter()
                            .position(|m| m >> leaf & 1 == 1)
                            .expect("every leaf lies in a branch")
                    })
                })
            })
            .collect::<Result<_, _>>()?;
        let resolution = local_resolution_weight(t.valence(v), &local)?;
        vertices.push(VertexMultiplicity {
            vertex: v,
            ev,
            resolution,
        });
    }
    let total = vertices.iter().map(|v| v.ev * v.resolution).product();
    Ok(MultiplicityBreakdown { vertices, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_ratio::EndRef;
    use crate::degree::{builtin_degree, BuiltinDegree};
    use crate::tree::MarkedTree;

    fn line_through_two_points() -> StableMap {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap();
        // x1 on the (-1,0) end side, x2 on the (1,1) end side.
        let tree = MarkedTree::from_edges(
            5,
            8,
            vec![(5, 0), (5, 2), (5, 6), (6, 3), (6, 7), (7, 1), (7, 4)],
        )
        .unwrap();
        StableMap::new(tree, deg, 2).unwrap()
    }

    #[test]
    fn line_through_two_points_has_multiplicity_one() {
        let m = line_through_two_points();
        let a = ev_ft_matrix(&m, ExtraConditions::default()).unwrap();
        assert_eq!(a.rows(), 4);
        assert_eq!(
            ev_ft_det(&m, ExtraConditions::default()).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            theta_matrix_det(&m, ExtraConditions::default()).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(total_multiplicity(&m, &[]).unwrap().total, 1);
    }

    #[test]
    fn condition_count_mismatch() {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap();
        let tree =
            MarkedTree::from_edges(4, 6, vec![(4, 0), (4, 1), (4, 5), (5, 2), (5, 3)]).unwrap();
        let m = StableMap::new(tree, deg, 1).unwrap();
        assert!(matches!(
            ev_ft_matrix(&m, ExtraConditions::default()),
            Err(MultiplicityError::ConditionCountMismatch { .. })
        ));
    }

    #[test]
    fn classification_at_a_point_free_vertex() {
        let m = line_through_two_points();
        let classes = classify_components(&m, &[], 6).unwrap();
        assert_eq!(classes.len(), 3);
        let fixed = classes
            .iter()
            .filter(|c| c.kind == ComponentKind::Fixed)
            .count();
        assert_eq!(fixed, 2);
        assert_eq!(local_ev_mult(&m, 6, &classes).unwrap(), 1);
        let at_point = classify_components(&m, &[], 5).unwrap();
        assert_eq!(at_point.len(), 2);
        assert!(at_point.iter().all(|c| c.kind == ComponentKind::Free));
    }

    #[test]
    fn resolution_weight_base_cases() {
        assert_eq!(local_resolution_weight(3, &[]).unwrap(), 1);
        assert_eq!(local_resolution_weight(4, &[[0, 1, 2, 3]]).unwrap(), 1);
        assert!(local_resolution_weight(4, &[]).is_err());
    }

    #[test]
    fn four_valent_vertex_with_a_cross_ratio() {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap();
        let tree = MarkedTree::from_edges(4, 5, vec![(4, 0), (4, 1), (4, 2), (4, 3)]).unwrap();
        let m = StableMap::new(tree, deg, 1).unwrap();
        let l = DegCrossRatio::new([
            EndRef::MarkedPoint(1),
            EndRef::EndLabel(1),
            EndRef::EndLabel(2),
            EndRef::EndLabel(3),
        ])
        .unwrap();
        let b = total_multiplicity(&m, &[l]).unwrap();
        assert_eq!(b.total, 1);
    }
}
