//! The lattice path count: every fitting subdivision of every cross-ratio
//! lattice path, weighted by its multiplicity, with duplicate dual curves
//! collapsed.

use std::collections::{BTreeMap, HashMap};

use crcount_core::{DegCrossRatio, EndRef, StableMap};

use crate::context::LatticePathContext;
use crate::dual::{dual_graph, fit_check, label_assignments, subdivision_multiplicity, LabeledDual};
use crate::path::enumerate_paths;
use crate::subdivision::{complete_subdivisions, LatticePathSubdivision};
use crate::LatticePathError;

/// One counted dual curve. Its end labels not referenced by the
/// cross-ratios are placed canonically; `labelings` counts the distinct
/// labeled curves obtained by permuting them within each facet.
#[derive(Debug, Clone)]
pub struct CountedCurve {
    pub subdivision: LatticePathSubdivision,
    pub labels: Vec<usize>,
    pub map: StableMap,
    pub multiplicity: u64,
    pub labelings: u64,
}

impl CountedCurve {
    /// Contribution to the labeled count.
    pub fn contribution(&self) -> u64 {
        self.multiplicity * self.labelings
    }
}

/// The result of [`lpa_count`].
#[derive(Debug, Clone)]
pub struct LpaCount {
    /// Number of labeled curves counted with multiplicity.
    pub labeled: u64,
    /// Number of relabelings of the ends not referenced by a cross-ratio
    /// (the product over facets of the factorials of their counts).
    pub relabeling_factor: u64,
    pub curves: Vec<CountedCurve>,
    pub paths: usize,
    pub subdivisions: usize,
    /// Fitting labeled duals that repeated an already counted curve.
    pub duplicates: usize,
}

impl LpaCount {
    /// The labeled count divided by the relabeling factor, if it divides.
    pub fn unlabeled(&self) -> Option<u64> {
        self.labeled.is_multiple_of(self.relabeling_factor).then(|| self.labeled / self.relabeling_factor)
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Checks the condition count and that every reference resolves.
fn validate(ctx: &LatticePathContext, n: usize, lambdas: &[DegCrossRatio]) -> Result<(), LatticePathError> {
    let ends = ctx.degree().len();
    if n + lambdas.len() + 1 != ends {
        return Err(LatticePathError::ConditionCountMismatch {
            points: n,
            lambdas: lambdas.len(),
            ends,
        });
    }
    for r in lambdas.iter().flat_map(|l| l.refs()) {
        if r.leaf(n, ends).is_err() {
            return Err(LatticePathError::UnresolvedRef(r));
        }
    }
    Ok(())
}

/// Colors of the leaves for the canonical form: marked points and
/// referenced labels are distinct, the other ends are colored by facet.
fn leaf_colors(ctx: &LatticePathContext, map: &StableMap, referenced: &[usize]) -> Vec<String> {
    (0..map.tree().leaf_count())
        .map(|leaf| match map.leaf_ref(leaf) {
            EndRef::MarkedPoint(j) => format!("x{j}"),
            EndRef::EndLabel(t) if referenced.contains(&t) => format!("e{t}"),
            EndRef::EndLabel(t) => format!("f{}", ctx.facet_of_label(t).expect("labels lie on facets")),
        })
        .collect()
}

/// Canonical string of the subtree at `node` away from `parent`, and the
/// number of its color-preserving automorphisms.
fn rooted_form(map: &StableMap, colors: &[String], node: usize, parent: usize) -> (String, u64) {
    let tree = map.tree();
    if node < tree.leaf_count() {
        return (colors[node].clone(), 1);
    }
    let mut children: Vec<(String, u64)> = tree
        .neighbors(node)
        .iter()
        .filter(|&&(w, _)| w != parent)
        .map(|&(w, _)| rooted_form(map, colors, w, node))
        .collect();
    children.sort();
    let mut aut: u64 = children.iter().map(|c| c.1).product();
    let mut groups: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &children {
        *groups.entry(&c.0).or_default() += 1;
    }
    aut *= groups.values().map(|&k| factorial(k)).product::<u64>();
    let inner: Vec<&str> = children.iter().map(|c| c.0.as_str()).collect();
    (format!("({})", inner.join(",")), aut)
}

/// A canonical form of the curve with anonymous unreferenced ends, and
/// the number of permutations of those ends fixing the labeled curve.
/// Rooting at each leaf, the minimal form is reached exactly on the orbit
/// of the root leaf.
fn anonymous_form(map: &StableMap, colors: &[String]) -> (String, u64) {
    let tree = map.tree();
    let mut best: Option<(String, u64)> = None;
    let mut count = 0;
    for leaf in 0..tree.leaf_count() {
        let vertex = tree.base_vertex(leaf);
        let (form, aut) = rooted_form(map, colors, vertex, usize::MAX);
        let form = format!("{}:{form}", colors[leaf]);
        match &best {
            Some((b, _)) if *b < form => {}
            Some((b, _)) if *b == form => count += 1,
            _ => {
                best = Some((form, aut));
                count = 1;
            }
        }
    }
    let (form, aut) = best.expect("trees have leaves");
    (form, aut * count)
}

/// `N^lpa`: the number of rational curves of degree `Δ(Σ)` through `n`
/// points in a stretched configuration satisfying the degenerated
/// cross-ratios `lambdas`, counted with multiplicity, with labeled ends.
pub fn lpa_count(ctx: &LatticePathContext, n: usize, lambdas: &[DegCrossRatio]) -> Result<LpaCount, LatticePathError> {
    validate(ctx, n, lambdas)?;
    let referenced: Vec<usize> = {
        let mut r: Vec<usize> = lambdas
            .iter()
            .flat_map(|l| l.refs())
            .filter_map(|r| match r {
                EndRef::EndLabel(t) => Some(t),
                EndRef::MarkedPoint(_) => None,
            })
            .collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    let relabeling_factor: u64 = (0..ctx.facets().len())
        .map(|f| factorial(ctx.facet_labels(f).filter(|t| !referenced.contains(t)).count()))
        .product();
    let paths = enumerate_paths(ctx, n, lambdas.len());
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut curves = Vec::new();
    let mut subdivisions = 0;
    let mut duplicates = 0;
    for path in &paths {
        for s in complete_subdivisions(ctx, path, lambdas.len()) {
            subdivisions += 1;
            let graph = dual_graph(&s)?;
            for labels in label_assignments(ctx, &graph, lambdas) {
                let dual = LabeledDual::new(ctx, &s, graph.clone(), labels)?;
                if !fit_check(&s, &dual, lambdas)?.fits {
                    continue;
                }
                let colors = leaf_colors(ctx, &dual.map, &referenced);
                let (form, aut) = anonymous_form(&dual.map, &colors);
                if seen.contains_key(&form) {
                    duplicates += 1;
                    continue;
                }
                let multiplicity = subdivision_multiplicity(&s, &dual, lambdas)?;
                seen.insert(form, curves.len());
                curves.push(CountedCurve {
                    subdivision: s.clone(),
                    labels: dual.labels.clone(),
                    map: dual.map,
                    multiplicity,
                    labelings: relabeling_factor / aut,
                });
            }
        }
    }
    let labeled = curves.iter().map(CountedCurve::contribution).sum();
    Ok(LpaCount {
        labeled,
        relabeling_factor,
        curves,
        paths: paths.len(),
        subdivisions,
        duplicates,
    })
}
