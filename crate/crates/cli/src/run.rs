//! Dispatching a problem to the counting algorithms.

use std::collections::HashMap;
use std::time::Instant;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crcount_core::tree::mask_leaves;
use crcount_core::{total_multiplicity, CrossRatio, DegCrossRatio, EndRef, IntVec2, StableMap};
use crcount_floor::{floor_count, CountedDiagram, CrossRatioFloorDiagram, HalfEdge};
use crcount_lattice_paths::{lpa_count, CellShape, CountedCurve, LatticePathContext};
use crcount_oracle::{degenerate_curve, OracleCount, OracleTypes, ProblemShape, DEFAULT_RETRY_BUDGET, MAX_LEAVES};

use crate::problem::{Algorithm, ProblemFile};
use crate::report::{AlgorithmCount, Record, RecordKind, ResultReport, UnlabeledCount, SCHEMA_VERSION};
use crate::CliError;

/// Overrides and output switches for a run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub algorithm: Option<Algorithm>,
    pub seed: Option<u64>,
    pub unlabeled: bool,
    /// Leave out the timing so that identical inputs give identical output.
    pub canonical: bool,
}

/// A report together with one DOT graph per record.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: ResultReport,
    pub graphs: Vec<String>,
}

/// Why an algorithm cannot count a problem, if it cannot.
pub fn applicable(problem: &ProblemFile, algorithm: Algorithm) -> Result<(), CliError> {
    let inapplicable = |reason: &str| {
        Err(CliError::Inapplicable {
            algorithm,
            reason: reason.to_string(),
        })
    };
    match algorithm {
        Algorithm::Floor => {
            if problem.degree.delta_d().is_none() {
                return inapplicable("floor diagrams are implemented for the degrees Δ_d only");
            }
            if problem.lambdas().iter().any(|l| l.point_count() != 4) {
                return inapplicable("floor diagrams need cross-ratios on four marked points");
            }
            Ok(())
        }
        Algorithm::LatticePath => {
            if !problem.degree.has_unit_ends() {
                return inapplicable("the lattice path algorithm needs ends of weight one");
            }
            Ok(())
        }
        Algorithm::Oracle => {
            let leaves = problem.n + problem.degree.degree()?.len();
            if leaves > MAX_LEAVES {
                return Err(CliError::ResourceLimit(format!(
                    "{leaves} leaves exceed the brute-force limit of {MAX_LEAVES}"
                )));
            }
            Ok(())
        }
        Algorithm::CrossCheck => Ok(()),
    }
}

/// The lattice path algorithm when it applies, then floor diagrams, then
/// the oracle.
pub fn default_algorithm(problem: &ProblemFile) -> Algorithm {
    [Algorithm::LatticePath, Algorithm::Floor]
        .into_iter()
        .find(|&a| applicable(problem, a).is_ok())
        .unwrap_or(Algorithm::Oracle)
}

/// Number of permutations of end labels with equal direction vectors that
/// no cross-ratio refers to.
pub fn relabeling_factor(problem: &ProblemFile) -> Result<u64, CliError> {
    let degree = problem.degree.degree()?;
    let referenced: Vec<EndRef> = problem.cross_ratios.iter().flat_map(|c| c.refs()).collect();
    let mut groups: HashMap<IntVec2, u64> = HashMap::new();
    for (i, v) in degree.vectors().enumerate() {
        if !referenced.contains(&EndRef::EndLabel(i + 1)) {
            *groups.entry(v).or_default() += 1;
        }
    }
    Ok(groups.values().map(|&k| (1..=k).product::<u64>()).product())
}

/// Counts a problem with the selected algorithm.
pub fn run_count(problem: &ProblemFile, options: &RunOptions) -> Result<RunOutput, CliError> {
    problem.validate()?;
    let algorithm = options
        .algorithm
        .or(problem.algorithm)
        .unwrap_or_else(|| default_algorithm(problem));
    let seed = options.seed.unwrap_or(problem.seed);
    let start = Instant::now();
    let (count, records, graphs, cross_check) = if algorithm == Algorithm::CrossCheck {
        let mut cross_check = Vec::new();
        let mut first: Option<(u64, Vec<Record>, Vec<String>)> = None;
        for a in [Algorithm::Floor, Algorithm::LatticePath, Algorithm::Oracle] {
            if let Err(e) = applicable(problem, a) {
                cross_check.push(AlgorithmCount {
                    algorithm: a,
                    count: None,
                    skipped: Some(e.to_string()),
                });
                continue;
            }
            let (count, records, graphs) = run_single(problem, a, seed)?;
            cross_check.push(AlgorithmCount {
                algorithm: a,
                count: Some(count),
                skipped: None,
            });
            first.get_or_insert((count, records, graphs));
        }
        let (count, records, graphs) = first.unwrap_or_default();
        (count, records, graphs, cross_check)
    } else {
        applicable(problem, algorithm)?;
        let (count, records, graphs) = run_single(problem, algorithm, seed)?;
        (count, records, graphs, Vec::new())
    };
    let unlabeled = if options.unlabeled {
        let factor = relabeling_factor(problem)?;
        Some(UnlabeledCount {
            count: Ratio::new(count, factor).to_string(),
            relabeling_factor: factor,
        })
    } else {
        None
    };
    let report = ResultReport {
        schema_version: SCHEMA_VERSION,
        problem: problem.clone(),
        algorithm,
        seed,
        count,
        unlabeled,
        records,
        cross_check,
        timing_ms: (!options.canonical).then(|| start.elapsed().as_millis() as u64),
    };
    Ok(RunOutput { report, graphs })
}

type Single = (u64, Vec<Record>, Vec<String>);

fn run_single(problem: &ProblemFile, algorithm: Algorithm, seed: u64) -> Result<Single, CliError> {
    let lambdas = problem.lambdas();
    match algorithm {
        Algorithm::Floor => {
            let d = problem.degree.delta_d().expect("checked by applicable");
            let result = floor_count(d, problem.n, &lambdas)?;
            let records = result.diagrams.iter().map(floor_record).collect();
            let graphs = result
                .diagrams
                .iter()
                .enumerate()
                .map(|(i, c)| floor_dot(i, &c.class.diagram))
                .collect();
            Ok((result.count, records, graphs))
        }
        Algorithm::LatticePath => {
            let ctx = LatticePathContext::new(problem.degree.polytope()?)?;
            let result = lpa_count(&ctx, problem.n, &lambdas)?;
            let records = result
                .curves
                .iter()
                .map(|c| lattice_path_record(c, &lambdas))
                .collect::<Result<_, _>>()?;
            let graphs = result
                .curves
                .iter()
                .enumerate()
                .map(|(i, c)| curve_dot(&format!("subdivision_{}", i + 1), &c.map))
                .collect();
            Ok((result.labeled, records, graphs))
        }
        Algorithm::Oracle => {
            let run = oracle_run(problem, seed)?;
            let records = run
                .curves
                .iter()
                .map(|c| oracle_record(&c.map, c.multiplicity, &lambdas, problem.has_lengths()))
                .collect();
            let graphs = run
                .curves
                .iter()
                .enumerate()
                .map(|(i, c)| curve_dot(&format!("curve_{}", i + 1), &c.map))
                .collect();
            Ok((run.count, records, graphs))
        }
        Algorithm::CrossCheck => unreachable!("cross-checks dispatch to single algorithms"),
    }
}

/// Counts with the oracle: generic data from the seed, with the lengths of
/// the problem file when it gives them.
fn oracle_run(problem: &ProblemFile, seed: u64) -> Result<OracleCount, CliError> {
    let shape = ProblemShape::from_degenerate(problem.degree.degree()?, problem.n, &problem.lambdas());
    let types = OracleTypes::enumerate(&shape)?;
    if !problem.has_lengths() {
        return Ok(types.count_generic(seed, DEFAULT_RETRY_BUDGET)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DEFAULT_RETRY_BUDGET {
        let mut instance = shape.sample(&mut rng);
        instance.cross_ratios = shape
            .pairings
            .iter()
            .zip(&problem.cross_ratios)
            .map(|(p, c)| CrossRatio::new(*p, c.length().expect("all lengths present").clone()))
            .collect::<Result<_, _>>()
            .map_err(crcount_oracle::OracleError::from)?;
        match types.count(&instance) {
            Ok(run) => return Ok(run),
            Err(crcount_oracle::OracleError::NonGeneric) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CliError::ResourceLimit(format!(
        "no generic point configuration in {DEFAULT_RETRY_BUDGET} attempts"
    )))
}

/// The bounded edges of a curve as the leaf sets they cut off.
pub(crate) fn type_description(map: &StableMap) -> String {
    let tree = map.tree();
    let mut splits: Vec<String> = tree
        .canonical_splits()
        .into_iter()
        .map(|mask| {
            let refs: Vec<String> = mask_leaves(mask).map(|l| map.leaf_ref(l).to_string()).collect();
            format!("{{{}}}", refs.join(","))
        })
        .collect();
    splits.sort();
    splits.join(" ")
}

fn floor_record(c: &CountedDiagram) -> Record {
    let diagram = &c.class.diagram;
    Record {
        kind: RecordKind::FloorDiagram,
        description: diagram.to_string().trim_end().replace('\n', "; "),
        multiplicity: c.multiplicity,
        mult_ev: None,
        omega: None,
        labelings: c.class.labelings,
        contribution: c.contribution(),
        detail: json!({ "diagram": diagram, "pieces": c.pieces }),
    }
}

fn lattice_path_record(c: &CountedCurve, lambdas: &[DegCrossRatio]) -> Result<Record, CliError> {
    let breakdown = total_multiplicity(&c.map, lambdas).map_err(crcount_lattice_paths::LatticePathError::from)?;
    let s = &c.subdivision;
    let cells: Vec<serde_json::Value> = s
        .cells
        .iter()
        .map(|cell| {
            let kind = match &cell.shape {
                CellShape::Segment(seg) if seg.is_pointed() => "pointed segment",
                CellShape::Segment(_) => "segment",
                CellShape::Polygon(p) if p.tilde_dimension() == 0 => "parallelogram",
                CellShape::Polygon(_) => "polygon",
            };
            let vertices: Vec<[i64; 2]> = cell.vertices().iter().map(|v| [v.x, v.y]).collect();
            json!({
                "kind": kind,
                "vertices": vertices,
                "path_member": cell.member,
                "point": cell.point,
                "marks": cell.marks(),
            })
        })
        .collect();
    Ok(Record {
        kind: RecordKind::Subdivision,
        description: type_description(&c.map),
        multiplicity: c.multiplicity,
        mult_ev: Some(breakdown.ev_part()),
        omega: Some(breakdown.resolution_part()),
        labelings: c.labelings,
        contribution: c.contribution(),
        detail: json!({ "cells": cells, "end_labels": c.labels }),
    })
}

fn oracle_record(map: &StableMap, multiplicity: u64, lambdas: &[DegCrossRatio], lengths: bool) -> Record {
    let factors = (!lengths)
        .then(|| {
            let pairings: Vec<_> = lambdas.iter().map(DegCrossRatio::default_pairing).collect();
            let degenerated = degenerate_curve(map, &pairings).ok()?;
            total_multiplicity(&degenerated, lambdas).ok()
        })
        .flatten();
    Record {
        kind: RecordKind::Curve,
        description: type_description(map),
        multiplicity,
        mult_ev: factors.as_ref().map(|b| b.ev_part()),
        omega: factors.as_ref().map(|b| b.resolution_part()),
        labelings: 1,
        contribution: multiplicity,
        detail: json!({ "edges": map.tree().edges() }),
    }
}

fn floor_dot(index: usize, diagram: &CrossRatioFloorDiagram) -> String {
    let mut out = format!("digraph floor_diagram_{} {{\n  rankdir=LR;\n", index + 1);
    for (i, v) in diagram.vertices.iter().enumerate() {
        let labels: Vec<String> = v.labels.iter().map(usize::to_string).collect();
        out += &format!(
            "  v{} [shape={}, label=\"v{}\\ns={} |λ|={}\\nδ={{{}}}\"];\n",
            i + 1,
            if v.size == 0 { "circle" } else { "doublecircle" },
            i + 1,
            v.size,
            v.lambda_count,
            labels.join(",")
        );
    }
    let mark = |m: HalfEdge| match m {
        HalfEdge::Thin => "thin",
        HalfEdge::Thick => "thick",
    };
    for e in &diagram.edges {
        out += &format!(
            "  v{} -> v{} [label=\"ω={}\", taillabel=\"{}\", headlabel=\"{}\"];\n",
            e.source + 1,
            e.target + 1,
            e.weight,
            mark(e.source_mark),
            mark(e.target_mark)
        );
    }
    out + "}\n"
}

fn curve_dot(name: &str, map: &StableMap) -> String {
    let tree = map.tree();
    let mut out = format!("graph {name} {{\n");
    for leaf in 0..tree.leaf_count() {
        let r = map.leaf_ref(leaf);
        let shape = if r.is_point() { "point" } else { "plaintext" };
        out += &format!("  n{leaf} [shape={shape}, xlabel=\"{r}\", label=\"{r}\"];\n");
    }
    for v in tree.vertices() {
        out += &format!("  n{v} [shape=circle, label=\"\", width=0.15];\n");
    }
    for (e, &(a, b)) in tree.edges().iter().enumerate() {
        let direction = map.direction(e, a);
        out += &format!("  n{a} -- n{b} [label=\"{direction}\"];\n");
    }
    out + "}\n"
}
