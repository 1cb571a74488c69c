//! Rendering a run as JSON, DOT or a plain-text listing.

use std::fmt::Write;

use crate::run::RunOutput;
use crate::CliError;

/// Output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Listing,
}

pub fn emit(output: &RunOutput, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&output.report)? + "\n"),
        Format::Dot => Ok(output.graphs.concat()),
        Format::Listing => Ok(listing(output)),
    }
}

fn listing(output: &RunOutput) -> String {
    let r = &output.report;
    let mut out = String::new();
    let _ = writeln!(out, "degree {}  n = {}  seed {}", r.problem.degree, r.problem.n, r.seed);
    for cr in &r.problem.cross_ratios {
        let refs: Vec<String> = cr.refs().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "cross-ratio {{{}}}", refs.join(","));
    }
    let _ = writeln!(out, "algorithm {}", r.algorithm);
    let _ = writeln!(
        out,
        "{:>4}  {:>12}  {:>14}  {:>9}  {:>12}  type",
        "#", "multiplicity", "factors", "labelings", "contribution"
    );
    for (i, rec) in r.records.iter().enumerate() {
        let factors = match (rec.mult_ev, rec.omega) {
            (Some(ev), Some(omega)) => format!("{ev}·{omega}"),
            _ => match rec.detail.get("pieces").and_then(|p| p.as_array()) {
                Some(pieces) => pieces.iter().map(ToString::to_string).collect::<Vec<_>>().join("·"),
                None => "-".to_string(),
            },
        };
        let _ = writeln!(
            out,
            "{:>4}  {:>12}  {:>14}  {:>9}  {:>12}  {}",
            i + 1,
            rec.multiplicity,
            factors,
            rec.labelings,
            rec.contribution,
            rec.description
        );
    }
    for c in &r.cross_check {
        match (c.count, &c.skipped) {
            (Some(n), _) => {
                let _ = writeln!(out, "cross-check {}: {n}", c.algorithm);
            }
            (None, Some(why)) => {
                let _ = writeln!(out, "cross-check {}: skipped ({why})", c.algorithm);
            }
            _ => {}
        }
    }
    let _ = writeln!(out, "count {}", r.count);
    if let Some(u) = &r.unlabeled {
        let _ = writeln!(
            out,
            "unlabeled {} (labeled count / relabeling factor {})",
            u.count, u.relabeling_factor
        );
    }
    out
}
