//! JSON report shapes shared by the subcommands.
//!
//! Every report opens with the [`RunConfig`] it ran under, so any output
//! can be reproduced from the output alone. Rationals appear as strings
//! (`"p/q"` or `"p"`), never as floats, and struct fields serialize in a
//! fixed order.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::process;

use serde::Serialize;

use tropgrass_core::verify::{
    FormulaCheck, NumericConjectureRun, RemarkNRecord, SymbolicConjectureRun,
};
use tropgrass_core::metrics::{FourPointViolation, UltrametricViolation};
use tropgrass_core::tropical::PlueckerViolation;
use tropgrass_core::Theorem5Report;

/// The configuration a command ran under, echoed into its report.
/// Irrelevant fields are omitted rather than printed as null.
#[derive(Serialize, Default)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retries: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equidistant: Option<bool>,
}

#[derive(Serialize)]
pub struct GenTreeReport {
    pub config: RunConfig,
    /// Content digest of the generated tree; stable across node
    /// renumbering, so equal digests mean equal trees.
    pub digest: String,
    pub newick: String,
}

#[derive(Serialize)]
pub struct PhiReport {
    pub config: RunConfig,
    pub n: usize,
    pub m: usize,
    /// Subset keys rendered as `{i,j,...}` with rational values.
    pub values: BTreeMap<String, String>,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub config: RunConfig,
    pub n: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub four_point: Option<FourPointViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ultrametric: Option<UltrametricViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pluecker: Option<PlueckerViolation>,
}

#[derive(Serialize)]
pub struct Thm5Report {
    pub config: RunConfig,
    pub report: Theorem5Report,
}

/// One shape's symbolic run, cross-checked under a second, independent
/// generic height assignment: the leading coefficient of the determinant
/// depends only on the shape, so both runs must agree on it exactly.
#[derive(Serialize)]
pub struct SymbolicShapeEntry {
    pub run: SymbolicConjectureRun,
    pub alternate_base: u32,
    pub alternate_term_count: usize,
    pub heights_agree: bool,
}

#[derive(Serialize)]
pub struct Conj3SymbolicReport {
    pub config: RunConfig,
    pub shape_count: usize,
    pub shapes: Vec<SymbolicShapeEntry>,
    /// Leading-coefficient term counts across the shapes, descending.
    pub term_counts: Vec<usize>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct Conj3NumericReport {
    pub config: RunConfig,
    pub shape_count: usize,
    pub runs: Vec<NumericConjectureRun>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct ExampleM5Report {
    pub config: RunConfig,
    pub degree: Option<String>,
    pub leading: Option<String>,
    pub expected_degree: String,
    pub expected_leading: String,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct RemarkNReport {
    pub config: RunConfig,
    pub record: RemarkNRecord,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct FormulaReport {
    pub config: RunConfig,
    pub checks: Vec<FormulaCheck>,
    pub pass: bool,
}

/// Renders a sorted subset as `{i,j,...}`.
pub fn subset_key(subset: &[usize]) -> String {
    let inner = subset
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{inner}}}")
}

/// Pretty-prints a report to stdout. A closed pipe downstream (`head`,
/// `jq -e`, ...) is tolerated silently; any other write failure aborts
/// with the input-error exit code.
pub fn emit<T: Serialize>(report: &T) {
    let json =
        serde_json::to_string_pretty(report).expect("reports contain no non-serializable data");
    let mut out = io::stdout().lock();
    if let Err(err) = writeln!(out, "{json}") {
        if err.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write report to stdout: {err}");
            process::exit(2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_keys_brace_and_join() {
        assert_eq!(subset_key(&[1, 2, 3]), "{1,2,3}");
        assert_eq!(subset_key(&[7]), "{7}");
        assert_eq!(subset_key(&[]), "{}");
    }

    #[test]
    fn config_omits_unset_fields() {
        let config = RunConfig {
            command: "phi",
            m: Some(4),
            ..RunConfig::default()
        };
        let json = serde_json::to_value(&config).unwrap();
        assert_eq!(json["command"], "phi");
        assert_eq!(json["m"], 4);
        assert!(json.get("seed").is_none());
    }
}
