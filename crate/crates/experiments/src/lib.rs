//! Verification suites and scaling sweeps for the flip walk, with frozen CSV/JSON output.

pub mod config;
pub mod error;
pub mod row;
pub mod suites;

use std::collections::BTreeMap;
use std::path::Path;

pub use config::{ExperimentConfig, Format, Suite};
pub use error::ExperimentError;
pub use row::{ResultRow, RowKind, Schema, SCHEMAS, SCHEMA_VERSION};
pub use suites::depth::run_depth_suite;
pub use suites::enumerate::run_enumerate;
pub use suites::flows::run_flow_suite;
pub use suites::gap::run_gap_sweep;
pub use suites::lemmas::run_lemma_suite;
pub use suites::mixing::run_mixing_suite;

pub fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let rows = match suite {
        Suite::Enumerate => run_enumerate(cfg),
        Suite::Spectral => run_gap_sweep(cfg),
        Suite::Lemmas => run_lemma_suite(cfg),
        Suite::Flows => run_flow_suite(cfg),
        Suite::Depth => run_depth_suite(cfg),
        Suite::Mixing => run_mixing_suite(cfg),
    }?;
    for r in &rows {
        r.validate()?;
    }
    Ok(rows)
}

/// Rows grouped by experiment id, ids in first-appearance order.
pub fn group(rows: &[ResultRow]) -> Vec<(String, Vec<&ResultRow>)> {
    let mut out: Vec<(String, Vec<&ResultRow>)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(id, _)| *id == r.experiment) {
            Some((_, v)) => v.push(r),
            None => out.push((r.experiment.clone(), vec![r])),
        }
    }
    out
}

/// Rendered output files, keyed by file name.
pub fn render(rows: &[ResultRow], format: Format) -> Result<BTreeMap<String, String>, ExperimentError> {
    let mut files = BTreeMap::new();
    for (id, rs) in group(rows) {
        let (name, text) = match format {
            Format::Csv => (format!("{id}.csv"), row::to_csv(&id, &rs)?),
            Format::Json => (format!("{id}.json"), row::to_json(&id, &rs)?),
        };
        files.insert(name, text);
        if id == "gap" {
            files.insert("gap.dat".to_string(), gnuplot_gap(&rs));
        }
    }
    Ok(files)
}

/// Whitespace-separated columns for plotting the gap sweep.
fn gnuplot_gap(rows: &[&ResultRow]) -> String {
    let mut s = String::from("# n gap relaxation_time n2_gap\n");
    for r in rows {
        s.push_str(&format!("{} {} {} {}\n", r.u64("n"), r.f64("gap"), r.f64("relaxation_time"), r.f64("n2_gap")));
    }
    s
}

pub fn write_outputs(dir: &Path, files: &BTreeMap<String, String>) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Assertion rows that failed.
pub fn failures(rows: &[ResultRow]) -> Vec<&ResultRow> {
    rows.iter().filter(|r| r.is_failure()).collect()
}
