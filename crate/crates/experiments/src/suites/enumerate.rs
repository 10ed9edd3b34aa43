//! State counts against two independent Catalan computations.

use flipwalk_core::catalan::{catalan_by_recurrence, catalan_number};
use flipwalk_core::triangulation::enumerate_triangulations_capped;

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

pub fn run_enumerate(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Enumerate)?;
    let cap = cfg.cap_override.unwrap_or(Suite::Enumerate.cap());
    let rec = if lo <= hi { catalan_by_recurrence(hi) } else { Vec::new() };
    per_n(lo, hi, |n| {
        let (states, dt) = timed(|| enumerate_triangulations_capped(n, cap).map(|v| v.len()));
        let states = states?;
        let closed = catalan_number(n);
        let ok = rec[n] == closed && closed == states.into();
        Ok(vec![ResultRow::new("enumerate", RowKind::Assertion)
            .param("n", n)
            .metric("states", states)
            .metric("catalan_recurrence", rec[n].to_string())
            .metric("catalan_closed", closed.to_string())
            .pass(ok)
            .timed(dt)])
    })
}
