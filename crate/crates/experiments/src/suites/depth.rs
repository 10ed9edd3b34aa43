//! Depth statistics of random trees and the exact averages behind the average-congestion
//! bound.

use flipwalk_core::{catalan, depth_statistics, enumerate_triangulations, triangle_containment_probability, Rational, Triangle};
use flipwalk_flow::averages::{max_boundlu_ratio, max_numeta_ratio};
use rayon::prelude::*;

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite, BOUNDLU_CONSTANT, DEPTH_SIZES, DEPTH_WINDOW, NUMETA_CONSTANT};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

fn sample_row(cfg: &ExperimentConfig, n: usize, samples: usize) -> ResultRow {
    let (st, dt) = timed(|| depth_statistics(n, samples, cfg.seed_for(Suite::Depth, n, 0)));
    let ratio = st.mean_node_depth / (n as f64).sqrt();
    let total: u64 = st.max_depth_histogram.values().sum();
    let height = st.max_depth_histogram.iter().map(|(&h, &c)| (h as u64 * c) as f64).sum::<f64>() / total.max(1) as f64;
    let tail0 = st.tail_fraction(0);
    ResultRow::new("depth_sample", RowKind::Assertion)
        .param("n", n)
        .param("samples", samples)
        .metric("mean_node_depth", st.mean_node_depth)
        .metric("depth_over_sqrt_n", ratio)
        .metric("window_lo", DEPTH_WINDOW.0)
        .metric("window_hi", DEPTH_WINDOW.1)
        .metric("tail_at_zero", tail0)
        .metric("mean_height", height)
        .pass((DEPTH_WINDOW.0..=DEPTH_WINDOW.1).contains(&ratio) && tail0 == 1.0)
        .timed(dt)
}

/// Closed-form containment probabilities against a count over all triangulations.
fn containment_row(n: usize) -> Result<ResultRow, ExperimentError> {
    let states = enumerate_triangulations(n)?;
    let (mut pairs, mut bad) = (0usize, 0usize);
    for r in 1..=n {
        for s in 1..=n + 1 - r {
            let t = Triangle::new(0, r, r + s);
            let hits = states.iter().filter(|x| x.contains_triangle(&t)).count();
            pairs += 1;
            bad += usize::from(triangle_containment_probability(n, r, s)? != Rational::new(hits.into(), catalan(n)));
        }
    }
    Ok(ResultRow::new("depth_containment", RowKind::Assertion)
        .param("n", n)
        .metric("pairs_checked", pairs)
        .metric("mismatches", bad)
        .pass(bad == 0))
}

pub fn run_depth_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Depth)?;
    if lo > hi {
        return Ok(Vec::new());
    }
    let samples = cfg.samples(Suite::Depth);
    let mut rows: Vec<ResultRow> = DEPTH_SIZES.par_iter().map(|&n| sample_row(cfg, n, samples)).collect();
    rows.extend(per_n(lo.max(2), hi, |n| {
        let (res, dt) = timed(|| -> Result<Vec<ResultRow>, ExperimentError> {
            let (r, i, j) = max_boundlu_ratio(n)?;
            let m = max_numeta_ratio(n)?;
            Ok(vec![
                ResultRow::new("depth_boundlu", RowKind::Assertion)
                    .param("n", n)
                    .metric("max_ratio", r)
                    .metric("argmax_i", i)
                    .metric("argmax_j", j)
                    .metric("constant", BOUNDLU_CONSTANT)
                    .pass(r <= BOUNDLU_CONSTANT),
                ResultRow::new("depth_numeta", RowKind::Assertion)
                    .param("n", n)
                    .metric("max_ratio", m)
                    .metric("constant", NUMETA_CONSTANT)
                    .pass(m <= NUMETA_CONSTANT),
                containment_row(n)?,
            ])
        });
        let mut rows = res?;
        rows[0].wall_time = dt;
        Ok(rows)
    })?);
    Ok(rows)
}
