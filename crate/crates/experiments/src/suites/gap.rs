//! Spectral gap sweep and the log-log fit of the relaxation time.

use flipwalk_analysis::kernel::Kernel;
use flipwalk_analysis::spectral::variational_ratio;
use flipwalk_analysis::spectral_gap;
use flipwalk_core::build_flip_chain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite, N2GAP_WINDOW, SLOPE_RANGE, SLOPE_WINDOW};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

/// Closed forms known for the smallest cases.
fn reference(n: usize) -> Option<(f64, &'static str)> {
    match n {
        2 => Some((1.0, "1")),
        3 => Some(((1.0 - (2.0 * std::f64::consts::PI / 5.0).cos()) / 2.0, "(1-cos(2pi/5))/2")),
        _ => None,
    }
}

/// Least-squares slope and intercept of y on x.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn run_gap_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Spectral)?;
    let samples = cfg.samples(Suite::Spectral);
    let mut rows = per_n(lo.max(2), hi, |n| {
        let (row, dt) = timed(|| -> Result<ResultRow, ExperimentError> {
            let chain = build_flip_chain(n)?;
            let gap = spectral_gap(&chain.model)?;
            let k = Kernel::from_model(&chain.model);
            let trials = if n <= 3 { samples } else { samples.min(1000) };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed_for(Suite::Spectral, n, 0));
            let mut min_ratio = f64::INFINITY;
            for _ in 0..trials {
                let f: Vec<f64> = (0..k.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if let Some(r) = variational_ratio(&k, &f) {
                    min_ratio = min_ratio.min(r);
                }
            }
            let nf = n as f64;
            let n2 = gap * nf * nf;
            let mut ok = (N2GAP_WINDOW.0..=N2GAP_WINDOW.1).contains(&n2) && (trials == 0 || min_ratio >= gap - 1e-8);
            let mut ref_label = "-";
            if let Some((v, label)) = reference(n) {
                ok &= (gap - v).abs() <= if n == 2 { 1e-12 } else { 1e-10 };
                ref_label = label;
            }
            Ok(ResultRow::new("gap", RowKind::Assertion)
                .param("n", n)
                .metric("states", chain.len())
                .metric("gap", gap)
                .metric("relaxation_time", 1.0 / gap)
                .metric("n2_gap", n2)
                .metric("n32_gap", gap * nf.powf(1.5))
                .metric("reference", ref_label)
                .metric("variational_trials", trials)
                .metric("min_variational_ratio", if trials == 0 { serde_json::Value::Null } else { min_ratio.into() })
                .pass(ok))
        });
        Ok(vec![row?.timed(dt)])
    })?;
    let fit: Vec<&ResultRow> =
        rows.iter().filter(|r| (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&(r.u64("n") as usize))).collect();
    if fit.len() >= 2 {
        let xs: Vec<f64> = fit.iter().map(|r| (r.u64("n") as f64).ln()).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.f64("relaxation_time").ln()).collect();
        let (slope, intercept) = fit_line(&xs, &ys);
        let increasing = rows.windows(2).all(|w| w[1].f64("relaxation_time") > w[0].f64("relaxation_time"));
        let ok = (SLOPE_WINDOW.0..=SLOPE_WINDOW.1).contains(&slope) && increasing;
        rows.push(
            ResultRow::new("gap_fit", RowKind::Assertion)
                .param("n_lo", fit[0].u64("n"))
                .param("n_hi", fit[fit.len() - 1].u64("n"))
                .metric("slope", slope)
                .metric("intercept", intercept)
                .metric("window_lo", SLOPE_WINDOW.0)
                .metric("window_hi", SLOPE_WINDOW.1)
                .metric("relaxation_increasing", increasing)
                .pass(ok),
        );
    }
    Ok(rows)
}
