//! Exact mixing times against the spectral and log-Sobolev bounds.

use flipwalk_analysis::mixing::{ls_mixing_constant, pi_star_f64, spectral_mixing_bound};
use flipwalk_analysis::{log_sobolev_constant, mixing_time, mixing_time_from, spectral_gap, LsBudget};
use flipwalk_core::{build_flip_chain, Rational};
use num_traits::{One, ToPrimitive};

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

pub fn run_mixing_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Mixing)?;
    let eps = Rational::new(1.into(), 4.into());
    per_n(lo.max(2), hi, |n| {
        let (row, dt) = timed(|| -> Result<ResultRow, ExperimentError> {
            let chain = build_flip_chain(n)?;
            // the worst start is attained on a rotation-reflection orbit representative
            let reps: Vec<usize> = chain.orbit_representatives().iter().map(|r| r.0).collect();
            let tau = mixing_time_from(&chain.model, &reps, &eps, 1_000_000)?.tau;
            let one = mixing_time(&chain.model, &Rational::one(), usize::MAX)?.tau;
            let gap = spectral_gap(&chain.model)?;
            let pi_star = pi_star_f64(&chain.model);
            let e = eps.to_f64().unwrap();
            let bound = spectral_mixing_bound(gap, e, pi_star);
            let budget = LsBudget { restarts: 16, max_iters: 500, seed: cfg.seed_for(Suite::Mixing, n, 0), cap: usize::MAX };
            let ls = log_sobolev_constant(&chain.model, &budget)?;
            let alpha = chain.model.holding.to_f64().unwrap();
            Ok(ResultRow::new("mixing", RowKind::Assertion)
                .param("n", n)
                .param("eps", eps.to_string())
                .metric("states", chain.len())
                .metric("tau", tau)
                .metric("gap", gap)
                .metric("pi_star", chain.model.pi_star().to_string())
                .metric("spectral_bound", bound)
                .metric("tau_eps_one", one)
                .metric("ls_estimate", ls.estimate)
                .metric("ls_implied_constant", ls_mixing_constant(tau, ls.estimate, alpha, e, pi_star))
                .pass(tau as f64 <= bound && one == 0))
        });
        Ok(vec![row?.timed(dt)])
    })
}
