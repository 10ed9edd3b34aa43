//! Exhaustive lemma checks and the functional identities.

use flipwalk_analysis::{
    check_convexity_lemma, check_product_inequality, check_var_ent_comparison, total_entropy_decomposition,
    total_variance_decomposition, Beta,
};
use flipwalk_core::{build_flip_chain, central_partition, oriented_partition, product_chain, FlipChain, Rational};
use flipwalk_flow::lemmas::{self as lm, LemmaReport};
use flipwalk_flow::FlowContext;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite, IDENTITY_TRIALS};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

/// Largest n for the coefficient lemmas.
pub const PHI_LEMMA_MAX: usize = 7;
/// Largest n for the randomized block-pair and flow checks.
pub const PAIR_LEMMA_MAX: usize = 6;
/// Range of the Catalan ratio check.
pub const CATALAN_MONO_MAX: usize = 200;

fn lemma_row(r: &LemmaReport, kind: RowKind) -> ResultRow {
    ResultRow::new("lemma", kind)
        .param("lemma", r.lemma_id.as_str())
        .param("n", r.n)
        .metric("cases_checked", r.cases_checked)
        .metric("violations", r.violation_count)
        .metric("witness", r.violations.first().cloned().unwrap_or_default())
        .pass(r.passed())
}

fn counter(id: &str, n: usize) -> LemmaReport {
    LemmaReport::new(id, n)
}

/// Laws of total variance and entropy, the convexity lemma with beta = sqrt and the
/// variance-entropy comparison, on both partitions.
fn identity_reports(chain: &FlipChain, seed: u64) -> Result<Vec<LemmaReport>, ExperimentError> {
    let n = chain.n;
    let pi: Vec<f64> = chain.model.stationary.iter().map(|p| p.to_f64().unwrap()).collect();
    let mut var = counter("total_variance", n);
    let mut ent = counter("total_entropy", n);
    let mut conv = counter("convexity_sqrt", n);
    let mut cmp = counter("var_ent_comparison", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, part) in [("central", central_partition(chain)), ("oriented", oriented_partition(chain))] {
        for k in 0..IDENTITY_TRIALS {
            let f: Vec<f64> = (0..chain.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let g: Vec<f64> = f.iter().map(|v| v * v).collect();
            let d = total_variance_decomposition(&pi, &part, &f)?;
            let gap = (d.proj_term + d.restr_term - d.total).abs();
            var.record(gap <= 1e-12, || format!("{name} trial {k}: residual {gap:e}"));
            let e = total_entropy_decomposition(&pi, &part, &g)?;
            let gap = (e.proj_term + e.restr_term - e.total).abs();
            ent.record(gap <= 1e-12, || format!("{name} trial {k}: residual {gap:e}"));
            conv.record(check_convexity_lemma(&pi, &part, &g, Beta::Sqrt)?, || format!("{name} trial {k}"));
            if n >= 3 {
                cmp.record(check_var_ent_comparison(&pi, &f)?, || format!("trial {k}"));
            }
        }
    }
    Ok(vec![var, ent, conv, cmp])
}

/// Poincare and log-Sobolev product inequalities on random products of 2-3 flip chains.
fn product_report(seed: u64, trials: usize) -> Result<LemmaReport, ExperimentError> {
    let mut rep = counter("product_inequality", 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..8u64 {
        let k = rng.gen_range(2..=3);
        let comps: Vec<_> = (0..k).map(|_| build_flip_chain(rng.gen_range(2..=4)).map(|c| c.model)).collect::<Result<_, _>>()?;
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..6)).collect();
        let tot: i64 = raw.iter().sum();
        let w: Vec<Rational> = raw.iter().map(|&r| Rational::new(r.into(), tot.into())).collect();
        let p = product_chain(&comps, &w)?;
        let r = check_product_inequality(&comps, &w, &p, trials, seed ^ t)?;
        rep.record(r.holds(), || format!("product {t}: {r:?}"));
    }
    Ok(rep)
}

pub fn run_lemma_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Lemmas)?;
    let trials = cfg.samples(Suite::Lemmas);
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut rows = vec![lemma_row(&lm::check_catalanmono(CATALAN_MONO_MAX), RowKind::Assertion)];
    rows.extend(per_n(lo.max(2), hi, |n| {
        let (res, dt) = timed(|| -> Result<Vec<ResultRow>, ExperimentError> {
            let mut out = Vec::new();
            let push = |out: &mut Vec<ResultRow>, r: &LemmaReport| out.push(lemma_row(r, RowKind::Assertion));
            let chain = build_flip_chain(n)?;
            let ctx = FlowContext::new(&chain);
            let seed = |k| cfg.seed_for(Suite::Lemmas, n, k);
            push(&mut out, &lm::check_pigood(n)?);
            push(&mut out, &lm::check_pimono(n)?);
            push(&mut out, &lm::check_matching(&ctx));
            push(&mut out, &lm::check_frontier_uniqueness(&ctx));
            let pm = lm::check_perfmat(&chain, trials, seed(1))?;
            push(&mut out, &pm.report);
            let mut tight = counter("perfmat_indicator_tight", n);
            tight.cases_checked = pm.adjacent_pairs as u64;
            tight.violation_count = (pm.adjacent_pairs - pm.indicator_tight) as u64;
            out.push(lemma_row(&tight, RowKind::Report));
            if n <= PHI_LEMMA_MAX {
                let tables = lm::all_tables(n)?;
                for r in lm::check_phi_lemmas(n, &tables)? {
                    push(&mut out, &r);
                }
                let pl = lm::check_per_level(&ctx, &tables);
                let mut lit = lemma_row(&pl.literal, RowKind::Finding);
                if !pl.literal.passed() {
                    let w = format!("max level sum {}; first: {}", pl.max_sum, pl.literal.violations[0]);
                    lit = lit.metric("witness", w);
                }
                out.push(lit);
                push(&mut out, &pl.relaxed);
                if n <= PAIR_LEMMA_MAX {
                    push(&mut out, &lm::check_ijji(&ctx, trials, seed(2))?);
                    push(&mut out, &lm::check_iij(&ctx, trials, seed(3))?);
                    let pairs = lm::all_pair_flows(&ctx, &tables)?;
                    push(&mut out, &lm::check_maxcong(&ctx, &pairs, 2));
                    push(&mut out, &lm::check_l1dirweak(&ctx, &pairs, trials, seed(4))?);
                    for r in identity_reports(&chain, seed(5))? {
                        push(&mut out, &r);
                    }
                }
            }
            Ok(out)
        });
        let mut rows = res?;
        if let Some(r) = rows.first_mut() {
            r.wall_time = dt;
        }
        Ok(rows)
    })?);
    rows.push(lemma_row(&product_report(cfg.seed_for(Suite::Lemmas, 0, 6), 500)?, RowKind::Assertion));
    Ok(rows)
}
