//! Pair and complement flows: axioms, decomposition, congestion and the transport
//! inequalities, plus the trend of the S-local average congestion.

use flipwalk_core::{build_flip_chain, FlipChain, Rational};
use flipwalk_flow::lemmas::{all_pair_flows, all_tables};
use flipwalk_flow::transport::{
    congestion, congestion_of_flow, flow_to_transport, normalize_one_direction, verify_boundary_transport,
    verify_transport_inequality, EdgeFlow,
};
use flipwalk_flow::phi::aggregate_from_parts;
use flipwalk_flow::{FlowContext, FlowFunction};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{per_n, timed};
use crate::config::{ExperimentConfig, Suite, FLOW_EXHAUSTIVE_MAX};
use crate::error::ExperimentError;
use crate::row::{ResultRow, RowKind};

fn random_fs(seed: u64, trials: usize, len: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

fn pair_row(chain: &FlipChain, p: &FlowFunction, fs: &[Vec<f64>]) -> Result<ResultRow, ExperimentError> {
    let model = &chain.model;
    let conv = flow_to_transport(&p.flow, &p.sources, &p.sinks)?;
    let tf = &conv.transport;
    let mut back = EdgeFlow::new(p.flow.n_states);
    for path in &tf.paths {
        let w = &path.weight * &tf.scale;
        for (x, y) in path.arcs() {
            back.add(x, y, &w);
        }
    }
    let exact = conv.cancelled_cycles == 0 && back.values == p.flow.values && tf.marginals_match(model);
    let one_dir = normalize_one_direction(tf)?.is_one_directional();
    let rep = congestion(tf, model)?;
    let delta = chain.delta();
    let (mut tv, mut bv) = (0usize, 0usize);
    for f in fs {
        tv += usize::from(!verify_transport_inequality(&rep, model, f, &p.sources, &p.sinks).holds);
        bv += usize::from(!verify_boundary_transport(&rep, model, f, &p.sources, &p.sinks)?.corollary.holds);
    }
    let c = vec![0.5; chain.len()];
    let constant_ok = {
        let a = verify_transport_inequality(&rep, model, &c, &p.sources, &p.sinks);
        let b = verify_boundary_transport(&rep, model, &c, &p.sources, &p.sinks)?.corollary;
        a.holds && b.holds && a.lhs == 0.0 && b.lhs == 0.0
    };
    let within = rep.rho_max <= Rational::from_integer(delta.into());
    let ok = exact && one_dir && within && rep.identity_holds() && tv == 0 && bv == 0 && constant_ok;
    Ok(ResultRow::new("flow_pair", RowKind::Assertion)
        .param("n", chain.n)
        .param("i", p.i)
        .param("j", p.j)
        .metric("rho_max", rep.rho_max.to_f64().unwrap())
        .metric("delta", delta)
        .metric("rho_bar", rep.rho_bar.to_f64().unwrap())
        .metric("rho_bar_s", rep.rho_bar_s.to_f64().unwrap())
        .metric("rho_bar_t", rep.rho_bar_t.to_f64().unwrap())
        .metric("identity_exact", rep.identity_holds())
        .metric("transport_exact", exact)
        .metric("augmentations", conv.augmentations)
        .metric("one_directional", one_dir)
        .metric("trials", fs.len())
        .metric("transport_violations", tv)
        .metric("boundary_violations", bv)
        .metric("constant_f_ok", constant_ok)
        .pass(ok))
}

fn complement_row(ctx: &FlowContext, pairs: &[FlowFunction], s: &[usize], fs: &[Vec<f64>]) -> Result<ResultRow, ExperimentError> {
    let chain = ctx.chain;
    let t: Vec<usize> = (1..=chain.n).filter(|b| !s.contains(b)).collect();
    let agg = aggregate_from_parts(ctx, s, &t, pairs)?;
    let conv = flow_to_transport(&agg.flow, &agg.sources, &agg.sinks)?;
    let rep = congestion(&conv.transport, &chain.model)?;
    let (mut bv, mut mv) = (0usize, 0usize);
    for f in fs {
        let b = verify_boundary_transport(&rep, &chain.model, f, &agg.sources, &agg.sinks)?;
        bv += usize::from(!b.corollary.holds);
        mv += usize::from(!b.mean_form.is_some_and(|m| m.holds));
    }
    let label = s.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
    Ok(ResultRow::new("flow_complement", RowKind::Assertion)
        .param("n", chain.n)
        .param("s_blocks", label)
        .metric("rho_max", rep.rho_max.to_f64().unwrap())
        .metric("rho_bar_s", rep.rho_bar_s.to_f64().unwrap())
        .metric("rho_bar_t", rep.rho_bar_t.to_f64().unwrap())
        .metric("trials", fs.len())
        .metric("boundary_violations", bv)
        .metric("mean_form_violations", mv)
        .pass(bv == 0 && mv == 0 && rep.identity_holds()))
}

/// rho-bar_S / (sqrt(n) pi-hat(T)) for S = {i}, T the other blocks.
fn trend_row(ctx: &FlowContext, pairs: &[FlowFunction]) -> Result<ResultRow, ExperimentError> {
    let chain = ctx.chain;
    let n = chain.n;
    let (mut best, mut arg, mut sum) = (0.0f64, 0usize, 0.0f64);
    for i in 1..=n {
        let t: Vec<usize> = (1..=n).filter(|&b| b != i).collect();
        let agg = aggregate_from_parts(ctx, &[i], &t, pairs)?;
        let rep = congestion_of_flow(&agg.flow, &chain.model, &agg.sources, &agg.sinks)?;
        let ratio = rep.rho_bar_s.to_f64().unwrap() / ((n as f64).sqrt() * rep.pi_t.to_f64().unwrap());
        sum += ratio;
        if ratio > best {
            best = ratio;
            arg = i;
        }
    }
    Ok(ResultRow::new("flow_trend", RowKind::Report)
        .param("n", n)
        .metric("max_ratio", best)
        .metric("argmax_block", arg)
        .metric("mean_ratio", sum / n as f64))
}

/// Nonempty proper subsets of the blocks 1..=n, in lexicographic order.
fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> =
        (1u32..(1 << n) - 1).map(|m| (1..=n).filter(|b| m & (1 << (b - 1)) != 0).collect()).collect();
    out.sort();
    out
}

pub fn run_flow_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    let (lo, hi) = cfg.range(Suite::Flows)?;
    let trials = cfg.samples(Suite::Flows);
    per_n(lo.max(2), hi, |n| {
        let (res, dt) = timed(|| -> Result<Vec<ResultRow>, ExperimentError> {
            let chain = build_flip_chain(n)?;
            let ctx = FlowContext::new(&chain);
            let pairs = all_pair_flows(&ctx, &all_tables(n)?)?;
            let mut out = Vec::new();
            if n <= FLOW_EXHAUSTIVE_MAX {
                let fs = random_fs(cfg.seed_for(Suite::Flows, n, 0), trials, chain.len());
                for p in &pairs {
                    out.push(pair_row(&chain, p, &fs)?);
                }
                for s in proper_subsets(n) {
                    out.push(complement_row(&ctx, &pairs, &s, &fs)?);
                }
            }
            out.push(trend_row(&ctx, &pairs)?);
            Ok(out)
        });
        let mut rows = res?;
        if let Some(r) = rows.last_mut() {
            r.wall_time = dt;
        }
        Ok(rows)
    })
}
