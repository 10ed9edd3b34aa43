//! Exhaustive checks of the pinning and flow lemmas. Every check returns a
//! [`LemmaReport`]; a failing case is recorded as a violation with a witness string, never
//! as a panic.

use std::collections::{BTreeMap, HashSet};

use flipwalk_core::{
    boundary_sets, catalan::check_catalan_mono, central_partition, projection_chain, FlipChain, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::FlowError;
use crate::phi::{aggregate_from_parts, build_flow_from_table, FlowCoefficientTable, FlowContext, FlowFunction};
use crate::pinning::{all_pinnings, pinnings_from, Pinning};
use crate::transport::congestion_of_flow;

const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub n: usize,
    pub cases_checked: u64,
    pub violation_count: u64,
    /// The first few violating cases.
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn new(lemma_id: &str, n: usize) -> Self {
        LemmaReport { lemma_id: lemma_id.to_string(), n, cases_checked: 0, violation_count: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases_checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(witness());
            }
        }
    }
}

/// The empty pinning followed by every nonempty one.
fn pinnings_with_empty(n: usize) -> Vec<Pinning> {
    let mut v = vec![Pinning::empty(n)];
    v.extend(all_pinnings(n));
    v
}

/// Frontier vertices of `eta` ordered from nearest to farthest from the last pinned vertex.
/// For the empty pinning the whole range is one side.
fn sides_from_apex(eta: &Pinning) -> [Vec<usize>; 2] {
    let (mut l, r) = eta.frontier_sets();
    if !eta.is_empty() {
        l.reverse();
    }
    [l, r]
}

fn key(eta: &Pinning, more: &[usize]) -> Vec<usize> {
    let mut k = eta.vertices.clone();
    k.extend_from_slice(more);
    k
}

pub fn check_catalanmono(max: usize) -> LemmaReport {
    let mut rep = LemmaReport::new("catalanmono", max);
    let (cases, bad) = check_catalan_mono(max);
    rep.cases_checked = cases as u64;
    rep.violation_count = bad.len() as u64;
    rep.violations = bad.iter().take(MAX_WITNESSES).map(|(k, l)| format!("k={k} l={l}")).collect();
    rep
}

/// pi-hat_{eta k}(j) > pi-hat_eta(j) for every pinning `eta` (empty included), every
/// extension `eta k` and every `j ~ eta k`.
pub fn check_pigood(n: usize) -> Result<LemmaReport, FlowError> {
    let mut rep = LemmaReport::new("pigood", n);
    for eta in pinnings_with_empty(n) {
        let (l, r) = eta.frontier_sets();
        for k in l.into_iter().chain(r) {
            let ext = eta.extend(k)?;
            let (l2, r2) = ext.frontier_sets();
            for j in l2.into_iter().chain(r2) {
                let (a, b) = (ext.conditional(j)?, eta.conditional(j)?);
                rep.record(a > b, || format!("eta={eta} k={k} j={j}: {a} <= {b}"));
            }
        }
    }
    Ok(rep)
}

/// With eta' = eta k and s, t on one frontier side of eta', t farther from k than s:
/// pi-hat_eta(s)/pi-hat_eta'(s) <= pi-hat_eta(t)/pi-hat_eta'(t).
pub fn check_pimono(n: usize) -> Result<LemmaReport, FlowError> {
    let mut rep = LemmaReport::new("pimono", n);
    for eta in pinnings_with_empty(n) {
        let (l, r) = eta.frontier_sets();
        for k in l.into_iter().chain(r) {
            let ext = eta.extend(k)?;
            for side in sides_from_apex(&ext) {
                let ratios: Vec<Rational> =
                    side.iter().map(|&v| Ok(eta.conditional(v)? / ext.conditional(v)?)).collect::<Result<_, FlowError>>()?;
                for a in 0..side.len() {
                    for b in a + 1..side.len() {
                        rep.record(ratios[a] <= ratios[b], || {
                            format!("eta={eta} k={k} s={} t={}: {} > {}", side[a], side[b], ratios[a], ratios[b])
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Transitions between Omega_{eta i j} and Omega_{eta j i} form a perfect matching whenever
/// i, j lie on the same frontier side of eta.
pub fn check_matching(ctx: &FlowContext) -> LemmaReport {
    let n = ctx.n();
    let mut rep = LemmaReport::new("matching", n);
    for eta in pinnings_with_empty(n) {
        for side in sides_from_apex(&eta) {
            for &i in &side {
                for &j in &side {
                    if i == j {
                        continue;
                    }
                    let a = ctx.index.states(&key(&eta, &[i, j]));
                    let b: HashSet<usize> = ctx.index.states(&key(&eta, &[j, i])).iter().copied().collect();
                    let mut hit: HashSet<usize> = HashSet::new();
                    let mut ok = a.len() == b.len() && !a.is_empty();
                    for &x in a {
                        let nb: Vec<usize> = ctx.chain.neighbors[x].iter().copied().filter(|y| b.contains(y)).collect();
                        ok &= nb.len() == 1 && hit.insert(nb[0]);
                    }
                    ok &= hit.len() == b.len();
                    rep.record(ok, || format!("eta={eta} i={i} j={j}: |A|={} |B|={}", a.len(), b.len()));
                }
            }
        }
    }
    rep
}

/// Every state of Omega_eta lies in Omega_{eta s} for exactly one s of each nonempty side.
pub fn check_frontier_uniqueness(ctx: &FlowContext) -> LemmaReport {
    let n = ctx.n();
    let mut rep = LemmaReport::new("frontier", n);
    for eta in pinnings_with_empty(n) {
        for side in sides_from_apex(&eta) {
            if side.is_empty() {
                continue;
            }
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for &s in &side {
                for &x in ctx.index.states(&key(&eta, &[s])) {
                    *count.entry(x).or_default() += 1;
                }
            }
            for &x in ctx.index.states(&eta.vertices) {
                let c = count.get(&x).copied().unwrap_or(0);
                rep.record(c == 1, || format!("eta={eta} state {x} in {c} classes"));
            }
        }
    }
    rep
}

/// Outcome of the boundary inequality check, with the tightness record for indicators.
#[derive(Debug, Clone, Serialize)]
pub struct PerfmatReport {
    pub report: LemmaReport,
    pub adjacent_pairs: usize,
    pub indicator_tight: usize,
    pub indicator_strict: usize,
}

fn weighted_mean(chain: &FlipChain, set: &[usize], f: &[Rational]) -> Rational {
    let w: Rational = set.iter().map(|&x| &chain.model.stationary[x]).sum();
    let m: Rational = set.iter().map(|&x| &chain.model.stationary[x] * &f[x]).sum();
    m / w
}

/// pibar(t) Pbar(t,t') (f(Omega_tt') - f(Omega_t't))^2 <= sum over the matching of
/// pi(x)P(x,y)(f(x)-f(y))^2 on the central partition, for `trials` integer-valued f and for
/// the indicator of each block.
pub fn check_perfmat(chain: &FlipChain, trials: usize, seed: u64) -> Result<PerfmatReport, FlowError> {
    let mut rep = LemmaReport::new("perfmat", chain.n);
    let part = central_partition(chain);
    let proj = projection_chain(&chain.model, &part);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<Vec<Rational>> = (0..trials)
        .map(|_| (0..chain.len()).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-20i64..=20)))).collect())
        .collect();
    let (mut pairs, mut tight, mut strict) = (0, 0, 0);
    for t in 0..part.len() {
        for (t2, pbar) in &proj.rows[t] {
            if *t2 == t || pbar.is_zero() {
                continue;
            }
            pairs += 1;
            let b = boundary_sets(chain, &part, t, *t2)?;
            let mass = &part.block_measure[t] * pbar;
            let matched: Rational =
                b.matching.iter().map(|&(x, y)| &chain.model.stationary[x] * chain.model.prob(x, y)).sum();
            rep.record(b.is_perfect_matching && matched == mass, || format!("blocks {t},{t2}: matching or mass mismatch"));
            let mut check = |f: &[Rational], label: &str| -> bool {
                let d = weighted_mean(chain, &b.omega_tt, f) - weighted_mean(chain, &b.omega_t_t, f);
                let lhs = &mass * &d * &d;
                let rhs: Rational = b
                    .matching
                    .iter()
                    .map(|&(x, y)| {
                        let e = &f[x] - &f[y];
                        &chain.model.stationary[x] * chain.model.prob(x, y) * &e * &e
                    })
                    .sum();
                rep.record(lhs <= rhs, || format!("blocks {t},{t2} {label}: {lhs} > {rhs}"));
                lhs == rhs
            };
            for (k, f) in fs.iter().enumerate() {
                check(f, &format!("trial {k}"));
            }
            let ind: Vec<Rational> =
                (0..chain.len()).map(|x| if part.block_of[x] == t { Rational::one() } else { Rational::zero() }).collect();
            if check(&ind, "indicator") {
                tight += 1;
            } else {
                strict += 1;
            }
        }
    }
    Ok(PerfmatReport { report: rep, adjacent_pairs: pairs, indicator_tight: tight, indicator_strict: strict })
}

fn random_f(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn mean_f64(chain: &FlipChain, set: &[usize], f: &[f64]) -> f64 {
    let mut m = 0.0;
    let mut w = 0.0;
    for &x in set {
        let p = chain.model.stationary[x].to_f64().unwrap();
        m += p * f[x];
        w += p;
    }
    m / w
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * scale.max(1.0)
}

/// pi-hat(eta i) pi-hat_{eta i}(j) (F(eta i j) - F(eta j i)) equals the sum over the matching
/// of Delta pi(x) P(x,y) (f(x) - f(y)), for `trials` random f.
pub fn check_ijji(ctx: &FlowContext, trials: usize, seed: u64) -> Result<LemmaReport, FlowError> {
    let chain = ctx.chain;
    let n = ctx.n();
    let delta = chain.delta() as f64;
    let mut rep = LemmaReport::new("ijji", n);
    struct Case {
        label: String,
        coef: f64,
        a: Vec<usize>,
        b: Vec<usize>,
        edges: Vec<(usize, usize, f64)>,
    }
    let mut cases = Vec::new();
    for eta in pinnings_with_empty(n) {
        for side in sides_from_apex(&eta) {
            for &i in &side {
                for &j in &side {
                    if i == j {
                        continue;
                    }
                    let ei = eta.extend(i)?;
                    let coef = (ei.measure() * ei.conditional(j)?).to_f64().unwrap();
                    let a = ctx.index.states(&key(&eta, &[i, j])).to_vec();
                    let b = ctx.index.states(&key(&eta, &[j, i])).to_vec();
                    let bs: HashSet<usize> = b.iter().copied().collect();
                    let mut edges = Vec::new();
                    for &x in &a {
                        for (y, p) in &chain.model.rows[x] {
                            if bs.contains(y) {
                                edges.push((x, *y, (&chain.model.stationary[x] * p).to_f64().unwrap()));
                            }
                        }
                    }
                    cases.push(Case { label: format!("eta={eta} i={i} j={j}"), coef, a, b, edges });
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let f = random_f(&mut rng, chain.len());
        for c in &cases {
            let lhs = c.coef * (mean_f64(chain, &c.a, &f) - mean_f64(chain, &c.b, &f));
            let rhs: f64 = c.edges.iter().map(|&(x, y, w)| delta * w * (f[x] - f[y])).sum();
            rep.record(close(lhs, rhs, 1.0), || format!("{} trial {trial}: {lhs} vs {rhs}", c.label));
        }
    }
    Ok(rep)
}

/// F(eta i) - F(eta i j) = sum over k on j's side of eta i of pi-hat_{eta i}(k)(F(eta i k) - F(eta i j)).
pub fn check_iij(ctx: &FlowContext, trials: usize, seed: u64) -> Result<LemmaReport, FlowError> {
    let chain = ctx.chain;
    let n = ctx.n();
    let mut rep = LemmaReport::new("iij", n);
    let mut cases: Vec<(Pinning, Vec<(usize, f64)>)> = Vec::new();
    for eta in pinnings_with_empty(n) {
        let (l, r) = eta.frontier_sets();
        for i in l.into_iter().chain(r) {
            let ei = eta.extend(i)?;
            for side in sides_from_apex(&ei) {
                if side.is_empty() {
                    continue;
                }
                let w = side.iter().map(|&k| Ok((k, ei.conditional(k)?.to_f64().unwrap()))).collect::<Result<_, FlowError>>()?;
                cases.push((ei.clone(), w));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let f = random_f(&mut rng, chain.len());
        for (ei, side) in &cases {
            let fi = mean_f64(chain, ctx.index.states(&ei.vertices), &f);
            let fk: Vec<f64> = side.iter().map(|&(k, _)| mean_f64(chain, ctx.index.states(&key(ei, &[k])), &f)).collect();
            for (jpos, &(j, _)) in side.iter().enumerate() {
                let lhs = fi - fk[jpos];
                let rhs: f64 = side.iter().zip(&fk).map(|(&(_, w), &v)| w * (v - fk[jpos])).sum();
                rep.record(close(lhs, rhs, 1.0), || format!("eta i={ei} j={j} trial {trial}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(rep)
}

/// Coefficient tables for every ordered pair i != j.
pub fn all_tables(n: usize) -> Result<Vec<FlowCoefficientTable>, FlowError> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(FlowCoefficientTable::build(n, i, j)?);
            }
        }
    }
    Ok(out)
}

/// (first vertex, other block) for the Omega_i and Omega_j sides of a table.
fn table_sides(t: &FlowCoefficientTable) -> [(usize, usize); 2] {
    [(t.i, t.j), (t.j, t.i)]
}

fn side_values(t: &FlowCoefficientTable, eta: &Pinning, side: &[usize]) -> Vec<Rational> {
    side.iter().map(|&s| t.get(&key(eta, &[s])).cloned().expect("table covers extensions")).collect()
}

fn monotone_pair(a: &Rational, b: &Rational, bounded: bool) -> bool {
    let one = Rational::one();
    let up = !a.is_negative() && a <= b && (!bounded || *b <= one);
    let down = !a.is_positive() && a >= b && (!bounded || *b >= -one);
    up || down
}

/// rholeq1 (bounded), rhomono (sign and monotonicity), rhodecomp, rhoj1, the zero
/// clause of the definition and the global bound |phi| <= 1, over all pair tables.
pub fn check_phi_lemmas(n: usize, tables: &[FlowCoefficientTable]) -> Result<Vec<LemmaReport>, FlowError> {
    let mut leq1 = LemmaReport::new("rholeq1", n);
    let mut mono = LemmaReport::new("rhomono", n);
    let mut decomp = LemmaReport::new("rhodecomp", n);
    let mut j1 = LemmaReport::new("rhoj1", n);
    let mut zero = LemmaReport::new("phi_zero", n);
    let mut bounded = LemmaReport::new("phi_bounded", n);
    for t in tables {
        let one = Rational::one();
        bounded.record(t.base <= one, || format!("({},{}) base {}", t.i, t.j, t.base));
        for (k, v) in &t.entries {
            bounded.record(v.abs() <= one, || format!("({},{}) {k:?}: {v}", t.i, t.j));
        }
        for (sign, (start, other)) in table_sides(t).into_iter().enumerate() {
            let target = Pinning::new(n, &[other])?.measure();
            for eta in pinnings_from(n, start) {
                let sides = sides_from_apex(&eta);
                if eta.contains_vertex(other) {
                    for side in &sides {
                        let vals = side_values(t, &eta, side);
                        for a in 0..vals.len() {
                            for b in a + 1..vals.len() {
                                let w = || format!("({},{}) eta={eta} s={} t={}: {} {}", t.i, t.j, side[a], side[b], vals[a], vals[b]);
                                leq1.record(monotone_pair(&vals[a], &vals[b], true), w);
                                mono.record(monotone_pair(&vals[a], &vals[b], false), w);
                            }
                        }
                    }
                    let star = |p: &Pinning, side: &[usize]| side_values(t, p, side).iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
                    let (l, r) = eta.frontier_sets();
                    for (side_set, parent_side) in [(&l, &l), (&r, &r)] {
                        let bound = star(&eta, parent_side);
                        for &k in side_set {
                            let ext = eta.extend(k)?;
                            let (l2, r2) = ext.frontier_sets();
                            let total = star(&ext, &l2) + star(&ext, &r2);
                            decomp.record(total <= bound, || format!("({},{}) eta={eta} k={k}: {total} > {bound}", t.i, t.j));
                        }
                    }
                } else {
                    for side in &sides {
                        for (&s, v) in side.iter().zip(side_values(t, &eta, side)) {
                            if s == other {
                                let mut want = &target / eta.conditional(other)?;
                                if sign == 1 {
                                    want = -want;
                                }
                                j1.record(v == want, || format!("({},{}) eta={eta}: {v} != {want}", t.i, t.j));
                            } else {
                                zero.record(v.is_zero(), || format!("({},{}) eta={eta} s={s}: {v}", t.i, t.j));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(vec![leq1, mono, decomp, j1, zero, bounded])
}

/// Level sums of |phi| over the pinnings of single states.
#[derive(Debug, Clone, Serialize)]
pub struct PerLevelReport {
    /// The literal claim: every level sum is at most one.
    pub literal: LemmaReport,
    /// The bound that pigood and rhodecomp support: every level sum is at most twice |phi| at
    /// the pinning of x ending at the other block.
    pub relaxed: LemmaReport,
    pub max_sum: String,
    pub max_sum_f64: f64,
    pub max_ratio: f64,
}

/// For each state x of Omega_i u Omega_j and each depth d, sums |phi| over the pinnings of x
/// with d vertices.
pub fn check_per_level(ctx: &FlowContext, tables: &[FlowCoefficientTable]) -> PerLevelReport {
    let n = ctx.n();
    let mut literal = LemmaReport::new("per_level", n);
    let mut relaxed = LemmaReport::new("per_level_relaxed", n);
    let mut max_sum = Rational::zero();
    let mut max_ratio = 0.0f64;
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    for t in tables {
        for x in ctx.block_states(&[t.i, t.j]) {
            let paths = &ctx.index.per_state[x].paths;
            let other = if paths[0][0] == t.i { t.j } else { t.i };
            let mut levels: BTreeMap<usize, Rational> = BTreeMap::new();
            let mut anchor = Rational::zero();
            for p in paths.iter().filter(|p| p.len() >= 2) {
                let v = t.get(p).expect("path in table").abs();
                if *p.last().unwrap() == other {
                    anchor = v.clone();
                }
                *levels.entry(p.len()).or_insert_with(Rational::zero) += v;
            }
            for (d, s) in levels {
                literal.record(s <= one, || format!("({},{}) state {x} depth {d}: {s}", t.i, t.j));
                let cap = &two * &anchor;
                relaxed.record(s <= cap, || format!("({},{}) state {x} depth {d}: {s} > {cap}", t.i, t.j));
                if !anchor.is_zero() {
                    max_ratio = max_ratio.max((&s / &anchor).to_f64().unwrap());
                }
                if s > max_sum {
                    max_sum = s;
                }
            }
        }
    }
    PerLevelReport { literal, relaxed, max_sum_f64: max_sum.to_f64().unwrap(), max_sum: max_sum.to_string(), max_ratio }
}

/// Pair flows for all ordered pairs, built once for reuse.
pub fn all_pair_flows(ctx: &FlowContext, tables: &[FlowCoefficientTable]) -> Result<Vec<FlowFunction>, FlowError> {
    tables.iter().map(|t| build_flow_from_table(ctx, t)).collect()
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for v in 1..=n {
        let more: Vec<Vec<usize>> = out.iter().filter(|s| s.len() < k).map(|s| [s.as_slice(), &[v]].concat()).collect();
        out.extend(more);
    }
    out.retain(|s| !s.is_empty());
    out.sort();
    out
}

/// |sum_{i in S, j in T} phi_{ij,xy}| <= 1 for all disjoint S, T of size at most `budget`,
/// together with the flow axioms of each aggregate.
pub fn check_maxcong(ctx: &FlowContext, pairs: &[FlowFunction], budget: usize) -> LemmaReport {
    let n = ctx.n();
    let mut rep = LemmaReport::new("maxcong", n);
    let subsets = subsets_up_to(n, budget);
    for s in &subsets {
        for t in &subsets {
            if s.iter().any(|b| t.contains(b)) {
                continue;
            }
            match aggregate_from_parts(ctx, s, t, pairs) {
                Ok(agg) => {
                    let m = agg.flow.max_abs();
                    rep.record(m <= Rational::one(), || format!("S={s:?} T={t:?}: max {m}"));
                }
                Err(e) => rep.record(false, || format!("S={s:?} T={t:?}: {e}")),
            }
        }
    }
    rep
}

/// For every pair flow: exact axioms (checked at construction), rho_max <= Delta, and
/// F(i) - F(j) = Delta/(2 pi-hat(i) pi-hat(j)) sum_{x,y} phi(x,y) pi(x) P(x,y) (f(x) - f(y))
/// for `trials` integer-valued f.
pub fn check_l1dirweak(ctx: &FlowContext, pairs: &[FlowFunction], trials: usize, seed: u64) -> Result<LemmaReport, FlowError> {
    let chain = ctx.chain;
    let model = &chain.model;
    let mut rep = LemmaReport::new("l1dirweak", ctx.n());
    let delta = Rational::from_integer(BigInt::from(chain.delta()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<Vec<Rational>> = (0..trials)
        .map(|_| (0..chain.len()).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-20i64..=20)))).collect())
        .collect();
    for p in pairs {
        let c = congestion_of_flow(&p.flow, model, &p.sources, &p.sinks)?;
        rep.record(c.rho_max <= delta, || format!("({},{}) rho_max {}", p.i, p.j, c.rho_max));
        let pi_i: Rational = p.sources.iter().map(|&x| &model.stationary[x]).sum();
        let pi_j: Rational = p.sinks.iter().map(|&x| &model.stationary[x]).sum();
        let scale = &delta / (Rational::from_integer(BigInt::from(2)) * &pi_i * &pi_j);
        for (k, f) in fs.iter().enumerate() {
            let lhs = weighted_mean(chain, &p.sources, f) - weighted_mean(chain, &p.sinks, f);
            let sum: Rational = p
                .flow
                .values
                .iter()
                .map(|(&(x, y), v)| v * &model.stationary[x] * model.prob(x, y) * (&f[x] - &f[y]))
                .sum();
            let rhs = &scale * sum;
            rep.record(lhs == rhs, || format!("({},{}) trial {k}: {lhs} != {rhs}", p.i, p.j));
        }
    }
    Ok(rep)
}
