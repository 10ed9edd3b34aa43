//! Edge flows, their decomposition into transport flows, and congestion.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use flipwalk_core::{MarkovChainModel, Rational};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::FlowError;

/// An antisymmetric function on ordered pairs; both orientations are stored, zeros are not.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeFlow {
    pub n_states: usize,
    pub values: BTreeMap<(usize, usize), Rational>,
}

impl EdgeFlow {
    pub fn new(n_states: usize) -> Self {
        EdgeFlow { n_states, values: BTreeMap::new() }
    }

    /// Sets phi(x,y) = v and phi(y,x) = -v.
    pub fn set(&mut self, x: usize, y: usize, v: Rational) {
        if v.is_zero() {
            self.values.remove(&(x, y));
            self.values.remove(&(y, x));
        } else {
            self.values.insert((y, x), -v.clone());
            self.values.insert((x, y), v);
        }
    }

    pub fn add(&mut self, x: usize, y: usize, v: &Rational) {
        let cur = self.get(x, y);
        self.set(x, y, cur + v);
    }

    pub fn add_flow(&mut self, other: &EdgeFlow) {
        for (&(x, y), v) in &other.values {
            if x < y {
                self.add(x, y, v);
            }
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rational {
        self.values.get(&(x, y)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn net_out(&self, x: usize) -> Rational {
        self.values.range((x, 0)..(x + 1, 0)).map(|(_, v)| v).sum()
    }

    pub fn positive_arcs(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.values.iter().filter(|(_, v)| v.is_positive()).map(|(&(x, y), v)| (x, y, v))
    }

    pub fn positive_arc_count(&self) -> usize {
        self.positive_arcs().count()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.values.iter().all(|(&(x, y), v)| self.values.get(&(y, x)).is_some_and(|w| *w == -v.clone()))
    }

    pub fn max_abs(&self) -> Rational {
        self.values.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self) -> Value {
        let arcs: Vec<Value> = self
            .positive_arcs()
            .map(|(x, y, v)| json!({"from": x, "to": y, "value": v.to_string()}))
            .collect();
        json!({"states": self.n_states, "arcs": arcs})
    }
}

fn measure(model: &MarkovChainModel, set: &[usize]) -> Rational {
    set.iter().map(|&x| &model.stationary[x]).sum()
}

/// The S-T flow axioms: antisymmetry, support on transitions, net flow pi(T) out of each
/// state of S, pi(S) into each state of T, zero elsewhere. All checks are exact.
pub fn check_st_axioms(flow: &EdgeFlow, model: &MarkovChainModel, s: &[usize], t: &[usize]) -> Result<(), FlowError> {
    if !flow.is_antisymmetric() {
        return Err(FlowError::AxiomViolation("not antisymmetric".into()));
    }
    let ss: HashSet<usize> = s.iter().copied().collect();
    if t.iter().any(|y| ss.contains(y)) {
        return Err(FlowError::AxiomViolation("S and T intersect".into()));
    }
    for &(x, y) in flow.values.keys() {
        if x == y || model.prob(x, y).is_zero() {
            return Err(FlowError::NotAnEdge(x, y));
        }
    }
    let (ps, pt) = (measure(model, s), measure(model, t));
    let tt: HashSet<usize> = t.iter().copied().collect();
    for x in 0..flow.n_states {
        let net = flow.net_out(x);
        let want = if ss.contains(&x) {
            pt.clone()
        } else if tt.contains(&x) {
            -ps.clone()
        } else {
            Rational::zero()
        };
        if net != want {
            return Err(FlowError::AxiomViolation(format!("net flow out of {x} is {net}, expected {want}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub states: Vec<usize>,
    pub weight: Rational,
}

impl WeightedPath {
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.states.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn uses(&self, x: usize, y: usize) -> bool {
        self.arcs().any(|a| a == (x, y))
    }
}

/// A probability distribution over paths from `sources` to `sinks`. `scale` is the total
/// throughput of the edge flow it was built from, so `weight * scale` is the raw path flow.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportFlow {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub paths: Vec<WeightedPath>,
    pub scale: Rational,
}

impl TransportFlow {
    pub fn total_weight(&self) -> Rational {
        self.paths.iter().map(|p| &p.weight).sum()
    }

    /// Sum of Gamma(gamma) over paths using the arc (each path counted once).
    pub fn arc_load(&self) -> BTreeMap<(usize, usize), Rational> {
        let mut load: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for p in &self.paths {
            let arcs: HashSet<(usize, usize)> = p.arcs().collect();
            for a in arcs {
                *load.entry(a).or_insert_with(Rational::zero) += &p.weight;
            }
        }
        load
    }

    pub fn start_marginal(&self) -> BTreeMap<usize, Rational> {
        let mut m = BTreeMap::new();
        for p in &self.paths {
            *m.entry(p.states[0]).or_insert_with(Rational::zero) += &p.weight;
        }
        m
    }

    pub fn end_marginal(&self) -> BTreeMap<usize, Rational> {
        let mut m = BTreeMap::new();
        for p in &self.paths {
            *m.entry(*p.states.last().unwrap()).or_insert_with(Rational::zero) += &p.weight;
        }
        m
    }

    /// True if no transition is used in both orientations.
    pub fn is_one_directional(&self) -> bool {
        let used: HashSet<(usize, usize)> = self.paths.iter().flat_map(|p| p.arcs().collect::<Vec<_>>()).collect();
        used.iter().all(|&(x, y)| !used.contains(&(y, x)))
    }

    /// Checks that the endpoint marginals are pi restricted to S and to T.
    pub fn marginals_match(&self, model: &MarkovChainModel) -> bool {
        let check = |m: BTreeMap<usize, Rational>, set: &[usize]| {
            let total = measure(model, set);
            set.iter().all(|&x| m.get(&x).cloned().unwrap_or_else(Rational::zero) == &model.stationary[x] / &total)
                && m.keys().all(|k| set.contains(k))
        };
        check(self.start_marginal(), &self.sources) && check(self.end_marginal(), &self.sinks)
    }

    pub fn to_json(&self) -> Value {
        let paths: Vec<Value> = self
            .paths
            .iter()
            .map(|p| {
                json!({
                    "states": p.states,
                    "weight_num": p.weight.numer().to_string(),
                    "weight_den": p.weight.denom().to_string(),
                })
            })
            .collect();
        json!({"scale": self.scale.to_string(), "paths": paths})
    }
}

/// Result of [`flow_to_transport`].
#[derive(Debug, Clone)]
pub struct Conversion {
    pub transport: TransportFlow,
    /// The acyclic flow that was decomposed (equal to the input unless cycles were cancelled).
    pub decomposed: EdgeFlow,
    pub augmentations: usize,
    pub cancelled_cycles: usize,
    pub positive_arcs: usize,
    /// Source and sink arcs of the auxiliary network.
    pub virtual_arcs: usize,
}

fn find_positive_cycle(flow: &EdgeFlow) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, y, _) in flow.positive_arcs() {
        adj.entry(x).or_default().push(y);
    }
    let mut color: HashMap<usize, u8> = HashMap::new();
    let starts: Vec<usize> = adj.keys().copied().collect();
    for s in starts {
        if color.contains_key(&s) {
            continue;
        }
        // iterative DFS keeping the current path
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        color.insert(s, 1);
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            let next = adj.get(&v).and_then(|a| a.get(*k)).copied();
            *k += 1;
            match next {
                None => {
                    color.insert(v, 2);
                    stack.pop();
                }
                Some(w) => match color.get(&w) {
                    Some(1) => {
                        let pos = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return Some(stack[pos..].iter().map(|&(u, _)| u).collect());
                    }
                    Some(_) => {}
                    None => {
                        color.insert(w, 1);
                        stack.push((w, 0));
                    }
                },
            }
        }
    }
    None
}

/// Decomposes an S-T edge flow into weighted paths by repeated augmentation along shortest
/// unsaturated paths (BFS, neighbors in increasing order). Positive cycles are cancelled
/// first. Each augmentation saturates at least one arc of the auxiliary network.
pub fn flow_to_transport(flow: &EdgeFlow, sources: &[usize], sinks: &[usize]) -> Result<Conversion, FlowError> {
    if !flow.is_antisymmetric() {
        return Err(FlowError::AxiomViolation("not antisymmetric".into()));
    }
    let ss: HashSet<usize> = sources.iter().copied().collect();
    let tt: HashSet<usize> = sinks.iter().copied().collect();
    if ss.iter().any(|x| tt.contains(x)) {
        return Err(FlowError::AxiomViolation("S and T intersect".into()));
    }
    let n = flow.n_states;
    for x in 0..n {
        let net = flow.net_out(x);
        let ok = if ss.contains(&x) {
            !net.is_negative()
        } else if tt.contains(&x) {
            !net.is_positive()
        } else {
            net.is_zero()
        };
        if !ok {
            return Err(FlowError::AxiomViolation(format!("net flow {net} at state {x}")));
        }
    }

    let mut work = flow.clone();
    let mut cancelled = 0;
    while let Some(cycle) = find_positive_cycle(&work) {
        let arcs: Vec<(usize, usize)> = (0..cycle.len()).map(|k| (cycle[k], cycle[(k + 1) % cycle.len()])).collect();
        let m = arcs.iter().map(|&(x, y)| work.get(x, y)).min().unwrap();
        for (x, y) in arcs {
            work.add(x, y, &-m.clone());
        }
        cancelled += 1;
    }

    let src = n;
    let snk = n + 1;
    let mut residual: BTreeMap<(usize, usize), Rational> = work.positive_arcs().map(|(x, y, v)| ((x, y), v.clone())).collect();
    let positive_arcs = residual.len();
    let mut supply = Rational::zero();
    for &z in sources {
        let v = work.net_out(z);
        if v.is_positive() {
            supply += &v;
            residual.insert((src, z), v);
        }
    }
    for &w in sinks {
        let v = -work.net_out(w);
        if v.is_positive() {
            residual.insert((w, snk), v);
        }
    }
    let virtual_arcs = residual.len() - positive_arcs;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    for &(x, y) in residual.keys() {
        adj[x].push(y);
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
    }

    let mut paths: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut augmentations = 0;
    let mut remaining = supply.clone();
    while remaining.is_positive() {
        let mut prev = vec![usize::MAX; n + 2];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        'bfs: while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if prev[w] == usize::MAX && residual.get(&(v, w)).is_some_and(|r| r.is_positive()) {
                    prev[w] = v;
                    if w == snk {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if prev[snk] == usize::MAX {
            return Err(FlowError::AxiomViolation("no augmenting path left; flow is not an S-T flow".into()));
        }
        let mut route = vec![snk];
        while *route.last().unwrap() != src {
            route.push(prev[*route.last().unwrap()]);
        }
        route.reverse();
        let bottleneck = route.windows(2).map(|w| residual[&(w[0], w[1])].clone()).min().unwrap();
        for w in route.windows(2) {
            *residual.get_mut(&(w[0], w[1])).unwrap() -= &bottleneck;
        }
        remaining -= &bottleneck;
        let states = route[1..route.len() - 1].to_vec();
        *paths.entry(states).or_insert_with(Rational::zero) += &bottleneck;
        augmentations += 1;
    }
    let transport = TransportFlow {
        sources: sources.to_vec(),
        sinks: sinks.to_vec(),
        paths: paths.into_iter().map(|(states, w)| WeightedPath { states, weight: w / &supply }).collect(),
        scale: supply,
    };
    Ok(Conversion { transport, decomposed: work, augmentations, cancelled_cycles: cancelled, positive_arcs, virtual_arcs })
}

const NORMALIZE_STEP_CAP: usize = 1_000_000;

/// Erases cycles in visiting order, keeping the endpoints.
fn loop_erase(states: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(states.len());
    for &v in states {
        match out.iter().position(|&u| u == v) {
            Some(p) => out.truncate(p + 1),
            None => out.push(v),
        }
    }
    out
}

/// Removes uses of a transition in both orientations by the rewiring: for gamma using
/// (x,y) and gamma' using (y,x) with Gamma(gamma) >= Gamma(gamma'), move gamma' onto the
/// spliced paths gamma[..x] + gamma'[x..] and gamma'[..y] + gamma[y..].
///
/// Paths are kept simple by loop erasure, so no path uses a transition both ways. Endpoint
/// marginals are preserved and no transition's load increases; the net edge flow changes by
/// at most a circulation.
pub fn normalize_one_direction(tf: &TransportFlow) -> Result<TransportFlow, FlowError> {
    let mut paths: Vec<WeightedPath> =
        merge(tf.paths.iter().map(|p| WeightedPath { states: loop_erase(&p.states), weight: p.weight.clone() }).collect());
    for _ in 0..NORMALIZE_STEP_CAP {
        let mut by_arc: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, p) in paths.iter().enumerate() {
            for a in p.arcs() {
                by_arc.entry(a).or_insert(k);
            }
        }
        let conflict = by_arc.iter().find_map(|(&(x, y), &k)| by_arc.get(&(y, x)).map(|&k2| (x, y, k, k2)));
        debug_assert!(conflict.is_none_or(|c| c.2 != c.3), "simple paths never conflict with themselves");
        let Some((mut x, mut y, mut g, mut g2)) = conflict else {
            let mut out = tf.clone();
            out.paths = merge(paths);
            return Ok(out);
        };
        if paths[g].weight < paths[g2].weight {
            std::mem::swap(&mut g, &mut g2);
            std::mem::swap(&mut x, &mut y);
        }
        // gamma = paths[g] uses (x,y); gamma' = paths[g2] uses (y,x)
        let a = &paths[g].states;
        let b = &paths[g2].states;
        let px = a.windows(2).position(|w| w == [x, y]).unwrap();
        let qy = b.windows(2).position(|w| w == [y, x]).unwrap();
        let mut p2: Vec<usize> = a[..=px].to_vec();
        p2.extend_from_slice(&b[qy + 2..]);
        let mut p3: Vec<usize> = b[..=qy].to_vec();
        p3.extend_from_slice(&a[px + 2..]);
        let w = paths[g2].weight.clone();
        paths[g].weight -= &w;
        paths[g2].weight = Rational::zero();
        paths.push(WeightedPath { states: loop_erase(&p2), weight: w.clone() });
        paths.push(WeightedPath { states: loop_erase(&p3), weight: w });
        paths = merge(paths);
    }
    Err(FlowError::Malformed("one-direction normalization did not terminate".into()))
}

fn merge(paths: Vec<WeightedPath>) -> Vec<WeightedPath> {
    let mut m: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for p in paths {
        *m.entry(p.states).or_insert_with(Rational::zero) += p.weight;
    }
    m.into_iter().filter(|(_, w)| !w.is_zero()).map(|(states, weight)| WeightedPath { states, weight }).collect()
}

/// Maximum and average congestion of a transport flow.
#[derive(Debug, Clone, PartialEq)]
pub struct CongestionReport {
    pub rho_max: Rational,
    pub rho_bar: Rational,
    pub rho_bar_s: Rational,
    pub rho_bar_t: Rational,
    pub argmax: Option<(usize, usize)>,
    /// Whether every used transition has both endpoints in S u T.
    pub within_union: bool,
    pub pi_s: Rational,
    pub pi_t: Rational,
}

impl CongestionReport {
    /// rho-bar = pi(S) rho-bar_S + pi(T) rho-bar_T. Holds exactly when `within_union`.
    pub fn identity_holds(&self) -> bool {
        self.rho_bar == &self.pi_s * &self.rho_bar_s + &self.pi_t * &self.rho_bar_t
    }

    pub fn to_json(&self) -> Value {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        json!({
            "rho_max": self.rho_max.to_string(),
            "rho_bar": self.rho_bar.to_string(),
            "rho_bar_s": self.rho_bar_s.to_string(),
            "rho_bar_t": self.rho_bar_t.to_string(),
            "rho_max_f64": f(&self.rho_max),
            "rho_bar_f64": f(&self.rho_bar),
            "rho_bar_s_f64": f(&self.rho_bar_s),
            "rho_bar_t_f64": f(&self.rho_bar_t),
            "identity_holds": self.identity_holds(),
        })
    }
}

fn congestion_from_load(
    load: &BTreeMap<(usize, usize), Rational>,
    model: &MarkovChainModel,
    s: &[usize],
    t: &[usize],
) -> Result<CongestionReport, FlowError> {
    let ss: HashSet<usize> = s.iter().copied().collect();
    let tt: HashSet<usize> = t.iter().copied().collect();
    let (ps, pt) = (measure(model, s), measure(model, t));
    let st = &ps * &pt;
    let mut rho_max = Rational::zero();
    let mut argmax = None;
    let mut total = Rational::zero();
    let mut from_s = Rational::zero();
    let mut from_t = Rational::zero();
    let mut within = true;
    for (&(x, y), l) in load {
        if l.is_zero() {
            continue;
        }
        let p = model.prob(x, y);
        if x == y || p.is_zero() {
            return Err(FlowError::NotAnEdge(x, y));
        }
        let phi = &st * l / (&model.stationary[x] * p);
        if phi > rho_max {
            rho_max = phi;
            argmax = Some((x, y));
        }
        total += l;
        let inside = |v: usize| ss.contains(&v) || tt.contains(&v);
        if !(inside(x) && inside(y)) {
            within = false;
        }
        if ss.contains(&x) && inside(y) {
            from_s += l;
        }
        if tt.contains(&x) && inside(y) {
            from_t += l;
        }
    }
    Ok(CongestionReport {
        rho_max,
        rho_bar: &st * total,
        rho_bar_s: &pt * from_s,
        rho_bar_t: &ps * from_t,
        argmax,
        within_union: within,
        pi_s: ps,
        pi_t: pt,
    })
}

/// Congestion of a transport flow, using the indicator load of each transition.
pub fn congestion(tf: &TransportFlow, model: &MarkovChainModel) -> Result<CongestionReport, FlowError> {
    congestion_from_load(&tf.arc_load(), model, &tf.sources, &tf.sinks)
}

/// Congestion of the transport flow that an acyclic S-T flow decomposes into, read off the
/// edge values directly (load = positive part / throughput).
pub fn congestion_of_flow(
    flow: &EdgeFlow,
    model: &MarkovChainModel,
    s: &[usize],
    t: &[usize],
) -> Result<CongestionReport, FlowError> {
    let scale: Rational = s.iter().map(|&z| flow.net_out(z)).sum();
    if !scale.is_positive() {
        return Err(FlowError::AxiomViolation("flow has no throughput".into()));
    }
    let load: BTreeMap<(usize, usize), Rational> = flow.positive_arcs().map(|(x, y, v)| ((x, y), v / &scale)).collect();
    congestion_from_load(&load, model, s, t)
}

/// Both sides of a functional inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, holds: lhs <= rhs + 1e-12 * (1.0 + rhs.abs()) }
    }
}

fn mean_on(model: &MarkovChainModel, f: &[f64], set: &[usize]) -> (f64, f64) {
    let mut m = 0.0;
    let mut w = 0.0;
    for &x in set {
        let p = model.stationary[x].to_f64().unwrap();
        m += p * f[x];
        w += p;
    }
    (m / w, w)
}

/// Sum of pi(x) P(x,y) (f(x) - f(y))^2 over ordered pairs with x in `from` and y in `to`
/// (all states when `to` is `None`).
fn dirichlet_sum(model: &MarkovChainModel, f: &[f64], from: &[usize], to: Option<&HashSet<usize>>) -> f64 {
    let mut acc = 0.0;
    for &x in from {
        let px = model.stationary[x].to_f64().unwrap();
        for (y, p) in &model.rows[x] {
            if *y == x || to.is_some_and(|set| !set.contains(y)) {
                continue;
            }
            let d = f[x] - f[*y];
            acc += px * p.to_f64().unwrap() * d * d;
        }
    }
    acc
}

/// pi(S)pi(T)(F(S)-F(T))^2 <= (rho-bar rho)/(pi(S)pi(T)) * sum_{x,y} pi(x)P(x,y)(f(x)-f(y))^2.
pub fn verify_transport_inequality(
    report: &CongestionReport,
    model: &MarkovChainModel,
    f: &[f64],
    s: &[usize],
    t: &[usize],
) -> InequalityCheck {
    let (fs, ps) = mean_on(model, f, s);
    let (ft, pt) = mean_on(model, f, t);
    let lhs = ps * pt * (fs - ft).powi(2);
    let all: Vec<usize> = (0..model.len()).collect();
    let rho = report.rho_max.to_f64().unwrap();
    let rho_bar = report.rho_bar.to_f64().unwrap();
    let rhs = rho_bar * rho / (ps * pt) * dirichlet_sum(model, f, &all, None);
    InequalityCheck::new(lhs, rhs)
}

/// The refined inequality with S- and T-local averages, and, when T is the complement of
/// S, its mean form (pi(S)/pi(S^c))(F(S) - E f)^2 <= ...
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCheck {
    pub corollary: InequalityCheck,
    pub mean_form: Option<InequalityCheck>,
}

pub fn verify_boundary_transport(
    report: &CongestionReport,
    model: &MarkovChainModel,
    f: &[f64],
    s: &[usize],
    t: &[usize],
) -> Result<BoundaryCheck, FlowError> {
    if !report.within_union {
        return Err(FlowError::Malformed("transport flow leaves S u T".into()));
    }
    let (fs, ps) = mean_on(model, f, s);
    let (ft, pt) = mean_on(model, f, t);
    let union: HashSet<usize> = s.iter().chain(t).copied().collect();
    let rho = report.rho_max.to_f64().unwrap();
    let rs = report.rho_bar_s.to_f64().unwrap();
    let rt = report.rho_bar_t.to_f64().unwrap();
    let ds = dirichlet_sum(model, f, s, Some(&union));
    let dt = dirichlet_sum(model, f, t, Some(&union));
    let lhs = ps * pt * (fs - ft).powi(2);
    let rhs = rho * rs / pt * ds + rho * rt / ps * dt;
    let corollary = InequalityCheck::new(lhs, rhs);
    let mean_form = (union.len() == model.len()).then(|| {
        let ef: f64 = (0..model.len()).map(|x| model.stationary[x].to_f64().unwrap() * f[x]).sum();
        let lhs = ps / pt * (fs - ef).powi(2);
        let ds = dirichlet_sum(model, f, s, None);
        let dt = dirichlet_sum(model, f, t, None);
        InequalityCheck::new(lhs, rho * rs / pt * ds + rho * rt / ps * dt)
    });
    Ok(BoundaryCheck { corollary, mean_form })
}

/// Exact check of F(S) - F(S^c) = (F(S) - E f) / pi(S^c) for a rational f.
pub fn mean_difference_identity(model: &MarkovChainModel, f: &[Rational], s: &[usize]) -> bool {
    let ss: HashSet<usize> = s.iter().copied().collect();
    let comp: Vec<usize> = (0..model.len()).filter(|x| !ss.contains(x)).collect();
    if comp.is_empty() || s.is_empty() {
        return false;
    }
    let mean = |set: &[usize]| {
        let w = measure(model, set);
        let m: Rational = set.iter().map(|&x| &model.stationary[x] * &f[x]).sum();
        (m / &w, w)
    };
    let (fs, _) = mean(s);
    let (fc, pc) = mean(&comp);
    let ef: Rational = (0..model.len()).map(|x| &model.stationary[x] * &f[x]).sum();
    &fs - &fc == (fs - ef) / pc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    /// Symmetric lazy walk with P = 1/4 on the given edges, uniform pi.
    fn walk(n: usize, edges: &[(usize, usize)]) -> MarkovChainModel {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            rows[a].push((b, q(1, 4)));
            rows[b].push((a, q(1, 4)));
        }
        for (x, row) in rows.iter_mut().enumerate() {
            let out: Rational = row.iter().map(|(_, p)| p).sum();
            row.push((x, Rational::one() - out));
            row.sort_by_key(|e| e.0);
        }
        MarkovChainModel::new((0..n).map(|x| x.to_string()).collect(), rows, vec![q(1, n as i64); n])
    }

    #[test]
    fn line_flow_is_one_path() {
        let model = walk(4, &[(0, 1), (1, 2), (2, 3)]);
        let mut f = EdgeFlow::new(4);
        for x in 0..3 {
            f.set(x, x + 1, q(1, 4));
        }
        check_st_axioms(&f, &model, &[0], &[3]).unwrap();
        let c = flow_to_transport(&f, &[0], &[3]).unwrap();
        assert_eq!(c.transport.paths, vec![WeightedPath { states: vec![0, 1, 2, 3], weight: Rational::one() }]);
        assert_eq!(c.augmentations, 1);
        let r = congestion(&c.transport, &model).unwrap();
        // phi = pi(S)pi(T)/(pi(x)P) = (1/16)/(1/16)
        assert_eq!(r.rho_max, Rational::one());
        // the path runs through states outside S u T
        assert!(!r.within_union);
        assert!(!r.identity_holds());
        assert_eq!(r, congestion_of_flow(&f, &model, &[0], &[3]).unwrap());
    }

    #[test]
    fn cycles_are_cancelled() {
        let mut f = EdgeFlow::new(4);
        f.set(0, 1, q(1, 1));
        f.set(1, 2, q(2, 1));
        f.set(2, 3, q(1, 1));
        f.set(2, 1, q(-2, 1));
        f.set(2, 0, q(1, 1));
        f.set(0, 1, q(2, 1));
        // 0->1->2->0 carries a unit cycle on top of the 0->1->2->3 path
        let c = flow_to_transport(&f, &[0], &[3]).unwrap();
        assert_eq!(c.cancelled_cycles, 1);
        assert_eq!(c.transport.paths.len(), 1);
        assert_eq!(c.transport.paths[0].states, vec![0, 1, 2, 3]);
        assert_eq!(c.decomposed.get(2, 0), Rational::zero());
    }

    #[test]
    fn rejects_bad_nets() {
        let mut f = EdgeFlow::new(3);
        f.set(0, 1, q(1, 1));
        assert!(flow_to_transport(&f, &[0], &[2]).is_err());
        assert!(flow_to_transport(&f, &[0], &[0, 1]).is_err());
        let model = walk(3, &[(0, 1), (1, 2)]);
        assert!(check_st_axioms(&f, &model, &[0], &[2]).is_err());
        let mut g = EdgeFlow::new(3);
        g.set(0, 2, q(1, 3));
        assert!(check_st_axioms(&g, &model, &[0], &[2]).is_err());
    }

    #[test]
    fn rewiring_instance() {
        let tf = TransportFlow {
            sources: vec![0, 1],
            sinks: vec![4, 5],
            paths: vec![
                WeightedPath { states: vec![0, 2, 3, 4], weight: q(2, 3) },
                WeightedPath { states: vec![1, 3, 2, 5], weight: q(1, 3) },
            ],
            scale: Rational::one(),
        };
        assert!(!tf.is_one_directional());
        let out = normalize_one_direction(&tf).unwrap();
        assert!(out.is_one_directional());
        assert_eq!(
            out.paths,
            vec![
                WeightedPath { states: vec![0, 2, 3, 4], weight: q(1, 3) },
                WeightedPath { states: vec![0, 2, 5], weight: q(1, 3) },
                WeightedPath { states: vec![1, 3, 4], weight: q(1, 3) },
            ]
        );
        assert_eq!(out.start_marginal(), tf.start_marginal());
        assert_eq!(out.end_marginal(), BTreeMap::from([(4, q(2, 3)), (5, q(1, 3))]));
    }

    #[test]
    fn rewiring_that_creates_a_loop() {
        let tf = TransportFlow {
            sources: vec![0],
            sinks: vec![8],
            paths: vec![
                WeightedPath { states: vec![0, 6, 7, 3, 8], weight: q(1, 2) },
                WeightedPath { states: vec![0, 2, 3, 7, 6, 8], weight: q(1, 2) },
            ],
            scale: Rational::one(),
        };
        let out = normalize_one_direction(&tf).unwrap();
        assert!(out.is_one_directional());
        assert_eq!(out.total_weight(), Rational::one());
        assert_eq!(
            out.paths,
            vec![
                WeightedPath { states: vec![0, 2, 3, 8], weight: q(1, 2) },
                WeightedPath { states: vec![0, 6, 8], weight: q(1, 2) },
            ]
        );
    }

    #[test]
    fn clean_flow_unchanged() {
        let tf = TransportFlow {
            sources: vec![0],
            sinks: vec![3],
            paths: vec![
                WeightedPath { states: vec![0, 1, 3], weight: q(1, 2) },
                WeightedPath { states: vec![0, 2, 3], weight: q(1, 2) },
            ],
            scale: Rational::one(),
        };
        assert_eq!(normalize_one_direction(&tf).unwrap(), tf);
    }

    #[test]
    fn boundary_check_needs_union() {
        let model = walk(4, &[(0, 1), (1, 2), (2, 3)]);
        let mut f = EdgeFlow::new(4);
        for x in 0..3 {
            f.set(x, x + 1, q(1, 4));
        }
        let r = congestion_of_flow(&f, &model, &[0], &[3]).unwrap();
        assert!(!r.within_union);
        assert!(verify_boundary_transport(&r, &model, &[0.0, 1.0, 2.0, 3.0], &[0], &[3]).is_err());
        let r2 = congestion_of_flow(&f, &model, &[0, 1], &[2, 3]);
        assert!(r2.is_ok());
    }

    #[test]
    fn mean_identity_on_walk() {
        let model = walk(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let f = vec![q(3, 1), q(-1, 2), q(0, 1), q(7, 3), q(1, 1)];
        assert!(mean_difference_identity(&model, &f, &[0, 2]));
        assert!(!mean_difference_identity(&model, &f, &[0, 1, 2, 3, 4]));
    }
}
