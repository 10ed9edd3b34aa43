//! Recursive flow coefficients phi_{ij, eta} over pinnings and the induced edge flows.

use std::collections::HashMap;

use flipwalk_core::{FlipChain, Rational};
use num_traits::{Signed, Zero};

use crate::error::FlowError;
use crate::pinning::{flipped_diagonal, pinnings_from, Pinning, PinningIndex};
use crate::transport::{check_st_axioms, EdgeFlow};

/// Exact values of phi_{ij, eta} for every pinning `eta` of length at least 2 starting at
/// `i` (the Omega_i side) or at `j` (the Omega_j side, seeded with phi_{ji,ji} = -phi_{ij,ij}).
#[derive(Debug, Clone)]
pub struct FlowCoefficientTable {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    /// phi_{ij,ij} = pi-hat(j) / pi-hat_i(j).
    pub base: Rational,
    pub entries: HashMap<Vec<usize>, Rational>,
}

impl FlowCoefficientTable {
    pub fn build(n: usize, i: usize, j: usize) -> Result<Self, FlowError> {
        if i == j {
            return Err(FlowError::SameBlock(i));
        }
        if i == 0 || j == 0 || i > n || j > n {
            return Err(FlowError::Malformed(format!("blocks ({i},{j}) out of range for n={n}")));
        }
        let root_i = Pinning::new(n, &[i])?;
        let base = Pinning::new(n, &[j])?.measure() / root_i.conditional(j)?;
        let mut entries = HashMap::new();
        for (start, other, seed) in [(i, j, base.clone()), (j, i, -base.clone())] {
            let mut ps = pinnings_from(n, start);
            ps.sort_by_key(|p| p.len());
            for p in ps.into_iter().filter(|p| p.len() >= 2) {
                let v = &p.vertices;
                let value = if v.len() == 2 {
                    if v[1] == other {
                        seed.clone()
                    } else {
                        Rational::zero()
                    }
                } else {
                    let eta = Pinning { n, vertices: v[..v.len() - 2].to_vec() };
                    let (s, t) = (v[v.len() - 2], v[v.len() - 1]);
                    let ratio = eta.conditional(t)? / eta.extend(s)?.conditional(t)?;
                    let mut key_t = eta.vertices.clone();
                    key_t.push(t);
                    let phi_t = &entries[&key_t];
                    let phi_s = &entries[&v[..v.len() - 1].to_vec()];
                    ratio * (phi_t - phi_s)
                };
                entries.insert(p.vertices, value);
            }
        }
        Ok(FlowCoefficientTable { n, i, j, base, entries })
    }

    pub fn get(&self, key: &[usize]) -> Option<&Rational> {
        self.entries.get(key)
    }

    /// phi_{ij, eta} for a pinning starting at `i` or `j` with at least two vertices.
    pub fn phi(&self, eta: &Pinning) -> Result<Rational, FlowError> {
        self.entries
            .get(&eta.vertices)
            .cloned()
            .ok_or_else(|| FlowError::Malformed(format!("no coefficient for {eta} in table ({},{})", self.i, self.j)))
    }

    /// Largest |phi| over all stored entries.
    pub fn max_abs(&self) -> Rational {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// Per-chain data shared by all flow constructions: the pinning index, root apexes and,
/// for every transition inside a block, the pinning `eta s t` that labels it.
#[derive(Debug, Clone)]
pub struct FlowContext<'a> {
    pub chain: &'a FlipChain,
    pub index: PinningIndex,
    pub root: Vec<usize>,
    /// `edge_keys[x][k]` belongs to `chain.neighbors[x][k]`; `None` for transitions between blocks.
    pub edge_keys: Vec<Vec<Option<Vec<usize>>>>,
}

impl<'a> FlowContext<'a> {
    pub fn new(chain: &'a FlipChain) -> Self {
        let index = PinningIndex::build(chain);
        let root = chain.root_apexes();
        let mut edge_keys = Vec::with_capacity(chain.len());
        for x in 0..chain.len() {
            let sp = &index.per_state[x];
            let keys = chain.neighbors[x]
                .iter()
                .map(|&y| {
                    if root[x] != root[y] {
                        return None;
                    }
                    let (a, b) = flipped_diagonal(chain, x, y).expect("neighbor");
                    let c = sp.child_of_chord(a, b).expect("diagonal bounds a child triangle");
                    Some(sp.paths[c].clone())
                })
                .collect();
            edge_keys.push(keys);
        }
        FlowContext { chain, index, root, edge_keys }
    }

    pub fn n(&self) -> usize {
        self.chain.n
    }

    /// States of Omega[S] for a set of root apexes.
    pub fn block_states(&self, blocks: &[usize]) -> Vec<usize> {
        (0..self.chain.len()).filter(|&x| blocks.contains(&self.root[x])).collect()
    }
}

/// phi_{ij, xy} for a transition inside Omega_i u Omega_j.
pub fn phi_edge(ctx: &FlowContext, table: &FlowCoefficientTable, x: usize, y: usize) -> Result<Rational, FlowError> {
    let k = ctx.chain.neighbors[x].iter().position(|&z| z == y).ok_or(FlowError::NotAnEdge(x, y))?;
    let (rx, ry) = (ctx.root[x], ctx.root[y]);
    let (i, j) = (table.i, table.j);
    if !(rx == i || rx == j) || !(ry == i || ry == j) {
        return Err(FlowError::OutsideDomain(x, y));
    }
    if rx == i && ry == j {
        return Ok(table.base.clone());
    }
    if rx == j && ry == i {
        return Ok(-table.base.clone());
    }
    let key = ctx.edge_keys[x][k].as_ref().expect("same block");
    table
        .get(key)
        .cloned()
        .ok_or_else(|| FlowError::Malformed(format!("pinning {key:?} missing from table")))
}

/// The Omega_i -> Omega_j flow function, checked against the S-T axioms exactly.
#[derive(Debug, Clone)]
pub struct FlowFunction {
    pub i: usize,
    pub j: usize,
    pub flow: EdgeFlow,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

pub fn build_flow_function(ctx: &FlowContext, i: usize, j: usize) -> Result<FlowFunction, FlowError> {
    let table = FlowCoefficientTable::build(ctx.n(), i, j)?;
    build_flow_from_table(ctx, &table)
}

pub fn build_flow_from_table(ctx: &FlowContext, table: &FlowCoefficientTable) -> Result<FlowFunction, FlowError> {
    let (i, j) = (table.i, table.j);
    let mut flow = EdgeFlow::new(ctx.chain.len());
    for x in 0..ctx.chain.len() {
        if ctx.root[x] != i && ctx.root[x] != j {
            continue;
        }
        for &y in &ctx.chain.neighbors[x] {
            if y < x || (ctx.root[y] != i && ctx.root[y] != j) {
                continue;
            }
            let v = phi_edge(ctx, table, x, y)?;
            flow.set(x, y, v);
        }
    }
    let sources = ctx.block_states(&[i]);
    let sinks = ctx.block_states(&[j]);
    check_st_axioms(&flow, &ctx.chain.model, &sources, &sinks)?;
    Ok(FlowFunction { i, j, flow, sources, sinks })
}

/// Edgewise sum of phi_ij over i in S, j in T (the Omega[S] -> Omega[T] flow).
pub fn aggregate_flow(ctx: &FlowContext, s: &[usize], t: &[usize]) -> Result<FlowFunction, FlowError> {
    let mut parts = Vec::new();
    for &i in s {
        for &j in t {
            parts.push(build_flow_function(ctx, i, j)?);
        }
    }
    aggregate_from_parts(ctx, s, t, &parts)
}

/// Same as [`aggregate_flow`] but reusing prebuilt pair flows.
pub fn aggregate_from_parts(
    ctx: &FlowContext,
    s: &[usize],
    t: &[usize],
    parts: &[FlowFunction],
) -> Result<FlowFunction, FlowError> {
    if s.iter().any(|b| t.contains(b)) {
        return Err(FlowError::Malformed("S and T must be disjoint".into()));
    }
    let mut flow = EdgeFlow::new(ctx.chain.len());
    for p in parts.iter().filter(|p| s.contains(&p.i) && t.contains(&p.j)) {
        flow.add_flow(&p.flow);
    }
    let sources = ctx.block_states(s);
    let sinks = ctx.block_states(t);
    check_st_axioms(&flow, &ctx.chain.model, &sources, &sinks)?;
    Ok(FlowFunction { i: s[0], j: t[0], flow, sources, sinks })
}
