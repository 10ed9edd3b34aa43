//! Level-by-level check of the relaxation-time recursion over central blocks.

use std::collections::{BTreeMap, BTreeSet};

use flipwalk_core::partition::{restriction_chain, BlockKey};
use flipwalk_core::structure::sub_polygons;
use flipwalk_core::chain::build_flip_chain_capped as build;
use flipwalk_core::central_partition;
use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::kernel::Kernel;
use crate::spectral::second_eigen;

#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub n: usize,
    pub states: usize,
    /// Relaxation time `1/gap`.
    pub t_n: f64,
    /// `sup_f Var_pibar(F) / E(f)` over the central partition.
    pub h: f64,
    /// `max_{t,k: m_k >= 2} (n-1)/(m_k-1) t_{m_k}`.
    pub recursive_term: f64,
    pub bound: f64,
    pub holds: bool,
    /// Sub-polygon parameters appearing in central blocks.
    pub sub_sizes: Vec<usize>,
    /// Distinct restriction factors `P_t(x,y)/P(x,y)`.
    pub restriction_factors: Vec<String>,
    /// `(n-1)/(n-4)` for `n > 4`, reported for comparison only.
    pub paper_factor: Option<f64>,
    /// `factor_t * relaxation(P_t) = max_k (n-1)/(m_k-1) t_{m_k}` on every block with a free sub-polygon.
    pub restriction_identity_holds: bool,
}

/// `lambda_max(G L^+ G^T)` with `L = D_pi (I - P)` and `G` the centered, weighted block-average map.
fn projection_constant(chain: &flipwalk_core::MarkovChainModel, part: &flipwalk_core::Partition) -> f64 {
    let n = chain.len();
    let k = part.len();
    let pi: Vec<f64> = chain.stationary.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
    let pibar: Vec<f64> = part.block_measure.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for (x, row) in chain.rows.iter().enumerate() {
        for (y, p) in row {
            if *y != x {
                let v = pi[x] * p.to_f64().unwrap_or(0.0);
                l[(x, *y)] -= v;
                l[(x, x)] += v;
            }
        }
    }
    let l = (&l + l.transpose()) * 0.5;
    let eig = SymmetricEigen::new(l);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(*v));
    let mut lplus = DMatrix::<f64>::zeros(n, n);
    for (i, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev > 1e-12 * top {
            let v = eig.eigenvectors.column(i);
            lplus += (v * v.transpose()) / ev;
        }
    }
    let mut b = DMatrix::<f64>::zeros(k, n);
    for (t, members) in part.blocks.iter().enumerate() {
        for &x in members {
            b[(t, x)] = pi[x] / pibar[t];
        }
    }
    let mut center = DMatrix::<f64>::identity(k, k);
    for r in 0..k {
        for c in 0..k {
            center[(r, c)] -= pibar[c];
        }
        let s = pibar[r].sqrt();
        for c in 0..k {
            center[(r, c)] *= s;
        }
    }
    let g = center * b;
    let m = &g * lplus * g.transpose();
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().fold(0.0f64, |a, v| a.max(*v))
}

fn relaxation(chain: &flipwalk_core::MarkovChainModel) -> Result<f64, AnalysisError> {
    Ok(1.0 / (1.0 - second_eigen(&Kernel::from_model(chain))?.lambda2))
}

/// Audit rows for `n` and every sub-polygon size reached from it (descending).
pub fn recursion_audit(n: usize, cap: usize) -> Result<Vec<AuditRow>, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::TooFewStates);
    }
    let mut levels = BTreeSet::new();
    let mut frontier = vec![n];
    while let Some(m) = frontier.pop() {
        if m < 2 || !levels.insert(m) {
            continue;
        }
        let c = build(m, cap)?;
        let part = central_partition(&c);
        for key in &part.keys {
            if let BlockKey::Triangle(t) = key {
                frontier.extend(sub_polygons(m, t).iter().map(|s| s.m));
            }
        }
    }
    let mut t_of: BTreeMap<usize, f64> = BTreeMap::new();
    let mut rows = Vec::new();
    for &m in &levels {
        let c = build(m, cap)?;
        let part = central_partition(&c);
        let t_m = relaxation(&c.model)?;
        t_of.insert(m, t_m);
        let h = projection_constant(&c.model, &part);
        let mut rec = 0.0f64;
        let mut sizes = BTreeSet::new();
        let mut factors = BTreeSet::new();
        let mut identity = true;
        for (b, key) in part.keys.iter().enumerate() {
            let BlockKey::Triangle(t) = key else { continue };
            let mut block_rec = 0.0f64;
            for s in sub_polygons(m, t) {
                sizes.insert(s.m);
                if s.m >= 2 {
                    block_rec = block_rec.max((m - 1) as f64 / (s.m - 1) as f64 * t_of[&s.m]);
                }
            }
            rec = rec.max(block_rec);
            let r = restriction_chain(&c.model, &part, b)?;
            if let Some(f) = r.constant_factor() {
                factors.insert(f.to_string());
                if r.model.len() >= 2 {
                    let lhs = f.to_f64().unwrap_or(f64::NAN) * relaxation(&r.model)?;
                    if (lhs - block_rec).abs() > 1e-8 * block_rec.max(1.0) {
                        identity = false;
                    }
                }
            }
        }
        rows.push(AuditRow {
            n: m,
            states: c.len(),
            t_n: t_m,
            h,
            recursive_term: rec,
            bound: h + rec,
            holds: t_m <= h + rec + 1e-9,
            sub_sizes: sizes.into_iter().collect(),
            restriction_factors: factors.into_iter().collect(),
            paper_factor: (m > 4).then(|| (m - 1) as f64 / (m - 4) as f64),
            restriction_identity_holds: identity,
        });
    }
    rows.reverse();
    Ok(rows)
}
