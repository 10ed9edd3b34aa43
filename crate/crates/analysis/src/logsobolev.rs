//! Upper bounds and descent estimates for the log-Sobolev constant.

use flipwalk_core::MarkovChainModel;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::functionals::{dirichlet, entropy_of_square, expectation, variance};
use crate::kernel::Kernel;
use crate::spectral::second_eigen;

#[derive(Debug, Clone)]
pub struct LsBudget {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Largest state count accepted.
    pub cap: usize,
}

impl Default for LsBudget {
    fn default() -> Self {
        LsBudget { restarts: 64, max_iters: 2000, seed: 0, cap: 5000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LsResult {
    /// `min(certified_upper, best descent value)`.
    pub estimate: f64,
    /// Smallest `E(f)/Ent(f^2)` over the probe family.
    pub certified_upper: f64,
    pub best_probe: String,
    /// `gap (1 - 2 pi*) / log(1/pi* - 1)`, a lower bound from the variance-entropy comparison.
    pub sanity_floor: f64,
}

/// `(1 - 2p) / log(1/p - 1)`, continuous at `p = 1/2` with value `1/2`.
pub fn var_ent_constant(pi_star: f64) -> f64 {
    if (pi_star - 0.5).abs() < 1e-12 {
        0.5
    } else {
        (1.0 - 2.0 * pi_star) / (1.0 / pi_star - 1.0).ln()
    }
}

/// Ratio `E(f)/Ent(f^2)`; `None` when `f` is too close to constant to evaluate reliably.
pub fn ls_ratio(k: &Kernel, f: &[f64]) -> Option<f64> {
    let m2 = expectation(&k.pi, &f.iter().map(|v| v * v).collect::<Vec<_>>());
    if m2 <= 0.0 || variance(&k.pi, f) < 1e-10 * m2 {
        return None;
    }
    let ent = entropy_of_square(&k.pi, f);
    (ent > 0.0).then(|| dirichlet(k, f) / ent)
}

fn normalize(k: &Kernel, f: &mut [f64]) {
    for v in f.iter_mut() {
        *v = v.max(0.0);
    }
    let m2: f64 = k.pi.iter().zip(f.iter()).map(|(p, v)| p * v * v).sum();
    if m2 > 0.0 {
        let s = m2.sqrt();
        f.iter_mut().for_each(|v| *v /= s);
    }
}

/// Gradient of the ratio in the `pi`-weighted inner product.
fn gradient(k: &Kernel, f: &[f64], e: f64, ent: f64) -> Vec<f64> {
    let mut pf = vec![0.0; f.len()];
    k.apply(f, &mut pf);
    let m: f64 = k.pi.iter().zip(f).map(|(p, v)| p * v * v).sum();
    (0..f.len())
        .map(|x| {
            let de = 2.0 * (f[x] - pf[x]);
            let dent = if f[x] > 0.0 { 2.0 * f[x] * (f[x] * f[x] / m).ln() } else { 0.0 };
            (de * ent - e * dent) / (ent * ent)
        })
        .collect()
}

fn descend(k: &Kernel, start: &[f64], max_iters: usize) -> Option<f64> {
    let mut f = start.iter().map(|v| v.abs()).collect::<Vec<_>>();
    normalize(k, &mut f);
    let mut r = ls_ratio(k, &f)?;
    let mut step = 1.0;
    for _ in 0..max_iters {
        let e = dirichlet(k, &f);
        let ent = entropy_of_square(&k.pi, &f);
        let g = gradient(k, &f, e, ent);
        let mut moved = false;
        while step > 1e-14 {
            let mut cand: Vec<f64> = f.iter().zip(&g).map(|(v, d)| v - step * d).collect();
            normalize(k, &mut cand);
            match ls_ratio(k, &cand) {
                Some(rc) if rc < r => {
                    let rel = (r - rc) / r;
                    f = cand;
                    r = rc;
                    step *= 2.0;
                    moved = rel >= 1e-10;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !moved {
            break;
        }
    }
    Some(r)
}

/// Probe family plus multi-start projected gradient descent.
pub fn log_sobolev_constant(chain: &MarkovChainModel, budget: &LsBudget) -> Result<LsResult, AnalysisError> {
    let n = chain.len();
    if n > budget.cap {
        return Err(AnalysisError::CapExceeded { size: n, cap: budget.cap });
    }
    let k = Kernel::from_model(chain);
    let eig = second_eigen(&k)?;
    let gap = 1.0 - eig.lambda2;
    let pi_star = chain.pi_star().to_f64().unwrap_or(0.0);

    let mut probes: Vec<(String, Vec<f64>)> = Vec::new();
    for x in 0..n {
        let mut ind = vec![0.0; n];
        ind[x] = 1.0;
        probes.push((format!("indicator {x}"), ind.clone()));
        probes.push((format!("complement {x}"), ind.iter().map(|v| 1.0 - v).collect()));
    }
    let v2 = &eig.function;
    let vmax = v2.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for eps in [0.5, 1e-1, 1e-2, 1e-3] {
        probes.push((format!("1+{eps}v2"), v2.iter().map(|v| 1.0 + eps * v / vmax).collect()));
    }
    probes.push(("v2".into(), v2.clone()));
    probes.push(("|v2|".into(), v2.iter().map(|v| v.abs()).collect()));

    let mut certified = f64::INFINITY;
    let mut best_probe = String::new();
    for (name, f) in &probes {
        if let Some(r) = ls_ratio(&k, f) {
            if r < certified {
                certified = r;
                best_probe = name.clone();
            }
        }
    }

    // Descent from the best few probes and from seeded random positive starts.
    let mut scored: Vec<(f64, usize)> =
        probes.iter().enumerate().filter_map(|(i, (_, f))| ls_ratio(&k, f).map(|r| (r, i))).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut starts: Vec<Vec<f64>> = scored.iter().take(4).map(|&(_, i)| probes[i].1.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.restarts {
        starts.push((0..n).map(|_| rng.gen::<f64>() + 0.05).collect());
    }
    let mut descent = f64::INFINITY;
    for s in &starts {
        if let Some(r) = descend(&k, s, budget.max_iters) {
            descent = descent.min(r);
        }
    }
    Ok(LsResult {
        estimate: certified.min(descent),
        certified_upper: certified,
        best_probe,
        sanity_floor: gap * var_ent_constant(pi_star),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipwalk_core::build_flip_chain;

    #[test]
    fn two_state_scan_oracle() {
        let chain = build_flip_chain(2).unwrap().model;
        let k = Kernel::from_model(&chain);
        // exhaustive scan of f = (a, 1-a)
        let mut scan = f64::INFINITY;
        for i in 1..100_000 {
            let a = i as f64 / 100_000.0;
            if let Some(r) = ls_ratio(&k, &[a, 1.0 - a]) {
                scan = scan.min(r);
            }
        }
        let mut vals = Vec::new();
        for seed in 0..4 {
            let b = LsBudget { restarts: 8, seed, ..Default::default() };
            vals.push(log_sobolev_constant(&chain, &b).unwrap().estimate);
        }
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-6);
            assert!((v - scan).abs() < 1e-4, "{v} vs scan {scan}");
        }
        assert!((vals[0] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn constant_excluded() {
        let k = Kernel::from_model(&build_flip_chain(3).unwrap().model);
        assert_eq!(ls_ratio(&k, &[1.0; 5]), None);
    }

    #[test]
    fn estimate_between_floor_and_upper() {
        for n in 3..=5 {
            let chain = build_flip_chain(n).unwrap().model;
            let r = log_sobolev_constant(&chain, &LsBudget { restarts: 8, ..Default::default() }).unwrap();
            assert!(r.estimate <= r.certified_upper);
            assert!(r.estimate >= r.sanity_floor - 1e-9, "n={n} {r:?}");
        }
    }

    #[test]
    fn cap_enforced() {
        let chain = build_flip_chain(5).unwrap().model;
        let b = LsBudget { cap: 10, ..Default::default() };
        assert!(matches!(log_sobolev_constant(&chain, &b), Err(AnalysisError::CapExceeded { .. })));
    }
}
