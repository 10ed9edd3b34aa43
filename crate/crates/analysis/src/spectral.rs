//! Second eigenvalue of a reversible kernel.

use std::collections::BTreeMap;

use flipwalk_core::MarkovChainModel;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::functionals::{dirichlet, variance};
use crate::kernel::Kernel;

/// State counts above this use Lanczos instead of a dense eigensolve.
pub const DENSE_LIMIT: usize = 4000;

/// Second-largest eigenvalue and a matching eigenfunction `f = D^{-1/2} v`.
#[derive(Debug, Clone)]
pub struct SecondEigen {
    pub lambda2: f64,
    pub function: Vec<f64>,
}

fn sqrt_pi_unit(k: &Kernel) -> Vec<f64> {
    let u: Vec<f64> = k.pi.iter().map(|p| p.sqrt()).collect();
    let nrm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.into_iter().map(|v| v / nrm).collect()
}

fn to_function(k: &Kernel, v: &[f64]) -> Vec<f64> {
    v.iter().zip(&k.pi).map(|(x, p)| x / p.sqrt()).collect()
}

/// Full spectrum of `S = D^{1/2} P D^{-1/2}`, descending.
pub fn dense_spectrum(k: &Kernel) -> (Vec<f64>, DMatrix<f64>) {
    let n = k.len();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for e in k.row_ptr[x]..k.row_ptr[x + 1] {
            s[(x, k.col[e])] = k.sym[e];
        }
    }
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

fn dense_second(k: &Kernel) -> SecondEigen {
    let (vals, vecs) = dense_spectrum(k);
    let v: Vec<f64> = vecs.column(1).iter().copied().collect();
    SecondEigen { lambda2: vals[1], function: to_function(k, &v) }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Lanczos on `S` restricted to the complement of `sqrt(pi)`, with full reorthogonalization.
pub fn lanczos_second(k: &Kernel, tol: f64, max_steps: usize, seed: u64) -> Result<SecondEigen, AnalysisError> {
    let n = k.len();
    let u = sqrt_pi_unit(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let c = dot(&u, &q);
    axpy(-c, &u, &mut q);
    let nq = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|v| *v /= nq);

    let steps = max_steps.min(n - 1);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    for j in 0..steps {
        k.apply_sym(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            let c = dot(&u, &w);
            axpy(-c, &u, &mut w);
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let bnorm = dot(&w, &w).sqrt();
        let m = alpha.len();
        let check = m.is_multiple_of(8) || bnorm < 1e-12 || j + 1 == steps;
        if check {
            let t = DMatrix::from_fn(m, m, |r, c| {
                if r == c {
                    alpha[r]
                } else if r + 1 == c {
                    beta[r]
                } else if c + 1 == r {
                    beta[c]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let (imax, theta) =
                eig.eigenvalues.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).expect("m >= 1");
            let s = eig.eigenvectors.column(imax);
            let resid = bnorm * s[m - 1].abs();
            if resid < tol || bnorm < 1e-12 || j + 1 == steps {
                let mut v = vec![0.0; n];
                for (i, b) in basis.iter().enumerate() {
                    axpy(s[i], b, &mut v);
                }
                best = Some((theta, v));
                if resid < tol || bnorm < 1e-12 {
                    break;
                }
                if j + 1 == steps && resid >= tol && steps < n - 1 {
                    return Err(AnalysisError::NoConvergence(format!("residual {resid:e} after {steps} steps")));
                }
            }
        }
        beta.push(bnorm);
        basis.push(w.iter().map(|v| v / bnorm).collect());
    }
    let (lambda2, v) = best.ok_or_else(|| AnalysisError::NoConvergence("no Ritz value".into()))?;
    Ok(SecondEigen { lambda2, function: to_function(k, &v) })
}

/// Deflated power iteration on `(I + S)/2`; slow, kept as an independent check.
pub fn power_second(k: &Kernel, tol: f64, max_iter: usize, seed: u64) -> Result<f64, AnalysisError> {
    let n = k.len();
    let u = sqrt_pi_unit(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    for _ in 0..max_iter {
        let c = dot(&u, &v);
        axpy(-c, &u, &mut v);
        let nv = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= nv);
        k.apply_sym(&v, &mut w);
        let mu = 0.5 * (1.0 + dot(&v, &w));
        for i in 0..n {
            w[i] = 0.5 * (v[i] + w[i]);
        }
        std::mem::swap(&mut v, &mut w);
        if (mu - prev).abs() < tol {
            return Ok(2.0 * mu - 1.0);
        }
        prev = mu;
    }
    Err(AnalysisError::NoConvergence(format!("power iteration after {max_iter} steps")))
}

/// `lambda_2` with its eigenfunction; dense below [`DENSE_LIMIT`] states.
pub fn second_eigen(k: &Kernel) -> Result<SecondEigen, AnalysisError> {
    if k.len() < 2 {
        return Err(AnalysisError::TooFewStates);
    }
    if k.len() <= DENSE_LIMIT {
        Ok(dense_second(k))
    } else {
        lanczos_second(k, 1e-10, 2000, 0x5eed)
    }
}

/// `1 - lambda_2(P)` for a reversible chain.
pub fn spectral_gap(chain: &MarkovChainModel) -> Result<f64, AnalysisError> {
    let k = Kernel::from_model(chain);
    k.check_reversible(1e-12)?;
    Ok(1.0 - second_eigen(&k)?.lambda2)
}

/// `E(f) / Var(f)`, or `None` for constant `f`.
pub fn variational_ratio(k: &Kernel, f: &[f64]) -> Option<f64> {
    let v = variance(&k.pi, f);
    (v > 0.0).then(|| dirichlet(k, f) / v)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub gap: f64,
    pub relaxation_time: f64,
    pub ls_constant_lower: f64,
    pub ls_constant_estimate: f64,
    pub ls_certified_upper: f64,
    /// Keyed by the decimal form of epsilon.
    pub mixing_time: BTreeMap<String, usize>,
    pub pi_star: String,
    /// Whether `ls_constant_estimate <= gap/2 + 1e-9` (reported, not asserted).
    pub ls_below_half_gap: bool,
}

/// Gap, log-Sobolev estimate, and exact mixing times for each epsilon.
pub fn spectral_report(
    chain: &MarkovChainModel,
    eps: &[flipwalk_core::Rational],
    ls_budget: &crate::logsobolev::LsBudget,
    starts: Option<&[usize]>,
) -> Result<SpectralReport, AnalysisError> {
    let gap = spectral_gap(chain)?;
    let ls = crate::logsobolev::log_sobolev_constant(chain, ls_budget)?;
    let mut mixing = BTreeMap::new();
    for e in eps {
        let r = match starts {
            Some(s) => crate::mixing::mixing_time_from(chain, s, e, 100_000)?,
            None => crate::mixing::mixing_time(chain, e, 5000)?,
        };
        mixing.insert(e.to_string(), r.tau);
    }
    Ok(SpectralReport {
        gap,
        relaxation_time: 1.0 / gap,
        ls_constant_lower: ls.sanity_floor,
        ls_constant_estimate: ls.estimate,
        ls_certified_upper: ls.certified_upper,
        mixing_time: mixing,
        pi_star: chain.pi_star().to_string(),
        ls_below_half_gap: ls.estimate <= gap / 2.0 + 1e-9,
    })
}

/// Dense eigenvector helper for tests: all eigenvalues of `S`, descending.
pub fn eigenvalues(chain: &MarkovChainModel) -> Vec<f64> {
    dense_spectrum(&Kernel::from_model(chain)).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipwalk_core::{build_flip_chain, Rational};
    use num_traits::One;

    #[test]
    fn known_gaps() {
        assert!((spectral_gap(&build_flip_chain(2).unwrap().model).unwrap() - 1.0).abs() < 1e-14);
        let g3 = (1.0 - (2.0 * std::f64::consts::PI / 5.0).cos()) / 2.0;
        assert!((spectral_gap(&build_flip_chain(3).unwrap().model).unwrap() - g3).abs() < 1e-12);
    }

    #[test]
    fn identity_kernel_has_zero_gap() {
        let q = Rational::new(1.into(), 3.into());
        let m = MarkovChainModel::new(
            vec!["a".into(), "b".into(), "c".into()],
            (0..3).map(|x| vec![(x, Rational::one())]).collect(),
            vec![q.clone(), q.clone(), q],
        );
        assert!(spectral_gap(&m).unwrap().abs() < 1e-14);
    }

    #[test]
    fn single_state_is_an_error() {
        assert_eq!(spectral_gap(&build_flip_chain(1).unwrap().model), Err(AnalysisError::TooFewStates));
    }

    #[test]
    fn lanczos_and_power_agree_with_dense() {
        for n in 3..=7 {
            let k = Kernel::from_model(&build_flip_chain(n).unwrap().model);
            let d = dense_second(&k).lambda2;
            let l = lanczos_second(&k, 1e-11, 2000, 1).unwrap().lambda2;
            assert!((d - l).abs() < 1e-9, "n={n} dense {d} lanczos {l}");
            if n <= 5 {
                let p = power_second(&k, 1e-14, 1_000_000, 2).unwrap();
                assert!((d - p).abs() < 1e-6, "n={n} dense {d} power {p}");
            }
        }
    }

    #[test]
    fn eigenfunction_attains_gap() {
        let k = Kernel::from_model(&build_flip_chain(5).unwrap().model);
        let e = dense_second(&k);
        let r = variational_ratio(&k, &e.function).unwrap();
        assert!((r - (1.0 - e.lambda2)).abs() < 1e-10);
        let l = lanczos_second(&k, 1e-11, 2000, 3).unwrap();
        let r = variational_ratio(&k, &l.function).unwrap();
        assert!((r - (1.0 - e.lambda2)).abs() < 1e-9);
    }
}
