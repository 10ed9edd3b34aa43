//! Worst-start total-variation mixing times.

use flipwalk_core::{MarkovChainModel, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::AnalysisError;
use crate::kernel::Kernel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingResult {
    pub tau: usize,
    /// Start achieving `tau`.
    pub worst_start: usize,
    /// TV to stationarity never increased along any start's trajectory.
    pub tv_monotone: bool,
    pub exact: bool,
}

/// Exact worst-start `tau_mix(eps)` over every state.
pub fn mixing_time(chain: &MarkovChainModel, eps: &Rational, cap: usize) -> Result<MixingResult, AnalysisError> {
    if chain.len() > cap {
        return Err(AnalysisError::CapExceeded { size: chain.len(), cap });
    }
    let starts: Vec<usize> = (0..chain.len()).collect();
    mixing_time_from(chain, &starts, eps, 1_000_000)
}

/// Exact `max_{x in starts} min{t : TV(delta_x P^t, pi) <= eps}`.
///
/// With `D` the lcm of kernel denominators, `M = D P` is integral and
/// `delta_x P^t = v_t / D^t` with integer `v_t`. Writing `pi = c / Q`,
/// `TV <= p/q` iff `q sum |Q v_t - c D^t| <= 2 p Q D^t`.
pub fn mixing_time_from(
    chain: &MarkovChainModel,
    starts: &[usize],
    eps: &Rational,
    max_t: usize,
) -> Result<MixingResult, AnalysisError> {
    if eps.is_negative() {
        return Err(AnalysisError::OutOfDomain("negative epsilon".into()));
    }
    let n = chain.len();
    let mut d = BigInt::one();
    for row in &chain.rows {
        for (_, p) in row {
            d = d.lcm(p.denom());
        }
    }
    let mut qd = BigInt::one();
    for p in &chain.stationary {
        qd = qd.lcm(p.denom());
    }
    let c: Vec<BigInt> = chain.stationary.iter().map(|p| p.numer() * (&qd / p.denom())).collect();
    let m: Vec<Vec<(usize, BigInt)>> = chain
        .rows
        .iter()
        .map(|r| r.iter().map(|(y, p)| (*y, p.numer() * (&d / p.denom()))).collect())
        .collect();
    let (p, q) = (eps.numer().clone(), eps.denom().clone());

    let mut tau = 0;
    let mut worst = starts.first().copied().unwrap_or(0);
    let mut monotone = true;
    for &x in starts {
        let mut v = vec![BigInt::zero(); n];
        v[x] = BigInt::one();
        let mut dt = BigInt::one();
        let mut prev: Option<BigInt> = None;
        let mut t = 0;
        loop {
            let s: BigInt = v.iter().zip(&c).map(|(vi, ci)| (&qd * vi - ci * &dt).abs()).sum();
            if let Some(ps) = &prev {
                // TV_t <= TV_{t-1}  iff  s_t <= D s_{t-1}
                if s > ps * &d {
                    monotone = false;
                }
            }
            if &q * &s <= BigInt::from(2) * &p * &qd * &dt {
                break;
            }
            if t >= max_t {
                return Err(AnalysisError::NoConvergence(format!("no mixing from {x} within {max_t} steps")));
            }
            let mut w = vec![BigInt::zero(); n];
            for (xi, vi) in v.iter().enumerate() {
                if !vi.is_zero() {
                    for (y, mij) in &m[xi] {
                        w[*y] += vi * mij;
                    }
                }
            }
            v = w;
            dt *= &d;
            prev = Some(s);
            t += 1;
        }
        if t > tau {
            tau = t;
            worst = x;
        }
    }
    Ok(MixingResult { tau, worst_start: worst, tv_monotone: monotone, exact: true })
}

/// Floating-point version with a conservative rounding allowance of
/// `t (deg + 2) 2^-53` added to every TV value.
pub fn mixing_time_float(k: &Kernel, starts: &[usize], eps: f64, max_t: usize) -> Result<MixingResult, AnalysisError> {
    let n = k.len();
    let u = f64::EPSILON / 2.0;
    let deg = k.max_row_len() as f64;
    let mut tau = 0;
    let mut worst = starts.first().copied().unwrap_or(0);
    let mut monotone = true;
    for &x in starts {
        let mut mu = vec![0.0; n];
        mu[x] = 1.0;
        let mut next = vec![0.0; n];
        let mut prev = f64::INFINITY;
        let mut t = 0;
        loop {
            let tv = 0.5 * mu.iter().zip(&k.pi).map(|(a, b)| (a - b).abs()).sum::<f64>();
            let err = (t as f64 + 1.0) * (deg + 2.0) * u * n as f64;
            if tv > prev + 2.0 * err {
                monotone = false;
            }
            if tv + err <= eps {
                break;
            }
            if t >= max_t {
                return Err(AnalysisError::NoConvergence(format!("no mixing from {x} within {max_t} steps")));
            }
            k.step_measure(&mu, &mut next);
            std::mem::swap(&mut mu, &mut next);
            prev = tv;
            t += 1;
        }
        if t > tau {
            tau = t;
            worst = x;
        }
    }
    Ok(MixingResult { tau, worst_start: worst, tv_monotone: monotone, exact: false })
}

/// `(1/gap) ln(1 / sqrt(eps pi*))`.
pub fn spectral_mixing_bound(gap: f64, eps: f64, pi_star: f64) -> f64 {
    (1.0 / gap) * (1.0 / (eps * pi_star).sqrt()).ln()
}

/// Constant `C` implied by `tau = C / (alpha LS) (ln ln(1/pi*) + ln(1/eps))`.
pub fn ls_mixing_constant(tau: usize, ls: f64, alpha: f64, eps: f64, pi_star: f64) -> f64 {
    let shape = (1.0 / pi_star).ln().ln() + (1.0 / eps).ln();
    tau as f64 * ls * alpha / shape
}

/// `f64` value of `pi*`.
pub fn pi_star_f64(chain: &MarkovChainModel) -> f64 {
    chain.pi_star().to_f64().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipwalk_core::build_flip_chain;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn two_states_mix_in_one_step() {
        let c = build_flip_chain(2).unwrap().model;
        let r = mixing_time(&c, &q(1, 4), 100).unwrap();
        assert_eq!(r.tau, 1);
        assert!(r.tv_monotone);
        assert_eq!(mixing_time(&c, &q(1, 1), 100).unwrap().tau, 0);
    }

    #[test]
    fn pentagon_by_hand() {
        // 5-cycle, holding 1/2: from a point mass, TV after t steps computed by direct iteration.
        let c = build_flip_chain(3).unwrap().model;
        let mut mu = vec![q(0, 1); 5];
        mu[0] = q(1, 1);
        let mut t = 0;
        loop {
            let tv: Rational = mu.iter().map(|m| (m - q(1, 5)).abs()).sum::<Rational>() / q(2, 1);
            if tv <= q(1, 4) {
                break;
            }
            let mut nx = vec![q(0, 1); 5];
            for x in 0..5 {
                for y in 0..5 {
                    nx[y] += &mu[x] * c.prob(x, y);
                }
            }
            mu = nx;
            t += 1;
        }
        assert_eq!(mixing_time(&c, &q(1, 4), 100).unwrap().tau, t);
    }

    #[test]
    fn float_matches_exact() {
        for n in 2..=6 {
            let c = build_flip_chain(n).unwrap().model;
            let exact = mixing_time(&c, &q(1, 4), 10_000).unwrap();
            let k = Kernel::from_model(&c);
            let starts: Vec<usize> = (0..c.len()).collect();
            let fl = mixing_time_float(&k, &starts, 0.25, 10_000).unwrap();
            assert!(fl.tau == exact.tau || fl.tau == exact.tau + 1, "n={n}");
        }
    }

    #[test]
    fn cap_enforced() {
        let c = build_flip_chain(5).unwrap().model;
        assert!(mixing_time(&c, &q(1, 4), 10).is_err());
    }
}
