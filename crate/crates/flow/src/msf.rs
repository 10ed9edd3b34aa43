//! Multi-way single-commodity flow problems and their serial/parallel compositions.

use std::collections::{BTreeMap, BTreeSet};

use flipwalk_core::Rational;
use num_traits::{Signed, Zero};

use crate::error::FlowError;
use crate::transport::EdgeFlow;

/// (S, T, sigma, delta) with sigma: S -> Q>=0, delta: T -> Q>=0 and equal totals.
#[derive(Debug, Clone, PartialEq)]
pub struct MsfProblem {
    pub sigma: BTreeMap<usize, Rational>,
    pub delta: BTreeMap<usize, Rational>,
}

impl MsfProblem {
    pub fn new(sigma: BTreeMap<usize, Rational>, delta: BTreeMap<usize, Rational>) -> Result<Self, FlowError> {
        if sigma.is_empty() || delta.is_empty() {
            return Err(FlowError::Malformed("empty source or sink set".into()));
        }
        if sigma.values().chain(delta.values()).any(|v| v.is_negative()) {
            return Err(FlowError::Malformed("negative surplus or demand".into()));
        }
        let (a, b): (Rational, Rational) = (sigma.values().sum(), delta.values().sum());
        if a != b {
            return Err(FlowError::Malformed(format!("total surplus {a} differs from total demand {b}")));
        }
        Ok(MsfProblem { sigma, delta })
    }

    /// Constant surplus on `s` and constant demand on `t`, the demand chosen to balance.
    pub fn uniform(s: &[usize], sigma: Rational, t: &[usize]) -> Result<Self, FlowError> {
        let total = &sigma * Rational::from_integer(s.len().into());
        let d = total / Rational::from_integer(t.len().into());
        Self::new(s.iter().map(|&x| (x, sigma.clone())).collect(), t.iter().map(|&x| (x, d.clone())).collect())
    }

    pub fn sources(&self) -> BTreeSet<usize> {
        self.sigma.keys().copied().collect()
    }

    pub fn sinks(&self) -> BTreeSet<usize> {
        self.delta.keys().copied().collect()
    }

    /// sigma pi(S) = sum_s sigma(s) pi(s).
    pub fn source_mass(&self, pi: &[Rational]) -> Rational {
        self.sigma.iter().map(|(&x, v)| v * &pi[x]).sum()
    }

    pub fn sink_mass(&self, pi: &[Rational]) -> Rational {
        self.delta.iter().map(|(&x, v)| v * &pi[x]).sum()
    }

    /// f(S), weighted by sigma pi.
    pub fn source_mean(&self, pi: &[Rational], f: &[Rational]) -> Rational {
        self.sigma.iter().map(|(&x, v)| v * &pi[x] * &f[x]).sum::<Rational>() / self.source_mass(pi)
    }

    /// f(T), weighted by delta pi.
    pub fn sink_mean(&self, pi: &[Rational], f: &[Rational]) -> Rational {
        self.delta.iter().map(|(&x, v)| v * &pi[x] * &f[x]).sum::<Rational>() / self.sink_mass(pi)
    }

    /// Net flow out of each vertex: sigma(v) on S \ T, -delta(v) on T \ S, sigma(v) - delta(v)
    /// on S n T, zero elsewhere.
    pub fn solved_by(&self, flow: &EdgeFlow) -> bool {
        (0..flow.n_states).all(|v| {
            let want = self.sigma.get(&v).cloned().unwrap_or_else(Rational::zero)
                - self.delta.get(&v).cloned().unwrap_or_else(Rational::zero);
            flow.net_out(v) == want
        }) && self.sigma.keys().chain(self.delta.keys()).all(|&v| v < flow.n_states)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Composition {
    Leaf(MsfProblem),
    /// Stages with T_k = S_{k+1} and delta_k = sigma_{k+1}.
    Serial(Vec<Composition>),
    /// Parts with disjoint source sets and disjoint sink sets.
    Parallel(Vec<Composition>),
}

impl Composition {
    /// The composite problem, after checking the interface conditions.
    pub fn problem(&self) -> Result<MsfProblem, FlowError> {
        match self {
            Composition::Leaf(p) => Ok(p.clone()),
            Composition::Serial(parts) => {
                let ps: Vec<MsfProblem> = parts.iter().map(|c| c.problem()).collect::<Result<_, _>>()?;
                let (first, last) = match (ps.first(), ps.last()) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(FlowError::Malformed("empty serial composition".into())),
                };
                for (k, w) in ps.windows(2).enumerate() {
                    if w[0].delta != w[1].sigma {
                        return Err(FlowError::Malformed(format!("serial stage {k}: demand does not match next surplus")));
                    }
                }
                MsfProblem::new(first.sigma.clone(), last.delta.clone())
            }
            Composition::Parallel(parts) => {
                if parts.is_empty() {
                    return Err(FlowError::Malformed("empty parallel composition".into()));
                }
                let mut sigma = BTreeMap::new();
                let mut delta = BTreeMap::new();
                for (k, c) in parts.iter().enumerate() {
                    let p = c.problem()?;
                    for (x, v) in p.sigma {
                        if sigma.insert(x, v).is_some() {
                            return Err(FlowError::Malformed(format!("parallel part {k}: source {x} repeated")));
                        }
                    }
                    for (x, v) in p.delta {
                        if delta.insert(x, v).is_some() {
                            return Err(FlowError::Malformed(format!("parallel part {k}: sink {x} repeated")));
                        }
                    }
                }
                MsfProblem::new(sigma, delta)
            }
        }
    }

    /// L: the length of the longest serial chain.
    pub fn longest_chain(&self) -> usize {
        match self {
            Composition::Leaf(_) => 1,
            Composition::Serial(parts) => parts.iter().map(|c| c.longest_chain()).sum(),
            Composition::Parallel(parts) => parts.iter().map(|c| c.longest_chain()).max().unwrap_or(0),
        }
    }

    pub fn leaves(&self) -> Vec<&MsfProblem> {
        match self {
            Composition::Leaf(p) => vec![p],
            Composition::Serial(parts) | Composition::Parallel(parts) => parts.iter().flat_map(|c| c.leaves()).collect(),
        }
    }
}

/// Both sides of sigma pi(S)(f(S)-f(T))^2 <= L sum_k sigma_k pi(S_k)(f(S_k)-f(T_k))^2.
#[derive(Debug, Clone, PartialEq)]
pub struct MsfCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub longest_chain: usize,
    pub holds: bool,
}

/// Exact check of the decomposition inequality. Every leaf must carry equal source and sink
/// mass under `pi`.
pub fn msf_decomposition_check(comp: &Composition, pi: &[Rational], f: &[Rational]) -> Result<MsfCheck, FlowError> {
    let whole = comp.problem()?;
    for (k, p) in comp.leaves().into_iter().enumerate() {
        if p.source_mass(pi) != p.sink_mass(pi) {
            return Err(FlowError::Malformed(format!("leaf {k}: source and sink mass differ")));
        }
    }
    let gap = |p: &MsfProblem| p.source_mean(pi, f) - p.sink_mean(pi, f);
    let g = gap(&whole);
    let lhs = whole.source_mass(pi) * &g * &g;
    let l = comp.longest_chain();
    let sum: Rational = comp
        .leaves()
        .into_iter()
        .map(|p| {
            let d = gap(p);
            p.source_mass(pi) * &d * &d
        })
        .sum();
    let rhs = Rational::from_integer(l.into()) * sum;
    Ok(MsfCheck { holds: lhs <= rhs, lhs, rhs, longest_chain: l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn unbalanced_problem_rejected() {
        let s = BTreeMap::from([(0, q(1, 1))]);
        let t = BTreeMap::from([(1, q(2, 1))]);
        assert!(MsfProblem::new(s, t).is_err());
    }

    #[test]
    fn serial_interface_checked() {
        let a = MsfProblem::uniform(&[0], q(2, 1), &[1, 2]).unwrap();
        let b = MsfProblem::uniform(&[1, 2], q(1, 1), &[3]).unwrap();
        let bad = MsfProblem::uniform(&[1], q(2, 1), &[3]).unwrap();
        let ok = Composition::Serial(vec![Composition::Leaf(a.clone()), Composition::Leaf(b)]);
        assert_eq!(ok.problem().unwrap().sinks(), BTreeSet::from([3]));
        assert_eq!(ok.longest_chain(), 2);
        assert!(Composition::Serial(vec![Composition::Leaf(a), Composition::Leaf(bad)]).problem().is_err());
    }

    #[test]
    fn parallel_mass_is_additive() {
        let pi = vec![q(1, 4); 4];
        let a = MsfProblem::uniform(&[0], q(1, 1), &[2]).unwrap();
        let b = MsfProblem::uniform(&[1], q(3, 1), &[3]).unwrap();
        let c = Composition::Parallel(vec![Composition::Leaf(a.clone()), Composition::Leaf(b.clone())]);
        let whole = c.problem().unwrap();
        assert_eq!(whole.source_mass(&pi), a.source_mass(&pi) + b.source_mass(&pi));
        assert_eq!(c.longest_chain(), 1);
        let overlapping = Composition::Parallel(vec![Composition::Leaf(a.clone()), Composition::Leaf(a)]);
        assert!(overlapping.problem().is_err());
    }

    #[test]
    fn single_leaf_is_equality() {
        let pi = vec![q(1, 3); 3];
        let p = MsfProblem::uniform(&[0], q(1, 1), &[1, 2]).unwrap();
        let f = vec![q(1, 1), q(-2, 1), q(5, 1)];
        let r = msf_decomposition_check(&Composition::Leaf(p), &pi, &f).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert!(r.holds);
    }

    #[test]
    fn solved_by_path_flow() {
        let p = MsfProblem::uniform(&[0], Rational::one(), &[2]).unwrap();
        let mut flow = EdgeFlow::new(3);
        flow.set(0, 1, Rational::one());
        flow.set(1, 2, Rational::one());
        assert!(p.solved_by(&flow));
        flow.set(1, 2, q(1, 2));
        assert!(!p.solved_by(&flow));
    }
}
