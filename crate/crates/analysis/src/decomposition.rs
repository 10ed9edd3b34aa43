//! Laws of total variance and entropy, and the comparison inequalities built on them.

use flipwalk_core::partition::Partition;
use flipwalk_core::{MarkovChainModel, Rational};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::functionals::{dirichlet, entropy, entropy_of_square, expectation, variance};
use crate::kernel::Kernel;
use crate::logsobolev::var_ent_constant;
use crate::spectral::{dense_spectrum, second_eigen};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    /// Functional of the block averages under `pibar`.
    pub proj_term: f64,
    /// `E_{t ~ pibar}` of the functional under `pi_t`.
    pub restr_term: f64,
    /// The functional under `pi`.
    pub total: f64,
}

fn check_len(expected: usize, got: usize) -> Result<(), AnalysisError> {
    if expected != got {
        return Err(AnalysisError::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn block_data<'a>(pi: &'a [f64], part: &'a Partition, f: &'a [f64]) -> impl Iterator<Item = (f64, Vec<f64>, Vec<f64>)> + 'a {
    part.blocks.iter().map(move |members| {
        let mass: f64 = members.iter().map(|&x| pi[x]).sum();
        let local_pi: Vec<f64> = members.iter().map(|&x| pi[x] / mass).collect();
        let local_f: Vec<f64> = members.iter().map(|&x| f[x]).collect();
        (mass, local_pi, local_f)
    })
}

/// `Var_pi f = Var_pibar F + E_{t ~ pibar} Var_{pi_t} f`.
pub fn total_variance_decomposition(pi: &[f64], part: &Partition, f: &[f64]) -> Result<Decomposition, AnalysisError> {
    check_len(pi.len(), f.len())?;
    let (mut masses, mut avgs, mut restr) = (Vec::new(), Vec::new(), 0.0);
    for (mass, lp, lf) in block_data(pi, part, f) {
        restr += mass * variance(&lp, &lf);
        avgs.push(expectation(&lp, &lf));
        masses.push(mass);
    }
    Ok(Decomposition { proj_term: variance(&masses, &avgs), restr_term: restr, total: variance(pi, f) })
}

/// `Ent_pi g = Ent_pibar G + E_{t ~ pibar} Ent_{pi_t} g`.
pub fn total_entropy_decomposition(pi: &[f64], part: &Partition, g: &[f64]) -> Result<Decomposition, AnalysisError> {
    check_len(pi.len(), g.len())?;
    let total = entropy(pi, g)?;
    let (mut masses, mut avgs, mut restr) = (Vec::new(), Vec::new(), 0.0);
    for (mass, lp, lg) in block_data(pi, part, g) {
        restr += mass * entropy(&lp, &lg)?;
        avgs.push(expectation(&lp, &lg));
        masses.push(mass);
    }
    Ok(Decomposition { proj_term: entropy(&masses, &avgs)?, restr_term: restr, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beta {
    Sqrt,
    Identity,
}

impl Beta {
    pub fn from_id(id: &str) -> Result<Self, AnalysisError> {
        match id {
            "sqrt" => Ok(Beta::Sqrt),
            "identity" | "id" => Ok(Beta::Identity),
            _ => Err(AnalysisError::InvalidBeta(id.to_string())),
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Beta::Sqrt => v.sqrt(),
            Beta::Identity => v,
        }
    }
}

/// `Var_pibar beta(G) <= Var_pi beta(g)` for `g >= 0`, `G(t) = E_{pi_t} g`.
pub fn check_convexity_lemma(pi: &[f64], part: &Partition, g: &[f64], beta: Beta) -> Result<bool, AnalysisError> {
    check_len(pi.len(), g.len())?;
    if let Some(x) = g.iter().position(|&v| v < 0.0) {
        return Err(AnalysisError::NegativeInput { state: x, value: g[x] });
    }
    let (mut masses, mut bg) = (Vec::new(), Vec::new());
    for (mass, lp, lg) in block_data(pi, part, g) {
        masses.push(mass);
        bg.push(beta.apply(expectation(&lp, &lg)));
    }
    let lhs = variance(&masses, &bg);
    let rhs = variance(pi, &g.iter().map(|&v| beta.apply(v)).collect::<Vec<_>>());
    Ok(lhs <= rhs + 1e-12)
}

/// `(1 - 2 pi*)/log(1/pi* - 1) Ent(f^2) <= Var f`; needs `pi* < 1/2`.
pub fn check_var_ent_comparison(pi: &[f64], f: &[f64]) -> Result<bool, AnalysisError> {
    check_len(pi.len(), f.len())?;
    let pi_star = pi.iter().copied().fold(f64::INFINITY, f64::min);
    if pi_star >= 0.5 - 1e-15 {
        return Err(AnalysisError::OutOfDomain(format!("pi* = {pi_star} is not below 1/2")));
    }
    let c = var_ent_constant(pi_star);
    Ok(c * entropy_of_square(pi, f) <= variance(pi, f) + 1e-12)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductCheck {
    pub trials: usize,
    pub poincare_constant: f64,
    pub log_sobolev_constant: f64,
    pub poincare_violations: usize,
    pub log_sobolev_violations: usize,
    /// `E(f)/Var(f)` at the product's second eigenfunction.
    pub eigen_ratio: f64,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.poincare_violations == 0 && self.log_sobolev_violations == 0
    }
}

/// Component constants: `lambda_i` is the spectral gap and `beta_i` the lower bound
/// `lambda_i (1 - 2 pi*_i)/log(1/pi*_i - 1)`; both are valid inequality constants.
pub fn component_constants(c: &MarkovChainModel) -> Result<(f64, f64), AnalysisError> {
    let k = Kernel::from_model(c);
    let gap = 1.0 - second_eigen(&k)?.lambda2;
    let pi_star = c.pi_star().to_f64().unwrap_or(0.0);
    Ok((gap, gap * var_ent_constant(pi_star)))
}

/// Random-`f` check of both product inequalities on `product`.
pub fn check_product_inequality(
    components: &[MarkovChainModel],
    weights: &[Rational],
    product: &MarkovChainModel,
    trials: usize,
    seed: u64,
) -> Result<ProductCheck, AnalysisError> {
    let mut lam = f64::INFINITY;
    let mut bet = f64::INFINITY;
    for (c, w) in components.iter().zip(weights) {
        let w = w.to_f64().unwrap_or(0.0);
        let (l, b) = component_constants(c)?;
        lam = lam.min(w * l);
        bet = bet.min(w * b);
    }
    let k = Kernel::from_model(product);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pv, mut lv) = (0, 0);
    for _ in 0..trials {
        let f: Vec<f64> = (0..k.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let e = dirichlet(&k, &f);
        if lam * variance(&k.pi, &f) > e + 1e-10 {
            pv += 1;
        }
        if bet * entropy_of_square(&k.pi, &f) > e + 1e-10 {
            lv += 1;
        }
    }
    let (vals, vecs) = dense_spectrum(&k);
    let f: Vec<f64> = vecs.column(1).iter().zip(&k.pi).map(|(v, p)| v / p.sqrt()).collect();
    let eigen_ratio = dirichlet(&k, &f) / variance(&k.pi, &f);
    debug_assert!((eigen_ratio - (1.0 - vals[1])).abs() < 1e-8);
    Ok(ProductCheck {
        trials,
        poincare_constant: lam,
        log_sobolev_constant: bet,
        poincare_violations: pv,
        log_sobolev_violations: lv,
        eigen_ratio,
    })
}
