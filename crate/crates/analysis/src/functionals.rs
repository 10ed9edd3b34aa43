//! Expectation, variance, entropy and Dirichlet form.

use std::ops::Deref;

use crate::error::AnalysisError;
use crate::kernel::Kernel;

/// Finite real values indexed by state.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionOnStates(Vec<f64>);

impl FunctionOnStates {
    pub fn new(values: Vec<f64>) -> Result<Self, AnalysisError> {
        if let Some(x) = values.iter().position(|v| !v.is_finite()) {
            return Err(AnalysisError::OutOfDomain(format!("non-finite value at state {x}")));
        }
        Ok(FunctionOnStates(values))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FunctionOnStates {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn expectation(pi: &[f64], f: &[f64]) -> f64 {
    pi.iter().zip(f).map(|(p, v)| p * v).sum()
}

pub fn variance(pi: &[f64], f: &[f64]) -> f64 {
    let m = expectation(pi, f);
    pi.iter().zip(f).map(|(p, v)| p * (v - m) * (v - m)).sum()
}

/// `(1+d) ln(1+d) - d`, accurate near zero.
fn phi(d: f64) -> f64 {
    if d <= -1.0 {
        // 0 log 0 = 0
        -d
    } else if d.abs() < 1e-4 {
        d * d * (0.5 - d * (1.0 / 6.0 - d / 12.0))
    } else {
        (1.0 + d) * d.ln_1p() - d
    }
}

/// `E[f log f] - E f log E f`, with `0 log 0 = 0`.
///
/// Evaluated as `sum pi m phi(f/m - 1)`, a sum of non-negative terms.
pub fn entropy(pi: &[f64], f: &[f64]) -> Result<f64, AnalysisError> {
    if let Some(x) = f.iter().position(|&v| v < 0.0) {
        return Err(AnalysisError::NegativeInput { state: x, value: f[x] });
    }
    let m = expectation(pi, f);
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(pi.iter().zip(f).map(|(p, v)| p * m * phi(v / m - 1.0)).sum())
}

/// `1/2 sum_{x,y} pi(x) P(x,y) (f(x) - f(y))^2`.
pub fn dirichlet(k: &Kernel, f: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in 0..k.len() {
        for (y, p) in k.row(x) {
            let d = f[x] - f[y];
            s += k.pi[x] * p * d * d;
        }
    }
    0.5 * s
}

/// `Ent(f^2)`.
pub fn entropy_of_square(pi: &[f64], f: &[f64]) -> f64 {
    let g: Vec<f64> = f.iter().map(|v| v * v).collect();
    entropy(pi, &g).expect("squares are non-negative")
}
