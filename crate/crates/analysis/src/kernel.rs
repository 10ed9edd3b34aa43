//! Floating-point CSR copy of an exact chain.

use flipwalk_core::MarkovChainModel;
use num_traits::ToPrimitive;

use crate::error::AnalysisError;

#[derive(Debug, Clone)]
pub struct Kernel {
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
    /// Entries of `D^{1/2} P D^{-1/2}`, symmetrized from the exact edge masses.
    pub sym: Vec<f64>,
    pub pi: Vec<f64>,
}

impl Kernel {
    pub fn from_model(m: &MarkovChainModel) -> Self {
        let mut row_ptr = vec![0];
        let mut col = Vec::new();
        let mut val = Vec::new();
        let mut sym = Vec::new();
        let pi: Vec<f64> = m.stationary.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect();
        for (x, row) in m.rows.iter().enumerate() {
            for (y, p) in row {
                col.push(*y);
                val.push(p.to_f64().unwrap_or(f64::NAN));
                let q = (&m.stationary[x] * p + &m.stationary[*y] * m.prob(*y, x)) / num_bigint::BigInt::from(2);
                sym.push(q.to_f64().unwrap_or(f64::NAN) / (pi[x] * pi[*y]).sqrt());
            }
            row_ptr.push(col.len());
        }
        Kernel { row_ptr, col, val, sym, pi }
    }

    /// Kernel from a dense row-major matrix and its stationary vector.
    pub fn from_dense(p: &[f64], pi: &[f64]) -> Self {
        let n = pi.len();
        let mut row_ptr = vec![0];
        let mut col = Vec::new();
        let mut val = Vec::new();
        let mut sym = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let v = p[x * n + y];
                if v != 0.0 {
                    col.push(y);
                    val.push(v);
                    sym.push(0.5 * (pi[x] * v + pi[y] * p[y * n + x]) / (pi[x] * pi[y]).sqrt());
                }
            }
            row_ptr.push(col.len());
        }
        Kernel { row_ptr, col, val, sym, pi: pi.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn row(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[x]..self.row_ptr[x + 1]).map(move |e| (self.col[e], self.val[e]))
    }

    /// `(Pf)(x) = sum_y P(x,y) f(y)`.
    pub fn apply(&self, f: &[f64], out: &mut [f64]) {
        for x in 0..self.len() {
            out[x] = self.row(x).map(|(y, p)| p * f[y]).sum();
        }
    }

    /// `(mu P)(y) = sum_x mu(x) P(x,y)`.
    pub fn step_measure(&self, mu: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for x in 0..self.len() {
            if mu[x] != 0.0 {
                for (y, p) in self.row(x) {
                    out[y] += mu[x] * p;
                }
            }
        }
    }

    /// `out = S v` with `S = D^{1/2} P D^{-1/2}`.
    pub fn apply_sym(&self, v: &[f64], out: &mut [f64]) {
        for x in 0..self.len() {
            let mut s = 0.0;
            for e in self.row_ptr[x]..self.row_ptr[x + 1] {
                s += self.sym[e] * v[self.col[e]];
            }
            out[x] = s;
        }
    }

    /// Largest row degree, counting the diagonal.
    pub fn max_row_len(&self) -> usize {
        (0..self.len()).map(|x| self.row_ptr[x + 1] - self.row_ptr[x]).max().unwrap_or(0)
    }

    /// Relative detailed-balance check.
    pub fn check_reversible(&self, tol: f64) -> Result<(), AnalysisError> {
        for x in 0..self.len() {
            for (y, p) in self.row(x) {
                let back = self.row(y).find(|(z, _)| *z == x).map_or(0.0, |(_, q)| q);
                let (a, b) = (self.pi[x] * p, self.pi[y] * back);
                if (a - b).abs() > tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
                    return Err(AnalysisError::NonReversible(format!("edge ({x},{y})")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipwalk_core::build_flip_chain;

    #[test]
    fn sym_matches_p_for_uniform_pi() {
        let c = build_flip_chain(4).unwrap();
        let k = Kernel::from_model(&c.model);
        for (a, b) in k.val.iter().zip(&k.sym) {
            assert!((a - b).abs() < 1e-15);
        }
        k.check_reversible(1e-12).unwrap();
    }

    #[test]
    fn non_reversible_dense() {
        // 3-cycle drift: uniform stationary, not reversible
        let p = [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
        let k = Kernel::from_dense(&p, &[1.0 / 3.0; 3]);
        assert!(k.check_reversible(1e-12).is_err());
    }
}
