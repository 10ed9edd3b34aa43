//! Exact reversible chains and the flip walk.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::catalan::catalan;
use crate::error::CoreError;
use crate::triangulation::{enumerate_triangulations_capped, Triangulation};
use crate::{Rational, DEFAULT_ENUMERATION_CAP};

/// Finite chain with an exact sparse kernel and stationary measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainModel {
    pub labels: Vec<String>,
    /// Row `x`: `(y, P(x,y))` sorted by `y`, zero entries omitted.
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub stationary: Vec<Rational>,
    /// `min_x P(x,x)`.
    pub holding: Rational,
    /// Degree constant with `P(x,y) = 1/delta` on edges, when the chain has one.
    pub delta: Option<usize>,
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

impl MarkovChainModel {
    /// Sorts rows, drops zeros and records the holding probability. Does not validate.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<(usize, Rational)>>, stationary: Vec<Rational>) -> Self {
        let rows: Vec<Vec<(usize, Rational)>> = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, p)| !p.is_zero());
                r.sort_by_key(|(y, _)| *y);
                r
            })
            .collect();
        let holding = (0..rows.len())
            .map(|x| prob_in(&rows[x], x))
            .min()
            .unwrap_or_else(Rational::zero);
        MarkovChainModel { labels, rows, stationary, holding, delta: None }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn prob(&self, x: usize, y: usize) -> Rational {
        prob_in(&self.rows[x], y)
    }

    pub fn pi_star(&self) -> Rational {
        self.stationary.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    /// Off-diagonal entries `(x, y, P(x,y))` with `x != y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.iter().filter(move |(y, _)| *y != x).map(move |(y, p)| (x, *y, p)))
    }

    /// Rows sum to one, entries non-negative, stationary sums to one, detailed balance.
    pub fn validate(&self) -> Result<(), CoreError> {
        let bad = |m: String| Err(CoreError::InvalidChain(m));
        if self.stationary.len() != self.rows.len() || self.labels.len() != self.rows.len() {
            return bad("length mismatch".into());
        }
        let one = Rational::one();
        for (x, r) in self.rows.iter().enumerate() {
            let mut s = Rational::zero();
            for (y, p) in r {
                if *y >= self.rows.len() {
                    return bad(format!("column {y} out of range"));
                }
                if p.is_negative() {
                    return bad(format!("negative entry at ({x},{y})"));
                }
                s += p;
            }
            if s != one {
                return bad(format!("row {x} sums to {s}"));
            }
        }
        if self.stationary.iter().any(|p| p.is_negative()) {
            return bad("negative stationary mass".into());
        }
        if self.stationary.iter().sum::<Rational>() != one {
            return bad("stationary does not sum to one".into());
        }
        for (x, y, p) in self.edges() {
            if &self.stationary[x] * p != &self.stationary[y] * self.prob(y, x) {
                return bad(format!("detailed balance fails on ({x},{y})"));
            }
        }
        Ok(())
    }

    /// Checks `pi P = pi` exactly.
    pub fn is_stationary(&self) -> bool {
        let mut acc = vec![Rational::zero(); self.len()];
        for (x, r) in self.rows.iter().enumerate() {
            for (y, p) in r {
                acc[*y] += &self.stationary[x] * p;
            }
        }
        acc == self.stationary
    }

    /// JSON export: states, off-diagonal and diagonal entries as fractions, stationary measure.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| {
                r.iter().map(move |(y, p)| {
                    json!({"i": x, "j": y, "p_num": p.numer().to_string(), "p_den": p.denom().to_string()})
                })
            })
            .collect();
        let pi: Vec<String> = self.stationary.iter().map(|p| p.to_string()).collect();
        json!({"states": self.labels, "edges": edges, "pi": pi, "holding": self.holding.to_string()})
    }

    /// Dense `f64` copy of the kernel, row-major.
    pub fn dense_f64(&self) -> Vec<f64> {
        let n = self.len();
        let mut m = vec![0.0; n * n];
        for (x, r) in self.rows.iter().enumerate() {
            for (y, p) in r {
                m[x * n + y] = p.to_f64().unwrap_or(f64::NAN);
            }
        }
        m
    }
}

fn prob_in(row: &[(usize, Rational)], y: usize) -> Rational {
    row.binary_search_by_key(&y, |(c, _)| *c).map(|i| row[i].1.clone()).unwrap_or_else(|_| Rational::zero())
}

/// The lazy flip walk on triangulations of the `(n+2)`-gon.
#[derive(Debug, Clone)]
pub struct FlipChain {
    pub n: usize,
    pub states: Vec<Triangulation>,
    pub index: HashMap<Triangulation, usize>,
    /// Sorted flip neighbors of each state.
    pub neighbors: Vec<Vec<usize>>,
    pub model: MarkovChainModel,
}

impl FlipChain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `2(n-1)`, so that `P(x,y) = 1/delta` on flip edges.
    pub fn delta(&self) -> usize {
        2 * (self.n - 1).max(1)
    }

    pub fn index_of(&self, x: &Triangulation) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Root apex of each state, i.e. the oriented block index.
    pub fn root_apexes(&self) -> Vec<usize> {
        self.states.iter().map(|x| x.root_apex()).collect()
    }

    /// One representative per dihedral orbit with the orbit size, sorted by representative.
    pub fn orbit_representatives(&self) -> Vec<(usize, usize)> {
        let m = self.n + 2;
        let mut rep = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if rep[x] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            for rot in 0..m {
                for refl in [false, true] {
                    let y = self.index[&self.states[x].dihedral_image(rot, refl)];
                    if rep[y] == usize::MAX {
                        rep[y] = x;
                        orbit.push(y);
                    }
                }
            }
            out.push((x, orbit.len()));
        }
        out
    }

    /// JSON export of the kernel plus the canonical state encodings.
    pub fn to_json(&self, partitions: &[(&str, &crate::partition::Partition)]) -> Value {
        let mut v = self.model.to_json();
        v["n"] = json!(self.n);
        v["states"] = json!(self.states.iter().map(|x| x.encode()).collect::<Vec<_>>());
        let mut parts = serde_json::Map::new();
        for (name, p) in partitions {
            parts.insert(name.to_string(), p.to_json());
        }
        v["partitions"] = Value::Object(parts);
        v
    }
}

/// Lazy flip walk with the default cap.
pub fn build_flip_chain(n: usize) -> Result<FlipChain, CoreError> {
    build_flip_chain_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// Holding 1/2, each of the `n-1` flips with probability `1/(2(n-1))`, uniform `pi`.
pub fn build_flip_chain_capped(n: usize, cap: usize) -> Result<FlipChain, CoreError> {
    let states = enumerate_triangulations_capped(n, cap)?;
    let index: HashMap<Triangulation, usize> = states.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut neighbors = Vec::with_capacity(states.len());
    for x in &states {
        let mut nb: Vec<usize> = x.flips().into_iter().map(|(_, y)| index[&y]).collect();
        nb.sort_unstable();
        neighbors.push(nb);
    }
    let count = catalan(n);
    let pi = Rational::new(BigInt::one(), count);
    let (rows, delta) = if n == 1 {
        (vec![vec![(0, Rational::one())]], None)
    } else {
        let step = q(1, 2 * (n as i64 - 1));
        let rows = neighbors
            .iter()
            .enumerate()
            .map(|(x, nb)| {
                let mut r: Vec<(usize, Rational)> = nb.iter().map(|&y| (y, step.clone())).collect();
                r.push((x, q(1, 2)));
                r
            })
            .collect();
        (rows, Some(2 * (n - 1)))
    };
    let labels = states.iter().map(|x| x.encode()).collect();
    let mut model = MarkovChainModel::new(labels, rows, vec![pi; states.len()]);
    model.delta = delta;
    Ok(FlipChain { n, states, index, neighbors, model })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_kernel() {
        let c = build_flip_chain(2).unwrap();
        assert_eq!(c.len(), 2);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(c.model.prob(x, y), q(1, 2));
            }
        }
        assert_eq!(c.model.delta, Some(2));
        c.model.validate().unwrap();
    }

    #[test]
    fn n3_is_five_cycle() {
        let c = build_flip_chain(3).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.neighbors.iter().all(|nb| nb.len() == 2));
        for (x, y, p) in c.model.edges() {
            assert_eq!(p, &q(1, 4), "({x},{y})");
        }
        // connected 2-regular on 5 vertices is the 5-cycle
        let mut seen = vec![false; 5];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(&c.neighbors[v]);
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn one_state_chain() {
        let c = build_flip_chain(1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.model.prob(0, 0), Rational::one());
        c.model.validate().unwrap();
    }

    #[test]
    fn invalid_chain_detected() {
        let m = MarkovChainModel::new(
            vec!["a".into(), "b".into()],
            vec![vec![(0, q(1, 2)), (1, q(1, 2))], vec![(0, q(1, 3)), (1, q(2, 3))]],
            vec![q(1, 2), q(1, 2)],
        );
        assert!(m.validate().is_err());
    }

    #[test]
    fn orbits_partition_states() {
        for n in 2..=7 {
            let c = build_flip_chain(n).unwrap();
            let reps = c.orbit_representatives();
            assert_eq!(reps.iter().map(|r| r.1).sum::<usize>(), c.len());
        }
        // pentagon: all five triangulations are rotations of each other
        assert_eq!(build_flip_chain(3).unwrap().orbit_representatives(), vec![(0, 5)]);
    }
}
