//! Partitions of the state space, projection chains and restriction chains.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::catalan::catalan;
use crate::chain::{FlipChain, MarkovChainModel};
use crate::error::CoreError;
use crate::geometry::central_triangle;
use crate::triangulation::Triangle;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKey {
    Index(usize),
    Triangle(Triangle),
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKey::Index(i) => write!(f, "{i}"),
            BlockKey::Triangle(t) => write!(f, "{t}"),
        }
    }
}

/// Blocks are addressed by position; `keys[b]` names block `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub keys: Vec<BlockKey>,
    pub block_of: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub block_measure: Vec<Rational>,
}

impl Partition {
    /// Groups states by key; blocks are ordered by key.
    pub fn from_keys(keys_of_states: &[BlockKey], pi: &[Rational]) -> Self {
        let mut keys: Vec<BlockKey> = keys_of_states.to_vec();
        keys.sort_unstable();
        keys.dedup();
        let mut blocks = vec![Vec::new(); keys.len()];
        let mut measure = vec![Rational::zero(); keys.len()];
        let mut block_of = Vec::with_capacity(keys_of_states.len());
        for (x, k) in keys_of_states.iter().enumerate() {
            let b = keys.binary_search(k).expect("key present");
            blocks[b].push(x);
            measure[b] += &pi[x];
            block_of.push(b);
        }
        Partition { keys, block_of, blocks, block_measure: measure }
    }

    pub fn singletons(chain: &MarkovChainModel) -> Self {
        let keys: Vec<BlockKey> = (0..chain.len()).map(BlockKey::Index).collect();
        Self::from_keys(&keys, &chain.stationary)
    }

    pub fn single_block(chain: &MarkovChainModel) -> Self {
        Self::from_keys(&vec![BlockKey::Index(0); chain.len()], &chain.stationary)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn position(&self, key: &BlockKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    /// Disjoint, exhaustive, and block measures agree with `pi`.
    pub fn validate(&self, chain: &MarkovChainModel) -> Result<(), CoreError> {
        let bad = |m: &str| Err(CoreError::InvalidChain(format!("partition: {m}")));
        if self.block_of.len() != chain.len() {
            return bad("size mismatch");
        }
        let mut seen = vec![false; chain.len()];
        for (b, members) in self.blocks.iter().enumerate() {
            let mut s = Rational::zero();
            for &x in members {
                if seen[x] || self.block_of[x] != b {
                    return bad("overlapping blocks");
                }
                seen[x] = true;
                s += &chain.stationary[x];
            }
            if s != self.block_measure[b] {
                return bad("block measure mismatch");
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("not exhaustive");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "keys": self.keys.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "block_of": self.block_of,
            "measure": self.block_measure.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Blocks `Omega_t` indexed by the central triangle.
pub fn central_partition(chain: &FlipChain) -> Partition {
    let keys: Vec<BlockKey> = chain.states.iter().map(|x| BlockKey::Triangle(central_triangle(x))).collect();
    Partition::from_keys(&keys, &chain.model.stationary)
}

/// Blocks `Omega_i`, `i = 1..=n`, of states containing the triangle `(0, i, n+1)`.
pub fn oriented_partition(chain: &FlipChain) -> Partition {
    let keys: Vec<BlockKey> = chain.states.iter().map(|x| BlockKey::Index(x.root_apex())).collect();
    Partition::from_keys(&keys, &chain.model.stationary)
}

/// `C_{i-1} C_{n-i} / C_n`.
pub fn oriented_block_measure(n: usize, i: usize) -> Rational {
    Rational::new(catalan(i - 1) * catalan(n - i), catalan(n))
}

/// `Pbar(t,t') = sum_{x in t, y in t'} pi(x)P(x,y) / pibar(t)`, with self loops completing rows.
pub fn projection_chain(chain: &MarkovChainModel, partition: &Partition) -> MarkovChainModel {
    let k = partition.len();
    let mut flow: Vec<std::collections::BTreeMap<usize, Rational>> = vec![Default::default(); k];
    for (x, y, p) in chain.edges() {
        let (bx, by) = (partition.block_of[x], partition.block_of[y]);
        if bx != by {
            *flow[bx].entry(by).or_insert_with(Rational::zero) += &chain.stationary[x] * p;
        }
    }
    let rows = flow
        .into_iter()
        .enumerate()
        .map(|(b, m)| {
            let mut r: Vec<(usize, Rational)> = m.into_iter().map(|(c, f)| (c, f / &partition.block_measure[b])).collect();
            let off: Rational = r.iter().map(|(_, p)| p).sum();
            r.push((b, Rational::one() - off));
            r
        })
        .collect();
    let labels = partition.keys.iter().map(|k| k.to_string()).collect();
    MarkovChainModel::new(labels, rows, partition.block_measure.clone())
}

/// Restriction chain on one block together with its renormalization data.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub model: MarkovChainModel,
    /// Global indices of the block's states, in order.
    pub members: Vec<usize>,
    /// Per state `1 / sum_{z in block} P(x,z)`.
    pub factors: Vec<Rational>,
}

impl Restriction {
    /// The common value of [`Restriction::factors`], if there is one.
    pub fn constant_factor(&self) -> Option<Rational> {
        let first = self.factors.first()?;
        self.factors.iter().all(|f| f == first).then(|| first.clone())
    }
}

/// `P_t(x,y) = P(x,y) / sum_{z in Omega_t} P(x,z)`, `pi_t = pi / pi(Omega_t)`.
pub fn restriction_chain(chain: &MarkovChainModel, partition: &Partition, t: usize) -> Result<Restriction, CoreError> {
    let members = partition.blocks.get(t).filter(|b| !b.is_empty()).ok_or(CoreError::EmptyBlock(t))?.clone();
    let mut local = vec![usize::MAX; chain.len()];
    for (i, &x) in members.iter().enumerate() {
        local[x] = i;
    }
    let mass = &partition.block_measure[t];
    let mut rows = Vec::with_capacity(members.len());
    let mut factors = Vec::with_capacity(members.len());
    for &x in &members {
        let inside: Vec<(usize, Rational)> =
            chain.rows[x].iter().filter(|(y, _)| local[*y] != usize::MAX).map(|(y, p)| (local[*y], p.clone())).collect();
        let s: Rational = inside.iter().map(|(_, p)| p).sum();
        let f = Rational::one() / s;
        rows.push(inside.into_iter().map(|(y, p)| (y, p * &f)).collect());
        factors.push(f);
    }
    let labels = members.iter().map(|&x| chain.labels[x].clone()).collect();
    let pi = members.iter().map(|&x| &chain.stationary[x] / mass).collect();
    Ok(Restriction { model: MarkovChainModel::new(labels, rows, pi), members, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_flip_chain;
    use crate::triangulation::Triangulation;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn oriented_n3() {
        let c = build_flip_chain(3).unwrap();
        let p = oriented_partition(&c);
        assert_eq!(p.keys, vec![BlockKey::Index(1), BlockKey::Index(2), BlockKey::Index(3)]);
        assert_eq!(p.block_measure, vec![q(2, 5), q(1, 5), q(2, 5)]);
        p.validate(&c.model).unwrap();
        let proj = projection_chain(&c.model, &p);
        proj.validate().unwrap();
        assert!(proj.is_stationary());
    }

    #[test]
    fn oriented_measures_closed_form() {
        for n in 1..=9 {
            let c = build_flip_chain(n).unwrap();
            let p = oriented_partition(&c);
            for (b, key) in p.keys.iter().enumerate() {
                let BlockKey::Index(i) = key else { panic!() };
                assert_eq!(p.block_measure[b], oriented_block_measure(n, *i));
            }
        }
    }

    #[test]
    fn central_n3_blocks() {
        let c = build_flip_chain(3).unwrap();
        let p = central_partition(&c);
        p.validate(&c.model).unwrap();
        assert_eq!(p.block_measure.iter().sum::<Rational>(), Rational::one());
        let x = Triangulation::new(3, [(0, 2), (2, 4)]).unwrap();
        let b = p.block_of[c.index_of(&x).unwrap()];
        assert_eq!(p.blocks[b].len(), 1);
        let r = restriction_chain(&c.model, &p, b).unwrap();
        assert_eq!(r.model.len(), 1);
        assert_eq!(r.model.prob(0, 0), Rational::one());
    }

    #[test]
    fn trivial_partitions() {
        let c = build_flip_chain(4).unwrap();
        let one = Partition::single_block(&c.model);
        let proj = projection_chain(&c.model, &one);
        assert_eq!(proj.len(), 1);
        assert_eq!(proj.prob(0, 0), Rational::one());
        let r = restriction_chain(&c.model, &one, 0).unwrap();
        assert_eq!(r.model.rows, c.model.rows);
        assert_eq!(r.constant_factor(), Some(Rational::one()));

        let single = Partition::singletons(&c.model);
        let proj = projection_chain(&c.model, &single);
        assert_eq!(proj.rows, c.model.rows);
        assert!(restriction_chain(&c.model, &single, 999).is_err());
    }
}
