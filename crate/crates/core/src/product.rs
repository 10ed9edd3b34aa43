use num_traits::{One, Signed, Zero};

use crate::chain::MarkovChainModel;
use crate::error::CoreError;
use crate::Rational;

/// Decodes a product state index into component indices (last coordinate fastest).
pub fn product_coords(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut c = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        c[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    c
}

pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

/// Pick coordinate `i` with probability `w_i` and move it by `P_i`.
/// The stationary measure is the product measure.
pub fn product_chain(components: &[MarkovChainModel], weights: &[Rational]) -> Result<MarkovChainModel, CoreError> {
    if components.is_empty()
        || components.len() != weights.len()
        || weights.iter().any(|w| w.is_negative())
        || weights.iter().sum::<Rational>() != Rational::one()
    {
        return Err(CoreError::InvalidWeights);
    }
    let sizes: Vec<usize> = components.iter().map(|c| c.len()).collect();
    let total: usize = sizes.iter().product();
    let mut rows = Vec::with_capacity(total);
    let mut pi = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for s in 0..total {
        let c = product_coords(&sizes, s);
        let mut stay = Rational::zero();
        let mut row = Vec::new();
        for (i, comp) in components.iter().enumerate() {
            for (y, p) in &comp.rows[c[i]] {
                if *y == c[i] {
                    stay += &weights[i] * p;
                } else {
                    let mut d = c.clone();
                    d[i] = *y;
                    row.push((product_index(&sizes, &d), &weights[i] * p));
                }
            }
        }
        row.push((s, stay));
        rows.push(row);
        pi.push(c.iter().enumerate().map(|(i, &ci)| components[i].stationary[ci].clone()).product());
        labels.push(format!(
            "({})",
            c.iter().enumerate().map(|(i, &ci)| components[i].labels[ci].as_str()).collect::<Vec<_>>().join("|")
        ));
    }
    Ok(MarkovChainModel::new(labels, rows, pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_flip_chain;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn single_component_is_itself() {
        let c = build_flip_chain(3).unwrap().model;
        let p = product_chain(std::slice::from_ref(&c), &[Rational::one()]).unwrap();
        assert_eq!(p.rows, c.rows);
        assert_eq!(p.stationary, c.stationary);
    }

    #[test]
    fn two_two_state_chains() {
        let c = build_flip_chain(2).unwrap().model;
        let p = product_chain(&[c.clone(), c], &[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(p.len(), 4);
        p.validate().unwrap();
        assert_eq!(p.prob(0, 0), q(1, 2));
        assert_eq!(p.prob(0, 1), q(1, 4));
        assert_eq!(p.prob(0, 3), Rational::zero());
        assert!(p.stationary.iter().all(|x| *x == q(1, 4)));
    }

    #[test]
    fn bad_weights() {
        let c = build_flip_chain(2).unwrap().model;
        assert_eq!(product_chain(&[c.clone(), c.clone()], &[q(1, 2), q(1, 3)]), Err(CoreError::InvalidWeights));
        assert_eq!(product_chain(&[c.clone(), c], &[q(3, 2), q(-1, 2)]), Err(CoreError::InvalidWeights));
    }

    #[test]
    fn coords_round_trip() {
        let sizes = [3, 1, 4];
        for i in 0..12 {
            assert_eq!(product_index(&sizes, &product_coords(&sizes, i)), i);
        }
    }
}
