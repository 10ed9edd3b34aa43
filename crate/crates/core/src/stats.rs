use crate::catalan::catalan;
use crate::error::CoreError;
use crate::Rational;

/// Probability that a uniform triangulation of the `(n+2)`-gon contains a
/// fixed triangle with side lengths `r`, `s`, `n+2-r-s`:
/// `C_{r-1} C_{s-1} C_{n+1-r-s} / C_n`.
pub fn triangle_containment_probability(n: usize, r: usize, s: usize) -> Result<Rational, CoreError> {
    if r < 1 || s < 1 || r + s > n + 1 {
        return Err(CoreError::InvalidSideLengths { n, r, s });
    }
    Ok(Rational::new(catalan(r - 1) * catalan(s - 1) * catalan(n + 1 - r - s), catalan(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn examples() {
        assert_eq!(triangle_containment_probability(3, 1, 1).unwrap(), q(2, 5));
        assert_eq!(triangle_containment_probability(2, 1, 1).unwrap(), q(1, 2));
        assert!(triangle_containment_probability(3, 0, 1).is_err());
        assert!(triangle_containment_probability(3, 2, 3).is_err());
    }

    #[test]
    fn apexes_over_special_edge_sum_to_one() {
        for n in 1..=30 {
            let s: Rational = (1..=n)
                .map(|k| triangle_containment_probability(n, k, n + 1 - k).unwrap())
                .sum();
            assert!(s.is_one(), "n={n}");
        }
    }
}
