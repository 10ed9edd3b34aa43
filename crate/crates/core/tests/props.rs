use flipwalk_core::tree::CatalanTree;
use flipwalk_core::{random_catalan_tree, triangle_containment_probability, Rational};
use proptest::prelude::*;

proptest! {
    #[test]
    fn sampled_trees_round_trip(n in 1usize..60, seed in any::<u64>()) {
        let t = random_catalan_tree(n, seed);
        t.validate().unwrap();
        prop_assert_eq!(t.n(), n);
        let x = t.to_triangulation().unwrap();
        x.validate().unwrap();
        prop_assert_eq!(x.to_dual_tree(), t.clone());
        prop_assert_eq!(CatalanTree::from_parens(&t.to_parens()).unwrap(), t);
        prop_assert_eq!(x.encode().parse::<flipwalk_core::Triangulation>().unwrap(), x);
    }

    #[test]
    fn flips_on_sampled_triangulations(n in 2usize..40, seed in any::<u64>()) {
        let x = random_catalan_tree(n, seed).to_triangulation().unwrap();
        prop_assert_eq!(x.diagonals.len(), n - 1);
        prop_assert_eq!(x.triangles().len(), n);
        for d in &x.diagonals {
            let (y, d2) = x.flip(d).unwrap();
            y.validate().unwrap();
            let (z, d3) = y.flip(&d2).unwrap();
            prop_assert_eq!(&z, &x);
            prop_assert_eq!(&d3, d);
            prop_assert!(x.to_dual_tree().differs_by_one_rotation(&y.to_dual_tree()));
        }
    }

    #[test]
    fn containment_probability_in_unit_interval(n in 1usize..30, r in 1usize..30, s in 1usize..30) {
        match triangle_containment_probability(n, r, s) {
            Ok(p) => {
                prop_assert!(r + s <= n + 1);
                prop_assert!(p > Rational::from_integer(0.into()) && p <= Rational::from_integer(1.into()));
            }
            Err(_) => prop_assert!(r + s > n + 1),
        }
    }
}
