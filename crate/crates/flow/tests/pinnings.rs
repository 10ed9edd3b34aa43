use flipwalk_core::{build_flip_chain, catalan, enumerate_triangulations, Diagonal, Rational};
use flipwalk_core::tree::child_depth_of_diagonal;
use flipwalk_flow::pinning::{flipped_diagonal, pinnings_from};
use flipwalk_flow::{all_pinnings, eta_xy, pinning_depth_of_edge, validate_pinning, Pinning};

fn enumerated_measure(n: usize, eta: &Pinning) -> Rational {
    let states = enumerate_triangulations(n).unwrap();
    let hits = states.iter().filter(|x| eta.contains_state(x)).count();
    Rational::new(hits.into(), catalan(n))
}

#[test]
fn measure_matches_enumeration() {
    for n in 1..=8 {
        let states = enumerate_triangulations(n).unwrap();
        for eta in all_pinnings(n) {
            let hits = states.iter().filter(|x| eta.contains_state(x)).count();
            assert_eq!(eta.measure(), Rational::new(hits.into(), catalan(n)), "n={n} eta={eta}");
        }
    }
}

#[test]
fn conditional_matches_enumeration() {
    for n in 2..=7 {
        for eta in all_pinnings(n) {
            for j in 1..=n {
                let mut seq = eta.vertices.clone();
                seq.push(j);
                if !validate_pinning(&seq, n) {
                    assert!(eta.conditional(j).is_err());
                    continue;
                }
                let child = Pinning::new(n, &seq).unwrap();
                let want = enumerated_measure(n, &child) / enumerated_measure(n, &eta);
                assert_eq!(eta.conditional(j).unwrap(), want, "n={n} eta={eta} j={j}");
            }
        }
    }
}

#[test]
fn children_on_each_side_partition_the_parent() {
    for n in 2..=8 {
        for eta in all_pinnings(n) {
            let (l, r) = eta.frontier_sets();
            for side in [l, r] {
                if side.is_empty() {
                    continue;
                }
                let kids: Rational = side.iter().map(|&j| eta.extend(j).unwrap().measure()).sum();
                assert_eq!(kids, eta.measure(), "n={n} eta={eta}");
            }
        }
    }
}

#[test]
fn pinnings_from_block_sum_to_one_per_level_one() {
    for n in 2..=7 {
        let total: Rational = (1..=n)
            .flat_map(|i| pinnings_from(n, i))
            .filter(|p| p.len() == 1)
            .map(|p| p.measure())
            .sum();
        assert_eq!(total, Rational::from_integer(1.into()));
    }
}

#[test]
fn eta_of_edge_contains_both_ends() {
    for n in 2..=6 {
        let chain = build_flip_chain(n).unwrap();
        for x in 0..chain.len() {
            for &y in &chain.neighbors[x] {
                let eta = eta_xy(&chain, x, y).unwrap();
                assert!(eta.contains_state(&chain.states[x]));
                assert!(eta.contains_state(&chain.states[y]));
                assert_eq!(eta, eta_xy(&chain, y, x).unwrap(), "eta is symmetric in the edge");
                let (a, b) = flipped_diagonal(&chain, x, y).unwrap();
                let depth = pinning_depth_of_edge(&chain.states[x], a, b).unwrap();
                let oracle = child_depth_of_diagonal(&chain.states[x], &Diagonal { a, b }).unwrap();
                assert_eq!(depth, oracle);
                assert_eq!(depth, eta.len() + 1);
            }
        }
    }
}
