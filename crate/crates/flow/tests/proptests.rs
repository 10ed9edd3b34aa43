use std::collections::BTreeMap;

use flipwalk_core::Rational;
use flipwalk_flow::transport::{flow_to_transport, normalize_one_direction, EdgeFlow, TransportFlow, WeightedPath};
use proptest::prelude::*;

const SOURCES: [usize; 2] = [0, 1];
const SINKS: [usize; 2] = [8, 9];

/// Simple paths from a source through distinct middle states 2..=7 to a sink.
fn arb_paths() -> impl Strategy<Value = Vec<WeightedPath>> {
    let one = (0..2usize, proptest::sample::subsequence((2..8).collect::<Vec<_>>(), 0..5).prop_shuffle(), 0..2usize, 1..6i64)
        .prop_map(|(s, mid, t, w)| {
            let mut states = vec![SOURCES[s]];
            states.extend(mid);
            states.push(SINKS[t]);
            WeightedPath { states, weight: Rational::from_integer(w.into()) }
        });
    proptest::collection::vec(one, 1..7)
}

fn edge_flow(paths: &[WeightedPath]) -> EdgeFlow {
    let mut f = EdgeFlow::new(10);
    for p in paths {
        for (x, y) in p.arcs() {
            f.add(x, y, &p.weight);
        }
    }
    f
}

fn transport(paths: Vec<WeightedPath>) -> TransportFlow {
    let total: Rational = paths.iter().map(|p| &p.weight).sum();
    TransportFlow {
        sources: SOURCES.to_vec(),
        sinks: SINKS.to_vec(),
        paths: paths.into_iter().map(|p| WeightedPath { weight: p.weight / &total, states: p.states }).collect(),
        scale: total,
    }
}

fn loads(tf: &TransportFlow) -> BTreeMap<(usize, usize), Rational> {
    let mut m = BTreeMap::new();
    for p in &tf.paths {
        for a in p.arcs() {
            *m.entry(a).or_insert_with(|| Rational::from_integer(0.into())) += &p.weight;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conversion_reproduces_acyclic_part(paths in arb_paths()) {
        let flow = edge_flow(&paths);
        let conv = flow_to_transport(&flow, &SOURCES, &SINKS).unwrap();
        prop_assert!(conv.augmentations <= conv.positive_arcs + conv.virtual_arcs);
        prop_assert_eq!(conv.transport.total_weight(), Rational::from_integer(1.into()));
        // scaling the paths back up gives the decomposed flow
        let mut back = EdgeFlow::new(10);
        for p in &conv.transport.paths {
            let w = &p.weight * &conv.transport.scale;
            for (x, y) in p.arcs() {
                back.add(x, y, &w);
            }
        }
        prop_assert_eq!(&back.values, &conv.decomposed.values);
        for x in 0..10 {
            prop_assert_eq!(conv.decomposed.net_out(x), flow.net_out(x));
        }
    }

    #[test]
    fn normalization_preserves_marginals_and_lowers_loads(paths in arb_paths()) {
        let tf = transport(paths);
        let out = normalize_one_direction(&tf).unwrap();
        prop_assert!(out.is_one_directional());
        prop_assert_eq!(out.start_marginal(), tf.start_marginal());
        prop_assert_eq!(out.end_marginal(), tf.end_marginal());
        prop_assert_eq!(out.total_weight(), tf.total_weight());
        let before = loads(&tf);
        for (a, l) in loads(&out) {
            prop_assert!(before.get(&a).is_some_and(|b| &l <= b), "load on {:?} grew", a);
        }
        let (f0, f1) = (edge_flow(&tf.paths), edge_flow(&out.paths));
        for x in 0..10 {
            prop_assert_eq!(f1.net_out(x), f0.net_out(x));
        }
        for p in &out.paths {
            let mut seen = p.states.clone();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), p.states.len(), "path {:?} is not simple", &p.states);
        }
        prop_assert_eq!(normalize_one_direction(&out).unwrap(), out);
    }

    #[test]
    fn edge_flow_stays_antisymmetric(paths in arb_paths()) {
        let f = edge_flow(&paths);
        prop_assert!(f.is_antisymmetric());
        let total: Rational = SOURCES.iter().map(|&s| f.net_out(s)).sum();
        let weights: Rational = paths.iter().map(|p| &p.weight).sum();
        prop_assert_eq!(total, weights);
    }
}
