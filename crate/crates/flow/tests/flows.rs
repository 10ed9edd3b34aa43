use flipwalk_core::{build_flip_chain, Rational};
use flipwalk_flow::transport::{congestion, congestion_of_flow, flow_to_transport, normalize_one_direction};
use flipwalk_flow::{build_flow_function, FlowContext};
use num_traits::{One, ToPrimitive};

#[test]
fn every_pair_flow_converts_and_congestion_matches() {
    for n in 2..=6 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        let delta = Rational::from_integer(chain.delta().into());
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let ff = build_flow_function(&ctx, i, j).unwrap();
                let conv = flow_to_transport(&ff.flow, &ff.sources, &ff.sinks).unwrap();
                assert_eq!(conv.cancelled_cycles, 0, "n={n} i={i} j={j}");
                assert!(conv.augmentations <= conv.positive_arcs + conv.virtual_arcs);
                let tf = conv.transport;
                assert_eq!(tf.total_weight(), Rational::one());
                assert!(tf.marginals_match(&chain.model));
                let a = congestion(&tf, &chain.model).unwrap();
                let b = congestion_of_flow(&ff.flow, &chain.model, &ff.sources, &ff.sinks).unwrap();
                assert!(a.identity_holds());
                assert!(a.rho_max <= b.rho_max);
                assert!(b.rho_max <= delta, "n={n} i={i} j={j} rho={}", b.rho_max.to_f64().unwrap());
                let norm = normalize_one_direction(&tf).unwrap();
                assert!(norm.is_one_directional());
                assert_eq!(norm.total_weight(), Rational::one());
            }
        }
    }
}
