use flipwalk_core::{build_flip_chain, Rational};
use flipwalk_flow::transport::{
    congestion, flow_to_transport, mean_difference_identity, normalize_one_direction, verify_boundary_transport,
    verify_transport_inequality,
};
use flipwalk_flow::{aggregate_flow, build_flow_function, FlowContext};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_f(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn pair_transport_inequality_on_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [4, 5] {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        for (i, j) in [(1, n), (2, 3), (n, 1)] {
            let ff = build_flow_function(&ctx, i, j).unwrap();
            let tf = flow_to_transport(&ff.flow, &ff.sources, &ff.sinks).unwrap().transport;
            let rep = congestion(&tf, &chain.model).unwrap();
            assert!(rep.within_union);
            for _ in 0..500 {
                let f = random_f(&mut rng, chain.len());
                let c = verify_transport_inequality(&rep, &chain.model, &f, &ff.sources, &ff.sinks);
                assert!(c.holds, "n={n} ({i},{j}): {} > {}", c.lhs, c.rhs);
                let b = verify_boundary_transport(&rep, &chain.model, &f, &ff.sources, &ff.sinks).unwrap();
                assert!(b.corollary.holds);
                assert!(b.mean_form.is_none());
                // the refined form is never weaker than the plain one
                assert!(b.corollary.rhs <= c.rhs * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn complement_transport_and_mean_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 5;
    let chain = build_flip_chain(n).unwrap();
    let ctx = FlowContext::new(&chain);
    for s_blocks in [vec![1], vec![2, 4], vec![1, 2, 3]] {
        let t_blocks: Vec<usize> = (1..=n).filter(|b| !s_blocks.contains(b)).collect();
        let agg = aggregate_flow(&ctx, &s_blocks, &t_blocks).unwrap();
        assert_eq!(agg.sources.len() + agg.sinks.len(), chain.len());
        let conv = flow_to_transport(&agg.flow, &agg.sources, &agg.sinks).unwrap();
        let tf = normalize_one_direction(&conv.transport).unwrap();
        assert!(tf.marginals_match(&chain.model));
        let rep = congestion(&tf, &chain.model).unwrap();
        assert!(rep.identity_holds());
        for _ in 0..200 {
            let f = random_f(&mut rng, chain.len());
            let b = verify_boundary_transport(&rep, &chain.model, &f, &agg.sources, &agg.sinks).unwrap();
            assert!(b.corollary.holds, "S={s_blocks:?}");
            let m = b.mean_form.expect("T is the complement of S");
            assert!(m.holds, "S={s_blocks:?}: {} > {}", m.lhs, m.rhs);
        }
    }
}

#[test]
fn mean_difference_identity_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let chain = build_flip_chain(4).unwrap();
    for _ in 0..50 {
        let f: Vec<Rational> = (0..chain.len()).map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into())).collect();
        let k = rng.gen_range(1..chain.len());
        let s: Vec<usize> = (0..k).collect();
        assert!(mean_difference_identity(&chain.model, &f, &s));
    }
}

#[test]
fn max_congestion_of_pair_flows_within_degree() {
    for n in 2..=6 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        let delta = chain.delta() as f64;
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let ff = build_flow_function(&ctx, i, j).unwrap();
                let tf = flow_to_transport(&ff.flow, &ff.sources, &ff.sinks).unwrap().transport;
                let rep = congestion(&tf, &chain.model).unwrap();
                assert!(rep.rho_max.to_f64().unwrap() <= delta);
                assert!(rep.rho_bar <= rep.rho_max);
            }
        }
    }
}
