use flipwalk_core::build_flip_chain;
use flipwalk_flow::lemmas::*;
use flipwalk_flow::FlowContext;

fn assert_passed(r: &LemmaReport) {
    assert!(r.passed(), "{} n={} failed: {:?}", r.lemma_id, r.n, r.violations);
    assert!(r.cases_checked > 0, "{} n={} checked nothing", r.lemma_id, r.n);
}

#[test]
fn catalan_monotonicity() {
    assert_passed(&check_catalanmono(40));
}

#[test]
fn pinning_lemmas_hold_up_to_seven() {
    for n in 3..=7 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        assert_passed(&check_pigood(n).unwrap());
        assert_passed(&check_pimono(n).unwrap());
        assert_passed(&check_matching(&ctx));
        assert_passed(&check_frontier_uniqueness(&ctx));
    }
}

#[test]
fn boundary_inequality_is_tight_for_indicators() {
    for n in 3..=7 {
        let chain = build_flip_chain(n).unwrap();
        let pm = check_perfmat(&chain, 10, 11).unwrap();
        assert_passed(&pm.report);
        assert!(pm.adjacent_pairs > 0);
        assert_eq!(pm.indicator_strict, 0, "n={n}");
        assert_eq!(pm.indicator_tight, pm.adjacent_pairs, "n={n}");
    }
}

#[test]
fn block_pair_inequalities() {
    for n in 2..=6 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        assert_passed(&check_ijji(&ctx, 8, 5).unwrap());
        assert_passed(&check_iij(&ctx, 8, 6).unwrap());
    }
}

#[test]
fn coefficient_lemmas() {
    // the monotonicity lemmas need two frontier vertices on one side, which first happens at n = 4
    for n in 4..=7 {
        let tables = all_tables(n).unwrap();
        let reps = check_phi_lemmas(n, &tables).unwrap();
        let ids: Vec<&str> = reps.iter().map(|r| r.lemma_id.as_str()).collect();
        assert_eq!(ids, ["rholeq1", "rhomono", "rhodecomp", "rhoj1", "phi_zero", "phi_bounded"]);
        reps.iter().for_each(assert_passed);
    }
}

#[test]
fn level_sums() {
    for n in 2..=5 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        let pl = check_per_level(&ctx, &all_tables(n).unwrap());
        assert_passed(&pl.literal);
        assert_passed(&pl.relaxed);
    }
    // the unit bound on level sums first fails at n = 6
    let chain = build_flip_chain(6).unwrap();
    let ctx = FlowContext::new(&chain);
    let pl = check_per_level(&ctx, &all_tables(6).unwrap());
    assert_eq!(pl.literal.violation_count, 12);
    assert_eq!(pl.max_sum, "35/33");
    assert_eq!(pl.literal.violations[0], "(1,4) state 107 depth 3: 35/33");
    assert_passed(&pl.relaxed);
    assert!(pl.max_ratio < 2.0);
}

#[test]
fn aggregate_and_pair_flows() {
    for n in 2..=6 {
        let chain = build_flip_chain(n).unwrap();
        let ctx = FlowContext::new(&chain);
        let pairs = all_pair_flows(&ctx, &all_tables(n).unwrap()).unwrap();
        assert_eq!(pairs.len(), n * (n - 1));
        assert_passed(&check_maxcong(&ctx, &pairs, 3));
        assert_passed(&check_l1dirweak(&ctx, &pairs, 4, 9).unwrap());
    }
}

#[test]
fn reports_are_reproducible() {
    let chain = build_flip_chain(5).unwrap();
    let ctx = FlowContext::new(&chain);
    assert_eq!(check_ijji(&ctx, 3, 1).unwrap(), check_ijji(&ctx, 3, 1).unwrap());
}
