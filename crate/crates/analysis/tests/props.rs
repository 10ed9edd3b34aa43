use flipwalk_analysis::functionals::{dirichlet, entropy, variance};
use flipwalk_analysis::kernel::Kernel;
use flipwalk_analysis::spectral::second_eigen;
use flipwalk_analysis::{total_entropy_decomposition, total_variance_decomposition};
use flipwalk_core::partition::{BlockKey, Partition};
use flipwalk_core::Rational;
use proptest::prelude::*;

/// Random reversible chain from symmetric edge weights: P(x,y) = w(x,y)/(2 W), holding the rest.
fn chain_from_weights(n: usize, w: &[u32]) -> (Kernel, Vec<f64>) {
    let mut p = vec![0.0; n * n];
    let mut idx = 0;
    let total: f64 = w.iter().map(|&v| v as f64).sum::<f64>().max(1.0);
    for x in 0..n {
        for y in x + 1..n {
            let v = w[idx] as f64 / (2.0 * total);
            p[x * n + y] = v;
            p[y * n + x] = v;
            idx += 1;
        }
    }
    for x in 0..n {
        let s: f64 = (0..n).filter(|&y| y != x).map(|y| p[x * n + y]).sum();
        p[x * n + x] = 1.0 - s;
    }
    let pi = vec![1.0 / n as f64; n];
    (Kernel::from_dense(&p, &pi), pi)
}

proptest! {
    #[test]
    fn entropy_and_variance_nonnegative(f in prop::collection::vec(0.0f64..10.0, 2..12)) {
        let pi = vec![1.0 / f.len() as f64; f.len()];
        prop_assert!(entropy(&pi, &f).unwrap() >= 0.0);
        prop_assert!(variance(&pi, &f) >= 0.0);
    }

    #[test]
    fn poincare_inequality_on_random_chains(
        w in prop::collection::vec(0u32..5, 10),
        f in prop::collection::vec(-5.0f64..5.0, 5),
    ) {
        let (k, pi) = chain_from_weights(5, &w);
        let gap = 1.0 - second_eigen(&k).unwrap().lambda2;
        prop_assert!(dirichlet(&k, &f) >= gap * variance(&pi, &f) - 1e-10);
    }

    #[test]
    fn decomposition_laws_on_random_partitions(
        assign in prop::collection::vec(0usize..3, 6),
        f in prop::collection::vec(0.0f64..5.0, 6),
        masses in prop::collection::vec(1u32..10, 6),
    ) {
        let tot: u32 = masses.iter().sum();
        let exact: Vec<Rational> = masses.iter().map(|&m| Rational::new(m.into(), tot.into())).collect();
        let pi: Vec<f64> = masses.iter().map(|&m| m as f64 / tot as f64).collect();
        let keys: Vec<BlockKey> = assign.iter().map(|&a| BlockKey::Index(a)).collect();
        let part = Partition::from_keys(&keys, &exact);
        let d = total_variance_decomposition(&pi, &part, &f).unwrap();
        prop_assert!((d.proj_term + d.restr_term - d.total).abs() < 1e-12);
        let e = total_entropy_decomposition(&pi, &part, &f).unwrap();
        prop_assert!((e.proj_term + e.restr_term - e.total).abs() < 1e-12);
    }
}
