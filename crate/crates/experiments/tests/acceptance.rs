//! One PASS/FAIL line per acceptance criterion. Criteria listed in `KNOWN_FAILURES` are
//! expected to fail; the harness exits nonzero if any other criterion fails or if a known
//! failure starts passing.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use flipwalk_experiments::{
    run_depth_suite, run_enumerate, run_flow_suite, run_gap_sweep, run_lemma_suite, run_mixing_suite, ExperimentConfig,
    ResultRow, RowKind,
};

/// The relaxation-time slope over n in [4, 10] is about 2.40, above the window.
const KNOWN_FAILURES: &[usize] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rows_of<'a>(rows: &'a [ResultRow], id: &str) -> Vec<&'a ResultRow> {
    rows.iter().filter(|r| r.experiment == id).collect()
}

fn all_pass(rows: &[&ResultRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.pass)
}

fn lemma_rows<'a>(rows: &'a [ResultRow], lemma: &str) -> Vec<&'a ResultRow> {
    rows.iter().filter(|r| r.experiment == "lemma" && r.params["lemma"] == lemma).collect()
}

/// Every n in `ns` has a passing row for `lemma`.
fn covers(rows: &[ResultRow], lemma: &str, ns: impl IntoIterator<Item = usize>) -> Result<(), String> {
    let rs = lemma_rows(rows, lemma);
    for n in ns {
        match rs.iter().find(|r| r.u64("n") == n as u64) {
            Some(r) if r.pass => {}
            Some(r) => return Err(format!("{lemma} n={n}: {}", r.metrics["witness"])),
            None => return Err(format!("{lemma} n={n}: missing")),
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let rows = run_enumerate(&ExperimentConfig { n_max: Some(12), ..Default::default() }).unwrap();
    let dt = t.elapsed();
    let c12 = rows.iter().find(|r| r.u64("n") == 12).map(|r| r.u64("states"));
    outcome(
        rows.len() == 12 && rows.iter().all(|r| r.pass) && c12 == Some(208_012) && dt < Duration::from_secs(60),
        format!("n=1..12 counts equal C_n, C_12 = {c12:?}, {:.2}s", dt.as_secs_f64()),
    )
}

fn criterion_2(gap_rows: &[ResultRow]) -> Outcome {
    let small: Vec<&ResultRow> = rows_of(gap_rows, "gap").into_iter().filter(|r| r.u64("n") <= 3).collect();
    let trials_ok = small.iter().all(|r| r.u64("variational_trials") >= 10_000);
    let detail = small.iter().map(|r| format!("gap({}) = {}", r.u64("n"), r.f64("gap"))).collect::<Vec<_>>().join(", ");
    outcome(small.len() == 2 && all_pass(&small) && trials_ok, detail)
}

fn criterion_3(gap_rows: &[ResultRow], elapsed: Duration) -> Outcome {
    let window: Vec<&ResultRow> = rows_of(gap_rows, "gap").into_iter().filter(|r| (4..=10).contains(&r.u64("n"))).collect();
    let fit = rows_of(gap_rows, "gap_fit");
    let Some(fit) = fit.first() else { return outcome(false, "no fit row") };
    let lo = window.iter().map(|r| r.f64("n2_gap")).fold(f64::INFINITY, f64::min);
    let hi = window.iter().map(|r| r.f64("n2_gap")).fold(0.0, f64::max);
    let ok = window.len() == 7 && all_pass(&window) && fit.pass && elapsed < Duration::from_secs(1800);
    outcome(
        ok,
        format!(
            "n^2 gap in [{lo:.3}, {hi:.3}] (window [0.3, 60]); slope {:.4} (window [1.2, 2.2]); {:.1}s",
            fit.f64("slope"),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4(lemmas: &[ResultRow]) -> Outcome {
    let checks = || -> Result<String, String> {
        covers(lemmas, "catalanmono", [200])?;
        for l in ["pigood", "pimono", "matching", "perfmat"] {
            covers(lemmas, l, 2..=8)?;
        }
        for l in ["rholeq1", "rhomono", "rhodecomp", "rhoj1"] {
            covers(lemmas, l, 2..=7)?;
        }
        covers(lemmas, "maxcong", 2..=6)?;
        let failing: Vec<String> = lemmas
            .iter()
            .filter(|r| r.experiment == "lemma" && r.kind == RowKind::Assertion && !r.pass)
            .map(|r| format!("{} n={}", r.params["lemma"], r.u64("n")))
            .collect();
        if !failing.is_empty() {
            return Err(format!("failing: {failing:?}"));
        }
        let cases: u64 = lemmas.iter().filter(|r| r.kind == RowKind::Assertion).map(|r| r.u64("cases_checked")).sum();
        let findings = lemmas.iter().filter(|r| r.kind == RowKind::Finding && !r.pass).count();
        Ok(format!("{cases} exact cases, zero violations ({findings} finding rows recorded separately)"))
    };
    match checks() {
        Ok(d) => outcome(true, d),
        Err(e) => outcome(false, e),
    }
}

fn criterion_5(flows: &[ResultRow]) -> Outcome {
    let pairs = rows_of(flows, "flow_pair");
    let comps = rows_of(flows, "flow_complement");
    let expected: usize = (2..=6).map(|n| n * (n - 1)).sum();
    let trials = pairs.iter().chain(&comps).all(|r| r.u64("trials") == 500);
    let max_ratio = pairs.iter().map(|r| r.f64("rho_max") / r.f64("delta")).fold(0.0, f64::max);
    outcome(
        pairs.len() == expected && all_pass(&pairs) && all_pass(&comps) && trials,
        format!("{} pair flows and {} complement flows, max rho_max/Delta = {max_ratio:.4}", pairs.len(), comps.len()),
    )
}

fn criterion_6(lemmas: &[ResultRow]) -> Outcome {
    let res = (|| -> Result<(), String> {
        for l in ["total_variance", "total_entropy", "convexity_sqrt"] {
            covers(lemmas, l, 2..=6)?;
        }
        covers(lemmas, "var_ent_comparison", 3..=6)?;
        covers(lemmas, "product_inequality", [4])
    })();
    match res {
        Ok(()) => outcome(true, "n=2..6, both partitions, 100 f each; 8 random products x 500 f"),
        Err(e) => outcome(false, e),
    }
}

fn criterion_7() -> Outcome {
    let rows = run_mixing_suite(&ExperimentConfig::default()).unwrap();
    let taus: Vec<u64> = rows.iter().map(|r| r.u64("tau")).collect();
    outcome(rows.len() == 6 && rows.iter().all(|r| r.pass), format!("tau_mix(1/4) for n=2..7: {taus:?}, all below the spectral bound"))
}

fn criterion_8() -> Outcome {
    let rows = run_depth_suite(&ExperimentConfig::default()).unwrap();
    let contain = rows_of(&rows, "depth_containment");
    let samples: Vec<&ResultRow> =
        rows_of(&rows, "depth_sample").into_iter().filter(|r| [64, 256, 1024].contains(&r.u64("n"))).collect();
    let boundlu = rows_of(&rows, "depth_boundlu");
    let sizes_ok = samples.iter().all(|r| r.u64("samples") >= 10_000);
    let worst = boundlu.iter().map(|r| r.f64("max_ratio")).fold(0.0, f64::max);
    let depth = samples.iter().map(|r| format!("{:.3}", r.f64("depth_over_sqrt_n"))).collect::<Vec<_>>().join("/");
    outcome(
        contain.len() == 9 && all_pass(&contain) && samples.len() == 3 && all_pass(&samples) && sizes_ok && all_pass(&boundlu),
        format!("containment exact n<=10; depth/sqrt(n) = {depth}; boundlu max {worst:.4} <= 4"),
    )
}

fn run_all(dir: &Path) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_flipwalk"))
        .args(["all", "--n-max", "6", "--samples", "200", "--seed", "7", "--out"])
        .arg(dir)
        .env("FLIPWALK_THREADS", "1")
        .output()
        .expect("run flipwalk");
    (out.status.code(), out.stdout)
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn criterion_9() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ca, _) = run_all(a.path());
    let (cb, _) = run_all(b.path());
    let (fa, fb) = (read_dir(a.path()), read_dir(b.path()));
    let names: BTreeSet<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    outcome(
        ca == cb && matches!(ca, Some(0 | 1)) && !fa.is_empty() && fa == fb,
        format!("{} files byte-identical across two runs, exit codes {ca:?}/{cb:?}: {names:?}", fa.len()),
    )
}

fn main() {
    let t = Instant::now();
    let gap_rows = run_gap_sweep(&ExperimentConfig::default()).unwrap();
    let gap_time = t.elapsed();
    let lemmas = run_lemma_suite(&ExperimentConfig::default()).unwrap();
    let flows = run_flow_suite(&ExperimentConfig { n_max: Some(6), ..Default::default() }).unwrap();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "enumeration", criterion_1()),
        (2, "exact spectral values", criterion_2(&gap_rows)),
        (3, "gap scaling", criterion_3(&gap_rows, gap_time)),
        (4, "lemma suite", criterion_4(&lemmas)),
        (5, "flow contracts", criterion_5(&flows)),
        (6, "functional identities", criterion_6(&lemmas)),
        (7, "mixing", criterion_7()),
        (8, "catalan statistics", criterion_8()),
        (9, "determinism", criterion_9()),
    ];
    let mut unexpected = Vec::new();
    for (k, name, o) in &results {
        let known = KNOWN_FAILURES.contains(k);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        println!("{tag} criterion {k} [{name}]: {}", o.detail);
        if o.pass == known {
            unexpected.push(*k);
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("{passed}/{} criteria pass; {:.1}s", results.len(), t.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
