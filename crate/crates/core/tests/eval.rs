use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::process::Command;

use circular_filter::distributions::{CircularDensity, WrappedNormal};
use circular_filter::eval::{
    angular_distance, angular_rmse, linspace, median, numeric_kld, numeric_kld_ln, numeric_l2, numeric_l2_n,
    propagation_cell, run_filtering_experiment, run_multiplication_experiment, summarize, FilterKind,
    ProductMethod, PropagationSampler, ScenarioConfig, SystemKind,
};
use circular_filter::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn angular_distance_examples() {
    assert!((angular_distance(0.0, PI) - PI).abs() < 1e-15);
    assert!((angular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        let x = rng.random_range(-20.0..20.0);
        assert_eq!(angular_distance(x, x), 0.0);
        let y = rng.random_range(-20.0..20.0);
        let d = angular_distance(x, y);
        assert!((0.0..=PI).contains(&d));
        assert_eq!(d, angular_distance(y, x));
    }
}

#[test]
fn angular_rmse_examples() {
    let xs = [0.3, 1.0, 5.0];
    assert_eq!(angular_rmse(&xs, &xs).unwrap(), 0.0);
    let shifted: Vec<f64> = xs.iter().map(|x| x + PI / 2.0).collect();
    assert!((angular_rmse(&shifted, &xs).unwrap() - PI / 2.0).abs() < 1e-12);
    let rmse = angular_rmse(&[0.0, PI], &[0.0, 0.0]).unwrap();
    assert!((rmse - PI / 2f64.sqrt()).abs() < 1e-15);
    assert!(matches!(
        angular_rmse(&[0.0], &[0.0, 1.0]),
        Err(Error::LengthMismatch(1, 2))
    ));
    assert!(angular_rmse(&[], &[]).is_err());
}

#[test]
fn kld_examples() {
    let a = WrappedNormal::new(1.0, 0.8).unwrap();
    assert!(numeric_kld(|x| a.pdf(x), |x| a.pdf(x)).unwrap() <= 1e-10);

    let f = WrappedNormal::new(0.0, 1.0).unwrap();
    let g = WrappedNormal::new(0.5, 1.0).unwrap();
    let coarse = numeric_kld_ln(|x| f.ln_pdf(x), |x| g.ln_pdf(x), 1 << 14).unwrap();
    let fine = numeric_kld_ln(|x| f.ln_pdf(x), |x| g.ln_pdf(x), 1 << 16).unwrap();
    assert!(coarse > 0.0 && (coarse - fine).abs() <= 1e-6);
    let reverse = numeric_kld(|x| g.pdf(x), |x| f.pdf(x)).unwrap();
    let narrow = WrappedNormal::new(0.5, 0.4).unwrap();
    let ab = numeric_kld(|x| f.pdf(x), |x| narrow.pdf(x)).unwrap();
    let ba = numeric_kld(|x| narrow.pdf(x), |x| f.pdf(x)).unwrap();
    assert!((ab - ba).abs() > 1e-3, "{ab} vs {ba}");
    assert!(
        (reverse - coarse).abs() < 1e-9,
        "equal spreads make the KLD symmetric"
    );

    assert!(matches!(
        numeric_kld(|_| 0.0, |x| f.pdf(x)),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        numeric_kld(|x| f.pdf(x), |_| -1.0),
        Err(Error::Domain(_))
    ));
}

#[test]
fn l2_examples() {
    let f = WrappedNormal::new(0.0, 1.0).unwrap();
    let g = WrappedNormal::new(2.0, 0.3).unwrap();
    assert!(numeric_l2(|x| f.pdf(x), |x| f.pdf(x)).unwrap() <= 1e-12);
    let fg = numeric_l2(|x| f.pdf(x), |x| g.pdf(x)).unwrap();
    assert_eq!(fg, numeric_l2(|x| g.pdf(x), |x| f.pdf(x)).unwrap());
    let fine = numeric_l2_n(|x| f.pdf(x), |x| g.pdf(x), 1 << 16).unwrap();
    assert!((fg - fine).abs() <= 1e-8);
}

#[test]
fn median_of_even_and_odd_sets() {
    assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    assert!(median(&[]).is_nan());
}

#[test]
fn propagation_examples() {
    let exact = propagation_cell(0.0, 1.0, PropagationSampler::Wd5).unwrap();
    assert!(exact.m1_error <= 1e-9 && exact.m2_error <= 1e-9);
    let wd3 = propagation_cell(0.7, 1.0, PropagationSampler::Wd3).unwrap();
    let wd5 = propagation_cell(0.7, 1.0, PropagationSampler::Wd5).unwrap();
    assert!(wd5.m1_error < wd3.m1_error);
    for c in linspace(0.1, 0.9, 5) {
        let row = propagation_cell(c, 1.0, PropagationSampler::Wd3).unwrap();
        assert!(row.m2_error > 1e-6, "c {c}: {}", row.m2_error);
    }
    assert_eq!(linspace(0.0, 0.9, 10).len(), 10);
    assert!((linspace(0.0, 0.9, 10)[9] - 0.9).abs() < 1e-15);
}

#[test]
fn multiplication_examples() {
    let rows = run_multiplication_experiment(0.0, &[0.1, 0.4, 1.0], &[0.2, 0.5, 1.0], 32).unwrap();
    assert_eq!(rows.len(), 3 * 3 * 32 * 2);
    // mean KLD gap between the two methods per (σ1, σ2) cell
    let mut gap: BTreeMap<(u64, u64), (f64, f64, f64)> = BTreeMap::new();
    for pair in rows.chunks(2) {
        let (vm, mb) = (&pair[0], &pair[1]);
        assert_eq!(
            (vm.method, mb.method),
            (ProductMethod::ViaVm, ProductMethod::MomentBased)
        );
        if vm.degenerate || mb.degenerate {
            continue;
        }
        let e = gap.entry((vm.sigma1.to_bits(), vm.sigma2.to_bits())).or_default();
        e.0 += vm.kld;
        e.1 += mb.kld;
        e.2 += 1.0;
    }
    let margin = |s1: f64, s2: f64| {
        let (vm, mb, n) = gap[&(s1.to_bits(), s2.to_bits())];
        (vm - mb) / n
    };
    let small = margin(0.1, 0.2);
    for (&(s1, s2), _) in &gap {
        let (s1, s2) = (f64::from_bits(s1), f64::from_bits(s2));
        if (s1, s2) != (0.1, 0.2) {
            assert!(
                small >= margin(s1, s2),
                "cell ({s1}, {s2}) beats the small-sigma cell"
            );
        }
    }
}

fn small_config(system: SystemKind) -> ScenarioConfig {
    let mut c = ScenarioConfig::builtin("m").unwrap();
    c.system = system;
    c.runs = 12;
    c.k_max = 40;
    c
}

#[test]
fn filtering_medians_are_sane() {
    let config = small_config(SystemKind::Additive);
    let results = run_filtering_experiment(&config, &FilterKind::ALL).unwrap();
    assert_eq!(results.len(), 12 * 5);
    assert!(results.iter().all(|r| r.rmse <= PI && r.errors.len() == 40));
    for s in summarize(&config.name, &results) {
        assert!(s.median_rmse < 1.5, "{s:?}");
        if s.filter == FilterKind::Circular {
            assert!(s.median_rmse < 0.5);
        }
    }
}

#[test]
fn non_additive_runs_skip_the_ukfs() {
    let config = small_config(SystemKind::NonAdditive);
    let results = run_filtering_experiment(&config, &FilterKind::ALL).unwrap();
    assert!(results
        .iter()
        .all(|r| !matches!(r.filter, FilterKind::Ukf1d | FilterKind::Ukf2d)));
    assert_eq!(results.len(), 12 * 3);
}

#[test]
fn scenario_json_round_trip() {
    let text = r#"{"name": "custom", "eta": 0.05, "runs": 3, "k_max": 5}"#;
    let c: ScenarioConfig = serde_json::from_str(text).unwrap();
    assert_eq!((c.runs, c.k_max, c.eta), (3, 5, 0.05));
    c.validate().unwrap();
    assert!(serde_json::from_str::<ScenarioConfig>(r#"{"etaa": 1}"#).is_err());
    let mut bad = c.clone();
    bad.progression_threshold = 1.5;
    assert!(bad.validate().is_err());
}

fn circfilt(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_circfilt"))
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn cli_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        circfilt(&[
            "filter-eval",
            "--scenario",
            "s",
            "--runs",
            "4",
            "--seed",
            "9",
            "--out",
            p.to_str().unwrap(),
        ]);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("scenario,run,filter,rmse,"));
    assert_eq!(text.lines().count(), 1 + 4 * 5);

    let other = circfilt(&["filter-eval", "--scenario", "s", "--runs", "4", "--seed", "10"]);
    assert_ne!(other.stdout, text.as_bytes());
}

#[test]
fn cli_experiments_emit_csv() {
    let out = circfilt(&["propagate-eval", "--c-points", "3", "--sigmas", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "c,sigma,sampler,m1_error,m2_error,kld"
    );
    assert_eq!(text.lines().count(), 1 + 3 * 3);

    let out = circfilt(&[
        "multiply-eval",
        "--sigma1",
        "0.4",
        "--sigma2",
        "0.5",
        "--mu2-points",
        "4",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "mu1,sigma1,mu2,sigma2,method,kld,l2,degenerate"
    );
    assert_eq!(text.lines().count(), 1 + 4 * 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"name": "tiny", "system": "non-additive", "runs": 2, "k_max": 3}"#,
    )
    .unwrap();
    let out = circfilt(&[
        "filter-eval",
        "--config",
        cfg.to_str().unwrap(),
        "--filters",
        "circular,pf10",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(text.lines().skip(1).all(|l| l.starts_with("tiny,")));

    let bad = Command::new(env!("CARGO_BIN_EXE_circfilt"))
        .args(["filter-eval", "--scenario", "nope"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn small_noise_degenerates_the_small_particle_set() {
    let mut config = ScenarioConfig::builtin("s").unwrap();
    config.runs = 10;
    config.k_max = 30;
    let results = run_filtering_experiment(&config, &[FilterKind::Pf10]).unwrap();
    let degenerate = results.iter().filter(|r| r.degenerate_steps > 0).count();
    assert!(
        degenerate * 2 > results.len(),
        "{degenerate} of {}",
        results.len()
    );
}

#[test]
fn filtering_is_deterministic_per_seed() {
    let config = small_config(SystemKind::Additive);
    let a = run_filtering_experiment(&config, &FilterKind::ALL).unwrap();
    let b = run_filtering_experiment(&config, &FilterKind::ALL).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.filter, x.run, &x.errors), (y.filter, y.run, &y.errors));
    }
}
