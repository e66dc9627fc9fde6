use coalition::bench::{rps, OddMan};
use coalition::game::{random_symmetric_tensor, PayoffTensor3};
use coalition::guts::{discretize_guts, max_gradient_norm, sync_value};
use coalition::lab::{
    histogram, io, run_gap_campaign, solve_game, Bin, CampaignConfig, GapSample, NashTarget, Targets,
};
use coalition::opt::SolverConfig;
use coalition::Error;
use proptest::prelude::*;

fn small_campaign(seed: u64) -> CampaignConfig {
    CampaignConfig {
        n: 3,
        trials: 12,
        master_seed: seed,
        ..Default::default()
    }
}

#[test]
fn campaigns_are_reproducible() {
    let a = run_gap_campaign(&small_campaign(9)).unwrap();
    let b = run_gap_campaign(&small_campaign(9)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples.len() + a.failures.len(), 12);
    for (i, s) in a.samples.iter().enumerate() {
        assert_eq!(s.game_seed, 9 + s.trial as u64);
        if i > 0 {
            assert!(s.trial > a.samples[i - 1].trial);
        }
        assert!(s.gap >= -2e-3 && s.v_async <= 2e-3);
    }
    let c = run_gap_campaign(&small_campaign(10)).unwrap();
    assert_ne!(a.samples, c.samples);
}

#[test]
fn histogram_counts_every_sample() {
    let report = run_gap_campaign(&small_campaign(3)).unwrap();
    let total: usize = report.stats.gap_histogram.iter().map(|b| b.count).sum();
    assert_eq!(total, report.samples.len());
    for w in report.stats.gap_histogram.windows(2) {
        assert_eq!(w[0].hi, w[1].lo);
    }
}

fn sample() -> impl Strategy<Value = GapSample> {
    (0usize..1000, any::<u64>(), -1.0f64..0.0, -1.0f64..0.0).prop_map(|(t, s, a, b)| {
        let (vs, va) = (a.min(b), a.max(b));
        GapSample::new(t, s, vs, va)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn samples_csv_round_trip(samples in proptest::collection::vec(sample(), 0..30)) {
        let mut buf = Vec::new();
        io::write_samples(&mut buf, &samples).unwrap();
        let back = io::read_samples(buf.as_slice()).unwrap();
        prop_assert_eq!(back, samples);
    }

    #[test]
    fn histogram_csv_round_trip(values in proptest::collection::vec(-1.0f64..1.0, 1..60), w in 0.01f64..0.5) {
        let bins = histogram(&values, w);
        prop_assert_eq!(bins.iter().map(|b| b.count).sum::<usize>(), values.len());
        let mut buf = Vec::new();
        io::write_histogram(&mut buf, &bins).unwrap();
        let back: Vec<Bin> = io::read_histogram(buf.as_slice()).unwrap();
        prop_assert_eq!(back, bins);
    }
}

#[test]
fn readers_reject_other_formats() {
    assert!(io::read_samples("trial,seed\n1,2\n".as_bytes()).is_err());
    assert!(io::read_histogram("# coalition-lab gap-samples v1\nbin_lo,bin_hi,count\n".as_bytes()).is_err());
}

#[test]
fn solve_game_reports_benchmark_values() {
    let (t, sol) = rps(OddMan::Omi);
    let r = solve_game(&t, &Targets::default(), &SolverConfig::default()).unwrap();
    assert_eq!(r.v_nash, Some(0.0));
    assert!((r.v_sync.unwrap() - sol.v_sync).abs() < 1e-3);
    assert!((r.v_async.unwrap() - sol.v_async).abs() < 1e-3);
    assert!(r.ordering_holds(1e-3));
    assert!(r.diagnostics.get("symmetry_violation").is_some());
}

#[test]
fn solve_game_on_discretized_guts() {
    let n = 50;
    let t = discretize_guts(n).unwrap();
    let r = solve_game(&t, &Targets::default(), &SolverConfig::default()).unwrap();
    let bound = max_gradient_norm(41) / n as f64;
    let vs = r.v_sync.unwrap();
    assert!((vs - sync_value(0.0).unwrap().value).abs() <= bound, "{vs}");
    assert!(r.v_async.unwrap().abs() < 5e-3, "{:?}", r.v_async);
}

#[test]
fn nash_target_on_non_symmetric_tensor() {
    let mut e = random_symmetric_tensor(3, 4).unwrap().entries().to_vec();
    e[1] += 0.3;
    let t = PayoffTensor3::new(3, e).unwrap();
    let cfg = SolverConfig::default();
    let required = Targets {
        nash: NashTarget::Required,
        sync: false,
        asynchronous: false,
        fp_iterations: None,
    };
    assert!(matches!(
        solve_game(&t, &required, &cfg),
        Err(Error::NotSymmetric { .. })
    ));
    let r = solve_game(&t, &Targets::default(), &cfg).unwrap();
    assert_eq!(r.v_nash, None);
    assert!(r
        .diagnostics
        .get("v_nash")
        .unwrap()
        .as_str()
        .unwrap()
        .starts_with("unavailable"));
    assert!(r.v_sync.is_some());
}

#[test]
fn fp_cross_check_is_recorded() {
    let (t, sol) = rps(OddMan::Omo);
    let targets = Targets {
        fp_iterations: Some(20_000),
        ..Default::default()
    };
    let r = solve_game(&t, &targets, &SolverConfig::default()).unwrap();
    let fp = r.diagnostics.get("sync_fp_value").unwrap().as_f64().unwrap();
    let gap = r.diagnostics.get("sync_fp_gap").unwrap().as_f64().unwrap();
    assert!((fp - sol.v_sync).abs() <= gap + 1e-9, "{fp} {gap}");
}
