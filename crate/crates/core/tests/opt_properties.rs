use coalition::bench::{classify_222, odds_evens, rps, Family222, OddMan};
use coalition::game::{random_symmetric_tensor, PayoffMatrix2, StrategySimplex};
use coalition::opt::{
    smooth_max, smooth_max_grad, smooth_min, solve_matrix_value, solve_maximin, solve_minimax, MaximinObjective,
    MinimaxObjective, SmoothingSpec, SolverConfig,
};
use proptest::prelude::*;

fn mixture(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.05f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    })
}

fn specs() -> [SmoothingSpec; 4] {
    [
        SmoothingSpec::Softmax { epsilon: 0.05 },
        SmoothingSpec::Softmax { epsilon: 0.5 },
        SmoothingSpec::LpShift { p: 2.0 },
        SmoothingSpec::LpShift { p: 10.0 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lp_sandwich(x in proptest::collection::vec(0.0f64..1.0, 1..12), p in 1.0f64..500.0) {
        let spec = SmoothingSpec::LpShift { p };
        let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s = smooth_max(&x, spec);
        let upper = (m + 1.0) * (x.len() as f64).powf(1.0 / p) - 1.0;
        prop_assert!(m <= s + 1e-12 && s <= upper + 1e-12, "{m} {s} {upper}");
        let mn = x.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(smooth_min(&x, spec) <= mn + 1e-12);
    }

    #[test]
    fn softmax_sandwich(x in proptest::collection::vec(-1.0f64..1.0, 1..12)) {
        let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let s = smooth_max(&x, SmoothingSpec::Softmax { epsilon: eps });
            prop_assert!(s <= m + 1e-15);
            let gap = m - s;
            prop_assert!(gap <= prev + 1e-15, "{gap} after {prev}");
            prev = gap;
        }
        let mn = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let soft_min = smooth_min(&x, SmoothingSpec::Softmax { epsilon: 1e-3 });
        prop_assert!(soft_min >= mn - 1e-15);
    }

    #[test]
    fn surrogate_gradient_matches_fd(x in proptest::collection::vec(-0.9f64..0.9, 2..8)) {
        let h = 1e-6;
        for spec in specs() {
            let mut g = vec![0.0; x.len()];
            smooth_max_grad(&x, spec, &mut g);
            for d in 0..x.len() {
                let mut a = x.clone();
                let mut b = x.clone();
                a[d] += h;
                b[d] -= h;
                let fd = (smooth_max(&a, spec) - smooth_max(&b, spec)) / (2.0 * h);
                prop_assert!((fd - g[d]).abs() < 1e-5, "{spec} d={d}: {fd} vs {}", g[d]);
            }
        }
    }

    #[test]
    fn minimax_gradient_matches_fd(seed in any::<u64>(), (y, z) in (2usize..6).prop_flat_map(|n| (mixture(n), mixture(n)))) {
        let n = y.len();
        let t = random_symmetric_tensor(n, seed).unwrap();
        let h = 1e-6;
        for spec in specs() {
            let obj = MinimaxObjective::new(&t, spec);
            let (mut gy, mut gz) = (vec![0.0; n], vec![0.0; n]);
            let f = obj.value_grad(&y, &z, &mut gy, &mut gz);
            prop_assert!((f - obj.value(&y, &z)).abs() < 1e-12);
            for d in 0..n {
                let mut a = y.clone();
                let mut b = y.clone();
                a[d] += h;
                b[d] -= h;
                let fd = (obj.value(&a, &z) - obj.value(&b, &z)) / (2.0 * h);
                prop_assert!((fd - gy[d]).abs() < 1e-5, "{spec} y{d}: {fd} vs {}", gy[d]);
                let mut a = z.clone();
                let mut b = z.clone();
                a[d] += h;
                b[d] -= h;
                let fd = (obj.value(&y, &a) - obj.value(&y, &b)) / (2.0 * h);
                prop_assert!((fd - gz[d]).abs() < 1e-5, "{spec} z{d}: {fd} vs {}", gz[d]);
            }
        }
    }

    #[test]
    fn maximin_gradient_matches_fd(seed in any::<u64>(), x in (2usize..6).prop_flat_map(mixture)) {
        let n = x.len();
        let t = random_symmetric_tensor(n, seed).unwrap();
        let h = 1e-6;
        for spec in specs() {
            let obj = MaximinObjective::new(&t, spec);
            let mut g = vec![0.0; n];
            let f = obj.value_grad(&x, &mut g);
            prop_assert!((f - obj.value(&x)).abs() < 1e-12);
            for d in 0..n {
                let mut a = x.clone();
                let mut b = x.clone();
                a[d] += h;
                b[d] -= h;
                let fd = (obj.value(&a) - obj.value(&b)) / (2.0 * h);
                prop_assert!((fd - g[d]).abs() < 1e-5, "{spec} x{d}: {fd} vs {}", g[d]);
            }
        }
    }
}

#[test]
fn oracle_values_reproduced() {
    let cfg = SolverConfig::default();
    let mut games = vec![
        odds_evens(OddMan::Omo),
        odds_evens(OddMan::Omi),
        rps(OddMan::Omo),
        rps(OddMan::Omi),
    ];
    for a in [0.25, 0.5, 2.0] {
        for fam in [Family222::OmoLike, Family222::OmiLike] {
            games.push((
                coalition::bench::family222_tensor(a, fam).unwrap(),
                classify_222(a, fam).unwrap(),
            ));
        }
    }
    for (t, sol) in &games {
        let vs = solve_maximin(t, &cfg).unwrap();
        let va = solve_minimax(t, &cfg).unwrap();
        assert!((vs.value - sol.v_sync).abs() < 1e-3, "{} vs {}", vs.value, sol.v_sync);
        assert!((va.value - sol.v_async).abs() < 1e-3, "{} vs {}", va.value, sol.v_async);
    }
}

#[test]
fn sync_never_exceeds_async_on_random_games() {
    let cfg = SolverConfig::default();
    for seed in 0..100u64 {
        let n = 2 + (seed % 4) as usize;
        let t = random_symmetric_tensor(n, 1000 + seed).unwrap();
        let vs = solve_maximin(&t, &cfg).unwrap().value;
        let va = solve_minimax(&t, &cfg).unwrap().value;
        assert!(vs <= va + 2e-3, "seed {seed}, n {n}: {vs} > {va}");
        assert!(va <= 2e-3, "seed {seed}: {va}");
    }
}

#[test]
fn solves_are_deterministic() {
    let t = random_symmetric_tensor(4, 77).unwrap();
    let cfg = SolverConfig {
        restarts: 6,
        rng_seed: 5,
        ..Default::default()
    };
    assert_eq!(solve_minimax(&t, &cfg).unwrap(), solve_minimax(&t, &cfg).unwrap());
    assert_eq!(solve_maximin(&t, &cfg).unwrap(), solve_maximin(&t, &cfg).unwrap());
}

#[test]
fn matrix_value_agrees_with_negative_transpose() {
    let cfg = SolverConfig {
        smoothing: SmoothingSpec::Softmax { epsilon: 1e-6 },
        ..Default::default()
    };
    for seed in 0..10 {
        let m = PayoffMatrix2::random_uniform(4, 4, seed).unwrap();
        let v = solve_matrix_value(&m, &cfg).unwrap().value;
        let vt = solve_matrix_value(&m.negative_transpose(), &cfg).unwrap().value;
        assert!((v + vt).abs() < 1e-4, "seed {seed}: {v} {vt}");
    }
    // an antisymmetric game has value zero
    let a = PayoffMatrix2::from_rows(&[vec![0.0, 0.4, -0.7], vec![-0.4, 0.0, 0.2], vec![0.7, -0.2, 0.0]]).unwrap();
    assert_eq!(a.negative_transpose(), a);
    let v = solve_matrix_value(&a, &cfg).unwrap();
    assert!(v.value.abs() < 1e-4, "{}", v.value);
    let y = &v.strategies[0];
    assert!(StrategySimplex::new(y.weights().to_vec()).is_ok());
}
