use coalition::bench::{classify_222, odds_evens, rps, Family222, OddMan};
use coalition::game::{argmax, project_to_simplex, random_symmetric_tensor, PayoffTensor3, StrategySimplex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mixture(n: usize) -> impl Strategy<Value = StrategySimplex> {
    proptest::collection::vec(0.0f64..1.0, n).prop_map(|w| {
        let w: Vec<f64> = w.into_iter().map(|v| v + 1e-3).collect();
        StrategySimplex::normalized(w).unwrap()
    })
}

fn game_and_mixtures() -> impl Strategy<Value = (PayoffTensor3, [StrategySimplex; 4])> {
    (2usize..6, any::<u64>()).prop_flat_map(|(n, seed)| {
        let t = random_symmetric_tensor(n, seed).unwrap();
        (Just(t), [mixture(n), mixture(n), mixture(n), mixture(n)])
    })
}

fn combine(a: &StrategySimplex, b: &StrategySimplex, l: f64) -> StrategySimplex {
    let w = a
        .weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| l * x + (1.0 - l) * y)
        .collect();
    StrategySimplex::normalized(w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expected_payoff_is_multilinear((t, [x, y, z, w]) in game_and_mixtures(), l in 0.0f64..1.0) {
        let e = |a: &StrategySimplex, b: &StrategySimplex, c: &StrategySimplex| t.expected_payoff(a, b, c).unwrap();
        let m = combine(&x, &w, l);
        prop_assert!((e(&m, &y, &z) - (l * e(&x, &y, &z) + (1.0 - l) * e(&w, &y, &z))).abs() < 1e-12);
        prop_assert!((e(&x, &m, &z) - (l * e(&x, &x, &z) + (1.0 - l) * e(&x, &w, &z))).abs() < 1e-12);
        prop_assert!((e(&y, &z, &m) - (l * e(&y, &z, &x) + (1.0 - l) * e(&y, &z, &w))).abs() < 1e-12);
    }

    #[test]
    fn cyclic_role_sum_vanishes((t, [x, y, z, _]) in game_and_mixtures()) {
        // player 1's payoff in the three seatings where each mixture takes player 1's seat
        let s = t.expected_payoff(&x, &y, &z).unwrap()
            + t.expected_payoff(&y, &x, &z).unwrap()
            + t.expected_payoff(&z, &x, &y).unwrap();
        prop_assert!(s.abs() < 1e-10, "{s}");
    }

    #[test]
    fn best_pure_response_matches_brute_force((t, [_, y, z, _]) in game_and_mixtures()) {
        let n = t.n();
        let brute = (0..n)
            .map(|i| t.expected_payoff(&StrategySimplex::vertex(n, i), &y, &z).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        let (i, v) = t.best_pure_response_p1(&y, &z).unwrap();
        prop_assert!((v - brute).abs() < 1e-14);
        prop_assert!(i < n);
    }

    #[test]
    fn symmetry_rules_hold_exactly(n in 2usize..8, seed in any::<u64>()) {
        let t = random_symmetric_tensor(n, seed).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    prop_assert_eq!(t.get(i, j, k).to_bits(), t.get(i, k, j).to_bits());
                    let cyc = t.get(i, j, k) + t.get(j, i, k) + t.get(k, i, j);
                    prop_assert!(cyc.abs() <= 4.0 * f64::EPSILON, "{cyc}");
                }
            }
        }
        prop_assert!(t.validate_symmetry().pass);
        let again = random_symmetric_tensor(n, seed).unwrap();
        let same = t.entries().iter().zip(again.entries()).all(|(a, b)| a.to_bits() == b.to_bits());
        prop_assert!(same);
    }

    #[test]
    fn projection_beats_grid(v in proptest::collection::vec(-2.0f64..2.0, 3)) {
        let p = project_to_simplex(&v).unwrap();
        let again = project_to_simplex(p.weights()).unwrap();
        for (a, b) in p.weights().iter().zip(again.weights()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
        let dist = |w: &[f64]| w.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let dp = dist(p.weights());
        let res = 1000;
        for i in 0..=res {
            for j in 0..=(res - i) {
                let g = [i as f64 / res as f64, j as f64 / res as f64, (res - i - j) as f64 / res as f64];
                prop_assert!(dp <= dist(&g) + 1e-12);
            }
        }
    }
}

#[test]
fn projection_beats_grid_in_four_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    for _ in 0..20 {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let p = project_to_simplex(&v).unwrap();
        let dist = |w: &[f64]| w.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let dp = dist(p.weights());
        let res = 60;
        for i in 0..=res {
            for j in 0..=(res - i) {
                for k in 0..=(res - i - j) {
                    let g = [i, j, k, res - i - j - k].map(|c| c as f64 / res as f64);
                    assert!(dp <= dist(&g) + 1e-12);
                }
            }
        }
    }
}

/// Oracle `V_S` against a brute-force grid over player 1's mixtures.
fn grid_v_sync(t: &PayoffTensor3, res: usize) -> f64 {
    let n = t.n();
    let mut best = f64::NEG_INFINITY;
    let mut visit = |x: &[f64]| {
        let s = StrategySimplex::normalized(x.to_vec()).unwrap();
        best = best.max(t.worst_pure_pair(&s).unwrap().1);
    };
    match n {
        2 => (0..=res).for_each(|i| visit(&[i as f64, (res - i) as f64])),
        3 => {
            for i in 0..=res {
                for j in 0..=(res - i) {
                    visit(&[i as f64, j as f64, (res - i - j) as f64]);
                }
            }
        }
        _ => unreachable!(),
    }
    best
}

/// Oracle `V_A` against a brute-force grid over the coalition's product mixtures.
fn grid_v_async(t: &PayoffTensor3, res: usize) -> f64 {
    let n = t.n();
    let points: Vec<StrategySimplex> = match n {
        2 => (0..=res)
            .map(|i| StrategySimplex::normalized(vec![i as f64, (res - i) as f64]).unwrap())
            .collect(),
        3 => (0..=res)
            .flat_map(|i| (0..=(res - i)).map(move |j| vec![i as f64, j as f64, (res - i - j) as f64]))
            .map(|w| StrategySimplex::normalized(w).unwrap())
            .collect(),
        _ => unreachable!(),
    };
    let mut best = f64::INFINITY;
    for y in &points {
        for z in &points {
            best = best.min(t.best_pure_response_p1(y, z).unwrap().1);
        }
    }
    best
}

#[test]
fn oracles_agree_with_brute_force_grids() {
    let mut games = vec![
        odds_evens(OddMan::Omo),
        odds_evens(OddMan::Omi),
        rps(OddMan::Omo),
        rps(OddMan::Omi),
    ];
    for a in [0.25, 0.5, 1.0, 2.0, 4.0, -1.0] {
        for fam in [Family222::OmoLike, Family222::OmiLike] {
            let t = coalition::bench::family222_tensor(a, fam).unwrap();
            games.push((t, classify_222(a, fam).unwrap()));
        }
    }
    for (t, sol) in &games {
        assert!(t.validate_symmetry().pass);
        assert!(sol.v_sync <= sol.v_async && sol.v_async <= 0.0);
        let vs = grid_v_sync(t, 200);
        assert!((vs - sol.v_sync).abs() < 2e-2, "{vs} vs {}", sol.v_sync);
        let va = grid_v_async(t, 40);
        assert!((va - sol.v_async).abs() < 5e-2, "{va} vs {}", sol.v_async);
        assert!(va >= sol.v_async - 1e-12);
    }
}

#[test]
fn family_at_one_is_odds_evens() {
    for (fam, v) in [(Family222::OmoLike, OddMan::Omo), (Family222::OmiLike, OddMan::Omi)] {
        let t = coalition::bench::family222_tensor(1.0, fam).unwrap();
        let (oe, sol) = odds_evens(v);
        assert_eq!(t.entries(), oe.entries());
        let c = classify_222(1.0, fam).unwrap();
        assert_eq!((c.v_sync, c.v_async, c.v_nash), (sol.v_sync, sol.v_async, sol.v_nash));
    }
}

#[test]
fn argmax_prefers_smallest_index() {
    assert_eq!(argmax(&[1.0, 3.0, 3.0]), (1, 3.0));
}
