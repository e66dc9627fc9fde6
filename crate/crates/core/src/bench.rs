//! Closed-form solutions of the small games that can be solved by hand:
//! three-player odds and evens, the general symmetric 2x2x2 family and
//! three-player rock-paper-scissors, plus the recursive 2x2 toy model.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::game::{PayoffTensor3, StrategySimplex, ValueReport};
use crate::{Error, Result};

/// Whether the player who differs from the other two gains or loses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OddMan {
    /// Odd man out: the lone player pays each matcher 1.
    Omo,
    /// Odd man in: each matcher pays the lone player 1.
    Omi,
}

impl FromStr for OddMan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "omo" | "out" => Ok(Self::Omo),
            "omi" | "in" => Ok(Self::Omi),
            _ => Err(Error::invalid(format!("unknown variant {s:?}, expected omo or omi"))),
        }
    }
}

impl fmt::Display for OddMan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Omo => "omo",
            Self::Omi => "omi",
        })
    }
}

/// The two normalized forms of a symmetric 2x2x2 game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family222 {
    OmoLike,
    OmiLike,
}

impl FromStr for Family222 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "omo" | "omo-like" => Ok(Self::OmoLike),
            "omi" | "omi-like" => Ok(Self::OmiLike),
            _ => Err(Error::invalid(format!(
                "unknown family {s:?}, expected omo-like or omi-like"
            ))),
        }
    }
}

/// A coalition strategy pair with its objective value `max_i sum y_j z_k P_ijk`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub y: StrategySimplex,
    pub z: StrategySimplex,
    pub value: f64,
}

impl Minimizer {
    fn new(y: Vec<f64>, z: Vec<f64>, value: f64) -> Self {
        Self {
            y: StrategySimplex::normalized(y).expect("hand-written strategy"),
            z: StrategySimplex::normalized(z).expect("hand-written strategy"),
            value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSolution {
    pub v_sync: f64,
    pub v_async: f64,
    pub v_nash: f64,
    pub global_minimizers: Vec<Minimizer>,
    pub local_minimizers: Vec<Minimizer>,
    pub notes: String,
}

impl BenchmarkSolution {
    /// Report form, with the first global minimizer as the coalition strategy.
    pub fn to_report(&self) -> ValueReport {
        let mut r = ValueReport {
            v_nash: Some(self.v_nash),
            v_sync: Some(self.v_sync),
            v_async: Some(self.v_async),
            ..Default::default()
        };
        if let Some(m) = self.global_minimizers.first() {
            r.strategies.y = Some(m.y.clone());
            r.strategies.z = Some(m.z.clone());
        }
        r.diagnostics.insert("source", "closed form");
        r.diagnostics.insert("global_minimizers", &self.global_minimizers);
        r.diagnostics.insert("local_minimizers", &self.local_minimizers);
        r.diagnostics.insert("notes", &self.notes);
        r
    }
}

/// Odd-man payoff tensor on `n` strategies.
///
/// With odd man in, player 1 receives 2 when the other two match each other
/// but not player 1, pays 1 when exactly one of them matches player 1, and
/// nothing otherwise. Odd man out is the negation.
pub fn odd_man_tensor(n: usize, variant: OddMan) -> PayoffTensor3 {
    let sign = match variant {
        OddMan::Omi => 1.0,
        OddMan::Omo => -1.0,
    };
    PayoffTensor3::from_fn(n, |i, j, k| {
        let v = if j == k && j != i {
            2.0
        } else if (i == j) != (i == k) {
            -1.0
        } else {
            0.0
        };
        sign * v
    })
    .and_then(PayoffTensor3::into_symmetric)
    .expect("odd-man tensors are symmetric zero-sum")
}

/// Two-strategy (pure) coalition pairs written as probabilities of strategy "one".
fn two_point(y: f64, z: f64, value: f64) -> Minimizer {
    Minimizer::new(vec![y, 1.0 - y], vec![z, 1.0 - z], value)
}

/// Three-player odds and evens.
pub fn odds_evens(variant: OddMan) -> (PayoffTensor3, BenchmarkSolution) {
    let t = odd_man_tensor(2, variant);
    let sol = match variant {
        OddMan::Omo => BenchmarkSolution {
            v_sync: -1.0,
            v_async: 0.0,
            v_nash: 0.0,
            global_minimizers: vec![
                two_point(0.0, 0.0, 0.0),
                two_point(1.0, 1.0, 0.0),
                two_point(0.5, 0.5, 0.0),
            ],
            local_minimizers: vec![],
            notes: "odds and evens, odd man out: V_S = -1 < V_A = V_N = 0".into(),
        },
        OddMan::Omi => BenchmarkSolution {
            v_sync: -1.0,
            v_async: -1.0,
            v_nash: 0.0,
            global_minimizers: vec![two_point(0.0, 1.0, -1.0), two_point(1.0, 0.0, -1.0)],
            local_minimizers: vec![],
            notes: "odds and evens, odd man in: V_S = V_A = -1 < V_N = 0".into(),
        },
    };
    (t, sol)
}

/// Player 1's expected return in odd-man-out odds and evens when players 2
/// and 3 play "one" with probabilities `y` and `z`: `(r_one, r_two)`.
pub fn omo_expected_returns(y: f64, z: f64) -> Result<(f64, f64)> {
    for (name, v) in [("y", y), ("z", z)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    Ok((3.0 * y + 3.0 * z - 4.0 * y * z - 2.0, y + z - 4.0 * y * z))
}

/// Tensor of the normalized 2x2x2 game with parameter `alpha`.
pub fn family222_tensor(alpha: f64, family: Family222) -> Result<PayoffTensor3> {
    if !alpha.is_finite() {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    // P111 P112 P121 P122 / P211 P212 P221 P222
    let omo = [0.0, alpha, alpha, -2.0, -2.0 * alpha, 1.0, 1.0, 0.0];
    let sign = match family {
        Family222::OmoLike => 1.0,
        Family222::OmiLike => -1.0,
    };
    PayoffTensor3::symmetric(2, omo.iter().map(|e| sign * e).collect())
}

/// Values and minimizers of the normalized 2x2x2 game.
pub fn classify_222(alpha: f64, family: Family222) -> Result<BenchmarkSolution> {
    if !alpha.is_finite() {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    let sol = match family {
        Family222::OmoLike if alpha > 0.0 => {
            let q = 1.0 / (1.0 + alpha);
            BenchmarkSolution {
                v_sync: -2.0 * alpha / (alpha + 1.0),
                v_async: 0.0,
                v_nash: 0.0,
                global_minimizers: vec![two_point(0.0, 0.0, 0.0), two_point(1.0, 1.0, 0.0), two_point(q, q, 0.0)],
                local_minimizers: vec![],
                notes: format!(
                    "reduced synchronous game [[0, -2], [{}, 0]]; player 1 plays 1 with probability {}",
                    -2.0 * alpha,
                    alpha / (alpha + 1.0)
                ),
            }
        }
        Family222::OmiLike if alpha > 0.0 => {
            let v = (-1.0f64).max(-alpha);
            BenchmarkSolution {
                v_sync: v,
                v_async: v,
                v_nash: 0.0,
                global_minimizers: vec![two_point(1.0, 0.0, v), two_point(0.0, 1.0, v)],
                local_minimizers: vec![],
                notes: format!(
                    "reduced synchronous game [[{}], [-1]]: the coalition plays the pure pair (1, 2)",
                    -alpha
                ),
            }
        }
        Family222::OmoLike => BenchmarkSolution {
            v_sync: 0.0,
            v_async: 0.0,
            v_nash: 0.0,
            global_minimizers: vec![two_point(0.0, 0.0, 0.0)],
            local_minimizers: vec![],
            notes: "alpha <= 0: player 1 forces zero by playing 2".into(),
        },
        Family222::OmiLike => BenchmarkSolution {
            v_sync: 0.0,
            v_async: 0.0,
            v_nash: 0.0,
            global_minimizers: vec![two_point(1.0, 1.0, 0.0)],
            local_minimizers: vec![],
            notes: "alpha <= 0: player 1 forces zero by playing 1".into(),
        },
    };
    Ok(sol)
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Three-player rock-paper-scissors with odd-man payoffs.
pub fn rps(variant: OddMan) -> (PayoffTensor3, BenchmarkSolution) {
    let t = odd_man_tensor(3, variant);
    let third = 1.0 / 3.0;
    let sol = match variant {
        OddMan::Omi => {
            let mut globals = Vec::new();
            for i in 0..3 {
                let mut y = vec![0.0; 3];
                y[i] = 1.0;
                let z: Vec<f64> = (0..3).map(|j| if j == i { 0.0 } else { 0.5 }).collect();
                globals.push(Minimizer::new(y.clone(), z.clone(), -0.5));
                globals.push(Minimizer::new(z, y, -0.5));
            }
            // y runs over the arrangements of (0, 1/3, 2/3), z_j = 2/3 - y_j
            let base = [0.0, third, 2.0 * third];
            let locals = permutations3()
                .iter()
                .map(|p| {
                    let y: Vec<f64> = p.iter().map(|&a| base[a]).collect();
                    let z: Vec<f64> = y.iter().map(|v| 2.0 * third - v).collect();
                    Minimizer::new(y, z, -4.0 / 9.0)
                })
                .collect();
            BenchmarkSolution {
                v_sync: -2.0 / 3.0,
                v_async: -0.5,
                v_nash: 0.0,
                global_minimizers: globals,
                local_minimizers: locals,
                notes: "rock-paper-scissors, odd man in: V_S = -2/3 < V_A = -1/2 < V_N = 0; \
                        the uniform Nash point is a nonsmooth saddle"
                    .into(),
            }
        }
        OddMan::Omo => {
            let mut globals = vec![Minimizer::new(vec![third; 3], vec![third; 3], 0.0)];
            for i in 0..3 {
                let mut e = vec![0.0; 3];
                e[i] = 1.0;
                globals.push(Minimizer::new(e.clone(), e, 0.0));
            }
            for i in 0..3 {
                let h: Vec<f64> = (0..3).map(|j| if j == i { 0.0 } else { 0.5 }).collect();
                globals.push(Minimizer::new(h.clone(), h, 0.0));
            }
            BenchmarkSolution {
                v_sync: -4.0 / 3.0,
                v_async: 0.0,
                v_nash: 0.0,
                global_minimizers: globals,
                local_minimizers: vec![],
                notes: "rock-paper-scissors, odd man out: V_S = -4/3 < V_A = V_N = 0".into(),
            }
        }
    };
    (t, sol)
}

/// Player 1's payoff for each pure choice in odd-man-in rock-paper-scissors:
/// `2 y.z - (y_j + z_j)`.
pub fn rps_omi_payoffs(y: &[f64], z: &[f64]) -> [f64; 3] {
    let yz: f64 = y.iter().zip(z).map(|(a, b)| a * b).sum();
    [0, 1, 2].map(|j| 2.0 * yz - (y[j] + z[j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToyRegime {
    /// The one-shot optimal strategy stays optimal in every round.
    Oneshot,
    /// The players switch strategies as the continuation value grows.
    Switch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyOutcome {
    pub v_oneshot: f64,
    pub regime: ToyRegime,
    /// Limit of the recursive values; `None` when they diverge to infinity.
    pub v_limit: Option<f64>,
}

/// The recursive 2x2 toy game with one-round payoff `alpha0` and stakes `beta0`.
pub fn recursive_toy_2x2(alpha0: f64, beta0: f64) -> Result<ToyOutcome> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::OutOfRange {
            name: "alpha0",
            value: alpha0,
        });
    }
    if !(beta0 > 0.0 && beta0 < 2.0) {
        return Err(Error::OutOfRange {
            name: "beta0",
            value: beta0,
        });
    }
    let v_oneshot = alpha0 / (1.0 - beta0 / 2.0);
    // v_oneshot * beta0 < 2 is the same condition as alpha0 * beta0 + beta0 < 2
    if alpha0 * beta0 + beta0 <= 2.0 {
        return Ok(ToyOutcome {
            v_oneshot,
            regime: ToyRegime::Oneshot,
            v_limit: Some(v_oneshot),
        });
    }
    let v_limit = (beta0 < 1.0).then(|| (alpha0 - 1.0) / (1.0 - beta0));
    Ok(ToyOutcome {
        v_oneshot,
        regime: ToyRegime::Switch,
        v_limit,
    })
}
