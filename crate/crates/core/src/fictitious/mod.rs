//! Fictitious play.
//!
//! Each player repeatedly best-responds to the empirical mixture of the
//! opponents' past plays. [`fp_2player`] is the classical two-player scheme,
//! [`joint_fp`] runs three-player play on the game where players 2 and 3
//! pool their winnings, and [`sync_fp`] treats the coalition as one player
//! choosing pure pairs.
//!
//! Best-response ties go to the smallest index and initial plays are random
//! pure strategies drawn from the seed, so every run is reproducible.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::{argmax, argmin, PairWeight, PayoffMatrix2, PayoffTensor3, StrategySimplex};
use crate::{Error, Result};

/// Step size schedule `theta(m)` for the averaging update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaRule {
    /// `theta = 1/m`, the running average of all plays.
    #[default]
    Classical,
    /// `theta = max(1/m, c)`.
    Floor { c: f64 },
}

impl ThetaRule {
    pub const DEFAULT_FLOOR: f64 = 0.001;

    pub fn theta(&self, m: u64) -> f64 {
        let t = 1.0 / m as f64;
        match *self {
            ThetaRule::Classical => t,
            ThetaRule::Floor { c } => t.max(c),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ThetaRule::Floor { c } if !(c > 0.0 && c <= 1.0) => Err(Error::OutOfRange {
                name: "theta floor",
                value: c,
            }),
            _ => Ok(()),
        }
    }
}

impl FromStr for ThetaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "classical" {
            return Ok(ThetaRule::Classical);
        }
        let rule = match s.strip_prefix("floor") {
            Some("") => ThetaRule::Floor { c: Self::DEFAULT_FLOOR },
            Some(rest) => {
                let c = rest
                    .strip_prefix(':')
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| Error::invalid(format!("bad theta rule '{s}'")))?;
                ThetaRule::Floor { c }
            }
            None => {
                return Err(Error::invalid(format!(
                    "unknown theta rule '{s}' (classical | floor:C)"
                )))
            }
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl fmt::Display for ThetaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaRule::Classical => write!(f, "classical"),
            ThetaRule::Floor { c } => write!(f, "floor:{c}"),
        }
    }
}

/// Result of a fictitious play run.
///
/// `lower` and `upper` are the values the two sides guarantee with their
/// empirical strategies. `converged_gap` is the largest amount by which a
/// player's best reply beats the empirical payoff; it is zero exactly at an
/// equilibrium of the game being played.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FpTrace {
    pub iterations: u64,
    /// Player 1 first; the coalition follows (one pair mixture for
    /// [`sync_fp`], one mixture per member for [`joint_fp`]).
    pub empirical: Vec<StrategySimplex>,
    pub value_estimate: f64,
    pub converged_gap: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FpTrace {
    /// Pair weights of a [`sync_fp`] coalition mixture above `min_weight`.
    pub fn pair_weights(&self, n: usize, min_weight: f64) -> Vec<PairWeight> {
        match self.empirical.get(1) {
            Some(c) if c.len() == n * n => c
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > min_weight)
                .map(|(idx, &w)| PairWeight {
                    j: idx / n,
                    k: idx % n,
                    weight: w,
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Running mixture of pure plays.
///
/// The classical rule keeps integer counts so the mixture is an exact
/// average; other rules use the weighted recurrence.
struct Empirical {
    counts: Vec<u64>,
    w: Vec<f64>,
    plays: u64,
    exact: bool,
}

impl Empirical {
    fn start(n: usize, first: usize, exact: bool) -> Self {
        let mut counts = vec![0; n];
        counts[first] = 1;
        let mut w = vec![0.0; n];
        w[first] = 1.0;
        Self {
            counts,
            w,
            plays: 1,
            exact,
        }
    }

    fn push(&mut self, b: usize, theta: f64) {
        self.plays += 1;
        if self.exact {
            self.counts[b] += 1;
            let m = self.plays as f64;
            for (w, &c) in self.w.iter_mut().zip(&self.counts) {
                *w = c as f64 / m;
            }
        } else {
            self.w.iter_mut().for_each(|w| *w *= 1.0 - theta);
            self.w[b] += theta;
        }
    }

    fn simplex(&self) -> StrategySimplex {
        StrategySimplex::normalized(self.w.clone()).expect("running mixture is a simplex")
    }
}

fn check_iterations(iterations: u64) -> Result<()> {
    if iterations == 0 {
        return Err(Error::invalid("iterations must be at least 1"));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Classical alternating fictitious play on a matrix game.
///
/// The row player maximizes `x^T M y` and moves first in each round; the
/// column player then answers the updated row mixture. Cumulative payoff
/// vectors make each round linear in the matrix size.
pub fn fp_2player(m: &PayoffMatrix2, iterations: u64, seed: u64) -> Result<FpTrace> {
    check_iterations(iterations)?;
    let (rows, cols) = (m.rows(), m.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r0 = rng.gen_range(0..rows);
    let c0 = rng.gen_range(0..cols);

    let mut row_counts = vec![0u64; rows];
    let mut col_counts = vec![0u64; cols];
    row_counts[r0] = 1;
    col_counts[c0] = 1;
    // row_cum[r] = sum of M[r, c] over column plays; col_cum[c] likewise over row plays.
    let mut row_cum: Vec<f64> = (0..rows).map(|r| m.get(r, c0)).collect();
    let mut col_cum: Vec<f64> = m.row(r0).to_vec();

    for _ in 1..iterations {
        let (r, _) = argmax(&row_cum);
        row_counts[r] += 1;
        for (c, a) in col_cum.iter_mut().zip(m.row(r)) {
            *c += a;
        }
        let (c, _) = argmin(&col_cum);
        col_counts[c] += 1;
        for (rr, cum) in row_cum.iter_mut().enumerate() {
            *cum += m.get(rr, c);
        }
    }

    let t = iterations as f64;
    let x: Vec<f64> = row_counts.iter().map(|&c| c as f64 / t).collect();
    let y: Vec<f64> = col_counts.iter().map(|&c| c as f64 / t).collect();
    let upper = argmax(&m.row_payoffs(&y)).1;
    let lower = argmin(&m.col_payoffs(&x)).1;
    let e = dot(&x, &m.row_payoffs(&y));
    Ok(FpTrace {
        iterations,
        empirical: vec![StrategySimplex::normalized(x)?, StrategySimplex::normalized(y)?],
        value_estimate: 0.5 * (upper + lower),
        converged_gap: (upper - e).max(e - lower),
        lower,
        upper,
    })
}

/// Payoff to player 1 when one coalition member plays each pure strategy `t`
/// and the other plays `other`: `sum_i x_i sum_s P(i, t, s) other_s`.
///
/// Player 3's payoffs use the transposed slot. Both loops sum over `s` in
/// the same order, so on a tensor with `P_ijk = P_ikj` identical inputs give
/// bitwise identical outputs for the two members.
fn member_payoffs(p: &PayoffTensor3, x: &[f64], other: &[f64], second: bool, out: &mut [f64]) {
    let n = p.n();
    let e = p.entries();
    for (t, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (s, &ws) in other.iter().enumerate() {
                let idx = if second {
                    (i * n + s) * n + t
                } else {
                    (i * n + t) * n + s
                };
                inner += e[idx] * ws;
            }
            acc += xi * inner;
        }
        *o = acc;
    }
}

/// Player 1's pure-deviation gains and the coalition members' pure-deviation
/// reductions at `(x, y, z)`, plus the three best-reply values.
struct Deviations {
    value: f64,
    best: [f64; 3],
}

fn deviations(p: &PayoffTensor3, x: &[f64], y: &[f64], z: &[f64]) -> Deviations {
    let n = p.n();
    let mut buf = vec![0.0; n];
    p.player1_payoffs_into(y, z, &mut buf);
    let value = dot(x, &buf);
    let b1 = argmax(&buf).1;
    member_payoffs(p, x, z, false, &mut buf);
    let b2 = argmin(&buf).1;
    member_payoffs(p, x, y, true, &mut buf);
    let b3 = argmin(&buf).1;
    Deviations {
        value,
        best: [b1, b2, b3],
    }
}

/// Joint fictitious play: player 1 maximizes, players 2 and 3 each minimize
/// player 1's payoff. All three update simultaneously by the `theta` rule.
///
/// `value_estimate` is player 1's best-reply value against the coalition's
/// empirical mixtures, i.e. the value the coalition holds player 1 to.
/// `lower` is what player 1's empirical mixture guarantees against any pure
/// pair.
pub fn joint_fp(p: &PayoffTensor3, iterations: u64, theta: ThetaRule, seed: u64) -> Result<FpTrace> {
    check_iterations(iterations)?;
    theta.validate()?;
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exact = theta == ThetaRule::Classical;
    let mut x = Empirical::start(n, rng.gen_range(0..n), exact);
    let mut y = Empirical::start(n, rng.gen_range(0..n), exact);
    let mut z = Empirical::start(n, rng.gen_range(0..n), exact);

    let mut buf = vec![0.0; n];
    for m in 2..=iterations {
        let th = theta.theta(m);
        p.player1_payoffs_into(&y.w, &z.w, &mut buf);
        let bx = argmax(&buf).0;
        member_payoffs(p, &x.w, &z.w, false, &mut buf);
        let by = argmin(&buf).0;
        member_payoffs(p, &x.w, &y.w, true, &mut buf);
        let bz = argmin(&buf).0;
        x.push(bx, th);
        y.push(by, th);
        z.push(bz, th);
    }

    let (xs, ys, zs) = (x.simplex(), y.simplex(), z.simplex());
    let d = deviations(p, xs.weights(), ys.weights(), zs.weights());
    let lower = argmin(&p.pair_payoffs(xs.weights())?).1;
    let gap = (d.best[0] - d.value).max(d.value - d.best[1]).max(d.value - d.best[2]);
    Ok(FpTrace {
        iterations,
        empirical: vec![xs, ys, zs],
        value_estimate: d.best[0],
        converged_gap: gap,
        lower,
        upper: d.best[0],
    })
}

/// Fictitious play between player 1 and the synchronous coalition choosing
/// pure pairs `(j, k)`; estimates `V_S`.
pub fn sync_fp(p: &PayoffTensor3, iterations: u64, seed: u64) -> Result<FpTrace> {
    fp_2player(&p.coalition_matrix(), iterations, seed)
}

/// Outcome of [`verify_joint_nash`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointNashCheck {
    pub is_joint_ne: bool,
    /// Best improvement available to each player by a pure deviation:
    /// player 1's gain, and the reduction in player 1's payoff that player 2
    /// or 3 could achieve alone.
    pub best_deviations: [f64; 3],
}

/// Whether `(x, y, z)` is an equilibrium of the game in which players 2 and
/// 3 pool their winnings. Pure deviations suffice because the payoff is
/// linear in each player's mixture.
pub fn verify_joint_nash(
    p: &PayoffTensor3,
    x: &StrategySimplex,
    y: &StrategySimplex,
    z: &StrategySimplex,
    tol: f64,
) -> Result<JointNashCheck> {
    for s in [x, y, z] {
        if s.len() != p.n() {
            return Err(Error::DimensionMismatch {
                expected: p.n(),
                found: s.len(),
            });
        }
    }
    let d = deviations(p, x.weights(), y.weights(), z.weights());
    let best_deviations = [
        (d.best[0] - d.value).max(0.0),
        (d.value - d.best[1]).max(0.0),
        (d.value - d.best[2]).max(0.0),
    ];
    Ok(JointNashCheck {
        is_joint_ne: best_deviations.iter().all(|&g| g <= tol),
        best_deviations,
    })
}
