use serde::{Deserialize, Serialize};

use super::{alpha_raw, golden_max};
use crate::{Error, Result};

/// Largest `|V|` for which the two-atom best response is trusted.
///
/// The two families of coalition replies and the ordering of their values
/// past the crossing were checked against brute-force grid minimization up
/// to `|V| = 0.3`.
pub const V_SMALL_LIMIT: f64 = 0.25;

/// Coalition best response to `p1` in the game with payoff `alpha + V beta`.
///
/// Two candidate replies compete: both coalition members on the threshold
/// `p3a`, or one member always folding (`p2 = 0`) and the other on `p3b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub p1: f64,
    pub v: f64,
    pub value_a: f64,
    pub value_b: f64,
    pub argmin_a: (f64, f64),
    pub argmin_b: (f64, f64),
    /// `min(value_a, value_b)`.
    pub r: f64,
}

fn check_v(v: f64) -> Result<()> {
    if !v.is_finite() || v.abs() > V_SMALL_LIMIT {
        return Err(Error::ValueNotSmall { v });
    }
    Ok(())
}

pub(crate) fn p3a(p1: f64, v: f64) -> f64 {
    let s = (2.0 - v) * p1;
    (1.0 + v) / ((s * s + 6.0 * (1.0 + v)).sqrt() - s)
}

pub(crate) fn p3b(p1: f64, v: f64) -> f64 {
    ((3.0 * p1 * p1 + 1.0 + v) / 3.0).sqrt()
}

pub(crate) fn value_a(p1: f64, v: f64) -> f64 {
    let q = p3a(p1, v);
    (q - p1) * (4.0 * q * q - 2.0) + v * (2.0 - p1 - 2.0 * q + 2.0 * p1 * q * q)
}

pub(crate) fn value_b(p1: f64, v: f64) -> f64 {
    let q = p3b(p1, v);
    2.0 * p1 - q + q * q * q - 3.0 * p1 * p1 * q + v * (2.0 - p1 - q)
}

pub fn best_response(p1: f64, v: f64) -> Result<BestResponse> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::OutOfRange { name: "p1", value: p1 });
    }
    check_v(v)?;
    let (qa, qb) = (p3a(p1, v), p3b(p1, v));
    let (va, vb) = (value_a(p1, v), value_b(p1, v));
    Ok(BestResponse {
        p1,
        v,
        value_a: va,
        value_b: vb,
        argmin_a: (qa, qa),
        argmin_b: (0.0, qb),
        r: va.min(vb),
    })
}

/// Synchronous value `T(V)` of the game `alpha + V beta` and player 1's optimal threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncValue {
    pub value: f64,
    pub p1: f64,
}

/// Brackets of upward crossings of `value_a - value_b` on a uniform grid.
fn upward_crossings(v: f64, points: usize) -> Vec<(f64, f64)> {
    let step = 1.0 / (points - 1) as f64;
    let d = |p: f64| value_a(p, v) - value_b(p, v);
    let mut out = Vec::new();
    let mut prev = d(0.0);
    for i in 1..points {
        let p = i as f64 * step;
        let cur = d(p);
        if prev < 0.0 && cur >= 0.0 {
            out.push(((i - 1) as f64 * step, p));
        }
        prev = cur;
    }
    out
}

/// Maximizes `min(value_a, value_b)` over `p1`; the maximum sits where the
/// rising branch `a` meets the falling branch `b`.
pub fn sync_value(v: f64) -> Result<SyncValue> {
    check_v(v)?;
    let mut brackets = upward_crossings(v, 1001);
    if brackets.is_empty() {
        brackets = upward_crossings(v, 100_001);
    }
    let r = |p: f64| value_a(p, v).min(value_b(p, v));
    let best = brackets
        .into_iter()
        .map(|(lo, hi)| golden_max(r, lo, hi, 1e-14))
        .fold(None, |best: Option<(f64, f64)>, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .ok_or(Error::NoCrossing)?;
    // past the crossing the double-threshold reply must stay the dearer one
    let (p_opt, value) = best;
    for i in 0..=200 {
        let p = p_opt + (1.0 - p_opt) * i as f64 / 200.0;
        if value_a(p, v) < value_b(p, v) - 1e-12 {
            return Err(Error::ValueNotSmall { v });
        }
    }
    Ok(SyncValue { value, p1: p_opt })
}

/// Player 1's optimal one-shot threshold together with the coalition's
/// optimal mixture of its two best replies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoalitionMixture {
    pub p1_opt: f64,
    pub value: f64,
    pub atom_a: (f64, f64),
    pub atom_b: (f64, f64),
    /// Weight on `atom_a`; `atom_b` gets `1 - y`.
    pub y: f64,
    /// Slopes of the two reply values at `p1_opt`.
    pub slope_a: f64,
    pub slope_b: f64,
}

impl CoalitionMixture {
    /// Player 1's payoff against the mixture as a function of its threshold.
    pub fn psi(&self, p1: f64) -> f64 {
        self.y * alpha_raw(p1, self.atom_a.0, self.atom_a.1)
            + (1.0 - self.y) * alpha_raw(p1, self.atom_b.0, self.atom_b.1)
    }
}

/// The weight `y = |b'| / (|a'| + |b'|)` balances the slopes so player 1
/// cannot gain by moving its threshold.
pub fn optimal_coalition_mixture() -> Result<CoalitionMixture> {
    let sv = sync_value(0.0)?;
    let p = sv.p1;
    let h = 1e-6;
    let slope_a = (value_a(p + h, 0.0) - value_a(p - h, 0.0)) / (2.0 * h);
    let slope_b = (value_b(p + h, 0.0) - value_b(p - h, 0.0)) / (2.0 * h);
    if slope_a * slope_b >= 0.0 {
        return Err(Error::DerivativeSigns { a: slope_a, b: slope_b });
    }
    let y = slope_b.abs() / (slope_a.abs() + slope_b.abs());
    let qa = p3a(p, 0.0);
    Ok(CoalitionMixture {
        p1_opt: p,
        value: sv.value,
        atom_a: (qa, qa),
        atom_b: (0.0, p3b(p, 0.0)),
        y,
        slope_a,
        slope_b,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursiveTrace {
    /// `T(0), T(T(0)), ...`
    pub values: Vec<f64>,
    pub p1_path: Vec<f64>,
    pub converged: bool,
    pub v_star: f64,
}

/// Iterates `V <- T(V)` from zero until successive values differ by less than `tol`.
pub fn recursive_fixed_point(max_rounds: usize, tol: f64) -> Result<RecursiveTrace> {
    if max_rounds == 0 {
        return Err(Error::invalid("max_rounds must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
        });
    }
    let mut values = Vec::new();
    let mut p1_path = Vec::new();
    let mut v = 0.0;
    let mut converged = false;
    for round in 0..max_rounds {
        let sv = sync_value(v)?;
        if let Some(&prev) = values.last() {
            if sv.value > prev + 1e-12 {
                return Err(Error::NonMonotone {
                    round,
                    prev,
                    next: sv.value,
                });
            }
        }
        values.push(sv.value);
        p1_path.push(sv.p1);
        let delta = (sv.value - v).abs();
        v = sv.value;
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(RecursiveTrace {
        values,
        p1_path,
        converged,
        v_star: v,
    })
}
