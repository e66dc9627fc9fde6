//! Continuous three-player Guts poker.
//!
//! Each player holds a hand uniform on `[0, 1]` and keeps it when it beats a
//! threshold `p_i`. [`alpha`] is player 1's one-round expected return for
//! thresholds `(p1, p2, p3)`, [`beta`] the expected stakes carried into the
//! next round.

mod certificate;
mod response;

pub use certificate::{
    alpha_curves, async_certificate, discretize_guts, max_gradient_norm, max_over_p1, AsyncCertificate, CurvePoint,
};
pub use response::{
    best_response, optimal_coalition_mixture, recursive_fixed_point, sync_value, BestResponse, CoalitionMixture,
    RecursiveTrace, SyncValue, V_SMALL_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Threshold triple; `p2` and `p3` belong to the coalition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GutsPoint {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl GutsPoint {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("p3", p3)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(Self { p1, p2, p3 })
    }
}

/// Polynomial pieces of `alpha` for `p2 <= p3`, named by where `p1` sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `p1 <= p2 <= p3`
    Low,
    /// `p2 < p1 < p3`
    Middle,
    /// `p2 <= p3 <= p1`
    High,
}

impl Branch {
    /// Branch for an already canonical point (`p2 <= p3`).
    pub fn of(p1: f64, p2: f64, p3: f64) -> Self {
        debug_assert!(p2 <= p3);
        if p1 <= p2 {
            Branch::Low
        } else if p1 < p3 {
            Branch::Middle
        } else {
            Branch::High
        }
    }
}

/// One polynomial piece of `alpha`, evaluated without checking the ordering.
pub fn alpha_on_branch(b: Branch, p1: f64, p2: f64, p3: f64) -> f64 {
    let base = 2.0 * p1 - p2 - p3;
    match b {
        Branch::Low => base + p3 * p3 * p3 + 3.0 * p2 * p2 * p3 - 4.0 * p1 * p2 * p3,
        Branch::Middle => base + p3 * p3 * p3 - 3.0 * p1 * p1 * p3 + 2.0 * p1 * p2 * p3,
        Branch::High => base - 2.0 * p1 * p1 * p1 + 2.0 * p1 * p2 * p3,
    }
}

/// Gradient of one polynomial piece.
pub fn grad_alpha_on_branch(b: Branch, p1: f64, p2: f64, p3: f64) -> [f64; 3] {
    match b {
        Branch::Low => [
            2.0 - 4.0 * p2 * p3,
            -1.0 + 6.0 * p2 * p3 - 4.0 * p1 * p3,
            -1.0 + 3.0 * p3 * p3 + 3.0 * p2 * p2 - 4.0 * p1 * p2,
        ],
        Branch::Middle => [
            2.0 - 6.0 * p1 * p3 + 2.0 * p2 * p3,
            -1.0 + 2.0 * p1 * p3,
            -1.0 + 3.0 * p3 * p3 - 3.0 * p1 * p1 + 2.0 * p1 * p2,
        ],
        Branch::High => [
            2.0 - 6.0 * p1 * p1 + 2.0 * p2 * p3,
            -1.0 + 2.0 * p1 * p3,
            -1.0 + 2.0 * p1 * p2,
        ],
    }
}

/// One-round expected return to player 1.
pub fn alpha(p: GutsPoint) -> f64 {
    alpha_raw(p.p1, p.p2, p.p3)
}

pub(crate) fn alpha_raw(p1: f64, p2: f64, p3: f64) -> f64 {
    let (a, b) = if p2 <= p3 { (p2, p3) } else { (p3, p2) };
    alpha_on_branch(Branch::of(p1, a, b), p1, a, b)
}

/// Gradient of [`alpha`].
pub fn grad_alpha(p: GutsPoint) -> [f64; 3] {
    let GutsPoint { p1, p2, p3 } = p;
    if p2 <= p3 {
        grad_alpha_on_branch(Branch::of(p1, p2, p3), p1, p2, p3)
    } else {
        let [g1, g2, g3] = grad_alpha_on_branch(Branch::of(p1, p3, p2), p1, p3, p2);
        [g1, g3, g2]
    }
}

/// Expected stakes multiplier for the next round.
pub fn beta(p: GutsPoint) -> f64 {
    beta_raw(p.p1, p.p2, p.p3)
}

pub(crate) fn beta_raw(p1: f64, p2: f64, p3: f64) -> f64 {
    2.0 - p1 - p2 - p3 + 2.0 * p1 * p2 * p3
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    // the endpoints are candidates when the maximum sits on the boundary
    [(lo, f(lo)), (0.5 * (lo + hi), f(0.5 * (lo + hi))), (hi, f(hi))]
        .into_iter()
        .fold(
            (f64::NAN, f64::NEG_INFINITY),
            |best, (x, v)| if v > best.1 { (x, v) } else { best },
        )
}
