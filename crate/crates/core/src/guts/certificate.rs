use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::response::{value_a, value_b};
use super::{alpha_raw, golden_max, grad_alpha, GutsPoint};
use crate::game::PayoffTensor3;
use crate::{Error, Result};

/// Player 1's best threshold against coalition thresholds `(p2, p3)`.
///
/// `alpha` is concave in `p1`, so golden-section search finds the maximum.
pub fn max_over_p1(p2: f64, p3: f64) -> (f64, f64) {
    golden_max(|p1| alpha_raw(p1, p2, p3), 0.0, 1.0, 1e-12)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsyncCertificate {
    pub grid_n: usize,
    /// Smallest value over the grid of player 1's best return.
    pub min_of_max: f64,
    pub argmin: (f64, f64),
}

/// Minimizes `max_p1 alpha` over a `grid_n x grid_n` grid of coalition thresholds on `[0, 1]^2`.
pub fn async_certificate(grid_n: usize) -> Result<AsyncCertificate> {
    if grid_n < 100 {
        return Err(Error::invalid(format!("grid_n must be at least 100, got {grid_n}")));
    }
    let step = 1.0 / (grid_n - 1) as f64;
    let rows: Vec<(f64, usize)> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let p2 = i as f64 * step;
            (0..grid_n)
                .map(|j| (max_over_p1(p2, j as f64 * step).1, j))
                .fold((f64::INFINITY, 0), |b, c| if c.0 < b.0 { c } else { b })
        })
        .collect();
    let (i, (min, j)) = rows
        .into_iter()
        .enumerate()
        .fold((0, (f64::INFINITY, 0)), |b, c| if c.1 .0 < b.1 .0 { c } else { b });
    Ok(AsyncCertificate {
        grid_n,
        min_of_max: min,
        argmin: (i as f64 * step, j as f64 * step),
    })
}

/// Guts restricted to thresholds `0, 1/n, ..., 1 - 1/n`.
pub fn discretize_guts(n: usize) -> Result<PayoffTensor3> {
    if n < 2 {
        return Err(Error::invalid(format!("discretization needs n >= 2, got {n}")));
    }
    let h = 1.0 / n as f64;
    let t = PayoffTensor3::from_fn(n, |i, j, k| alpha_raw(i as f64 * h, j as f64 * h, k as f64 * h))?;
    t.into_symmetric()
}

/// Largest Euclidean norm of the gradient of `alpha` over a `points^3` grid.
pub fn max_gradient_norm(points: usize) -> f64 {
    let points = points.max(2);
    let step = 1.0 / (points - 1) as f64;
    let mut best: f64 = 0.0;
    for i in 0..points {
        for j in 0..points {
            for k in 0..points {
                let g = grad_alpha(GutsPoint {
                    p1: i as f64 * step,
                    p2: j as f64 * step,
                    p3: k as f64 * step,
                });
                best = best.max(g.iter().map(|x| x * x).sum::<f64>().sqrt());
            }
        }
    }
    best
}

/// A row of the best-response curve dump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p1: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
}

/// Values of the two coalition replies on a uniform `p1` grid.
pub fn alpha_curves(v: f64, points: usize) -> Result<Vec<CurvePoint>> {
    if points < 2 {
        return Err(Error::invalid("need at least two curve points"));
    }
    super::best_response(0.0, v)?;
    Ok((0..points)
        .map(|i| {
            let p1 = i as f64 / (points - 1) as f64;
            CurvePoint {
                p1,
                alpha_a: value_a(p1, v),
                alpha_b: value_b(p1, v),
            }
        })
        .collect())
}
