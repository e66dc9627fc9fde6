use serde::{Deserialize, Serialize};

use crate::game::project_in_place;

/// Feasible set of a minimization: a product of simplices or the unit box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Consecutive blocks of the given sizes, each a probability simplex.
    Simplices(Vec<usize>),
    /// `[0, 1]^n`.
    UnitBox(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Simplices(b) => b.iter().sum(),
            Domain::UnitBox(n) => *n,
        }
    }

    /// Euclidean projection onto the domain.
    pub fn project(&self, x: &mut [f64]) {
        match self {
            Domain::Simplices(blocks) => {
                let mut off = 0;
                for &b in blocks {
                    project_in_place(&mut x[off..off + b]);
                    off += b;
                }
            }
            Domain::UnitBox(_) => x.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0)),
        }
    }

    /// Sup-norm of `P(x - g) - x`, zero exactly at stationary points.
    pub fn projected_gradient_norm(&self, x: &[f64], g: &[f64]) -> f64 {
        let mut t: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        self.project(&mut t);
        t.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Marks coordinates that may move: those off the boundary plus those
    /// the gradient pulls inward.
    fn free_mask(&self, x: &[f64], g: &[f64], mask: &mut [bool]) {
        match self {
            Domain::UnitBox(_) => {
                for ((m, &xi), &gi) in mask.iter_mut().zip(x).zip(g) {
                    *m = !((xi <= 0.0 && gi > 0.0) || (xi >= 1.0 && gi < 0.0));
                }
            }
            Domain::Simplices(blocks) => {
                let mut off = 0;
                for &b in blocks {
                    let r = off..off + b;
                    let (mut s, mut c) = (0.0, 0usize);
                    for i in r.clone() {
                        if x[i] > 0.0 {
                            s += g[i];
                            c += 1;
                        }
                    }
                    let mean = if c > 0 { s / c as f64 } else { 0.0 };
                    for i in r {
                        mask[i] = x[i] > 0.0 || g[i] < mean;
                    }
                    off += b;
                }
            }
        }
    }

    /// Restricts `v` to the free coordinates and, for simplices, to the
    /// tangent space of each block.
    fn reduce(&self, v: &mut [f64], mask: &[bool]) {
        for (vi, &m) in v.iter_mut().zip(mask) {
            if !m {
                *vi = 0.0;
            }
        }
        if let Domain::Simplices(blocks) = self {
            let mut off = 0;
            for &b in blocks {
                let r = off..off + b;
                let c = mask[r.clone()].iter().filter(|&&m| m).count();
                if c > 0 {
                    let mean = v[r.clone()].iter().sum::<f64>() / c as f64;
                    for i in r {
                        if mask[i] {
                            v[i] -= mean;
                        }
                    }
                }
                off += b;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ProjectedGradient,
    #[default]
    QuasiNewton,
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pg" | "projected-gradient" => Ok(Method::ProjectedGradient),
            "qn" | "quasi-newton" | "bfgs" => Ok(Method::QuasiNewton),
            other => Err(crate::Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIter,
    LineSearchFailure,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub method: Method,
    pub max_iter: usize,
    pub grad_tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            method: Method::QuasiNewton,
            max_iter: 2000,
            grad_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub termination: Termination,
    pub iterations: usize,
}

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 50;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Step {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

/// Backtracking along the projected path `t -> P(x + t d)`, starting at `t0`.
fn search<F>(f: &mut F, domain: &Domain, x: &[f64], fx: f64, g: &[f64], d: &[f64], t0: f64) -> Option<Step>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let mut t = t0;
    let mut gt = vec![0.0; x.len()];
    for _ in 0..=MAX_HALVINGS {
        let mut xt: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + t * b).collect();
        domain.project(&mut xt);
        let s: Vec<f64> = xt.iter().zip(x).map(|(a, b)| a - b).collect();
        let slope = dot(g, &s);
        if slope < 0.0 {
            let ft = f(&xt, &mut gt);
            if ft <= fx + ARMIJO * slope {
                return Some(Step { x: xt, f: ft, g: gt });
            }
        }
        t *= 0.5;
    }
    None
}

/// Minimizes `f` over `domain` from `x0`. `f` returns the value and writes
/// the gradient into its second argument.
///
/// Both methods use projected steps with Armijo backtracking. The
/// quasi-Newton variant keeps a BFGS inverse-curvature estimate on the free
/// coordinates, resets it when the active set changes, and falls back to a
/// projected-gradient step when its direction fails.
pub fn minimize<F>(mut f: F, domain: &Domain, x0: &[f64], opts: &MinimizeOptions) -> Minimum
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = domain.dim();
    assert_eq!(x0.len(), n, "start point has the wrong dimension");
    let mut x = x0.to_vec();
    domain.project(&mut x);
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut pg_step = 1.0;
    let mut hess: Option<Vec<f64>> = None;
    let mut scale = 1.0;
    let mut mask = vec![true; n];
    let mut prev_mask = vec![true; n];

    let done = |x: Vec<f64>, value, termination, iterations| Minimum {
        point: x,
        value,
        termination,
        iterations,
    };
    for iter in 0..opts.max_iter {
        if !fx.is_finite() {
            return done(x, fx, Termination::LineSearchFailure, iter);
        }
        if n == 0 || domain.projected_gradient_norm(&x, &g) < opts.grad_tol {
            return done(x, fx, Termination::Converged, iter);
        }

        let mut step = None;
        if opts.method == Method::QuasiNewton {
            domain.free_mask(&x, &g, &mut mask);
            if mask != prev_mask {
                hess = None;
                prev_mask.copy_from_slice(&mask);
            }
            let h = hess.get_or_insert_with(|| identity(n, scale));
            let mut gr = g.clone();
            domain.reduce(&mut gr, &mask);
            let mut d: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &gr)).collect();
            domain.reduce(&mut d, &mask);
            if dot(&d, &gr) < 0.0 {
                step = search(&mut f, domain, &x, fx, &g, &d, 1.0);
            }
            match &step {
                Some(s) => {
                    let mut gn = s.g.clone();
                    domain.reduce(&mut gn, &mask);
                    let sv: Vec<f64> = s.x.iter().zip(&x).map(|(a, b)| a - b).collect();
                    let yv: Vec<f64> = gn.iter().zip(&gr).map(|(a, b)| a - b).collect();
                    bfgs_update(h, &sv, &yv, &mut scale);
                }
                None => hess = None,
            }
        }
        if step.is_none() {
            let d: Vec<f64> = g.iter().map(|v| -v).collect();
            step = search(&mut f, domain, &x, fx, &g, &d, pg_step);
            if let Some(s) = &step {
                let sv: Vec<f64> = s.x.iter().zip(&x).map(|(a, b)| a - b).collect();
                let yv: Vec<f64> = s.g.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy = dot(&sv, &yv);
                pg_step = if sy > 0.0 {
                    (dot(&sv, &sv) / sy).clamp(1e-12, 1e12)
                } else {
                    (pg_step * 2.0).min(1e12)
                };
            }
        }
        match step {
            Some(s) => {
                x = s.x;
                fx = s.f;
                g = s.g;
            }
            None => return done(x, fx, Termination::LineSearchFailure, iter),
        }
    }
    let term = if n == 0 || domain.projected_gradient_norm(&x, &g) < opts.grad_tol {
        Termination::Converged
    } else {
        Termination::MaxIter
    };
    done(x, fx, term, opts.max_iter)
}

fn identity(n: usize, scale: f64) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = scale;
    }
    h
}

/// Inverse BFGS update; skipped when the curvature condition fails.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], scale: &mut f64) {
    let n = s.len();
    let sy = dot(s, y);
    let yy = dot(y, y);
    if sy <= 1e-12 * dot(s, s).sqrt() * yy.sqrt() || yy == 0.0 {
        return;
    }
    *scale = sy / yy;
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let c = rho * (1.0 + rho * yhy);
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += c * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
