use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::minimize::{minimize, Domain, Method, MinimizeOptions, Minimum, Termination};
use super::objective::{MatrixObjective, MaximinObjective, MinimaxObjective};
use super::smoothing::SmoothingSpec;
use crate::game::{project_in_place, PairWeight, PayoffMatrix2, PayoffTensor3, StrategySimplex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintMode {
    /// Exact projection onto the simplices after every step.
    #[default]
    Hard,
    /// Box bounds on all but the last weight of each strategy plus a
    /// penalty on the excess of their sum over one.
    Soft,
}

impl std::str::FromStr for ConstraintMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hard" => Ok(Self::Hard),
            "soft" => Ok(Self::Soft),
            _ => Err(Error::invalid(format!("unknown constraint mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub smoothing: SmoothingSpec,
    pub constraint_mode: ConstraintMode,
    pub penalty_k: f64,
    pub penalty_exponent: f64,
    pub method: Method,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    pub adaptive_smoothing: bool,
    pub epsilon_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            smoothing: SmoothingSpec::default(),
            constraint_mode: ConstraintMode::Hard,
            penalty_k: 1e4,
            penalty_exponent: 2.0,
            method: Method::QuasiNewton,
            max_iter: 2000,
            grad_tol: 1e-9,
            restarts: 20,
            rng_seed: 0,
            adaptive_smoothing: false,
            epsilon_max: 1e-1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.smoothing.validate()?;
        if !(self.penalty_k > 0.0 && self.penalty_k.is_finite()) {
            return Err(Error::OutOfRange {
                name: "penalty_k",
                value: self.penalty_k,
            });
        }
        if !(self.penalty_exponent >= 1.0 && self.penalty_exponent.is_finite()) {
            return Err(Error::OutOfRange {
                name: "penalty_exponent",
                value: self.penalty_exponent,
            });
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.grad_tol.is_nan() || self.grad_tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "grad_tol",
                value: self.grad_tol,
            });
        }
        if self.epsilon_max.is_nan() || self.epsilon_max <= 0.0 {
            return Err(Error::OutOfRange {
                name: "epsilon_max",
                value: self.epsilon_max,
            });
        }
        Ok(())
    }

    fn options(&self) -> MinimizeOptions {
        MinimizeOptions {
            method: self.method,
            max_iter: self.max_iter,
            grad_tol: self.grad_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub seed: u64,
    /// Exact (unsmoothed) objective at the final point.
    pub value: f64,
    pub smoothed_value: f64,
    pub termination: Termination,
    pub iterations: usize,
    /// Times the smoothing was temporarily coarsened after a failed line search.
    pub smoothing_bumps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    /// Exact objective at the best restart's final point.
    pub value: f64,
    pub smoothed_value: f64,
    /// `[x]` for maximin problems, `[y, z]` for minimax problems.
    pub strategies: Vec<StrategySimplex>,
    pub termination: Termination,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub restarts: Vec<RestartRecord>,
    /// For maximin solves: the surrogate's weights on pure coalition pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coalition: Vec<PairWeight>,
}

/// A minimization over a product of simplices.
trait Problem: Sync {
    fn blocks(&self) -> Vec<usize>;
    fn smoothed(&self, spec: SmoothingSpec, x: &[f64], g: &mut [f64]) -> f64;
    fn exact(&self, x: &[f64]) -> f64;
}

struct Minimax<'a>(&'a PayoffTensor3);

impl Problem for Minimax<'_> {
    fn blocks(&self) -> Vec<usize> {
        vec![self.0.n(); 2]
    }

    fn smoothed(&self, spec: SmoothingSpec, x: &[f64], g: &mut [f64]) -> f64 {
        let n = self.0.n();
        let (gy, gz) = g.split_at_mut(n);
        MinimaxObjective::new(self.0, spec).value_grad(&x[..n], &x[n..], gy, gz)
    }

    fn exact(&self, x: &[f64]) -> f64 {
        let n = self.0.n();
        MinimaxObjective::new(self.0, SmoothingSpec::None).exact(&x[..n], &x[n..])
    }
}

/// Minimizes `-Phi`.
struct Maximin<'a>(&'a PayoffTensor3);

impl Problem for Maximin<'_> {
    fn blocks(&self) -> Vec<usize> {
        vec![self.0.n()]
    }

    fn smoothed(&self, spec: SmoothingSpec, x: &[f64], g: &mut [f64]) -> f64 {
        let f = MaximinObjective::new(self.0, spec).value_grad(x, g);
        g.iter_mut().for_each(|v| *v = -*v);
        -f
    }

    fn exact(&self, x: &[f64]) -> f64 {
        -MaximinObjective::new(self.0, SmoothingSpec::None).exact(x)
    }
}

struct MatrixValue<'a>(&'a PayoffMatrix2);

impl Problem for MatrixValue<'_> {
    fn blocks(&self) -> Vec<usize> {
        vec![self.0.cols()]
    }

    fn smoothed(&self, spec: SmoothingSpec, x: &[f64], g: &mut [f64]) -> f64 {
        MatrixObjective::new(self.0, spec).value_grad(x, g)
    }

    fn exact(&self, x: &[f64]) -> f64 {
        MatrixObjective::new(self.0, SmoothingSpec::None).exact(x)
    }
}

/// Maps the reduced soft-mode coordinates `u` (all but the last weight of
/// each block) to full strategy weights.
fn expand(blocks: &[usize], u: &[f64], x: &mut [f64]) {
    let (mut iu, mut ix) = (0, 0);
    for &b in blocks {
        let part = &u[iu..iu + b - 1];
        x[ix..ix + b - 1].copy_from_slice(part);
        x[ix + b - 1] = 1.0 - part.iter().sum::<f64>();
        iu += b - 1;
        ix += b;
    }
}

fn reduce_start(blocks: &[usize], x: &[f64]) -> Vec<f64> {
    let mut u = Vec::new();
    let mut ix = 0;
    for &b in blocks {
        u.extend_from_slice(&x[ix..ix + b - 1]);
        ix += b;
    }
    u
}

/// Runs one local minimization, in whichever constraint mode the config asks for.
fn local_solve(p: &dyn Problem, cfg: &SolverConfig, spec: SmoothingSpec, x0: &[f64]) -> Minimum {
    let blocks = p.blocks();
    let opts = cfg.options();
    match cfg.constraint_mode {
        ConstraintMode::Hard => minimize(|x, g| p.smoothed(spec, x, g), &Domain::Simplices(blocks), x0, &opts),
        ConstraintMode::Soft => {
            let dim = x0.len();
            let u0 = reduce_start(&blocks, x0);
            let (k, e) = (cfg.penalty_k, cfg.penalty_exponent);
            let mut x = vec![0.0; dim];
            let mut gx = vec![0.0; dim];
            let m = minimize(
                |u, gu| {
                    expand(&blocks, u, &mut x);
                    let mut f = p.smoothed(spec, &x, &mut gx);
                    let (mut iu, mut ix) = (0, 0);
                    for &b in &blocks {
                        let excess = (u[iu..iu + b - 1].iter().sum::<f64>() - 1.0).max(0.0);
                        f += k * excess.powf(e);
                        let dpen = if excess > 0.0 {
                            k * e * excess.powf(e - 1.0)
                        } else {
                            0.0
                        };
                        let last = gx[ix + b - 1];
                        for t in 0..b - 1 {
                            gu[iu + t] = gx[ix + t] - last + dpen;
                        }
                        iu += b - 1;
                        ix += b;
                    }
                    f
                },
                &Domain::UnitBox(u0.len()),
                &u0,
                &opts,
            );
            let mut point = vec![0.0; dim];
            expand(&blocks, &m.point, &mut point);
            Minimum { point, ..m }
        }
    }
}

fn run_restart(p: &dyn Problem, cfg: &SolverConfig, index: usize) -> (RestartRecord, Vec<f64>) {
    let seed = cfg.rng_seed.wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = p.blocks();
    let x0: Vec<f64> = blocks
        .iter()
        .flat_map(|&b| StrategySimplex::sample_uniform(b, &mut rng).into_inner())
        .collect();

    let mut m = local_solve(p, cfg, cfg.smoothing, &x0);
    let mut bumps = 0;
    if cfg.adaptive_smoothing {
        let mut eps = cfg.smoothing.epsilon();
        while m.termination == Termination::LineSearchFailure {
            let Some(e) = eps.filter(|e| *e < cfg.epsilon_max) else {
                break;
            };
            let coarse = (e * 10.0).min(cfg.epsilon_max);
            eps = Some(coarse);
            bumps += 1;
            let rough = local_solve(p, cfg, SmoothingSpec::Softmax { epsilon: coarse }, &m.point);
            let iterations = m.iterations + rough.iterations;
            m = local_solve(p, cfg, cfg.smoothing, &rough.point);
            m.iterations += iterations;
        }
    }

    let mut point = m.point;
    Domain::Simplices(blocks).project(&mut point);
    let mut g = vec![0.0; point.len()];
    let record = RestartRecord {
        index,
        seed,
        value: p.exact(&point),
        smoothed_value: p.smoothed(cfg.smoothing, &point, &mut g),
        termination: m.termination,
        iterations: m.iterations,
        smoothing_bumps: bumps,
    };
    (record, point)
}

/// Best-of-restarts minimization; ties go to the lowest restart index.
fn multistart(p: &dyn Problem, cfg: &SolverConfig) -> Result<(Vec<RestartRecord>, usize, Vec<f64>)> {
    cfg.validate()?;
    let runs: Vec<(RestartRecord, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(p, cfg, i))
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, (r, _))| match best {
            Some((_, v)) if r.value.is_nan() || r.value >= v => best,
            _ if r.value.is_nan() => best,
            _ => Some((i, r.value)),
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let point = runs[best].1.clone();
    Ok((runs.into_iter().map(|(r, _)| r).collect(), best, point))
}

fn strategies(blocks: &[usize], point: &[f64]) -> Vec<StrategySimplex> {
    let mut out = Vec::new();
    let mut off = 0;
    for &b in blocks {
        let mut w = point[off..off + b].to_vec();
        project_in_place(&mut w);
        out.push(StrategySimplex::new(w).expect("projected point is feasible"));
        off += b;
    }
    out
}

fn outcome(p: &dyn Problem, records: Vec<RestartRecord>, best: usize, point: &[f64], sign: f64) -> SolveOutcome {
    let r = &records[best];
    SolveOutcome {
        value: sign * r.value,
        smoothed_value: sign * r.smoothed_value,
        strategies: strategies(&p.blocks(), point),
        termination: r.termination,
        restarts_used: records.len(),
        best_restart: best,
        restarts: records,
        coalition: Vec::new(),
    }
}

/// Estimates `V_S = max_x min_jk sum_i x_i P_ijk`.
///
/// Restart records hold the minimized quantity `-Phi`; the outcome's values
/// are in player 1's sense.
pub fn solve_maximin(tensor: &PayoffTensor3, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let p = Maximin(tensor);
    let (records, best, point) = multistart(&p, cfg)?;
    let mut out = outcome(&p, records, best, &point, -1.0);
    let n = tensor.n();
    let weights = MaximinObjective::new(tensor, cfg.smoothing).pair_weights(out.strategies[0].weights());
    out.coalition = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 1e-6)
        .map(|(idx, &w)| PairWeight {
            j: idx / n,
            k: idx % n,
            weight: w,
        })
        .collect();
    Ok(out)
}

/// Estimates `V_A = min_{y,z} max_i sum_jk y_j z_k P_ijk`.
pub fn solve_minimax(tensor: &PayoffTensor3, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let p = Minimax(tensor);
    let (records, best, point) = multistart(&p, cfg)?;
    Ok(outcome(&p, records, best, &point, 1.0))
}

/// Value of a two-player matrix game, `min_y max_i (M y)_i`.
pub fn solve_matrix_value(matrix: &PayoffMatrix2, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let p = MatrixValue(matrix);
    let (records, best, point) = multistart(&p, cfg)?;
    Ok(outcome(&p, records, best, &point, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{odd_man_tensor, OddMan};
    use crate::game::random_symmetric_tensor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            penalty_k: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            smoothing: SmoothingSpec::Softmax { epsilon: -1.0 },
            ..Default::default()
        };
        assert!(solve_minimax(&odd_man_tensor(2, OddMan::Omo), &bad).is_err());
    }

    #[test]
    fn config_file_defaults() {
        let c: SolverConfig = serde_json::from_str(r#"{"restarts": 3, "constraint_mode": "soft"}"#).unwrap();
        assert_eq!(c.restarts, 3);
        assert_eq!(c.constraint_mode, ConstraintMode::Soft);
        assert_eq!(c.smoothing, SmoothingSpec::Softmax { epsilon: 1e-4 });
    }

    #[test]
    fn rps_omi_sync_value() {
        let t = odd_man_tensor(3, OddMan::Omi);
        let cfg = SolverConfig {
            restarts: 5,
            ..Default::default()
        };
        let out = solve_maximin(&t, &cfg).unwrap();
        assert_abs_diff_eq!(out.value, -2.0 / 3.0, epsilon = 1e-4);
        for w in out.strategies[0].weights() {
            assert_abs_diff_eq!(*w, 1.0 / 3.0, epsilon = 1e-3);
        }
        let mass: f64 = out.coalition.iter().map(|p| p.weight).sum();
        assert!(mass > 0.99);
    }

    #[test]
    fn odds_evens_values() {
        let omo = odd_man_tensor(2, OddMan::Omo);
        let omi = odd_man_tensor(2, OddMan::Omi);
        let cfg = SolverConfig::default();
        assert_abs_diff_eq!(solve_maximin(&omo, &cfg).unwrap().value, -1.0, epsilon = 1e-4);
        let out = solve_minimax(&omi, &cfg).unwrap();
        assert_abs_diff_eq!(out.value, -1.0, epsilon = 1e-4);
        let (y, z) = (out.strategies[0].weights()[0], out.strategies[1].weights()[0]);
        assert!(
            (y - 0.0).abs() + (z - 1.0).abs() < 1e-3 || (y - 1.0).abs() + z.abs() < 1e-3,
            "{y} {z}"
        );
    }

    #[test]
    fn rps_omo_async_value() {
        let t = odd_man_tensor(3, OddMan::Omo);
        let cfg = SolverConfig {
            restarts: 10,
            ..Default::default()
        };
        assert_abs_diff_eq!(solve_minimax(&t, &cfg).unwrap().value, 0.0, epsilon = 1e-3);
    }

    #[test]
    fn soft_constraints_reach_the_same_values() {
        let t = odd_man_tensor(3, OddMan::Omi);
        let cfg = SolverConfig {
            constraint_mode: ConstraintMode::Soft,
            restarts: 10,
            ..Default::default()
        };
        let s = solve_maximin(&t, &cfg).unwrap();
        assert_abs_diff_eq!(s.value, -2.0 / 3.0, epsilon = 1e-3);
        let a = solve_minimax(&t, &cfg).unwrap();
        assert_abs_diff_eq!(a.value, -0.5, epsilon = 1e-3);
    }

    #[test]
    fn projected_gradient_method() {
        let t = odd_man_tensor(3, OddMan::Omi);
        let cfg = SolverConfig {
            method: Method::ProjectedGradient,
            max_iter: 20_000,
            restarts: 10,
            ..Default::default()
        };
        assert_abs_diff_eq!(solve_maximin(&t, &cfg).unwrap().value, -2.0 / 3.0, epsilon = 1e-3);
        assert_abs_diff_eq!(solve_minimax(&t, &cfg).unwrap().value, -0.5, epsilon = 1e-3);
    }

    #[test]
    fn deterministic() {
        let t = random_symmetric_tensor(4, 9).unwrap();
        let cfg = SolverConfig {
            restarts: 6,
            rng_seed: 77,
            ..Default::default()
        };
        assert_eq!(solve_minimax(&t, &cfg).unwrap(), solve_minimax(&t, &cfg).unwrap());
        let out = solve_minimax(&t, &cfg).unwrap();
        assert_eq!(
            out.restarts.iter().map(|r| r.seed).collect::<Vec<_>>(),
            (77..83).collect::<Vec<_>>()
        );
    }

    #[test]
    fn adaptive_smoothing_runs() {
        let t = random_symmetric_tensor(5, 3).unwrap();
        let cfg = SolverConfig {
            smoothing: SmoothingSpec::Softmax { epsilon: 1e-7 },
            adaptive_smoothing: true,
            restarts: 4,
            ..Default::default()
        };
        let out = solve_minimax(&t, &cfg).unwrap();
        let plain = solve_minimax(
            &t,
            &SolverConfig {
                restarts: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.value >= plain.value - 1e-3);
    }

    #[test]
    fn matrix_value_of_pennies() {
        let m = PayoffMatrix2::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let out = solve_matrix_value(
            &m,
            &SolverConfig {
                restarts: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_abs_diff_eq!(out.value, 0.0, epsilon = 1e-4);
    }
}
