use serde::{Deserialize, Serialize};

use crate::fictitious::sync_fp;
use crate::game::{PayoffTensor3, Strategies, ValueReport};
use crate::opt::{solve_maximin, solve_minimax, SolverConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NashTarget {
    Skip,
    /// Report `V_N = 0` for symmetric zero-sum games, leave it empty otherwise.
    #[default]
    IfAvailable,
    /// Like `IfAvailable` but a non-symmetric tensor is an error.
    Required,
}

/// Which values [`solve_game`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Targets {
    pub nash: NashTarget,
    pub sync: bool,
    pub asynchronous: bool,
    /// Cross-check `V_S` with this many iterations of synchronous fictitious play.
    pub fp_iterations: Option<u64>,
}

impl Default for Targets {
    fn default() -> Self {
        Self {
            nash: NashTarget::IfAvailable,
            sync: true,
            asynchronous: true,
            fp_iterations: None,
        }
    }
}

/// Computes the requested coalition values of `tensor`.
pub fn solve_game(tensor: &PayoffTensor3, targets: &Targets, cfg: &SolverConfig) -> Result<ValueReport> {
    cfg.validate()?;
    let mut report = ValueReport::default();
    let sym = tensor.validate_symmetry();
    report.diagnostics.insert("n", tensor.n());
    report.diagnostics.insert("symmetry_violation", sym.max_violation);
    let symmetric = tensor.is_symmetric_zero_sum() || sym.pass;
    match targets.nash {
        NashTarget::Skip => {}
        NashTarget::IfAvailable if !symmetric => {
            report
                .diagnostics
                .insert("v_nash", "unavailable: tensor is not symmetric zero-sum");
        }
        NashTarget::Required if !symmetric => {
            return Err(Error::NotSymmetric {
                violation: sym.max_violation,
            });
        }
        _ => report.v_nash = Some(0.0),
    }

    let mut strategies = Strategies::default();
    if targets.sync {
        let out = solve_maximin(tensor, cfg)?;
        report.v_sync = Some(out.value);
        report.diagnostics.insert("sync_termination", out.termination);
        report.diagnostics.insert("sync_smoothed_value", out.smoothed_value);
        report.diagnostics.insert("sync_best_restart", out.best_restart);
        strategies.x = out.strategies.into_iter().next();
        strategies.sync_coalition = out.coalition;
        if let Some(iters) = targets.fp_iterations {
            let fp = sync_fp(tensor, iters, cfg.rng_seed)?;
            report.diagnostics.insert("sync_fp_value", fp.value_estimate);
            report.diagnostics.insert("sync_fp_gap", fp.converged_gap);
        }
    }
    if targets.asynchronous {
        let out = solve_minimax(tensor, cfg)?;
        report.v_async = Some(out.value);
        report.diagnostics.insert("async_termination", out.termination);
        report.diagnostics.insert("async_smoothed_value", out.smoothed_value);
        report.diagnostics.insert("async_best_restart", out.best_restart);
        let mut it = out.strategies.into_iter();
        strategies.y = it.next();
        strategies.z = it.next();
    }
    report.diagnostics.insert("restarts", cfg.restarts);
    report.strategies = strategies;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{classify_222, family222_tensor, rps, Family222, OddMan};

    #[test]
    fn rps_omi_report() {
        let (p, _) = rps(OddMan::Omi);
        let r = solve_game(
            &p,
            &Targets {
                fp_iterations: Some(20_000),
                ..Default::default()
            },
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(r.v_nash, Some(0.0));
        assert!((r.v_sync.unwrap() + 2.0 / 3.0).abs() < 1e-3, "{r:?}");
        assert!((r.v_async.unwrap() + 0.5).abs() < 1e-3, "{r:?}");
        assert!(r.ordering_holds(1e-3));
        assert!(r.strategies.y.is_some() && r.strategies.z.is_some() && r.strategies.x.is_some());
        assert!(!r.strategies.sync_coalition.is_empty());
        let fp = r.diagnostics.get("sync_fp_value").unwrap().as_f64().unwrap();
        assert!((fp + 2.0 / 3.0).abs() < 2e-2);
    }

    #[test]
    fn family222_omo_sync_value() {
        let p = family222_tensor(3.0, Family222::OmoLike).unwrap();
        let targets = Targets {
            asynchronous: false,
            ..Default::default()
        };
        let r = solve_game(&p, &targets, &SolverConfig::default()).unwrap();
        assert!((r.v_sync.unwrap() + 1.5).abs() < 1e-3);
        assert!((r.v_sync.unwrap() - classify_222(3.0, Family222::OmoLike).unwrap().v_sync).abs() < 1e-3);
        assert_eq!(r.v_async, None);
    }

    #[test]
    fn nash_on_asymmetric_tensor() {
        let p = PayoffTensor3::from_fn(2, |i, j, k| (i + 2 * j + 3 * k) as f64).unwrap();
        let only_nash = Targets {
            sync: false,
            asynchronous: false,
            ..Default::default()
        };
        let r = solve_game(&p, &only_nash, &SolverConfig::default()).unwrap();
        assert_eq!(r.v_nash, None);
        assert!(r.diagnostics.get("v_nash").is_some());
        let strict = Targets {
            nash: NashTarget::Required,
            ..only_nash
        };
        assert!(matches!(
            solve_game(&p, &strict, &SolverConfig::default()),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
