use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::game::random_symmetric_tensor;
use crate::opt::{solve_maximin, solve_minimax, SolverConfig};
use crate::{Error, Result};

/// Solver slack allowed on `v_async - v_sync >= 0` and `v_async <= 0`.
pub const GAP_SLACK: f64 = 2e-3;

/// `theta` is left undefined when `|v_sync|` is below this.
pub const THETA_NULL_BELOW: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub sync_solver: SolverConfig,
    pub async_solver: SolverConfig,
    pub gap_bin_width: f64,
    pub theta_bin_width: f64,
    pub samples_csv: Option<PathBuf>,
    pub histogram_csv: Option<PathBuf>,
    pub report_json: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            n: 4,
            trials: 300,
            master_seed: 0,
            sync_solver: SolverConfig::default(),
            async_solver: SolverConfig::default(),
            gap_bin_width: 0.02,
            theta_bin_width: 0.05,
            samples_csv: None,
            histogram_csv: None,
            report_json: None,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::invalid("game size must be at least 1"));
        }
        for (name, w) in [
            ("gap_bin_width", self.gap_bin_width),
            ("theta_bin_width", self.theta_bin_width),
        ] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::OutOfRange { name, value: w });
            }
        }
        self.sync_solver.validate()?;
        self.async_solver.validate()
    }
}

/// One random game's two coalition values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSample {
    pub trial: usize,
    pub game_seed: u64,
    pub v_sync: f64,
    pub v_async: f64,
    /// `v_async - v_sync`.
    pub gap: f64,
    /// `v_async / v_sync`; `None` when `v_sync` is numerically zero.
    pub theta: Option<f64>,
}

impl GapSample {
    pub fn new(trial: usize, game_seed: u64, v_sync: f64, v_async: f64) -> Self {
        let theta = (v_sync.abs() >= THETA_NULL_BELOW).then(|| v_async / v_sync);
        Self {
            trial,
            game_seed,
            v_sync,
            v_async,
            gap: v_async - v_sync,
            theta,
        }
    }

    /// `v_sync - slack <= v_async <= slack`.
    pub fn check(&self, slack: f64) -> Result<()> {
        if self.gap < -slack {
            return Err(Error::invalid(format!(
                "trial {}: v_async {} below v_sync {}",
                self.trial, self.v_async, self.v_sync
            )));
        }
        if self.v_async > slack {
            return Err(Error::invalid(format!(
                "trial {}: v_async {} above zero",
                self.trial, self.v_async
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub game_seed: u64,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for fewer than two values.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        };
        Self { count, mean, std }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub gap: Summary,
    pub theta: Summary,
    /// Pearson correlation between `gap` and `v_sync`.
    pub correlation_gap_v_sync: Option<f64>,
    pub gap_histogram: Vec<Bin>,
    pub theta_histogram: Vec<Bin>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub samples: Vec<GapSample>,
    pub failures: Vec<TrialFailure>,
    pub stats: CampaignStats,
}

/// Counts of `values` in bins `[k w, (k+1) w)`, contiguous from the lowest
/// to the highest occupied bin.
pub fn histogram(values: &[f64], width: f64) -> Vec<Bin> {
    let idx: Vec<i64> = values
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| (v / width).floor() as i64)
        .collect();
    let (Some(&lo), Some(&hi)) = (idx.iter().min(), idx.iter().max()) else {
        return Vec::new();
    };
    let mut bins: Vec<Bin> = (lo..=hi)
        .map(|k| Bin {
            lo: k as f64 * width,
            hi: (k + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for k in idx {
        bins[(k - lo) as usize].count += 1;
    }
    bins
}

pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ma, mb) = (Summary::of(a).mean, Summary::of(b).mean);
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    let d = (saa * sbb).sqrt();
    (d > 0.0).then(|| sab / d)
}

fn run_trial(cfg: &CampaignConfig, trial: usize) -> std::result::Result<GapSample, TrialFailure> {
    let game_seed = cfg.master_seed.wrapping_add(trial as u64);
    let fail = |e: Error| TrialFailure {
        trial,
        game_seed,
        message: e.to_string(),
    };
    let tensor = random_symmetric_tensor(cfg.n, game_seed).map_err(fail)?;
    let v_sync = solve_maximin(&tensor, &cfg.sync_solver).map_err(fail)?.value;
    let v_async = solve_minimax(&tensor, &cfg.async_solver).map_err(fail)?.value;
    let sample = GapSample::new(trial, game_seed, v_sync, v_async);
    sample.check(GAP_SLACK).map_err(fail)?;
    Ok(sample)
}

pub(crate) fn stats_of(samples: &[GapSample], gap_width: f64, theta_width: f64) -> CampaignStats {
    let gaps: Vec<f64> = samples.iter().map(|s| s.gap).collect();
    let v_sync: Vec<f64> = samples.iter().map(|s| s.v_sync).collect();
    let thetas: Vec<f64> = samples.iter().filter_map(|s| s.theta).collect();
    CampaignStats {
        gap: Summary::of(&gaps),
        theta: Summary::of(&thetas),
        correlation_gap_v_sync: pearson(&gaps, &v_sync),
        gap_histogram: histogram(&gaps, gap_width),
        theta_histogram: histogram(&thetas, theta_width),
    }
}

/// Solves `V_S` and `V_A` for `trials` random symmetric games of size `n`,
/// seeded `master_seed + trial`. Failed trials are reported and left out of
/// the statistics. Output does not depend on thread scheduling.
pub fn run_gap_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let results: Vec<_> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let mut samples = Vec::with_capacity(cfg.trials);
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(s) => samples.push(s),
            Err(f) => failures.push(f),
        }
    }
    let stats = stats_of(&samples, cfg.gap_bin_width, cfg.theta_bin_width);
    Ok(CampaignReport {
        n: cfg.n,
        trials: cfg.trials,
        master_seed: cfg.master_seed,
        samples,
        failures,
        stats,
    })
}
