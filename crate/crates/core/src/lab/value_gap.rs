use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::game::PayoffMatrix2;
use crate::opt::{solve_matrix_value, SolverConfig};
use crate::{Error, Result};

/// A labelled solver configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub label: String,
    pub config: SolverConfig,
}

impl MethodSpec {
    pub fn new(label: impl Into<String>, config: SolverConfig) -> Self {
        Self {
            label: label.into(),
            config,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueGapRow {
    pub trial: usize,
    pub matrix_seed: u64,
    pub method: String,
    /// Value found for `M`.
    pub value: f64,
    /// `|v(M) + v(-M^T)|`; zero for an exact solver.
    pub value_gap: f64,
    /// Seconds for both solves, three significant digits.
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub mean_value_gap: f64,
    pub max_value_gap: f64,
    pub mean_wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueGapTable {
    pub n: usize,
    pub rows: Vec<ValueGapRow>,
    pub summary: Vec<MethodSummary>,
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Runs every method on `trials` random `n x n` matrices (entries uniform on
/// `[-1, 1]`, seeded `seed + trial`) and on their negative transposes.
///
/// Solves run one after another so the timings do not compete for cores
/// beyond each solver's own restarts.
pub fn value_gap_benchmark(n: usize, methods: &[MethodSpec], trials: usize, seed: u64) -> Result<ValueGapTable> {
    if n == 0 || trials == 0 {
        return Err(Error::invalid("n and trials must be at least 1"));
    }
    for m in methods {
        m.config.validate()?;
    }
    let mut rows = Vec::with_capacity(trials * methods.len());
    for trial in 0..trials {
        let matrix_seed = seed.wrapping_add(trial as u64);
        let m = PayoffMatrix2::random_uniform(n, n, matrix_seed)?;
        let mt = m.negative_transpose();
        for spec in methods {
            let start = Instant::now();
            let v = solve_matrix_value(&m, &spec.config)?.value;
            let vt = solve_matrix_value(&mt, &spec.config)?.value;
            let wall = start.elapsed().as_secs_f64();
            rows.push(ValueGapRow {
                trial,
                matrix_seed,
                method: spec.label.clone(),
                value: v,
                value_gap: (v + vt).abs(),
                wall_time: round_sig(wall, 3),
            });
        }
    }
    let summary = methods
        .iter()
        .map(|spec| {
            let mine: Vec<&ValueGapRow> = rows.iter().filter(|r| r.method == spec.label).collect();
            let k = mine.len() as f64;
            MethodSummary {
                method: spec.label.clone(),
                mean_value_gap: mine.iter().map(|r| r.value_gap).sum::<f64>() / k,
                max_value_gap: mine.iter().map(|r| r.value_gap).fold(0.0, f64::max),
                mean_wall_time: round_sig(mine.iter().map(|r| r.wall_time).sum::<f64>() / k, 3),
            }
        })
        .collect();
    Ok(ValueGapTable { n, rows, summary })
}
