use serde::{Deserialize, Serialize};

use super::{argmax, argmin, PayoffMatrix2, StrategySimplex, STRUCTURAL_TOL};
use crate::{Error, Result};

/// Dense `n x n x n` tensor of returns to player 1.
///
/// Entry `(i, j, k)` is the payoff to player 1 playing `i` while players 2
/// and 3 play `j` and `k`. Storage is flat row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorFile", into = "TensorFile")]
pub struct PayoffTensor3 {
    n: usize,
    entries: Vec<f64>,
    symmetric_zero_sum: bool,
}

/// On-disk layout of a tensor.
#[derive(Serialize, Deserialize)]
struct TensorFile {
    n: usize,
    entries: Vec<f64>,
    #[serde(default)]
    symmetric_zero_sum: bool,
}

impl TryFrom<TensorFile> for PayoffTensor3 {
    type Error = Error;

    fn try_from(f: TensorFile) -> Result<Self> {
        if f.symmetric_zero_sum {
            Self::symmetric(f.n, f.entries)
        } else {
            Self::new(f.n, f.entries)
        }
    }
}

impl From<PayoffTensor3> for TensorFile {
    fn from(t: PayoffTensor3) -> Self {
        TensorFile {
            n: t.n,
            entries: t.entries,
            symmetric_zero_sum: t.symmetric_zero_sum,
        }
    }
}

/// Outcome of [`PayoffTensor3::validate_symmetry`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub pass: bool,
    pub max_violation: f64,
    /// Index triple attaining the largest violation.
    pub worst: Option<(usize, usize, usize)>,
}

impl PayoffTensor3 {
    /// A general (unflagged) tensor.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("tensor needs at least one strategy"));
        }
        if entries.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("tensor entries must be finite"));
        }
        Ok(Self {
            n,
            entries,
            symmetric_zero_sum: false,
        })
    }

    /// A tensor flagged symmetric zero-sum; fails unless the rules hold at 1e-12.
    pub fn symmetric(n: usize, entries: Vec<f64>) -> Result<Self> {
        Self::new(n, entries)?.into_symmetric()
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries.push(f(i, j, k));
                }
            }
        }
        Self::new(n, entries)
    }

    /// Validates the symmetric zero-sum rules and sets the flag.
    pub fn into_symmetric(mut self) -> Result<Self> {
        let report = self.validate_symmetry();
        if !report.pass {
            return Err(Error::NotSymmetric {
                violation: report.max_violation,
            });
        }
        self.symmetric_zero_sum = true;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_symmetric_zero_sum(&self) -> bool {
        self.symmetric_zero_sum
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[self.index(i, j, k)]
    }

    /// Smallest and largest entry.
    pub fn entry_range(&self) -> (f64, f64) {
        self.entries
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            })
    }

    fn check_dim(&self, s: &[f64]) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: s.len(),
            });
        }
        Ok(())
    }

    /// The trilinear form `sum x_i y_j z_k P_ijk`.
    pub fn expected_payoff(&self, x: &StrategySimplex, y: &StrategySimplex, z: &StrategySimplex) -> Result<f64> {
        self.check_dim(x.weights())?;
        let v = self.player1_payoffs(y.weights(), z.weights())?;
        Ok(x.weights().iter().zip(&v).map(|(a, b)| a * b).sum())
    }

    /// Player 1's payoff for each pure strategy `i` against `(y, z)`.
    pub fn player1_payoffs(&self, y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(y)?;
        self.check_dim(z)?;
        let mut out = vec![0.0; self.n];
        self.player1_payoffs_into(y, z, &mut out);
        Ok(out)
    }

    /// Unchecked variant of [`Self::player1_payoffs`] writing into `out`.
    pub(crate) fn player1_payoffs_into(&self, y: &[f64], z: &[f64], out: &mut [f64]) {
        let n = self.n;
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let row = &self.entries[(i * n + j) * n..(i * n + j + 1) * n];
                let inner: f64 = row.iter().zip(z).map(|(p, zk)| p * zk).sum();
                acc += yj * inner;
            }
            *o = acc;
        }
    }

    /// `sum_i x_i P_ijk` for every pure coalition pair, flat index `j * n + k`.
    pub fn pair_payoffs(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = vec![0.0; self.n * self.n];
        self.pair_payoffs_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn pair_payoffs_into(&self, x: &[f64], out: &mut [f64]) {
        let nn = self.n * self.n;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let block = &self.entries[i * nn..(i + 1) * nn];
            for (o, p) in out.iter_mut().zip(block) {
                *o += xi * p;
            }
        }
    }

    /// Player 1's best pure reply to `(y, z)`; ties go to the smallest index.
    pub fn best_pure_response_p1(&self, y: &StrategySimplex, z: &StrategySimplex) -> Result<(usize, f64)> {
        let v = self.player1_payoffs(y.weights(), z.weights())?;
        Ok(argmax(&v))
    }

    /// The coalition's most damaging pure pair against `x`; ties are lexicographic.
    pub fn worst_pure_pair(&self, x: &StrategySimplex) -> Result<((usize, usize), f64)> {
        let w = self.pair_payoffs(x.weights())?;
        let (idx, val) = argmin(&w);
        Ok(((idx / self.n, idx % self.n), val))
    }

    /// Checks `P_ijk = P_ikj` and `P_ijk + P_jik + P_kij = 0` at 1e-12.
    pub fn validate_symmetry(&self) -> SymmetryReport {
        let n = self.n;
        let mut max_violation = 0.0;
        let mut worst = None;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let pair = (self.get(i, j, k) - self.get(i, k, j)).abs();
                    let cyc = (self.get(i, j, k) + self.get(j, i, k) + self.get(k, i, j)).abs();
                    let v = pair.max(cyc);
                    if v > max_violation {
                        max_violation = v;
                        worst = Some((i, j, k));
                    }
                }
            }
        }
        SymmetryReport {
            pass: max_violation <= STRUCTURAL_TOL,
            max_violation,
            worst,
        }
    }

    /// Player 1 (rows) against the coalition choosing pure pairs (columns `j * n + k`).
    pub fn coalition_matrix(&self) -> PayoffMatrix2 {
        PayoffMatrix2::new(self.n, self.n * self.n, self.entries.clone()).expect("tensor entries are finite")
    }
}
