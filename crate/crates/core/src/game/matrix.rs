use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Two-player payoff matrix, entries are returns to the row player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct PayoffMatrix2 {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl TryFrom<MatrixFile> for PayoffMatrix2 {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        Self::new(f.rows, f.cols, f.entries)
    }
}

impl From<PayoffMatrix2> for MatrixFile {
    fn from(m: PayoffMatrix2) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries,
        }
    }
}

impl PayoffMatrix2 {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix needs at least one row and column"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Self::new(r, c, rows.concat())
    }

    /// Entries drawn uniformly from `[-1, 1]`.
    pub fn random_uniform(rows: usize, cols: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..rows * cols).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// `-M^T`: the same game seen from the column player.
    pub fn negative_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(-self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `M y`: row payoffs against a column mixture.
    pub fn row_payoffs(&self, y: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M`: payoff of each column against a row mixture.
    pub fn col_payoffs(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += xr * a;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_transpose_of_pennies() {
        let m = PayoffMatrix2::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let t = m.negative_transpose();
        assert_eq!(t.entries(), &[-1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn negative_transpose_is_involution() {
        let m = PayoffMatrix2::random_uniform(3, 5, 11).unwrap();
        let t = m.negative_transpose();
        assert_eq!((t.rows(), t.cols()), (5, 3));
        assert_eq!(t.get(4, 1), -m.get(1, 4));
        assert_eq!(t.negative_transpose(), m);
    }

    #[test]
    fn rejects_shape_errors() {
        assert!(PayoffMatrix2::new(2, 2, vec![0.0; 3]).is_err());
        assert!(PayoffMatrix2::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
