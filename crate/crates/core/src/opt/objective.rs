use super::smoothing::{SmoothingSpec, UnitMap};
use crate::game::{PayoffMatrix2, PayoffTensor3};

/// `phi(y, z)`: smoothed max over player 1's pure replies of `sum_jk y_j z_k P_ijk`.
#[derive(Clone, Debug)]
pub struct MinimaxObjective<'a> {
    tensor: &'a PayoffTensor3,
    spec: SmoothingSpec,
    map: UnitMap,
}

impl<'a> MinimaxObjective<'a> {
    pub fn new(tensor: &'a PayoffTensor3, spec: SmoothingSpec) -> Self {
        let (lo, hi) = tensor.entry_range();
        Self {
            tensor,
            spec,
            map: UnitMap::new(lo, hi),
        }
    }

    pub fn value(&self, y: &[f64], z: &[f64]) -> f64 {
        let mut v = vec![0.0; self.tensor.n()];
        self.tensor.player1_payoffs_into(y, z, &mut v);
        self.map.apply(&v, &mut Vec::new(), self.spec, true, None)
    }

    /// Unsmoothed `max_i sum_jk y_j z_k P_ijk`.
    pub fn exact(&self, y: &[f64], z: &[f64]) -> f64 {
        let mut v = vec![0.0; self.tensor.n()];
        self.tensor.player1_payoffs_into(y, z, &mut v);
        v.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value with gradients with respect to `y` and `z`.
    pub fn value_grad(&self, y: &[f64], z: &[f64], gy: &mut [f64], gz: &mut [f64]) -> f64 {
        let n = self.tensor.n();
        let mut v = vec![0.0; n];
        self.tensor.player1_payoffs_into(y, z, &mut v);
        let mut w = vec![0.0; n];
        let f = self.map.apply(&v, &mut Vec::new(), self.spec, true, Some(&mut w));
        gy.iter_mut().for_each(|g| *g = 0.0);
        gz.iter_mut().for_each(|g| *g = 0.0);
        let e = self.tensor.entries();
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            for j in 0..n {
                let row = &e[(i * n + j) * n..(i * n + j + 1) * n];
                let dot: f64 = row.iter().zip(z).map(|(p, zk)| p * zk).sum();
                gy[j] += wi * dot;
                let c = wi * y[j];
                if c != 0.0 {
                    for (g, p) in gz.iter_mut().zip(row) {
                        *g += c * p;
                    }
                }
            }
        }
        f
    }
}

/// `Phi(x)`: smoothed min over pure coalition pairs of `sum_i x_i P_ijk`.
#[derive(Clone, Debug)]
pub struct MaximinObjective<'a> {
    tensor: &'a PayoffTensor3,
    spec: SmoothingSpec,
    map: UnitMap,
}

impl<'a> MaximinObjective<'a> {
    pub fn new(tensor: &'a PayoffTensor3, spec: SmoothingSpec) -> Self {
        let (lo, hi) = tensor.entry_range();
        Self {
            tensor,
            spec,
            map: UnitMap::new(lo, hi),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut w = vec![0.0; self.tensor.n().pow(2)];
        self.tensor.pair_payoffs_into(x, &mut w);
        self.map.apply(&w, &mut Vec::new(), self.spec, false, None)
    }

    /// Unsmoothed `min_jk sum_i x_i P_ijk`.
    pub fn exact(&self, x: &[f64]) -> f64 {
        let mut w = vec![0.0; self.tensor.n().pow(2)];
        self.tensor.pair_payoffs_into(x, &mut w);
        w.into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn value_grad(&self, x: &[f64], g: &mut [f64]) -> f64 {
        let nn = self.tensor.n().pow(2);
        let mut w = vec![0.0; nn];
        self.tensor.pair_payoffs_into(x, &mut w);
        let mut dw = vec![0.0; nn];
        let f = self.map.apply(&w, &mut Vec::new(), self.spec, false, Some(&mut dw));
        let e = self.tensor.entries();
        for (i, gi) in g.iter_mut().enumerate() {
            *gi = e[i * nn..(i + 1) * nn].iter().zip(&dw).map(|(p, d)| p * d).sum();
        }
        f
    }

    /// Surrogate weights on each pure pair, normalized to a distribution.
    /// At a smoothed optimum they estimate the coalition's correlated strategy.
    pub fn pair_weights(&self, x: &[f64]) -> Vec<f64> {
        let nn = self.tensor.n().pow(2);
        let mut w = vec![0.0; nn];
        self.tensor.pair_payoffs_into(x, &mut w);
        let mut dw = vec![0.0; nn];
        self.map.apply(&w, &mut Vec::new(), self.spec, false, Some(&mut dw));
        // softmax derivatives can dip below zero away from the minimum
        dw.iter_mut().for_each(|d| *d = d.max(0.0));
        let s: f64 = dw.iter().sum();
        if s > 0.0 {
            dw.iter_mut().for_each(|d| *d /= s);
        }
        dw
    }
}

/// `min_y max_i (M y)_i`: the value of a matrix game from the column player's side.
#[derive(Clone, Debug)]
pub struct MatrixObjective<'a> {
    matrix: &'a PayoffMatrix2,
    spec: SmoothingSpec,
    map: UnitMap,
}

impl<'a> MatrixObjective<'a> {
    pub fn new(matrix: &'a PayoffMatrix2, spec: SmoothingSpec) -> Self {
        let (lo, hi) = matrix
            .entries()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
        Self {
            matrix,
            spec,
            map: UnitMap::new(lo, hi),
        }
    }

    pub fn exact(&self, y: &[f64]) -> f64 {
        self.matrix.row_payoffs(y).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn value_grad(&self, y: &[f64], g: &mut [f64]) -> f64 {
        let v = self.matrix.row_payoffs(y);
        let mut w = vec![0.0; v.len()];
        let f = self.map.apply(&v, &mut Vec::new(), self.spec, true, Some(&mut w));
        let col = self.matrix.col_payoffs(&w);
        g.copy_from_slice(&col);
        f
    }
}
