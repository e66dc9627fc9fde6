//! Payoff tensors, mixed strategies and random symmetric games.

mod generate;
mod matrix;
mod report;
mod simplex;
mod tensor;

pub use generate::{random_symmetric_tensor, random_symmetric_tensor_in, EntryRange};
pub use matrix::PayoffMatrix2;
pub use report::{Diagnostics, PairWeight, Strategies, ValueReport};
pub use simplex::{project_in_place, project_to_simplex, StrategySimplex};
pub use tensor::{PayoffTensor3, SymmetryReport};

/// Default tolerance for structural invariants.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Index of the largest entry, ties to the smallest index.
pub fn argmax(v: &[f64]) -> (usize, f64) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > best.1 {
            best = (i, x);
        }
    }
    best
}

/// Index of the smallest entry, ties to the smallest index.
pub fn argmin(v: &[f64]) -> (usize, f64) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x < best.1 {
            best = (i, x);
        }
    }
    best
}
