//! Numerical solvers for the synchronous (maximin) and asynchronous
//! (minimax) coalition values of arbitrary payoff tensors.

mod minimize;
mod objective;
mod smoothing;
mod solve;

pub use minimize::{minimize, Domain, Method, MinimizeOptions, Minimum, Termination};
pub use objective::{MatrixObjective, MaximinObjective, MinimaxObjective};
pub use smoothing::{smooth_max, smooth_max_grad, smooth_min, smooth_min_grad, SmoothingSpec};
pub use solve::{
    solve_matrix_value, solve_maximin, solve_minimax, ConstraintMode, RestartRecord, SolveOutcome, SolverConfig,
};
