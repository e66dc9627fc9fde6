//! Coalition values for symmetric three-player zero-sum games.
//!
//! Player 1 faces a coalition of players 2 and 3. The coalition can either
//! correlate its play (synchronous value `V_S`, a maximin over player 1's
//! mixtures) or randomize independently (asynchronous value `V_A`, a
//! nonconvex minimax over product mixtures). For symmetric zero-sum games
//! `V_S <= V_A <= V_N = 0`.
//!
//! The crate provides
//! - [`game`]: payoff tensors, mixed strategies and random symmetric games,
//! - [`bench`]: closed-form solutions for the small games solved by hand,
//! - [`guts`]: continuous three-player Guts poker,
//! - [`opt`]: smoothed projected-gradient and quasi-Newton solvers,
//! - [`fictitious`]: fictitious play variants and a joint Nash checker,
//! - [`lab`]: campaigns, benchmarks and file formats.

pub mod bench;
pub mod error;
pub mod fictitious;
pub mod game;
pub mod guts;
pub mod lab;
pub mod opt;

pub use error::{Error, Result};
pub use game::{PayoffMatrix2, PayoffTensor3, StrategySimplex, ValueReport};
