//! Experiment drivers and their file formats.

mod campaign;
pub mod io;
mod solve_game;
mod value_gap;

pub use campaign::{
    histogram, pearson, run_gap_campaign, Bin, CampaignConfig, CampaignReport, CampaignStats, GapSample, Summary,
    TrialFailure, GAP_SLACK, THETA_NULL_BELOW,
};
pub use solve_game::{solve_game, NashTarget, Targets};
pub use value_gap::{round_sig, value_gap_benchmark, MethodSpec, MethodSummary, ValueGapRow, ValueGapTable};
