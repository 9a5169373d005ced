//! Simulation and analytics toolkit for 48-team World Cup formats.
//!
//! Three formats are modeled end to end — a double elimination with a
//! returnee rule, and group stages of 3 or 4 feeding a knockout of 32 —
//! on top of a rank-driven Poisson goal model. The crate simulates single
//! tournaments or seeded Monte Carlo batches, scores them with fairness and
//! pairing-quality metrics against a random-pairing baseline, lays fixtures
//! onto a calendar under capacity and rest constraints, and exports
//! plot-ready tables.
//!
//! Batches are reproducible: run `i` of seed `s` always draws from the same
//! RNG stream, so results are independent of thread count, and parallel
//! execution (the default `parallel` feature) matches serial execution
//! byte for byte.

pub mod error;
pub mod export;
pub mod fixtures;
pub mod formats;
pub mod metrics;
pub mod model;
pub mod montecarlo;
pub mod rng;
pub mod runner;
pub mod schedule;
pub mod standings;
pub mod team;

pub use error::{Error, Result};
pub use fixtures::{Bracket, FixtureId, FixtureSource, FormatKind, FormatPlan};
pub use formats::build_plan;
pub use model::{model_outcome_curve, outcome_probabilities, play_match, MatchMode, MatchScore};
pub use montecarlo::{
    compare_formats, run_batch, run_batch_serial, BatchConfig, BatchSummary, ComparisonReport,
};
pub use rng::{aux_stream, run_stream, SimRng};
pub use runner::{run_tournament, TournamentResult};
pub use schedule::{duration_curve, schedule, ScheduleAssignment, ScheduleParams};
pub use team::{Roster, Team, TeamIdx, WORLD_CUP_TEAMS};
