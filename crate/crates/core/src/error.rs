use thiserror::Error;

/// Errors surfaced by roster loading, tournament execution and scheduling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("roster must contain exactly {expected} teams, got {got}")]
    RosterSize { expected: usize, got: usize },
    #[error("duplicate team id '{0}' in roster")]
    DuplicateTeamId(String),
    #[error("duplicate FIFA rank {0} in roster")]
    DuplicateRank(u32),
    #[error("FIFA rank must be at least 1 (team '{0}')")]
    InvalidRank(String),
    #[error("unsupported roster file extension '{0}' (expected .csv or .json)")]
    UnsupportedRosterFormat(String),
    #[error("fixture {0} resolved without a winner; eliminatory fixtures must decide")]
    UndecidedFixture(String),
    #[error("returnee selection expects 18 one-loss candidates, found {0}")]
    BadCandidateCount(usize),
    #[error("batch summaries differ in {0}; comparison requires matching configurations")]
    ConfigMismatch(&'static str),
    #[error("per-day capacity sequence exhausted on day {day} with {unplaced} fixtures left")]
    CapacityExhausted { day: usize, unplaced: usize },
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
