//! Goal-scoring model and match resolution.
//!
//! Each side's goal count is an independent Poisson draw whose rate depends
//! only on that side's FIFA rank: `1.5 + 0.7 * (1 - 2*min(rank,50)/50)`,
//! i.e. 2.172 for rank 1, 1.5 for rank 25 and a floor of 0.8 from rank 50
//! on. There is no home advantage and no extra time: eliminatory fixtures
//! that end level go straight to a fair-coin penalty shootout.

use serde::Serialize;

use crate::rng::SimRng;
use rand::Rng;

/// Rank beyond which the model stops differentiating teams.
pub const RANK_CAP: u32 = 50;
/// Goal rate of a mid-table (rank 25) side.
pub const BASE_RATE: f64 = 1.5;
/// Half-spread of the rate across the rank range.
pub const RATE_SPREAD: f64 = 0.7;
/// Goal counts above this are ignored by the exact outcome sums; with rates
/// capped at 2.172 the truncated tail mass is far below 1e-12.
pub const GOAL_TRUNCATION: u32 = 30;

/// Expected goals for a side of the given FIFA rank.
pub fn goal_rate(fifa_rank: u32) -> f64 {
    let capped = fifa_rank.min(RANK_CAP) as f64;
    BASE_RATE + RATE_SPREAD * (1.0 - 2.0 * capped / RANK_CAP as f64)
}

/// Knuth inverse-transform Poisson sampler. Exact for the small rates this
/// model produces; no large-lambda path is needed.
pub fn sample_poisson(lambda: f64, rng: &mut SimRng) -> u32 {
    let threshold = (-lambda).exp();
    let mut k = 0u32;
    let mut product = 1.0f64;
    loop {
        product *= rng.random::<f64>();
        if product <= threshold {
            return k;
        }
        k += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Home,
    Away,
}

/// Whether a fixture may end level or must produce a winner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMode {
    /// Group fixtures: a level score stands as a draw.
    DrawAllowed,
    /// Bracket fixtures: a level score is decided by a penalty shootout.
    MustDecide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchScore {
    pub home_goals: u32,
    pub away_goals: u32,
    /// Present exactly when the regulation score was level and the fixture
    /// had to decide.
    pub shootout_winner: Option<Side>,
}

impl MatchScore {
    /// Bracket winner: regulation winner, else the shootout winner, else
    /// none (a standing draw).
    pub fn winner(&self) -> Option<Side> {
        match self.home_goals.cmp(&self.away_goals) {
            std::cmp::Ordering::Greater => Some(Side::Home),
            std::cmp::Ordering::Less => Some(Side::Away),
            std::cmp::Ordering::Equal => self.shootout_winner,
        }
    }

    pub fn is_regulation_draw(&self) -> bool {
        self.home_goals == self.away_goals
    }
}

/// Plays one fixture between sides of the given ranks. Goal counts are drawn
/// home first, then away; a must-decide level score consumes one more draw
/// for the fair-coin shootout. Rank feeds the goal rates only, never the
/// shootout.
pub fn play_match(home_rank: u32, away_rank: u32, mode: MatchMode, rng: &mut SimRng) -> MatchScore {
    let home_goals = sample_poisson(goal_rate(home_rank), rng);
    let away_goals = sample_poisson(goal_rate(away_rank), rng);
    let shootout_winner = if home_goals == away_goals && mode == MatchMode::MustDecide {
        Some(if rng.random_bool(0.5) { Side::Home } else { Side::Away })
    } else {
        None
    };
    MatchScore {
        home_goals,
        away_goals,
        shootout_winner,
    }
}

/// Poisson pmf evaluated iteratively (no factorial overflow).
pub fn poisson_pmf(k: u32, lambda: f64) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeProbs {
    pub win: f64,
    pub draw: f64,
    pub loss: f64,
}

/// Exact regulation-outcome probabilities for the given ranks, by truncated
/// double sum over goal-count pairs up to [`GOAL_TRUNCATION`].
pub fn outcome_probabilities(home_rank: u32, away_rank: u32) -> OutcomeProbs {
    let home_pmf = pmf_table(goal_rate(home_rank));
    let away_pmf = pmf_table(goal_rate(away_rank));
    let mut probs = OutcomeProbs { win: 0.0, draw: 0.0, loss: 0.0 };
    for (h, ph) in home_pmf.iter().enumerate() {
        for (a, pa) in away_pmf.iter().enumerate() {
            let joint = ph * pa;
            match h.cmp(&a) {
                std::cmp::Ordering::Greater => probs.win += joint,
                std::cmp::Ordering::Equal => probs.draw += joint,
                std::cmp::Ordering::Less => probs.loss += joint,
            }
        }
    }
    probs
}

fn pmf_table(lambda: f64) -> Vec<f64> {
    (0..=GOAL_TRUNCATION).map(|k| poisson_pmf(k, lambda)).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveRow {
    /// Home rank minus away rank.
    pub rank_diff: i32,
    pub p_win: f64,
    pub p_draw: f64,
    pub p_loss: f64,
}

/// Win/draw/loss probabilities by rank difference, averaged over every rank
/// pair `(h, a)` in `1..=max_rank` with `h - a` equal to the row's
/// difference. Rows cover the full difference range; each sums to 1 up to
/// the truncation error.
pub fn model_outcome_curve(max_rank: u32) -> Vec<CurveRow> {
    let max = max_rank.max(1) as i32;
    let mut rows = Vec::with_capacity((2 * max - 1) as usize);
    for diff in -(max - 1)..=(max - 1) {
        let mut acc = OutcomeProbs { win: 0.0, draw: 0.0, loss: 0.0 };
        let mut pairs = 0u32;
        for home in 1..=max {
            let away = home - diff;
            if away < 1 || away > max {
                continue;
            }
            let p = outcome_probabilities(home as u32, away as u32);
            acc.win += p.win;
            acc.draw += p.draw;
            acc.loss += p.loss;
            pairs += 1;
        }
        let n = pairs as f64;
        rows.push(CurveRow {
            rank_diff: diff,
            p_win: acc.win / n,
            p_draw: acc.draw / n,
            p_loss: acc.loss / n,
        });
    }
    rows
}
