//! Outcome metrics.
//!
//! Three lenses compare formats: a fairness index scoring how far the final
//! classification strays from the skill ordering (weighted toward the top),
//! a rank index scoring how prestigious a pairing is, and a rank distance
//! scoring how even it is. Pairing metrics are also evaluated on a
//! uniform-random baseline of distinct team pairs for reference.

use rand::Rng;
use serde::Serialize;

use crate::fixtures::{Bracket, FormatPlan};
use crate::rng::SimRng;
use crate::runner::TournamentResult;
use crate::team::{Roster, TeamIdx};

/// Ranks at or beyond this cap contribute the same (floor) quality.
pub const RANK_QUALITY_CAP: u32 = 50;
/// Default top-rank cutoff for interest classification.
pub const DEFAULT_INTEREST_THRESHOLD: u32 = 8;
/// Default displacement-weight exponent for the fairness index.
pub const DEFAULT_GAMMA: f64 = 2.0;

/// Fairness index of a classification, 0 for a perfect skill ordering.
///
/// `skill_positions[p]` is the skill position (0-based, best = 0) of the
/// team classified at position `p`. Each displacement counts relative to the
/// field size and is weighted by the displaced team's skill quality raised
/// to `gamma`, so misplacing a favorite costs more than misplacing an
/// outsider.
pub fn fairness_index(skill_positions: &[usize], gamma: f64) -> f64 {
    let n = skill_positions.len() as f64;
    skill_positions
        .iter()
        .enumerate()
        .map(|(position, &skill)| {
            let displacement = (position as f64 - skill as f64).abs() / n;
            displacement * (1.0 - skill as f64 / n).powf(gamma)
        })
        .sum()
}

/// Skill positions of a run's classification, ready for [`fairness_index`].
pub fn classification_skills(result: &TournamentResult, roster: &Roster) -> Vec<usize> {
    let order = roster.skill_order();
    result.classification.iter().map(|&t| order[t]).collect()
}

/// Quality of a world ranking: 1.0 for the top spot, linear down to a floor
/// of 0.02 at rank 50, flat beyond.
pub fn rank_quality(fifa_rank: u32) -> f64 {
    1.0 - (fifa_rank.min(RANK_QUALITY_CAP) - 1) as f64 / RANK_QUALITY_CAP as f64
}

/// Prestige of a pairing on a 0-100 scale: geometric mean of the two rank
/// qualities.
pub fn rank_index(home_rank: u32, away_rank: u32) -> f64 {
    100.0 * (rank_quality(home_rank) * rank_quality(away_rank)).sqrt()
}

/// Competitive closeness of a pairing: absolute ranking gap, uncapped.
pub fn rank_distance(home_rank: u32, away_rank: u32) -> u32 {
    home_rank.abs_diff(away_rank)
}

/// Audience-interest class of a pairing given a top-rank cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterestClass {
    /// Both teams inside the cutoff.
    High,
    /// Exactly one team inside the cutoff.
    Special,
    Regular,
}

impl InterestClass {
    pub fn as_str(self) -> &'static str {
        match self {
            InterestClass::High => "high",
            InterestClass::Special => "special",
            InterestClass::Regular => "regular",
        }
    }
}

pub fn interest_class(home_rank: u32, away_rank: u32, threshold: u32) -> InterestClass {
    match (home_rank <= threshold, away_rank <= threshold) {
        (true, true) => InterestClass::High,
        (false, false) => InterestClass::Regular,
        _ => InterestClass::Special,
    }
}

/// Pairing metrics of one played match.
#[derive(Debug, Clone, Serialize)]
pub struct MatchMetric {
    pub fixture_id: String,
    pub round_tag: &'static str,
    pub bracket: &'static str,
    pub home_rank: u32,
    pub away_rank: u32,
    pub rank_index: f64,
    pub rank_distance: u32,
    pub interest: InterestClass,
}

/// Evaluate every match of a finished run.
pub fn match_metrics(
    plan: &FormatPlan,
    result: &TournamentResult,
    roster: &Roster,
    interest_threshold: u32,
) -> Vec<MatchMetric> {
    result
        .match_log
        .iter()
        .map(|m| {
            let fixture = plan.fixture(m.fixture);
            let (h, a) = (roster.rank(m.home), roster.rank(m.away));
            MatchMetric {
                fixture_id: m.fixture.to_string(),
                round_tag: fixture.round_tag,
                bracket: fixture.bracket.as_str(),
                home_rank: h,
                away_rank: a,
                rank_index: rank_index(h, a),
                rank_distance: rank_distance(h, a),
                interest: interest_class(h, a, interest_threshold),
            }
        })
        .collect()
}

/// Count a run's matches per interest class, `(high, special, regular)`.
pub fn interest_counts(metrics: &[MatchMetric]) -> (u32, u32, u32) {
    let mut counts = (0, 0, 0);
    for m in metrics {
        match m.interest {
            InterestClass::High => counts.0 += 1,
            InterestClass::Special => counts.1 += 1,
            InterestClass::Regular => counts.2 += 1,
        }
    }
    counts
}

/// Matches per run that can carry a semifinal-or-later stake; exposed so
/// reports can slice prestige by stage.
pub fn final_stage_fixtures(plan: &FormatPlan) -> usize {
    plan.fixtures.iter().filter(|f| f.bracket == Bracket::FinalStage).count()
}

/// Draw one unordered pair of distinct teams uniformly at random.
pub fn sample_baseline_pair(team_count: usize, rng: &mut SimRng) -> (TeamIdx, TeamIdx) {
    let first = rng.random_range(0..team_count);
    let mut second = rng.random_range(0..team_count - 1);
    if second >= first {
        second += 1;
    }
    (first, second)
}

/// Number of bins of the fixed-width rank-index histogram.
pub const RANK_INDEX_BINS: usize = 20;
/// Width of each rank-index bin.
pub const RANK_INDEX_BIN_WIDTH: f64 = 5.0;

/// Histogram of rank-index values over [0, 100]; the last bin includes 100.
pub fn rank_index_histogram(values: impl IntoIterator<Item = f64>) -> Vec<u64> {
    let mut bins = vec![0u64; RANK_INDEX_BINS];
    for v in values {
        let bin = ((v / RANK_INDEX_BIN_WIDTH) as usize).min(RANK_INDEX_BINS - 1);
        bins[bin] += 1;
    }
    bins
}

/// Unit-width histogram of rank distances, at least 48 bins wide.
pub fn rank_distance_histogram(values: impl IntoIterator<Item = u32>) -> Vec<u64> {
    let mut bins = vec![0u64; 48];
    for v in values {
        if v as usize >= bins.len() {
            bins.resize(v as usize + 1, 0);
        }
        bins[v as usize] += 1;
    }
    bins
}
