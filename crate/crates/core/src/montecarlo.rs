//! Monte Carlo batches over tournament formats.
//!
//! Run `i` of a batch draws from stream `2i` of the base seed, so the batch
//! is a fixed set of independent simulations no matter how work is split
//! across threads. Aggregation is sequential in run order, and the random
//! baseline samples from a stream no run uses; a parallel batch is therefore
//! byte-identical to a serial one.

use serde::Serialize;

use crate::error::Result;
use crate::fixtures::{FormatKind, FormatPlan};
use crate::formats::build_plan;
use crate::metrics::{
    classification_skills, fairness_index, interest_class, rank_distance,
    rank_distance_histogram, rank_index, rank_index_histogram, sample_baseline_pair,
    InterestClass, DEFAULT_GAMMA, DEFAULT_INTEREST_THRESHOLD,
};
use crate::rng::{aux_stream, run_stream};
use crate::runner::run_tournament;
use crate::team::Roster;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rank-distance cutoff under which a pairing counts as close.
pub const CLOSE_RANK_DISTANCE: u32 = 10;

#[derive(Debug, Clone)]
pub struct BatchConfig {
    pub format: FormatKind,
    pub n_runs: usize,
    pub base_seed: u64,
    /// Fairness-index displacement-weight exponent.
    pub gamma: f64,
    /// Top-rank cutoff for interest classification.
    pub interest_threshold: u32,
}

impl BatchConfig {
    pub fn new(format: FormatKind, n_runs: usize, base_seed: u64) -> Self {
        BatchConfig {
            format,
            n_runs,
            base_seed,
            gamma: DEFAULT_GAMMA,
            interest_threshold: DEFAULT_INTEREST_THRESHOLD,
        }
    }
}

/// Everything retained from one simulated tournament.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSample {
    pub run_index: u64,
    /// Skill position (0-based) of the team at each final position.
    pub skills: Vec<usize>,
    /// Per match, in fixture order.
    pub rank_indices: Vec<f64>,
    pub rank_distances: Vec<u32>,
    pub interest: Vec<InterestClass>,
}

impl RunSample {
    pub fn fairness(&self, gamma: f64) -> f64 {
        fairness_index(&self.skills, gamma)
    }

    pub fn interest_counts(&self) -> (u32, u32, u32) {
        let mut counts = (0, 0, 0);
        for class in &self.interest {
            match class {
                InterestClass::High => counts.0 += 1,
                InterestClass::Special => counts.1 += 1,
                InterestClass::Regular => counts.2 += 1,
            }
        }
        counts
    }
}

fn run_one(
    plan: &FormatPlan,
    roster: &Roster,
    config: &BatchConfig,
    run_index: u64,
) -> Result<RunSample> {
    let mut rng = run_stream(config.base_seed, run_index);
    let result = run_tournament(plan, roster, &mut rng)?;
    let mut rank_indices = Vec::with_capacity(result.match_log.len());
    let mut rank_distances = Vec::with_capacity(result.match_log.len());
    let mut interest = Vec::with_capacity(result.match_log.len());
    for m in &result.match_log {
        let (h, a) = (roster.rank(m.home), roster.rank(m.away));
        rank_indices.push(rank_index(h, a));
        rank_distances.push(rank_distance(h, a));
        interest.push(interest_class(h, a, config.interest_threshold));
    }
    Ok(RunSample {
        run_index,
        skills: classification_skills(&result, roster),
        rank_indices,
        rank_distances,
        interest,
    })
}

/// Simulate every run of the batch, in run order. Uses the thread pool when
/// the `parallel` feature is on; the output is identical either way.
#[cfg(feature = "parallel")]
pub fn collect_runs(config: &BatchConfig, roster: &Roster) -> Result<Vec<RunSample>> {
    let plan = build_plan(config.format);
    (0..config.n_runs as u64)
        .into_par_iter()
        .map(|i| run_one(&plan, roster, config, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn collect_runs(config: &BatchConfig, roster: &Roster) -> Result<Vec<RunSample>> {
    collect_runs_serial(config, roster)
}

/// Single-threaded batch; the reference the parallel path must match.
pub fn collect_runs_serial(config: &BatchConfig, roster: &Roster) -> Result<Vec<RunSample>> {
    let plan = build_plan(config.format);
    (0..config.n_runs as u64)
        .map(|i| run_one(&plan, roster, config, i))
        .collect()
}

/// Five-number summary plus moments of a sample.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Dist {
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Dist {
    pub fn of(samples: &[f64]) -> Dist {
        assert!(!samples.is_empty(), "empty sample");
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Dist {
            mean,
            std_dev: var.sqrt(),
            min: sorted[0],
            q25: quantile_sorted(&sorted, 0.25),
            median: quantile_sorted(&sorted, 0.5),
            q75: quantile_sorted(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
        }
    }
}

/// Linear-interpolation quantile of an ascending-sorted sample.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let idx = p * (sorted.len() - 1) as f64;
    let lo = idx.floor() as usize;
    let frac = idx - lo as f64;
    if lo + 1 == sorted.len() {
        sorted[lo]
    } else {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    }
}

/// One side's aggregate pairing metrics (tournament or baseline).
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairingStats {
    pub matches: u64,
    pub mean_rank_index: f64,
    pub mean_rank_distance: f64,
    /// Share of matches with rank distance at most [`CLOSE_RANK_DISTANCE`].
    pub close_frequency: f64,
    pub high_interest: u64,
    pub special_interest: u64,
    pub regular_interest: u64,
    pub rank_index_histogram: Vec<u64>,
    pub rank_distance_histogram: Vec<u64>,
}

impl PairingStats {
    fn from_streams(
        rank_indices: impl Iterator<Item = f64> + Clone,
        rank_distances: impl Iterator<Item = u32> + Clone,
        interest: impl Iterator<Item = InterestClass>,
    ) -> PairingStats {
        let mut matches = 0u64;
        let mut ri_sum = 0.0;
        for ri in rank_indices.clone() {
            matches += 1;
            ri_sum += ri;
        }
        let mut rd_sum = 0u64;
        let mut close = 0u64;
        for rd in rank_distances.clone() {
            rd_sum += rd as u64;
            close += (rd <= CLOSE_RANK_DISTANCE) as u64;
        }
        let (mut high, mut special, mut regular) = (0u64, 0u64, 0u64);
        for class in interest {
            match class {
                InterestClass::High => high += 1,
                InterestClass::Special => special += 1,
                InterestClass::Regular => regular += 1,
            }
        }
        PairingStats {
            matches,
            mean_rank_index: ri_sum / matches as f64,
            mean_rank_distance: rd_sum as f64 / matches as f64,
            close_frequency: close as f64 / matches as f64,
            high_interest: high,
            special_interest: special,
            regular_interest: regular,
            rank_index_histogram: rank_index_histogram(rank_indices),
            rank_distance_histogram: rank_distance_histogram(rank_distances),
        }
    }

    pub fn high_frequency(&self) -> f64 {
        self.high_interest as f64 / self.matches as f64
    }

    pub fn special_frequency(&self) -> f64 {
        self.special_interest as f64 / self.matches as f64
    }

    pub fn regular_frequency(&self) -> f64 {
        self.regular_interest as f64 / self.matches as f64
    }
}

/// Aggregated batch results plus the matched random baseline.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BatchSummary {
    pub format: FormatKind,
    pub n_runs: usize,
    pub base_seed: u64,
    pub gamma: f64,
    pub interest_threshold: u32,
    pub matches_per_run: usize,
    pub fairness: Dist,
    pub tournament: PairingStats,
    pub baseline: PairingStats,
    /// `interest_count_runs[class][c]` = number of runs with exactly `c`
    /// matches of that class; class order high, special, regular.
    pub interest_count_runs: [Vec<u64>; 3],
    /// Per-run fairness-index samples at the configured gamma, run order.
    #[serde(skip)]
    pub fairness_samples: Vec<f64>,
}

impl BatchSummary {
    /// Tournament-to-baseline frequency ratios (high, special, regular).
    pub fn interest_ratios(&self) -> (f64, f64, f64) {
        (
            self.tournament.high_frequency() / self.baseline.high_frequency(),
            self.tournament.special_frequency() / self.baseline.special_frequency(),
            self.tournament.regular_frequency() / self.baseline.regular_frequency(),
        )
    }

    /// Tournament-to-baseline ratio of close-match frequency.
    pub fn close_match_ratio(&self) -> f64 {
        self.tournament.close_frequency / self.baseline.close_frequency
    }

    /// Mean per-run match counts (high, special, regular).
    pub fn mean_interest_counts(&self) -> (f64, f64, f64) {
        let n = self.n_runs as f64;
        (
            self.tournament.high_interest as f64 / n,
            self.tournament.special_interest as f64 / n,
            self.tournament.regular_interest as f64 / n,
        )
    }
}

/// Aggregate collected runs and sample the matched baseline: one uniform
/// random pairing per simulated match, drawn from the auxiliary stream.
pub fn summarize(config: &BatchConfig, roster: &Roster, runs: &[RunSample]) -> BatchSummary {
    let matches_per_run = runs.first().map_or(0, |r| r.rank_indices.len());
    let fairness_samples: Vec<f64> = runs.iter().map(|r| r.fairness(config.gamma)).collect();

    let tournament = PairingStats::from_streams(
        runs.iter().flat_map(|r| r.rank_indices.iter().copied()),
        runs.iter().flat_map(|r| r.rank_distances.iter().copied()),
        runs.iter().flat_map(|r| r.interest.iter().copied()),
    );

    let mut interest_count_runs: [Vec<u64>; 3] = Default::default();
    for run in runs {
        let (high, special, regular) = run.interest_counts();
        for (dist, count) in interest_count_runs.iter_mut().zip([high, special, regular]) {
            let count = count as usize;
            if dist.len() <= count {
                dist.resize(count + 1, 0);
            }
            dist[count] += 1;
        }
    }

    let mut rng = aux_stream(config.base_seed, 0);
    let n_baseline = runs.len() * matches_per_run;
    let mut ri = Vec::with_capacity(n_baseline);
    let mut rd = Vec::with_capacity(n_baseline);
    let mut classes = Vec::with_capacity(n_baseline);
    for _ in 0..n_baseline {
        let (a, b) = sample_baseline_pair(roster.len(), &mut rng);
        let (ra, rb) = (roster.rank(a), roster.rank(b));
        ri.push(rank_index(ra, rb));
        rd.push(rank_distance(ra, rb));
        classes.push(interest_class(ra, rb, config.interest_threshold));
    }
    let baseline = PairingStats::from_streams(
        ri.iter().copied(),
        rd.iter().copied(),
        classes.iter().copied(),
    );

    BatchSummary {
        format: config.format,
        n_runs: runs.len(),
        base_seed: config.base_seed,
        gamma: config.gamma,
        interest_threshold: config.interest_threshold,
        matches_per_run,
        fairness: Dist::of(&fairness_samples),
        tournament,
        baseline,
        interest_count_runs,
        fairness_samples,
    }
}

/// Simulate and aggregate in one call.
pub fn run_batch(config: &BatchConfig, roster: &Roster) -> Result<BatchSummary> {
    let runs = collect_runs(config, roster)?;
    Ok(summarize(config, roster, &runs))
}

/// Fully single-threaded variant of [`run_batch`].
pub fn run_batch_serial(config: &BatchConfig, roster: &Roster) -> Result<BatchSummary> {
    let runs = collect_runs_serial(config, roster)?;
    Ok(summarize(config, roster, &runs))
}

/// Side-by-side report over all three formats with shared settings.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub n_runs: usize,
    pub base_seed: u64,
    pub interest_threshold: u32,
    pub formats: Vec<FormatComparison>,
    /// Double-elimination mean counts over each group format's.
    pub count_ratios: Vec<CountRatios>,
    /// Whether double elimination is at least as fair at the lower quartile
    /// and median, per exponent and opposing format.
    pub fairness_dominance: Vec<DominanceCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormatComparison {
    pub format: FormatKind,
    pub matches_per_run: usize,
    /// Fairness-index quantiles per displacement exponent.
    pub fairness: Vec<FairnessQuantiles>,
    /// Mean matches per run in each interest class.
    pub mean_high_count: f64,
    pub mean_special_count: f64,
    pub mean_regular_count: f64,
    pub interest_ratio_high: f64,
    pub interest_ratio_special: f64,
    pub interest_ratio_regular: f64,
    pub close_match_ratio: f64,
    pub mean_rank_index: f64,
    pub baseline_mean_rank_index: f64,
}

/// Mean per-run interest-count ratios of one format over another.
#[derive(Debug, Clone, Serialize)]
pub struct CountRatios {
    pub numerator: FormatKind,
    pub denominator: FormatKind,
    pub high: f64,
    pub special: f64,
    pub regular: f64,
}

/// Quantile comparison of two formats' fairness distributions; `true` means
/// the numerator format's quantile is no larger (it is at least as fair).
#[derive(Debug, Clone, Serialize)]
pub struct DominanceCheck {
    pub gamma: f64,
    pub numerator: FormatKind,
    pub denominator: FormatKind,
    pub q25_leq: bool,
    pub median_leq: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FairnessQuantiles {
    pub gamma: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

/// Fairness quantiles of a batch at a given exponent.
pub fn fairness_quantiles(runs: &[RunSample], gamma: f64) -> FairnessQuantiles {
    let mut samples: Vec<f64> = runs.iter().map(|r| r.fairness(gamma)).collect();
    samples.sort_by(|a, b| a.total_cmp(b));
    FairnessQuantiles {
        gamma,
        q25: quantile_sorted(&samples, 0.25),
        median: quantile_sorted(&samples, 0.5),
        q75: quantile_sorted(&samples, 0.75),
    }
}

/// Run the same batch settings over every format.
pub fn compare_formats(
    n_runs: usize,
    base_seed: u64,
    interest_threshold: u32,
    roster: &Roster,
) -> Result<ComparisonReport> {
    let mut formats = Vec::new();
    for format in FormatKind::ALL {
        let mut config = BatchConfig::new(format, n_runs, base_seed);
        config.interest_threshold = interest_threshold;
        let runs = collect_runs(&config, roster)?;
        let summary = summarize(&config, roster, &runs);
        let (high, special, regular) = summary.interest_ratios();
        let (mean_high, mean_special, mean_regular) = summary.mean_interest_counts();
        formats.push(FormatComparison {
            format,
            matches_per_run: summary.matches_per_run,
            fairness: [1.0, 2.0, 3.0]
                .iter()
                .map(|&g| fairness_quantiles(&runs, g))
                .collect(),
            mean_high_count: mean_high,
            mean_special_count: mean_special,
            mean_regular_count: mean_regular,
            interest_ratio_high: high,
            interest_ratio_special: special,
            interest_ratio_regular: regular,
            close_match_ratio: summary.close_match_ratio(),
            mean_rank_index: summary.tournament.mean_rank_index,
            baseline_mean_rank_index: summary.baseline.mean_rank_index,
        });
    }

    let entry = |kind: FormatKind| {
        formats
            .iter()
            .find(|f| f.format == kind)
            .expect("every format is compared")
    };
    let double_elim = entry(FormatKind::DoubleElim48);
    let mut count_ratios = Vec::new();
    let mut fairness_dominance = Vec::new();
    for denominator in [FormatKind::GroupOf3, FormatKind::GroupOf4] {
        let other = entry(denominator);
        count_ratios.push(CountRatios {
            numerator: double_elim.format,
            denominator,
            high: double_elim.mean_high_count / other.mean_high_count,
            special: double_elim.mean_special_count / other.mean_special_count,
            regular: double_elim.mean_regular_count / other.mean_regular_count,
        });
        for (de_q, other_q) in double_elim.fairness.iter().zip(&other.fairness) {
            fairness_dominance.push(DominanceCheck {
                gamma: de_q.gamma,
                numerator: double_elim.format,
                denominator,
                q25_leq: de_q.q25 <= other_q.q25,
                median_leq: de_q.median <= other_q.median,
            });
        }
    }
    Ok(ComparisonReport {
        n_runs,
        base_seed,
        interest_threshold,
        formats,
        count_ratios,
        fairness_dominance,
    })
}
