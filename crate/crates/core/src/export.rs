//! Plot-ready and machine-readable exports.
//!
//! Writers are generic over `io::Write` and fully deterministic: given equal
//! inputs they emit identical bytes, which is what the reproducibility
//! guarantee of batches is checked against. Histograms and curves go to CSV,
//! structured objects to JSON.

use std::io::Write;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::fixtures::FormatPlan;
use crate::metrics::{MatchMetric, RANK_INDEX_BIN_WIDTH};
use crate::model::CurveRow;
use crate::montecarlo::{BatchSummary, ComparisonReport, RunSample};
use crate::runner::TournamentResult;
use crate::schedule::ScheduleAssignment;
use crate::team::Roster;

/// Fixture list as JSON, sources encoded as labels like `winner:M05`.
pub fn write_plan_json<W: Write>(plan: &FormatPlan, mut out: W) -> Result<()> {
    let fixtures: Vec<serde_json::Value> = plan
        .fixtures
        .iter()
        .map(|f| {
            serde_json::json!({
                "id": f.id.to_string(),
                "round_tag": f.round_tag,
                "bracket": f.bracket.as_str(),
                "group": f.group,
                "mode": f.mode,
                "home_source": f.home.to_string(),
                "away_source": f.away.to_string(),
            })
        })
        .collect();
    let tiers: Vec<Vec<String>> = plan
        .classification
        .tiers
        .iter()
        .map(|tier| tier.iter().map(|id| id.to_string()).collect())
        .collect();
    let value = serde_json::json!({
        "format": plan.format,
        "team_count": plan.team_count,
        "fixture_count": plan.fixture_count(),
        "fixtures": fixtures,
        "classification": {
            "final": plan.classification.final_fixture.to_string(),
            "third_place": plan.classification.third_place_fixture.map(|id| id.to_string()),
            "elimination_tiers": tiers,
            "group_stage_eliminated_tier": plan.classification.group_stage_eliminated_tier,
        },
        "returnee_gate": plan.returnee_gate.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
    });
    serde_json::to_writer_pretty(&mut out, &value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// One run's played matches: `fixture_id,home,away,home_goals,away_goals,shootout_winner`.
pub fn write_match_log_csv<W: Write>(
    result: &TournamentResult,
    roster: &Roster,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fixture_id", "home", "away", "home_goals", "away_goals", "shootout_winner"])?;
    for m in &result.match_log {
        let shootout = m
            .score
            .shootout_winner
            .map(|side| match side {
                crate::model::Side::Home => roster.team(m.home).id.as_str(),
                crate::model::Side::Away => roster.team(m.away).id.as_str(),
            })
            .unwrap_or("");
        w.write_record([
            m.fixture.to_string().as_str(),
            roster.team(m.home).id.as_str(),
            roster.team(m.away).id.as_str(),
            m.score.home_goals.to_string().as_str(),
            m.score.away_goals.to_string().as_str(),
            shootout,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Final positions with full records.
pub fn write_classification_csv<W: Write>(
    result: &TournamentResult,
    roster: &Roster,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "position",
        "team",
        "fifa_rank",
        "points",
        "wins",
        "draws",
        "losses",
        "goals_for",
        "goals_against",
        "matches_played",
    ])?;
    for (idx, &team) in result.classification.iter().enumerate() {
        let rec = &result.records[team];
        w.write_record([
            (idx + 1).to_string().as_str(),
            roster.team(team).id.as_str(),
            roster.rank(team).to_string().as_str(),
            rec.points.to_string().as_str(),
            rec.wins.to_string().as_str(),
            rec.draws.to_string().as_str(),
            rec.losses.to_string().as_str(),
            rec.goals_for.to_string().as_str(),
            rec.goals_against.to_string().as_str(),
            rec.matches_played().to_string().as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-match pairing metrics of a single run.
pub fn write_single_run_metrics_csv<W: Write>(metrics: &[MatchMetric], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "fixture_id",
        "round_tag",
        "bracket",
        "home_rank",
        "away_rank",
        "rank_index",
        "rank_distance",
        "interest",
    ])?;
    for m in metrics {
        w.write_record([
            m.fixture_id.as_str(),
            m.round_tag,
            m.bracket,
            m.home_rank.to_string().as_str(),
            m.away_rank.to_string().as_str(),
            format!("{:.3}", m.rank_index).as_str(),
            m.rank_distance.to_string().as_str(),
            m.interest.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-match pairing metrics across a whole batch:
/// `run_id,fixture_id,rank_index,rank_distance,interest`.
pub fn write_batch_metrics_csv<W: Write>(
    plan: &FormatPlan,
    runs: &[RunSample],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run_id", "fixture_id", "rank_index", "rank_distance", "interest"])?;
    for run in runs {
        for (j, fixture) in plan.fixtures.iter().enumerate() {
            w.write_record([
                run.run_index.to_string().as_str(),
                fixture.id.to_string().as_str(),
                format!("{:.3}", run.rank_indices[j]).as_str(),
                run.rank_distances[j].to_string().as_str(),
                run.interest[j].as_str(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-run fairness samples: `run_id,fairness_index`.
pub fn write_fairness_samples_csv<W: Write>(samples: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run_id", "fairness_index"])?;
    for (run, value) in samples.iter().enumerate() {
        w.write_record([run.to_string().as_str(), format!("{value:.6}").as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Empirical fairness CDF, plot-ready: `fairness_index,cumulative_share`.
pub fn write_fairness_cdf_csv<W: Write>(samples: &[f64], out: W) -> Result<()> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fairness_index", "cumulative_share"])?;
    for (i, value) in sorted.iter().enumerate() {
        w.write_record([
            format!("{value:.6}").as_str(),
            format!("{:.6}", (i + 1) as f64 / n).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Rank-index histogram, tournament vs baseline, one row per 5-wide bin.
pub fn write_rank_index_hist_csv<W: Write>(summary: &BatchSummary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "bin_low",
        "bin_high",
        "tournament_count",
        "tournament_share",
        "baseline_count",
        "baseline_share",
    ])?;
    let t = &summary.tournament;
    let b = &summary.baseline;
    for (bin, (&tc, &bc)) in t
        .rank_index_histogram
        .iter()
        .zip(&b.rank_index_histogram)
        .enumerate()
    {
        let low = bin as f64 * RANK_INDEX_BIN_WIDTH;
        w.write_record([
            format!("{low:.0}").as_str(),
            format!("{:.0}", low + RANK_INDEX_BIN_WIDTH).as_str(),
            tc.to_string().as_str(),
            format!("{:.6}", tc as f64 / t.matches as f64).as_str(),
            bc.to_string().as_str(),
            format!("{:.6}", bc as f64 / b.matches as f64).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Rank-distance histogram, tournament vs baseline, one row per distance.
pub fn write_rank_distance_hist_csv<W: Write>(summary: &BatchSummary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "rank_distance",
        "tournament_count",
        "tournament_share",
        "baseline_count",
        "baseline_share",
    ])?;
    let t = &summary.tournament;
    let b = &summary.baseline;
    let width = t.rank_distance_histogram.len().max(b.rank_distance_histogram.len());
    for d in 0..width {
        let tc = t.rank_distance_histogram.get(d).copied().unwrap_or(0);
        let bc = b.rank_distance_histogram.get(d).copied().unwrap_or(0);
        w.write_record([
            d.to_string().as_str(),
            tc.to_string().as_str(),
            format!("{:.6}", tc as f64 / t.matches as f64).as_str(),
            bc.to_string().as_str(),
            format!("{:.6}", bc as f64 / b.matches as f64).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Distribution of per-run interest counts: `count,high_runs,special_runs,regular_runs`.
pub fn write_interest_counts_csv<W: Write>(summary: &BatchSummary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["count", "high_runs", "special_runs", "regular_runs"])?;
    let dists = &summary.interest_count_runs;
    let width = dists.iter().map(Vec::len).max().unwrap_or(0);
    for count in 0..width {
        let at = |i: usize| dists[i].get(count).copied().unwrap_or(0).to_string();
        w.write_record([count.to_string().as_str(), at(0).as_str(), at(1).as_str(), at(2).as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Batch summary as pretty JSON.
pub fn write_summary_json<W: Write>(summary: &BatchSummary, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Three-format comparison as pretty JSON.
pub fn write_comparison_json<W: Write>(report: &ComparisonReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Calendar rows `date,fixture_id,round_tag,bracket`, ordered by date then
/// fixture id; day 0 maps to `start_date`.
pub fn write_calendar_csv<W: Write>(
    plan: &FormatPlan,
    assignment: &ScheduleAssignment,
    start_date: NaiveDate,
    out: W,
) -> Result<()> {
    let mut order: Vec<usize> = (0..plan.fixture_count()).collect();
    order.sort_by_key(|&i| (assignment.days[i], plan.fixtures[i].id));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "fixture_id", "round_tag", "bracket"])?;
    for i in order {
        let date = start_date
            .checked_add_days(chrono::Days::new(assignment.days[i] as u64))
            .ok_or(Error::ConfigMismatch("calendar date out of range"))?;
        let f = &plan.fixtures[i];
        w.write_record([
            date.to_string().as_str(),
            f.id.to_string().as_str(),
            f.round_tag,
            f.bracket.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Duration-vs-capacity curve: `max_per_day,duration_days`.
pub fn write_duration_curve_csv<W: Write>(curve: &[(usize, u32)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["max_per_day", "duration_days"])?;
    for &(cap, duration) in curve {
        w.write_record([cap.to_string().as_str(), duration.to_string().as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Analytic outcome curve: `rank_diff,p_win,p_draw,p_loss`.
pub fn write_model_curve_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank_diff", "p_win", "p_draw", "p_loss"])?;
    for row in rows {
        w.write_record([
            row.rank_diff.to_string().as_str(),
            format!("{:.6}", row.p_win).as_str(),
            format!("{:.6}", row.p_draw).as_str(),
            format!("{:.6}", row.p_loss).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
