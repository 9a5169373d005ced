//! Calendar assignment.
//!
//! Fixtures are processed in plan order and dropped onto the earliest day
//! that (a) leaves every predecessor at least the applicable rest gap behind
//! and (b) still has capacity. Rest is enforced on the dependency graph —
//! a fixture waits on everything that can feed it a team — because the
//! calendar is fixed before identities are known; this over-approximates and
//! therefore guarantees per-team rest. The pass is deterministic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::{Bracket, FormatPlan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleParams {
    /// Explicit capacities for the first days (day 0 onward); models
    /// higher-volume opening days or blank travel days (capacity 0).
    pub per_day: Vec<usize>,
    /// Capacity of every day past the explicit prefix. `None` ends the
    /// horizon there.
    pub default_per_day: Option<usize>,
    /// Minimum day gap after a predecessor for regular fixtures.
    pub rest_days: u32,
    /// Gap for repechage fixtures; a second-chance bracket accepts shorter
    /// rest to fit the window.
    pub repechage_rest_days: u32,
}

impl ScheduleParams {
    /// Uniform capacity, unbounded horizon.
    pub fn uniform(max_per_day: usize, rest_days: u32, repechage_rest_days: u32) -> Self {
        ScheduleParams {
            per_day: Vec::new(),
            default_per_day: Some(max_per_day),
            rest_days,
            repechage_rest_days,
        }
    }

    fn capacity(&self, day: usize) -> Option<usize> {
        self.per_day.get(day).copied().or(self.default_per_day)
    }

    fn validate(&self) -> Result<()> {
        if self.default_per_day == Some(0) {
            return Err(Error::ConfigMismatch("default per-day capacity must be positive"));
        }
        if self.rest_days < 1 || self.repechage_rest_days < 1 {
            return Err(Error::ConfigMismatch("rest gaps must be at least 1 day"));
        }
        if self.repechage_rest_days > self.rest_days {
            return Err(Error::ConfigMismatch("repechage rest cannot exceed regular rest"));
        }
        Ok(())
    }
}

/// A computed calendar: day index per fixture, in plan order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleAssignment {
    pub days: Vec<u32>,
    /// Number of distinct days from first to last matchday inclusive.
    pub duration: u32,
}

impl ScheduleAssignment {
    /// Fixtures per day, indexed by day.
    pub fn load_profile(&self) -> Vec<usize> {
        let mut profile = vec![0usize; self.duration as usize];
        for &d in &self.days {
            profile[d as usize] += 1;
        }
        profile
    }
}

/// Greedily place every fixture of the plan.
pub fn schedule(plan: &FormatPlan, params: &ScheduleParams) -> Result<ScheduleAssignment> {
    params.validate()?;
    let n = plan.fixture_count();
    let mut days = vec![0u32; n];
    let mut used: Vec<usize> = Vec::new();

    for i in 0..n {
        let gap = if plan.fixtures[i].bracket == Bracket::Repechage {
            params.repechage_rest_days
        } else {
            params.rest_days
        };
        let earliest = plan
            .predecessors(i)
            .into_iter()
            .map(|p| days[p] + gap)
            .max()
            .unwrap_or(0);

        let mut day = earliest as usize;
        loop {
            let Some(cap) = params.capacity(day) else {
                return Err(Error::CapacityExhausted { day, unplaced: n - i });
            };
            if used.len() <= day {
                used.resize(day + 1, 0);
            }
            if used[day] < cap {
                used[day] += 1;
                days[i] = day as u32;
                break;
            }
            day += 1;
        }
    }

    let duration = days.iter().max().map_or(0, |&d| d + 1);
    Ok(ScheduleAssignment { days, duration })
}

/// Duration as a function of uniform daily capacity, for the given rests.
pub fn duration_curve(
    plan: &FormatPlan,
    capacities: impl IntoIterator<Item = usize>,
    rest_days: u32,
    repechage_rest_days: u32,
) -> Result<Vec<(usize, u32)>> {
    capacities
        .into_iter()
        .map(|cap| {
            let params = ScheduleParams::uniform(cap, rest_days, repechage_rest_days);
            schedule(plan, &params).map(|assignment| (cap, assignment.duration))
        })
        .collect()
}
