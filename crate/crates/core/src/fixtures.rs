//! Fixture plans.
//!
//! A plan is the static description of one tournament format: an ordered
//! list of fixtures whose team slots name where each side comes from (a draw
//! slot, an earlier result, a group standing, a ranked pool). Plan order is
//! topological by construction, so a runner can resolve fixtures front to
//! back, and a scheduler can derive rest dependencies without knowing team
//! identities.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::MatchMode;

/// 1-based fixture number, printed as M01, M02, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixtureId(pub u16);

impl FixtureId {
    /// Index into the plan's fixture vector.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{:02}", self.0)
    }
}

/// Where a fixture slot's team comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureSource {
    /// Slot of the pre-tournament draw, 0-based.
    DrawSlot(usize),
    WinnerOf(FixtureId),
    LoserOf(FixtureId),
    /// Standing inside a finished group; `place` is 1-based.
    GroupRank { group: usize, place: usize },
    /// 1-based ordinal in the ranking of all third-placed teams.
    BestThird(usize),
    /// 1-based ordinal in the ranking of the one-loss pool formed after the
    /// returnee gate resolves. Ordinals 1-2 re-enter the main bracket; the
    /// rest fill the next repechage round.
    Returnee(usize),
}

impl fmt::Display for FixtureSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSource::DrawSlot(s) => write!(f, "slot:{s}"),
            FixtureSource::WinnerOf(m) => write!(f, "winner:{m}"),
            FixtureSource::LoserOf(m) => write!(f, "loser:{m}"),
            FixtureSource::GroupRank { group, place } => write!(f, "group-rank:{group}:{place}"),
            FixtureSource::BestThird(k) => write!(f, "best-third:{k}"),
            FixtureSource::Returnee(k) => write!(f, "returnee:{k}"),
        }
    }
}

impl serde::Serialize for FormatKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}


/// Bracket a fixture belongs to; drives classification tiers, calendar rest
/// gaps and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracket {
    Main,
    Repechage,
    Group,
    Knockout,
    FinalStage,
}

impl Bracket {
    pub fn as_str(self) -> &'static str {
        match self {
            Bracket::Main => "main",
            Bracket::Repechage => "repechage",
            Bracket::Group => "group",
            Bracket::Knockout => "knockout",
            Bracket::FinalStage => "final-stage",
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub id: FixtureId,
    pub round_tag: &'static str,
    pub bracket: Bracket,
    /// 0-based group number for group-stage fixtures.
    pub group: Option<usize>,
    pub mode: MatchMode,
    pub home: FixtureSource,
    pub away: FixtureSource,
}

impl Fixture {
    pub fn sources(&self) -> [FixtureSource; 2] {
        [self.home, self.away]
    }
}

/// How final positions 1..=n are assigned once every fixture is resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRule {
    pub final_fixture: FixtureId,
    pub third_place_fixture: Option<FixtureId>,
    /// Elimination tiers, best first. Each tier is the set of fixtures whose
    /// losers leave the tournament at that stage; members are ordered within
    /// the tier by the standings comparator.
    pub tiers: Vec<Vec<FixtureId>>,
    /// Whether teams that never reach a non-group fixture form a final tier.
    pub group_stage_eliminated_tier: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormatKind {
    DoubleElim48,
    GroupOf3,
    GroupOf4,
}

impl FormatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormatKind::DoubleElim48 => "double-elim-48",
            FormatKind::GroupOf3 => "group-of-3",
            FormatKind::GroupOf4 => "group-of-4",
        }
    }

    pub const ALL: [FormatKind; 3] = [
        FormatKind::DoubleElim48,
        FormatKind::GroupOf3,
        FormatKind::GroupOf4,
    ];
}

impl fmt::Display for FormatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FormatKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "double-elim-48" => Ok(FormatKind::DoubleElim48),
            "group-of-3" => Ok(FormatKind::GroupOf3),
            "group-of-4" => Ok(FormatKind::GroupOf4),
            other => Err(format!(
                "unknown format '{other}' (expected double-elim-48, group-of-3 or group-of-4)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatPlan {
    pub format: FormatKind,
    pub team_count: usize,
    pub fixtures: Vec<Fixture>,
    pub classification: ClassificationRule,
    /// Fixtures that must all be resolved before any `Returnee` ordinal can
    /// be read: the one-loss pool is formed from their outcomes, and every
    /// pool member's latest match is one of them. Empty when the plan has no
    /// returnee step.
    pub returnee_gate: Vec<FixtureId>,
}

impl FormatPlan {
    pub fn fixture_count(&self) -> usize {
        self.fixtures.len()
    }

    pub fn fixture(&self, id: FixtureId) -> &Fixture {
        &self.fixtures[id.index()]
    }

    /// Fixtures the given fixture must wait for, as indices into the plan.
    /// This is the rest-dependency relation used by the scheduler: a slot
    /// fed by a result depends on that fixture; a slot fed by a standing or
    /// pool depends on every fixture that standing can observe; a draw slot
    /// depends on earlier fixtures using the same slot (round-robin
    /// chaining). The relation over-approximates team identity, never
    /// under-approximates it.
    pub fn predecessors(&self, idx: usize) -> Vec<usize> {
        let mut preds = Vec::new();
        for source in self.fixtures[idx].sources() {
            match source {
                FixtureSource::WinnerOf(m) | FixtureSource::LoserOf(m) => {
                    preds.push(m.index());
                }
                FixtureSource::DrawSlot(slot) => {
                    for (j, other) in self.fixtures.iter().enumerate().take(idx) {
                        if other
                            .sources()
                            .iter()
                            .any(|s| matches!(s, FixtureSource::DrawSlot(o) if *o == slot))
                        {
                            preds.push(j);
                        }
                    }
                }
                FixtureSource::GroupRank { group, .. } => {
                    for (j, other) in self.fixtures.iter().enumerate() {
                        if other.group == Some(group) {
                            preds.push(j);
                        }
                    }
                }
                FixtureSource::BestThird(_) => {
                    for (j, other) in self.fixtures.iter().enumerate() {
                        if other.bracket == Bracket::Group {
                            preds.push(j);
                        }
                    }
                }
                FixtureSource::Returnee(_) => {
                    preds.extend(self.returnee_gate.iter().map(|m| m.index()));
                }
            }
        }
        preds.sort_unstable();
        preds.dedup();
        preds
    }

    /// Structural sanity: sequential ids, only-backward references, draw
    /// slots used the right number of times, results consumed at most once
    /// per role, pool ordinals distinct, classification fixtures present.
    pub fn validate(&self) -> Result<()> {
        let n = self.fixtures.len();
        let fail = |msg: String| Err(Error::InvalidPlan(msg));

        for (i, fx) in self.fixtures.iter().enumerate() {
            if fx.id.index() != i {
                return fail(format!("fixture {} out of sequence at {}", fx.id, i));
            }
            if (fx.bracket == Bracket::Group) != fx.group.is_some() {
                return fail(format!("fixture {} group tag mismatch", fx.id));
            }
        }

        let mut slot_uses = vec![0usize; self.team_count];
        let mut winner_refs = vec![0usize; n];
        let mut loser_refs = vec![0usize; n];
        let mut returnee_ordinals = std::collections::HashSet::new();
        let mut third_ordinals = std::collections::HashSet::new();
        let mut group_places = std::collections::HashSet::new();

        for (i, fx) in self.fixtures.iter().enumerate() {
            for source in fx.sources() {
                match source {
                    FixtureSource::DrawSlot(s) => {
                        if s >= self.team_count {
                            return fail(format!("fixture {} uses slot {s}", fx.id));
                        }
                        slot_uses[s] += 1;
                    }
                    FixtureSource::WinnerOf(m) => {
                        if m.index() >= i {
                            return fail(format!("fixture {} reads future {m}", fx.id));
                        }
                        winner_refs[m.index()] += 1;
                    }
                    FixtureSource::LoserOf(m) => {
                        if m.index() >= i {
                            return fail(format!("fixture {} reads future {m}", fx.id));
                        }
                        if self.fixtures[m.index()].mode != MatchMode::MustDecide {
                            return fail(format!("fixture {} reads loser of open {m}", fx.id));
                        }
                        loser_refs[m.index()] += 1;
                    }
                    FixtureSource::GroupRank { group, place } => {
                        if place < 1 || !group_places.insert((group, place)) {
                            return fail(format!("fixture {} duplicate standing", fx.id));
                        }
                    }
                    FixtureSource::BestThird(k) => {
                        if k < 1 || !third_ordinals.insert(k) {
                            return fail(format!("fixture {} duplicate third ordinal", fx.id));
                        }
                    }
                    FixtureSource::Returnee(k) => {
                        if k < 1 || !returnee_ordinals.insert(k) {
                            return fail(format!("fixture {} duplicate returnee ordinal", fx.id));
                        }
                    }
                }
            }
            if matches!(fx.home, FixtureSource::WinnerOf(m) | FixtureSource::LoserOf(m) if m == fx.id)
                || matches!(fx.away, FixtureSource::WinnerOf(m) | FixtureSource::LoserOf(m) if m == fx.id)
            {
                return fail(format!("fixture {} references itself", fx.id));
            }
        }

        // Every draw slot enters the bracket exactly once, except group
        // formats where a slot plays each group round.
        let expected_uses = slot_uses[0];
        if expected_uses == 0 {
            return fail("slot 0 never used".into());
        }
        if let Some(s) = slot_uses.iter().position(|&u| u != expected_uses) {
            return fail(format!("slot {s} used {} times, expected {expected_uses}", slot_uses[s]));
        }
        for (j, (&w, &l)) in winner_refs.iter().zip(&loser_refs).enumerate() {
            if w > 1 || l > 1 {
                return fail(format!("fixture M{:02} result consumed twice", j + 1));
            }
        }

        let exists = |id: FixtureId| id.index() < n;
        if !exists(self.classification.final_fixture) {
            return fail("final fixture missing".into());
        }
        if let Some(tp) = self.classification.third_place_fixture {
            if !exists(tp) {
                return fail("third-place fixture missing".into());
            }
        }
        let mut seen_tier_fixture = std::collections::HashSet::new();
        for tier in &self.classification.tiers {
            for &id in tier {
                if !exists(id) || !seen_tier_fixture.insert(id) {
                    return fail(format!("bad tier fixture {id}"));
                }
                if self.fixtures[id.index()].mode != MatchMode::MustDecide {
                    return fail(format!("tier fixture {id} cannot eliminate"));
                }
            }
        }
        for &id in &self.returnee_gate {
            if !exists(id) {
                return fail(format!("returnee gate fixture {id} missing"));
            }
        }
        Ok(())
    }
}
