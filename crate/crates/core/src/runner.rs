//! Tournament execution.
//!
//! A run takes a plan, a roster and a seeded RNG stream, and resolves every
//! fixture front to back. Per run, randomness is consumed in a fixed order —
//! draw shuffle, lot shuffle, then each fixture's goals (home first) and
//! shootout coin — so a run is a pure function of (plan, roster, stream).

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::fixtures::{Bracket, Fixture, FixtureId, FixtureSource, FormatKind, FormatPlan};
use crate::model::{play_match, MatchMode, MatchScore, Side};
use crate::rng::SimRng;
use crate::standings::{rank_teams, TeamRecord};
use crate::team::{Roster, TeamIdx};

/// One resolved fixture: who played and what the score was.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub fixture: FixtureId,
    pub home: TeamIdx,
    pub away: TeamIdx,
    pub score: MatchScore,
}

impl MatchRecord {
    pub fn winner(&self) -> Option<TeamIdx> {
        self.score.winner().map(|side| match side {
            Side::Home => self.home,
            Side::Away => self.away,
        })
    }

    pub fn loser(&self) -> Option<TeamIdx> {
        self.score.winner().map(|side| match side {
            Side::Home => self.away,
            Side::Away => self.home,
        })
    }
}

/// Everything a finished run exposes to metrics and exports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentResult {
    pub format: FormatKind,
    /// Draw slot -> team.
    pub draw: Vec<TeamIdx>,
    /// Team -> lot priority (lower wins exact ties).
    pub lot: Vec<u32>,
    pub match_log: Vec<MatchRecord>,
    /// Team -> accumulated record.
    pub records: Vec<TeamRecord>,
    /// Final position (0-based, best first) -> team.
    pub classification: Vec<TeamIdx>,
    /// Teams the returnee step promoted back into the main bracket.
    pub promoted: Vec<TeamIdx>,
}

impl TournamentResult {
    /// Matches played by a team, from its record.
    pub fn matches_played(&self, team: TeamIdx) -> u32 {
        self.records[team].matches_played()
    }

    /// Final position of a team, 1-based.
    pub fn position_of(&self, team: TeamIdx) -> usize {
        1 + self.classification.iter().position(|&t| t == team).unwrap()
    }
}

/// Shuffle teams onto draw slots.
fn draw_slots(team_count: usize, rng: &mut SimRng) -> Vec<TeamIdx> {
    let mut slots: Vec<TeamIdx> = (0..team_count).collect();
    slots.shuffle(rng);
    slots
}

/// Pre-draw the tie-breaking lot: a random permutation read as priority.
fn draw_lot(team_count: usize, rng: &mut SimRng) -> Vec<u32> {
    let mut order: Vec<TeamIdx> = (0..team_count).collect();
    order.shuffle(rng);
    let mut lot = vec![0u32; team_count];
    for (priority, &team) in order.iter().enumerate() {
        lot[team] = priority as u32;
    }
    lot
}

/// Run a tournament with model-driven scores.
pub fn run_tournament(
    plan: &FormatPlan,
    roster: &Roster,
    rng: &mut SimRng,
) -> Result<TournamentResult> {
    if roster.len() != plan.team_count {
        return Err(Error::RosterSize { expected: plan.team_count, got: roster.len() });
    }
    let draw = draw_slots(plan.team_count, rng);
    let lot = draw_lot(plan.team_count, rng);
    run_with_resolver(plan, draw, lot, |fixture, home, away| {
        play_match(roster.rank(home), roster.rank(away), fixture.mode, rng)
    })
}

/// Run a tournament with caller-supplied draw, lot and score resolver.
/// Tests use this to enumerate outcome patterns exhaustively.
pub fn run_with_resolver(
    plan: &FormatPlan,
    draw: Vec<TeamIdx>,
    lot: Vec<u32>,
    mut resolve: impl FnMut(&Fixture, TeamIdx, TeamIdx) -> MatchScore,
) -> Result<TournamentResult> {
    let mut state = RunState::new(plan, draw, lot);
    for fixture in &plan.fixtures {
        let home = state.source_team(fixture.home)?;
        let away = state.source_team(fixture.away)?;
        debug_assert!(home != away, "{} pits a team against itself", fixture.id);
        let score = resolve(fixture, home, away);
        state.absorb(fixture, home, away, score)?;
        if plan.returnee_gate.last() == Some(&fixture.id) {
            state.form_returnee_pool()?;
        }
    }
    state.finish()
}

struct RunState<'p> {
    plan: &'p FormatPlan,
    draw: Vec<TeamIdx>,
    lot: Vec<u32>,
    records: Vec<TeamRecord>,
    /// Bracket defeats; two mean elimination. Reset by returnee promotion.
    strikes: Vec<u8>,
    /// met[a * n + b]: the two teams have already faced each other.
    met: Vec<bool>,
    match_log: Vec<MatchRecord>,
    /// Fixture index -> (winner, loser) once decided.
    decided: Vec<Option<(TeamIdx, TeamIdx)>>,
    /// Group standings snapshot, frozen at first use.
    group_tables: Option<Vec<Vec<TeamIdx>>>,
    /// Ranked third-placed teams, frozen with the group tables.
    thirds: Option<Vec<TeamIdx>>,
    /// Ordinal -> team, formed once the returnee gate closes.
    returnees: Option<Vec<TeamIdx>>,
    promoted: Vec<TeamIdx>,
}

impl<'p> RunState<'p> {
    fn new(plan: &'p FormatPlan, draw: Vec<TeamIdx>, lot: Vec<u32>) -> Self {
        let n = plan.team_count;
        RunState {
            plan,
            draw,
            lot,
            records: vec![TeamRecord::default(); n],
            strikes: vec![0; n],
            met: vec![false; n * n],
            match_log: Vec::with_capacity(plan.fixture_count()),
            decided: vec![None; plan.fixture_count()],
            group_tables: None,
            thirds: None,
            returnees: None,
            promoted: Vec::new(),
        }
    }

    fn have_met(&self, a: TeamIdx, b: TeamIdx) -> bool {
        self.met[a * self.plan.team_count + b]
    }

    fn source_team(&mut self, source: FixtureSource) -> Result<TeamIdx> {
        match source {
            FixtureSource::DrawSlot(slot) => Ok(self.draw[slot]),
            FixtureSource::WinnerOf(m) => self
                .decided[m.index()]
                .map(|(w, _)| w)
                .ok_or_else(|| Error::UndecidedFixture(m.to_string())),
            FixtureSource::LoserOf(m) => self
                .decided[m.index()]
                .map(|(_, l)| l)
                .ok_or_else(|| Error::UndecidedFixture(m.to_string())),
            FixtureSource::GroupRank { group, place } => {
                self.freeze_group_tables();
                Ok(self.group_tables.as_ref().unwrap()[group][place - 1])
            }
            FixtureSource::BestThird(ordinal) => {
                self.freeze_group_tables();
                Ok(self.thirds.as_ref().unwrap()[ordinal - 1])
            }
            FixtureSource::Returnee(ordinal) => self
                .returnees
                .as_ref()
                .map(|pool| pool[ordinal - 1])
                .ok_or_else(|| Error::UndecidedFixture("returnee pool".into())),
        }
    }

    fn absorb(
        &mut self,
        fixture: &Fixture,
        home: TeamIdx,
        away: TeamIdx,
        score: MatchScore,
    ) -> Result<()> {
        // Two defeats end a team's tournament, with one sanctioned
        // exception: semifinal losers contest the third-place match.
        debug_assert!(
            fixture.bracket == Bracket::FinalStage
                || (self.strikes[home] < 2 && self.strikes[away] < 2),
            "{} fields an eliminated team",
            fixture.id
        );
        self.records[home].absorb(&score, Side::Home);
        self.records[away].absorb(&score, Side::Away);
        let n = self.plan.team_count;
        self.met[home * n + away] = true;
        self.met[away * n + home] = true;

        match score.winner() {
            Some(side) => {
                let (winner, loser) = match side {
                    Side::Home => (home, away),
                    Side::Away => (away, home),
                };
                self.decided[fixture.id.index()] = Some((winner, loser));
                // A defeat in any eliminatory bracket is a strike; group
                // results never strike (the table decides there).
                if fixture.bracket != Bracket::Group {
                    self.strikes[loser] += 1;
                }
            }
            None if fixture.mode == MatchMode::MustDecide => {
                return Err(Error::UndecidedFixture(fixture.id.to_string()));
            }
            None => {}
        }
        self.match_log.push(MatchRecord { fixture: fixture.id, home, away, score });
        Ok(())
    }

    /// Rank each group's teams and the third-placed pool. Called at the
    /// first standings read, which plan order places after the last group
    /// fixture and before any knockout result could contaminate records.
    fn freeze_group_tables(&mut self) {
        if self.group_tables.is_some() {
            return;
        }
        let group_count = self
            .plan
            .fixtures
            .iter()
            .filter_map(|f| f.group)
            .max()
            .map_or(0, |g| g + 1);
        let mut members: Vec<Vec<TeamIdx>> = vec![Vec::new(); group_count];
        for fixture in self.plan.fixtures.iter().filter(|f| f.group.is_some()) {
            let group = fixture.group.unwrap();
            for source in fixture.sources() {
                if let FixtureSource::DrawSlot(slot) = source {
                    let team = self.draw[slot];
                    if !members[group].contains(&team) {
                        members[group].push(team);
                    }
                }
            }
        }
        let tables: Vec<Vec<TeamIdx>> = members
            .iter()
            .map(|teams| rank_teams(teams, &self.records, &self.lot))
            .collect();
        let third_placed: Vec<TeamIdx> =
            tables.iter().filter(|t| t.len() >= 3).map(|t| t[2]).collect();
        self.thirds = Some(rank_teams(&third_placed, &self.records, &self.lot));
        self.group_tables = Some(tables);
    }

    /// Build the returnee pool: rank the one-strike survivors, promote the
    /// top two (their slate wiped), and line the rest up for the repechage,
    /// nudging assignments where a swap avoids a rematch.
    fn form_returnee_pool(&mut self) -> Result<()> {
        let candidates: Vec<TeamIdx> =
            (0..self.plan.team_count).filter(|&t| self.strikes[t] == 1).collect();
        let expected = self
            .plan
            .fixtures
            .iter()
            .flat_map(|f| f.sources())
            .filter(|s| matches!(s, FixtureSource::Returnee(_)))
            .count();
        if candidates.len() != expected {
            return Err(Error::BadCandidateCount(candidates.len()));
        }
        let mut pool = rank_teams(&candidates, &self.records, &self.lot);

        // The two promoted teams face known opponents (the winners feeding
        // the main-bracket slots). Swap their order if that avoids a repeat
        // pairing; a tie keeps comparator order.
        let mut fixed: Vec<(usize, TeamIdx)> = self
            .plan
            .fixtures
            .iter()
            .filter_map(|f| match (f.home, f.away) {
                (FixtureSource::WinnerOf(m), FixtureSource::Returnee(k)) if k <= 2 => {
                    self.decided[m.index()].map(|(w, _)| (k, w))
                }
                _ => None,
            })
            .collect();
        fixed.sort_unstable_by_key(|&(k, _)| k);
        let fixed: Vec<TeamIdx> = fixed.into_iter().map(|(_, w)| w).collect();
        if fixed.len() == 2 && pool.len() >= 2 {
            let conflicts = |first: TeamIdx, second: TeamIdx| {
                self.have_met(first, fixed[0]) as u32 + self.have_met(second, fixed[1]) as u32
            };
            if conflicts(pool[1], pool[0]) < conflicts(pool[0], pool[1]) {
                pool.swap(0, 1);
            }
        }

        // Repechage pairings fold the pool: ordinal 3+k hosts 11+k. Walk the
        // pairs left to right and swap away-side ordinals when that clears a
        // rematch without creating one earlier.
        let pairs: Vec<(usize, usize)> = self
            .plan
            .fixtures
            .iter()
            .filter_map(|f| match (f.home, f.away) {
                (FixtureSource::Returnee(h), FixtureSource::Returnee(a)) => {
                    Some((h - 1, a - 1))
                }
                _ => None,
            })
            .collect();
        for i in 0..pairs.len() {
            let (h, a) = pairs[i];
            if !self.have_met(pool[h], pool[a]) {
                continue;
            }
            for &(h2, a2) in &pairs[i + 1..] {
                if !self.have_met(pool[h], pool[a2]) && !self.have_met(pool[h2], pool[a]) {
                    pool.swap(a, a2);
                    break;
                }
            }
        }

        // Promotion clears bracket strikes; records are untouched.
        for k in 0..fixed.len().min(pool.len()) {
            self.strikes[pool[k]] = 0;
            self.promoted.push(pool[k]);
        }
        self.returnees = Some(pool);
        Ok(())
    }

    fn decided_of(&self, id: FixtureId) -> Result<(TeamIdx, TeamIdx)> {
        self.decided[id.index()].ok_or_else(|| Error::UndecidedFixture(id.to_string()))
    }

    /// Assign final positions 1..=n.
    fn finish(self) -> Result<TournamentResult> {
        let n = self.plan.team_count;
        let rule = &self.plan.classification;
        let mut classification = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        let place = |teams: &[TeamIdx], classification: &mut Vec<TeamIdx>,
                         placed: &mut Vec<bool>|
         -> Result<()> {
            for &t in teams {
                if std::mem::replace(&mut placed[t], true) {
                    return Err(Error::InvalidPlan(format!("team {t} classified twice")));
                }
                classification.push(t);
            }
            Ok(())
        };

        let (champion, runner_up) = self.decided_of(rule.final_fixture)?;
        place(&[champion, runner_up], &mut classification, &mut placed)?;
        if let Some(third) = rule.third_place_fixture {
            let (w, l) = self.decided_of(third)?;
            place(&[w, l], &mut classification, &mut placed)?;
        }
        for tier in &rule.tiers {
            let losers: Vec<TeamIdx> = tier
                .iter()
                .map(|&id| self.decided_of(id).map(|(_, l)| l))
                .collect::<Result<_>>()?;
            let ranked = rank_teams(&losers, &self.records, &self.lot);
            place(&ranked, &mut classification, &mut placed)?;
        }
        if rule.group_stage_eliminated_tier {
            let rest: Vec<TeamIdx> = (0..n).filter(|&t| !placed[t]).collect();
            let ranked = rank_teams(&rest, &self.records, &self.lot);
            place(&ranked, &mut classification, &mut placed)?;
        }
        if classification.len() != n {
            return Err(Error::InvalidPlan(format!(
                "classification covers {} of {n} teams",
                classification.len()
            )));
        }

        Ok(TournamentResult {
            format: self.plan.format,
            draw: self.draw,
            lot: self.lot,
            match_log: self.match_log,
            records: self.records,
            classification,
            promoted: self.promoted,
        })
    }
}
