//! Per-team records and the standings comparator.
//!
//! One record accumulates across the whole tournament: regulation wins are
//! worth 3 points, draws 1 (a shootout settles advancement, not the record),
//! losses 0. Ties between records break on points, goal difference, goals
//! scored, and finally a pre-drawn lot so every ordering is total and
//! reproducible.

use serde::Serialize;

use crate::model::{MatchScore, Side};
use crate::team::TeamIdx;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TeamRecord {
    pub points: u32,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    pub goals_for: u32,
    pub goals_against: u32,
    /// Draws this team went on to lose on penalties; informational, already
    /// counted inside `draws`.
    pub shootout_losses: u32,
}

impl TeamRecord {
    pub fn matches_played(&self) -> u32 {
        self.wins + self.draws + self.losses
    }

    pub fn goal_difference(&self) -> i64 {
        self.goals_for as i64 - self.goals_against as i64
    }

    /// Fold one match result into this record. `side` is the side this team
    /// played on.
    pub fn absorb(&mut self, score: &MatchScore, side: Side) {
        let (scored, conceded) = match side {
            Side::Home => (score.home_goals, score.away_goals),
            Side::Away => (score.away_goals, score.home_goals),
        };
        self.goals_for += scored;
        self.goals_against += conceded;
        if scored > conceded {
            self.points += 3;
            self.wins += 1;
        } else if scored < conceded {
            self.losses += 1;
        } else {
            self.points += 1;
            self.draws += 1;
            if score.shootout_winner.is_some_and(|w| w != side) {
                self.shootout_losses += 1;
            }
        }
    }

    /// Sort key, best first when compared ascending: more points, better
    /// goal difference, more goals scored.
    fn strength_key(&self) -> (i64, i64, i64) {
        (
            -(self.points as i64),
            -self.goal_difference(),
            -(self.goals_for as i64),
        )
    }
}

/// Order team indices best-first by record, breaking exact ties with `lot`
/// (lower lot value wins the coin toss). `lot[t]` must be distinct per team.
pub fn rank_teams(teams: &[TeamIdx], records: &[TeamRecord], lot: &[u32]) -> Vec<TeamIdx> {
    let mut ranked = teams.to_vec();
    ranked.sort_by_key(|&t| (records[t].strength_key(), lot[t]));
    ranked
}

/// `a` strictly better than `b` without consulting the lot.
pub fn strictly_better(a: &TeamRecord, b: &TeamRecord) -> bool {
    a.strength_key() < b.strength_key()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn score(h: u32, a: u32) -> MatchScore {
        MatchScore { home_goals: h, away_goals: a, shootout_winner: None }
    }

    #[test]
    fn points_follow_the_three_one_zero_rule() {
        let mut rec = TeamRecord::default();
        rec.absorb(&score(2, 0), Side::Home);
        rec.absorb(&score(1, 1), Side::Away);
        rec.absorb(&score(3, 1), Side::Away);
        assert_eq!(rec.points, 3 + 1);
        assert_eq!((rec.wins, rec.draws, rec.losses), (1, 1, 1));
        assert_eq!(rec.matches_played(), 3);
        assert_eq!(rec.goals_for, 2 + 1 + 1);
        assert_eq!(rec.goals_against, 1 + 3);
        assert_eq!(rec.goal_difference(), 0);
    }

    #[test]
    fn shootout_keeps_the_draw_but_marks_the_loser() {
        let decided = MatchScore {
            home_goals: 2,
            away_goals: 2,
            shootout_winner: Some(Side::Away),
        };
        let mut home = TeamRecord::default();
        let mut away = TeamRecord::default();
        home.absorb(&decided, Side::Home);
        away.absorb(&decided, Side::Away);
        assert_eq!(home.points, 1);
        assert_eq!(away.points, 1);
        assert_eq!(home.draws, 1);
        assert_eq!(home.shootout_losses, 1);
        assert_eq!(away.shootout_losses, 0);
        assert_eq!(home.losses, 0, "a shootout defeat is not a loss on record");
    }

    #[test]
    fn ranking_breaks_ties_in_comparator_order() {
        // t0: 4 pts; t1: 4 pts, worse GD; t2: 4 pts, same GD as t0, fewer
        // scored; t3: identical to t0 but loses the lot.
        let mut records = vec![TeamRecord::default(); 4];
        for rec in &mut records {
            rec.points = 4;
        }
        records[0].goals_for = 5;
        records[0].goals_against = 2;
        records[1].goals_for = 5;
        records[1].goals_against = 4;
        records[2].goals_for = 4;
        records[2].goals_against = 1;
        records[3].goals_for = 5;
        records[3].goals_against = 2;
        let lot = vec![0, 1, 2, 3];
        let ranked = rank_teams(&[0, 1, 2, 3], &records, &lot);
        assert_eq!(ranked, vec![0, 3, 2, 1]);

        let lot_flipped = vec![3, 2, 1, 0];
        let ranked = rank_teams(&[0, 1, 2, 3], &records, &lot_flipped);
        assert_eq!(ranked, vec![3, 0, 2, 1]);
    }

    #[test]
    fn strictly_better_ignores_the_lot() {
        let mut a = TeamRecord::default();
        let mut b = TeamRecord::default();
        a.points = 3;
        b.points = 3;
        assert!(!strictly_better(&a, &b));
        assert!(!strictly_better(&b, &a));
        a.goals_for = 1;
        assert!(strictly_better(&a, &b));
    }
}
