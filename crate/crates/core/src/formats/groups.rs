//! Group-stage formats: 16 groups of 3 and 12 groups of 4.
//!
//! Both open with draw-allowed round robins and finish with a 32-team single
//! elimination. Group-of-3 sends winners and runners-up through (16 x 2);
//! group-of-4 adds the eight best third-placed teams to its 24 qualifiers.

use crate::fixtures::{
    Bracket, ClassificationRule, Fixture, FixtureId, FixtureSource, FormatKind, FormatPlan,
};
use crate::model::MatchMode;

use FixtureSource::{BestThird, DrawSlot, GroupRank, LoserOf, WinnerOf};

fn group_fixture(id: u16, round: usize, group: usize, home: usize, away: usize) -> Fixture {
    const TAGS: [&str; 3] = ["group-round-1", "group-round-2", "group-round-3"];
    Fixture {
        id: FixtureId(id),
        round_tag: TAGS[round],
        bracket: Bracket::Group,
        group: Some(group),
        mode: MatchMode::DrawAllowed,
        home: DrawSlot(home),
        away: DrawSlot(away),
    }
}

fn ko(id: u16, round_tag: &'static str, home: FixtureSource, away: FixtureSource) -> Fixture {
    let bracket = match round_tag {
        "semifinal" | "third-place" | "final" => Bracket::FinalStage,
        _ => Bracket::Knockout,
    };
    Fixture {
        id: FixtureId(id),
        round_tag,
        bracket,
        group: None,
        mode: MatchMode::MustDecide,
        home,
        away,
    }
}

fn winner(id: u16) -> FixtureSource {
    WinnerOf(FixtureId(id))
}

fn group_winner(group: usize) -> FixtureSource {
    GroupRank { group, place: 1 }
}

fn runner_up(group: usize) -> FixtureSource {
    GroupRank { group, place: 2 }
}

/// Append round-of-16, quarterfinals, semifinals, third-place match and
/// final on top of an existing 16-fixture round of 32. `first` is the id the
/// round of 16 starts at; the ids of the 16 round-of-32 fixtures are
/// `first-16 .. first-1`.
fn append_tail(fixtures: &mut Vec<Fixture>, first: u16) {
    let r32 = first - 16;
    for i in 0..8u16 {
        fixtures.push(ko(first + i, "round-of-16", winner(r32 + 2 * i), winner(r32 + 2 * i + 1)));
    }
    let qf = first + 8;
    for i in 0..4u16 {
        fixtures.push(ko(qf + i, "quarterfinal", winner(first + 2 * i), winner(first + 2 * i + 1)));
    }
    let sf = qf + 4;
    fixtures.push(ko(sf, "semifinal", winner(qf), winner(qf + 1)));
    fixtures.push(ko(sf + 1, "semifinal", winner(qf + 2), winner(qf + 3)));
    fixtures.push(ko(
        sf + 2,
        "third-place",
        LoserOf(FixtureId(sf)),
        LoserOf(FixtureId(sf + 1)),
    ));
    fixtures.push(ko(sf + 3, "final", winner(sf), winner(sf + 1)));
}

fn tail_classification(first: u16) -> ClassificationRule {
    let tier = |ids: std::ops::RangeInclusive<u16>| ids.map(FixtureId).collect::<Vec<_>>();
    let qf = first + 8;
    ClassificationRule {
        final_fixture: FixtureId(qf + 7),
        third_place_fixture: Some(FixtureId(qf + 6)),
        tiers: vec![
            tier(qf..=qf + 3),        // 5-8: quarterfinal losers
            tier(first..=first + 7),  // 9-16: round-of-16 losers
            tier(first - 16..=first - 1), // 17-32: round-of-32 losers
        ],
        group_stage_eliminated_tier: true, // 33-48
    }
}

/// 16 groups of 3, winners and runners-up to a knockout of 32; 80 fixtures.
pub fn group_of_3() -> FormatPlan {
    let mut fixtures = Vec::with_capacity(80);
    // Round robin of 3 on slots {3g, 3g+1, 3g+2}: each round rests one team.
    // Round-major numbering keeps calendar order natural (M01-M48).
    let pairs = [(0, 1), (2, 0), (1, 2)];
    for (round, &(a, b)) in pairs.iter().enumerate() {
        for group in 0..16 {
            let id = 1 + (round * 16 + group) as u16;
            fixtures.push(group_fixture(id, round, group, 3 * group + a, 3 * group + b));
        }
    }
    // Round of 32 (M49-M64): winners host runners-up, crossed inside quads
    // of adjacent groups so group-mates land in opposite halves of the pair.
    for quad in 0..4u16 {
        let base = 49 + 4 * quad;
        let g = |offset: u16| (4 * quad + offset) as usize;
        fixtures.push(ko(base, "round-of-32", group_winner(g(0)), runner_up(g(1))));
        fixtures.push(ko(base + 1, "round-of-32", group_winner(g(2)), runner_up(g(3))));
        fixtures.push(ko(base + 2, "round-of-32", group_winner(g(1)), runner_up(g(0))));
        fixtures.push(ko(base + 3, "round-of-32", group_winner(g(3)), runner_up(g(2))));
    }
    append_tail(&mut fixtures, 65);

    FormatPlan {
        format: FormatKind::GroupOf3,
        team_count: 48,
        fixtures,
        classification: tail_classification(65),
        returnee_gate: Vec::new(),
    }
}

/// 12 groups of 4, top two plus the 8 best thirds to a knockout of 32;
/// 104 fixtures.
pub fn group_of_4() -> FormatPlan {
    let mut fixtures = Vec::with_capacity(104);
    // Full round robin on slots {4g..4g+3}, two matches per group per round.
    let rounds = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    for (round, games) in rounds.iter().enumerate() {
        for group in 0..12 {
            for (k, &(a, b)) in games.iter().enumerate() {
                let id = 1 + (round * 24 + group * 2 + k) as u16;
                fixtures.push(group_fixture(id, round, group, 4 * group + a, 4 * group + b));
            }
        }
    }
    // Round of 32 (M73-M88): winners and runners-up cross inside quads of
    // groups; the eight best thirds then pair head-to-tail by pool rank.
    // Keeping the thirds in their own matches lets the whole round start
    // the day after the group stage ends, which the 39-day calendar needs.
    for quad in 0..3u16 {
        let base = 73 + 4 * quad;
        let g = |offset: u16| (4 * quad + offset) as usize;
        fixtures.push(ko(base, "round-of-32", group_winner(g(0)), runner_up(g(1))));
        fixtures.push(ko(base + 1, "round-of-32", group_winner(g(2)), runner_up(g(3))));
        fixtures.push(ko(base + 2, "round-of-32", group_winner(g(1)), runner_up(g(0))));
        fixtures.push(ko(base + 3, "round-of-32", group_winner(g(3)), runner_up(g(2))));
    }
    for i in 0..4u16 {
        fixtures.push(ko(
            85 + i,
            "round-of-32",
            BestThird(1 + i as usize),
            BestThird(8 - i as usize),
        ));
    }
    append_tail(&mut fixtures, 89);

    FormatPlan {
        format: FormatKind::GroupOf4,
        team_count: 48,
        fixtures,
        classification: tail_classification(89),
        returnee_gate: Vec::new(),
    }
}
