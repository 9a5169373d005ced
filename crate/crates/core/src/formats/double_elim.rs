//! The 48-team double-elimination format.
//!
//! Two losses eliminate. Losers drop from the main bracket into a repechage
//! that re-feeds the title race: after round 3 the eighteen surviving
//! one-loss teams are ranked and the best two return to the main bracket
//! with a clean slate, while the other sixteen continue in the repechage.
//! Six repechage survivors and the two round-5 main losers contest a
//! knockout of eight for the second semifinal pair, so both semifinals meet
//! an undefeated team (five matches played) and a one-loss team (seven).
//! 96 fixtures in total; the champion plays 7 matches via the main route or
//! 9 via the repechage.

use crate::fixtures::{
    Bracket, ClassificationRule, Fixture, FixtureId, FixtureSource, FormatKind, FormatPlan,
};
use crate::model::MatchMode;

use Bracket::{FinalStage, Main, Repechage};
use FixtureSource::{DrawSlot, LoserOf, Returnee, WinnerOf};

fn fx(
    id: u16,
    round_tag: &'static str,
    bracket: Bracket,
    home: FixtureSource,
    away: FixtureSource,
) -> Fixture {
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

fn loser(id: u16) -> FixtureSource {
    LoserOf(FixtureId(id))
}

/// Build the 96-fixture double-elimination plan.
pub fn double_elim_48() -> FormatPlan {
    let mut fixtures = Vec::with_capacity(96);

    // Round 1: 24 matches straight off the draw (M01-M24).
    for i in 0..24u16 {
        fixtures.push(fx(
            1 + i,
            "round-1",
            Main,
            DrawSlot(2 * i as usize),
            DrawSlot(2 * i as usize + 1),
        ));
    }
    // Round 2: winners meet in the main bracket (M25-M36), losers get a
    // second life in the repechage (M37-M48).
    for i in 0..12u16 {
        fixtures.push(fx(25 + i, "round-2", Main, winner(2 * i + 1), winner(2 * i + 2)));
    }
    for i in 0..12u16 {
        fixtures.push(fx(37 + i, "round-2", Repechage, loser(2 * i + 1), loser(2 * i + 2)));
    }
    // Round 3 main: 12 -> 6 (M49-M54).
    for i in 0..6u16 {
        fixtures.push(fx(49 + i, "round-3", Main, winner(25 + 2 * i), winner(26 + 2 * i)));
    }
    // Round 3 repechage: round-2 repechage winners vs round-2 main losers
    // (M55-M66). The half-turn offset keeps every pairing fresh: M(37+k)'s
    // winner rose from the losers of M(2k+1)/M(2k+2), which fed M(25+k) —
    // never M(25+(k+6) mod 12).
    for k in 0..12u16 {
        fixtures.push(fx(
            55 + k,
            "round-3",
            Repechage,
            winner(37 + k),
            loser(25 + (k + 6) % 12),
        ));
    }
    // Returnee step: the eighteen one-loss survivors are ranked; ordinals 1
    // and 2 rejoin the main bracket in round 4, ordinals 3-18 fill the
    // round-4 repechage, folded so the pool's top half hosts its bottom half.
    fixtures.push(fx(67, "round-4", Main, winner(49), winner(50)));
    fixtures.push(fx(68, "round-4", Main, winner(51), Returnee(1)));
    fixtures.push(fx(69, "round-4", Main, winner(52), winner(53)));
    fixtures.push(fx(70, "round-4", Main, winner(54), Returnee(2)));
    for k in 0..8u16 {
        fixtures.push(fx(
            71 + k,
            "round-4",
            Repechage,
            Returnee(3 + k as usize),
            Returnee(11 + k as usize),
        ));
    }
    // Round 5 main: the two survivors are the main-route semifinalists.
    fixtures.push(fx(79, "round-5", Main, winner(67), winner(68)));
    fixtures.push(fx(80, "round-5", Main, winner(69), winner(70)));
    // Round 5 repechage: 8 round-4 repechage winners + 4 round-4 main losers.
    fixtures.push(fx(81, "round-5", Repechage, winner(71), winner(77)));
    fixtures.push(fx(82, "round-5", Repechage, winner(72), winner(78)));
    fixtures.push(fx(83, "round-5", Repechage, winner(73), loser(67)));
    fixtures.push(fx(84, "round-5", Repechage, winner(74), loser(68)));
    fixtures.push(fx(85, "round-5", Repechage, winner(75), loser(69)));
    fixtures.push(fx(86, "round-5", Repechage, winner(76), loser(70)));
    // Knockout of 8: 6 round-5 repechage winners + 2 round-5 main losers
    // play down to the second semifinal pair.
    fixtures.push(fx(87, "knockout-8-round-1", Repechage, winner(81), winner(85)));
    fixtures.push(fx(88, "knockout-8-round-1", Repechage, winner(82), winner(86)));
    fixtures.push(fx(89, "knockout-8-round-1", Repechage, winner(83), loser(79)));
    fixtures.push(fx(90, "knockout-8-round-1", Repechage, winner(84), loser(80)));
    fixtures.push(fx(91, "knockout-8-round-2", Repechage, winner(87), winner(88)));
    fixtures.push(fx(92, "knockout-8-round-2", Repechage, winner(89), winner(90)));
    // Finals stage: each semifinal pits a main-route team against a
    // repechage-route team, crossed so round-5 opponents cannot re-meet
    // before the final.
    fixtures.push(fx(93, "semifinal", FinalStage, winner(79), winner(92)));
    fixtures.push(fx(94, "semifinal", FinalStage, winner(80), winner(91)));
    fixtures.push(fx(95, "third-place", FinalStage, loser(93), loser(94)));
    fixtures.push(fx(96, "final", FinalStage, winner(93), winner(94)));

    let tier = |ids: std::ops::RangeInclusive<u16>| ids.map(FixtureId).collect::<Vec<_>>();
    let classification = ClassificationRule {
        final_fixture: FixtureId(96),
        third_place_fixture: Some(FixtureId(95)),
        tiers: vec![
            tier(91..=92), // 5-6: knockout-of-8 finals losers
            tier(87..=90), // 7-10
            tier(81..=86), // 11-16
            tier(71..=78), // 17-24
            tier(55..=66), // 25-36
            tier(37..=48), // 37-48
        ],
        group_stage_eliminated_tier: false,
    };

    FormatPlan {
        format: FormatKind::DoubleElim48,
        team_count: 48,
        fixtures,
        classification,
        returnee_gate: (49..=66).map(FixtureId).collect(),
    }
}

/// Four-team double elimination used by tests as a brute-forceable miniature:
/// same drop-down/climb-back mechanics, no returnee step.
pub fn mini_double_elim_4() -> FormatPlan {
    let fixtures = vec![
        fx(1, "round-1", Main, DrawSlot(0), DrawSlot(1)),
        fx(2, "round-1", Main, DrawSlot(2), DrawSlot(3)),
        fx(3, "round-2", Main, winner(1), winner(2)),
        fx(4, "round-2", Repechage, loser(1), loser(2)),
        fx(5, "round-3", Repechage, loser(3), winner(4)),
        fx(6, "final", FinalStage, winner(3), winner(5)),
    ];
    FormatPlan {
        format: FormatKind::DoubleElim48,
        team_count: 4,
        fixtures,
        classification: ClassificationRule {
            final_fixture: FixtureId(6),
            third_place_fixture: None,
            tiers: vec![vec![FixtureId(5)], vec![FixtureId(4)]],
            group_stage_eliminated_tier: false,
        },
        returnee_gate: Vec::new(),
    }
}
