//! Builders for the three 48-team tournament formats.
//!
//! Each builder returns a [`FormatPlan`](crate::fixtures::FormatPlan) whose
//! fixtures are listed in resolution order. The builders are pure and
//! deterministic; all randomness (draw, scores, lots) lives in the runner.

mod double_elim;
mod groups;

pub use double_elim::{double_elim_48, mini_double_elim_4};
pub use groups::{group_of_3, group_of_4};

use crate::fixtures::{FormatKind, FormatPlan};

/// Build the plan for a format.
pub fn build_plan(format: FormatKind) -> FormatPlan {
    match format {
        FormatKind::DoubleElim48 => double_elim_48(),
        FormatKind::GroupOf3 => group_of_3(),
        FormatKind::GroupOf4 => group_of_4(),
    }
}
