//! Teams and rosters.
//!
//! A roster is the fixed pool of participants for one tournament plan. Teams
//! are identified by an opaque string id and carry a FIFA-style rank that
//! drives the goal model and the match-quality metrics. Ranks must be unique
//! within a roster; values beyond the rank cap are legal and are capped by the
//! model, not here.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a team inside its roster. All engine-internal bookkeeping is done
/// on indices; ids only appear at the I/O boundary.
pub type TeamIdx = usize;

/// Number of participants in the World Cup formats handled here.
pub const WORLD_CUP_TEAMS: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Team {
    /// Opaque stable identifier, unique within the roster.
    pub id: String,
    /// Optional display name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// FIFA-style rank, 1 = strongest. Duplicates are rejected.
    pub fifa_rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    teams: Vec<Team>,
}

impl Roster {
    /// Builds a roster after checking id uniqueness, rank uniqueness and
    /// rank >= 1. Size is not checked here; plans enforce their own team
    /// count when a tournament is run.
    pub fn new(teams: Vec<Team>) -> Result<Self> {
        let mut ids = std::collections::HashSet::new();
        let mut ranks = std::collections::HashSet::new();
        for team in &teams {
            if team.fifa_rank < 1 {
                return Err(Error::InvalidRank(team.id.clone()));
            }
            if !ids.insert(team.id.clone()) {
                return Err(Error::DuplicateTeamId(team.id.clone()));
            }
            if !ranks.insert(team.fifa_rank) {
                return Err(Error::DuplicateRank(team.fifa_rank));
            }
        }
        Ok(Self { teams })
    }

    /// Synthetic roster of `n` teams with ids T01, T02, ... and ranks 1..=n.
    pub fn synthetic(n: usize) -> Self {
        let teams = (1..=n)
            .map(|i| Team {
                id: format!("T{i:02}"),
                name: None,
                fifa_rank: i as u32,
            })
            .collect();
        Self { teams }
    }

    /// Loads a roster from a `.csv` or `.json` file and additionally enforces
    /// the 48-team World Cup size.
    pub fn load(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("")
            .to_ascii_lowercase();
        let roster = match ext.as_str() {
            "csv" => Self::from_csv(std::fs::File::open(path)?)?,
            "json" => Self::from_json(std::fs::File::open(path)?)?,
            other => return Err(Error::UnsupportedRosterFormat(other.to_string())),
        };
        if roster.len() != WORLD_CUP_TEAMS {
            return Err(Error::RosterSize {
                expected: WORLD_CUP_TEAMS,
                got: roster.len(),
            });
        }
        Ok(roster)
    }

    /// Reads `id,name,fifa_rank` records; the `name` column may be absent.
    pub fn from_csv(reader: impl std::io::Read) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
        let mut teams = Vec::new();
        for record in csv_reader.deserialize() {
            let team: Team = record?;
            teams.push(team);
        }
        Self::new(teams)
    }

    /// Reads a JSON array of `{id, name?, fifa_rank}` objects.
    pub fn from_json(reader: impl std::io::Read) -> Result<Self> {
        let teams: Vec<Team> = serde_json::from_reader(reader)?;
        Self::new(teams)
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn team(&self, idx: TeamIdx) -> &Team {
        &self.teams[idx]
    }

    pub fn rank(&self, idx: TeamIdx) -> u32 {
        self.teams[idx].fifa_rank
    }

    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    /// Skill index per team: 0 for the best-ranked team, len-1 for the worst.
    /// Well defined because ranks are unique.
    pub fn skill_order(&self) -> Vec<usize> {
        let mut by_rank: Vec<TeamIdx> = (0..self.teams.len()).collect();
        by_rank.sort_by_key(|&t| self.teams[t].fifa_rank);
        let mut skill = vec![0usize; self.teams.len()];
        for (s, &t) in by_rank.iter().enumerate() {
            skill[t] = s;
        }
        skill
    }
}
