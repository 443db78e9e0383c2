//! Trajectory file format: UTF-8 JSON with a window length and a list of
//! trajectories, each a start step plus a dense state sequence.
//!
//! ```json
//! {"T": 3, "trajectories": [{"start": 1, "states": [[0.0], [0.5], [1.0]]}]}
//! ```
//!
//! Parsing validates the full trajectory-set contract (window bounds,
//! contiguity by construction, uniform dimensions, finite values); syntax
//! errors carry serde's line/column information and semantic errors name the
//! offending trajectory index.

use std::path::Path;

use serde::{Deserialize, Serialize};

use gospa::types::{Trajectory, TrajectorySet};

#[derive(Debug, Serialize, Deserialize)]
pub struct TrajectoryFile {
    #[serde(rename = "T")]
    pub window: usize,
    pub trajectories: Vec<TrajectoryRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub start: usize,
    pub states: Vec<Vec<f64>>,
}

/// A parse or validation failure, formatted for the user.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn read_trajectory_set(path: &Path) -> Result<TrajectorySet, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    let file: TrajectoryFile =
        serde_json::from_str(&text).map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    to_trajectory_set(&file).map_err(|e| ParseError(format!("{}: {e}", path.display())))
}

pub fn to_trajectory_set(file: &TrajectoryFile) -> gospa::Result<TrajectorySet> {
    let trajectories = file
        .trajectories
        .iter()
        .map(|record| {
            let states = record
                .states
                .iter()
                .map(|coords| gospa::types::ObjectState::new(coords.clone()))
                .collect::<gospa::Result<Vec<_>>>()?;
            Trajectory::new(record.start, states)
        })
        .collect::<gospa::Result<Vec<_>>>()?;
    TrajectorySet::new(file.window, trajectories)
}

pub fn from_trajectory_set(set: &TrajectorySet) -> TrajectoryFile {
    TrajectoryFile {
        window: set.window(),
        trajectories: set
            .trajectories()
            .iter()
            .map(|t| TrajectoryRecord {
                start: t.start(),
                states: t.states().iter().map(|s| s.coords().to_vec()).collect(),
            })
            .collect(),
    }
}

pub fn write_trajectory_set(path: &Path, set: &TrajectorySet) -> Result<(), ParseError> {
    let file = from_trajectory_set(set);
    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    std::fs::write(path, json + "\n").map_err(|e| ParseError(format!("{}: {e}", path.display())))
}
