//! GOSPA and T-GOSPA quasi-metrics for multi-object tracking evaluation.
//!
//! The GOSPA quasi-metric compares two finite sets of objects and decomposes
//! the error into localisation, missed-object and false-object costs, with a
//! parameter `rho` that prices false objects against missed objects. The
//! T-GOSPA quasi-metric extends it to sets of trajectories, adding a track
//! switching cost; it comes in an exact multi-dimensional-assignment form and
//! a linear-programming relaxation. A Monte-Carlo evaluation layer computes
//! RMS error curves over repeated runs of a seeded scenario generator.

pub mod assign2d;
pub mod basedist;
pub mod error;
pub mod evalrfs;
pub mod gospa;
pub mod lp;
pub mod tgospa;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    GospaParams, MetricReport, ObjectSet, ObjectState, TgospaParams, Trajectory, TrajectorySet,
};
