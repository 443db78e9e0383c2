//! Domain types: object states, sets, trajectories and metric parameters.
//!
//! All types validate their invariants at construction and are immutable
//! afterwards, so they can be shared freely across threads.

use crate::error::{Error, Result};

/// A point in the single-object space: a real vector of dimension >= 1.
///
/// The meaning of the components is application-defined (positions,
/// velocities, ...). All entries must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectState {
    coords: Vec<f64>,
}

impl ObjectState {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "object state must have dimension >= 1".into(),
            ));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("object state coordinates"));
        }
        Ok(ObjectState { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A finite set of object states. Order is irrelevant to every metric result;
/// indices are only used to report assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSet {
    elements: Vec<ObjectState>,
}

impl ObjectSet {
    pub fn new(elements: Vec<ObjectState>) -> Result<Self> {
        if let Some(first) = elements.first() {
            let d = first.dim();
            for e in &elements {
                if e.dim() != d {
                    return Err(Error::DimensionMismatch {
                        left: d,
                        right: e.dim(),
                    });
                }
            }
        }
        Ok(ObjectSet { elements })
    }

    pub fn empty() -> Self {
        ObjectSet {
            elements: Vec::new(),
        }
    }

    /// Convenience constructor from raw coordinate vectors.
    pub fn from_coords(coords: &[&[f64]]) -> Result<Self> {
        let elements = coords
            .iter()
            .map(|c| ObjectState::new(c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        ObjectSet::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&ObjectState> {
        self.elements.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjectState> {
        self.elements.iter()
    }

    /// Dimension of the states, or None for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.elements.first().map(|e| e.dim())
    }
}

/// A trajectory: a start time step and a contiguous sequence of states.
///
/// A trajectory with start `w` and `n` states exists exactly at time steps
/// `w, w+1, ..., w+n-1`. Tracks with internal gaps must be split into
/// separate trajectories before they enter a [`TrajectorySet`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    start: usize,
    states: Vec<ObjectState>,
}

impl Trajectory {
    pub fn new(start: usize, states: Vec<ObjectState>) -> Result<Self> {
        if start < 1 {
            return Err(Error::InvalidTrajectory(
                "start time step must be >= 1".into(),
            ));
        }
        if states.is_empty() {
            return Err(Error::InvalidTrajectory(
                "trajectory must contain at least one state".into(),
            ));
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: s.dim(),
                });
            }
        }
        Ok(Trajectory { start, states })
    }

    /// Convenience constructor from raw coordinate vectors.
    pub fn from_coords(start: usize, coords: &[&[f64]]) -> Result<Self> {
        let states = coords
            .iter()
            .map(|c| ObjectState::new(c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::new(start, states)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of states (the trajectory duration).
    #[allow(clippy::len_without_is_empty)] // never empty by construction
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Last time step at which the trajectory exists.
    pub fn end(&self) -> usize {
        self.start + self.states.len() - 1
    }

    pub fn states(&self) -> &[ObjectState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// State at time step `k`, or None if the trajectory does not exist then.
    pub fn state_at(&self, k: usize) -> Option<&ObjectState> {
        if k >= self.start && k <= self.end() {
            Some(&self.states[k - self.start])
        } else {
            None
        }
    }
}

/// A finite set of trajectories inside the time window [1, T].
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    window: usize,
    trajectories: Vec<Trajectory>,
}

impl TrajectorySet {
    pub fn new(window: usize, trajectories: Vec<Trajectory>) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidTrajectory(
                "window length T must be >= 1".into(),
            ));
        }
        let mut dim = None;
        for (idx, t) in trajectories.iter().enumerate() {
            if t.end() > window {
                return Err(Error::InvalidTrajectory(format!(
                    "trajectory {idx}: start {} + duration {} - 1 = {} exceeds window T = {window}",
                    t.start(),
                    t.len(),
                    t.end()
                )));
            }
            match dim {
                None => dim = Some(t.dim()),
                Some(d) if d != t.dim() => {
                    return Err(Error::DimensionMismatch {
                        left: d,
                        right: t.dim(),
                    })
                }
                _ => {}
            }
        }
        Ok(TrajectorySet {
            window,
            trajectories,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// Dimension of the states, or None if the set has no trajectories.
    pub fn dim(&self) -> Option<usize> {
        self.trajectories.first().map(|t| t.dim())
    }

    fn check_step(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.window {
            return Err(Error::OutOfWindow {
                step: k,
                window: self.window,
            });
        }
        Ok(())
    }

    /// The per-trajectory object sets at time step `k`: the i-th entry is
    /// `{x_i^k}` if trajectory i exists at `k` and the empty set otherwise.
    pub fn slice(&self, k: usize) -> Result<Vec<ObjectSet>> {
        self.check_step(k)?;
        Ok(self
            .trajectories
            .iter()
            .map(|t| match t.state_at(k) {
                Some(s) => ObjectSet {
                    elements: vec![s.clone()],
                },
                None => ObjectSet::empty(),
            })
            .collect())
    }

    /// Number of trajectories that exist at time step `k`.
    pub fn present_count(&self, k: usize) -> Result<usize> {
        self.check_step(k)?;
        Ok(self
            .trajectories
            .iter()
            .filter(|t| t.state_at(k).is_some())
            .count())
    }

    /// Clips every trajectory to the window [1, k]. Trajectories born after
    /// `k` disappear from the truncated set.
    pub fn truncated(&self, k: usize) -> Result<TrajectorySet> {
        self.check_step(k)?;
        let trajectories = self
            .trajectories
            .iter()
            .filter(|t| t.start() <= k)
            .map(|t| {
                let keep = k.min(t.end()) - t.start() + 1;
                Trajectory {
                    start: t.start(),
                    states: t.states[..keep].to_vec(),
                }
            })
            .collect();
        Ok(TrajectorySet {
            window: k,
            trajectories,
        })
    }
}

/// Parameters of the GOSPA quasi-metric.
///
/// * `c`: maximum localisation cost; a pair can only be considered detected
///   if its base distance is strictly below `c`.
/// * `p`: exponent, `1 <= p < inf`.
/// * `rho`: fraction of `c^p` charged per false object; `1 - rho` is charged
///   per missed object. Must lie strictly inside (0, 1); `rho = 1/2` with a
///   symmetric base distance recovers the symmetric metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GospaParams {
    pub c: f64,
    pub p: f64,
    pub rho: f64,
}

impl GospaParams {
    pub fn new(c: f64, p: f64, rho: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::parameter(
                "c",
                format!("must be finite and > 0, got {c}"),
            ));
        }
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::parameter(
                "p",
                format!("must be finite and >= 1, got {p}"),
            ));
        }
        if !(rho.is_finite() && rho > 0.0 && rho < 1.0) {
            return Err(Error::parameter(
                "rho",
                format!("must lie strictly inside (0, 1), got {rho}"),
            ));
        }
        Ok(GospaParams { c, p, rho })
    }

    /// `c^p`, the cost of one missed object plus one false object.
    pub fn c_pow_p(&self) -> f64 {
        self.c.powf(self.p)
    }

    /// Same parameters with `rho` replaced.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        GospaParams::new(self.c, self.p, rho)
    }
}

/// Parameters of the T-GOSPA quasi-metric: GOSPA parameters plus the track
/// switching penalty `gamma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TgospaParams {
    pub gospa: GospaParams,
    pub gamma: f64,
}

impl TgospaParams {
    pub fn new(gospa: GospaParams, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::parameter(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        Ok(TgospaParams { gospa, gamma })
    }

    pub fn from_values(c: f64, p: f64, rho: f64, gamma: f64) -> Result<Self> {
        TgospaParams::new(GospaParams::new(c, p, rho)?, gamma)
    }

    /// `gamma^p`, the cost of one full track switch.
    pub fn gamma_pow_p(&self) -> f64 {
        self.gamma.powf(self.gospa.p)
    }
}

/// Total quasi-metric value together with its cost decomposition.
///
/// The four components are costs to the p-th power and sum to
/// `total_pth_power`; `total` is the p-th root. GOSPA reports always have
/// `switch == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub total: f64,
    pub total_pth_power: f64,
    pub localisation: f64,
    pub missed: f64,
    pub false_cost: f64,
    pub switch: f64,
}

impl MetricReport {
    pub fn from_components(
        localisation: f64,
        missed: f64,
        false_cost: f64,
        switch: f64,
        p: f64,
    ) -> Self {
        let total_pth_power = localisation + missed + false_cost + switch;
        MetricReport {
            total: total_pth_power.powf(1.0 / p),
            total_pth_power,
            localisation,
            missed,
            false_cost,
            switch,
        }
    }

    /// Checks the decomposition invariants within the given tolerance.
    pub fn validate(&self, p: f64, tol: f64) -> Result<()> {
        let sum = self.localisation + self.missed + self.false_cost + self.switch;
        if (sum - self.total_pth_power).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "components sum to {sum}, expected total_pth_power {}",
                self.total_pth_power
            )));
        }
        if (self.total - self.total_pth_power.powf(1.0 / p)).abs() > tol {
            return Err(Error::InvalidInput(
                "total is not the p-th root of total_pth_power".into(),
            ));
        }
        Ok(())
    }
}
