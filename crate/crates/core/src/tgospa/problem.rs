//! Shared precomputation for the T-GOSPA solvers: per-step presence,
//! pairwise distances, support pairs and connected components.
//!
//! A (truth, estimate) trajectory pair is a *support pair* if the two exist
//! simultaneously at some step with base distance strictly below `c`. Any
//! other pair can be forced to zero assignment without changing the optimum:
//! rerouting its mass to the unassigned row/column never raises a step cost
//! and only removes switching cost. Support pairs split the problem into
//! connected components that the solvers handle independently; rows and
//! columns outside every component contribute closed-form missed/false
//! constants.

use crate::basedist::BaseDistance;
use crate::error::{Error, Result};
use crate::types::{TgospaParams, TrajectorySet};

pub(crate) struct Problem {
    pub params: TgospaParams,
    pub window: usize,
    pub n_truth: usize,
    pub n_estimate: usize,
    /// d_b(truth_i^k, estimate_j^k); NaN when either trajectory is absent.
    /// Indexed [k][i * n_estimate + j].
    dist: Vec<Vec<f64>>,
    /// Present-truth count per step (1-based step k stored at k-1).
    pub truth_count: Vec<usize>,
    pub estimate_count: Vec<usize>,
}

impl Problem {
    pub fn build(
        truth: &TrajectorySet,
        estimate: &TrajectorySet,
        params: &TgospaParams,
        base: &dyn BaseDistance,
    ) -> Result<Problem> {
        if truth.window() != estimate.window() {
            return Err(Error::InvalidInput(format!(
                "trajectory sets have different windows: {} vs {}",
                truth.window(),
                estimate.window()
            )));
        }
        if let (Some(a), Some(b)) = (truth.dim(), estimate.dim()) {
            if a != b {
                return Err(Error::DimensionMismatch { left: a, right: b });
            }
        }
        let window = truth.window();
        let (n_truth, n_estimate) = (truth.len(), estimate.len());
        let mut dist = Vec::with_capacity(window);
        let mut truth_count = Vec::with_capacity(window);
        let mut estimate_count = Vec::with_capacity(window);
        for k in 1..=window {
            let mut step = vec![f64::NAN; n_truth * n_estimate];
            let mut tc = 0;
            let ec = estimate
                .trajectories()
                .iter()
                .filter(|t| t.state_at(k).is_some())
                .count();
            for (i, ti) in truth.trajectories().iter().enumerate() {
                let Some(x) = ti.state_at(k) else { continue };
                tc += 1;
                for (j, tj) in estimate.trajectories().iter().enumerate() {
                    let Some(y) = tj.state_at(k) else { continue };
                    let d = base.eval(x, y)?;
                    if !d.is_finite() || d < 0.0 {
                        return Err(Error::NonFinite("base distance"));
                    }
                    step[i * n_estimate + j] = d;
                }
            }
            dist.push(step);
            truth_count.push(tc);
            estimate_count.push(ec);
        }
        Ok(Problem {
            params: *params,
            window,
            n_truth,
            n_estimate,
            dist,
            truth_count,
            estimate_count,
        })
    }

    /// Raw base distance at step `k` (1-based); NaN when either side absent.
    pub fn distance(&self, k: usize, i: usize, j: usize) -> f64 {
        self.dist[k - 1][i * self.n_estimate + j]
    }

    /// Detection-eligible: both present and strictly below the cut-off.
    pub fn eligible(&self, k: usize, i: usize, j: usize) -> bool {
        // NaN compares false, so absence is covered
        self.distance(k, i, j) < self.params.gospa.c
    }

    /// The rho-dependent constant of the p-th-power cost at step `k`:
    /// `rho c^p n_Y^k + (1-rho) c^p n_X^k`. The remaining, assignment-
    /// dependent part of the step cost is `sum (d^p - c^p)` over detected
    /// pairs and does not depend on rho.
    pub fn step_constant(&self, k: usize) -> f64 {
        let g = &self.params.gospa;
        let c_p = g.c_pow_p();
        g.rho * c_p * self.estimate_count[k - 1] as f64
            + (1.0 - g.rho) * c_p * self.truth_count[k - 1] as f64
    }

    /// Support decomposition; deterministic component order.
    pub fn support(&self) -> Support {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..self.n_truth {
            for j in 0..self.n_estimate {
                if (1..=self.window).any(|k| self.eligible(k, i, j)) {
                    pairs.push((i, j));
                }
            }
        }

        // Union-find over truth nodes [0, n_truth) and estimate nodes
        // [n_truth, n_truth + n_estimate).
        let mut parent: Vec<usize> = (0..self.n_truth + self.n_estimate).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(i, j) in &pairs {
            let a = find(&mut parent, i);
            let b = find(&mut parent, self.n_truth + j);
            if a != b {
                parent[b.max(a)] = b.min(a);
            }
        }

        let mut components: Vec<Component> = Vec::new();
        let mut root_to_comp: std::collections::BTreeMap<usize, usize> =
            std::collections::BTreeMap::new();
        for &(i, j) in &pairs {
            let root = find(&mut parent, i);
            let idx = *root_to_comp.entry(root).or_insert_with(|| {
                components.push(Component::default());
                components.len() - 1
            });
            let comp = &mut components[idx];
            if !comp.rows.contains(&i) {
                comp.rows.push(i);
            }
            if !comp.cols.contains(&j) {
                comp.cols.push(j);
            }
            comp.pairs.push((i, j));
        }
        for comp in &mut components {
            comp.rows.sort_unstable();
            comp.cols.sort_unstable();
            comp.pairs.sort_unstable();
        }
        components.sort_by_key(|c| c.rows[0]);

        Support { components }
    }
}

/// One connected component of the support graph.
#[derive(Debug, Default, Clone)]
pub(crate) struct Component {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

pub(crate) struct Support {
    pub components: Vec<Component>,
}
