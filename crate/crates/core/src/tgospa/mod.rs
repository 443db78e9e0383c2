//! T-GOSPA quasi-metric between sets of trajectories.
//!
//! Trajectories are matched per time step; the total cost adds per-step
//! localisation / missed / false costs (as in GOSPA, built from sets with at
//! most one element per trajectory and step) and a switching cost whenever a
//! truth trajectory changes its assigned estimate between consecutive steps.
//! Two solvers share one contract:
//!
//! * [`tgospa_exact`]: exact optimum over assignment-vector sequences by
//!   dynamic programming over time; feasible while the number of assignment
//!   vectors stays within a configurable bound.
//! * [`tgospa_lp`]: the linear-programming relaxation over doubly
//!   constrained assignment matrices; a lower bound on the exact value and a
//!   quasi-metric in its own right, polynomial in the problem size.

mod exact;
mod problem;
mod relax;

pub use exact::DEFAULT_MAX_ASSIGNMENT_VECTORS;

use crate::basedist::BaseDistance;
use crate::error::{Error, Result};
use crate::types::{MetricReport, TgospaParams, TrajectorySet};

use problem::Problem;

/// Which T-GOSPA solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Exact,
    Lp,
}

/// Per-time-step trajectory-level assignment: entry `i` holds the estimate
/// index assigned to truth trajectory `i`, or None for unassigned. Distinct
/// truths cannot share an estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentVector {
    entries: Vec<Option<usize>>,
}

impl AssignmentVector {
    pub fn new(entries: Vec<Option<usize>>) -> Result<Self> {
        let mut seen: Vec<usize> = entries.iter().filter_map(|e| *e).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(
                "assignment vector maps two truths to the same estimate".into(),
            ));
        }
        Ok(AssignmentVector { entries })
    }

    pub fn unassigned(n: usize) -> Self {
        AssignmentVector {
            entries: vec![None; n],
        }
    }

    pub fn entries(&self) -> &[Option<usize>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.entries.get(i).copied().flatten()
    }
}

/// Relaxed assignment matrix of shape `(n_truth + 1) x (n_estimate + 1)`:
/// entry (i, j) is the assignment mass between truth i and estimate j, the
/// last row/column collect unassigned mass, and the corner is zero. Real
/// rows and columns sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentMatrix {
    n_truth: usize,
    n_estimate: usize,
    values: Vec<f64>, // (n_truth + 1) x (n_estimate + 1), row-major
}

impl AssignmentMatrix {
    pub(crate) fn zeros(n_truth: usize, n_estimate: usize) -> Self {
        AssignmentMatrix {
            n_truth,
            n_estimate,
            values: vec![0.0; (n_truth + 1) * (n_estimate + 1)],
        }
    }

    pub fn from_values(n_truth: usize, n_estimate: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (n_truth + 1) * (n_estimate + 1) {
            return Err(Error::InvalidInput(format!(
                "assignment matrix needs {} values, got {}",
                (n_truth + 1) * (n_estimate + 1),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("assignment matrix entry"));
        }
        Ok(AssignmentMatrix {
            n_truth,
            n_estimate,
            values,
        })
    }

    /// Binary matrix representing an assignment vector.
    pub fn from_vector(vector: &AssignmentVector, n_estimate: usize) -> Result<Self> {
        let n_truth = vector.len();
        let mut mat = AssignmentMatrix::zeros(n_truth, n_estimate);
        for (i, entry) in vector.entries().iter().enumerate() {
            if let Some(j) = entry {
                if *j >= n_estimate {
                    return Err(Error::InvalidInput(format!(
                        "assignment entry {j} out of range for {n_estimate} estimates"
                    )));
                }
                mat.set(i, *j, 1.0);
            }
        }
        mat.fill_dummies();
        Ok(mat)
    }

    pub fn n_truth(&self) -> usize {
        self.n_truth
    }

    pub fn n_estimate(&self) -> usize {
        self.n_estimate
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.n_estimate + 1) + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.values[i * (self.n_estimate + 1) + j] = value;
    }

    /// Completes the unassigned row/column from the real entries.
    pub(crate) fn fill_dummies(&mut self) {
        for i in 0..self.n_truth {
            let assigned: f64 = (0..self.n_estimate).map(|j| self.get(i, j)).sum();
            self.set(i, self.n_estimate, (1.0 - assigned).max(0.0));
        }
        for j in 0..self.n_estimate {
            let assigned: f64 = (0..self.n_truth).map(|i| self.get(i, j)).sum();
            self.set(self.n_truth, j, (1.0 - assigned).max(0.0));
        }
        self.set(self.n_truth, self.n_estimate, 0.0);
    }

    /// Checks non-negativity, unit row/column sums and the zero corner.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.values.iter().any(|&v| v < -tol) {
            return Err(Error::InvalidInput("negative assignment mass".into()));
        }
        for i in 0..self.n_truth {
            let sum: f64 = (0..=self.n_estimate).map(|j| self.get(i, j)).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "row {i} sums to {sum}, expected 1"
                )));
            }
        }
        for j in 0..self.n_estimate {
            let sum: f64 = (0..=self.n_truth).map(|i| self.get(i, j)).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "column {j} sums to {sum}, expected 1"
                )));
            }
        }
        if self.get(self.n_truth, self.n_estimate).abs() > tol {
            return Err(Error::InvalidInput("corner entry must be zero".into()));
        }
        Ok(())
    }
}

/// Cost decomposition of a single time step (all to the p-th power);
/// `switch` is the switching cost between this step and the next, zero for
/// the last step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub localisation: f64,
    pub missed: f64,
    pub false_cost: f64,
    pub switch: f64,
}

/// The optimal assignment found by a solver.
#[derive(Debug, Clone)]
pub enum TgospaAssignment {
    /// Exact solver: one assignment vector per time step.
    Vectors(Vec<AssignmentVector>),
    /// LP relaxation: one assignment matrix per time step.
    Matrices(Vec<AssignmentMatrix>),
}

/// Total value, decomposition, per-step breakdown and the assignment.
#[derive(Debug, Clone)]
pub struct TgospaResult {
    pub report: MetricReport,
    pub per_step: Vec<StepReport>,
    pub assignment: TgospaAssignment,
}

/// P-th-power cost of one time step under a fixed assignment vector:
/// localisation over detected pairs plus `rho c^p` per false and
/// `(1-rho) c^p` per missed object. A pair is detected only if both
/// trajectories exist at `k` and their base distance is strictly below `c`.
pub fn step_cost(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    assignment: &AssignmentVector,
    k: usize,
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> Result<f64> {
    if truth.window() != estimate.window() {
        return Err(Error::InvalidInput(format!(
            "trajectory sets have different windows: {} vs {}",
            truth.window(),
            estimate.window()
        )));
    }
    if k < 1 || k > truth.window() {
        return Err(Error::OutOfWindow {
            step: k,
            window: truth.window(),
        });
    }
    if assignment.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "assignment vector length {} does not match {} truth trajectories",
            assignment.len(),
            truth.len()
        )));
    }
    let g = &params.gospa;
    let mut localisation = 0.0;
    let mut detected = 0usize;
    for (i, entry) in assignment.entries().iter().enumerate() {
        let Some(j) = entry else { continue };
        if *j >= estimate.len() {
            return Err(Error::InvalidInput(format!(
                "assignment entry {j} out of range for {} estimates",
                estimate.len()
            )));
        }
        let (Some(x), Some(y)) = (
            truth.trajectories()[i].state_at(k),
            estimate.trajectories()[*j].state_at(k),
        ) else {
            continue;
        };
        let d = base.eval(x, y)?;
        if d < g.c {
            localisation += d.powf(g.p);
            detected += 1;
        }
    }
    let n_x = truth.present_count(k)?;
    let n_y = estimate.present_count(k)?;
    let c_p = g.c_pow_p();
    Ok(localisation
        + g.rho * c_p * (n_y - detected) as f64
        + (1.0 - g.rho) * c_p * (n_x - detected) as f64)
}

/// P-th-power switching cost between consecutive assignment vectors:
/// `gamma^p` per full switch (different estimates on both sides), half that
/// when exactly one side is unassigned.
pub fn switch_cost(
    prev: &AssignmentVector,
    next: &AssignmentVector,
    gamma: f64,
    p: f64,
) -> Result<f64> {
    if prev.len() != next.len() {
        return Err(Error::InvalidInput(format!(
            "assignment vectors have different lengths: {} vs {}",
            prev.len(),
            next.len()
        )));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::parameter(
            "gamma",
            format!("must be finite and > 0, got {gamma}"),
        ));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::parameter(
            "p",
            format!("must be finite and >= 1, got {p}"),
        ));
    }
    let mut count = 0.0;
    for (a, b) in prev.entries().iter().zip(next.entries()) {
        if a != b {
            count += if a.is_some() && b.is_some() { 1.0 } else { 0.5 };
        }
    }
    Ok(gamma.powf(p) * count)
}

/// Exact T-GOSPA with the default assignment-vector bound.
pub fn tgospa_exact(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> Result<TgospaResult> {
    tgospa_exact_with_bound(
        truth,
        estimate,
        params,
        base,
        DEFAULT_MAX_ASSIGNMENT_VECTORS,
    )
}

/// Exact T-GOSPA; errors with [`Error::SizeLimit`] if the number of
/// assignment vectors (after restriction to detectable pairs) exceeds
/// `max_vectors`, in which case [`tgospa_lp`] is the scalable alternative.
pub fn tgospa_exact_with_bound(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    max_vectors: usize,
) -> Result<TgospaResult> {
    let problem = Problem::build(truth, estimate, params, base)?;
    let support = problem.support();
    let dp = exact::solve(&problem, &support, max_vectors)?;
    let window = problem.window;
    let vectors = assemble_vectors(&problem, &dp, window);
    let (report, per_step) = reports_from_vectors(&problem, &vectors, params.gospa.rho);
    debug_assert!(
        (dp.total_pth_power(window) - report.total_pth_power).abs()
            <= 1e-9 * report.total_pth_power.abs().max(1.0)
    );
    Ok(TgospaResult {
        report,
        per_step,
        assignment: TgospaAssignment::Vectors(vectors),
    })
}

/// Exact T-GOSPA of every truncation `[1, k]`, `k = 1..=T`, from a single
/// forward pass: the stage optima of the dynamic program are exactly the
/// truncated-window optima. One report per window.
pub fn tgospa_exact_curve(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> Result<Vec<MetricReport>> {
    tgospa_exact_curve_with_bound(
        truth,
        estimate,
        params,
        base,
        DEFAULT_MAX_ASSIGNMENT_VECTORS,
    )
}

/// See [`tgospa_exact_curve`].
pub fn tgospa_exact_curve_with_bound(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    max_vectors: usize,
) -> Result<Vec<MetricReport>> {
    let problem = Problem::build(truth, estimate, params, base)?;
    let support = problem.support();
    let dp = exact::solve(&problem, &support, max_vectors)?;
    let mut out = Vec::with_capacity(problem.window);
    for k in 1..=problem.window {
        let vectors = assemble_vectors(&problem, &dp, k);
        let (report, _) = reports_from_vectors(&problem, &vectors, params.gospa.rho);
        debug_assert!(
            (dp.total_pth_power(k) - report.total_pth_power).abs()
                <= 1e-9 * report.total_pth_power.abs().max(1.0)
        );
        out.push(report);
    }
    Ok(out)
}

/// LP relaxation of the T-GOSPA quasi-metric; a lower bound on
/// [`tgospa_exact`] that is itself a quasi-metric.
///
/// The solve is deterministic, but when the relaxation has several optima
/// only the value and the component sums are contractual, not the specific
/// matrices.
pub fn tgospa_lp(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> Result<TgospaResult> {
    let problem = Problem::build(truth, estimate, params, base)?;
    let support = problem.support();
    let matrices = relax::solve(&problem, &support)?;
    let (report, per_step) = reports_from_matrices(&problem, &matrices, params.gospa.rho);
    Ok(TgospaResult {
        report,
        per_step,
        assignment: TgospaAssignment::Matrices(matrices),
    })
}

/// Cost decomposition of a feasible assignment-matrix sequence: localisation
/// mass over detected pairs, missed / false counts from the remaining mass,
/// and the switching cost `gamma^p/2 sum |W^k - W^{k+1}|`. The components
/// sum to the relaxed objective value of the sequence.
pub fn decompose(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    matrices: &[AssignmentMatrix],
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> Result<MetricReport> {
    let problem = Problem::build(truth, estimate, params, base)?;
    if matrices.len() != problem.window {
        return Err(Error::InvalidInput(format!(
            "expected {} assignment matrices, got {}",
            problem.window,
            matrices.len()
        )));
    }
    for (k, mat) in matrices.iter().enumerate() {
        if mat.n_truth() != problem.n_truth || mat.n_estimate() != problem.n_estimate {
            return Err(Error::InvalidInput(format!(
                "matrix {k} has shape ({}, {}), expected ({}, {})",
                mat.n_truth(),
                mat.n_estimate(),
                problem.n_truth,
                problem.n_estimate
            )));
        }
        mat.validate(1e-6)?;
    }
    let (report, _) = reports_from_matrices(&problem, matrices, params.gospa.rho);
    Ok(report)
}

/// `[ (d(X,Y)^p + d(Y,X)^p) / 2 ]^(1/p)` with the selected solver; recovers
/// the `rho = 1/2` T-GOSPA metric for any `rho` when the base distance is
/// symmetric.
pub fn tgospa_symmetrise(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    solver: Solver,
) -> Result<f64> {
    if !base.is_symmetric() {
        return Err(Error::AsymmetricBase);
    }
    let run = |a: &TrajectorySet, b: &TrajectorySet| -> Result<f64> {
        let result = match solver {
            Solver::Exact => tgospa_exact(a, b, params, base)?,
            Solver::Lp => tgospa_lp(a, b, params, base)?,
        };
        Ok(result.report.total_pth_power)
    };
    let forward = run(truth, estimate)?;
    let backward = run(estimate, truth)?;
    Ok((0.5 * (forward + backward)).powf(1.0 / params.gospa.p))
}

/// Evaluates the metric for several `rho` values with a single solve: the
/// optimal assignment does not depend on `rho`, so localisation and
/// switching costs are shared and only missed / false prices change.
#[allow(clippy::too_many_arguments)]
pub fn tgospa_sweep(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    c: f64,
    p: f64,
    gamma: f64,
    rhos: &[f64],
    base: &dyn BaseDistance,
    solver: Solver,
) -> Result<Vec<TgospaResult>> {
    if rhos.is_empty() {
        return Err(Error::parameter("rho", "sweep needs at least one value"));
    }
    let all_params: Vec<TgospaParams> = rhos
        .iter()
        .map(|&rho| TgospaParams::from_values(c, p, rho, gamma))
        .collect::<Result<Vec<_>>>()?;
    let params0 = all_params[0];
    let problem = Problem::build(truth, estimate, &params0, base)?;
    let support = problem.support();

    match solver {
        Solver::Exact => {
            let dp = exact::solve(&problem, &support, DEFAULT_MAX_ASSIGNMENT_VECTORS)?;
            let vectors = assemble_vectors(&problem, &dp, problem.window);
            Ok(all_params
                .iter()
                .map(|prm| {
                    let (report, per_step) =
                        reports_from_vectors(&problem, &vectors, prm.gospa.rho);
                    TgospaResult {
                        report,
                        per_step,
                        assignment: TgospaAssignment::Vectors(vectors.clone()),
                    }
                })
                .collect())
        }
        Solver::Lp => {
            let matrices = relax::solve(&problem, &support)?;
            Ok(all_params
                .iter()
                .map(|prm| {
                    let (report, per_step) =
                        reports_from_matrices(&problem, &matrices, prm.gospa.rho);
                    TgospaResult {
                        report,
                        per_step,
                        assignment: TgospaAssignment::Matrices(matrices.clone()),
                    }
                })
                .collect())
        }
    }
}

/// Expands the component-local optimal sequences for window [1, k] into
/// global assignment vectors.
fn assemble_vectors(problem: &Problem, dp: &exact::ExactDp, k: usize) -> Vec<AssignmentVector> {
    let local = dp.backtrack(k);
    let mut vectors = vec![AssignmentVector::unassigned(problem.n_truth); k];
    for (comp, seq) in dp.comps.iter().zip(local) {
        for (step, local_vec) in seq.into_iter().enumerate() {
            for (r, v) in local_vec.into_iter().enumerate() {
                if v > 0 {
                    vectors[step].entries[comp.rows[r]] = Some(comp.cols[(v - 1) as usize]);
                }
            }
        }
    }
    vectors
}

/// Report and per-step breakdown of a fixed assignment-vector sequence,
/// priced at the given `rho`.
fn reports_from_vectors(
    problem: &Problem,
    vectors: &[AssignmentVector],
    rho: f64,
) -> (MetricReport, Vec<StepReport>) {
    let g = &problem.params.gospa;
    let c_p = g.c_pow_p();
    let gamma_p = problem.params.gamma_pow_p();
    let len = vectors.len();
    let mut per_step = Vec::with_capacity(len);
    let (mut loc_sum, mut missed_sum, mut false_sum, mut switch_sum) = (0.0, 0.0, 0.0, 0.0);
    for k in 1..=len {
        let vector = &vectors[k - 1];
        let mut localisation = 0.0;
        let mut detected = 0usize;
        for (i, entry) in vector.entries().iter().enumerate() {
            if let Some(j) = entry {
                if problem.eligible(k, i, *j) {
                    localisation += problem.distance(k, i, *j).powf(g.p);
                    detected += 1;
                }
            }
        }
        let missed = (1.0 - rho) * c_p * (problem.truth_count[k - 1] - detected) as f64;
        let false_cost = rho * c_p * (problem.estimate_count[k - 1] - detected) as f64;
        let switch = if k < len {
            let mut count = 0.0;
            for (a, b) in vectors[k - 1].entries().iter().zip(vectors[k].entries()) {
                if a != b {
                    count += if a.is_some() && b.is_some() { 1.0 } else { 0.5 };
                }
            }
            gamma_p * count
        } else {
            0.0
        };
        loc_sum += localisation;
        missed_sum += missed;
        false_sum += false_cost;
        switch_sum += switch;
        per_step.push(StepReport {
            localisation,
            missed,
            false_cost,
            switch,
        });
    }
    let report = MetricReport::from_components(loc_sum, missed_sum, false_sum, switch_sum, g.p);
    (report, per_step)
}

/// Report and per-step breakdown of a fixed assignment-matrix sequence,
/// priced at the given `rho`.
fn reports_from_matrices(
    problem: &Problem,
    matrices: &[AssignmentMatrix],
    rho: f64,
) -> (MetricReport, Vec<StepReport>) {
    let g = &problem.params.gospa;
    let c_p = g.c_pow_p();
    let half_gamma_p = 0.5 * problem.params.gamma_pow_p();
    let len = matrices.len();
    let mut per_step = Vec::with_capacity(len);
    let (mut loc_sum, mut missed_sum, mut false_sum, mut switch_sum) = (0.0, 0.0, 0.0, 0.0);
    for k in 1..=len {
        let mat = &matrices[k - 1];
        let mut localisation = 0.0;
        let mut detected = 0.0;
        for i in 0..problem.n_truth {
            for j in 0..problem.n_estimate {
                if problem.eligible(k, i, j) {
                    let w = mat.get(i, j);
                    if w != 0.0 {
                        localisation += w * problem.distance(k, i, j).powf(g.p);
                        detected += w;
                    }
                }
            }
        }
        let missed = (1.0 - rho) * c_p * (problem.truth_count[k - 1] as f64 - detected);
        let false_cost = rho * c_p * (problem.estimate_count[k - 1] as f64 - detected);
        let switch = if k < len {
            let next = &matrices[k];
            let mut acc = 0.0;
            for i in 0..problem.n_truth {
                for j in 0..problem.n_estimate {
                    acc += (mat.get(i, j) - next.get(i, j)).abs();
                }
            }
            half_gamma_p * acc
        } else {
            0.0
        };
        loc_sum += localisation;
        missed_sum += missed;
        false_sum += false_cost;
        switch_sum += switch;
        per_step.push(StepReport {
            localisation,
            missed,
            false_cost,
            switch,
        });
    }
    let report = MetricReport::from_components(loc_sum, missed_sum, false_sum, switch_sum, g.p);
    (report, per_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basedist::Euclidean;
    use crate::types::Trajectory;

    fn traj(start: usize, coords: &[f64]) -> Trajectory {
        let states: Vec<&[f64]> = coords.iter().map(std::slice::from_ref).collect();
        Trajectory::from_coords(start, &states).unwrap()
    }

    fn params(c: f64, p: f64, rho: f64, gamma: f64) -> TgospaParams {
        TgospaParams::from_values(c, p, rho, gamma).unwrap()
    }

    /// Two truths: A alive k=1..3 at 0, B alive k=1..2 at 10.
    fn truth_pair() -> TrajectorySet {
        TrajectorySet::new(3, vec![traj(1, &[0.0, 0.0, 0.0]), traj(1, &[10.0, 10.0])]).unwrap()
    }

    /// First estimate: both truths tracked with offset 0.1; A's track is
    /// handed over to a newborn track at k=3 (one full switch) while the old
    /// track continues as a false state at 20.
    fn estimate_with_switch() -> TrajectorySet {
        TrajectorySet::new(
            3,
            vec![
                traj(1, &[0.1, 0.1, 20.0]),
                traj(1, &[10.1, 10.1]),
                traj(3, &[0.1]),
            ],
        )
        .unwrap()
    }

    /// Second estimate: A tracked all three steps, B only at k=1.
    fn estimate_with_miss() -> TrajectorySet {
        TrajectorySet::new(3, vec![traj(1, &[0.1, 0.1, 0.1]), traj(1, &[10.1])]).unwrap()
    }

    #[test]
    fn identical_sets_cost_nothing() {
        let x = truth_pair();
        let prm = params(1.0, 1.0, 0.3, 0.1);
        for solver in [Solver::Exact, Solver::Lp] {
            let r = match solver {
                Solver::Exact => tgospa_exact(&x, &x, &prm, &Euclidean).unwrap(),
                Solver::Lp => tgospa_lp(&x, &x, &prm, &Euclidean).unwrap(),
            };
            assert!(
                r.report.total.abs() <= 1e-12,
                "{solver:?}: {}",
                r.report.total
            );
        }
    }

    #[test]
    fn switch_cost_cases() {
        let a = AssignmentVector::new(vec![Some(0)]).unwrap();
        let b = AssignmentVector::new(vec![Some(1)]).unwrap();
        let none = AssignmentVector::new(vec![None]).unwrap();
        assert_eq!(switch_cost(&a, &a, 0.1, 1.0).unwrap(), 0.0);
        assert_eq!(switch_cost(&a, &b, 0.1, 1.0).unwrap(), 0.1);
        assert_eq!(switch_cost(&a, &none, 0.1, 1.0).unwrap(), 0.05);
        assert_eq!(switch_cost(&none, &none, 0.1, 1.0).unwrap(), 0.0);
        assert!(switch_cost(&a, &AssignmentVector::unassigned(2), 0.1, 1.0).is_err());
        assert!(switch_cost(&a, &b, 0.0, 1.0).is_err());
    }

    #[test]
    fn assignment_vector_rejects_duplicates() {
        assert!(AssignmentVector::new(vec![Some(1), Some(1)]).is_err());
        assert!(AssignmentVector::new(vec![Some(1), None, Some(0)]).is_ok());
    }

    #[test]
    fn step_cost_cases() {
        let x = truth_pair();
        let y = estimate_with_switch();
        let prm = params(1.0, 1.0, 0.3, 0.1);
        // k = 3: A assigned to the newborn track (error 0.1), old track false
        let v = AssignmentVector::new(vec![Some(2), None]).unwrap();
        let cost = step_cost(&x, &y, &v, 3, &prm, &Euclidean).unwrap();
        assert!((cost - (0.1 + 0.3)).abs() <= 1e-12);
        // assigning A to the far-away track counts as one missed + one false
        let far = AssignmentVector::new(vec![Some(0), None]).unwrap();
        let cost_far = step_cost(&x, &y, &far, 3, &prm, &Euclidean).unwrap();
        assert!((cost_far - (1.0 + 0.3)).abs() <= 1e-12);
        // out-of-range assignment entry
        let bad = AssignmentVector::new(vec![Some(7), None]).unwrap();
        assert!(step_cost(&x, &y, &bad, 3, &prm, &Euclidean).is_err());
        assert!(step_cost(&x, &y, &v, 9, &prm, &Euclidean).is_err());
    }

    #[test]
    fn step_cost_zero_when_everything_absent() {
        let x = TrajectorySet::new(5, vec![traj(1, &[0.0])]).unwrap();
        let y = TrajectorySet::new(5, vec![traj(1, &[0.0])]).unwrap();
        let v = AssignmentVector::new(vec![Some(0)]).unwrap();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        assert_eq!(step_cost(&x, &y, &v, 4, &prm, &Euclidean).unwrap(), 0.0);
    }

    // closed forms: d(X, Y1) = 5*0.1 + rho + gamma, d(X, Y2) = 4*0.1 + (1 - rho)
    #[test]
    fn handover_example_closed_forms() {
        let x = truth_pair();
        let y1 = estimate_with_switch();
        let y2 = estimate_with_miss();
        for rho in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let prm = params(1.0, 1.0, rho, 0.1);
            let d1 = tgospa_exact(&x, &y1, &prm, &Euclidean).unwrap();
            let d2 = tgospa_exact(&x, &y2, &prm, &Euclidean).unwrap();
            assert!(
                (d1.report.total - (0.5 + rho + 0.1)).abs() <= 1e-12,
                "rho={rho}: {}",
                d1.report.total
            );
            assert!((d2.report.total - (0.4 + (1.0 - rho))).abs() <= 1e-12);
            // LP relaxation is tight on this instance
            let l1 = tgospa_lp(&x, &y1, &prm, &Euclidean).unwrap();
            let l2 = tgospa_lp(&x, &y2, &prm, &Euclidean).unwrap();
            assert!((l1.report.total - d1.report.total).abs() <= 1e-8);
            assert!((l2.report.total - d2.report.total).abs() <= 1e-8);
        }
    }

    #[test]
    fn handover_example_decomposition() {
        let x = truth_pair();
        let y1 = estimate_with_switch();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        let r = tgospa_exact(&x, &y1, &prm, &Euclidean).unwrap();
        assert!((r.report.localisation - 0.5).abs() <= 1e-12);
        assert!((r.report.false_cost - 0.5).abs() <= 1e-12);
        assert!(r.report.missed.abs() <= 1e-12);
        assert!((r.report.switch - 0.1).abs() <= 1e-12);
        let step_sum: f64 = r
            .per_step
            .iter()
            .map(|s| s.localisation + s.missed + s.false_cost + s.switch)
            .sum();
        assert!((step_sum - r.report.total_pth_power).abs() <= 1e-9);
    }

    #[test]
    fn single_step_reduces_to_gospa() {
        let x = TrajectorySet::new(1, vec![traj(1, &[0.0]), traj(1, &[10.0])]).unwrap();
        let y = TrajectorySet::new(1, vec![traj(1, &[0.2]), traj(1, &[10.3]), traj(1, &[20.0])])
            .unwrap();
        let prm = params(1.0, 1.0, 0.3, 0.1);
        let exact = tgospa_exact(&x, &y, &prm, &Euclidean).unwrap();
        let lp = tgospa_lp(&x, &y, &prm, &Euclidean).unwrap();
        let g = crate::gospa::gospa(
            &crate::types::ObjectSet::from_coords(&[&[0.0], &[10.0]]).unwrap(),
            &crate::types::ObjectSet::from_coords(&[&[0.2], &[10.3], &[20.0]]).unwrap(),
            &prm.gospa,
            &Euclidean,
        )
        .unwrap();
        assert!((exact.report.total - g.report.total).abs() <= 1e-12);
        assert!((lp.report.total - g.report.total).abs() <= 1e-8);
        assert!((exact.report.total - 0.8).abs() <= 1e-12);
    }

    #[test]
    fn size_bound_enforced() {
        // 7 truths and 7 estimates all mutually detectable
        let mk = |offset: f64| {
            TrajectorySet::new(
                2,
                (0..7)
                    .map(|i| traj(1, &[i as f64 * 0.01 + offset, i as f64 * 0.01 + offset]))
                    .collect(),
            )
            .unwrap()
        };
        let x = mk(0.0);
        let y = mk(0.001);
        let prm = params(1.0, 2.0, 0.5, 0.1);
        let err = tgospa_exact_with_bound(&x, &y, &prm, &Euclidean, 1000).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { .. }));
        // the LP handles it
        let lp = tgospa_lp(&x, &y, &prm, &Euclidean).unwrap();
        assert!(lp.report.total >= 0.0);
    }

    // identity: moving one state beyond the cut-off strictly raises the value
    #[test]
    fn perturbation_beyond_cutoff_raises_value() {
        let x = truth_pair();
        let mut trajs = x.trajectories().to_vec();
        trajs[0] = traj(1, &[0.0, 2.5, 0.0]); // mid-state moved by more than c = 1
        let y = TrajectorySet::new(3, trajs).unwrap();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        for solver in [Solver::Exact, Solver::Lp] {
            let d = match solver {
                Solver::Exact => tgospa_exact(&x, &y, &prm, &Euclidean).unwrap(),
                Solver::Lp => tgospa_lp(&x, &y, &prm, &Euclidean).unwrap(),
            };
            // at least one missed plus one false object at that step
            assert!(
                d.report.total >= 1.0 - 1e-9,
                "{solver:?}: {}",
                d.report.total
            );
        }
    }

    #[test]
    fn window_mismatch_rejected() {
        let x = TrajectorySet::new(2, vec![traj(1, &[0.0])]).unwrap();
        let y = TrajectorySet::new(3, vec![traj(1, &[0.0])]).unwrap();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        assert!(tgospa_exact(&x, &y, &prm, &Euclidean).is_err());
    }

    #[test]
    fn symmetrise_recovers_half_rho_value() {
        let x = truth_pair();
        let y1 = estimate_with_switch();
        let half = params(1.0, 1.0, 0.5, 0.1);
        for solver in [Solver::Exact, Solver::Lp] {
            let direct = match solver {
                Solver::Exact => tgospa_exact(&x, &y1, &half, &Euclidean).unwrap(),
                Solver::Lp => tgospa_lp(&x, &y1, &half, &Euclidean).unwrap(),
            };
            for rho in [0.2, 0.3, 0.8] {
                let prm = params(1.0, 1.0, rho, 0.1);
                let sym = tgospa_symmetrise(&x, &y1, &prm, &Euclidean, solver).unwrap();
                assert!(
                    (sym - direct.report.total).abs() <= 1e-8,
                    "{solver:?} rho={rho}: {sym} vs {}",
                    direct.report.total
                );
            }
        }
    }

    #[test]
    fn sweep_shares_localisation_and_switch() {
        let x = truth_pair();
        let y1 = estimate_with_switch();
        for solver in [Solver::Exact, Solver::Lp] {
            let sweep =
                tgospa_sweep(&x, &y1, 1.0, 1.0, 0.1, &[0.3, 0.5, 0.7], &Euclidean, solver).unwrap();
            for r in &sweep {
                assert_eq!(r.report.localisation, sweep[0].report.localisation);
                assert_eq!(r.report.switch, sweep[0].report.switch);
            }
            // totals match independent solves
            for (r, rho) in sweep.iter().zip([0.3, 0.5, 0.7]) {
                let prm = params(1.0, 1.0, rho, 0.1);
                let direct = match solver {
                    Solver::Exact => tgospa_exact(&x, &y1, &prm, &Euclidean).unwrap(),
                    Solver::Lp => tgospa_lp(&x, &y1, &prm, &Euclidean).unwrap(),
                };
                assert!((r.report.total - direct.report.total).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn curve_matches_truncated_solves() {
        let x = truth_pair();
        let y1 = estimate_with_switch();
        let prm = params(1.0, 1.0, 0.4, 0.1);
        let curve = tgospa_exact_curve(&x, &y1, &prm, &Euclidean).unwrap();
        assert_eq!(curve.len(), 3);
        for k in 1..=3 {
            let direct = tgospa_exact(
                &x.truncated(k).unwrap(),
                &y1.truncated(k).unwrap(),
                &prm,
                &Euclidean,
            )
            .unwrap();
            assert!(
                (curve[k - 1].total - direct.report.total).abs() <= 1e-10,
                "k={k}: {} vs {}",
                curve[k - 1].total,
                direct.report.total
            );
        }
    }

    #[test]
    fn curve_matches_truncated_solves_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31);
        for _ in 0..40 {
            let window = rng.gen_range(2..=5);
            let mk = |rng: &mut rand_chacha::ChaCha12Rng| {
                let n = rng.gen_range(0..=3);
                let trajectories = (0..n)
                    .map(|_| {
                        let birth = rng.gen_range(1..=window);
                        let death = rng.gen_range(birth..=window);
                        let coords: Vec<f64> =
                            (birth..=death).map(|_| rng.gen_range(0.0..5.0)).collect();
                        traj(birth, &coords)
                    })
                    .collect();
                TrajectorySet::new(window, trajectories).unwrap()
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            let prm = params(1.2, 1.0, rng.gen_range(0.1..0.9), rng.gen_range(0.05..0.6));
            let curve = tgospa_exact_curve(&x, &y, &prm, &Euclidean).unwrap();
            for k in 1..=window {
                let direct = tgospa_exact(
                    &x.truncated(k).unwrap(),
                    &y.truncated(k).unwrap(),
                    &prm,
                    &Euclidean,
                )
                .unwrap();
                assert!(
                    (curve[k - 1].total - direct.report.total).abs() <= 1e-10,
                    "k={k}: {} vs {}",
                    curve[k - 1].total,
                    direct.report.total
                );
            }
        }
    }

    #[test]
    fn decompose_identity_instance_is_zero() {
        let x = truth_pair();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        let r = tgospa_lp(&x, &x, &prm, &Euclidean).unwrap();
        let TgospaAssignment::Matrices(mats) = &r.assignment else {
            panic!("lp returns matrices")
        };
        let report = decompose(&x, &x, mats, &prm, &Euclidean).unwrap();
        assert!(report.total.abs() <= 1e-9);
        assert!(report.localisation.abs() <= 1e-12);
        assert!(report.switch.abs() <= 1e-12);
    }

    #[test]
    fn decompose_rejects_infeasible_matrices() {
        let x = truth_pair();
        let prm = params(1.0, 1.0, 0.5, 0.1);
        let bad = AssignmentMatrix::zeros(x.len(), x.len());
        let mats = vec![bad.clone(), bad.clone(), bad];
        assert!(decompose(&x, &x, &mats, &prm, &Euclidean).is_err());
    }

    #[test]
    fn empty_sets() {
        let prm = params(1.0, 2.0, 0.4, 0.1);
        let empty = TrajectorySet::new(3, vec![]).unwrap();
        let x = truth_pair();
        let r = tgospa_exact(&empty, &empty, &prm, &Euclidean).unwrap();
        assert_eq!(r.report.total, 0.0);
        let r = tgospa_exact(&x, &empty, &prm, &Euclidean).unwrap();
        // five truth states missed at (1 - rho) c^p each
        assert!((r.report.total_pth_power - 5.0 * 0.6).abs() <= 1e-12);
        let l = tgospa_lp(&empty, &x, &prm, &Euclidean).unwrap();
        // five false states at rho c^p each
        assert!((l.report.total_pth_power - 5.0 * 0.4).abs() <= 1e-9);
    }
}
