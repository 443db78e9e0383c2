//! Monte-Carlo evaluation over repeated runs: seeded scenario generation,
//! synthetic estimate corruption, and RMS quasi-metric curves per time step.
//!
//! Randomness always flows through an explicitly seeded ChaCha12 generator
//! (a portable, versioned stream cipher RNG), so every artefact here is
//! bit-reproducible for a fixed seed and crate version. Aggregation over
//! runs uses pairwise summation, so results do not depend on evaluation
//! order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::basedist::BaseDistance;
use crate::error::{Error, Result};
use crate::tgospa::{self, Solver};
use crate::types::{ObjectState, TgospaParams, Trajectory, TrajectorySet};

/// Nearly-constant-velocity scenario parameters. States interleave position
/// and velocity per axis: `[p1, v1, p2, v2, ...]`.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    /// Window length T.
    pub steps: usize,
    /// Sampling period tau.
    pub sampling_period: f64,
    /// Scale factor q of the process noise covariance.
    pub process_noise: f64,
    /// Mean of the Gaussian birth density.
    pub birth_mean: Vec<f64>,
    /// Covariance of the birth density, row-major, symmetric positive
    /// definite.
    pub birth_cov: Vec<f64>,
    /// Per-step survival probability of the motion model family; the
    /// benchmark scenario pins its lifetimes instead of sampling them.
    pub survival_probability: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// The four-object benchmark configuration: T = 101, tau = 1, q = 0.4,
    /// 2-D position/velocity births with mean (400, 0, 400, 0) and covariance
    /// diag(300^2, 2^2, 300^2, 2^2), survival probability 0.99.
    pub fn benchmark(seed: u64) -> Self {
        ScenarioConfig {
            steps: 101,
            sampling_period: 1.0,
            process_noise: 0.4,
            birth_mean: vec![400.0, 0.0, 400.0, 0.0],
            birth_cov: diag(&[300.0 * 300.0, 4.0, 300.0 * 300.0, 4.0]),
            survival_probability: 0.99,
            seed,
        }
    }

    fn validate(&self) -> Result<Vec<f64>> {
        if self.steps < 1 {
            return Err(Error::parameter("steps", "window must be >= 1"));
        }
        if !(self.sampling_period.is_finite() && self.sampling_period > 0.0) {
            return Err(Error::parameter(
                "sampling_period",
                "must be finite and > 0",
            ));
        }
        if !(self.process_noise.is_finite() && self.process_noise > 0.0) {
            return Err(Error::parameter("process_noise", "must be finite and > 0"));
        }
        if !(self.survival_probability > 0.0 && self.survival_probability <= 1.0) {
            return Err(Error::parameter(
                "survival_probability",
                "must lie in (0, 1]",
            ));
        }
        let dim = self.birth_mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::parameter(
                "birth_mean",
                "state must interleave position/velocity pairs",
            ));
        }
        if self.birth_cov.len() != dim * dim {
            return Err(Error::parameter(
                "birth_cov",
                "must be a square matrix over the state",
            ));
        }
        cholesky(dim, &self.birth_cov)
            .ok_or_else(|| Error::parameter("birth_cov", "must be symmetric positive definite"))
    }
}

/// Synthetic corruption of a truth trajectory set, standing in for a tracker
/// so the evaluation pipeline can be exercised end to end.
#[derive(Debug, Clone)]
pub struct CorruptionConfig {
    /// Per-step detection probability in (0, 1].
    pub detection_probability: f64,
    /// Clutter rate per step (Poisson mean before promotion).
    pub clutter_rate: f64,
    /// Fraction of clutter promoted to false tracks; the false-track rate
    /// per step is `clutter_rate * false_track_fraction`.
    pub false_track_fraction: f64,
    /// Inclusive length range of false tracks.
    pub false_track_len: (usize, usize),
    /// Uniform area bounds per positional component.
    pub clutter_region: Vec<(f64, f64)>,
    /// Measurement noise covariance over the positional components,
    /// row-major; the all-zero matrix disables jitter.
    pub noise_cov: Vec<f64>,
    /// Per-step probability of swapping two concurrently alive tracks from
    /// that step onward.
    pub switch_probability: f64,
    /// Which state components are positional (jittered and clutter-filled).
    pub position_indices: Vec<usize>,
    pub seed: u64,
}

impl CorruptionConfig {
    /// Benchmark defaults for position-only states: detection probability
    /// 0.9, clutter rate 20 over [0, 800]^2 with promotion fraction 0.005,
    /// false tracks of 1..=3 steps, noise covariance diag(4, 4), no induced
    /// switches.
    pub fn benchmark(seed: u64) -> Self {
        CorruptionConfig {
            detection_probability: 0.9,
            clutter_rate: 20.0,
            false_track_fraction: 0.005,
            false_track_len: (1, 3),
            clutter_region: vec![(0.0, 800.0), (0.0, 800.0)],
            noise_cov: diag(&[4.0, 4.0]),
            switch_probability: 0.0,
            position_indices: vec![0, 1],
            seed,
        }
    }

    fn validate(&self) -> Result<Option<Vec<f64>>> {
        if !(self.detection_probability > 0.0 && self.detection_probability <= 1.0) {
            return Err(Error::parameter(
                "detection_probability",
                "must lie in (0, 1]",
            ));
        }
        if !(self.clutter_rate.is_finite() && self.clutter_rate >= 0.0) {
            return Err(Error::parameter("clutter_rate", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.false_track_fraction) {
            return Err(Error::parameter(
                "false_track_fraction",
                "must lie in [0, 1]",
            ));
        }
        if self.false_track_len.0 < 1 || self.false_track_len.0 > self.false_track_len.1 {
            return Err(Error::parameter("false_track_len", "needs 1 <= min <= max"));
        }
        if !(0.0..1.0).contains(&self.switch_probability) {
            return Err(Error::parameter("switch_probability", "must lie in [0, 1)"));
        }
        let m = self.position_indices.len();
        if m == 0 {
            return Err(Error::parameter("position_indices", "must not be empty"));
        }
        let mut seen = self.position_indices.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != m {
            return Err(Error::parameter("position_indices", "must be distinct"));
        }
        if self.clutter_region.len() != m {
            return Err(Error::parameter(
                "clutter_region",
                "needs one (low, high) bound per positional component",
            ));
        }
        for &(lo, hi) in &self.clutter_region {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::parameter(
                    "clutter_region",
                    "bounds must satisfy low < high",
                ));
            }
        }
        if self.noise_cov.len() != m * m {
            return Err(Error::parameter(
                "noise_cov",
                "must be square over the positional components",
            ));
        }
        if self.noise_cov.iter().all(|&v| v == 0.0) {
            return Ok(None); // jitter disabled
        }
        cholesky(m, &self.noise_cov)
            .map(Some)
            .ok_or_else(|| Error::parameter("noise_cov", "must be symmetric positive definite"))
    }
}

/// One truth set and the estimate of each Monte-Carlo run, sharing a window.
#[derive(Debug, Clone)]
pub struct RunBatch {
    truth: TrajectorySet,
    estimates: Vec<TrajectorySet>,
}

impl RunBatch {
    pub fn new(truth: TrajectorySet, estimates: Vec<TrajectorySet>) -> Result<Self> {
        if estimates.is_empty() {
            return Err(Error::InvalidInput("batch needs at least one run".into()));
        }
        for (i, e) in estimates.iter().enumerate() {
            if e.window() != truth.window() {
                return Err(Error::InvalidInput(format!(
                    "run {i} has window {} but the truth has {}",
                    e.window(),
                    truth.window()
                )));
            }
        }
        Ok(RunBatch { truth, estimates })
    }

    pub fn truth(&self) -> &TrajectorySet {
        &self.truth
    }

    pub fn estimates(&self) -> &[TrajectorySet] {
        &self.estimates
    }

    pub fn runs(&self) -> usize {
        self.estimates.len()
    }
}

/// The four-object benchmark scenario over T = 101 steps: three objects
/// born at step 1 and one at step 6, dying at steps 30, 75, 80 and 100
/// respectively, all propagated by the seeded NCV model.
pub fn generate_fig3_scenario(seed: u64) -> TrajectorySet {
    generate_scenario(
        &ScenarioConfig::benchmark(seed),
        &[(1, 30), (1, 75), (1, 80), (6, 100)],
    )
    .expect("benchmark configuration is valid")
}

/// NCV scenario with explicit per-object lifetimes (birth step, death step).
pub fn generate_scenario(
    cfg: &ScenarioConfig,
    lifetimes: &[(usize, usize)],
) -> Result<TrajectorySet> {
    let birth_chol = cfg.validate()?;
    let dim = cfg.birth_mean.len();
    for &(birth, death) in lifetimes {
        if birth < 1 || death < birth || death > cfg.steps {
            return Err(Error::InvalidTrajectory(format!(
                "lifetime ({birth}, {death}) outside window [1, {}]",
                cfg.steps
            )));
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let noise_chol = ncv_noise_cholesky(cfg.sampling_period, cfg.process_noise);
    let mut trajectories = Vec::with_capacity(lifetimes.len());
    for &(birth, death) in lifetimes {
        let mut state = sample_gaussian(&mut rng, &cfg.birth_mean, &birth_chol, dim);
        let mut states = Vec::with_capacity(death - birth + 1);
        states.push(ObjectState::new(state.clone())?);
        for _ in birth..death {
            ncv_step(&mut rng, &mut state, cfg.sampling_period, &noise_chol);
            states.push(ObjectState::new(state.clone())?);
        }
        trajectories.push(Trajectory::new(birth, states)?);
    }
    TrajectorySet::new(cfg.steps, trajectories)
}

/// Keeps only the listed state components (e.g. the positional ones).
pub fn project_components(set: &TrajectorySet, indices: &[usize]) -> Result<TrajectorySet> {
    if indices.is_empty() {
        return Err(Error::parameter("indices", "must not be empty"));
    }
    let trajectories = set
        .trajectories()
        .iter()
        .map(|t| {
            let states = t
                .states()
                .iter()
                .map(|s| {
                    let coords = indices
                        .iter()
                        .map(|&i| {
                            s.coords().get(i).copied().ok_or(Error::DimensionMismatch {
                                left: i + 1,
                                right: s.dim(),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ObjectState::new(coords)
                })
                .collect::<Result<Vec<_>>>()?;
            Trajectory::new(t.start(), states)
        })
        .collect::<Result<Vec<_>>>()?;
    TrajectorySet::new(set.window(), trajectories)
}

/// Corrupts a truth set into a synthetic estimate: per-step misses, position
/// jitter, short uniform false tracks, optional identity swaps, and a final
/// re-split into contiguous trajectories.
pub fn corrupt(truth: &TrajectorySet, cfg: &CorruptionConfig) -> Result<TrajectorySet> {
    let noise_chol = cfg.validate()?;
    let window = truth.window();
    let dim = match truth.dim() {
        Some(d) => d,
        None => {
            if cfg.clutter_rate * cfg.false_track_fraction > 0.0 {
                return Err(Error::InvalidInput(
                    "cannot infer the state dimension for false tracks from an empty truth set"
                        .into(),
                ));
            }
            return TrajectorySet::new(window, vec![]);
        }
    };
    let m = cfg.position_indices.len();
    if cfg.position_indices.iter().any(|&i| i >= dim) {
        return Err(Error::parameter(
            "position_indices",
            format!("index out of range for dimension {dim}"),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);

    // sparse tracks: per step, an optional state
    let mut tracks: Vec<Vec<Option<Vec<f64>>>> = Vec::new();

    // detections with positional jitter
    for t in truth.trajectories() {
        let mut track = vec![None; window];
        for k in t.start()..=t.end() {
            if rng.gen_bool(cfg.detection_probability) {
                let mut coords = t.state_at(k).expect("k within lifetime").coords().to_vec();
                if let Some(chol) = &noise_chol {
                    let zero = vec![0.0; m];
                    let noise = sample_gaussian(&mut rng, &zero, chol, m);
                    for (a, &idx) in cfg.position_indices.iter().enumerate() {
                        coords[idx] += noise[a];
                    }
                }
                track[k - 1] = Some(coords);
            }
        }
        tracks.push(track);
    }

    // false tracks: short uniform-area trajectories
    let false_rate = cfg.clutter_rate * cfg.false_track_fraction;
    if false_rate > 0.0 {
        let poisson = Poisson::new(false_rate)
            .map_err(|e| Error::parameter("clutter_rate", e.to_string()))?;
        for k in 1..=window {
            let count = poisson.sample(&mut rng) as usize;
            for _ in 0..count {
                let len = rng
                    .gen_range(cfg.false_track_len.0..=cfg.false_track_len.1)
                    .min(window - k + 1);
                let mut track = vec![None; window];
                for step in k..k + len {
                    let mut coords = vec![0.0; dim];
                    for (a, &idx) in cfg.position_indices.iter().enumerate() {
                        let (lo, hi) = cfg.clutter_region[a];
                        coords[idx] = rng.gen_range(lo..hi);
                    }
                    track[step - 1] = Some(coords);
                }
                tracks.push(track);
            }
        }
    }

    // identity swaps between concurrently alive tracks, from the step onward
    if cfg.switch_probability > 0.0 {
        for k in 1..=window {
            if !rng.gen_bool(cfg.switch_probability) {
                continue;
            }
            let alive: Vec<usize> = (0..tracks.len())
                .filter(|&t| tracks[t][k - 1].is_some())
                .collect();
            if alive.len() < 2 {
                continue;
            }
            let first_pick = alive[rng.gen_range(0..alive.len())];
            let mut second_pick = alive[rng.gen_range(0..alive.len() - 1)];
            if second_pick >= first_pick {
                let pos = alive.iter().position(|&x| x == second_pick).unwrap();
                second_pick = alive[pos + 1];
            }
            let (low, high) = (first_pick.min(second_pick), first_pick.max(second_pick));
            let (head, tail) = tracks.split_at_mut(high);
            for step in k - 1..window {
                std::mem::swap(&mut head[low][step], &mut tail[0][step]);
            }
        }
    }

    // re-split into contiguous trajectories
    let mut trajectories = Vec::new();
    for track in tracks {
        let mut run_start = None;
        let mut states: Vec<ObjectState> = Vec::new();
        for (idx, entry) in track.into_iter().enumerate() {
            match entry {
                Some(coords) => {
                    if run_start.is_none() {
                        run_start = Some(idx + 1);
                    }
                    states.push(ObjectState::new(coords)?);
                }
                None => {
                    if let Some(start) = run_start.take() {
                        trajectories.push(Trajectory::new(start, std::mem::take(&mut states))?);
                    }
                }
            }
        }
        if let Some(start) = run_start {
            trajectories.push(Trajectory::new(start, states)?);
        }
    }
    TrajectorySet::new(window, trajectories)
}

/// RMS quasi-metric over the batch at time step `upto`:
/// `sqrt( sum_i d(X|k, Xhat_i|k)^2 / (runs * k) )` with both sets truncated
/// to the window [1, k]. With `p = 2` this is the RMS of the quasi-metric
/// normalised by the window length.
pub fn rms_tgospa(
    batch: &RunBatch,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    upto: usize,
    solver: Solver,
) -> Result<f64> {
    if upto < 1 || upto > batch.truth.window() {
        return Err(Error::OutOfWindow {
            step: upto,
            window: batch.truth.window(),
        });
    }
    let truth = batch.truth.truncated(upto)?;
    let mut squares = Vec::with_capacity(batch.runs());
    for estimate in &batch.estimates {
        let estimate = estimate.truncated(upto)?;
        let total = match solver {
            Solver::Exact => {
                tgospa::tgospa_exact(&truth, &estimate, params, base)?
                    .report
                    .total
            }
            Solver::Lp => {
                tgospa::tgospa_lp(&truth, &estimate, params, base)?
                    .report
                    .total
            }
        };
        squares.push(total * total);
    }
    Ok((pairwise_sum(&squares) / (batch.runs() * upto) as f64).sqrt())
}

/// The full RMS curve, one value per time step `k = 1..=T`. The exact
/// solver evaluates all truncations of one run in a single forward pass.
pub fn rms_tgospa_curve(
    batch: &RunBatch,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    solver: Solver,
) -> Result<Vec<f64>> {
    let window = batch.truth.window();
    // per step, the squared metric value of every run
    let mut squares = vec![Vec::with_capacity(batch.runs()); window];
    for estimate in &batch.estimates {
        match solver {
            Solver::Exact => {
                let curve = tgospa::tgospa_exact_curve(&batch.truth, estimate, params, base)?;
                for (k, report) in curve.iter().enumerate() {
                    squares[k].push(report.total * report.total);
                }
            }
            Solver::Lp => {
                for k in 1..=window {
                    let truth = batch.truth.truncated(k)?;
                    let est = estimate.truncated(k)?;
                    let total = tgospa::tgospa_lp(&truth, &est, params, base)?.report.total;
                    squares[k - 1].push(total * total);
                }
            }
        }
    }
    Ok(squares
        .iter()
        .enumerate()
        .map(|(k, sq)| (pairwise_sum(sq) / (batch.runs() * (k + 1)) as f64).sqrt())
        .collect())
}

/// Monte-Carlo estimator `( mean_i d(X, Xhat_i)^p' )^(1/p')` of the expected
/// quasi-metric over the full window, the truth treated as deterministic.
pub fn expected_qmetric(
    batch: &RunBatch,
    params: &TgospaParams,
    base: &dyn BaseDistance,
    pprime: f64,
    solver: Solver,
) -> Result<f64> {
    if !(pprime.is_finite() && pprime >= 1.0) {
        return Err(Error::parameter(
            "pprime",
            format!("must be finite and >= 1, got {pprime}"),
        ));
    }
    let mut powers = Vec::with_capacity(batch.runs());
    for estimate in &batch.estimates {
        let total = match solver {
            Solver::Exact => {
                tgospa::tgospa_exact(&batch.truth, estimate, params, base)?
                    .report
                    .total
            }
            Solver::Lp => {
                tgospa::tgospa_lp(&batch.truth, estimate, params, base)?
                    .report
                    .total
            }
        };
        powers.push(total.powf(pprime));
    }
    Ok((pairwise_sum(&powers) / batch.runs() as f64).powf(1.0 / pprime))
}

/// Pairwise (cascade) summation: deterministic and more accurate than a
/// sequential fold for long inputs.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn diag(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n * n];
    for (i, &v) in values.iter().enumerate() {
        out[i * n + i] = v;
    }
    out
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix
/// (row-major); None if the matrix is not SPD.
fn cholesky(n: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            if (a[i * n + j] - a[j * n + i]).abs() > 1e-9 * a[i * n + i].abs().max(1.0) {
                return None;
            }
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Draws from N(mean, L L^T) with the given Cholesky factor.
fn sample_gaussian(rng: &mut ChaCha12Rng, mean: &[f64], chol: &[f64], n: usize) -> Vec<f64> {
    let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut out = mean.to_vec();
    for i in 0..n {
        for j in 0..=i {
            out[i] += chol[i * n + j] * z[j];
        }
    }
    out
}

/// Cholesky factor entries (l11, l21, l22) of the per-axis NCV process noise
/// `q * [tau^3/3, tau^2/2; tau^2/2, tau]`.
fn ncv_noise_cholesky(tau: f64, q: f64) -> [f64; 3] {
    let l11 = (q * tau * tau * tau / 3.0).sqrt();
    let l21 = q * tau * tau / 2.0 / l11;
    let l22 = (q * tau - l21 * l21).sqrt();
    [l11, l21, l22]
}

/// One NCV transition of an interleaved `[p, v, p, v, ...]` state.
fn ncv_step(rng: &mut ChaCha12Rng, state: &mut [f64], tau: f64, chol: &[f64; 3]) {
    for axis in 0..state.len() / 2 {
        let (p_idx, v_idx) = (2 * axis, 2 * axis + 1);
        let z1: f64 = StandardNormal.sample(rng);
        let z2: f64 = StandardNormal.sample(rng);
        state[p_idx] += tau * state[v_idx] + chol[0] * z1;
        state[v_idx] += chol[1] * z1 + chol[2] * z2;
    }
}
