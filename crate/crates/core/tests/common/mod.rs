//! Shared helpers for the integration suites: independent brute-force
//! oracles and random instance generators.
//!
//! The oracles evaluate the metric definitions directly, by exhaustive
//! enumeration of assignment sets and assignment-vector sequences, and
//! never touch the solver code paths they are used to validate.

use gospa::basedist::BaseDistance;
use gospa::types::{GospaParams, ObjectSet, TgospaParams, Trajectory, TrajectorySet};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// GOSPA by exhaustive minimisation over every assignment set: each truth
/// index maps to an unused estimate index or stays unassigned.
pub fn gospa_oracle(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    params: &GospaParams,
    base: &dyn BaseDistance,
) -> f64 {
    let (n_x, n_y) = (truth.len(), estimate.len());
    let c_p = params.c.powf(params.p);
    let mut dist = vec![0.0; n_x * n_y];
    for i in 0..n_x {
        for j in 0..n_y {
            dist[i * n_y + j] = base
                .eval(truth.get(i).unwrap(), estimate.get(j).unwrap())
                .unwrap();
        }
    }

    fn recurse(
        i: usize,
        n_x: usize,
        n_y: usize,
        used: &mut [bool],
        acc: f64,
        pairs: usize,
        dist: &[f64],
        p: f64,
        best: &mut f64,
        c_p: f64,
        rho: f64,
    ) {
        if i == n_x {
            let total =
                acc + rho * c_p * (n_y - pairs) as f64 + (1.0 - rho) * c_p * (n_x - pairs) as f64;
            if total < *best {
                *best = total;
            }
            return;
        }
        recurse(i + 1, n_x, n_y, used, acc, pairs, dist, p, best, c_p, rho);
        for j in 0..n_y {
            if !used[j] {
                used[j] = true;
                let d = dist[i * n_y + j].powf(p);
                recurse(
                    i + 1,
                    n_x,
                    n_y,
                    used,
                    acc + d,
                    pairs + 1,
                    dist,
                    p,
                    best,
                    c_p,
                    rho,
                );
                used[j] = false;
            }
        }
    }

    let mut best = f64::INFINITY;
    let mut used = vec![false; n_y];
    recurse(
        0, n_x, n_y, &mut used, 0.0, 0, &dist, params.p, &mut best, c_p, params.rho,
    );
    best.powf(1.0 / params.p)
}

/// The symmetric metric by brute force in its cardinality-term form:
/// `min over assignment sets ( sum d_b^p + c^p/2 (|x| + |y| - 2 |pairs|) )`.
pub fn gospa_metric_oracle(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    c: f64,
    p: f64,
    base: &dyn BaseDistance,
) -> f64 {
    let (n_x, n_y) = (truth.len(), estimate.len());
    let c_p = c.powf(p);
    fn recurse(
        i: usize,
        n_x: usize,
        n_y: usize,
        used: &mut [bool],
        truth: &ObjectSet,
        estimate: &ObjectSet,
        base: &dyn BaseDistance,
        acc: f64,
        pairs: usize,
        p: f64,
        c_p: f64,
        best: &mut f64,
    ) {
        if i == n_x {
            let total = acc + 0.5 * c_p * (n_x + n_y - 2 * pairs) as f64;
            if total < *best {
                *best = total;
            }
            return;
        }
        recurse(
            i + 1,
            n_x,
            n_y,
            used,
            truth,
            estimate,
            base,
            acc,
            pairs,
            p,
            c_p,
            best,
        );
        for j in 0..n_y {
            if !used[j] {
                used[j] = true;
                let d = base
                    .eval(truth.get(i).unwrap(), estimate.get(j).unwrap())
                    .unwrap()
                    .powf(p);
                recurse(
                    i + 1,
                    n_x,
                    n_y,
                    used,
                    truth,
                    estimate,
                    base,
                    acc + d,
                    pairs + 1,
                    p,
                    c_p,
                    best,
                );
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; n_y];
    recurse(
        0, n_x, n_y, &mut used, truth, estimate, base, 0.0, 0, p, c_p, &mut best,
    );
    best.powf(1.0 / p)
}

/// All injective assignment vectors over `n_x` truths and `n_y` estimates
/// (None allowed anywhere, estimates used at most once).
fn all_assignment_vectors(n_x: usize, n_y: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    let mut current = vec![None; n_x];
    let mut used = vec![false; n_y];
    fn recurse(
        i: usize,
        n_x: usize,
        n_y: usize,
        current: &mut Vec<Option<usize>>,
        used: &mut [bool],
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if i == n_x {
            out.push(current.clone());
            return;
        }
        current[i] = None;
        recurse(i + 1, n_x, n_y, current, used, out);
        for j in 0..n_y {
            if !used[j] {
                used[j] = true;
                current[i] = Some(j);
                recurse(i + 1, n_x, n_y, current, used, out);
                current[i] = None;
                used[j] = false;
            }
        }
    }
    recurse(0, n_x, n_y, &mut current, &mut used, &mut out);
    out
}

/// T-GOSPA by exhaustive enumeration of every assignment-vector sequence,
/// evaluating the definition directly (per-step costs plus switching).
pub fn tgospa_sequence_oracle(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> f64 {
    let window = truth.window();
    let (n_x, n_y) = (truth.len(), estimate.len());
    let g = &params.gospa;
    let c_p = g.c.powf(g.p);
    let gamma_p = params.gamma.powf(g.p);
    let vectors = all_assignment_vectors(n_x, n_y);

    // per step and vector: the step cost straight from the definition
    let mut step_costs = vec![vec![0.0; vectors.len()]; window];
    for k in 1..=window {
        let n_x_k = truth.present_count(k).unwrap();
        let n_y_k = estimate.present_count(k).unwrap();
        for (v_idx, vector) in vectors.iter().enumerate() {
            let mut loc = 0.0;
            let mut detected = 0usize;
            for (i, entry) in vector.iter().enumerate() {
                let Some(j) = entry else { continue };
                let (Some(x), Some(y)) = (
                    truth.trajectories()[i].state_at(k),
                    estimate.trajectories()[*j].state_at(k),
                ) else {
                    continue;
                };
                let d = base.eval(x, y).unwrap();
                if d < g.c {
                    loc += d.powf(g.p);
                    detected += 1;
                }
            }
            step_costs[k - 1][v_idx] = loc
                + g.rho * c_p * (n_y_k - detected) as f64
                + (1.0 - g.rho) * c_p * (n_x_k - detected) as f64;
        }
    }

    let switch = |a: &[Option<usize>], b: &[Option<usize>]| -> f64 {
        let mut count = 0.0;
        for (x, y) in a.iter().zip(b) {
            if x != y {
                count += if x.is_some() && y.is_some() { 1.0 } else { 0.5 };
            }
        }
        gamma_p * count
    };

    fn recurse(
        k: usize,
        window: usize,
        prev: usize,
        acc: f64,
        vectors: &[Vec<Option<usize>>],
        step_costs: &[Vec<f64>],
        switch: &dyn Fn(&[Option<usize>], &[Option<usize>]) -> f64,
        best: &mut f64,
    ) {
        if k == window {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        for (v_idx, vector) in vectors.iter().enumerate() {
            let trans = if k == 0 {
                0.0
            } else {
                switch(&vectors[prev], vector)
            };
            recurse(
                k + 1,
                window,
                v_idx,
                acc + step_costs[k][v_idx] + trans,
                vectors,
                step_costs,
                switch,
                best,
            );
        }
    }

    let mut best = f64::INFINITY;
    recurse(0, window, 0, 0.0, &vectors, &step_costs, &switch, &mut best);
    best.powf(1.0 / g.p)
}

/// Objective value of an assignment-matrix sequence in the relaxed form:
/// `sum_k tr(D_k^T W_k) + gamma^p/2 sum |W^k - W^{k+1}|` with the cost
/// matrix D built from cut-off distances and the unassigned prices.
pub fn lp_objective_from_matrices(
    truth: &TrajectorySet,
    estimate: &TrajectorySet,
    matrices: &[gospa::tgospa::AssignmentMatrix],
    params: &TgospaParams,
    base: &dyn BaseDistance,
) -> f64 {
    let g = &params.gospa;
    let c_p = g.c.powf(g.p);
    let gamma_p = params.gamma.powf(g.p);
    let (n_x, n_y) = (truth.len(), estimate.len());
    let mut total = 0.0;
    for k in 1..=truth.window() {
        let mat = &matrices[k - 1];
        for i in 0..=n_x {
            for j in 0..=n_y {
                let x = if i < n_x {
                    truth.trajectories()[i].state_at(k)
                } else {
                    None
                };
                let y = if j < n_y {
                    estimate.trajectories()[j].state_at(k)
                } else {
                    None
                };
                let d_entry = match (x, y) {
                    (Some(xs), Some(ys)) => base.eval(xs, ys).unwrap().min(g.c).powf(g.p),
                    (None, Some(_)) => g.rho * c_p,
                    (Some(_), None) => (1.0 - g.rho) * c_p,
                    (None, None) => 0.0,
                };
                total += d_entry * mat.get(i, j);
            }
        }
        if k < truth.window() {
            let next = &matrices[k];
            let mut acc = 0.0;
            for i in 0..n_x {
                for j in 0..n_y {
                    acc += (mat.get(i, j) - next.get(i, j)).abs();
                }
            }
            total += 0.5 * gamma_p * acc;
        }
    }
    total
}

/// Random object set with up to `max_n` elements in `dim` dimensions.
pub fn random_object_set(
    rng: &mut ChaCha12Rng,
    max_n: usize,
    dim: usize,
    spread: f64,
) -> ObjectSet {
    let n = rng.gen_range(0..=max_n);
    let states: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..spread)).collect())
        .collect();
    let refs: Vec<&[f64]> = states.iter().map(|v| v.as_slice()).collect();
    ObjectSet::from_coords(&refs).unwrap()
}

/// Random 1-D trajectory set over the given window with up to `max_n`
/// trajectories and values in [0, spread).
pub fn random_trajectory_set(
    rng: &mut ChaCha12Rng,
    max_n: usize,
    window: usize,
    spread: f64,
) -> TrajectorySet {
    let n = rng.gen_range(0..=max_n);
    let trajectories: Vec<Trajectory> = (0..n)
        .map(|_| {
            let birth = rng.gen_range(1..=window);
            let death = rng.gen_range(birth..=window);
            let states: Vec<Vec<f64>> = (birth..=death)
                .map(|_| vec![rng.gen_range(0.0..spread)])
                .collect();
            let refs: Vec<&[f64]> = states.iter().map(|v| v.as_slice()).collect();
            Trajectory::from_coords(birth, &refs).unwrap()
        })
        .collect();
    TrajectorySet::new(window, trajectories).unwrap()
}
