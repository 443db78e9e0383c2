//! Instance generators shared by the benchmarks.

use gospa::types::{ObjectSet, ObjectState, Trajectory, TrajectorySet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Random 2-D object set of exactly `n` states in [0, spread)^2.
pub fn object_set(rng: &mut ChaCha12Rng, n: usize, spread: f64) -> ObjectSet {
    let states = (0..n)
        .map(|_| {
            ObjectState::new(vec![rng.gen_range(0.0..spread), rng.gen_range(0.0..spread)]).unwrap()
        })
        .collect();
    ObjectSet::new(states).unwrap()
}

/// Random cost matrix entries for the assignment benchmarks.
pub fn cost_rows(rng: &mut ChaCha12Rng, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0.0..10.0)).collect())
        .collect()
}

/// Random 1-D trajectory set with `n` trajectories over `window` steps.
pub fn trajectory_set(
    rng: &mut ChaCha12Rng,
    n: usize,
    window: usize,
    spread: f64,
) -> TrajectorySet {
    let trajectories = (0..n)
        .map(|_| {
            let birth = rng.gen_range(1..=window);
            let death = rng.gen_range(birth..=window);
            let states = (birth..=death)
                .map(|_| ObjectState::new(vec![rng.gen_range(0.0..spread)]).unwrap())
                .collect();
            Trajectory::new(birth, states).unwrap()
        })
        .collect();
    TrajectorySet::new(window, trajectories).unwrap()
}
