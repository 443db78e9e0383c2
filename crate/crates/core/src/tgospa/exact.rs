//! Exact T-GOSPA solver: dynamic programming over assignment vectors.
//!
//! The switching cost couples only consecutive time steps, so the exact
//! optimum over assignment-vector sequences is a shortest path through
//! stages. Stage costs use the rho-free form `sum (d^p - c^p)` over detected
//! pairs; the rho-dependent remainder of Definition-level step costs is a
//! per-step constant added afterwards, which also makes the optimal
//! assignment independent of rho by construction.
//!
//! Each support component is solved by its own DP; values add up. The DP also
//! records, at every stage `k`, the best value over vectors, which equals the
//! exact metric of the problem truncated to the window [1, k]: pairs that
//! only become eligible after `k` can be forced to zero assignment in the
//! truncated problem without changing its optimum.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::problem::{Component, Problem, Support};

/// Default bound on the total number of enumerated assignment vectors.
pub const DEFAULT_MAX_ASSIGNMENT_VECTORS: usize = 50_000;

/// Local assignment vector: one entry per component row; 0 = unassigned,
/// `v >= 1` = component-local column `v - 1`.
type LocalVector = Vec<u16>;

pub(crate) struct CompDp {
    /// Global truth indices of the component rows.
    pub rows: Vec<usize>,
    /// Global estimate indices of the component columns.
    pub cols: Vec<usize>,
    vectors: Vec<LocalVector>,
    /// Predecessor of each vector at each stage (stage 0 entry is empty).
    preds: Vec<Vec<u32>>,
    /// Per stage: minimum value over vectors and the first argmin.
    best: Vec<(f64, u32)>,
}

pub(crate) struct ExactDp {
    pub comps: Vec<CompDp>,
    /// Cumulative rho-dependent constants; entry k-1 holds the sum over
    /// steps 1..=k.
    const_prefix: Vec<f64>,
}

impl ExactDp {
    /// Exact metric value to the p-th power for the window [1, k].
    pub fn total_pth_power(&self, k: usize) -> f64 {
        let variable: f64 = self.comps.iter().map(|c| c.best[k - 1].0).sum();
        variable + self.const_prefix[k - 1]
    }

    /// Optimal component-local vector sequences for the window [1, k].
    pub fn backtrack(&self, k: usize) -> Vec<Vec<LocalVector>> {
        self.comps
            .iter()
            .map(|comp| {
                let mut seq = Vec::with_capacity(k);
                let mut idx = comp.best[k - 1].1 as usize;
                for stage in (0..k).rev() {
                    seq.push(comp.vectors[idx].clone());
                    if stage > 0 {
                        idx = comp.preds[stage][idx] as usize;
                    }
                }
                seq.reverse();
                seq
            })
            .collect()
    }
}

/// Runs the component DPs over the full window.
pub(crate) fn solve(problem: &Problem, support: &Support, max_vectors: usize) -> Result<ExactDp> {
    let mut budget = max_vectors;
    let mut comps = Vec::with_capacity(support.components.len());
    for comp in &support.components {
        let vectors = enumerate_vectors(comp, budget).ok_or(Error::SizeLimit {
            size: max_vectors + 1,
            bound: max_vectors,
            hint: "too many assignment vectors for the exact solver; use tgospa_lp",
        })?;
        budget -= vectors.len();
        comps.push(run_component_dp(problem, comp, vectors));
    }
    let mut const_prefix = Vec::with_capacity(problem.window);
    let mut acc = 0.0;
    for k in 1..=problem.window {
        acc += problem.step_constant(k);
        const_prefix.push(acc);
    }
    Ok(ExactDp {
        comps,
        const_prefix,
    })
}

/// All injective assignment vectors over the component's support pairs, in
/// lexicographic order (unassigned sorts first). Returns None if the count
/// would exceed `budget`.
fn enumerate_vectors(comp: &Component, budget: usize) -> Option<Vec<LocalVector>> {
    let n_rows = comp.rows.len();
    // component-local support partners per row, ascending
    let mut partners: Vec<Vec<u16>> = vec![Vec::new(); n_rows];
    for &(i, j) in &comp.pairs {
        let r = comp.rows.binary_search(&i).expect("row in component");
        let c = comp.cols.binary_search(&j).expect("col in component");
        partners[r].push(c as u16 + 1);
    }
    for p in &mut partners {
        p.sort_unstable();
    }

    let mut out: Vec<LocalVector> = Vec::new();
    let mut current: LocalVector = vec![0; n_rows];
    let mut used = vec![false; comp.cols.len()];
    fn recurse(
        row: usize,
        n_rows: usize,
        partners: &[Vec<u16>],
        current: &mut LocalVector,
        used: &mut [bool],
        out: &mut Vec<LocalVector>,
        budget: usize,
    ) -> bool {
        if row == n_rows {
            if out.len() == budget {
                return false;
            }
            out.push(current.clone());
            return true;
        }
        // unassigned first: lexicographic order with 0 < any column
        current[row] = 0;
        if !recurse(row + 1, n_rows, partners, current, used, out, budget) {
            return false;
        }
        for &v in &partners[row] {
            let col = (v - 1) as usize;
            if !used[col] {
                used[col] = true;
                current[row] = v;
                let ok = recurse(row + 1, n_rows, partners, current, used, out, budget);
                used[col] = false;
                current[row] = 0;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if !recurse(
        0,
        n_rows,
        &partners,
        &mut current,
        &mut used,
        &mut out,
        budget,
    ) {
        return None;
    }
    Some(out)
}

fn run_component_dp(problem: &Problem, comp: &Component, vectors: Vec<LocalVector>) -> CompDp {
    let n_rows = comp.rows.len();
    let n_cols = comp.cols.len();
    let s = vectors.len();
    let p = problem.params.gospa.p;
    let c_p = problem.params.gospa.c_pow_p();
    let gamma_p = problem.params.gamma_pow_p();

    // stage cost of one vector at step k: sum over detected pairs of d^p - c^p
    let stage_costs = |k: usize, cost_table: &mut [f64]| {
        // cost_table: n_rows x n_cols, 0.0 where not detection-eligible
        for (r, &i) in comp.rows.iter().enumerate() {
            for (cc, &j) in comp.cols.iter().enumerate() {
                cost_table[r * n_cols + cc] = if problem.eligible(k, i, j) {
                    problem.distance(k, i, j).powf(p) - c_p
                } else {
                    0.0
                };
            }
        }
    };

    let use_fast = n_rows >= 2 && n_rows <= 8 && n_cols < 255;

    let mut cost_table = vec![0.0; n_rows * n_cols];
    let mut value = vec![0.0f64; s];
    let mut next = vec![0.0f64; s];
    let mut preds: Vec<Vec<u32>> = Vec::with_capacity(problem.window);
    let mut best: Vec<(f64, u32)> = Vec::with_capacity(problem.window);
    let mut g: HashMap<u64, (f64, u32)> = HashMap::new();

    stage_costs(1, &mut cost_table);
    for (idx, vec) in vectors.iter().enumerate() {
        value[idx] = vector_stage_cost(vec, &cost_table, n_cols);
    }
    preds.push(Vec::new());
    best.push(arg_min(&value));

    for k in 2..=problem.window {
        let mut pred = vec![0u32; s];
        if use_fast {
            transition_fast(&vectors, &value, gamma_p, &mut g, &mut next, &mut pred);
        } else {
            transition_naive(&vectors, &value, gamma_p, &mut next, &mut pred);
        }
        stage_costs(k, &mut cost_table);
        for (idx, vec) in vectors.iter().enumerate() {
            next[idx] += vector_stage_cost(vec, &cost_table, n_cols);
        }
        std::mem::swap(&mut value, &mut next);
        preds.push(pred);
        best.push(arg_min(&value));
    }

    CompDp {
        rows: comp.rows.clone(),
        cols: comp.cols.clone(),
        vectors,
        preds,
        best,
    }
}

fn vector_stage_cost(vector: &[u16], cost_table: &[f64], n_cols: usize) -> f64 {
    let mut acc = 0.0;
    for (r, &v) in vector.iter().enumerate() {
        if v > 0 {
            acc += cost_table[r * n_cols + (v - 1) as usize];
        }
    }
    acc
}

fn arg_min(values: &[f64]) -> (f64, u32) {
    let mut best = (f64::INFINITY, 0u32);
    for (i, &v) in values.iter().enumerate() {
        if v < best.0 {
            best = (v, i as u32);
        }
    }
    best
}

/// Per-entry switch cost between two local vectors, times gamma^p.
pub(crate) fn local_switch_cost(a: &[u16], b: &[u16], gamma_p: f64) -> f64 {
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            acc += if x != 0 && y != 0 { 1.0 } else { 0.5 };
        }
    }
    gamma_p * acc
}

/// O(S^2) reference transition.
pub(crate) fn transition_naive(
    vectors: &[LocalVector],
    value: &[f64],
    gamma_p: f64,
    out: &mut [f64],
    pred: &mut [u32],
) {
    for (t, target) in vectors.iter().enumerate() {
        let mut best = (f64::INFINITY, 0u32);
        for (sidx, source) in vectors.iter().enumerate() {
            let cand = value[sidx] + local_switch_cost(source, target, gamma_p);
            if cand < best.0 {
                best = (cand, sidx as u32);
            }
        }
        out[t] = best.0;
        pred[t] = best.1;
    }
}

/// O(S * 2^n_rows) transition via agreement sets.
///
/// With `s(a, b) = [a != b] * ([a != 0] + [b != 0]) / 2`, the transition cost
/// from source pi' to target pi is
/// `gamma^p/2 * (nnz(pi') + nnz(pi)) - gamma^p * agree_nz(pi', pi)`
/// where `agree_nz` counts rows on which both equal the same non-zero value.
/// Minimising over pi' therefore only needs, for every partial assignment
/// sigma pinning a subset of rows to non-zero values, the minimum of
/// `value + gamma^p/2 * nnz` over sources extending sigma; targets then
/// scan subsets of their own non-zero rows.
pub(crate) fn transition_fast(
    vectors: &[LocalVector],
    value: &[f64],
    gamma_p: f64,
    g: &mut HashMap<u64, (f64, u32)>,
    out: &mut [f64],
    pred: &mut [u32],
) {
    let half = 0.5 * gamma_p;
    g.clear();

    for (sidx, vec) in vectors.iter().enumerate() {
        let nz = nonzero_mask(vec);
        let tilde = value[sidx] + half * nz.count_ones() as f64;
        let mut sub = nz;
        loop {
            let key = pack_partial(vec, sub);
            match g.get_mut(&key) {
                Some(entry) => {
                    if tilde < entry.0 || (tilde == entry.0 && (sidx as u32) < entry.1) {
                        *entry = (tilde, sidx as u32);
                    }
                }
                None => {
                    g.insert(key, (tilde, sidx as u32));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & nz;
        }
    }

    for (t, vec) in vectors.iter().enumerate() {
        let nz = nonzero_mask(vec);
        let base_add = half * nz.count_ones() as f64;
        let mut best = (f64::INFINITY, u32::MAX);
        let mut sub = nz;
        loop {
            if let Some(&(gval, gidx)) = g.get(&pack_partial(vec, sub)) {
                let cand = gval - gamma_p * sub.count_ones() as f64;
                if cand < best.0 || (cand == best.0 && gidx < best.1) {
                    best = (cand, gidx);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & nz;
        }
        out[t] = best.0 + base_add;
        pred[t] = best.1;
    }
}

fn nonzero_mask(vector: &[u16]) -> u32 {
    let mut mask = 0u32;
    for (r, &v) in vector.iter().enumerate() {
        if v > 0 {
            mask |= 1 << r;
        }
    }
    mask
}

/// Packs the rows selected by `mask` (each value <= 255, at most 8 rows).
fn pack_partial(vector: &[u16], mask: u32) -> u64 {
    let mut key = 0u64;
    let mut m = mask;
    while m != 0 {
        let r = m.trailing_zeros() as usize;
        key |= (vector[r] as u64) << (8 * r);
        m &= m - 1;
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    // random vector families with the injectivity constraint relaxed are fine
    // here: the transition algebra never uses injectivity
    fn random_vectors(
        rng: &mut ChaCha12Rng,
        n_rows: usize,
        n_vals: u16,
        count: usize,
    ) -> Vec<LocalVector> {
        (0..count)
            .map(|_| (0..n_rows).map(|_| rng.gen_range(0..=n_vals)).collect())
            .collect()
    }

    #[test]
    fn fast_transition_matches_naive() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n_rows = rng.gen_range(2..=5);
            let count = rng.gen_range(1..=40);
            let vectors = random_vectors(&mut rng, n_rows, 6, count);
            let s = vectors.len();
            let value: Vec<f64> = (0..s).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let gamma_p = rng.gen_range(0.01..2.0);

            let mut out_naive = vec![0.0; s];
            let mut pred_naive = vec![0u32; s];
            transition_naive(&vectors, &value, gamma_p, &mut out_naive, &mut pred_naive);

            let mut g = HashMap::new();
            let mut out_fast = vec![0.0; s];
            let mut pred_fast = vec![0u32; s];
            transition_fast(
                &vectors,
                &value,
                gamma_p,
                &mut g,
                &mut out_fast,
                &mut pred_fast,
            );

            for t in 0..s {
                assert!(
                    (out_naive[t] - out_fast[t]).abs() <= 1e-12,
                    "value mismatch at {t}: {} vs {}",
                    out_naive[t],
                    out_fast[t]
                );
                // the fast path may pick a different optimal predecessor on
                // ties; verify its choice achieves the same cost
                let cost = value[pred_fast[t] as usize]
                    + local_switch_cost(&vectors[pred_fast[t] as usize], &vectors[t], gamma_p);
                assert!((cost - out_fast[t]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn switch_cost_cases() {
        let gamma_p = 2.0;
        assert_eq!(local_switch_cost(&[1, 0], &[1, 0], gamma_p), 0.0);
        assert_eq!(local_switch_cost(&[1], &[2], gamma_p), 2.0);
        assert_eq!(local_switch_cost(&[1], &[0], gamma_p), 1.0);
        assert_eq!(local_switch_cost(&[0], &[2], gamma_p), 1.0);
        assert_eq!(local_switch_cost(&[1, 2], &[2, 1], gamma_p), 4.0);
    }
}
