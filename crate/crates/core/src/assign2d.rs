//! Rectangular minimum-cost linear assignment: a shortest-augmenting-path
//! solver in the Jonker-Volgenant style plus an exhaustive oracle used to
//! validate it.

use crate::error::{Error, Result};

/// Size guard for [`brute_force_lap`]; enumeration grows factorially.
pub const BRUTE_FORCE_LAP_BOUND: usize = 8;

/// A dense, finite, non-negative cost matrix.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>, // row-major
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "cost matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("cost matrix entry"));
        }
        if data.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidInput(
                "cost matrix entries must be non-negative".into(),
            ));
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged cost matrix".into()));
        }
        CostMatrix::new(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// A full matching of the smaller index set into the larger one.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// (row, col) pairs, sorted by row; rows and cols are each distinct.
    pub pairs: Vec<(usize, usize)>,
    /// Total cost of the matched pairs.
    pub objective: f64,
}

/// Minimum-cost assignment of size `min(rows, cols)` via shortest augmenting
/// paths with potentials. Deterministic: rows are inserted in index order and
/// ties in the path search resolve to the lowest column index.
pub fn solve_lap(cost: &CostMatrix) -> Result<Matching> {
    if cost.rows() == 0 || cost.cols() == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            objective: 0.0,
        });
    }
    let pairs = if cost.rows() <= cost.cols() {
        lap_rows_into_cols(cost.rows(), cost.cols(), |i, j| cost.get(i, j))
    } else {
        let mut transposed = lap_rows_into_cols(cost.cols(), cost.rows(), |i, j| cost.get(j, i));
        for p in &mut transposed {
            *p = (p.1, p.0);
        }
        transposed.sort_unstable();
        transposed
    };
    let objective = pairs.iter().map(|&(i, j)| cost.get(i, j)).sum();
    Ok(Matching { pairs, objective })
}

/// Shortest-augmenting-path assignment of `m` rows into `n >= m` columns.
fn lap_rows_into_cols<F: Fn(usize, usize) -> f64>(
    m: usize,
    n: usize,
    cost: F,
) -> Vec<(usize, usize)> {
    const NONE: usize = usize::MAX;
    let mut u = vec![0.0; m]; // row potentials
    let mut v = vec![0.0; n + 1]; // column potentials, last entry is the virtual column
    let mut col_to_row = vec![NONE; n + 1];
    let mut way = vec![0usize; n];

    for row in 0..m {
        col_to_row[n] = row;
        let mut j0 = n;
        let mut min_to = vec![f64::INFINITY; n];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_to_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = NONE;
            for j in 0..n {
                if !used[j] {
                    let reduced = cost(i0, j) - u[i0] - v[j];
                    if reduced < min_to[j] {
                        min_to[j] = reduced;
                        way[j] = j0;
                    }
                    if min_to[j] < delta {
                        delta = min_to[j];
                        j1 = j;
                    }
                }
            }
            // All entries finite, so an unmatched column is always reachable.
            debug_assert!(j1 != NONE);
            for j in 0..=n {
                if used[j] {
                    if col_to_row[j] != NONE {
                        u[col_to_row[j]] += delta;
                    }
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if col_to_row[j0] == NONE {
                break;
            }
        }
        // Augment along the alternating path back to the virtual column.
        while j0 != n {
            let j1 = way[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .filter(|&j| col_to_row[j] != NONE)
        .map(|j| (col_to_row[j], j))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Exact minimum by enumerating every injection of the smaller index set
/// into the larger. Refuses inputs with `min(rows, cols) > 8`.
pub fn brute_force_lap(cost: &CostMatrix) -> Result<Matching> {
    let (m, n) = (cost.rows(), cost.cols());
    let small = m.min(n);
    if small > BRUTE_FORCE_LAP_BOUND {
        return Err(Error::SizeLimit {
            size: small,
            bound: BRUTE_FORCE_LAP_BOUND,
            hint: "use solve_lap for larger instances",
        });
    }
    if small == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            objective: 0.0,
        });
    }

    let row_major = m <= n;
    let large = m.max(n);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut current = Vec::with_capacity(small);
    let mut used = vec![false; large];

    // Enumerates injections in lexicographic order; strict improvement keeps
    // the first minimiser, i.e. lowest-index tie-breaking.
    fn recurse(
        small: usize,
        large: usize,
        level: usize,
        acc: f64,
        cost: &dyn Fn(usize, usize) -> f64,
        current: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if level == small {
            if best.as_ref().map_or(true, |(b, _)| acc < *b) {
                *best = Some((acc, current.clone()));
            }
            return;
        }
        for target in 0..large {
            if !used[target] {
                used[target] = true;
                current.push(target);
                recurse(
                    small,
                    large,
                    level + 1,
                    acc + cost(level, target),
                    cost,
                    current,
                    used,
                    best,
                );
                current.pop();
                used[target] = false;
            }
        }
    }

    let eval: Box<dyn Fn(usize, usize) -> f64> = if row_major {
        Box::new(|i, j| cost.get(i, j))
    } else {
        Box::new(|j, i| cost.get(i, j))
    };
    recurse(
        small,
        large,
        0,
        0.0,
        &eval,
        &mut current,
        &mut used,
        &mut best,
    );

    let (objective, assignment) = best.expect("small > 0 so at least one injection exists");
    let mut pairs: Vec<(usize, usize)> = assignment
        .iter()
        .enumerate()
        .map(|(s, &t)| if row_major { (s, t) } else { (t, s) })
        .collect();
    pairs.sort_unstable();
    Ok(Matching { pairs, objective })
}
