//! GOSPA quasi-metric between object sets, with cost decomposition and the
//! rho-related helper operations.
//!
//! The total to the p-th power is
//!
//! ```text
//! min over assignment sets  sum d_b(x_i, y_j)^p
//!                         + rho c^p (|y| - |assigned|)
//!                         + (1 - rho) c^p (|x| - |assigned|)
//! ```
//!
//! computed by a full matching of the smaller set under the cut-off cost
//! `min(d_b, c)^p`, then dropping matched pairs with base distance >= c:
//! such a pair decomposes into one missed plus one false object at identical
//! total cost. With an asymmetric base distance the first argument is always
//! the truth: `d_b(truth, estimate)`, whichever set is larger.

use crate::assign2d::{solve_lap, CostMatrix};
use crate::basedist::BaseDistance;
use crate::error::{Error, Result};
use crate::types::{GospaParams, MetricReport, ObjectSet};

/// GOSPA value, decomposition and the optimal assignment that produced it.
#[derive(Debug, Clone)]
pub struct GospaResult {
    pub report: MetricReport,
    /// Matched (truth index, estimate index) pairs with base distance < c.
    pub assignment: Vec<(usize, usize)>,
    /// Truth indices counted as missed.
    pub unassigned_truth: Vec<usize>,
    /// Estimate indices counted as false.
    pub unassigned_estimate: Vec<usize>,
}

/// Raw base distances truth x estimate, plus the detection-eligible flags.
struct DistanceTable {
    n_truth: usize,
    n_estimate: usize,
    raw: Vec<f64>, // row-major, d_b(truth_i, estimate_j)
}

impl DistanceTable {
    fn build(
        truth: &ObjectSet,
        estimate: &ObjectSet,
        base: &dyn BaseDistance,
    ) -> Result<DistanceTable> {
        if let (Some(a), Some(b)) = (truth.dim(), estimate.dim()) {
            if a != b {
                return Err(Error::DimensionMismatch { left: a, right: b });
            }
        }
        let mut raw = Vec::with_capacity(truth.len() * estimate.len());
        for x in truth.iter() {
            for y in estimate.iter() {
                let d = base.eval(x, y)?;
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::NonFinite("base distance"));
                }
                raw.push(d);
            }
        }
        Ok(DistanceTable {
            n_truth: truth.len(),
            n_estimate: estimate.len(),
            raw,
        })
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.raw[i * self.n_estimate + j]
    }
}

/// Optimal assignment under cut-off costs; independent of rho.
fn optimal_assignment(table: &DistanceTable, c: f64, p: f64) -> Result<Vec<(usize, usize)>> {
    let costs: Vec<f64> = table.raw.iter().map(|d| d.min(c).powf(p)).collect();
    let matrix = CostMatrix::new(table.n_truth, table.n_estimate, costs)?;
    Ok(solve_lap(&matrix)?.pairs)
}

fn result_from_assignment(
    table: &DistanceTable,
    pairs: &[(usize, usize)],
    params: &GospaParams,
) -> GospaResult {
    let c_p = params.c_pow_p();
    // Strict detection rule on the raw distance: a matched pair with
    // d_b >= c is reclassified as one missed plus one false object.
    let detected: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(i, j)| table.get(i, j) < params.c)
        .collect();
    let localisation: f64 = detected
        .iter()
        .map(|&(i, j)| table.get(i, j).powf(params.p))
        .sum();
    let missed_count = table.n_truth - detected.len();
    let false_count = table.n_estimate - detected.len();
    let missed = (1.0 - params.rho) * c_p * missed_count as f64;
    let false_cost = params.rho * c_p * false_count as f64;
    let report = MetricReport::from_components(localisation, missed, false_cost, 0.0, params.p);

    let in_pairs: Vec<bool> = {
        let mut v = vec![false; table.n_truth];
        for &(i, _) in &detected {
            v[i] = true;
        }
        v
    };
    let in_cols: Vec<bool> = {
        let mut v = vec![false; table.n_estimate];
        for &(_, j) in &detected {
            v[j] = true;
        }
        v
    };
    GospaResult {
        report,
        assignment: detected,
        unassigned_truth: (0..table.n_truth).filter(|&i| !in_pairs[i]).collect(),
        unassigned_estimate: (0..table.n_estimate).filter(|&j| !in_cols[j]).collect(),
    }
}

/// The GOSPA quasi-metric from `truth` to `estimate`.
pub fn gospa(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    params: &GospaParams,
    base: &dyn BaseDistance,
) -> Result<GospaResult> {
    let table = DistanceTable::build(truth, estimate, base)?;
    let pairs = optimal_assignment(&table, params.c, params.p)?;
    Ok(result_from_assignment(&table, &pairs, params))
}

/// The symmetric special case `rho = 1/2`; requires a symmetric base
/// distance. Missed and false objects both cost `c^p / 2`.
pub fn gospa_metric(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    c: f64,
    p: f64,
    base: &dyn BaseDistance,
) -> Result<GospaResult> {
    if !base.is_symmetric() {
        return Err(Error::AsymmetricBase);
    }
    gospa(truth, estimate, &GospaParams::new(c, p, 0.5)?, base)
}

/// Evaluates the metric for several `rho` values while solving the
/// assignment problem only once: the optimal assignment does not depend on
/// `rho`, so each value only re-prices the missed and false counts.
pub fn gospa_sweep(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    c: f64,
    p: f64,
    rhos: &[f64],
    base: &dyn BaseDistance,
) -> Result<Vec<GospaResult>> {
    let table = DistanceTable::build(truth, estimate, base)?;
    let pairs = optimal_assignment(&table, c, p)?;
    rhos.iter()
        .map(|&rho| {
            let params = GospaParams::new(c, p, rho)?;
            Ok(result_from_assignment(&table, &pairs, &params))
        })
        .collect()
}

/// `rho` such that one false object costs `ratio` times one missed object
/// (both to the p-th power): `ratio / (ratio + 1)`.
pub fn rho_from_ratio(ratio: f64) -> Result<f64> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::parameter(
            "ratio",
            format!("must be finite and > 0, got {ratio}"),
        ));
    }
    Ok(ratio / (ratio + 1.0))
}

/// Checks `d^(c,rho)(x, y) == d^(c,1-rho)(y, x)` within 1e-9; holds whenever
/// the base distance is symmetric.
pub fn reversed_rho_identity_check(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    params: &GospaParams,
    base: &dyn BaseDistance,
) -> Result<bool> {
    if !base.is_symmetric() {
        return Err(Error::AsymmetricBase);
    }
    let forward = gospa(truth, estimate, params, base)?;
    let reversed = gospa(estimate, truth, &params.with_rho(1.0 - params.rho)?, base)?;
    Ok((forward.report.total - reversed.report.total).abs() <= 1e-9)
}

/// `[ (d(x,y,rho)^p + d(y,x,rho)^p) / 2 ]^(1/p)`; recovers the `rho = 1/2`
/// metric for any `rho` when the base distance is symmetric.
pub fn symmetrise(
    truth: &ObjectSet,
    estimate: &ObjectSet,
    params: &GospaParams,
    base: &dyn BaseDistance,
) -> Result<f64> {
    if !base.is_symmetric() {
        return Err(Error::AsymmetricBase);
    }
    let forward = gospa(truth, estimate, params, base)?;
    let backward = gospa(estimate, truth, params, base)?;
    Ok(
        (0.5 * (forward.report.total_pth_power + backward.report.total_pth_power))
            .powf(1.0 / params.p),
    )
}
