//! LP relaxation of the T-GOSPA quasi-metric.
//!
//! Per support component, the program minimises
//!
//! ```text
//!   sum_k sum_pairs (d^p - c^p) w_k(i,j)  +  gamma^p/2 sum_k sum_pairs e_k(i,j)
//!   s.t. per step: row sums <= 1, column sums <= 1, w >= 0
//!        e_k(i,j) >= |w_k(i,j) - w_{k+1}(i,j)|   (two linear inequalities)
//! ```
//!
//! which is the full relaxation with the rho-dependent part of the objective
//! rewritten as the constant `sum_k [rho c^p n_Y^k + (1-rho) c^p n_X^k]`:
//! eliminating the unassigned row/column entries via the assignment
//! constraints cancels every rho term out of the variable part. As a
//! consequence the optimal matrices do not depend on rho, only the constant
//! does. Coefficients of pairs with base distance >= c vanish, so the
//! variables can be restricted to support pairs.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpStatus};

use super::problem::{Component, Problem, Support};
use super::AssignmentMatrix;

/// Solves the relaxation and returns the full assignment matrices, one per
/// time step, with the unassigned row/column entries filled back in.
pub(crate) fn solve(problem: &Problem, support: &Support) -> Result<Vec<AssignmentMatrix>> {
    let window = problem.window;
    let mut mats: Vec<AssignmentMatrix> = (0..window)
        .map(|_| AssignmentMatrix::zeros(problem.n_truth, problem.n_estimate))
        .collect();

    for comp in &support.components {
        let weights = solve_component(problem, comp)?;
        for k in 0..window {
            for (e, &(i, j)) in comp.pairs.iter().enumerate() {
                // clamp solver noise; entries are meant to be non-negative
                let w = weights[k * comp.pairs.len() + e].max(0.0);
                mats[k].set(i, j, w);
            }
        }
    }

    // Unassigned-row and unassigned-column entries follow from the
    // constraints; every row/column without support mass ends up fully
    // unassigned, which also covers the inactive rows and columns.
    for mat in &mut mats {
        mat.fill_dummies();
    }
    Ok(mats)
}

/// Returns the pair weights, indexed `k * n_pairs + pair`.
fn solve_component(problem: &Problem, comp: &Component) -> Result<Vec<f64>> {
    let window = problem.window;
    let n_pairs = comp.pairs.len();
    let p = problem.params.gospa.p;
    let c_p = problem.params.gospa.c_pow_p();
    let half_gamma_p = 0.5 * problem.params.gamma_pow_p();

    let n_w = window * n_pairs;
    let n_aux = window.saturating_sub(1) * n_pairs;
    let w_var = |k: usize, e: usize| k * n_pairs + e;
    let aux_var = |k: usize, e: usize| n_w + k * n_pairs + e;

    let mut objective = vec![0.0; n_w + n_aux];
    for k in 1..=window {
        for (e, &(i, j)) in comp.pairs.iter().enumerate() {
            if problem.eligible(k, i, j) {
                objective[w_var(k - 1, e)] = problem.distance(k, i, j).powf(p) - c_p;
            }
        }
    }
    for v in objective.iter_mut().skip(n_w) {
        *v = half_gamma_p;
    }

    let mut lp = LinearProgram::new(objective)?;
    // per-step row and column sums
    for k in 0..window {
        for &row in &comp.rows {
            let terms: Vec<(usize, f64)> = comp
                .pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, _))| i == row)
                .map(|(e, _)| (w_var(k, e), 1.0))
                .collect();
            lp.add_le(&terms, 1.0)?;
        }
        for &col in &comp.cols {
            let terms: Vec<(usize, f64)> = comp
                .pairs
                .iter()
                .enumerate()
                .filter(|(_, &(_, j))| j == col)
                .map(|(e, _)| (w_var(k, e), 1.0))
                .collect();
            lp.add_le(&terms, 1.0)?;
        }
    }
    // linearised switching terms
    for k in 0..window.saturating_sub(1) {
        for e in 0..n_pairs {
            lp.add_le(
                &[
                    (w_var(k, e), 1.0),
                    (w_var(k + 1, e), -1.0),
                    (aux_var(k, e), -1.0),
                ],
                0.0,
            )?;
            lp.add_le(
                &[
                    (w_var(k, e), -1.0),
                    (w_var(k + 1, e), 1.0),
                    (aux_var(k, e), -1.0),
                ],
                0.0,
            )?;
        }
    }

    let solution = lp.solve()?;
    if solution.status != LpStatus::Optimal {
        // w = 0 is always feasible and the objective is bounded below
        return Err(Error::Internal(format!(
            "component relaxation reported {:?}",
            solution.status
        )));
    }
    Ok(solution.values[..n_w].to_vec())
}
