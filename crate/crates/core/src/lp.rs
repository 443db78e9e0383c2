//! Self-contained linear-programming solver: dense two-phase simplex over
//! `min c'x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0`.
//!
//! Entering columns use Dantzig pricing with a switch to Bland's rule after a
//! run of degenerate pivots, so the solver cannot cycle and is deterministic
//! for a fixed input. Sized for desk-scale programs (up to a few thousand
//! variables); the tableau is dense.

use crate::error::{Error, Result};

/// Residual tolerance for feasibility decisions.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Reduced-cost tolerance for optimality decisions.
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// Minimum magnitude for a pivot element.
const PIVOT_TOL: f64 = 1e-9;
/// Degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 40;

/// Outcome classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solution of a linear program. `values` and `objective` are meaningful
/// only when `status == Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
}

/// A linear program over non-negative variables, with sparse constraint rows.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    eq: Vec<(Vec<(usize, f64)>, f64)>,
    le: Vec<(Vec<(usize, f64)>, f64)>,
}

impl LinearProgram {
    /// Program with `num_vars` variables, all bounded below by zero, and the
    /// given objective coefficients to minimise.
    pub fn new(objective: Vec<f64>) -> Result<Self> {
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("objective coefficient"));
        }
        Ok(LinearProgram {
            num_vars: objective.len(),
            objective,
            eq: Vec::new(),
            le: Vec::new(),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn check_terms(&self, terms: &[(usize, f64)], rhs: f64) -> Result<()> {
        if !rhs.is_finite() {
            return Err(Error::NonFinite("constraint right-hand side"));
        }
        for &(j, a) in terms {
            if j >= self.num_vars {
                return Err(Error::InvalidInput(format!(
                    "constraint references variable {j}, program has {}",
                    self.num_vars
                )));
            }
            if !a.is_finite() {
                return Err(Error::NonFinite("constraint coefficient"));
            }
        }
        Ok(())
    }

    /// Adds `sum terms = rhs`.
    pub fn add_eq(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<()> {
        self.check_terms(terms, rhs)?;
        self.eq.push((terms.to_vec(), rhs));
        Ok(())
    }

    /// Adds `sum terms <= rhs`.
    pub fn add_le(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<()> {
        self.check_terms(terms, rhs)?;
        self.le.push((terms.to_vec(), rhs));
        Ok(())
    }

    /// Solves the program. Infeasibility and unboundedness are reported via
    /// [`LpStatus`], never as errors.
    pub fn solve(&self) -> Result<LpSolution> {
        Simplex::build(self).solve(self)
    }
}

struct Simplex {
    rows: usize,
    cols: usize, // structural + slack + artificial
    num_structural: usize,
    num_artificial: usize,
    a: Vec<f64>, // rows x cols, row-major
    b: Vec<f64>,
    basis: Vec<usize>,
}

impl Simplex {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn build(lp: &LinearProgram) -> Simplex {
        let m = lp.eq.len() + lp.le.len();
        let n = lp.num_vars;
        let num_slack = lp.le.len();

        // Count artificials: every eq row gets one; a le row only if its rhs
        // is negative (its slack cannot serve as the initial basic variable).
        let mut num_artificial = lp.eq.len();
        for (_, rhs) in &lp.le {
            if *rhs < 0.0 {
                num_artificial += 1;
            }
        }

        let cols = n + num_slack + num_artificial;
        let mut a = vec![0.0; m * cols];
        let mut b = vec![0.0; m];
        let mut basis = vec![0usize; m];

        let mut row = 0;
        let mut next_artificial = n + num_slack;
        for (terms, rhs) in &lp.eq {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for &(j, coeff) in terms {
                a[row * cols + j] += sign * coeff;
            }
            b[row] = sign * rhs;
            a[row * cols + next_artificial] = 1.0;
            basis[row] = next_artificial;
            next_artificial += 1;
            row += 1;
        }
        for (slack_idx, (terms, rhs)) in lp.le.iter().enumerate() {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for &(j, coeff) in terms {
                a[row * cols + j] += sign * coeff;
            }
            b[row] = sign * rhs;
            a[row * cols + n + slack_idx] = sign; // slack, or surplus when flipped
            if *rhs < 0.0 {
                a[row * cols + next_artificial] = 1.0;
                basis[row] = next_artificial;
                next_artificial += 1;
            } else {
                basis[row] = n + slack_idx;
            }
            row += 1;
        }

        Simplex {
            rows: m,
            cols,
            num_structural: n,
            num_artificial,
            a,
            b,
            basis,
        }
    }

    /// Runs simplex iterations on the current tableau for the cost vector
    /// `cost` (length `allowed_cols`). Returns false on unboundedness.
    fn iterate(&mut self, cost: &[f64], allowed_cols: usize) -> bool {
        // Maintained reduced-cost row and objective value.
        let mut reduced = vec![0.0; allowed_cols];
        for (j, r) in reduced.iter_mut().enumerate() {
            *r = cost[j];
        }
        for i in 0..self.rows {
            // basis entries beyond the priced columns (evicted artificials
            // pinned at zero in redundant rows) carry zero cost
            let cb = if self.basis[i] < allowed_cols {
                cost[self.basis[i]]
            } else {
                0.0
            };
            if cb != 0.0 {
                for j in 0..allowed_cols {
                    reduced[j] -= cb * self.at(i, j);
                }
            }
        }

        let mut stall = 0usize;
        loop {
            // Entering column: Dantzig pricing normally, Bland when stalled.
            let entering = if stall < STALL_LIMIT {
                let mut best = -OPTIMALITY_TOL;
                let mut pick = None;
                for (j, &r) in reduced.iter().enumerate() {
                    if r < best {
                        best = r;
                        pick = Some(j);
                    }
                }
                pick
            } else {
                reduced.iter().position(|&r| r < -OPTIMALITY_TOL)
            };
            let Some(q) = entering else {
                return true; // optimal
            };

            // Ratio test; ties resolve to the smallest basis variable index
            // (Bland-compatible).
            let mut best_ratio = f64::INFINITY;
            let mut pivot_row = None;
            for i in 0..self.rows {
                let aiq = self.at(i, q);
                if aiq > PIVOT_TOL {
                    let ratio = self.b[i] / aiq;
                    let better = match pivot_row {
                        None => true,
                        Some(r) => {
                            ratio < best_ratio - 1e-12
                                || (ratio <= best_ratio + 1e-12 && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        best_ratio = ratio.min(best_ratio);
                        pivot_row = Some(i);
                    }
                }
            }
            let Some(r) = pivot_row else {
                return false; // unbounded direction
            };

            if best_ratio <= 1e-12 {
                stall += 1;
            } else {
                stall = 0;
            }

            self.pivot(r, q, &mut reduced, allowed_cols);
        }
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [f64], allowed_cols: usize) {
        let pivot = self.at(row, col);
        let inv = 1.0 / pivot;
        for j in 0..self.cols {
            self.a[row * self.cols + j] *= inv;
        }
        self.b[row] *= inv;
        self.a[row * self.cols + col] = 1.0;

        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.at(i, col);
            if factor != 0.0 {
                for j in 0..self.cols {
                    self.a[i * self.cols + j] -= factor * self.at(row, j);
                }
                self.a[i * self.cols + col] = 0.0;
                self.b[i] -= factor * self.b[row];
                if self.b[i].abs() < 1e-13 {
                    self.b[i] = 0.0;
                }
            }
        }

        let rfactor = reduced[col];
        if rfactor != 0.0 {
            for j in 0..allowed_cols {
                reduced[j] -= rfactor * self.at(row, j);
            }
            reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpSolution> {
        // Phase 1: minimise the sum of artificial variables.
        if self.num_artificial > 0 {
            let mut phase1 = vec![0.0; self.cols];
            for j in self.cols - self.num_artificial..self.cols {
                phase1[j] = 1.0;
            }
            if !self.iterate(&phase1, self.cols) {
                return Err(Error::Internal("phase-1 objective unbounded below".into()));
            }
            let infeas: f64 = (0..self.rows)
                .filter(|&i| self.basis[i] >= self.cols - self.num_artificial)
                .map(|i| self.b[i])
                .sum();
            if infeas > FEASIBILITY_TOL {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    values: Vec::new(),
                    objective: f64::NAN,
                });
            }
            self.evict_artificials();
        }

        // Phase 2 over structural + slack columns only.
        let allowed = self.cols - self.num_artificial;
        let mut phase2 = vec![0.0; allowed];
        phase2[..self.num_structural].copy_from_slice(&lp.objective);
        if !self.iterate(&phase2, allowed) {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                values: Vec::new(),
                objective: f64::NAN,
            });
        }

        let mut values = vec![0.0; self.num_structural];
        for i in 0..self.rows {
            if self.basis[i] < self.num_structural {
                values[self.basis[i]] = self.b[i];
            }
        }
        let objective = values.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            values,
            objective,
        })
    }

    /// Pivots artificial variables out of the basis where possible. A row
    /// whose artificial cannot be evicted is redundant (all-zero); it is kept
    /// with the artificial pinned at zero, which later phases never disturb
    /// because artificial columns are excluded from pricing.
    fn evict_artificials(&mut self) {
        let first_artificial = self.cols - self.num_artificial;
        for i in 0..self.rows {
            if self.basis[i] < first_artificial {
                continue;
            }
            let mut entering = None;
            for j in 0..first_artificial {
                if self.at(i, j).abs() > PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            if let Some(q) = entering {
                let mut dummy = vec![0.0; self.cols];
                self.pivot(i, q, &mut dummy, self.cols);
            }
        }
    }
}
