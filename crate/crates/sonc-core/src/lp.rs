//! Dense two-phase primal simplex.
//!
//! Small by design: every LP in this crate has at most a few hundred rows, so
//! a dense tableau with Bland's rule (anti-cycling) is the simplest correct
//! choice. Free variables are split into positive/negative parts, inequality
//! rows get slack columns, and phase 1 starts from a full artificial basis.

/// Entries smaller than this are treated as zero when selecting pivots.
const PIVOT_TOL: f64 = 1e-10;
/// A phase-1 optimum above this value certifies infeasibility.
const FEAS_TOL: f64 = 1e-8;
/// Pivots allowed per phase, as a multiple of (rows + columns).
const ITER_FACTOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Variable domain. `Free` variables are split internally; callers always see
/// the recombined value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNegative,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>, bounds: Vec<VarBound>) -> Self {
        Self { sense, objective, constraints: Vec::new(), bounds }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::ShapeMismatch { what: "bounds", got: self.bounds.len(), expected: n });
        }
        if !self.objective.iter().all(|c| c.is_finite()) {
            return Err(LpError::NonFinite);
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::ShapeMismatch { what: "constraint row", got: c.coeffs.len(), expected: n }.with_row(i));
            }
            if !c.coeffs.iter().all(|a| a.is_finite()) || !c.rhs.is_finite() {
                return Err(LpError::NonFinite);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { point: Vec<f64>, objective_value: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn objective_value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { objective_value, .. } => Some(*objective_value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LpError {
    #[error("{what} has {got} entries, expected {expected}")]
    ShapeMismatch { what: &'static str, got: usize, expected: usize },
    #[error("non-finite entry in program data")]
    NonFinite,
    #[error("simplex did not converge within {0} pivots")]
    IterationLimit(usize),
}

impl LpError {
    // Row context is dropped from the message on purpose; the shape itself
    // identifies the offending builder.
    fn with_row(self, _row: usize) -> Self {
        self
    }
}

/// Minimizes or maximizes `lp.objective` subject to `lp.constraints`.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let mut t = Tableau::standardize(lp);
    if !t.phase1()? {
        return Ok(LpSolution::Infeasible);
    }
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut costs = vec![0.0; t.width];
    for (col, &(var, s)) in t.col_map.iter().enumerate() {
        costs[col] = sign * s * lp.objective[var];
    }
    match t.run(&costs)? {
        SimplexEnd::Unbounded => Ok(LpSolution::Unbounded),
        SimplexEnd::Optimal => {
            let point = t.extract(lp.num_vars());
            let objective_value: f64 =
                lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
            Ok(LpSolution::Optimal { point, objective_value })
        }
    }
}

/// Phase-1 feasibility check; never runs phase 2.
pub fn feasible(lp: &LinearProgram) -> Result<bool, LpError> {
    lp.validate()?;
    Tableau::standardize(lp).phase1()
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Maps structural column -> (original variable, sign of the split part).
    col_map: Vec<(usize, f64)>,
    /// Columns `0..width` are structural + slack; `width..` are artificial.
    width: usize,
}

impl Tableau {
    fn standardize(lp: &LinearProgram) -> Self {
        let mut col_map = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            col_map.push((j, 1.0));
            if *b == VarBound::Free {
                col_map.push((j, -1.0));
            }
        }
        let n_struct = col_map.len();
        let n_slack = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let m = lp.constraints.len();
        let width = n_struct + n_slack;

        let mut rows = vec![vec![0.0; width + m]; m];
        let mut rhs = vec![0.0; m];
        let mut slack_at = n_struct;
        for (i, c) in lp.constraints.iter().enumerate() {
            for (col, &(var, s)) in col_map.iter().enumerate() {
                rows[i][col] = s * c.coeffs[var];
            }
            match c.relation {
                Relation::Le => {
                    rows[i][slack_at] = 1.0;
                    slack_at += 1;
                }
                Relation::Ge => {
                    rows[i][slack_at] = -1.0;
                    slack_at += 1;
                }
                Relation::Eq => {}
            }
            rhs[i] = c.rhs;
            if rhs[i] < 0.0 {
                for a in rows[i].iter_mut() {
                    *a = -*a;
                }
                rhs[i] = -rhs[i];
            }
            rows[i][width + i] = 1.0;
        }
        let basis = (0..m).map(|i| width + i).collect();
        Self { rows, rhs, basis, col_map, width }
    }

    /// Runs phase 1. Returns whether the program is feasible; on success the
    /// basis is artificial-free and artificial columns are removed.
    fn phase1(&mut self) -> Result<bool, LpError> {
        let m = self.rows.len();
        let total = self.width + m;
        let mut costs = vec![0.0; total];
        for c in costs[self.width..].iter_mut() {
            *c = 1.0;
        }
        match self.run(&costs)? {
            // The phase-1 objective is a sum of nonnegative variables, so an
            // unbounded ray here means arithmetic already broke down.
            SimplexEnd::Unbounded => return Err(LpError::IterationLimit(0)),
            SimplexEnd::Optimal => {}
        }
        let residual: f64 = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= self.width)
            .map(|(_, &v)| v)
            .sum();
        if residual > FEAS_TOL {
            return Ok(false);
        }

        // Pivot leftover artificials out of the basis; a row with no usable
        // pivot is redundant and can be dropped.
        let mut drop_rows = Vec::new();
        for i in 0..m {
            if self.basis[i] < self.width {
                continue;
            }
            match (0..self.width).find(|&j| self.rows[i][j].abs() > PIVOT_TOL) {
                Some(j) => self.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
        for &i in drop_rows.iter().rev() {
            self.rows.remove(i);
            self.rhs.remove(i);
            self.basis.remove(i);
        }
        for row in self.rows.iter_mut() {
            row.truncate(self.width);
        }
        Ok(true)
    }

    /// Bland-rule simplex over the current basis, minimizing `costs`.
    fn run(&mut self, costs: &[f64]) -> Result<SimplexEnd, LpError> {
        let m = self.rows.len();
        // Row-free programs still have columns to price.
        let ncols = costs.len();
        let cap = ITER_FACTOR * (m + ncols) + 1;
        for _ in 0..cap {
            let cb: Vec<f64> = self.basis.iter().map(|&b| costs[b]).collect();
            // Entering column: smallest index with negative reduced cost.
            let mut entering = None;
            for (j, &cost) in costs.iter().enumerate() {
                let priced: f64 = cb.iter().zip(&self.rows).map(|(c, row)| c * row[j]).sum();
                if cost - priced < -PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(e) = entering else {
                return Ok(SimplexEnd::Optimal);
            };
            // Leaving row: minimum ratio, ties broken by smallest basic index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][e];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs[i] / a;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - 1e-12
                            || (ratio < lr + 1e-12 && self.basis[i] < self.basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((li, _)) = leave else {
                return Ok(SimplexEnd::Unbounded);
            };
            self.pivot(li, e);
        }
        Err(LpError::IterationLimit(cap))
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for a in self.rows[row].iter_mut() {
            *a /= p;
        }
        self.rhs[row] /= p;
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col];
            if f == 0.0 {
                continue;
            }
            let pivot_row = self.rows[row].clone();
            for (a, b) in self.rows[i].iter_mut().zip(&pivot_row) {
                *a -= f * b;
            }
            self.rhs[i] -= f * self.rhs[row];
        }
        self.basis[row] = col;
    }

    fn extract(&self, num_vars: usize) -> Vec<f64> {
        let mut x = vec![0.0; num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.col_map.len() {
                let (var, s) = self.col_map[b];
                x[var] += s * self.rhs[i];
            }
        }
        x
    }
}
