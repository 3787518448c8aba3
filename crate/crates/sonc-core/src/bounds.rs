//! Certified lower bounds via shifted dual-cone membership.
//!
//! For `f` with constant term `v0`, the smallest shift `gamma` making
//! `f + gamma` a dual-cone member is an LP in log coordinates: write
//! `c = ln |v0 + gamma|` and search for per-beta separating functionals.
//! Two branches cover the sign of the shifted constant term:
//!
//! * origin on the positive side: minimize `c`, bound `= v0 - exp(c*)`;
//! * origin on the negative side (exponential sums only, and only when the
//!   origin lies in conv(A+)): maximize `c`, bound `= v0 + exp(c*)`.
//!
//! The winner is the branch with the smaller shift. An unbounded first
//! branch means `c* -> -inf`: the shifted constant term tends to zero and
//! the bound degenerates to `v0` itself, certified by the homogeneous part
//! of the constraint system.

use std::fmt;

use crate::barycentric::lambda_feasible;
use crate::dual::{check_membership_tau, DualMembershipCertificate, DualVector};
use crate::lp::{self, LinearProgram, LpError, LpSolution, Relation, Sense, VarBound};
use crate::support::{is_vertex, sign_split, Exponent, ExponentialSum, Kind, ModelError, SignDecomposition};

/// Violations below this are treated as certified-strict when classifying
/// relaxed results.
pub const TOL_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    ZeroInAplus,
    ZeroInAminus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::ZeroInAplus => write!(f, "zero_in_a_plus"),
            Branch::ZeroInAminus => write!(f, "zero_in_a_minus"),
        }
    }
}

/// A certified bound. `gamma_star` is the minimal shift, `lower_bound` its
/// negation, and `c_star` the log-scale optimum (`-inf` when the shifted
/// constant term vanishes in the limit).
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub gamma_star: f64,
    pub c_star: f64,
    pub branch: Branch,
    pub lower_bound: f64,
    pub certificate: DualMembershipCertificate,
}

#[derive(Debug, Clone)]
pub enum BoundOutcome {
    Bounded(BoundResult),
    /// No shift of the constant term reaches the dual cone.
    Infeasible,
}

impl BoundOutcome {
    pub fn bounded(&self) -> Option<&BoundResult> {
        match self {
            BoundOutcome::Bounded(r) => Some(r),
            BoundOutcome::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, BoundOutcome::Infeasible)
    }
}

/// Outcome of the violation-tolerant solve. `tol = 0` means the strict
/// system was already feasible and the result is certified.
#[derive(Debug, Clone)]
pub struct RelaxedBoundResult {
    pub gamma_star: f64,
    pub c_star: f64,
    pub branch: Branch,
    pub lower_bound: f64,
    pub certificate: DualMembershipCertificate,
    pub tol: f64,
    pub epsilon: f64,
}

impl RelaxedBoundResult {
    pub fn is_certified(&self) -> bool {
        self.tol <= TOL_ZERO
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BoundError {
    #[error("no term has a positive coefficient")]
    NoPositiveTerms,
    #[error("negative coefficient on a Newton polytope vertex: {}",
            .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))]
    VertexViolation(Vec<Exponent>),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error(transparent)]
    Solver(#[from] LpError),
}

impl From<ModelError> for BoundError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NoPositiveTerms => BoundError::NoPositiveTerms,
            // Only sign_split errors reach this module.
            other => unreachable!("unexpected model error in bound solver: {other}"),
        }
    }
}

/// One of the two shift programs, together with its column layout so that
/// solutions can be read back into certificates.
#[derive(Debug, Clone)]
pub struct BranchLp {
    pub lp: LinearProgram,
    pub branch: Branch,
    /// Tau block `b` occupies columns `b*n .. b*n + n`; for the second
    /// branch the final block belongs to the origin.
    tau_blocks: Vec<Exponent>,
    n: usize,
    c_col: usize,
    tol_col: Option<usize>,
}

impl BranchLp {
    pub fn c_of(&self, point: &[f64]) -> f64 {
        point[self.c_col]
    }

    pub fn tol_of(&self, point: &[f64]) -> f64 {
        self.tol_col.map(|i| point[i].max(0.0)).unwrap_or(0.0)
    }

    pub fn certificate_of(&self, point: &[f64]) -> DualMembershipCertificate {
        DualMembershipCertificate::new(self.tau_blocks.iter().enumerate().map(|(b, beta)| {
            (beta.clone(), point[b * self.n..b * self.n + self.n].to_vec())
        }))
    }

    /// The homogeneous (tau-only) part: group-(1) rows with the `c` and
    /// `tol` columns removed. Certifies the limit when `c* -> -inf`.
    fn group1_feasibility(&self) -> LinearProgram {
        let nvars = self.tau_blocks.len() * self.n;
        let mut program = LinearProgram::new(
            Sense::Minimize,
            vec![0.0; nvars],
            vec![VarBound::Free; nvars],
        );
        for row in &self.lp.constraints {
            if row.coeffs[self.c_col] != 0.0 {
                continue;
            }
            program.push(row.coeffs[..nvars].to_vec(), row.relation, row.rhs);
        }
        program
    }
}

/// Shared assembly for both branches. Returns `None` when the branch's
/// preconditions fail (second branch only). `relax` adds the shared `tol`
/// column and folds `epsilon * tol` into the objective.
fn assemble(
    f: &ExponentialSum,
    dec: &SignDecomposition,
    branch: Branch,
    relax: Option<f64>,
) -> Option<BranchLp> {
    let n = f.n();
    let origin = Exponent::origin(n);
    let pos: Vec<&Exponent> =
        dec.a_plus().iter().filter(|a| !a.is_origin()).collect();
    let neg: Vec<&Exponent> =
        dec.a_minus().iter().filter(|b| !b.is_origin()).collect();

    let mut tau_blocks: Vec<Exponent> = neg.iter().map(|b| (*b).clone()).collect();
    if branch == Branch::ZeroInAminus {
        // Shifting the constant term negative is meaningful only for
        // exponential sums, and the program is bounded only when the origin
        // admits a barycentric representation over the positive part.
        if f.kind() != Kind::Exponential || pos.is_empty() {
            return None;
        }
        let pos_owned: Vec<Exponent> = pos.iter().map(|a| (*a).clone()).collect();
        lambda_feasible(&pos_owned, &origin)?;
        tau_blocks.push(origin.clone());
    }

    let c_col = tau_blocks.len() * n;
    let tol_col = relax.map(|_| c_col + 1);
    let nvars = c_col + 1 + if relax.is_some() { 1 } else { 0 };

    let mut objective = vec![0.0; nvars];
    objective[c_col] = 1.0;
    let sense = match branch {
        Branch::ZeroInAplus => Sense::Minimize,
        Branch::ZeroInAminus => Sense::Maximize,
    };
    if let Some(eps) = relax {
        // The violation is penalized in the direction that fights the
        // objective: minimize c + eps*tol, or maximize c - eps*tol.
        objective[tol_col.unwrap()] = match sense {
            Sense::Minimize => eps,
            Sense::Maximize => -eps,
        };
    }
    let mut bounds = vec![VarBound::Free; nvars];
    if let Some(i) = tol_col {
        bounds[i] = VarBound::NonNegative;
    }
    let mut program = LinearProgram::new(sense, objective, bounds);

    let mut push = |taus: &[(usize, Vec<f64>)], c_coef: f64, rhs: f64| {
        let mut row = vec![0.0; nvars];
        for (block, coeffs) in taus {
            row[block * n..block * n + n].copy_from_slice(coeffs);
        }
        row[c_col] = c_coef;
        if let Some(i) = tol_col {
            row[i] = 1.0;
        }
        program.push(row, Relation::Ge, rhs);
    };

    // Group (1): per negative point, dominate the log ratio against every
    // non-origin positive point.
    for (b, beta) in neg.iter().enumerate() {
        let log_wb = f.coefficient(beta).unwrap().abs().ln();
        for alpha in &pos {
            let rhs = log_wb - f.coefficient(alpha).unwrap().ln();
            push(&[(b, alpha.sub(beta))], 0.0, rhs);
        }
    }
    // Group (2): couple each block to the shifted constant term.
    match branch {
        Branch::ZeroInAplus => {
            // ln|w_beta| - c <= <-beta, tau>  <=>  <-beta, tau> + c >= ln|w_beta|
            for (b, beta) in neg.iter().enumerate() {
                let minus_beta: Vec<f64> = beta.coords().map(|x| -x).collect();
                push(&[(b, minus_beta)], 1.0, f.coefficient(beta).unwrap().abs().ln());
            }
        }
        Branch::ZeroInAminus => {
            // c - ln(w_alpha) <= <alpha, tau0>  <=>  <alpha, tau0> - c >= -ln(w_alpha)
            let block = tau_blocks.len() - 1;
            for alpha in &pos {
                push(
                    &[(block, alpha.to_vec())],
                    -1.0,
                    -f.coefficient(alpha).unwrap().ln(),
                );
            }
        }
    }

    Some(BranchLp { lp: program, branch, tau_blocks, n, c_col, tol_col })
}

/// The shift program with the origin on the positive side. With an empty
/// negative part this degenerates to an unconstrained `min c`.
pub fn build_lp_relax1(f: &ExponentialSum, dec: &SignDecomposition) -> BranchLp {
    assemble(f, dec, Branch::ZeroInAplus, None).expect("first branch is always available")
}

/// The shift program with the origin on the negative side, when applicable.
pub fn build_lp_relax2(f: &ExponentialSum, dec: &SignDecomposition) -> Option<BranchLp> {
    assemble(f, dec, Branch::ZeroInAminus, None)
}

/// Maps a log-scale optimum back to the certified lower bound.
pub fn recover_bound(c_star: f64, v_0: f64, branch: Branch) -> f64 {
    match branch {
        Branch::ZeroInAplus => v_0 - c_star.exp(),
        Branch::ZeroInAminus => v_0 + c_star.exp(),
    }
}

struct BranchSolution {
    branch: Branch,
    c_star: f64,
    gamma_star: f64,
    certificate: DualMembershipCertificate,
    tol: f64,
}

fn finish(f: &ExponentialSum, blp: &BranchLp, c_star: f64, certificate: DualMembershipCertificate, tol: f64) -> BranchSolution {
    let gamma_star = -recover_bound(c_star, f.origin_coefficient(), blp.branch);
    BranchSolution { branch: blp.branch, c_star, gamma_star, certificate, tol }
}

/// Resolves the `c* -> -inf` limit of the first branch.
fn unbounded_limit(f: &ExponentialSum, blp: &BranchLp) -> Result<BranchSolution, BoundError> {
    let feas = blp.group1_feasibility();
    let certificate = match lp::solve(&feas)? {
        LpSolution::Optimal { point, .. } => {
            DualMembershipCertificate::new(blp.tau_blocks.iter().enumerate().map(
                |(b, beta)| (beta.clone(), point[b * blp.n..(b + 1) * blp.n].to_vec()),
            ))
        }
        // The full program was feasible, so its homogeneous part is too.
        _ => DualMembershipCertificate::default(),
    };
    Ok(finish(f, blp, f64::NEG_INFINITY, certificate, 0.0))
}

fn solve_strict_branch(
    f: &ExponentialSum,
    dec: &SignDecomposition,
    branch: Branch,
) -> Result<Option<BranchSolution>, BoundError> {
    let Some(blp) = assemble(f, dec, branch, None) else {
        return Ok(None);
    };
    match lp::solve(&blp.lp)? {
        LpSolution::Optimal { point, .. } => {
            let c = blp.c_of(&point);
            let cert = blp.certificate_of(&point);
            Ok(Some(finish(f, &blp, c, cert, 0.0)))
        }
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => match branch {
            Branch::ZeroInAplus => Ok(Some(unbounded_limit(f, &blp)?)),
            // Guarded against by the barycentric precondition.
            Branch::ZeroInAminus => Ok(None),
        },
    }
}

fn better(a: Option<BranchSolution>, b: Option<BranchSolution>) -> Option<BranchSolution> {
    match (a, b) {
        (Some(x), Some(y)) => {
            // Ties go to the first branch.
            if y.gamma_star < x.gamma_star {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

fn check_preconditions(f: &ExponentialSum) -> Result<SignDecomposition, BoundError> {
    let dec = sign_split(f)?;
    // Every vertex of conv(A u {0}) except the origin must carry a positive
    // coefficient; the shift variable only repairs the constant term.
    let mut points = f.support();
    let origin = Exponent::origin(f.n());
    if !points.contains(&origin) {
        points.push(origin);
    }
    let violations: Vec<Exponent> = f
        .iter()
        .filter(|(e, c)| *c < 0.0 && !e.is_origin() && is_vertex(&points, e))
        .map(|(e, _)| e.clone())
        .collect();
    if !violations.is_empty() {
        return Err(BoundError::VertexViolation(violations));
    }
    Ok(dec)
}

/// Computes the minimal dual-cone shift of `f` and the certified bound
/// `inf f >= -gamma_star`, trying both origin branches.
pub fn dual_sonc_bound(f: &ExponentialSum) -> Result<BoundOutcome, BoundError> {
    let dec = check_preconditions(f)?;
    let first = solve_strict_branch(f, &dec, Branch::ZeroInAplus)?;
    let second = solve_strict_branch(f, &dec, Branch::ZeroInAminus)?;
    Ok(match better(first, second) {
        None => BoundOutcome::Infeasible,
        Some(s) => BoundOutcome::Bounded(BoundResult {
            gamma_star: s.gamma_star,
            c_star: s.c_star,
            branch: s.branch,
            lower_bound: -s.gamma_star,
            certificate: s.certificate,
        }),
    })
}

/// Solves one branch of the violation-tolerant program
/// (objective `c + epsilon * tol` over the strict rows relaxed by a shared
/// `tol >= 0`). For small `epsilon` the combined objective can be unbounded
/// because one unit of `tol` buys more than one unit of `c`; in that case
/// the result degenerates to the lexicographic limit: first minimize the
/// violation, then optimize `c` at the minimal violation.
fn solve_relaxed_branch(
    f: &ExponentialSum,
    dec: &SignDecomposition,
    branch: Branch,
    epsilon: f64,
) -> Result<Option<BranchSolution>, BoundError> {
    let Some(blp) = assemble(f, dec, branch, Some(epsilon)) else {
        return Ok(None);
    };
    match lp::solve(&blp.lp)? {
        LpSolution::Optimal { point, .. } => {
            let c = blp.c_of(&point);
            let cert = blp.certificate_of(&point);
            let tol = blp.tol_of(&point);
            Ok(Some(finish(f, &blp, c, cert, tol)))
        }
        LpSolution::Infeasible => Ok(None), // unreachable: tol repairs any row
        LpSolution::Unbounded => lexicographic_fallback(f, dec, branch, &blp),
    }
}

fn lexicographic_fallback(
    f: &ExponentialSum,
    dec: &SignDecomposition,
    branch: Branch,
    blp: &BranchLp,
) -> Result<Option<BranchSolution>, BoundError> {
    let tol_col = blp.tol_col.expect("relaxed program carries a tol column");

    // Stage 1: least violation, ignoring c.
    let mut stage1 = blp.lp.clone();
    stage1.sense = Sense::Minimize;
    stage1.objective = vec![0.0; stage1.num_vars()];
    stage1.objective[tol_col] = 1.0;
    let tol_star = match lp::solve(&stage1)? {
        LpSolution::Optimal { point, .. } => point[tol_col].max(0.0),
        _ => return Ok(None), // the relaxed system is feasible by construction
    };

    if tol_star <= TOL_ZERO {
        // The strict rows are already satisfiable: report the strict solve
        // verbatim so certified results agree bit-for-bit.
        return match solve_strict_branch(f, dec, branch)? {
            Some(mut s) => {
                s.tol = 0.0;
                Ok(Some(s))
            }
            None => Ok(None),
        };
    }

    // Stage 2: pin the violation and optimize c alone.
    let mut stage2 = blp.lp.clone();
    stage2.objective = vec![0.0; stage2.num_vars()];
    stage2.objective[blp.c_col] = 1.0;
    let mut pin = vec![0.0; stage2.num_vars()];
    pin[tol_col] = 1.0;
    stage2.push(pin, Relation::Eq, tol_star);
    match lp::solve(&stage2)? {
        LpSolution::Optimal { point, .. } => {
            let c = blp.c_of(&point);
            let cert = blp.certificate_of(&point);
            Ok(Some(finish(f, blp, c, cert, tol_star)))
        }
        LpSolution::Unbounded if branch == Branch::ZeroInAplus => {
            // Legitimate c -> -inf under the pinned violation.
            let mut s = unbounded_limit(f, blp)?;
            s.tol = tol_star;
            Ok(Some(s))
        }
        _ => Ok(None),
    }
}

/// Violation-tolerant bound: always produces a result when the vertex
/// precondition holds, reporting how much slack (`tol`) the constraint
/// system needed. `tol = 0` iff the strict program was feasible.
pub fn relaxed_bound(f: &ExponentialSum, epsilon: f64) -> Result<RelaxedBoundResult, BoundError> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(BoundError::InvalidEpsilon(epsilon));
    }
    let dec = check_preconditions(f)?;
    let first = solve_relaxed_branch(f, &dec, Branch::ZeroInAplus, epsilon)?;
    let second = solve_relaxed_branch(f, &dec, Branch::ZeroInAminus, epsilon)?;
    let s = better(first, second).expect("relaxed first branch always yields a result");
    Ok(RelaxedBoundResult {
        gamma_star: s.gamma_star,
        c_star: s.c_star,
        branch: s.branch,
        lower_bound: -s.gamma_star,
        certificate: s.certificate,
        tol: s.tol,
        epsilon,
    })
}

/// Whether the unshifted `f` already lies in the dual cone (tau form), i.e.
/// zero is already a certified lower bound.
pub fn edge_case_probe(f: &ExponentialSum) -> bool {
    let Ok(dec) = sign_split(f) else {
        return false;
    };
    check_membership_tau(&DualVector::from_sum(f), &dec).is_member()
}
