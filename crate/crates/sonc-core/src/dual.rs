//! Membership tests for the dual SONC cone.
//!
//! A functional `w` over a sign-partitioned support lies in the dual cone iff
//! it is nonnegative on `A+` and, for every negative-part point `beta`, the
//! log of `|w_beta|` is dominated by every barycentric average of the logs of
//! the positive part. That domination can be checked in two equivalent ways:
//!
//! * lambda form: minimize the barycentric average directly;
//! * tau form: exhibit a linear functional separating the log-ratios.
//!
//! Log conventions at zero make the boundary awkward: `log(y/0) = +inf` for
//! `y > 0`, so any vanishing positive-part coefficient next to a surviving
//! negative coefficient kills membership in both forms. Rejecting that case
//! up front keeps the two tests in exact agreement.

use std::collections::BTreeMap;
use std::fmt;

use crate::barycentric::minimize_linear_over_lambda;
use crate::lp::{self, LinearProgram, LpSolution, Relation, Sense, VarBound};
use crate::support::{Exponent, ExponentialSum, SignDecomposition};

/// Slack applied to the log-scale comparison in the lambda form.
pub const MEMBERSHIP_LOG_TOL: f64 = 1e-8;

/// A linear functional on the span of the support, stored as one value per
/// support point. Missing points read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    values: BTreeMap<Exponent, f64>,
}

impl DualVector {
    pub fn new(values: impl IntoIterator<Item = (Exponent, f64)>) -> Self {
        Self { values: values.into_iter().collect() }
    }

    /// The functional whose pairing with each monomial is its coefficient.
    pub fn from_sum(f: &ExponentialSum) -> Self {
        Self::new(f.iter().map(|(e, c)| (e.clone(), c)))
    }

    pub fn get(&self, exp: &Exponent) -> f64 {
        self.values.get(exp).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.values.iter().map(|(e, &v)| (e, v))
    }
}

/// Per-beta separating functionals proving dual membership in the tau form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DualMembershipCertificate {
    taus: BTreeMap<Exponent, Vec<f64>>,
}

impl DualMembershipCertificate {
    pub fn new(taus: impl IntoIterator<Item = (Exponent, Vec<f64>)>) -> Self {
        Self { taus: taus.into_iter().collect() }
    }

    pub fn tau(&self, beta: &Exponent) -> Option<&[f64]> {
        self.taus.get(beta).map(|t| t.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &[f64])> {
        self.taus.iter().map(|(e, t)| (e, t.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Re-checks every certified inequality against `w` with `slack` room.
    /// Betas with vanishing `w` value are vacuous and skipped.
    pub fn validates(&self, w: &DualVector, dec: &SignDecomposition, slack: f64) -> bool {
        for beta in dec.a_minus() {
            let wb = w.get(beta).abs();
            if wb == 0.0 {
                continue;
            }
            let Some(tau) = self.tau(beta) else {
                return false;
            };
            for alpha in dec.a_plus() {
                let wa = w.get(alpha);
                if wa <= 0.0 {
                    return false;
                }
                let lhs = (wb / wa).ln();
                let rhs: f64 =
                    alpha.sub(beta).iter().zip(tau).map(|(d, t)| d * t).sum();
                if lhs > rhs + slack {
                    return false;
                }
            }
        }
        true
    }
}

/// Why a functional fell outside the cone.
#[derive(Debug, Clone, PartialEq)]
pub enum NotMemberReason {
    /// Negative value at a flagged vertex of conv(A); no shift of the
    /// comparison can repair this.
    NegativeVertexCoefficient(Exponent),
    /// Negative value somewhere on the positive part.
    NegativePositivePart(Exponent),
    /// A zero value on the positive part makes a log ratio infinite while
    /// some negative-part value survives.
    VanishingPositivePart { alpha: Exponent, beta: Exponent },
    /// The tau-form feasibility program for this beta has no solution.
    NoSeparatingTau(Exponent),
    /// The lambda-form minimum falls short of `ln |w_beta|` by `gap`.
    LogGap { beta: Exponent, gap: f64 },
}

impl fmt::Display for NotMemberReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotMemberReason::NegativeVertexCoefficient(e) => {
                write!(f, "negative vertex coefficient at {e}")
            }
            NotMemberReason::NegativePositivePart(e) => {
                write!(f, "negative coefficient at {e} in the positive part")
            }
            NotMemberReason::VanishingPositivePart { alpha, beta } => {
                write!(f, "zero coefficient at {alpha} with surviving negative term at {beta}")
            }
            NotMemberReason::NoSeparatingTau(e) => {
                write!(f, "no separating functional exists for {e}")
            }
            NotMemberReason::LogGap { beta, gap } => {
                write!(f, "log-domination fails at {beta} by {gap:.6}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TauMembership {
    Member(DualMembershipCertificate),
    NotMember(NotMemberReason),
}

impl TauMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, TauMembership::Member(_))
    }

    pub fn certificate(&self) -> Option<&DualMembershipCertificate> {
        match self {
            TauMembership::Member(c) => Some(c),
            TauMembership::NotMember(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaMembership {
    Member,
    NotMember(NotMemberReason),
}

impl LambdaMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, LambdaMembership::Member)
    }
}

/// Sign screening shared by both membership forms. Returns the betas that
/// still need log-domination checks (nonzero negative-part values).
fn screen<'a>(
    w: &DualVector,
    dec: &'a SignDecomposition,
) -> Result<Vec<&'a Exponent>, NotMemberReason> {
    for (exp, &flagged) in dec.vertex_flags() {
        if flagged && w.get(exp) < 0.0 {
            return Err(NotMemberReason::NegativeVertexCoefficient(exp.clone()));
        }
    }
    for alpha in dec.a_plus() {
        if w.get(alpha) < 0.0 {
            return Err(NotMemberReason::NegativePositivePart(alpha.clone()));
        }
    }
    let active: Vec<&Exponent> =
        dec.a_minus().iter().filter(|b| w.get(b) != 0.0).collect();
    if let Some(beta) = active.first() {
        for alpha in dec.a_plus() {
            if w.get(alpha) == 0.0 {
                return Err(NotMemberReason::VanishingPositivePart {
                    alpha: alpha.clone(),
                    beta: (*beta).clone(),
                });
            }
        }
    }
    Ok(active)
}

/// Tau-form membership: per surviving beta, searches for `tau` with
/// `ln(|w_beta| / w_alpha) <= <alpha - beta, tau>` for all alpha in `A+`.
/// Member verdicts carry the separating functionals; dropped betas get a
/// zero vector.
pub fn check_membership_tau(w: &DualVector, dec: &SignDecomposition) -> TauMembership {
    let active = match screen(w, dec) {
        Ok(a) => a,
        Err(reason) => return TauMembership::NotMember(reason),
    };
    let n = dec.n();
    let mut taus: BTreeMap<Exponent, Vec<f64>> = dec
        .a_minus()
        .iter()
        .map(|b| (b.clone(), vec![0.0; n]))
        .collect();
    for beta in active {
        let log_wb = w.get(beta).abs().ln();
        let mut program =
            LinearProgram::new(Sense::Minimize, vec![0.0; n], vec![VarBound::Free; n]);
        for alpha in dec.a_plus() {
            let rhs = log_wb - w.get(alpha).ln();
            program.push(alpha.sub(beta), Relation::Ge, rhs);
        }
        let solution = lp::solve(&program).expect("tau program is well formed");
        match solution {
            LpSolution::Optimal { point, .. } => {
                taus.insert(beta.clone(), point);
            }
            LpSolution::Infeasible => {
                return TauMembership::NotMember(NotMemberReason::NoSeparatingTau(
                    beta.clone(),
                ));
            }
            // Zero objective: phase 2 stops at the first feasible basis.
            LpSolution::Unbounded => unreachable!("feasibility program has zero objective"),
        }
    }
    TauMembership::Member(DualMembershipCertificate { taus })
}

/// Lambda-form membership: per surviving beta, minimizes the barycentric
/// average of `ln w_alpha` over `Lambda(A+, beta)` and compares against
/// `ln |w_beta|`. An empty polytope is vacuous (no constraint binds).
pub fn check_membership_lambda(w: &DualVector, dec: &SignDecomposition) -> LambdaMembership {
    let active = match screen(w, dec) {
        Ok(a) => a,
        Err(reason) => return LambdaMembership::NotMember(reason),
    };
    let cost: Vec<f64> = dec.a_plus().iter().map(|a| w.get(a).ln()).collect();
    for beta in active {
        let Some((_, value)) = minimize_linear_over_lambda(dec.a_plus(), beta, &cost)
        else {
            continue;
        };
        let bound = w.get(beta).abs().ln();
        if value < bound - MEMBERSHIP_LOG_TOL {
            return LambdaMembership::NotMember(NotMemberReason::LogGap {
                beta: beta.clone(),
                gap: bound - value,
            });
        }
    }
    LambdaMembership::Member
}
