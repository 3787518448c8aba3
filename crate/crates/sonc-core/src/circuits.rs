//! Primal certificates: circuit numbers and AGE witnesses.
//!
//! An AGE instance has positive coefficients on an outer support and a
//! single distinguished inner term. For a barycentric representation
//! `beta = sum lambda_alpha alpha` the circuit number
//!
//! ```text
//! Theta(lambda) = prod (c_alpha / lambda_alpha)^lambda_alpha
//! ```
//!
//! (with `0^0 = 1`) bounds how negative the inner coefficient may get:
//! `|c_beta| <= Theta` certifies nonnegativity by weighted AM-GM. All
//! products are accumulated in log space.

use crate::barycentric::{lambda_feasible, BarycentricVector};
use crate::dual::DualVector;
use crate::support::{Exponent, ExponentialSum};

/// Absolute slack for comparisons against a circuit number.
pub const THETA_SLACK: f64 = 1e-9;
const LAMBDA_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CircuitError {
    #[error("expected exactly one negative term, found {0}")]
    NegativeTermCount(usize),
    #[error("outer coefficient at {0} is not positive")]
    NonPositiveOuter(Exponent),
    #[error("outer support is empty")]
    EmptyOuter,
    #[error("exponent has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("weight on {0}, which is not an outer point")]
    UnsupportedWeight(Exponent),
    #[error("weights are not barycentric coordinates for the inner point")]
    InvalidLambda,
    #[error("outer points are affinely dependent")]
    NotAffinelyIndependent,
    #[error("inner point lies outside the hull of the outer support")]
    InnerOutsideHull,
}

/// Outer terms (positive coefficients) plus one inner term of either sign.
#[derive(Debug, Clone)]
pub struct CircuitInstance {
    outer: Vec<(Exponent, f64)>,
    inner: (Exponent, f64),
}

impl CircuitInstance {
    pub fn new(
        outer: Vec<(Exponent, f64)>,
        inner: (Exponent, f64),
    ) -> Result<Self, CircuitError> {
        if outer.is_empty() {
            return Err(CircuitError::EmptyOuter);
        }
        let expected = inner.0.dim();
        for (alpha, c) in &outer {
            if alpha.dim() != expected {
                return Err(CircuitError::DimensionMismatch { got: alpha.dim(), expected });
            }
            if *c <= 0.0 {
                return Err(CircuitError::NonPositiveOuter(alpha.clone()));
            }
        }
        Ok(CircuitInstance { outer, inner })
    }

    /// Views a sum with exactly one negative term as an AGE instance.
    pub fn from_sum(f: &ExponentialSum) -> Result<Self, CircuitError> {
        let negatives: Vec<(Exponent, f64)> = f
            .iter()
            .filter(|(_, c)| *c < 0.0)
            .map(|(e, c)| (e.clone(), c))
            .collect();
        if negatives.len() != 1 {
            return Err(CircuitError::NegativeTermCount(negatives.len()));
        }
        let outer = f
            .iter()
            .filter(|(_, c)| *c > 0.0)
            .map(|(e, c)| (e.clone(), c))
            .collect();
        Self::new(outer, negatives.into_iter().next().unwrap())
    }

    pub fn outer(&self) -> &[(Exponent, f64)] {
        &self.outer
    }

    pub fn inner(&self) -> (&Exponent, f64) {
        (&self.inner.0, self.inner.1)
    }

    fn outer_points(&self) -> Vec<Exponent> {
        self.outer.iter().map(|(e, _)| e.clone()).collect()
    }

    fn outer_coefficient(&self, alpha: &Exponent) -> Option<f64> {
        self.outer
            .iter()
            .find(|(e, _)| e == alpha)
            .map(|(_, c)| *c)
    }
}

#[derive(Debug, Clone)]
pub struct CircuitNumber {
    pub theta: f64,
    pub lambda_used: BarycentricVector,
}

/// Evaluates `Theta(lambda)` for a given barycentric representation of the
/// inner point.
pub fn circuit_number(
    instance: &CircuitInstance,
    lambda: &BarycentricVector,
) -> Result<CircuitNumber, CircuitError> {
    if !lambda.is_valid_for(&instance.inner.0, LAMBDA_TOL) {
        return Err(CircuitError::InvalidLambda);
    }
    let mut log_theta = 0.0;
    for (alpha, weight) in lambda.iter() {
        if weight <= 0.0 {
            continue;
        }
        let c = instance
            .outer_coefficient(alpha)
            .ok_or_else(|| CircuitError::UnsupportedWeight(alpha.clone()))?;
        log_theta += weight * (c.ln() - weight.ln());
    }
    Ok(CircuitNumber { theta: log_theta.exp(), lambda_used: lambda.clone() })
}

/// Row rank of the difference vectors `p_i - p_0` is below `k - 1`.
fn affinely_dependent(points: &[Exponent]) -> bool {
    let k = points.len();
    if k <= 1 {
        return false;
    }
    let n = points[0].dim();
    if k - 1 > n {
        return true;
    }
    let base = &points[0];
    let mut m: Vec<Vec<f64>> = points[1..].iter().map(|p| p.sub(base)).collect();
    let rows = m.len();
    let mut rank = 0;
    for col in 0..n {
        let mut pivot = rank;
        for r in rank + 1..rows {
            if m[r][col].abs() > m[pivot][col].abs() {
                pivot = r;
            }
        }
        if rank >= rows || m[pivot][col].abs() <= RANK_TOL {
            continue;
        }
        m.swap(rank, pivot);
        let (upper, lower) = m.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        for row in lower {
            let factor = row[col] / pivot_row[col];
            for (dst, src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= factor * src;
            }
        }
        rank += 1;
        if rank == rows {
            return false;
        }
    }
    rank < rows
}

/// Decides nonnegativity of a simplicial circuit: outer points affinely
/// independent, inner point in their hull, and `|c_inner| <= Theta` for the
/// unique barycentric representation.
pub fn circuit_nonnegative(instance: &CircuitInstance) -> Result<bool, CircuitError> {
    let points = instance.outer_points();
    if affinely_dependent(&points) {
        return Err(CircuitError::NotAffinelyIndependent);
    }
    let lambda = lambda_feasible(&points, &instance.inner.0)
        .ok_or(CircuitError::InnerOutsideHull)?;
    if instance.inner.1 >= 0.0 {
        return Ok(true);
    }
    let cn = circuit_number(instance, &lambda)?;
    Ok(instance.inner.1.abs() <= cn.theta + THETA_SLACK)
}

/// Verifies a proposed AGE witness against a dual vector: with `0^0 = 1`
/// and `Theta = 0` as soon as a used outer value is nonpositive, the check
/// is `Theta(lambda) >= -w_beta`. Any valid witness proves the AGE function
/// with these coefficients nonnegative.
pub fn age_witness_check(
    w: &DualVector,
    a_plus: &[Exponent],
    beta: &Exponent,
    lambda: &BarycentricVector,
) -> Result<bool, CircuitError> {
    if !lambda.is_valid_for(beta, LAMBDA_TOL) {
        return Err(CircuitError::InvalidLambda);
    }
    for alpha in lambda.positive_support() {
        if !a_plus.contains(&alpha) {
            return Err(CircuitError::UnsupportedWeight(alpha));
        }
    }
    let w_beta = w.get(beta);
    if w_beta >= 0.0 {
        return Ok(true);
    }
    let mut log_theta = 0.0;
    let mut theta = f64::NAN;
    for (alpha, weight) in lambda.iter() {
        if weight <= 0.0 {
            continue;
        }
        let w_alpha = w.get(alpha);
        if w_alpha <= 0.0 {
            theta = 0.0;
            break;
        }
        log_theta += weight * (w_alpha.ln() - weight.ln());
    }
    if theta.is_nan() {
        theta = log_theta.exp();
    }
    Ok(theta >= -w_beta - THETA_SLACK)
}
