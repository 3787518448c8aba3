//! Brute-force minimum oracle: dense grid scan plus coordinate descent.
//!
//! The scan runs in the argument space of [`ExponentialSum::evaluate`],
//! i.e. all of `R^n`. For polynomials that is the log-scale view of the
//! positive orthant, so a box `[-r, r]^n` covers `[e^-r, e^r]^n` in the
//! original variables. The result is an upper bound on the infimum; it is
//! used to sanity-check certified lower bounds, never to produce them.

use crate::support::ExponentialSum;

/// Hard cap on the number of grid evaluations per call.
pub const MAX_GRID_POINTS: u128 = 150_000_000;

const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Grid points per dimension (>= 3, odd values place a point at 0).
    pub grid_points: usize,
    /// Half-width of the scanned box.
    pub radius: f64,
    /// Rounds of coordinate descent after the scan.
    pub descent_steps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { grid_points: 101, radius: 5.0, descent_steps: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMin {
    pub value: f64,
    /// Argument of the minimum, in evaluation coordinates.
    pub point: Vec<f64>,
    pub evaluations: u64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("grid needs at least 3 points per dimension, got {0}")]
    GridTooCoarse(usize),
    #[error("scan radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("grid has {0} points, budget is {MAX_GRID_POINTS}")]
    BudgetExceeded(u128),
    #[error("every grid point evaluated to NaN")]
    NoUsableSample,
}

/// Scans the box and polishes the best grid point by coordinate descent
/// with a halving step. NaN evaluations are skipped; infinities are kept,
/// so a detected `-inf` reports honest unboundedness on the box.
pub fn sample_min(f: &ExponentialSum, config: &OracleConfig) -> Result<SampleMin, OracleError> {
    if config.grid_points < 3 {
        return Err(OracleError::GridTooCoarse(config.grid_points));
    }
    if !config.radius.is_finite() || config.radius <= 0.0 {
        return Err(OracleError::BadRadius(config.radius));
    }
    let n = f.n();
    let g = config.grid_points;
    let total = (g as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| {
            OracleError::BudgetExceeded(
                (g as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            )
        })?;

    let spacing = 2.0 * config.radius / (g - 1) as f64;
    let coord = |digit: usize| -config.radius + spacing * digit as f64;

    let mut best_value = f64::NAN;
    let mut best_point = vec![0.0; n];
    let mut evaluations = 0u64;
    let mut digits = vec![0usize; n];
    let mut x = vec![-config.radius; n];
    for _ in 0..total {
        let v = f.evaluate(&x);
        evaluations += 1;
        if !v.is_nan() && (best_value.is_nan() || v < best_value) {
            best_value = v;
            best_point.copy_from_slice(&x);
        }
        // Increment the mixed-radix counter.
        for i in (0..n).rev() {
            digits[i] += 1;
            if digits[i] < g {
                x[i] = coord(digits[i]);
                break;
            }
            digits[i] = 0;
            x[i] = coord(0);
        }
    }
    if best_value.is_nan() {
        return Err(OracleError::NoUsableSample);
    }

    let mut h = spacing;
    let mut steps = 0;
    while steps < config.descent_steps && h >= MIN_STEP {
        let mut improved = false;
        for i in 0..n {
            for sign in [-1.0, 1.0] {
                let mut candidate = best_point.clone();
                candidate[i] += sign * h;
                let v = f.evaluate(&candidate);
                evaluations += 1;
                if !v.is_nan() && v < best_value {
                    best_value = v;
                    best_point = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
        steps += 1;
    }

    Ok(SampleMin { value: best_value, point: best_point, evaluations })
}
