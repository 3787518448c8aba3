//! Barycentric representations of a point over a positive support.
//!
//! For a support `A+` and a target `beta`, the polytope `Lambda(A+, beta)`
//! collects all convex-combination weights writing `beta` over `A+`. It is
//! nonempty exactly when `beta` lies in conv(A+), and a singleton when the
//! support is affinely independent.

use std::collections::BTreeMap;

use crate::lp::{self, LinearProgram, LpSolution, Relation, Sense, VarBound};
use crate::support::Exponent;

/// Residual tolerance on the recombination and normalization identities.
pub const BARYCENTRIC_TOL: f64 = 1e-9;

/// Convex-combination weights keyed by the support point they multiply.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricVector {
    weights: BTreeMap<Exponent, f64>,
}

impl BarycentricVector {
    pub fn new(weights: impl IntoIterator<Item = (Exponent, f64)>) -> Self {
        Self { weights: weights.into_iter().collect() }
    }

    pub fn weight(&self, exp: &Exponent) -> f64 {
        self.weights.get(exp).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.weights.iter().map(|(e, &w)| (e, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Support points carrying strictly positive weight.
    pub fn positive_support(&self) -> Vec<Exponent> {
        self.weights
            .iter()
            .filter(|(_, &w)| w > 0.0)
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// Checks nonnegativity, normalization and recombination to `beta`
    /// within `tol`.
    pub fn is_valid_for(&self, beta: &Exponent, tol: f64) -> bool {
        if self.weights.values().any(|&w| w < -tol) {
            return false;
        }
        let total: f64 = self.weights.values().sum();
        if (total - 1.0).abs() > tol {
            return false;
        }
        for k in 0..beta.dim() {
            let recombined: f64 =
                self.weights.iter().map(|(e, &w)| w * e.coord(k)).sum();
            if (recombined - beta.coord(k)).abs() > tol {
                return false;
            }
        }
        true
    }
}

/// The polytope of barycentric representations of `beta` over `a_plus`.
#[derive(Debug, Clone)]
pub struct LambdaPolytope {
    a_plus: Vec<Exponent>,
    beta: Exponent,
}

impl LambdaPolytope {
    pub fn new(a_plus: &[Exponent], beta: &Exponent) -> Self {
        Self { a_plus: a_plus.to_vec(), beta: beta.clone() }
    }

    /// Some barycentric vector when the polytope is nonempty.
    pub fn feasible_point(&self) -> Option<BarycentricVector> {
        let costs = vec![0.0; self.a_plus.len()];
        self.minimize(&costs).map(|(v, _)| v)
    }

    /// Minimizes a linear cost over the polytope. A cost of `+inf` forces the
    /// corresponding weight to zero; if that leaves no representation, the
    /// restricted polytope is empty and `None` is returned.
    pub fn minimize(&self, cost: &[f64]) -> Option<(BarycentricVector, f64)> {
        assert_eq!(cost.len(), self.a_plus.len(), "one cost entry per support point");
        let active: Vec<usize> =
            (0..self.a_plus.len()).filter(|&i| cost[i] < f64::INFINITY).collect();
        if active.is_empty() {
            return None;
        }
        let n = self.beta.dim();
        let obj = active.iter().map(|&i| cost[i]).collect();
        let mut lp = LinearProgram::new(
            Sense::Minimize,
            obj,
            vec![VarBound::NonNegative; active.len()],
        );
        for k in 0..n {
            let row = active.iter().map(|&i| self.a_plus[i].coord(k)).collect();
            lp.push(row, Relation::Eq, self.beta.coord(k));
        }
        lp.push(vec![1.0; active.len()], Relation::Eq, 1.0);

        // Shape and finiteness are guaranteed by construction, and a pure
        // feasibility/transport program of this size does not hit pivot caps.
        let solution = lp::solve(&lp).expect("barycentric program is well formed");
        match solution {
            LpSolution::Optimal { point, objective_value } => {
                let weights = active
                    .iter()
                    .zip(&point)
                    .map(|(&i, &w)| (self.a_plus[i].clone(), w.max(0.0)))
                    .collect::<Vec<_>>();
                Some((BarycentricVector::new(weights), objective_value))
            }
            LpSolution::Infeasible => None,
            // A nonempty bounded polytope cannot make a finite cost diverge.
            LpSolution::Unbounded => unreachable!("Lambda polytope is bounded"),
        }
    }
}

/// Nonempty check for `Lambda(a_plus, beta)`, returning a witness.
pub fn lambda_feasible(a_plus: &[Exponent], beta: &Exponent) -> Option<BarycentricVector> {
    LambdaPolytope::new(a_plus, beta).feasible_point()
}

/// See [`LambdaPolytope::minimize`].
pub fn minimize_linear_over_lambda(
    a_plus: &[Exponent],
    beta: &Exponent,
    cost: &[f64],
) -> Option<(BarycentricVector, f64)> {
    LambdaPolytope::new(a_plus, beta).minimize(cost)
}
