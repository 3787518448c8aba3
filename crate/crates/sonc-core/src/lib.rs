//! Certified lower bounds for sparse polynomials on the positive orthant and
//! for exponential sums, computed through the dual SONC cone.
//!
//! The pipeline:
//!
//! * [`support`] — instance model: supports, coefficients, sign decomposition,
//!   Newton-polytope vertex checks.
//! * [`barycentric`] — the polytope of barycentric representations of a point
//!   over a positive support, and linear optimization over it.
//! * [`lp`] — a small dense two-phase simplex; every geometric question above
//!   reduces to it.
//! * [`dual`] — membership tests for the dual SONC cone in both of its
//!   inequality representations, with extractable certificates.
//! * [`bounds`] — the shift LPs that turn membership into a certified lower
//!   bound, plus their violation-tolerant variants.
//! * [`circuits`] — primal circuit-number certificates and AGE witness checks,
//!   used as an independent cross-check of the dual route.
//! * [`oracle`] — a brute-force sampling oracle; upper-bounds the true infimum
//!   so certified bounds can be falsified in tests.

pub mod barycentric;
pub mod bounds;
pub mod circuits;
pub mod dual;
pub mod lp;
pub mod oracle;
pub mod support;

pub use barycentric::{lambda_feasible, minimize_linear_over_lambda, BarycentricVector, LambdaPolytope};
pub use bounds::{
    build_lp_relax1, build_lp_relax2, dual_sonc_bound, edge_case_probe, recover_bound,
    relaxed_bound, BoundError, BoundOutcome, BoundResult, Branch, BranchLp, RelaxedBoundResult,
};
pub use circuits::{
    age_witness_check, circuit_number, circuit_nonnegative, CircuitError, CircuitInstance,
    CircuitNumber,
};
pub use dual::{
    check_membership_lambda, check_membership_tau, DualMembershipCertificate, DualVector,
    LambdaMembership, NotMemberReason, TauMembership,
};
pub use lp::{solve, Constraint, LinearProgram, LpError, LpSolution, Relation, Sense, VarBound};
pub use oracle::{sample_min, OracleConfig, OracleError, SampleMin};
pub use support::{
    is_vertex, parse_instance, sign_split, validate_vertex_condition, Exponent, ExponentialSum,
    Kind, ModelError, SignDecomposition,
};
