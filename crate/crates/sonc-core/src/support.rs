//! Instance model: finite supports in R^n with signed coefficients.
//!
//! A value of [`ExponentialSum`] is `f(x) = sum_a c_a * exp(<x, a>)` over a
//! finite support. With `y_i = exp(x_i)` this is exactly a sparse polynomial
//! on the positive orthant, so `kind` only gates validation (polynomials need
//! nonnegative integer exponents), never evaluation.

use std::collections::BTreeMap;
use std::fmt;

use ordered_float::NotNan;
use serde::Deserialize;

use crate::barycentric::lambda_feasible;

/// A support point. Coordinates are finite; ordering and hashing are total,
/// which makes supports usable as deterministic map keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<NotNan<f64>>);

impl Exponent {
    pub fn new(coords: Vec<f64>) -> Result<Self, ModelError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ModelError::NonFiniteExponent);
        }
        Ok(Self(coords.into_iter().map(|c| NotNan::new(c).unwrap()).collect()))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![NotNan::new(0.0).unwrap(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.0[i].into_inner()
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|c| c.into_inner())
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords().collect()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|c| c.into_inner() == 0.0)
    }

    /// Coordinate-wise `self - other`.
    pub fn sub(&self, other: &Exponent) -> Vec<f64> {
        self.coords().zip(other.coords()).map(|(a, b)| a - b).collect()
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.coords().zip(v).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Polynomial,
    Exponential,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Polynomial => write!(f, "polynomial"),
            Kind::Exponential => write!(f, "exponential"),
        }
    }
}

/// A finite signed combination of exponential monomials.
///
/// Zero coefficients are dropped on construction, so stored coefficients are
/// always nonzero and the sign partition of the support is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSum {
    n: usize,
    kind: Kind,
    terms: BTreeMap<Exponent, f64>,
}

impl ExponentialSum {
    pub fn new(
        n: usize,
        kind: Kind,
        terms: impl IntoIterator<Item = (Exponent, f64)>,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::ZeroDimension);
        }
        let mut map = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.dim() != n {
                return Err(ModelError::DimensionMismatch { got: exp.dim(), expected: n });
            }
            if !coef.is_finite() {
                return Err(ModelError::NonFiniteCoefficient(exp));
            }
            if kind == Kind::Polynomial {
                let integral = exp.coords().all(|c| c >= 0.0 && c.fract() == 0.0);
                if !integral {
                    return Err(ModelError::NotAMonomial(exp));
                }
            }
            if coef == 0.0 {
                continue;
            }
            if map.insert(exp.clone(), coef).is_some() {
                return Err(ModelError::DuplicateExponent(exp));
            }
        }
        Ok(Self { n, kind, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exp: &Exponent) -> Option<f64> {
        self.terms.get(exp).copied()
    }

    pub fn origin_coefficient(&self) -> f64 {
        self.coefficient(&Exponent::origin(self.n)).unwrap_or(0.0)
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// `f + t`: adds `t` to the constant term, dropping it if it cancels.
    pub fn shifted(&self, t: f64) -> ExponentialSum {
        let mut terms = self.terms.clone();
        let origin = Exponent::origin(self.n);
        let c = terms.remove(&origin).unwrap_or(0.0) + t;
        if c != 0.0 {
            terms.insert(origin, c);
        }
        ExponentialSum { n: self.n, kind: self.kind, terms }
    }

    /// Evaluates `sum_a c_a * exp(<x, a>)`; for polynomials this is the value
    /// at the positive-orthant point `y = exp(x)`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "evaluation point has wrong dimension");
        self.terms.iter().map(|(e, c)| c * e.dot(x).exp()).sum()
    }
}

#[derive(Deserialize)]
struct RawTerm {
    exp: Vec<f64>,
    coef: f64,
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    kind: Kind,
    terms: Vec<RawTerm>,
}

/// Parses the JSON instance format:
/// `{"n": 2, "kind": "polynomial", "terms": [{"exp": [2, 4], "coef": 1.0}, ...]}`.
pub fn parse_instance(text: &str) -> Result<ExponentialSum, ModelError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let terms = raw
        .terms
        .into_iter()
        .map(|t| Ok((Exponent::new(t.exp)?, t.coef)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    ExponentialSum::new(raw.n, raw.kind, terms)
}

/// Sign partition of a support, with Newton-polytope vertex flags.
#[derive(Debug, Clone)]
pub struct SignDecomposition {
    n: usize,
    a_plus: Vec<Exponent>,
    a_minus: Vec<Exponent>,
    vertex_flags: BTreeMap<Exponent, bool>,
}

impl SignDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_plus(&self) -> &[Exponent] {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &[Exponent] {
        &self.a_minus
    }

    pub fn is_flagged_vertex(&self, exp: &Exponent) -> bool {
        self.vertex_flags.get(exp).copied().unwrap_or(false)
    }

    pub fn vertex_flags(&self) -> &BTreeMap<Exponent, bool> {
        &self.vertex_flags
    }
}

/// Splits the support by coefficient sign and flags vertices of conv(A).
pub fn sign_split(f: &ExponentialSum) -> Result<SignDecomposition, ModelError> {
    let mut a_plus = Vec::new();
    let mut a_minus = Vec::new();
    for (e, c) in f.iter() {
        if c > 0.0 {
            a_plus.push(e.clone());
        } else {
            a_minus.push(e.clone());
        }
    }
    if a_plus.is_empty() {
        return Err(ModelError::NoPositiveTerms);
    }
    let all = f.support();
    let vertex_flags = all.iter().map(|e| (e.clone(), is_vertex(&all, e))).collect();
    Ok(SignDecomposition { n: f.n(), a_plus, a_minus, vertex_flags })
}

/// Whether `candidate` is a vertex of the convex hull of `points`, i.e. not a
/// convex combination of the remaining points.
pub fn is_vertex(points: &[Exponent], candidate: &Exponent) -> bool {
    let others: Vec<Exponent> =
        points.iter().filter(|p| *p != candidate).cloned().collect();
    if others.is_empty() {
        return true;
    }
    lambda_feasible(&others, candidate).is_none()
}

/// Vertices of conv(A) that carry a negative coefficient; empty means the
/// instance can be nonnegative at all.
pub fn validate_vertex_condition(f: &ExponentialSum) -> Vec<Exponent> {
    let all = f.support();
    f.iter()
        .filter(|(e, c)| *c < 0.0 && is_vertex(&all, e))
        .map(|(e, _)| e.clone())
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("exponent has a non-finite coordinate")]
    NonFiniteExponent,
    #[error("coefficient at {0} is not finite")]
    NonFiniteCoefficient(Exponent),
    #[error("instance dimension must be at least 1")]
    ZeroDimension,
    #[error("exponent has {got} coordinates, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(Exponent),
    #[error("exponent {0} is not a monomial (kind polynomial requires nonnegative integers)")]
    NotAMonomial(Exponent),
    #[error("no term has a positive coefficient")]
    NoPositiveTerms,
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::test_instances::MOTZKIN;

    fn e(coords: &[f64]) -> Exponent {
        Exponent::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn parses_motzkin() {
        let f = parse_instance(MOTZKIN).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.kind(), Kind::Polynomial);
        assert_eq!(f.len(), 4);
        assert_eq!(f.coefficient(&e(&[2.0, 2.0])), Some(-3.0));
        assert_eq!(f.origin_coefficient(), 1.0);
    }

    #[test]
    fn drops_zero_coefficients() {
        let f = parse_instance(
            r#"{"n": 1, "kind": "exponential",
                "terms": [{"exp": [0], "coef": 1.0}, {"exp": [1], "coef": 0.0}]}"#,
        )
        .unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn rejects_duplicate_exponents() {
        let r = parse_instance(
            r#"{"n": 1, "kind": "exponential",
                "terms": [{"exp": [1], "coef": 1.0}, {"exp": [1], "coef": 2.0}]}"#,
        );
        assert!(matches!(r, Err(ModelError::DuplicateExponent(_))));
    }

    #[test]
    fn rejects_fractional_polynomial_exponents() {
        let r = parse_instance(
            r#"{"n": 1, "kind": "polynomial", "terms": [{"exp": [0.5], "coef": 1.0}]}"#,
        );
        assert!(matches!(r, Err(ModelError::NotAMonomial(_))));
        let r = parse_instance(
            r#"{"n": 1, "kind": "polynomial", "terms": [{"exp": [-1], "coef": 1.0}]}"#,
        );
        assert!(matches!(r, Err(ModelError::NotAMonomial(_))));
        // The same coordinates are fine for an exponential sum.
        assert!(parse_instance(
            r#"{"n": 1, "kind": "exponential", "terms": [{"exp": [-1], "coef": 1.0}]}"#
        )
        .is_ok());
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(matches!(parse_instance("{"), Err(ModelError::Parse(_))));
        assert!(matches!(
            parse_instance(r#"{"n": 1, "kind": "cubic", "terms": []}"#),
            Err(ModelError::Parse(_))
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let r = parse_instance(
            r#"{"n": 2, "kind": "polynomial", "terms": [{"exp": [1], "coef": 1.0}]}"#,
        );
        assert!(matches!(r, Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn splits_motzkin_signs() {
        let f = parse_instance(MOTZKIN).unwrap();
        let dec = sign_split(&f).unwrap();
        assert_eq!(dec.a_plus(), &[e(&[0.0, 0.0]), e(&[2.0, 4.0]), e(&[4.0, 2.0])]);
        assert_eq!(dec.a_minus(), &[e(&[2.0, 2.0])]);
        assert!(dec.is_flagged_vertex(&e(&[0.0, 0.0])));
        assert!(dec.is_flagged_vertex(&e(&[2.0, 4.0])));
        assert!(dec.is_flagged_vertex(&e(&[4.0, 2.0])));
        assert!(!dec.is_flagged_vertex(&e(&[2.0, 2.0])));
    }

    #[test]
    fn sign_split_requires_a_positive_term() {
        let f = ExponentialSum::new(1, Kind::Exponential, vec![(e(&[1.0]), -1.0)]).unwrap();
        assert!(matches!(sign_split(&f), Err(ModelError::NoPositiveTerms)));
    }

    #[test]
    fn vertex_detection_matches_hand_geometry() {
        // (2,2) = 1/3*(0,0) + 1/3*(2,4) + 1/3*(4,2): solving the 3x3
        // barycentric system by hand gives exactly these weights, so (2,2)
        // cannot be a vertex. Every convex combination of the other three
        // points has strictly positive coordinates, so (0,0) is one.
        let pts = [e(&[2.0, 4.0]), e(&[4.0, 2.0]), e(&[2.0, 2.0]), e(&[0.0, 0.0])];
        assert!(!is_vertex(&pts, &e(&[2.0, 2.0])));
        assert!(is_vertex(&pts, &e(&[0.0, 0.0])));
        assert!(is_vertex(&pts, &e(&[2.0, 4.0])));
        assert!(is_vertex(&[e(&[1.0])], &e(&[1.0])), "singleton is its own vertex");
    }

    #[test]
    fn vertex_condition_flags_negative_vertices() {
        let f = parse_instance(MOTZKIN).unwrap();
        assert!(validate_vertex_condition(&f).is_empty());

        // -y^2 + y on {1, 2}: the negative term sits at the vertex 2.
        let g = ExponentialSum::new(
            1,
            Kind::Polynomial,
            vec![(e(&[2.0]), -1.0), (e(&[1.0]), 1.0)],
        )
        .unwrap();
        assert_eq!(validate_vertex_condition(&g), vec![e(&[2.0])]);

        // Negative constant term: the origin is a vertex of conv(A) here.
        let h = parse_instance(
            r#"{"n": 2, "kind": "polynomial", "terms": [
                {"exp": [0, 0], "coef": -3.0}, {"exp": [0, 6], "coef": 1.5},
                {"exp": [6, 0], "coef": 11.5}, {"exp": [0, 2], "coef": -0.5},
                {"exp": [4, 0], "coef": 0.5}]}"#,
        )
        .unwrap();
        assert_eq!(validate_vertex_condition(&h), vec![e(&[0.0, 0.0])]);
    }

    #[test]
    fn evaluates_at_points() {
        let f = parse_instance(MOTZKIN).unwrap();
        // At x = (0,0) every monomial is 1: 1 + 1 - 3 + 1 = 0.
        assert!((f.evaluate(&[0.0, 0.0])).abs() < 1e-15);

        let g = ExponentialSum::new(
            1,
            Kind::Exponential,
            vec![(e(&[0.0]), 1.0), (e(&[1.0]), -2.0), (e(&[2.0]), 1.0)],
        )
        .unwrap();
        assert!(g.evaluate(&[0.0]).abs() < 1e-15);
        let x = 0.7_f64;
        let expect = (1.0 - x.exp()) * (1.0 - x.exp());
        assert!((g.evaluate(&[x]) - expect).abs() < 1e-12);
    }

    #[test]
    fn shift_adjusts_constant_term() {
        let f = parse_instance(MOTZKIN).unwrap();
        let g = f.shifted(26.0);
        assert_eq!(g.origin_coefficient(), 27.0);
        assert_eq!(g.len(), 4);
        let h = f.shifted(-1.0);
        assert_eq!(h.origin_coefficient(), 0.0);
        assert_eq!(h.len(), 3, "cancelled constant term is dropped");
    }
}
