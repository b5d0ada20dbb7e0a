//! Exact rational points on tori `T^N = R^N / Z^N`.
//!
//! Points are stored by their representative in `[0,1)^N`; distances use the
//! sup norm of the coordinatewise distance to the nearest integer.

mod cover;
mod subtorus;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, Rational};

pub use cover::{covering_radius, is_eps_dense, uncovered_cell_centers, DensityVerdict};
pub use subtorus::{
    density_in_translate, membership_in_translate, project_by_vector, SubtorusTranslate,
    TranslateDensity,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    BadEpsilon(Rational),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("point set is empty")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("point {index} does not lie in the subtorus translate")]
    NotInTranslate { index: usize },
    #[error("subtorus parameterization must have rank at least 1")]
    DegenerateSubtorus,
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: &Rational) -> Rational {
    let f = frac(x);
    let g = Rational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// A point of `T^N` with every coordinate in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TorusPoint(Vec<Rational>);

impl TorusPoint {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn zero(dim: usize) -> Self {
        TorusPoint(vec![Rational::zero(); dim])
    }

    /// Sup-norm torus distance.
    pub fn distance(&self, other: &TorusPoint) -> Rational {
        assert_eq!(self.dim(), other.dim(), "distance between points of different dimension");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| dist_to_integer(&(a - b)))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn translate(&self, t: &[Rational]) -> TorusPoint {
        normalize(&self.0.iter().zip(t).map(|(a, b)| a + b).collect::<Vec<_>>())
    }
}

impl TryFrom<Vec<String>> for TorusPoint {
    type Error = String;

    fn try_from(v: Vec<String>) -> Result<Self, String> {
        let coords: Vec<Rational> =
            v.iter().map(|s| s.parse::<Rational>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        if coords.iter().any(|c| c.is_negative() || *c >= Rational::one()) {
            return Err("torus coordinates must lie in [0, 1)".into());
        }
        Ok(TorusPoint(coords))
    }
}

impl From<TorusPoint> for Vec<String> {
    fn from(p: TorusPoint) -> Self {
        p.0.iter().map(ToString::to_string).collect()
    }
}

/// Reduces every coordinate modulo 1.
pub fn normalize(v: &[Rational]) -> TorusPoint {
    TorusPoint(v.iter().map(frac).collect())
}

/// Finite set of distinct points of `T^dim`, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct TorusPointSet {
    dim: usize,
    points: Vec<TorusPoint>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    points: Vec<TorusPoint>,
}

impl TryFrom<PointSetRepr> for TorusPointSet {
    type Error = TorusError;

    fn try_from(r: PointSetRepr) -> Result<Self, TorusError> {
        TorusPointSet::new(r.dim, r.points)
    }
}

impl From<TorusPointSet> for PointSetRepr {
    fn from(s: TorusPointSet) -> Self {
        PointSetRepr { dim: s.dim, points: s.points }
    }
}

impl TorusPointSet {
    /// Builds a set, dropping duplicates (first occurrence wins).
    pub fn new(dim: usize, points: Vec<TorusPoint>) -> Result<Self, TorusError> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(TorusError::DimensionMismatch { expected: dim, found: p.dim() });
            }
            if seen.insert(p.clone()) {
                kept.push(p);
            }
        }
        Ok(TorusPointSet { dim, points: kept })
    }

    /// Normalizes arbitrary rational vectors into a set.
    pub fn from_rationals(dim: usize, vectors: &[Vec<Rational>]) -> Result<Self, TorusError> {
        Self::new(dim, vectors.iter().map(|v| normalize(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TorusPoint> {
        self.points.iter()
    }

    /// Smallest sup distance from `p` to the set.
    pub fn distance_to(&self, p: &TorusPoint) -> Option<Rational> {
        self.points.iter().map(|x| x.distance(p)).min()
    }

    pub fn translate(&self, t: &[Rational]) -> TorusPointSet {
        let pts = self.points.iter().map(|p| p.translate(t)).collect();
        TorusPointSet::new(self.dim, pts).expect("translation preserves dimension")
    }

    /// Image under an integer matrix acting on representatives, reduced mod 1.
    pub fn map_integer(&self, m: &crate::linalg::MatZ) -> TorusPointSet {
        assert_eq!(m.cols(), self.dim, "matrix width must equal point dimension");
        let mq = crate::linalg::to_rational(m);
        let pts = self.points.iter().map(|p| normalize(&mq.mul_vec(p.coords()))).collect();
        TorusPointSet::new(m.rows(), pts).expect("image has the matrix height")
    }

    /// Projection onto one coordinate axis, as a set in `T`.
    pub fn axis_projection(&self, axis: usize) -> TorusPointSet {
        let pts = self.points.iter().map(|p| TorusPoint(vec![p.0[axis].clone()])).collect();
        TorusPointSet::new(1, pts).expect("one-dimensional")
    }
}

impl<'a> IntoIterator for &'a TorusPointSet {
    type Item = &'a TorusPoint;
    type IntoIter = std::slice::Iter<'a, TorusPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `v . x` for an integer vector and a torus point, as an exact rational in R.
pub fn integer_dot(v: &[BigInt], x: &TorusPoint) -> Rational {
    let vq: Vec<Rational> = v.iter().cloned().map(Rational::from_integer).collect();
    dot(&vq, x.coords())
}
