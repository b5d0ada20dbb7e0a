use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cover::check_epsilon;
use super::{
    covering_radius, frac, integer_dot, is_eps_dense, normalize, uncovered_cell_centers, TorusError, TorusPoint,
    TorusPointSet,
};
use crate::linalg::{hermite_normal_form, saturate_columns, saturated_integer_kernel, sup_norm, to_rational, MatZ, Rational};

/// Translate `b + H T^d` of a rational subtorus of `T^L`.
///
/// The columns of `H` are replaced by an HNF basis of their saturation, so
/// `H T^d` is the full closed subgroup `(span H + Z^L) / Z^L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TranslateRepr", into = "TranslateRepr")]
pub struct SubtorusTranslate {
    h: MatZ,
    b: TorusPoint,
    characters: MatZ,
    // first d rows of a unimodular U with U H = [I; 0]
    coordinate_rows: MatZ,
}

#[derive(Serialize, Deserialize)]
struct TranslateRepr {
    h: MatZ,
    b: TorusPoint,
}

impl TryFrom<TranslateRepr> for SubtorusTranslate {
    type Error = TorusError;

    fn try_from(r: TranslateRepr) -> Result<Self, TorusError> {
        SubtorusTranslate::new(&r.h, r.b)
    }
}

impl From<SubtorusTranslate> for TranslateRepr {
    fn from(s: SubtorusTranslate) -> Self {
        TranslateRepr { h: s.h, b: s.b }
    }
}

impl SubtorusTranslate {
    pub fn new(h: &MatZ, b: TorusPoint) -> Result<Self, TorusError> {
        if b.dim() != h.rows() {
            return Err(TorusError::DimensionMismatch { expected: h.rows(), found: b.dim() });
        }
        let h = saturate_columns(h);
        let d = h.cols();
        if d == 0 {
            return Err(TorusError::DegenerateSubtorus);
        }
        let characters = saturated_integer_kernel(&h.transpose());
        let hf = hermite_normal_form(&h);
        // a saturated basis has unimodular top block, so its HNF is [I; 0]
        debug_assert_eq!(hf.h.select_rows(&(0..d).collect::<Vec<_>>()), MatZ::identity(d));
        let coordinate_rows = hf.u.select_rows(&(0..d).collect::<Vec<_>>());
        Ok(SubtorusTranslate { h, b, characters, coordinate_rows })
    }

    pub fn full(dim: usize) -> Self {
        Self::new(&MatZ::identity(dim), TorusPoint::zero(dim)).expect("identity has full rank")
    }

    pub fn ambient_dim(&self) -> usize {
        self.h.rows()
    }

    pub fn dim(&self) -> usize {
        self.h.cols()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn basis(&self) -> &MatZ {
        &self.h
    }

    pub fn translate(&self) -> &TorusPoint {
        &self.b
    }

    /// Columns `v` with `v . h = 0` for every column `h`; membership is
    /// `v . (x - b)` integral for each of them.
    pub fn characters(&self) -> &MatZ {
        &self.characters
    }

    pub fn contains(&self, x: &TorusPoint) -> bool {
        let diff: Vec<Rational> = x.coords().iter().zip(self.b.coords()).map(|(a, b)| a - b).collect();
        let diff = TorusPoint(diff);
        self.characters.columns().iter().all(|v| integer_dot(v, &diff).is_integer())
    }

    /// `u` in `T^d` with `b + H u = x`. Assumes membership.
    pub fn pullback(&self, x: &TorusPoint) -> TorusPoint {
        let diff: Vec<Rational> = x.coords().iter().zip(self.b.coords()).map(|(a, b)| a - b).collect();
        TorusPoint(to_rational(&self.coordinate_rows).mul_vec(&diff).iter().map(frac).collect())
    }

    pub fn push_forward(&self, u: &TorusPoint) -> TorusPoint {
        let hu = to_rational(&self.h).mul_vec(u.coords());
        normalize(&hu.iter().zip(self.b.coords()).map(|(a, b)| a + b).collect::<Vec<_>>())
    }
}

pub fn membership_in_translate(x: &TorusPoint, s: &SubtorusTranslate) -> Result<bool, TorusError> {
    if x.dim() != s.ambient_dim() {
        return Err(TorusError::DimensionMismatch { expected: s.ambient_dim(), found: x.dim() });
    }
    Ok(s.contains(x))
}

/// `{v . x mod 1 : x in X}` as a subset of `T`.
pub fn project_by_vector(x: &TorusPointSet, v: &[BigInt]) -> Result<TorusPointSet, TorusError> {
    if v.len() != x.dim() {
        return Err(TorusError::DimensionMismatch { expected: x.dim(), found: v.len() });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(TorusError::ZeroVector);
    }
    let pts = x.iter().map(|p| normalize(&[integer_dot(v, p)])).collect();
    TorusPointSet::new(1, pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TranslateDensity {
    Dense,
    NotDense {
        hole: TorusPoint,
    },
    /// Pullback not dense at `lower` and no ambient hole found at `upper`.
    Inconclusive {
        #[serde(with = "crate::textual::rational")]
        lower: Rational,
        #[serde(with = "crate::textual::rational")]
        upper: Rational,
    },
}

const HOLE_CANDIDATES: usize = 256;

/// ε-density of `x` inside `s` for the ambient sup metric.
pub fn density_in_translate(
    x: &TorusPointSet,
    s: &SubtorusTranslate,
    eps: &Rational,
) -> Result<TranslateDensity, TorusError> {
    check_epsilon(eps)?;
    if x.is_empty() {
        return Err(TorusError::EmptySet);
    }
    if x.dim() != s.ambient_dim() {
        return Err(TorusError::DimensionMismatch { expected: s.ambient_dim(), found: x.dim() });
    }
    if let Some(index) = x.iter().position(|p| !s.contains(p)) {
        return Err(TorusError::NotInTranslate { index });
    }
    if s.is_full() {
        let v = is_eps_dense(x, eps)?;
        return Ok(match v.hole {
            None => TranslateDensity::Dense,
            Some(hole) => TranslateDensity::NotDense { hole },
        });
    }

    let pulled = TorusPointSet::new(s.dim(), x.iter().map(|p| s.pullback(p)).collect())?;
    let stretch = Rational::from_integer(sup_norm(&s.h) * BigInt::from(s.dim()));
    let delta = eps / stretch;
    let half = Rational::new(BigInt::one(), 2.into());
    if delta >= half || is_eps_dense(&pulled, &delta)?.dense {
        return Ok(TranslateDensity::Dense);
    }

    // deepest pullback holes first, then the ones at delta
    let (deep, _) = covering_radius(&pulled, &(&delta / Rational::from_integer(4.into())))?;
    let mut candidates = Vec::new();
    if deep > delta && deep < half {
        candidates.extend(uncovered_cell_centers(&pulled, &deep, HOLE_CANDIDATES)?);
    }
    candidates.extend(uncovered_cell_centers(&pulled, &delta, HOLE_CANDIDATES)?);
    for u in candidates {
        let hole = s.push_forward(&u);
        if x.distance_to(&hole).is_some_and(|d| d > *eps) {
            return Ok(TranslateDensity::NotDense { hole });
        }
    }
    Ok(TranslateDensity::Inconclusive { lower: delta, upper: eps.clone() })
}
