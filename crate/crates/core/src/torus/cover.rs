//! Exact ε-density on `T^N` by recursive slab decomposition.
//!
//! Everything is rescaled by `P = 2 * lcm(denominators)` so that coordinates,
//! the radius, arc endpoints and arc midpoints are all integers modulo `P`.
//! Small instances run on `i128`, large ones on `BigInt`.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{TorusError, TorusPoint, TorusPointSet};
use crate::linalg::{denominator_lcm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub dense: bool,
    pub hole: Option<TorusPoint>,
    #[serde(with = "crate::textual::rational")]
    pub epsilon: Rational,
}

pub(crate) fn check_epsilon(eps: &Rational) -> Result<(), TorusError> {
    if eps.is_positive() && *eps < Rational::new(1.into(), 2.into()) {
        Ok(())
    } else {
        Err(TorusError::BadEpsilon(eps.clone()))
    }
}

trait Scalar: Integer + Signed + Clone + Hash + Debug {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("scaled value fits in i128")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Arrangement<T> {
    dim: usize,
    modulus: T,
    radius: T,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> Arrangement<T> {
    fn new(dim: usize, modulus: &BigInt, radius: &BigInt, points: &[Vec<BigInt>]) -> Self {
        Arrangement {
            dim,
            modulus: T::from_big(modulus),
            radius: T::from_big(radius),
            points: points.iter().map(|p| p.iter().map(T::from_big).collect()).collect(),
        }
    }

    fn circular_distance(&self, a: &T, b: &T) -> T {
        let d = (a.clone() - b.clone()).mod_floor(&self.modulus);
        let e = self.modulus.clone() - d.clone();
        if d <= e {
            d
        } else {
            e
        }
    }

    /// Midpoints of the elementary arcs cut out on `axis` by the active
    /// intervals; the arc wrapping through 0 comes first.
    fn midpoints(&self, axis: usize, active: &[usize]) -> Vec<T> {
        let p = &self.modulus;
        let mut ends: Vec<T> = Vec::with_capacity(2 * active.len());
        for &i in active {
            let x = &self.points[i][axis];
            ends.push((x.clone() - self.radius.clone()).mod_floor(p));
            ends.push((x.clone() + self.radius.clone()).mod_floor(p));
        }
        ends.sort();
        ends.dedup();
        let two = T::one() + T::one();
        let m = ends.len();
        let mut mids = Vec::with_capacity(m);
        mids.push(((ends[m - 1].clone() + ends[0].clone() + p.clone()) / two.clone()).mod_floor(p));
        for w in ends.windows(2) {
            mids.push((w[0].clone() + w[1].clone()) / two.clone());
        }
        mids
    }

    /// Depth-first search for uncovered cells. Active sets already shown to
    /// cover the remaining axes are memoized.
    fn search(
        &self,
        axis: usize,
        active: &[usize],
        prefix: &mut Vec<T>,
        covered: &mut HashSet<(usize, Vec<usize>)>,
        out: &mut Vec<Vec<T>>,
        limit: usize,
    ) -> bool {
        if covered.contains(&(axis, active.to_vec())) {
            return false;
        }
        let mut found = false;
        for mid in self.midpoints(axis, active) {
            let sub: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&i| self.circular_distance(&mid, &self.points[i][axis]) <= self.radius)
                .collect();
            prefix.push(mid);
            if sub.is_empty() {
                let mut hole = prefix.clone();
                hole.resize(self.dim, T::zero());
                out.push(hole);
                found = true;
            } else if axis + 1 < self.dim {
                found |= self.search(axis + 1, &sub, prefix, covered, out, limit);
            }
            prefix.pop();
            if out.len() >= limit {
                return true;
            }
        }
        if !found {
            covered.insert((axis, active.to_vec()));
        }
        found
    }

    fn holes(&self, limit: usize) -> Vec<Vec<BigInt>> {
        let all: Vec<usize> = (0..self.points.len()).collect();
        let mut out = Vec::new();
        self.search(0, &all, &mut Vec::with_capacity(self.dim), &mut HashSet::new(), &mut out, limit);
        out.into_iter().map(|h| h.iter().map(Scalar::to_big).collect()).collect()
    }
}

fn find_holes(x: &TorusPointSet, eps: &Rational, limit: usize) -> Vec<TorusPoint> {
    let q = denominator_lcm(x.iter().flat_map(|p| p.coords()).chain(std::iter::once(eps)));
    let modulus: BigInt = q * 2;
    let scale = |r: &Rational| -> BigInt { r.numer() * (&modulus / r.denom()) };
    let radius = scale(eps);
    let points: Vec<Vec<BigInt>> = x.iter().map(|p| p.coords().iter().map(scale).collect()).collect();
    let raw = if modulus.bits() <= 120 {
        Arrangement::<i128>::new(x.dim(), &modulus, &radius, &points).holes(limit)
    } else {
        Arrangement::<BigInt>::new(x.dim(), &modulus, &radius, &points).holes(limit)
    };
    raw.into_iter()
        .map(|h| TorusPoint(h.into_iter().map(|c| Rational::new(c, modulus.clone())).collect()))
        .collect()
}

/// Decides whether the closed sup-norm `eps`-balls around `x` cover the torus.
pub fn is_eps_dense(x: &TorusPointSet, eps: &Rational) -> Result<DensityVerdict, TorusError> {
    check_epsilon(eps)?;
    if x.is_empty() {
        return Err(TorusError::EmptySet);
    }
    let hole = find_holes(x, eps, 1).into_iter().next();
    Ok(DensityVerdict { dense: hole.is_none(), hole, epsilon: eps.clone() })
}

/// Centers of up to `limit` uncovered elementary cells, in search order.
/// Axes below the level where a cell became uncovered are set to 0.
pub fn uncovered_cell_centers(
    x: &TorusPointSet,
    eps: &Rational,
    limit: usize,
) -> Result<Vec<TorusPoint>, TorusError> {
    check_epsilon(eps)?;
    if x.is_empty() {
        return Err(TorusError::EmptySet);
    }
    Ok(find_holes(x, eps, limit.max(1)))
}

/// Bisection bracket `(lower, upper)` around the covering radius, with
/// `upper - lower <= tol`. `x` is dense at `upper` and not dense below `lower`.
pub fn covering_radius(x: &TorusPointSet, tol: &Rational) -> Result<(Rational, Rational), TorusError> {
    if !tol.is_positive() {
        return Err(TorusError::BadTolerance);
    }
    if x.is_empty() {
        return Err(TorusError::EmptySet);
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::new(BigInt::one(), 2.into());
    let half = Rational::new(BigInt::one(), 2.into());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) * &half;
        if is_eps_dense(x, &mid)?.dense {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
