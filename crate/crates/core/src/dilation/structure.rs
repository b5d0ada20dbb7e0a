use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::DilationError;
use crate::linalg::{sup_norm_vec, Rational};
use crate::torus::{frac, integer_dot, TorusPoint, TorusPointSet};

/// Points `Y` of the input with `w . (y - y0) = J` in R.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureWitness {
    #[serde(with = "crate::textual::bigint_vec")]
    pub w: Vec<BigInt>,
    pub y0: TorusPoint,
    #[serde(with = "crate::textual::bigint")]
    pub j: BigInt,
    pub y: TorusPointSet,
    /// Size of the class of `y0` under `w . (x - y) in Z`.
    pub class_size: usize,
    #[serde(with = "crate::textual::bigint")]
    pub w_height: BigInt,
}

impl StructureWitness {
    pub fn verify(&self) -> bool {
        let base = integer_dot(&self.w, &self.y0) + Rational::from_integer(self.j.clone());
        self.y.iter().all(|p| integer_dot(&self.w, p) == base)
    }

    /// Pigeonhole floor `ceil(c / (N ||w|| + 1))` for the class size `c`.
    pub fn guaranteed_size(&self) -> usize {
        let slots = BigInt::from(self.y0.dim()) * &self.w_height + 1u32;
        let c = BigInt::from(self.class_size);
        let (quo, rem) = num_integer::Integer::div_rem(&c, &slots);
        let ceil = if rem.is_zero() { quo } else { quo + 1u32 };
        num_traits::ToPrimitive::to_usize(&ceil).unwrap_or(usize::MAX)
    }
}

/// Groups `items` by key, keeping first-appearance order of the groups.
fn group_by_key<K: std::hash::Hash + Eq>(items: impl Iterator<Item = (usize, K)>) -> Vec<Vec<usize>> {
    let mut slot: HashMap<K, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, k) in items {
        let g = *slot.entry(k).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

fn largest(groups: Vec<Vec<usize>>) -> Vec<usize> {
    // max_by_key keeps the last maximum; reverse so the earliest wins
    groups.into_iter().rev().max_by_key(Vec::len).unwrap_or_default()
}

pub fn find_structure(x: &TorusPointSet, w: &[BigInt]) -> Result<StructureWitness, DilationError> {
    if w.len() != x.dim() {
        return Err(DilationError::DimensionMismatch { expected: x.dim(), found: w.len() });
    }
    if w.iter().all(Zero::is_zero) {
        return Err(DilationError::ZeroVector);
    }
    if x.is_empty() {
        return Err(DilationError::EmptySet);
    }
    let pts = x.points();
    let dots: Vec<Rational> = pts.iter().map(|p| integer_dot(w, p)).collect();
    let class = largest(group_by_key(dots.iter().map(frac).enumerate()));
    let level = largest(group_by_key(class.iter().map(|&i| (i, dots[i].clone()))));
    let y0 = pts[level[0]].clone();
    let y = TorusPointSet::new(x.dim(), level.iter().map(|&i| pts[i].clone()).collect())?;
    let witness = StructureWitness {
        w: w.to_vec(),
        y0,
        j: BigInt::zero(),
        y,
        class_size: class.len(),
        w_height: sup_norm_vec(w),
    };
    assert!(witness.y.len() >= witness.guaranteed_size(), "pigeonhole bound violated");
    Ok(witness)
}
