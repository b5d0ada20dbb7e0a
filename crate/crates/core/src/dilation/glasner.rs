use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{check_scan_inputs, first_dense, too_sparse, DilationError, SearchBudget};
use crate::linalg::{MatZ, Rational};
use crate::torus::TorusPointSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlasnerResult {
    pub t: MatZ,
    pub n: u64,
    /// Coordinate of `X` that `t` reads.
    pub axis: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GlasnerOutcome {
    Found(GlasnerResult),
    Exhausted { n_max: u64, axis: usize },
}

/// `a(n) = (q_1 n, q_2 n + 1, q_3 n, ..., q_L n)` with `q_l = (M+1)^(l-1)`.
fn direction(n: u64, multipliers: &[BigInt]) -> Vec<BigInt> {
    let n = BigInt::from(n);
    multipliers
        .iter()
        .enumerate()
        .map(|(l, q)| if l == 1 { q * &n + 1u32 } else { q * &n })
        .collect()
}

fn embed(a: &[BigInt], dim: usize, axis: usize) -> MatZ {
    let mut t = MatZ::zeros(a.len(), dim);
    for (r, v) in a.iter().enumerate() {
        t.set(r, axis, v.clone());
    }
    t
}

/// Scans `T_n x = a(n) x_i` over `n` for a primitive `L x N` matrix taking
/// `X` to an eps-dense subset of `T^L`; `i` is the axis with most distinct values.
pub fn glasner_scan(
    x: &TorusPointSet,
    eps: &Rational,
    target_dim: usize,
    budget: SearchBudget,
) -> Result<GlasnerOutcome, DilationError> {
    check_scan_inputs(x, eps)?;
    if target_dim < 2 {
        return Err(DilationError::TargetDimension(target_dim));
    }
    let axis = (0..x.dim())
        .rev()
        .max_by_key(|&i| x.axis_projection(i).len())
        .expect("points have at least one coordinate");
    let projection = x.axis_projection(axis);
    let m = (Rational::from_integer(target_dim.into()) / eps).floor().to_integer();
    let base: BigInt = m + 1u32;
    let multipliers: Vec<BigInt> =
        std::iter::successors(Some(BigInt::one()), |q| Some(q * &base)).take(target_dim).collect();

    if too_sparse(projection.len(), eps, target_dim) {
        return Ok(GlasnerOutcome::Exhausted { n_max: budget.n_max, axis });
    }
    let hit = first_dense(budget.n_max, eps, |n| {
        projection.map_integer(&embed(&direction(n, &multipliers), 1, 0))
    });
    Ok(match hit {
        Some(n) => GlasnerOutcome::Found(GlasnerResult { t: embed(&direction(n, &multipliers), x.dim(), axis), n, axis }),
        None => GlasnerOutcome::Exhausted { n_max: budget.n_max, axis },
    })
}
