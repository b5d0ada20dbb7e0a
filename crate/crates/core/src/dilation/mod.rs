//! Searches for ε-dense dilations `A(n) X`.

mod descent;
mod glasner;
mod structure;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{row_sum_norm, Rational};
use crate::polymatrix::{check_conditions, decompose, CanonicalVectors, ConditionReport, Decomposition, PolyError, PolyMatrix};
use crate::torus::{is_eps_dense, normalize, SubtorusTranslate, TorusError, TorusPoint, TorusPointSet};

pub use descent::{inductive_descent, DescentLevel, DescentOutcome, DescentReport};
pub use glasner::{glasner_scan, GlasnerOutcome, GlasnerResult};
pub use structure::{find_structure, StructureWitness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DilationError {
    #[error("search refused: {reason}")]
    ConditionViolated { reason: String, report: Box<ConditionReport> },
    #[error("budget limits must be positive")]
    BadBudget,
    #[error("point set is empty")]
    EmptySet,
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("target dimension must be at least 2, got {0}")]
    TargetDimension(usize),
    #[error("descent stalled at level {level}: only {points} preimage point(s)")]
    DescentStalled { level: usize, points: usize },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub n_max: u64,
    pub height_bound: u64,
}

impl SearchBudget {
    pub fn new(n_max: u64, height_bound: u64) -> Result<Self, DilationError> {
        if n_max == 0 || height_bound == 0 {
            return Err(DilationError::BadBudget);
        }
        Ok(SearchBudget { n_max, height_bound })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Refuse inputs failing condition (a) or with a condition (b) counterexample.
    pub enforce_conditions: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { enforce_conditions: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Found {
        n: u64,
        subtorus: SubtorusTranslate,
        #[serde(with = "crate::textual::rational")]
        eps_ambient: Rational,
    },
    Exhausted {
        structure: Option<StructureWitness>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilationResult {
    pub decomposition: Decomposition,
    /// Density radius used on `B(n)(X/q)` in `T^ell`: `eps` over the
    /// sup-norm operator norm of `qT`.
    #[serde(with = "crate::textual::rational")]
    pub eps_scan: Rational,
    /// Values of `n` examined: up to the hit, or the whole budget.
    pub scanned: u64,
    pub outcome: Outcome,
}

impl DilationResult {
    pub fn found_n(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Found { n, .. } => Some(n),
            Outcome::Exhausted { .. } => None,
        }
    }
}

pub(crate) fn check_scan_inputs(x: &TorusPointSet, eps: &Rational) -> Result<(), DilationError> {
    if x.is_empty() {
        return Err(DilationError::EmptySet);
    }
    if !(eps > &Rational::zero() && eps < &Rational::new(1.into(), 2.into())) {
        return Err(TorusError::BadEpsilon(eps.clone()).into());
    }
    Ok(())
}

/// `k (2 eps)^dim < 1`: too few boxes to cover the torus by volume.
pub(crate) fn too_sparse(k: usize, eps: &Rational, dim: usize) -> bool {
    let side = eps * Rational::from_integer(2.into());
    Rational::from_integer(k.into()) * num_traits::pow(side, dim) < Rational::one()
}

/// Smallest `n` in `1..=n_max` with `image(n)` eps-dense, scanned in parallel.
pub(crate) fn first_dense<F>(n_max: u64, eps: &Rational, image: F) -> Option<u64>
where
    F: Fn(u64) -> TorusPointSet + Sync,
{
    (1..=n_max).into_par_iter().find_first(|&n| {
        let pts = image(n);
        !too_sparse(pts.len(), eps, pts.dim()) && is_eps_dense(&pts, eps).map(|v| v.dense).unwrap_or(false)
    })
}

fn refuse_if_violated(a: &PolyMatrix, height_bound: u64) -> Result<(), DilationError> {
    let report = check_conditions(a, height_bound);
    let reason = if !report.cond_a {
        "condition (a) fails: the nonconstant coefficients have rank below the column count"
    } else if report.cond_b.is_fails() {
        "condition (b) fails: an exact counterexample (v, w) was found"
    } else {
        return Ok(());
    };
    Err(DilationError::ConditionViolated { reason: reason.into(), report: Box::new(report) })
}

/// `{x / q}` for representatives `x` in `[0,1)^N`.
pub fn scale_down(x: &TorusPointSet, q: &BigInt) -> TorusPointSet {
    let qr = Rational::from_integer(q.clone());
    let pts = x.iter().map(|p| normalize(&p.coords().iter().map(|c| c / &qr).collect::<Vec<_>>())).collect();
    TorusPointSet::new(x.dim(), pts).expect("same dimension")
}

fn structure_candidates(x: &TorusPointSet, max_height: u64) -> Option<StructureWitness> {
    let mut best: Option<StructureWitness> = None;
    for w in CanonicalVectors::new(x.dim(), max_height) {
        let s = find_structure(x, &w).expect("canonical vectors are nonzero");
        // enumeration is by height, so a tie keeps the lower height
        let better = match &best {
            None => true,
            Some(b) => (s.y.len(), s.class_size) > (b.y.len(), b.class_size),
        };
        if better {
            best = Some(s);
        }
    }
    best
}

/// Scan `n = 1..=n_max` for `B(n)(X/q)` dense in `T^ell`; on exhaustion look
/// for a linear structure on `X`.
pub fn search_poly_dilation(
    a: &PolyMatrix,
    x: &TorusPointSet,
    eps: &Rational,
    budget: SearchBudget,
    options: SearchOptions,
) -> Result<DilationResult, DilationError> {
    check_scan_inputs(x, eps)?;
    if x.dim() != a.cols() {
        return Err(DilationError::DimensionMismatch { expected: a.cols(), found: x.dim() });
    }
    if options.enforce_conditions {
        refuse_if_violated(a, budget.height_bound)?;
    }
    let dec = decompose(a)?;
    let ell = dec.ell;
    let lipschitz = Rational::from_integer(row_sum_norm(&dec.qt));
    let eps_scan = eps / &lipschitz;
    let scaled = scale_down(x, &dec.q);

    let hit = if too_sparse(scaled.len(), &eps_scan, ell) {
        None
    } else {
        first_dense(budget.n_max, &eps_scan, |n| scaled.map_integer(&dec.b.evaluate(&BigInt::from(n))))
    };

    let (scanned, outcome) = match hit {
        Some(n) => {
            let subtorus = SubtorusTranslate::new(&dec.qt, TorusPoint::zero(a.rows()))?;
            (n, Outcome::Found { n, subtorus, eps_ambient: &eps_scan * &lipschitz })
        }
        None => {
            let b_height = Rational::from_integer(dec.b.nonconstant_height() * BigInt::from(ell));
            let natural = (b_height / &eps_scan).ceil().to_integer();
            let cap = num_traits::ToPrimitive::to_u64(&natural).unwrap_or(u64::MAX).min(budget.height_bound);
            (budget.n_max, Outcome::Exhausted { structure: structure_candidates(x, cap.max(1)) })
        }
    };
    Ok(DilationResult { decomposition: dec, eps_scan, scanned, outcome })
}
