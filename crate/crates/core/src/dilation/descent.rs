use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{search_poly_dilation, DilationError, Outcome, SearchBudget, SearchOptions, StructureWitness};
use crate::linalg::{perp_basis, saturate_columns, to_rational, MatZ, Rational};
use crate::polymatrix::PolyMatrix;
use crate::torus::{frac, integer_dot, normalize, SubtorusTranslate, TorusPoint, TorusPointSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentLevel {
    pub level: usize,
    pub dim: usize,
    pub points: usize,
    pub matrix: PolyMatrix,
    pub ell: usize,
    #[serde(with = "crate::textual::bigint")]
    pub q: BigInt,
    pub qt: MatZ,
    #[serde(with = "crate::textual::rational")]
    pub eps_scan: Rational,
    pub scanned: u64,
    pub found_n: Option<u64>,
    pub structure: Option<StructureWitness>,
    /// `H` with columns spanning `w^perp`, used to reach the next level.
    pub perp: Option<MatZ>,
    #[serde(with = "crate::textual::rational_vec")]
    pub shift: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DescentOutcome {
    /// `A(n) Y` is eps-dense in `subtorus`, where `Y` is the part of the
    /// input that survived every restriction.
    Found {
        level: usize,
        n: u64,
        subtorus: SubtorusTranslate,
        #[serde(with = "crate::textual::rational")]
        eps_ambient: Rational,
        covered: TorusPointSet,
    },
    Exhausted {
        level: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub levels: Vec<DescentLevel>,
    pub outcome: DescentOutcome,
}

/// Finite subgroup `{H^{-1} s mod 1}` for `s` in the saturation of `Im H`,
/// in the coordinates `c_j = s_j / w_p` (`j != p`) of the perp basis.
fn preimage_torsion(h: &MatZ, pivot: usize, wp: &BigInt) -> Vec<Vec<Rational>> {
    let wp = Rational::from_integer(wp.clone());
    let gens: Vec<Vec<Rational>> = saturate_columns(h)
        .columns()
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .filter(|&(j, _)| j != pivot)
                .map(|(_, v)| frac(&(Rational::from_integer(v.clone()) / &wp)))
                .collect()
        })
        .collect();
    let mut group: BTreeSet<Vec<Rational>> = BTreeSet::new();
    group.insert(vec![Rational::zero(); h.cols()]);
    let mut frontier: Vec<Vec<Rational>> = group.iter().cloned().collect();
    while let Some(g) = frontier.pop() {
        for gen in &gens {
            let next: Vec<Rational> = g.iter().zip(gen).map(|(a, b)| frac(&(a + b))).collect();
            if group.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    group.into_iter().collect()
}

struct Restriction {
    perp: MatZ,
    shift: Vec<Rational>,
    preimages: TorusPointSet,
    /// Input indices (at this level) of the points that were kept.
    kept: Vec<usize>,
}

/// Writes each `y` in `Y` as `H z + shift` with `z` in `T^{N-1}`, choosing the
/// lexicographically smallest `z` in `[0,1)^{N-1}`.
fn restrict(x: &TorusPointSet, s: &StructureWitness) -> Result<Restriction, DilationError> {
    let pb = perp_basis(&s.w).map_err(|_| DilationError::ZeroVector)?;
    let p = pb.pivot;
    let wp = s.w[p].clone();
    let wpq = Rational::from_integer(wp.clone());
    let level = integer_dot(&s.w, &s.y0) + Rational::from_integer(s.j.clone());
    let mut shift = vec![Rational::zero(); x.dim()];
    shift[p] = &level / &wpq;
    let torsion = preimage_torsion(&pb.h, p, &wp);

    let mut kept = Vec::new();
    let mut zs = Vec::new();
    for (i, y) in x.iter().enumerate() {
        if !s.y.points().contains(y) {
            continue;
        }
        let base: Vec<Rational> = y
            .coords()
            .iter()
            .zip(&shift)
            .enumerate()
            .filter(|&(j, _)| j != p)
            .map(|(_, (a, b))| (a - b) / &wpq)
            .collect();
        let z = torsion
            .iter()
            .map(|g| normalize(&base.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .min()
            .expect("group contains zero");
        kept.push(i);
        zs.push(z);
    }
    let preimages = TorusPointSet::new(x.dim() - 1, zs)?;
    Ok(Restriction { perp: pb.h, shift, preimages, kept })
}

/// Repeats the polynomial search, restricting to `w^perp` after each failure
/// that comes with a structure witness.
pub fn inductive_descent(
    a: &PolyMatrix,
    x: &TorusPointSet,
    eps: &Rational,
    budget: SearchBudget,
    options: SearchOptions,
) -> Result<DescentReport, DilationError> {
    let mut levels = Vec::new();
    let mut current_a = a.clone();
    let mut current_x = x.clone();
    // original point = total_h * z + total_shift (mod Z^N), for z at this level
    let mut total_h = MatZ::identity(a.cols());
    let mut total_shift = vec![Rational::zero(); a.cols()];
    let mut original: Vec<TorusPoint> = x.points().to_vec();

    loop {
        let level = levels.len();
        let r = search_poly_dilation(&current_a, &current_x, eps, budget, options)?;
        let mut record = DescentLevel {
            level,
            dim: current_x.dim(),
            points: current_x.len(),
            matrix: current_a.clone(),
            ell: r.decomposition.ell,
            q: r.decomposition.q.clone(),
            qt: r.decomposition.qt.clone(),
            eps_scan: r.eps_scan.clone(),
            scanned: r.scanned,
            found_n: r.found_n(),
            structure: None,
            perp: None,
            shift: Vec::new(),
        };
        match r.outcome {
            Outcome::Found { n, subtorus, eps_ambient } => {
                let offset = to_rational(&a.evaluate(&BigInt::from(n))).mul_vec(&total_shift);
                let subtorus = SubtorusTranslate::new(subtorus.basis(), normalize(&offset))?;
                levels.push(record);
                let covered = TorusPointSet::new(x.dim(), original)?;
                return Ok(DescentReport {
                    levels,
                    outcome: DescentOutcome::Found { level, n, subtorus, eps_ambient, covered },
                });
            }
            Outcome::Exhausted { structure } => {
                let Some(s) = structure.filter(|_| current_x.dim() > 1) else {
                    levels.push(record);
                    return Ok(DescentReport { levels, outcome: DescentOutcome::Exhausted { level } });
                };
                let step = restrict(&current_x, &s)?;
                record.structure = Some(s);
                record.perp = Some(step.perp.clone());
                record.shift = step.shift.clone();
                levels.push(record);
                if step.preimages.len() < 2 {
                    return Err(DilationError::DescentStalled { level, points: step.preimages.len() });
                }
                let lifted = to_rational(&total_h).mul_vec(&step.shift);
                total_shift = total_shift.iter().zip(&lifted).map(|(a, b)| a + b).collect();
                total_h = total_h.mul(&step.perp);
                original = step.kept.iter().map(|&i| original[i].clone()).collect();
                current_a = current_a.restrict_through(&step.perp)?;
                current_x = step.preimages;
            }
        }
    }
}
