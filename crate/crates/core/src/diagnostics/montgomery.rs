use std::f64::consts::TAU;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{check_epsilon_closed, DiagnosticsError};
use crate::linalg::Rational;
use crate::torus::{dist_to_integer, frac};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MontgomeryReport {
    pub k: usize,
    pub ell: usize,
    pub m_bound: u64,
    /// `k / 3`.
    #[serde(with = "crate::textual::rational")]
    pub lhs: Rational,
    /// `sum over 0 < ||m|| <= M of |sum_i e(m . xi_i)|`.
    #[serde(with = "crate::textual::real")]
    pub rhs: f64,
    pub pass: bool,
}

/// Both sides of the lower bound `k/3 <= sum_m |sum_i e(m . xi_i)|` with
/// `M = floor(ell / eps)`, for points at sup distance at least `eps` from `Z^ell`.
pub fn montgomery_check(points: &[Vec<Rational>], eps: &Rational) -> Result<MontgomeryReport, DiagnosticsError> {
    check_epsilon_closed(eps)?;
    let first = points.first().ok_or(DiagnosticsError::EmptyInput)?;
    let ell = first.len();
    if ell == 0 {
        return Err(DiagnosticsError::EmptyInput);
    }
    for (index, p) in points.iter().enumerate() {
        if p.len() != ell {
            return Err(DiagnosticsError::DimensionMismatch { expected: ell, found: p.len() });
        }
        let norm = p.iter().map(dist_to_integer).max().expect("nonempty");
        if norm < *eps {
            return Err(DiagnosticsError::PreconditionViolated { index });
        }
    }
    let m_bound = (Rational::from_integer(ell.into()) / eps).floor().to_integer().to_u64().expect("M fits in u64");
    let m = m_bound as i64;
    let width = (2 * m + 1) as usize;

    // phases[c][i][m + M] = e(m xi_{i,c}), reduced exactly before going to f64
    let phases: Vec<Vec<Vec<(f64, f64)>>> = (0..ell)
        .map(|c| {
            points
                .iter()
                .map(|p| {
                    (-m..=m)
                        .map(|mm| {
                            let t = frac(&(&p[c] * Rational::from_integer(mm.into()))).to_f64().unwrap_or(0.0);
                            let (s, co) = (TAU * t).sin_cos();
                            (co, s)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let total = width.pow(ell as u32);
    let mut rhs = 0.0;
    let mut idx = vec![0usize; ell];
    for _ in 0..total {
        if idx.iter().any(|&v| v as i64 != m) {
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..points.len() {
                let (mut pr, mut pi) = (1.0, 0.0);
                for (c, &v) in idx.iter().enumerate() {
                    let (a, b) = phases[c][i][v];
                    (pr, pi) = (pr * a - pi * b, pr * b + pi * a);
                }
                re += pr;
                im += pi;
            }
            rhs += re.hypot(im);
        }
        for v in idx.iter_mut().rev() {
            *v += 1;
            if *v < width {
                break;
            }
            *v = 0;
        }
    }
    let k = points.len();
    let lhs = Rational::new(k.into(), 3.into());
    let pass = lhs.to_f64().unwrap_or(f64::INFINITY) <= rhs + 1e-9;
    Ok(MontgomeryReport { k, ell, m_bound, lhs, rhs, pass })
}
