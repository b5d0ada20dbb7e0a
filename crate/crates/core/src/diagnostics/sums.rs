use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::precise::{periodic_sum, periodic_sum_error, Complex, Fixed, RootCache};
use super::DiagnosticsError;
use crate::linalg::{denominator_lcm, Rational};
use crate::polymatrix::PolyMatrix;
use crate::torus::TorusPointSet;

/// Periods above this are refused rather than summed term by term.
pub const MAX_PERIOD: u64 = 1 << 20;

fn checked_period(b: BigInt) -> Result<u64, DiagnosticsError> {
    match b.to_u64() {
        Some(p) if p <= MAX_PERIOD => Ok(p),
        _ => Err(DiagnosticsError::PeriodTooLarge { period: b }),
    }
}

/// Integer coefficients `b c_d`, constant first, for `Phi = sum c_d r^d` with common denominator `b`.
fn integer_numerators(coeffs: &[Rational], b: &BigInt) -> Vec<BigInt> {
    coeffs.iter().map(|c| (c * Rational::from_integer(b.clone())).to_integer()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub period: u64,
    pub average: Complex,
    pub modulus: Fixed,
    #[serde(with = "crate::textual::real")]
    pub error_bound: f64,
}

/// Mean of `e(c_1 r + ... + c_d r^d)` over one period, which is its Cesaro limit.
pub fn weyl_average(coeffs: &[Rational]) -> Result<WeylReport, DiagnosticsError> {
    let mut full = vec![Rational::zero()];
    full.extend_from_slice(coeffs);
    let period = checked_period(denominator_lcm(&full))?;
    let (average, error_bound) = periodic_mean(&full, period, &mut RootCache::default());
    let modulus = average.modulus();
    Ok(WeylReport { period, average, modulus, error_bound })
}

fn periodic_mean(full: &[Rational], period: u64, cache: &mut RootCache) -> (Complex, f64) {
    let b = BigInt::from(period);
    let g = integer_numerators(full, &b);
    let mean = periodic_sum(&g, period, cache).div_int(&b);
    (mean, periodic_sum_error(period) / period as f64 + 2.0 * Fixed::ulp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuaReport {
    pub q: u64,
    pub degree: usize,
    pub modulus: Fixed,
    #[serde(with = "crate::textual::real")]
    pub ratio: f64,
}

/// `|sum_{r=1}^q e(f(r)/q)| / q^(1 - 1/d)` for `f` given constant term first.
pub fn hua_ratio(f: &[BigInt], q: u64) -> Result<HuaReport, DiagnosticsError> {
    if q == 0 {
        return Err(DiagnosticsError::BadModulus);
    }
    checked_period(BigInt::from(q))?;
    let degree = (1..f.len()).rev().find(|&d| !f[d].is_zero()).ok_or(DiagnosticsError::ConstantPolynomial)?;
    let gcd = f[1..].iter().fold(BigInt::from(q), |g, c| g.gcd(c));
    if !gcd.is_one() {
        return Err(DiagnosticsError::GcdViolation { gcd });
    }
    let modulus = periodic_sum(f, q, &mut RootCache::default()).modulus();
    let ratio = modulus.to_f64() / (q as f64).powf(1.0 - 1.0 / degree as f64);
    Ok(HuaReport { q, degree, modulus, ratio })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MTerm {
    pub m: Vec<i64>,
    /// Largest `d` with `B_d^t m != 0`; `None` when every coefficient vanishes.
    pub d_tilde: Option<usize>,
    /// `sum_{i,j}` of the periodic means.
    pub total: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainInequalityReport {
    pub ell: usize,
    pub k: usize,
    pub m_bound: u64,
    pub terms: Vec<MTerm>,
    /// Effective degree of `Phi_ij` (largest `d >= 1` with a non-integral
    /// coefficient, `0` if none) counted over all `(m, i, j)`.
    pub pair_degrees: BTreeMap<usize, u64>,
    pub total: Complex,
    /// `Re(total) / eps^ell`.
    #[serde(with = "crate::textual::real")]
    pub rhs: f64,
    #[serde(with = "crate::textual::option_real")]
    pub ratio: Option<f64>,
    #[serde(with = "crate::textual::real")]
    pub error_bound: f64,
}

fn lattice_box(ell: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..ell {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-bound..=bound).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.retain(|m| m.iter().any(|&v| v != 0));
    out
}

struct PairTerm {
    mean: Complex,
    degree: usize,
    error: f64,
}

fn pair_term(vs: &[Vec<BigInt>], diff: &[Rational], cache: &mut RootCache) -> Result<PairTerm, DiagnosticsError> {
    let coeffs: Vec<Rational> = vs
        .iter()
        .map(|v| diff.iter().zip(v).map(|(x, c)| x * Rational::from_integer(c.clone())).sum())
        .collect();
    let degree = (1..coeffs.len()).rev().find(|&d| !coeffs[d].is_integer()).unwrap_or(0);
    let period = checked_period(denominator_lcm(&coeffs))?;
    let (mean, error) = periodic_mean(&coeffs, period, cache);
    Ok(PairTerm { mean, degree, error })
}

/// Right-hand side `sum_{0 < |m| <= M} sum_{i,j} lim_R (1/R) sum_r e(m . B(r)(x_i - x_j))`
/// with `M = ceil(ell / eps)`, together with `k^2 / (RHS / eps^ell)`.
pub fn main_inequality_report(
    b: &PolyMatrix,
    x: &TorusPointSet,
    eps: &Rational,
) -> Result<MainInequalityReport, DiagnosticsError> {
    super::check_epsilon_closed(eps)?;
    if x.dim() != b.cols() {
        return Err(DiagnosticsError::DimensionMismatch { expected: b.cols(), found: x.dim() });
    }
    let ell = b.rows();
    let k = x.len();
    let m_bound = (Rational::from_integer(ell.into()) / eps).ceil().to_integer().to_u64().expect("M fits in u64");
    let transposed: Vec<_> = b.coeffs().iter().map(|c| c.transpose()).collect();
    let pts: Vec<&[Rational]> = x.iter().map(|p| p.coords()).collect();
    let diffs: Vec<Vec<Rational>> = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |c| a.iter().zip(c.iter()).map(|(u, v)| u - v).collect()))
        .collect();

    let per_m: Vec<Result<(MTerm, BTreeMap<usize, u64>, f64), DiagnosticsError>> = lattice_box(ell, m_bound as i64)
        .into_par_iter()
        .map(|m| {
            let mb: Vec<BigInt> = m.iter().map(|&v| BigInt::from(v)).collect();
            let vs: Vec<Vec<BigInt>> = transposed.iter().map(|t| t.mul_vec(&mb)).collect();
            let d_tilde = (0..vs.len()).rev().find(|&d| vs[d].iter().any(|c| !c.is_zero()));
            let mut cache = RootCache::default();
            let mut total = Complex::zero();
            let mut degrees = BTreeMap::new();
            let mut error = 0.0;
            for diff in &diffs {
                let t = pair_term(&vs, diff, &mut cache)?;
                total = total.add(&t.mean);
                *degrees.entry(t.degree).or_insert(0u64) += 1;
                error += t.error;
            }
            Ok((MTerm { m, d_tilde, total }, degrees, error))
        })
        .collect();

    let mut terms = Vec::with_capacity(per_m.len());
    let mut pair_degrees = BTreeMap::new();
    let mut total = Complex::zero();
    let mut error_bound = 0.0;
    for item in per_m {
        let (term, degrees, error) = item?;
        total = total.add(&term.total);
        for (d, c) in degrees {
            *pair_degrees.entry(d).or_insert(0) += c;
        }
        error_bound += error;
        terms.push(term);
    }
    let scale_num = num_traits::pow(eps.denom().clone(), ell);
    let scale_den = num_traits::pow(eps.numer().clone(), ell);
    let rhs_fixed = total.re.scale(&scale_num).div_int(&scale_den);
    let rhs = rhs_fixed.to_f64();
    error_bound *= scale_num.to_f64().unwrap_or(f64::INFINITY) / scale_den.to_f64().unwrap_or(1.0);
    let ratio = rhs_fixed.raw().is_positive().then(|| (k * k) as f64 / rhs);
    Ok(MainInequalityReport { ell, k, m_bound, terms, pair_degrees, total, rhs, ratio, error_bound })
}
