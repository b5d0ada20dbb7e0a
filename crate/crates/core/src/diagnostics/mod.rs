//! Desk-scale checks of the counting and exponential-sum inequalities.

mod montgomery;
pub mod precise;
mod sums;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Rational;
use crate::torus::TorusPointSet;

pub use montgomery::{montgomery_check, MontgomeryReport};
pub use sums::{hua_ratio, main_inequality_report, weyl_average, HuaReport, MainInequalityReport, MTerm, WeylReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagnosticsError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficients share the factor {gcd} with the modulus")]
    GcdViolation { gcd: BigInt },
    #[error("polynomial has no nonconstant term")]
    ConstantPolynomial,
    #[error("modulus must be positive")]
    BadModulus,
    #[error("point {index} lies closer than epsilon to the integer lattice")]
    PreconditionViolated { index: usize },
    #[error("epsilon must lie in (0, 1/2], got {0}")]
    BadEpsilon(Rational),
    #[error("input is empty")]
    EmptyInput,
    #[error("period {period} exceeds the supported limit")]
    PeriodTooLarge { period: BigInt },
    #[error("{0}")]
    BadArgument(String),
}

pub(crate) fn check_epsilon_closed(eps: &Rational) -> Result<(), DiagnosticsError> {
    let half = Rational::new(BigInt::one(), 2.into());
    if *eps > Rational::from_integer(0.into()) && *eps <= half {
        Ok(())
    } else {
        Err(DiagnosticsError::BadEpsilon(eps.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub k: usize,
    /// `h[m-1] = #{(i, j) : m (x_i - x_j) in Z}`.
    pub h: Vec<u64>,
    /// Prefix sums of `h`.
    pub cumulative: Vec<u64>,
}

impl PairCounts {
    /// `H_m <= k m^2` for every computed `m`.
    pub fn within_count_bound(&self) -> bool {
        self.cumulative.iter().enumerate().all(|(i, &hm)| {
            let m = (i + 1) as u128;
            (hm as u128) <= self.k as u128 * m * m
        })
    }
}

/// `m (x_i - x_j)` is integral iff the reduced denominator of the difference divides `m`.
pub fn pair_counts(x: &TorusPointSet, m_max: usize) -> Result<PairCounts, DiagnosticsError> {
    if x.dim() != 1 {
        return Err(DiagnosticsError::DimensionMismatch { expected: 1, found: x.dim() });
    }
    if m_max == 0 {
        return Err(DiagnosticsError::BadArgument("M must be positive".into()));
    }
    let mut by_denominator: BTreeMap<u64, u64> = BTreeMap::new();
    for a in x.iter() {
        for b in x.iter() {
            let den = (&a.coords()[0] - &b.coords()[0]).denom().to_u64();
            if let Some(d) = den.filter(|&d| d as usize <= m_max) {
                *by_denominator.entry(d).or_default() += 1;
            }
        }
    }
    let h: Vec<u64> = (1..=m_max as u64)
        .map(|m| by_denominator.iter().filter(|&(&d, _)| m % d == 0).map(|(_, &c)| c).sum())
        .collect();
    let cumulative = h
        .iter()
        .scan(0u64, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    Ok(PairCounts { k: x.len(), h, cumulative })
}

/// `(sum_b s_b b^(-1/D)) / k^(2 - 1/(2D))` with `s[0]` standing for `s_2`.
pub fn corollary_ratio(s: &[u64], k: u64, degree: u32) -> Result<f64, DiagnosticsError> {
    if k == 0 || degree == 0 {
        return Err(DiagnosticsError::BadArgument("k and D must be positive".into()));
    }
    let d = degree as f64;
    let weighted: f64 = s.iter().enumerate().map(|(i, &sb)| sb as f64 * ((i + 2) as f64).powf(-1.0 / d)).sum();
    Ok(weighted / (k as f64).powf(2.0 - 1.0 / (2.0 * d)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub n: u32,
    #[serde(with = "biguint_string")]
    pub c1: BigUint,
    #[serde(with = "biguint_string")]
    pub c2: BigUint,
    /// `c1 <= (20 D)^n L^(n+1)` and `c2 <= (20 D L)^n`.
    pub within_closed_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentTable {
    pub l: u32,
    pub d: u32,
    pub rows: Vec<ExponentRow>,
}

impl ExponentTable {
    pub fn get(&self, n: u32) -> Option<(&BigUint, &BigUint)> {
        self.rows.iter().find(|r| r.n == n).map(|r| (&r.c1, &r.c2))
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Exponents `c1(n, L, D)`, `c2(n, L, D)` for `n = 1..=N`.
pub fn exponent_table(n: u32, l: u32, d: u32) -> Result<ExponentTable, DiagnosticsError> {
    if n == 0 || l == 0 || d == 0 {
        return Err(DiagnosticsError::BadArgument("N, L and D must be at least 1".into()));
    }
    let lb = BigUint::from(l);
    let four_d = BigUint::from(4 * d);
    let mut c1 = &four_d * (&lb * (&lb + 1u32) + 1u32);
    let mut c2 = &four_d * (&lb + 1u32);
    let mut rows = Vec::with_capacity(n as usize);
    for level in 1..=n {
        if level > 1 {
            let next_c2 = &four_d * (&c1 + &c2 + &lb + 1u32);
            let next_c1 = &lb * &next_c2 + &four_d * (&c1 + 1u32);
            c1 = next_c1;
            c2 = next_c2;
        }
        let cd = BigUint::from(20 * d);
        let bound1 = num_traits::pow(cd.clone(), level as usize) * num_traits::pow(lb.clone(), level as usize + 1);
        let bound2 = num_traits::pow(cd * &lb, level as usize);
        rows.push(ExponentRow { n: level, c1: c1.clone(), c2: c2.clone(), within_closed_bound: c1 <= bound1 && c2 <= bound2 });
    }
    Ok(ExponentTable { l, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn line(vals: &[Rational]) -> TorusPointSet {
        TorusPointSet::from_rationals(1, &vals.iter().map(|v| vec![v.clone()]).collect::<Vec<_>>()).unwrap()
    }

    fn brute_h(x: &TorusPointSet, m: i64) -> u64 {
        let mut c = 0;
        for a in x.iter() {
            for b in x.iter() {
                if ((&a.coords()[0] - &b.coords()[0]) * Rational::from_integer(m.into())).is_integer() {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn pair_count_examples() {
        let x = line(&[q(0, 1), q(1, 2), q(1, 3)]);
        let pc = pair_counts(&x, 3).unwrap();
        assert_eq!(pc.h, vec![3, 5, 5]);
        assert_eq!(pc.cumulative[2], 13);
        let single = pair_counts(&line(&[q(0, 1)]), 7).unwrap();
        assert!(single.h.iter().all(|&v| v == 1));
        let plane = TorusPointSet::from_rationals(2, &[vec![q(0, 1), q(0, 1)]]).unwrap();
        assert!(matches!(pair_counts(&plane, 3), Err(DiagnosticsError::DimensionMismatch { .. })));
    }

    #[test]
    fn exponent_examples() {
        let t = exponent_table(2, 1, 1).unwrap();
        assert_eq!(t.get(1), Some((&BigUint::from(12u32), &BigUint::from(8u32))));
        assert_eq!(t.get(2), Some((&BigUint::from(140u32), &BigUint::from(88u32))));
        for l in 1..=5u32 {
            for d in 1..=5u32 {
                let t = exponent_table(1, l, d).unwrap();
                assert_eq!(t.rows[0].c1, BigUint::from(4 * d * (l * (l + 1) + 1)));
                assert_eq!(t.rows[0].c2, BigUint::from(4 * d * (l + 1)));
            }
        }
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_ratio(&[0, 0, 0], 9, 2).unwrap(), 0.0);
        let k = 16u64;
        let r = corollary_ratio(&[k * k], k, 1).unwrap();
        assert!((r - (k as f64).sqrt() / 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pair_counts_match_brute_force(vals in proptest::collection::vec((0i64..40, 1i64..41), 1..25), m_max in 1usize..30) {
            let x = line(&vals.iter().map(|&(n, d)| q(n % d, d)).collect::<Vec<_>>());
            let pc = pair_counts(&x, m_max).unwrap();
            for m in 1..=m_max {
                prop_assert_eq!(pc.h[m - 1], brute_h(&x, m as i64));
                prop_assert!(pc.h[m - 1] >= x.len() as u64);
            }
            prop_assert!(pc.within_count_bound());
        }

        #[test]
        fn exponents_are_monotone(n in 1u32..6, l in 1u32..6, d in 1u32..6) {
            let base = exponent_table(n + 1, l, d).unwrap();
            let up_l = exponent_table(n, l + 1, d).unwrap();
            let up_d = exponent_table(n, l, d + 1).unwrap();
            let (c1, c2) = base.get(n).unwrap();
            let (c1n, c2n) = base.get(n + 1).unwrap();
            prop_assert!(c1n > c1 && c2n > c2);
            prop_assert!(up_l.get(n).unwrap().0 > c1 && up_l.get(n).unwrap().1 > c2);
            prop_assert!(up_d.get(n).unwrap().0 > c1 && up_d.get(n).unwrap().1 > c2);
        }
    }
}
