//! Binary fixed-point reals and complex numbers on `BigInt`, enough for
//! roots of unity and periodic exponential sums far below `1e-30` error.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::linalg::Rational;

pub const FRAC_BITS: u32 = 320;

/// `value = raw / 2^FRAC_BITS`. Multiplication rounds toward negative infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Fixed(n.into() << FRAC_BITS)
    }

    pub fn from_rational(r: &Rational) -> Self {
        Fixed((r.numer() << FRAC_BITS).div_floor(r.denom()))
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }

    pub fn scale(&self, n: &BigInt) -> Fixed {
        Fixed(&self.0 * n)
    }

    pub fn div_int(&self, n: &BigInt) -> Fixed {
        Fixed(self.0.div_floor(n))
    }

    /// Floor of the square root; `self` must be nonnegative.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative(), "square root of a negative value");
        Fixed((&self.0 << FRAC_BITS).sqrt())
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before converting
        let shift = self.0.bits().saturating_sub(64);
        let top = (&self.0 >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - FRAC_BITS as i32)
    }

    /// Decimal expansion truncated to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.0.sign() == Sign::Minus;
        let mag = self.0.abs();
        let int = &mag >> FRAC_BITS;
        let frac = &mag - (&int << FRAC_BITS);
        let scaled = (frac * BigInt::from(10u32).pow(digits as u32)) >> FRAC_BITS;
        let body = format!("{int}.{scaled:0>digits$}");
        if neg && !(int.is_zero() && scaled.is_zero()) {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Value of one unit in the last place.
    pub fn ulp() -> f64 {
        2f64.powi(-(FRAC_BITS as i32))
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(40))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Complex {
    pub re: Fixed,
    pub im: Fixed,
}

impl Complex {
    pub fn zero() -> Self {
        Complex { re: Fixed::zero(), im: Fixed::zero() }
    }

    pub fn one() -> Self {
        Complex { re: Fixed::from_int(1), im: Fixed::zero() }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Complex {
        Complex { re: self.re.scale(n), im: self.im.scale(n) }
    }

    pub fn div_int(&self, n: &BigInt) -> Complex {
        Complex { re: self.re.div_int(n), im: self.im.div_int(n) }
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn modulus(&self) -> Fixed {
        self.norm_sqr().sqrt()
    }
}

fn arctan_inverse(x: u32) -> Fixed {
    // sum (-1)^k / ((2k+1) x^(2k+1))
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = Fixed::from_int(1).div_int(&x);
    let mut total = Fixed::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = power.div_int(&BigInt::from(2 * k + 1));
        total = if k % 2 == 0 { total.add(&term) } else { total.sub(&term) };
        power = power.div_int(&x2);
        k += 1;
    }
    total
}

pub fn pi() -> &'static Fixed {
    static PI: OnceLock<Fixed> = OnceLock::new();
    PI.get_or_init(|| {
        // Machin: pi/4 = 4 atan(1/5) - atan(1/239)
        arctan_inverse(5).scale(&BigInt::from(16)).sub(&arctan_inverse(239).scale(&BigInt::from(4)))
    })
}

/// `(cos t, sin t)` by Taylor series; intended for `|t| <= 2 pi`.
pub fn cos_sin(t: &Fixed) -> (Fixed, Fixed) {
    let mut cos = Fixed::zero();
    let mut sin = Fixed::zero();
    let mut term = Fixed::from_int(1);
    let mut k = 0u32;
    while !term.is_zero() || k < 2 {
        match k % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        k += 1;
        term = term.mul(t).div_int(&BigInt::from(k));
    }
    (cos, sin)
}

/// `e(1/b) = exp(2 pi i / b)`.
pub fn root_of_unity(b: &BigInt) -> Complex {
    assert!(b.is_positive(), "order must be positive");
    if b.is_one() {
        return Complex::one();
    }
    let angle = pi().scale(&BigInt::from(2)).div_int(b);
    let (re, im) = cos_sin(&angle);
    Complex { re, im }
}

/// Powers `e(j/b)` for `j < b`, cached per `b`.
#[derive(Default)]
pub struct RootCache {
    tables: HashMap<u64, Vec<Complex>>,
}

impl RootCache {
    pub fn powers(&mut self, b: u64) -> &[Complex] {
        self.tables.entry(b).or_insert_with(|| {
            let zeta = root_of_unity(&BigInt::from(b));
            let mut out = Vec::with_capacity(b as usize);
            let mut cur = Complex::one();
            for _ in 0..b {
                out.push(cur.clone());
                cur = cur.mul(&zeta);
            }
            out
        })
    }
}

/// Residue counts of `g(r) mod b` for `r = 1..=b`, where `g` has integer
/// coefficients listed from the constant term up.
pub fn residue_histogram(g: &[BigInt], b: u64) -> Vec<u64> {
    let bb = BigInt::from(b);
    let reduced: Vec<u128> = g.iter().map(|c| c.mod_floor(&bb).to_u128().expect("reduced below b")).collect();
    let b128 = b as u128;
    let mut counts = vec![0u64; b as usize];
    for r in 1..=b128 {
        let rr = r % b128;
        let mut acc = 0u128;
        for c in reduced.iter().rev() {
            acc = (acc * rr + c) % b128;
        }
        counts[acc as usize] += 1;
    }
    counts
}

/// `sum_{r=1}^{b} e(g(r) / b)`.
pub fn periodic_sum(g: &[BigInt], b: u64, cache: &mut RootCache) -> Complex {
    let counts = residue_histogram(g, b);
    let powers = cache.powers(b);
    let mut total = Complex::zero();
    for (j, &c) in counts.iter().enumerate() {
        if c != 0 {
            total = total.add(&powers[j].scale(&BigInt::from(c)));
        }
    }
    total
}

/// Generous bound on the accumulated rounding error of a periodic sum over `b` terms.
pub fn periodic_sum_error(b: u64) -> f64 {
    // each power carries O(j) ulps, each count multiplies it
    (b as f64 + 16.0) * (b as f64 + 16.0) * 64.0 * Fixed::ulp()
}
