//! Deterministic scenario generators.

use anyhow::{ensure, Result};
use dilations::linalg::{MatZ, Rational};
use dilations::polymatrix::{example_degenerate, example_shifted_diagonal, PolyMatrix};
use dilations::torus::TorusPointSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Point sets larger than this are refused by the generators.
pub const MAX_POINTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub matrix: PolyMatrix,
    pub points: TorusPointSet,
    #[serde(with = "dilations::textual::rational")]
    pub eps: Rational,
    pub expected: Option<String>,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `[[x, 0], [0, 0]]` with `(0, i/den)` for `i < count`.
pub fn example1(count: usize, den: u64, eps: Rational) -> Result<Scenario> {
    ensure!(count >= 1 && den >= 1, "count and denominator must be positive");
    ensure!(4 * (count as u64 - 1) <= den, "points must stay within |x| <= 1/4; raise the denominator");
    let pts: Vec<Vec<Rational>> =
        (0..count).map(|i| vec![Rational::zero(), Rational::new(i.into(), den.into())]).collect();
    Ok(Scenario {
        name: "example1".into(),
        matrix: example_degenerate(),
        points: TorusPointSet::from_rationals(2, &pts)?,
        eps,
        expected: Some("condition_violated".into()),
    })
}

/// `[[x, 0], [0, x + 1]]` with `(1/j, 1/j)` for `2 <= j <= count + 1`.
pub fn example2(count: usize, eps: Rational) -> Result<Scenario> {
    ensure!(count >= 1, "count must be positive");
    let pts: Vec<Vec<Rational>> = (2..=count as i64 + 1).map(|j| vec![q(1, j), q(1, j)]).collect();
    Ok(Scenario {
        name: "example2".into(),
        matrix: example_shifted_diagonal(),
        points: TorusPointSet::from_rationals(2, &pts)?,
        eps,
        expected: Some("condition_b_fails".into()),
    })
}

/// Reduced fractions in `[0, 1)` with denominator at most `m`, in increasing order.
pub fn farey(m: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=m)
        .flat_map(|d| (0..d).filter(move |&p| p.gcd(&d) == 1).map(move |p| q(p as i64, d as i64)))
        .collect();
    out.sort();
    out
}

fn product(base: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                base.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// `X = F_m^N` with `A(x) = x P`, `P` the projection onto the first `L` coordinates.
pub fn farey_scenario(m: u64, n: usize, l: usize, eps: Rational) -> Result<Scenario> {
    ensure!(m >= 2, "Farey order must be at least 2");
    ensure!(n >= l && l >= 1, "need N >= L >= 1");
    let base = farey(m);
    let size = (base.len() as f64).powi(n as i32);
    ensure!(size <= MAX_POINTS as f64, "|F_m|^N = {size} exceeds {MAX_POINTS} points");
    let mut p = MatZ::zeros(l, n);
    for i in 0..l {
        p.set(i, i, BigInt::one());
    }
    Ok(Scenario {
        name: "farey".into(),
        matrix: PolyMatrix::new(vec![MatZ::zeros(l, n), p])?,
        points: TorusPointSet::from_rationals(n, &product(&base, n))?,
        eps,
        expected: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvoidedCube {
    /// Largest `delta` with no point of any `n P X` (`n <= n_max`) in `(0, delta)^L`.
    #[serde(with = "dilations::textual::rational")]
    pub delta: Rational,
    /// A point attaining `delta`, with its dilation factor; absent when `delta = 1`.
    pub attained_at: Option<(u64, Vec<String>)>,
}

/// Measures the corner cube `(0, delta)^L` avoided by `n F_m^L` for `n = 1..=n_max`.
pub fn farey_avoided_cube(m: u64, l: usize, n_max: u64) -> AvoidedCube {
    let base = farey(m);
    let mut delta = Rational::one();
    let mut attained_at = None;
    // points with a zero coordinate never enter the open cube, so only nonzero residues matter
    let residues: Vec<Rational> = base.into_iter().filter(|v| !v.is_zero()).collect();
    for n in 1..=n_max {
        let nn = Rational::from_integer(n.into());
        let scaled: Vec<Rational> = residues.iter().map(|v| dilations::torus::frac(&(v * &nn))).collect();
        // max over coordinates is minimized by taking every coordinate equal to the smallest nonzero value
        if let Some(smallest) = scaled.iter().filter(|v| !v.is_zero()).min() {
            if *smallest < delta {
                delta = smallest.clone();
                let source = residues[scaled.iter().position(|v| v == smallest).expect("present")].to_string();
                attained_at = Some((n, vec![source; l]));
            }
        }
    }
    AvoidedCube { delta, attained_at }
}

/// Coordinates `p/q` with `q` uniform in `[1, max_den]` and `p` uniform in `[0, q)`.
pub fn random_points(dim: usize, count: usize, max_den: u64, seed: u64) -> Result<TorusPointSet> {
    ensure!(dim >= 1 && count >= 1 && max_den >= 1, "dim, count and max denominator must be positive");
    ensure!(count <= MAX_POINTS, "count exceeds {MAX_POINTS}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<Rational>> = (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let den = rng.gen_range(1..=max_den);
                    Rational::new(rng.gen_range(0..den).into(), den.into())
                })
                .collect()
        })
        .collect();
    Ok(TorusPointSet::from_rationals(dim, &pts)?)
}

pub fn random_scenario(dim: usize, count: usize, max_den: u64, seed: u64, eps: Rational) -> Result<Scenario> {
    Ok(Scenario {
        name: "random".into(),
        matrix: PolyMatrix::new(vec![MatZ::zeros(dim, dim), MatZ::identity(dim)])?,
        points: random_points(dim, count, max_den, seed)?,
        eps,
        expected: None,
    })
}
