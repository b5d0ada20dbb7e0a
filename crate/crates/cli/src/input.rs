//! Text formats for rationals, point sets, polynomial matrices and small polynomials.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, ensure, Context, Result};
use dilations::linalg::{MatZ, Rational};
use dilations::polymatrix::PolyMatrix;
use dilations::torus::{frac, TorusPointSet};
use num_bigint::BigInt;

/// Parses `-?[0-9]+(/[1-9][0-9]*)?` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    ensure!(!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()), "malformed rational {s:?}");
    let numer: BigInt = num.parse().with_context(|| format!("malformed rational {s:?}"))?;
    let denom = match den {
        None => BigInt::from(1),
        Some(d) => {
            ensure!(
                d.bytes().next().is_some_and(|b| (b'1'..=b'9').contains(&b)) && d.bytes().all(|b| b.is_ascii_digit()),
                "malformed denominator in {s:?}"
            );
            d.parse()?
        }
    };
    Ok(Rational::new(numer, denom))
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().with_context(|| format!("malformed integer {t:?}")))
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// One point per line as whitespace-separated rationals; coordinates are kept as written.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<Rational>>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for (line_no, line) in content_lines(text) {
        let v = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {line_no}"))?;
        if let Some(first) = out.first() {
            ensure!(first.len() == v.len(), "line {line_no}: expected {} coordinates, found {}", first.len(), v.len());
        }
        out.push(v);
    }
    ensure!(!out.is_empty(), "point file has no points");
    Ok(out)
}

/// Reads a point file and reduces every coordinate mod 1.
pub fn parse_points(text: &str) -> Result<TorusPointSet> {
    let vectors = parse_vectors(text)?;
    let dim = vectors[0].len();
    let reduced: Vec<Vec<Rational>> = vectors.iter().map(|v| v.iter().map(frac).collect()).collect();
    Ok(TorusPointSet::from_rationals(dim, &reduced)?)
}

pub fn format_points(x: &TorusPointSet) -> String {
    let mut out = String::new();
    for p in x.iter() {
        let line: Vec<String> = p.coords().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Header `L N D`, then `D + 1` blocks of `L` rows with `N` integers, `A_0` first.
pub fn parse_matrix(text: &str) -> Result<PolyMatrix> {
    let mut lines = content_lines(text);
    let (_, header) = lines.next().ok_or_else(|| anyhow!("matrix file is empty"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().with_context(|| format!("malformed header {header:?}")))
        .collect::<Result<_>>()?;
    let [rows, cols, degree] = dims[..] else { bail!("header must be `L N D`, found {header:?}") };
    ensure!(rows > 0 && cols > 0, "matrix dimensions must be positive");
    let mut coeffs = Vec::with_capacity(degree + 1);
    for d in 0..=degree {
        let mut block = Vec::with_capacity(rows);
        for _ in 0..rows {
            let (line_no, line) = lines.next().ok_or_else(|| anyhow!("block {d} is incomplete"))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().with_context(|| format!("line {line_no}: malformed integer {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            ensure!(row.len() == cols, "line {line_no}: expected {cols} entries, found {}", row.len());
            block.push(row);
        }
        coeffs.push(MatZ::from_rows(cols, block));
    }
    if let Some((line_no, _)) = lines.next() {
        bail!("line {line_no}: unexpected content after the last block");
    }
    Ok(PolyMatrix::new(coeffs)?)
}

pub fn format_matrix(a: &PolyMatrix) -> String {
    let mut out = format!("{} {} {}\n", a.rows(), a.cols(), a.degree());
    for (d, c) in a.coeffs().iter().enumerate() {
        let _ = writeln!(out, "# A_{d}");
        for r in 0..c.rows() {
            let row: Vec<String> = c.row(r).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

/// Integer polynomial in `r` such as `3r^3 - r + 2`; returns coefficients constant first.
pub fn parse_poly(s: &str) -> Result<Vec<BigInt>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    ensure!(!compact.is_empty(), "empty polynomial");
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        ensure!(!body.is_empty(), "dangling sign in {s:?}");
        let (coef, power) = match body.split_once('r') {
            None => (body, 0usize),
            Some((c, rest)) => {
                let power = match rest {
                    "" => 1,
                    p => p.strip_prefix('^').ok_or_else(|| anyhow!("malformed term {term:?}"))?.parse()?,
                };
                (c.strip_suffix('*').unwrap_or(c), power)
            }
        };
        let value: BigInt = if coef.is_empty() {
            BigInt::from(1)
        } else {
            coef.parse().with_context(|| format!("malformed coefficient in {term:?}"))?
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::from(0));
        }
        coeffs[power] += value * sign;
    }
    Ok(coeffs)
}
