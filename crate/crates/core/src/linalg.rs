//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] and [`Rational`]; there is no
//! floating point. Elimination is fraction-free (Bareiss) so intermediate
//! entries stay bounded by minors of the input, and integer lattices are
//! handled through a row Hermite normal form with a unimodular transform.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatZ = Matrix<BigInt>;
pub type MatQ = Matrix<Rational>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length must equal rows * cols");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed so that zero-row matrices keep a width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in columns {
                assert_eq!(col.len(), rows, "ragged columns");
                data.push(col[r].clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Self::from_rows(self.cols, rows)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<T>> = idx.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(self.rows, &cols)
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hstack(blocks: &[Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                assert_eq!(b.rows, rows, "hstack row mismatch");
                data.extend_from_slice(b.row(r));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    /// Matrix product. Panics on a shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k) * rhs.get(k, c);
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: rhs.cols, data }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }
}

impl<T> std::ops::Add for &Matrix<T>
where
    T: Clone,
    for<'a> &'a T: std::ops::Add<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

// Serialized as {"rows", "cols", "entries": [[..], ..]} with every scalar as a
// string, so integers of any size and rationals ("p/q") survive JSON intact.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl<T: fmt::Display + Clone> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect();
        MatrixRepr { rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de, T> Deserialize<'de> for Matrix<T>
where
    T: FromStr + Clone,
    T::Err: fmt::Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows {
            return Err(D::Error::custom("row count does not match entries"));
        }
        let mut data = Vec::with_capacity(repr.rows * repr.cols);
        for row in &repr.entries {
            if row.len() != repr.cols {
                return Err(D::Error::custom("column count does not match entries"));
            }
            for e in row {
                data.push(e.parse::<T>().map_err(D::Error::custom)?);
            }
        }
        Ok(Matrix { rows: repr.rows, cols: repr.cols, data })
    }
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x * y)
}

/// Largest absolute entry; zero for an empty matrix.
pub fn sup_norm(m: &MatZ) -> BigInt {
    sup_norm_vec(m.entries())
}

pub fn sup_norm_vec(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
}

/// Operator norm for the sup norm: the largest absolute row sum.
pub fn row_sum_norm(m: &MatZ) -> BigInt {
    (0..m.rows()).map(|r| m.row(r).iter().map(Signed::abs).sum::<BigInt>()).max().unwrap_or_else(BigInt::zero)
}

pub fn to_rational(m: &MatZ) -> MatQ {
    m.map(|x| Rational::from_integer(x.clone()))
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Clears denominators and divides out the content, giving a primitive
/// integer vector on the same rational line. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Row-scales a rational matrix to an integer matrix with the same row space.
fn scale_rows_to_integers(m: &MatQ) -> MatZ {
    let rows = (0..m.rows()).map(|r| {
        let l = denominator_lcm(m.row(r));
        m.row(r).iter().map(|q| q.numer() * (&l / q.denom())).collect()
    });
    MatZ::from_rows(m.cols(), rows.collect())
}

/// Result of fraction-free elimination.
pub(crate) struct Echelon {
    pub matrix: MatZ,
    pub pivots: Vec<usize>,
    pub swaps: usize,
}

/// Bareiss fraction-free row echelon form.
///
/// Every entry produced is a minor of the input, so the exact divisions
/// never leave the integers.
pub(crate) fn bareiss(m: &MatZ) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            swaps += 1;
        }
        let pivot = a.get(r, c).clone();
        for i in r + 1..rows {
            let lead = a.get(i, c).clone();
            for j in c + 1..cols {
                let v = (&pivot * a.get(i, j) - &lead * a.get(r, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, c, BigInt::zero());
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon { matrix: a, pivots, swaps }
}

pub fn rank_z(m: &MatZ) -> usize {
    bareiss(m).pivots.len()
}

/// Rank over the rationals.
pub fn rank(m: &MatQ) -> usize {
    rank_z(&scale_rows_to_integers(m))
}

pub fn det(m: &MatZ) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let e = bareiss(m);
    if e.pivots.len() < n {
        return BigInt::zero();
    }
    let d = e.matrix.get(n - 1, n - 1).clone();
    if e.swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Basis of the right kernel over the rationals, each vector scaled to a
/// primitive integer vector. Empty iff the kernel is trivial.
pub fn kernel_basis(m: &MatQ) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let e = bareiss(&scale_rows_to_integers(m));
    let r = e.pivots.len();
    // Gauss-Jordan on the (small) echelon part over Q.
    let mut rref: Vec<Vec<Rational>> = (0..r)
        .map(|i| e.matrix.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for i in (0..r).rev() {
        let pc = e.pivots[i];
        let inv = rref[i][pc].recip();
        for x in rref[i].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..i {
            let f = rref[k][pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = &rref[k][j] - &f * &rref[i][j];
                rref[k][j] = v;
            }
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !e.pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (i, &pc) in e.pivots.iter().enumerate() {
            v[pc] = -rref[i][free].clone();
        }
        let p = primitive_integer_vector(&v);
        basis.push(p.into_iter().map(Rational::from_integer).collect());
    }
    basis
}

/// Returns `(adj(m), det(m))` with `adj(m) * m = det(m) * I`.
pub fn adjugate_and_det(m: &MatZ) -> (MatZ, BigInt) {
    assert!(m.is_square(), "adjugate of a non-square matrix");
    let n = m.rows();
    let d = det(m);
    if n == 0 {
        return (MatZ::zeros(0, 0), d);
    }
    if n == 1 {
        return (MatZ::identity(1), d);
    }
    let mut adj = MatZ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let keep_rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let keep_cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = m.select_rows(&keep_rows).select_columns(&keep_cols);
            let mut cof = det(&minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            // adjugate is the transposed cofactor matrix
            adj.set(j, i, cof);
        }
    }
    (adj, d)
}

/// Row Hermite normal form `h = u * m` with `u` unimodular.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    pub h: MatZ,
    pub u: MatZ,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn row_axpy(m: &mut MatZ, target: usize, factor: &BigInt, source: usize) {
    for c in 0..m.cols() {
        let v = m.get(target, c) - factor * m.get(source, c);
        m.set(target, c, v);
    }
}

fn negate_row(m: &mut MatZ, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c).clone();
        m.set(r, c, v);
    }
}

/// Row-style Hermite normal form: pivots positive, entries above each pivot
/// reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hermite_normal_form(m: &MatZ) -> HermiteForm {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = MatZ::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(p) = best else { break };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut clean = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            if !q.is_zero() {
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
            }
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, rank: r, pivots }
}

/// Basis (as columns) of the lattice `{v in Z^n : m v = 0}`.
///
/// The integer kernel of an integer matrix is always saturated. The basis is
/// returned in Hermite normal form, which makes it canonical.
pub fn saturated_integer_kernel(m: &MatZ) -> MatZ {
    let n = m.cols();
    let hf = hermite_normal_form(&m.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (hf.rank..n).map(|r| hf.u.row(r).to_vec()).collect();
    if kernel_rows.is_empty() {
        return MatZ::zeros(n, 0);
    }
    let k = MatZ::from_rows(n, kernel_rows);
    let canon = hermite_normal_form(&k);
    canon.h.select_rows(&(0..canon.rank).collect::<Vec<_>>()).transpose()
}

/// Saturation of the lattice spanned by the columns of `m`: all integer
/// vectors in their real span, as an HNF column basis.
pub fn saturate_columns(m: &MatZ) -> MatZ {
    let annihilators = saturated_integer_kernel(&m.transpose());
    if annihilators.cols() == 0 {
        return MatZ::identity(m.rows());
    }
    saturated_integer_kernel(&annihilators.transpose())
}

/// Integral basis of `w^perp` from the construction `v_j = w_p e_j - w_j e_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerpBasis {
    /// `N x (N-1)` matrix whose columns span `w^perp`.
    pub h: MatZ,
    /// Index of the coordinate playing the role of the last one (last nonzero entry of `w`).
    pub pivot: usize,
}

pub fn perp_basis(w: &[BigInt]) -> Result<PerpBasis, LinalgError> {
    let pivot = w.iter().rposition(|x| !x.is_zero()).ok_or(LinalgError::ZeroVector)?;
    let n = w.len();
    let wp = &w[pivot];
    let mut columns = Vec::with_capacity(n - 1);
    for j in (0..n).filter(|&j| j != pivot) {
        let mut v = vec![BigInt::zero(); n];
        v[j] = wp.clone();
        v[pivot] = -w[j].clone();
        columns.push(v);
    }
    Ok(PerpBasis { h: MatZ::from_columns(n, &columns), pivot })
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn mat_z(rows: &[&[i64]]) -> MatZ {
    let cols = rows.first().map_or(0, |r| r.len());
    MatZ::from_rows(cols, rows.iter().map(|r| int_vec(r)).collect())
}

pub fn mat_q(rows: &[&[i64]]) -> MatQ {
    to_rational(&mat_z(rows))
}
