//! Integer polynomial matrices `A(x) = A_0 + x A_1 + ... + x^D A_D`, the two
//! dilation conditions, and the factorization `A(x) = T B(x)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    adjugate_and_det, dot, kernel_basis, primitive_integer_vector, rank_z, sup_norm, to_rational,
    MatQ, MatZ, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("a polynomial matrix needs at least one coefficient matrix")]
    NoCoefficients,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the nonconstant part is zero")]
    DegenerateInput,
    #[error("constant part is not T * B_0; condition (b) does not hold for this matrix")]
    ConditionBViolated,
}

/// `L x N` matrix over `Z[x]`, stored as coefficient matrices `A_0..=A_D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyMatrixRepr", into = "PolyMatrixRepr")]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<MatZ>,
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixRepr {
    rows: usize,
    cols: usize,
    degree: usize,
    coeffs: Vec<MatZ>,
}

impl TryFrom<PolyMatrixRepr> for PolyMatrix {
    type Error = PolyError;

    fn try_from(r: PolyMatrixRepr) -> Result<Self, PolyError> {
        if r.coeffs.len() != r.degree + 1 {
            return Err(PolyError::DimensionMismatch {
                expected: r.degree + 1,
                found: r.coeffs.len(),
            });
        }
        let p = PolyMatrix::new(r.coeffs)?;
        if (p.rows, p.cols) != (r.rows, r.cols) {
            return Err(PolyError::DimensionMismatch { expected: r.rows, found: p.rows });
        }
        Ok(p)
    }
}

impl From<PolyMatrix> for PolyMatrixRepr {
    fn from(p: PolyMatrix) -> Self {
        PolyMatrixRepr { rows: p.rows, cols: p.cols, degree: p.coeffs.len() - 1, coeffs: p.coeffs }
    }
}

impl PolyMatrix {
    pub fn new(coeffs: Vec<MatZ>) -> Result<Self, PolyError> {
        let first = coeffs.first().ok_or(PolyError::NoCoefficients)?;
        let (rows, cols) = (first.rows(), first.cols());
        for c in &coeffs {
            if c.rows() != rows {
                return Err(PolyError::DimensionMismatch { expected: rows, found: c.rows() });
            }
            if c.cols() != cols {
                return Err(PolyError::DimensionMismatch { expected: cols, found: c.cols() });
            }
        }
        Ok(PolyMatrix { rows, cols, coeffs })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Declared degree bound `D` (number of coefficient matrices minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest `d` with `A_d != 0`, or `None` for the zero matrix.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, d: usize) -> &MatZ {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[MatZ] {
        &self.coeffs
    }

    pub fn constant(&self) -> &MatZ {
        &self.coeffs[0]
    }

    pub fn nonconstant(&self) -> &[MatZ] {
        &self.coeffs[1..]
    }

    pub fn nonconstant_is_zero(&self) -> bool {
        self.nonconstant().iter().all(MatZ::is_zero)
    }

    /// `||A_*||_inf`: the largest absolute coefficient of the nonconstant part.
    pub fn nonconstant_height(&self) -> BigInt {
        self.nonconstant().iter().map(sup_norm).max().unwrap_or_else(BigInt::zero)
    }

    /// `[A_1 | A_2 | ... | A_D]`, an `L x DN` integer matrix.
    pub fn horizontal_block(&self) -> MatZ {
        if self.degree() == 0 {
            return MatZ::zeros(self.rows, 0);
        }
        MatZ::hstack(self.nonconstant())
    }

    /// `A_1` stacked over `A_2` ... over `A_D`, a `DL x N` integer matrix.
    pub fn vertical_stack(&self) -> MatZ {
        if self.degree() == 0 {
            return MatZ::zeros(0, self.cols);
        }
        MatZ::vstack(self.nonconstant())
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        PolyMatrix {
            rows: idx.len(),
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.select_rows(idx)).collect(),
        }
    }

    /// `A(n)` by Horner's rule.
    pub fn evaluate(&self, n: &BigInt) -> MatZ {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.map(|x| x * n) + c;
        }
        acc
    }

    /// `C(x) = A(x) H`, coefficientwise.
    pub fn restrict_through(&self, h: &MatZ) -> Result<PolyMatrix, PolyError> {
        if h.rows() != self.cols {
            return Err(PolyError::DimensionMismatch { expected: self.cols, found: h.rows() });
        }
        PolyMatrix::new(self.coeffs.iter().map(|c| c.mul(h)).collect())
    }

    /// Rank of the row module of `A_*`, i.e. the rank of `[A_1 | ... | A_D]`.
    pub fn nonconstant_rank(&self) -> usize {
        rank_z(&self.horizontal_block())
    }
}

/// Condition (a): the columns of `A_*` are linearly independent over `Q`.
pub fn check_condition_a(a: &PolyMatrix) -> bool {
    rank_z(&a.vertical_stack()) == a.cols()
}

/// Coefficients `c_1..c_D` with `A_0 = sum c_d A_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    #[serde(with = "crate::textual::rational_vec")]
    pub coefficients: Vec<Rational>,
}

/// Vectors with `v . A_d w = 0` for every `d >= 1` but `v . A_0 w != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionBWitness {
    #[serde(with = "crate::textual::bigint_vec")]
    pub v: Vec<BigInt>,
    #[serde(with = "crate::textual::bigint_vec")]
    pub w: Vec<BigInt>,
}

impl ConditionBWitness {
    /// Re-checks the defining equalities exactly.
    pub fn verify(&self, a: &PolyMatrix) -> bool {
        let annihilated = a.nonconstant().iter().all(|ad| dot(&self.v, &ad.mul_vec(&self.w)).is_zero());
        annihilated && !dot(&self.v, &a.constant().mul_vec(&self.w)).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConditionB {
    Holds(SpanCertificate),
    Fails(ConditionBWitness),
    Unknown { height_bound: u64 },
}

impl ConditionB {
    pub fn is_fails(&self) -> bool {
        matches!(self, ConditionB::Fails(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub cond_a: bool,
    pub cond_b: ConditionB,
    pub notes: String,
}

/// Solves `A_0 = sum c_d A_d` over `Q`, if possible.
fn span_certificate(a: &PolyMatrix) -> Option<SpanCertificate> {
    let vecs: Vec<Vec<BigInt>> = a.coeffs().iter().map(|m| m.entries().to_vec()).collect();
    // columns: vec(A_1), ..., vec(A_D), vec(A_0)
    let mut columns: Vec<Vec<BigInt>> = vecs[1..].to_vec();
    columns.push(vecs[0].clone());
    let system = MatZ::from_columns(a.rows() * a.cols(), &columns);
    let d = a.degree();
    for v in kernel_basis(&to_rational(&system)) {
        if !v[d].is_zero() {
            let scale = -v[d].recip();
            return Some(SpanCertificate { coefficients: v[..d].iter().map(|c| c * &scale).collect() });
        }
    }
    if a.constant().is_zero() {
        return Some(SpanCertificate { coefficients: vec![Rational::zero(); d] });
    }
    None
}

/// For a fixed `w`, looks for `v` with `v . A_d w = 0` (d >= 1) and `v . A_0 w != 0`.
fn witness_for(a: &PolyMatrix, w: &[BigInt]) -> Option<ConditionBWitness> {
    let a0w = a.constant().mul_vec(w);
    if a0w.iter().all(Zero::is_zero) {
        return None;
    }
    let images: Vec<Vec<BigInt>> = a.nonconstant().iter().map(|ad| ad.mul_vec(w)).collect();
    let constraint = MatZ::from_rows(a.rows(), images);
    let a0w_q: Vec<Rational> = a0w.iter().cloned().map(Rational::from_integer).collect();
    let kernel = if constraint.rows() == 0 {
        (0..a.rows())
            .map(|i| (0..a.rows()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        kernel_basis(&to_rational(&constraint))
    };
    let v = kernel.into_iter().find(|v| !dot(v, &a0w_q).is_zero())?;
    Some(ConditionBWitness { v: primitive_integer_vector(&v), w: w.to_vec() })
}

/// Condition (b), decided in three stages: a span certificate (sufficient),
/// an exact decision when `N = 1`, and otherwise a refutation search over
/// integer `w` with `0 < ||w||_inf <= height_bound`.
pub fn check_condition_b(a: &PolyMatrix, height_bound: u64) -> ConditionB {
    if let Some(cert) = span_certificate(a) {
        return ConditionB::Holds(cert);
    }
    if a.cols() == 1 {
        // For N = 1 the condition is exactly "A_0 lies in the span of A_1..A_D",
        // which just failed; w = 1 must produce a witness.
        let w = vec![BigInt::one()];
        let wit = witness_for(a, &w).expect("N = 1 with A_0 outside the span admits a witness");
        return ConditionB::Fails(wit);
    }
    for w in CanonicalVectors::new(a.cols(), height_bound) {
        if let Some(wit) = witness_for(a, &w) {
            debug_assert!(wit.verify(a));
            return ConditionB::Fails(wit);
        }
    }
    ConditionB::Unknown { height_bound }
}

pub fn check_conditions(a: &PolyMatrix, height_bound: u64) -> ConditionReport {
    let cond_a = check_condition_a(a);
    let cond_b = check_condition_b(a, height_bound);
    let notes = match &cond_b {
        ConditionB::Holds(_) => "A_0 lies in the rational span of A_1..A_D".to_string(),
        ConditionB::Fails(_) => "explicit witness (v, w) refutes condition (b)".to_string(),
        ConditionB::Unknown { height_bound } => format!(
            "A_0 is not in the span of A_1..A_D and no witness with ||w|| <= {height_bound} exists"
        ),
    };
    ConditionReport { cond_a, cond_b, notes }
}

/// Nonzero integer vectors up to sign (first nonzero entry positive), ordered
/// by sup norm and then lexicographically.
#[derive(Debug, Clone)]
pub struct CanonicalVectors {
    dim: usize,
    max_height: i64,
    height: i64,
    current: Option<Vec<i64>>,
}

impl CanonicalVectors {
    pub fn new(dim: usize, max_height: u64) -> Self {
        let max_height = i64::try_from(max_height).unwrap_or(i64::MAX);
        CanonicalVectors { dim, max_height, height: 0, current: None }
    }

    fn advance(v: &mut [i64], h: i64) -> bool {
        for x in v.iter_mut().rev() {
            if *x < h {
                *x += 1;
                return true;
            }
            *x = -h;
        }
        false
    }
}

impl Iterator for CanonicalVectors {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        if self.dim == 0 {
            return None;
        }
        loop {
            match self.current.as_mut() {
                None => {
                    self.height += 1;
                    if self.height > self.max_height {
                        return None;
                    }
                    self.current = Some(vec![-self.height; self.dim]);
                }
                Some(v) => {
                    if !Self::advance(v, self.height) {
                        self.current = None;
                        continue;
                    }
                }
            }
            let v = self.current.as_ref().expect("set above");
            let h = self.height;
            let top = v.iter().any(|x| x.abs() == h);
            let positive = v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
            if top && positive {
                return Some(v.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
    }
}

/// `A(x) = T B(x)` with `B` made of `ell` rows of `A` and `qT` integral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub ell: usize,
    pub t: MatQ,
    pub qt: MatZ,
    pub b: PolyMatrix,
    #[serde(with = "crate::textual::bigint")]
    pub q: BigInt,
    pub row_indices: Vec<usize>,
    /// Columns of `[B_1 | ... | B_D]` forming the invertible minor.
    pub minor_columns: Vec<usize>,
}

impl Decomposition {
    /// `ell! * ||A_*||^ell`, the bound enforced on `||qT||_inf`.
    pub fn qt_bound(ell: usize, height: &BigInt) -> BigInt {
        let fact: BigInt = (1..=ell).map(BigInt::from).product();
        fact * num_traits::pow(height.clone(), ell)
    }

    /// `T B_d == A_d` for every `d`, checked as `qT B_d == q A_d`.
    pub fn reconstructs(&self, a: &PolyMatrix) -> bool {
        self.b.coeffs().iter().zip(a.coeffs()).all(|(bd, ad)| self.qt.mul(bd) == ad.map(|x| x * &self.q))
    }
}

fn greedy_independent(candidates: &[Vec<BigInt>], width: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, _) in candidates.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(i);
        let m = MatZ::from_rows(width, trial.iter().map(|&j| candidates[j].clone()).collect());
        if rank_z(&m) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

pub fn decompose(a: &PolyMatrix) -> Result<Decomposition, PolyError> {
    if a.nonconstant_is_zero() {
        return Err(PolyError::DegenerateInput);
    }
    let ah = a.horizontal_block();
    let rows = greedy_independent(&ah.row_vecs(), ah.cols());
    let ell = rows.len();
    let b = a.select_rows(&rows);
    let bh = b.horizontal_block();
    // Greedy column choice is the lexicographically first basis of the column matroid.
    let minor_columns = greedy_independent(&bh.columns(), bh.rows());
    debug_assert_eq!(minor_columns.len(), ell);
    let b_minor = bh.select_columns(&minor_columns);
    let a_minor = ah.select_columns(&minor_columns);
    let (adj, det) = adjugate_and_det(&b_minor);
    debug_assert!(!det.is_zero());
    let q = det.abs();
    let sign = if det.is_negative() { -BigInt::one() } else { BigInt::one() };
    let qt = a_minor.mul(&adj).map(|x| x * &sign);
    let qr = Rational::from_integer(q.clone());
    let t = qt.map(|x| Rational::from_integer(x.clone()) / &qr);
    let dec = Decomposition { ell, t, qt, b, q, row_indices: rows, minor_columns };
    if dec.qt.mul(dec.b.constant()) != a.constant().map(|x| x * &dec.q) {
        return Err(PolyError::ConditionBViolated);
    }
    debug_assert!(dec.reconstructs(a));
    Ok(dec)
}

/// The matrix of the introductory degenerate example, `[[x, 0], [0, 0]]`.
pub fn example_degenerate() -> PolyMatrix {
    use crate::linalg::mat_z;
    PolyMatrix::new(vec![mat_z(&[&[0, 0], &[0, 0]]), mat_z(&[&[1, 0], &[0, 0]])]).expect("valid")
}

/// The matrix `[[x, 0], [0, x + 1]]` whose constant part breaks condition (b).
pub fn example_shifted_diagonal() -> PolyMatrix {
    use crate::linalg::mat_z;
    PolyMatrix::new(vec![mat_z(&[&[0, 0], &[0, 1]]), mat_z(&[&[1, 0], &[0, 1]])]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, mat_z, rank};
    use proptest::prelude::*;

    fn poly(coeffs: &[&[&[i64]]]) -> PolyMatrix {
        PolyMatrix::new(coeffs.iter().map(|c| mat_z(c)).collect()).unwrap()
    }

    fn x_identity() -> PolyMatrix {
        poly(&[&[&[0, 0], &[0, 0]], &[&[1, 0], &[0, 1]]])
    }

    #[test]
    fn evaluate_examples() {
        let a = example_shifted_diagonal();
        assert_eq!(a.evaluate(&BigInt::from(3)), mat_z(&[&[3, 0], &[0, 4]]));
        assert_eq!(a.evaluate(&BigInt::zero()), *a.constant());
        let b = poly(&[&[&[1, -2]], &[&[3, 0]], &[&[-1, 4]], &[&[2, 2]]]);
        let n = BigInt::from(7);
        let mut direct = MatZ::zeros(1, 2);
        for (d, c) in b.coeffs().iter().enumerate() {
            direct = &direct + &c.map(|x| x * num_traits::pow(n.clone(), d));
        }
        assert_eq!(b.evaluate(&n), direct);
    }

    #[test]
    fn condition_a_examples() {
        assert!(!check_condition_a(&example_degenerate()));
        assert!(check_condition_a(&x_identity()));
        assert!(!check_condition_a(&poly(&[&[&[0, 0]], &[&[1, 2]]])));
        assert!(check_condition_a(&example_shifted_diagonal()));
    }

    #[test]
    fn condition_b_examples() {
        match check_condition_b(&example_shifted_diagonal(), 1) {
            ConditionB::Fails(w) => {
                assert_eq!(w.v, int_vec(&[1, 1]));
                assert_eq!(w.w, int_vec(&[1, -1]));
                assert!(w.verify(&example_shifted_diagonal()));
                let a0w = example_shifted_diagonal().constant().mul_vec(&w.w);
                assert_eq!(dot(&w.v, &a0w), BigInt::from(-1));
            }
            other => panic!("expected a refutation, got {other:?}"),
        }
        let shifted = poly(&[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]]);
        match check_condition_b(&shifted, 2) {
            ConditionB::Holds(c) => assert_eq!(c.coefficients, vec![Rational::one()]),
            other => panic!("expected span certificate, got {other:?}"),
        }
        assert!(matches!(check_condition_b(&example_degenerate(), 2), ConditionB::Holds(_)));
    }

    #[test]
    fn condition_b_single_column_is_exact() {
        // column (x, 1): A_0 = (0,1) not a multiple of A_1 = (1,0)
        let a = poly(&[&[&[0], &[1]], &[&[1], &[0]]]);
        match check_condition_b(&a, 0) {
            ConditionB::Fails(w) => assert!(w.verify(&a)),
            other => panic!("{other:?}"),
        }
        let a = poly(&[&[&[2], &[4]], &[&[1], &[2]]]);
        assert!(matches!(check_condition_b(&a, 0), ConditionB::Holds(_)));
    }

    #[test]
    fn canonical_vector_order() {
        let v: Vec<Vec<BigInt>> = CanonicalVectors::new(2, 1).collect();
        let expect: Vec<Vec<BigInt>> =
            [[0, 1], [1, -1], [1, 0], [1, 1]].iter().map(|x| int_vec(x)).collect();
        assert_eq!(v, expect);
        assert_eq!(CanonicalVectors::new(3, 2).count(), (5usize.pow(3) - 1) / 2);
    }

    #[test]
    fn decompose_examples() {
        let col = poly(&[&[&[0], &[0]], &[&[1], &[1]]]);
        let d = decompose(&col).unwrap();
        assert_eq!(d.ell, 1);
        assert_eq!(d.q, BigInt::one());
        assert_eq!(d.b, poly(&[&[&[0]], &[&[1]]]));
        assert_eq!(d.qt, mat_z(&[&[1], &[1]]));
        assert!(d.reconstructs(&col));

        let d = decompose(&x_identity()).unwrap();
        assert_eq!(d.ell, 2);
        assert_eq!(d.qt, MatZ::identity(2));
        assert_eq!(d.b, x_identity());

        let shifted = poly(&[&[&[1], &[2]], &[&[1], &[2]]]);
        let d = decompose(&shifted).unwrap();
        assert_eq!((d.ell, d.q.clone()), (1, BigInt::one()));
        assert_eq!(d.b, poly(&[&[&[1]], &[&[1]]]));
        assert_eq!(d.t, to_rational(&mat_z(&[&[1], &[2]])));
        assert!(sup_norm(&d.qt) <= Decomposition::qt_bound(1, &shifted.nonconstant_height()));
    }

    #[test]
    fn decompose_errors() {
        let constant = poly(&[&[&[1, 2]], &[&[0, 0]]]);
        assert_eq!(decompose(&constant), Err(PolyError::DegenerateInput));
        // rows (x) and (x + 1): second row is dropped but its constant is not T B_0
        let bad = poly(&[&[&[0], &[1]], &[&[1], &[1]]]);
        assert_eq!(decompose(&bad), Err(PolyError::ConditionBViolated));
    }

    #[test]
    fn decompose_needs_a_scaling() {
        // B' = [[2]] gives q = 2 and T = (1, 1/2)
        let a = poly(&[&[&[0, 0], &[0, 0]], &[&[2, 0], &[1, 0]]]);
        let d = decompose(&a).unwrap();
        assert_eq!(d.q, BigInt::from(2));
        assert_eq!(d.qt, mat_z(&[&[2], &[1]]));
        assert!(d.reconstructs(&a));
    }

    #[test]
    fn restrict_examples() {
        let h = mat_z(&[&[1], &[1]]);
        let c = x_identity().restrict_through(&h).unwrap();
        assert_eq!(c, poly(&[&[&[0], &[0]], &[&[1], &[1]]]));
        let c = example_shifted_diagonal().restrict_through(&h).unwrap();
        assert_eq!(c.coeff(0), &mat_z(&[&[0], &[1]]));
        assert_eq!(c.coeff(1), &mat_z(&[&[1], &[1]]));
        assert_eq!(example_shifted_diagonal().restrict_through(&MatZ::identity(2)).unwrap(), example_shifted_diagonal());
        assert_eq!(
            x_identity().restrict_through(&MatZ::identity(3)),
            Err(PolyError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn serde_round_trip() {
        let a = example_shifted_diagonal();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<PolyMatrix>(&s).unwrap(), a);
        let r = check_conditions(&a, 2);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ConditionReport>(&s).unwrap(), r);
    }

    fn small_poly() -> impl Strategy<Value = PolyMatrix> {
        (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(l, n, d)| {
            proptest::collection::vec(-2i64..=2, l * n * (d + 1)).prop_map(move |v| {
                let coeffs = v.chunks(l * n).map(|c| MatZ::from_vec(l, n, int_vec(c))).collect();
                PolyMatrix::new(coeffs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn condition_a_matches_definition(a in small_poly(), combo in proptest::collection::vec(-3i64..=3, 3)) {
            let stack = to_rational(&a.vertical_stack());
            let kernel = kernel_basis(&stack);
            prop_assert_eq!(check_condition_a(&a), kernel.is_empty());
            // a kernel vector kills A_* identically
            for m in &kernel {
                for ad in a.nonconstant() {
                    prop_assert!(to_rational(ad).mul_vec(m).iter().all(Zero::is_zero));
                }
            }
            if kernel.is_empty() {
                let m: Vec<Rational> = combo.iter().take(a.cols()).map(|&x| Rational::from_integer(x.into())).collect();
                if m.len() == a.cols() && m.iter().any(|x| !x.is_zero()) {
                    let vanishes = a.nonconstant().iter().all(|ad| to_rational(ad).mul_vec(&m).iter().all(Zero::is_zero));
                    prop_assert!(!vanishes);
                }
            }
        }

        #[test]
        fn condition_b_verdicts_verify(a in small_poly()) {
            match check_condition_b(&a, 2) {
                ConditionB::Fails(w) => prop_assert!(w.verify(&a)),
                ConditionB::Holds(c) => {
                    let mut acc = MatQ::zeros(a.rows(), a.cols());
                    for (cd, ad) in c.coefficients.iter().zip(a.nonconstant()) {
                        acc = &acc + &to_rational(ad).map(|x| x * cd);
                    }
                    prop_assert_eq!(acc, to_rational(a.constant()));
                }
                ConditionB::Unknown { .. } => prop_assert!(a.cols() > 1),
            }
        }

        #[test]
        fn restrict_commutes_with_evaluation(a in small_poly(), h in proptest::collection::vec(-3i64..=3, 9), n in -5i64..=5) {
            let k = a.cols();
            let hm = MatZ::from_vec(k, 1 + (k + 1) % 3, int_vec(&h[..k * (1 + (k + 1) % 3)]));
            let c = a.restrict_through(&hm).unwrap();
            let n = BigInt::from(n);
            prop_assert_eq!(c.evaluate(&n), a.evaluate(&n).mul(&hm));
        }

        #[test]
        fn decomposition_invariants(a in small_poly()) {
            if a.nonconstant_is_zero() {
                prop_assert_eq!(decompose(&a), Err(PolyError::DegenerateInput));
            } else {
                match decompose(&a) {
                    Ok(d) => {
                        prop_assert!(d.reconstructs(&a));
                        prop_assert_eq!(d.ell, rank(&to_rational(&a.horizontal_block())));
                        prop_assert_eq!(d.b.nonconstant_rank(), d.ell);
                        prop_assert!(sup_norm(&d.qt) <= Decomposition::qt_bound(d.ell, &a.nonconstant_height()));
                    }
                    Err(e) => {
                        prop_assert_eq!(e, PolyError::ConditionBViolated);
                        prop_assert!(!matches!(check_condition_b(&a, 2), ConditionB::Holds(_)));
                    }
                }
            }
        }
    }
}
