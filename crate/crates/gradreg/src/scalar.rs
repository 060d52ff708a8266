//! Exact field arithmetic, dense matrices, and row reduction.
//!
//! Two fields are supported: the rationals (arbitrary precision) and prime
//! fields `F_p` with `p < 2^31`. Every other module is generic over [`Field`]
//! so the hot paths monomorphize to plain `u32` arithmetic over `F_p`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which base field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    /// Default field of the test suite.
    pub const DEFAULT: FieldSpec = FieldSpec::PrimeField(32003);

    pub fn validate(self) -> Result<Self, Error> {
        match self {
            FieldSpec::Rationals => Ok(self),
            FieldSpec::PrimeField(p) if (2..(1 << 31)).contains(&p) && is_prime(p) => Ok(self),
            FieldSpec::PrimeField(p) => Err(Error::BadInput(format!("{p} is not a prime below 2^31"))),
        }
    }

    /// Characteristic of the field (0 for the rationals).
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p as u64,
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field together with its element type.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of `num/den`, or `None` when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;

    /// `dst[k] += c * src[k]`.
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(c, s));
            }
        }
    }

    /// `dst[k] *= c`.
    fn scale(&self, dst: &mut [Self::Elem], c: &Self::Elem) {
        for d in dst.iter_mut() {
            *d = self.mul(d, c);
        }
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, Error> {
        FieldSpec::PrimeField(p).validate()?;
        Ok(Fp { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn pow(&self, mut b: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut base = b as u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        b = acc as u32;
        b
    }
}

impl Field for Fp {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p as u64 - 2)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u32> {
        let p = BigInt::from(self.p);
        let reduce = |x: &BigInt| -> u32 {
            let r = ((x % &p) + &p) % &p;
            r.to_u32().expect("residue fits")
        };
        let d = reduce(den);
        if d == 0 {
            return None;
        }
        Some(self.mul(&reduce(num), &self.inv(&d)))
    }
    fn random(&self, rng: &mut dyn RngCore) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn axpy(&self, dst: &mut [u32], c: &u32, src: &[u32]) {
        if *c == 0 {
            return;
        }
        let p = self.p as u64;
        let c = *c as u64;
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 {
                *d = ((*d as u64 + c * *s as u64) % p) as u32;
            }
        }
    }
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Parses an integer or `num/den` string into the field.
pub fn parse_scalar<F: Field>(field: &F, text: &str) -> Option<F::Elem> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    field.from_ratio(&num, &den)
}

/// Canonical string for a rational coefficient, used by serialization.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else if q.denom().is_negative() {
        format!("{}/{}", -q.numer(), -q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense row-major matrix. The field is passed to operations explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        let _ = field;
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(field: &F, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, cols, conv)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [F::Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![field.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !field.is_zero(a) {
                    *o = field.add(o, &field.mul(a, x));
                }
            }
        }
        out
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if field.is_zero(&a) {
                    continue;
                }
                let (src, dst) = (other.row(k).to_vec(), out.row_mut(i));
                field.axpy(dst, &a, &src);
            }
        }
        out
    }

    pub fn add_assign(&mut self, field: &F, other: &Self, c: &F::Elem) {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix shape mismatch");
        field.axpy(&mut self.data, c, &other.data);
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// The nonzero rows of the reduced row echelon form.
    pub echelon: Vec<Vec<F::Elem>>,
    /// Basis of the right null space, one vector per non-pivot column.
    pub kernel: Vec<Vec<F::Elem>>,
}

/// Reduced row echelon form. The pivot of each step is the first nonzero entry
/// found scanning columns left to right and, within a column, rows top to bottom.
pub fn rref<F: Field>(field: &F, m: &Matrix<F>) -> Rref<F> {
    let rows: Vec<Vec<F::Elem>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    rref_rows(field, m.cols(), rows)
}

/// [`rref`] on a list of rows of length `cols`.
pub fn rref_rows<F: Field>(field: &F, cols: usize, mut rows: Vec<Vec<F::Elem>>) -> Rref<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]);
        field.scale(&mut rows[r], &inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !field.is_zero(&row[c]) {
                let f = field.neg(&row[c]);
                field.axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    let kernel = kernel_from_echelon(field, cols, &rows, &pivots);
    Rref { rank: r, pivots, echelon: rows, kernel }
}

fn kernel_from_echelon<F: Field>(field: &F, cols: usize, rows: &[Vec<F::Elem>], pivots: &[usize]) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &p) in rows.iter().zip(pivots) {
            if !field.is_zero(&row[free]) {
                v[p] = field.neg(&row[free]);
            }
        }
        kernel.push(v);
    }
    kernel
}

/// A subspace of `F^n` held in reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace { ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn span(field: &F, ambient: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        let r = rref_rows(field, ambient, vectors);
        Subspace { ambient, rows: r.echelon, pivots: r.pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, field: &F, v: &mut [F::Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !field.is_zero(&v[p]) {
                let f = field.neg(&v[p]);
                field.axpy(v, &f, row);
            }
        }
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| field.is_zero(x))
    }

    /// Coordinates of a vector known to lie in the span.
    pub fn coords(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, field: &F, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![field.zero(); self.ambient];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            field.axpy(&mut out, c, row);
        }
        out
    }

    pub fn sum(&self, field: &F, other: &Self) -> Self {
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Self::span(field, self.ambient, vs)
    }

    /// Canonical complement of `self` inside `within`: the rref of the
    /// remainders of `within` modulo `self`. Its pivots avoid those of `self`.
    pub fn complement_in(&self, field: &F, within: &Self) -> Self {
        let rems = within
            .rows
            .iter()
            .map(|r| {
                let mut w = r.clone();
                self.reduce(field, &mut w);
                w
            })
            .collect();
        Self::span(field, self.ambient, rems)
    }
}

/// A sparse vector: strictly increasing indices with nonzero values.
pub type SparseVec<F> = Vec<(usize, <F as Field>::Elem)>;

/// Adds `c * src` into a sparse accumulator kept as a dense buffer.
pub fn sparse_axpy<F: Field>(field: &F, dst: &mut [F::Elem], c: &F::Elem, src: &SparseVec<F>) {
    for (i, x) in src {
        dst[*i] = field.add(&dst[*i], &field.mul(c, x));
    }
}

pub fn to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

/// Incremental row echelon form over sparse rows, for rank computations on
/// large structured matrices. Rows are reduced only at their leading entries.
pub struct SparseEchelon<F: Field> {
    field: F,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVec<F>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(field: &F, cols: usize) -> Self {
        SparseEchelon { field: field.clone(), pivot_row: vec![None; cols], rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseVec<F>) -> bool {
        let f = &self.field;
        let mut cur = row;
        loop {
            let Some(&(lead, ref val)) = cur.first() else {
                return false;
            };
            match self.pivot_row[lead] {
                None => {
                    let inv = f.inv(val);
                    for e in cur.iter_mut() {
                        e.1 = f.mul(&e.1, &inv);
                    }
                    self.pivot_row[lead] = Some(self.rows.len());
                    self.rows.push(cur);
                    return true;
                }
                Some(pi) => {
                    let c = f.neg(val);
                    cur = sparse_merge(f, &cur, &c, &self.rows[pi]);
                }
            }
        }
    }
}

/// `a + c * b` for sparse vectors.
pub fn sparse_merge<F: Field>(field: &F, a: &SparseVec<F>, c: &F::Elem, b: &SparseVec<F>) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = field.mul(c, &b[j].1);
            if !field.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a matrix given by sparse rows.
pub fn sparse_rank<F: Field>(field: &F, cols: usize, rows: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut ech = SparseEchelon::new(field, cols);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Helper used by tests and the rational/prime cross-check.
pub fn rational_matrix_mod_p(m: &Matrix<Rationals>, fp: &Fp) -> Option<Matrix<Fp>> {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for x in m.row(r) {
            row.push(fp.from_ratio(x.numer(), x.denom())?);
        }
        rows.push(row);
    }
    Some(Matrix::from_rows(fp, m.cols(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn identity_over_f5_has_full_rank() {
        let f = fp(5);
        let r = rref(&f, &Matrix::identity(&f, 3));
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_has_standard_kernel() {
        let f = fp(32003);
        let r = rref(&f, &Matrix::zeros(&f, 2, 3));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn rank_one_rational_matrix() {
        let q = Rationals;
        let r = rref(&q, &Matrix::from_i64(&q, &[vec![1, 2], vec![2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel, vec![vec![q.from_i64(-2), q.from_i64(1)]]);
    }

    #[test]
    fn empty_matrix() {
        let f = fp(7);
        let r = rref(&f, &Matrix::zeros(&f, 0, 0));
        assert_eq!(r.rank, 0);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn pivot_is_first_nonzero_in_column_order() {
        let f = fp(7);
        let m = Matrix::from_i64(&f, &[vec![0, 3, 1], vec![0, 0, 2], vec![0, 6, 0]]);
        let r = rref(&f, &m);
        assert_eq!(r.pivots, vec![1, 2]);
    }

    #[test]
    fn parse_scalars() {
        let f = fp(5);
        assert_eq!(parse_scalar(&f, "3"), Some(3));
        assert_eq!(parse_scalar(&f, "-2"), Some(3));
        assert_eq!(parse_scalar(&f, "1/2"), Some(3));
        assert_eq!(parse_scalar(&f, "1/5"), None);
        assert_eq!(parse_scalar(&Rationals, "-3/6").map(|x| rational_string(&x)), Some("-1/2".into()));
    }

    #[test]
    fn subspace_complement_avoids_pivots() {
        let f = fp(11);
        let u = Subspace::span(&f, 3, vec![vec![1, 1, 0]]);
        let w = Subspace::full(&f, 3);
        let c = u.complement_in(&f, &w);
        assert_eq!(c.dim(), 2);
        assert!(c.pivots().iter().all(|p| !u.pivots().contains(p)));
    }

    fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(0u32..13, r * c)))
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated((r, c, data) in matrix_strategy()) {
            let f = fp(13);
            let m = Matrix { rows: r, cols: c, data };
            let out = rref(&f, &m);
            prop_assert_eq!(out.rank + out.kernel.len(), c);
            for v in &out.kernel {
                prop_assert!(m.apply(&f, v).iter().all(|x| *x == 0));
            }
            prop_assert!(out.pivots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn rref_is_idempotent((r, c, data) in matrix_strategy()) {
            let f = fp(13);
            let m = Matrix { rows: r, cols: c, data };
            let once = rref(&f, &m);
            let twice = rref_rows(&f, c, once.echelon.clone());
            prop_assert_eq!(once.rank, twice.rank);
            prop_assert_eq!(&once.pivots, &twice.pivots);
            prop_assert_eq!(&once.echelon, &twice.echelon);
        }

        #[test]
        fn sparse_rank_matches_dense((r, c, data) in matrix_strategy()) {
            let f = fp(13);
            let m = Matrix { rows: r, cols: c, data };
            let rows = (0..r).map(|i| to_sparse(&f, m.row(i)));
            prop_assert_eq!(sparse_rank(&f, c, rows), rref(&f, &m).rank);
        }

        #[test]
        fn rationals_agree_with_prime_field(data in proptest::collection::vec(-5i64..6, 12)) {
            let q = Rationals;
            let rows: Vec<Vec<i64>> = data.chunks(4).map(|c| c.to_vec()).collect();
            let mq = Matrix::from_i64(&q, &rows);
            let rq = rref(&q, &mq);
            let f = fp(32003);
            let mp = rational_matrix_mod_p(&mq, &f).unwrap();
            let rp = rref(&f, &mp);
            prop_assert_eq!(rq.rank, rp.rank);
            prop_assert_eq!(rq.pivots, rp.pivots);
            for (a, b) in rq.echelon.iter().zip(&rp.echelon) {
                for (x, y) in a.iter().zip(b) {
                    prop_assert_eq!(f.from_ratio(x.numer(), x.denom()), Some(*y));
                }
            }
        }
    }
}
