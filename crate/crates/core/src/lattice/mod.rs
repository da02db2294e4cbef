//! Exact integer and rational linear algebra over small lattices.
//!
//! Everything here is arbitrary precision. Vectors and matrices are plain
//! dense containers whose shape is fixed at construction; the normal forms
//! and the polyhedral routines live in the submodules.

mod normal_form;
mod polyhedra;

pub use normal_form::{det, hnf, integer_kernel, rank, snf, solve_rational, Hnf, Snf};
pub use polyhedra::{
    dual_cone, integer_points, integer_points_with_progress, vertices, ConeV, Halfspace,
    HalfspaceSystem, MAX_DIM,
};

use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rat = BigRational;
pub type RatVec = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {0} is not supported (at most 3)")]
    UnsupportedDimension(usize),
    #[error("halfspace normal is the zero vector")]
    ZeroNormal,
    #[error("the polyhedron is unbounded")]
    Unbounded,
    #[error("matrix is singular")]
    Singular,
}

/// Dense integer vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntVec(Vec<BigInt>);

/// JSON form of a single integer: a number when it fits in `i64`, otherwise
/// a decimal string.
pub(crate) fn int_to_json(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(x.to_string()),
    }
}

pub(crate) fn serialize_int<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    int_to_json(x).serialize(s)
}

impl Serialize for IntVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&int_to_json(x))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Small(i64),
            Text(String),
        }
        let raw = Vec::<Entry>::deserialize(d)?;
        raw.into_iter()
            .map(|e| match e {
                Entry::Small(v) => Ok(BigInt::from(v)),
                Entry::Text(t) => t
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("not an integer: {t:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(IntVec)
    }
}

impl IntVec {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigInt> {
        self.0
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational point.
    pub fn dot_rat(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(self.dim(), point.len());
        self.0
            .iter()
            .zip(point)
            .map(|(a, b)| b * Rat::from_integer(a.clone()))
            .sum()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn concat(&self, other: &IntVec) -> IntVec {
        IntVec(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn to_rat(&self) -> RatVec {
        self.0.iter().cloned().map(Rat::from_integer).collect()
    }

    /// Entries as `i64`; panics if an entry does not fit.
    pub fn to_i64s(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|x| i64::try_from(x).expect("lattice entry exceeds i64"))
            .collect()
    }
}

impl Deref for IntVec {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVec {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl From<Vec<BigInt>> for IntVec {
    fn from(v: Vec<BigInt>) -> Self {
        IntVec(v)
    }
}

impl From<&[i64]> for IntVec {
    fn from(v: &[i64]) -> Self {
        IntVec::from_i64s(v)
    }
}

impl<const N: usize> From<[i64; N]> for IntVec {
    fn from(v: [i64; N]) -> Self {
        IntVec::from_i64s(&v)
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building an [`IntVec`] from integer literals.
#[macro_export]
macro_rules! ivec {
    ($($x:expr),* $(,)?) => {
        $crate::lattice::IntVec::from_i64s(&[$($x as i64),*])
    };
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVec]) -> Result<Self, LatticeError> {
        let cols = rows.first().map_or(0, IntVec::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(LatticeError::DimensionMismatch {
                    expected: cols,
                    found: r.dim(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix with an explicit column count, so that empty row lists
    /// keep their shape.
    pub fn from_rows_with_cols(rows: &[IntVec], cols: usize) -> Result<Self, LatticeError> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        let m = Self::from_rows(rows)?;
        if m.cols != cols {
            return Err(LatticeError::DimensionMismatch {
                expected: cols,
                found: m.cols,
            });
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<IntVec> = rows.iter().map(|r| IntVec::from_i64s(r)).collect();
        Self::from_rows(&rows).expect("ragged literal matrix")
    }

    pub fn from_columns(cols: &[IntVec]) -> Result<Self, LatticeError> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vecs(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVec) -> IntVec {
        assert_eq!(self.cols, v.dim());
        IntVec((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// Submatrix on the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> IntMat {
        let mut out = IntMat::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMat {
        let picked: Vec<IntVec> = rows.iter().map(|&i| self.row(i)).collect();
        IntMat::from_rows_with_cols(&picked, self.cols).expect("rows share a width")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j] * k;
            self.data[target * self.cols + j] += s;
        }
    }

    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source] * k;
            self.data[i * self.cols + target] += s;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        self.row_vecs().iter().map(IntVec::to_i64s).collect()
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &IntVec) -> Result<IntVec, LatticeError> {
    let g = v.content();
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(IntVec(v.iter().map(|x| x / &g).collect()))
}

/// Smallest positive integer multiple of a nonzero rational vector, made
/// primitive.
pub fn primitive_of_rational(v: &[Rat]) -> Result<IntVec, LatticeError> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(&IntVec(ints))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// `n!` for a non-negative integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd_oracle(v: &[i64]) -> i64 {
        fn g(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                g(b, a % b)
            }
        }
        v.iter().fold(0, |acc, &x| g(acc, x))
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&ivec![2, 4]).unwrap(), ivec![1, 2]);
        assert_eq!(primitive(&ivec![1, -2]).unwrap(), ivec![1, -2]);
        let v = [-4i64, 6, -2];
        let g = gcd_oracle(&v);
        let expected: Vec<i64> = v.iter().map(|x| x / g).collect();
        assert_eq!(primitive(&ivec![-4, 6, -2]).unwrap().to_i64s(), expected);
        assert_eq!(expected, vec![-2, 3, -1]);
    }

    #[test]
    fn primitive_rejects_zero() {
        assert_eq!(primitive(&ivec![0, 0]), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn rational_primitive() {
        let v = vec![rat(1, 2), rat(-3, 4)];
        assert_eq!(primitive_of_rational(&v).unwrap(), ivec![2, -3]);
    }

    #[test]
    fn rat_round_trip() {
        assert_eq!(fmt_rat(&rat(44, 30)), "22/15");
        assert_eq!(parse_rat("22/15"), Some(rat(22, 15)));
        assert_eq!(parse_rat("-7"), Some(rat(-7, 1)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
