//! Exact rational arithmetic, point types, linear solving and univariate
//! polynomials in the deformation parameter `t`.
//!
//! Everything in the crate is computed over ℚ. There is no floating point
//! anywhere; equality of every value here is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_i128(n: i128) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Scales `v` so that its first nonzero entry is 1. Returns `None` for the zero vector.
pub(crate) fn normalize_first_nonzero(v: &[Rational]) -> Option<Vec<Rational>> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = lead.recip().expect("nonzero");
    Some(v.iter().map(|x| x * &inv).collect())
}

/// A point of affine d-space, embedded projectively as `(1 : x₁ : … : x_d)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffinePoint(pub Vec<Rational>);

impl AffinePoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        AffinePoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        AffinePoint(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn origin(d: usize) -> Self {
        AffinePoint(vec![Rational::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn sub(&self, other: &AffinePoint) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn to_projective(&self) -> ProjectivePoint {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(Rational::one());
        coords.extend(self.0.iter().cloned());
        ProjectivePoint { coords }
    }
}

/// A point `(0 : y₁ : … : y_d)` of the hyperplane at infinity, stored with
/// first nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct HyperplaneDirection(Vec<Rational>);

impl HyperplaneDirection {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        normalize_first_nonzero(&coords)
            .map(HyperplaneDirection)
            .ok_or(Error::ZeroDirection)
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_projective(&self) -> ProjectivePoint {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(Rational::zero());
        coords.extend(self.0.iter().cloned());
        ProjectivePoint { coords }
    }
}

impl<'de> Deserialize<'de> for HyperplaneDirection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Rational>::deserialize(deserializer)?;
        HyperplaneDirection::new(coords).map_err(serde::de::Error::custom)
    }
}

/// A point of ℙᵈ with homogeneous coordinates scaled so the first nonzero one is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    coords: Vec<Rational>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        normalize_first_nonzero(&coords)
            .map(|coords| ProjectivePoint { coords })
            .ok_or(Error::ZeroDirection)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords[0].is_zero()
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Rational>::deserialize(deserializer)?;
        ProjectivePoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Verdict of an exact square linear solve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    NoSolution,
    InfinitelyMany,
}

/// Reduces `rows` (augmented or not) to row echelon form in place and
/// returns the pivot columns. Only the first `ncols` columns are pivoted on.
fn row_echelon(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip().expect("pivot is nonzero");
        let pivot_row: Vec<Rational> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &factor * y;
                    }
                }
            }
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

/// Exact Gaussian elimination on the square system `a·x = b`.
pub fn solve_affine_linear(a: &[Vec<Rational>], b: &[Rational]) -> LinearSolution {
    let k = a.len();
    assert_eq!(b.len(), k, "right-hand side length mismatch");
    assert!(a.iter().all(|row| row.len() == k), "matrix must be square");
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_echelon(&mut rows, k);
    let rank = pivots.len();
    if rows[rank..].iter().any(|r| !r[k].is_zero()) {
        return LinearSolution::NoSolution;
    }
    if rank < k {
        return LinearSolution::InfinitelyMany;
    }
    LinearSolution::Unique(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Rank of an arbitrary (not necessarily square) matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let ncols = a[0].len();
    let mut rows = a.to_vec();
    row_echelon(&mut rows, ncols).len()
}

/// Determinant by fraction-tracking elimination.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let k = a.len();
    let mut rows = a.to_vec();
    let mut det = Rational::one();
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !rows[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            rows.swap(p, col);
            det = -det;
        }
        let pivot = rows[col][col].clone();
        det = det * &pivot;
        let inv = pivot.recip().unwrap();
        for r in col + 1..k {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..k {
                let delta = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - delta;
            }
        }
    }
    det
}

/// Order of vanishing at `t = 0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(usize),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// A polynomial in `t` over ℚ, coefficients lowest degree first, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(Valuation::Infinity, Valuation::Finite)
    }

    pub fn eval_at_zero(&self) -> Rational {
        self.coeff(0)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Divides by `t^k` and evaluates at `t = 0`.
    pub fn shift_eval(&self, k: usize) -> Result<(RationalPoly, Rational)> {
        if self.valuation() < Valuation::Finite(k) {
            return Err(Error::ValuationTooLow {
                valuation: self.valuation().to_string(),
                shift: k,
            });
        }
        let shifted = RationalPoly::new(self.coeffs.iter().skip(k).cloned().collect());
        let value = shifted.eval_at_zero();
        Ok((shifted, value))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Self::new(out)
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(RationalPoly::new(Vec::<Rational>::deserialize(deserializer)?))
    }
}

/// Minimum valuation over the coordinates of a polynomial vector.
pub fn vector_valuation(v: &[RationalPoly]) -> Valuation {
    v.iter().map(RationalPoly::valuation).min().unwrap_or(Valuation::Infinity)
}

/// Coefficient vector of `t^k` across the coordinates.
pub fn vector_coeff(v: &[RationalPoly], k: usize) -> Vec<Rational> {
    v.iter().map(|p| p.coeff(k)).collect()
}

pub fn vector_sub(a: &[RationalPoly], b: &[RationalPoly]) -> Vec<RationalPoly> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}
