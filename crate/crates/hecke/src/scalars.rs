//! Exact rational scalars and Laurent polynomials in the lattice generators.
//!
//! `Scalar` keeps small values in a pair of machine integers and promotes to
//! arbitrary precision on overflow, so the common case never allocates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HeckeError, Result};

#[derive(Clone)]
enum Repr {
    /// numerator, denominator; denominator > 0, lowest terms.
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone)]
pub struct Scalar(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Scalar {
    #[must_use]
    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    #[must_use]
    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    #[must_use]
    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Small(n, 1))
    }

    /// `num/den`; panics if `den == 0`.
    #[must_use]
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Self::zero();
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Scalar(Repr::Small(a, b)),
            _ => Scalar(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // `r` must already be reduced.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Scalar(Repr::Small(n, d));
            }
        }
        Scalar(Repr::Big(Box::new(r)))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    #[must_use]
    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    #[must_use]
    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Image in `Z/pZ`, or `None` when `p` divides the denominator.
    #[must_use]
    pub fn residue(&self, p: u64) -> Option<u64> {
        let (n, d) = match &self.0 {
            Repr::Small(n, d) => (
                i128::from(*n).rem_euclid(i128::from(p)) as u64,
                (*d as u64) % p,
            ),
            Repr::Big(b) => {
                let bp = BigInt::from(p);
                let n = b.numer().mod_floor(&bp).to_u64().expect("reduced below p");
                let d = b.denom().mod_floor(&bp).to_u64().expect("reduced below p");
                (n, d)
            }
        };
        if d == 0 {
            return None;
        }
        Some(crate::linalg::modp::mul(
            n,
            crate::linalg::modp::inv(d, p),
            p,
        ))
    }

    #[must_use]
    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    #[must_use]
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    #[must_use]
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    #[must_use]
    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`Scalar::checked_inv`] otherwise.
    #[must_use]
    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn checked_inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Repr::Big(b) => Some(Self::from_big(b.recip())),
        }
    }

    /// Integer power; negative exponents invert. Panics for `0^k`, `k < 0`.
    #[must_use]
    pub fn pow(&self, k: i32) -> Scalar {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Exact square root when the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &rn * &rn == n && &rd * &rd == d {
            Some(Scalar::from_bigints(rn, rd))
        } else {
            None
        }
    }

    /// Rough size in bits of numerator plus denominator.
    #[must_use]
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => {
                (64 - n.unsigned_abs().leading_zeros() as u64) + (64 - d.leading_zeros() as u64)
            }
            Repr::Big(b) => b.numer().bits() + b.denom().bits(),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_int(n as i64)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Scalar, y: &Scalar) -> Scalar {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if *b == 1 && *d == 1 {
                return Scalar::from_i128(*a as i128 + *c as i128, 1);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            let g = gcd_i128(b, d);
            let bd = b / g;
            let num = a * (d / g) + c * bd;
            let den = bd * d;
            Scalar::from_i128(num, den)
        }
        _ => Scalar::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Scalar, y: &Scalar) -> Scalar {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if *a == 0 || *c == 0 {
                return Scalar::zero();
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            let g1 = gcd_i128(a, d);
            let g2 = gcd_i128(c, b);
            let num = (a / g1) * (c / g2);
            let den = (b / g2) * (d / g1);
            match (i64::try_from(num), i64::try_from(den)) {
                (Ok(n), Ok(m)) if n != i64::MIN => Scalar(Repr::Small(n, m)),
                _ => Scalar(Repr::Big(Box::new(BigRational::new_raw(
                    BigInt::from(num),
                    BigInt::from(den),
                )))),
            }
        }
        _ => {
            if x.is_zero() || y.is_zero() {
                Scalar::zero()
            } else {
                Scalar::from_big(x.to_big() * y.to_big())
            }
        }
    }
}

fn neg_ref(x: &Scalar) -> Scalar {
    match &x.0 {
        Repr::Small(n, d) => Scalar::from_i128(-(*n as i128), *d as i128),
        Repr::Big(b) => Scalar::from_big(-(**b).clone()),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $f(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Mul, mul, mul_ref);
binop!(Sub, sub, |x: &Scalar, y: &Scalar| add_ref(x, &neg_ref(y)));
binop!(Div, div, |x: &Scalar, y: &Scalar| mul_ref(x, &y.inv()));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_ref(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_ref(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_ref(self, rhs);
    }
}
impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = add_ref(self, &rhs);
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = add_ref(self, &neg_ref(rhs));
    }
}
impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = add_ref(self, &neg_ref(&rhs));
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_ref(self, rhs);
    }
}
impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = mul_ref(self, &rhs);
    }
}
impl DivAssign<&Scalar> for Scalar {
    fn div_assign(&mut self, rhs: &Scalar) {
        *self = mul_ref(self, &rhs.inv());
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<BigInt>().ok()
}

impl FromStr for Scalar {
    type Err = HeckeError;

    /// Accepts `"n"` or `"n/d"` with an optional sign on `n`.
    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || HeckeError::Parse(format!("not a rational: {s:?}"));
        match t.split_once('/') {
            None => Ok(Scalar::from_bigints(
                parse_int(t).ok_or_else(bad)?,
                BigInt::one(),
            )),
            Some((n, d)) => {
                let n = parse_int(n.trim()).ok_or_else(bad)?;
                let d = parse_int(d.trim()).ok_or_else(bad)?;
                if d.is_zero() {
                    return Err(HeckeError::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::from_bigints(n, d))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!(
                "expected rational string, got {other}"
            ))),
        }
    }
}

/// Exponent vector of a lattice monomial `X_0^{c_0} ... X_n^{c_n}`.
pub type Weight = Vec<i32>;

/// Sparse Laurent polynomial: a map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Weight, Scalar>,
}

impl LaurentPoly {
    #[must_use]
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    #[must_use]
    pub fn constant(rank: usize, c: Scalar) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(vec![0; rank], c);
        p
    }

    #[must_use]
    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Scalar::one())
    }

    /// `c * X^w`.
    #[must_use]
    pub fn monomial(w: Weight, c: Scalar) -> Self {
        let mut p = Self::zero(w.len());
        p.add_term(w, c);
        p
    }

    /// The single generator `X_i^e`.
    #[must_use]
    pub fn var(rank: usize, i: usize, e: i32) -> Self {
        let mut w = vec![0; rank];
        w[i] = e;
        Self::monomial(w, Scalar::one())
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &Scalar)> {
        self.terms.iter()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    #[must_use]
    pub fn coeff(&self, w: &[i32]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Weight, c: Scalar) {
        assert_eq!(w.len(), self.rank, "rank mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &LaurentPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    #[must_use]
    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let mut out = Self::zero(self.rank);
        out.add_assign_scaled(self, c);
        out
    }

    /// Multiply by the monomial `X^w`.
    #[must_use]
    pub fn shift(&self, w: &[i32]) -> LaurentPoly {
        assert_eq!(w.len(), self.rank, "rank mismatch");
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.iter().zip(w).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly {
            rank: self.rank,
            terms,
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if self.rank != other.rank {
            return Err(HeckeError::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        Ok(out)
    }

    /// Exact product; errors on rank mismatch.
    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if self.rank != other.rank {
            return Err(HeckeError::RankMismatch(self.rank, other.rank));
        }
        let mut out = Self::zero(self.rank);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let w = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
                out.add_term(w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Evaluate at a point with nonzero coordinates.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.rank {
            return Err(HeckeError::RankMismatch(self.rank, point.len()));
        }
        if point.iter().any(Scalar::is_zero) {
            return Err(HeckeError::Domain(
                "evaluation point has a zero coordinate".into(),
            ));
        }
        let mut total = Scalar::zero();
        for (w, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(w) {
                if *e != 0 {
                    t *= x.pow(*e);
                }
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let exps: Vec<String> = w.iter().map(i32::to_string).collect();
            write!(f, "({c}) X({})", exps.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `laurent_mul` under its conventional name.
pub fn laurent_mul(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
    f.try_mul(g)
}

/// `laurent_eval` under its conventional name.
pub fn laurent_eval(f: &LaurentPoly, point: &[Scalar]) -> Result<Scalar> {
    f.eval(point)
}
