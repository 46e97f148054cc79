//! Exact log-scale norm values.
//!
//! A norm `r > 0` is stored as `v = -log2(r)`, an element of the ordered
//! group `Q + Q*sqrt(2)`; the norm of zero is the distinguished value
//! [`LogValueOf::Infinity`]. Every comparison is decided exactly by sign
//! analysis, so no inequality in the crate ever depends on floating point.
//!
//! The group is generic over the rational scalar. The crate root fixes the
//! arbitrary-precision instance as [`crate::LogValue`] and a machine-word
//! instance as [`crate::LogValue64`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar usable as the coefficient type of [`LogValueOf`].
pub trait RationalScalar:
    Clone + Ord + Hash + fmt::Debug + fmt::Display + FromStr + Signed + FromPrimitive + ToPrimitive
{
    fn floor_int(&self) -> Self;
    fn is_integral(&self) -> bool;
    fn denominator_scalar(&self) -> Self;
}

impl<T> RationalScalar for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + fmt::Debug + fmt::Display + FromStr + FromPrimitive + ToPrimitive,
    Ratio<T>: FromPrimitive + ToPrimitive,
{
    fn floor_int(&self) -> Self {
        self.floor()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn denominator_scalar(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }
}

/// `a + b*sqrt(2)` or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LogValueOf<Q> {
    Finite { a: Q, b: Q },
    Infinity,
}

fn sign_of<Q: RationalScalar>(a: &Q, b: &Q) -> Ordering {
    let za = a.cmp(&Q::zero());
    let zb = b.cmp(&Q::zero());
    use Ordering::*;
    match (za, zb) {
        (Equal, s) | (s, Equal) => s,
        (Greater, Greater) => Greater,
        (Less, Less) => Less,
        // mixed signs: compare a^2 with 2 b^2 (never equal, sqrt(2) is irrational)
        (Greater, Less) => {
            let two_b2 = b.clone() * b.clone() * Q::from_i64(2).unwrap();
            (a.clone() * a.clone()).cmp(&two_b2)
        }
        (Less, Greater) => {
            let two_b2 = b.clone() * b.clone() * Q::from_i64(2).unwrap();
            two_b2.cmp(&(a.clone() * a.clone()))
        }
    }
}

impl<Q: RationalScalar> LogValueOf<Q> {
    pub fn new(a: Q, b: Q) -> Self {
        LogValueOf::Finite { a, b }
    }

    pub fn rational(a: Q) -> Self {
        LogValueOf::Finite { a, b: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_i64(n).expect("integer fits the scalar"))
    }

    /// `num/den` as a rational value.
    pub fn frac(num: i64, den: i64) -> Self {
        let q = Q::from_i64(num).unwrap() / Q::from_i64(den).unwrap();
        Self::rational(q)
    }

    pub fn sqrt2() -> Self {
        LogValueOf::Finite { a: Q::zero(), b: Q::one() }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LogValueOf::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogValueOf::Finite { a, b } if a.is_zero() && b.is_zero())
    }

    /// Rational part, `None` for infinity.
    pub fn a(&self) -> Option<&Q> {
        match self {
            LogValueOf::Finite { a, .. } => Some(a),
            LogValueOf::Infinity => None,
        }
    }

    /// Coefficient of sqrt(2), `None` for infinity.
    pub fn b(&self) -> Option<&Q> {
        match self {
            LogValueOf::Finite { b, .. } => Some(b),
            LogValueOf::Infinity => None,
        }
    }

    /// The value as a rational number when the sqrt(2) part vanishes.
    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            LogValueOf::Finite { a, b } if b.is_zero() => Some(a),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn signum(&self) -> Ordering {
        match self {
            LogValueOf::Finite { a, b } => sign_of(a, b),
            LogValueOf::Infinity => Ordering::Greater,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (LogValueOf::Finite { a, b }, LogValueOf::Finite { a: c, b: d }) => {
                Ok(LogValueOf::Finite { a: a.clone() - c.clone(), b: b.clone() - d.clone() })
            }
            (LogValueOf::Infinity, LogValueOf::Finite { .. }) => Ok(LogValueOf::Infinity),
            (LogValueOf::Finite { .. }, LogValueOf::Infinity) => Err(Error::SubFromFinite),
            (LogValueOf::Infinity, LogValueOf::Infinity) => Err(Error::IndeterminateDifference),
        }
    }

    /// Multiply by a rational. Infinity only admits positive factors.
    pub fn checked_scale(&self, q: &Q) -> Result<Self> {
        match self {
            LogValueOf::Finite { a, b } => Ok(LogValueOf::Finite { a: a.clone() * q.clone(), b: b.clone() * q.clone() }),
            LogValueOf::Infinity if q.is_positive() => Ok(LogValueOf::Infinity),
            LogValueOf::Infinity => Err(Error::InfiniteScale),
        }
    }

    /// Scale by a rational; panics on `Infinity * q` with `q <= 0`.
    pub fn scale(&self, q: &Q) -> Self {
        self.checked_scale(q).expect("scaling infinity by a non-positive factor")
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Q::from_i64(n).unwrap())
    }

    pub fn min_of(a: Self, b: Self) -> Self {
        std::cmp::min(a, b)
    }

    /// Decimal approximation, for plotting columns only.
    pub fn approx(&self) -> f64 {
        match self {
            LogValueOf::Finite { a, b } => {
                a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
            }
            LogValueOf::Infinity => f64::INFINITY,
        }
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor(&self) -> Option<Q> {
        match self {
            LogValueOf::Infinity => return None,
            LogValueOf::Finite { a, b } if b.is_zero() => return Some(a.floor_int()),
            _ => {}
        }
        let est = self.approx().floor();
        let mut k = Q::from_f64(est)?.floor_int();
        while Self::rational(k.clone()) > *self {
            k = k - Q::one();
        }
        while Self::rational(k.clone() + Q::one()) <= *self {
            k = k + Q::one();
        }
        Some(k)
    }

    /// Smallest integer `k` with `k >= self`.
    pub fn ceil(&self) -> Option<Q> {
        let neg = -self.clone();
        neg.floor().map(|k| -k)
    }

    /// Largest multiple of `step` (positive rational) that is `<= self`.
    pub fn floor_to_grid(&self, step: &Q) -> Option<Q> {
        let inv = Q::one() / step.clone();
        self.checked_scale(&inv).ok()?.floor().map(|k| k * step.clone())
    }

    /// Smallest multiple of `step` that is `>= self`.
    pub fn ceil_to_grid(&self, step: &Q) -> Option<Q> {
        let inv = Q::one() / step.clone();
        self.checked_scale(&inv).ok()?.ceil().map(|k| k * step.clone())
    }

    /// Midpoint of two finite values.
    pub fn midpoint(&self, other: &Self) -> Self {
        let half = Q::one() / Q::from_i64(2).unwrap();
        (self.clone() + other.clone()).scale(&half)
    }
}

impl<Q: RationalScalar> PartialOrd for LogValueOf<Q> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<Q: RationalScalar> Ord for LogValueOf<Q> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogValueOf::Infinity, LogValueOf::Infinity) => Ordering::Equal,
            (LogValueOf::Infinity, _) => Ordering::Greater,
            (_, LogValueOf::Infinity) => Ordering::Less,
            (LogValueOf::Finite { a, b }, LogValueOf::Finite { a: c, b: d }) => {
                sign_of(&(a.clone() - c.clone()), &(b.clone() - d.clone()))
            }
        }
    }
}

impl<Q: RationalScalar> Add for LogValueOf<Q> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (LogValueOf::Finite { a, b }, LogValueOf::Finite { a: c, b: d }) => LogValueOf::Finite { a: a + c, b: b + d },
            _ => LogValueOf::Infinity,
        }
    }
}

impl<'a, Q: RationalScalar> Add<&'a LogValueOf<Q>> for &'a LogValueOf<Q> {
    type Output = LogValueOf<Q>;

    fn add(self, rhs: Self) -> LogValueOf<Q> {
        self.clone() + rhs.clone()
    }
}

/// Panics when the subtrahend is infinite; see [`LogValueOf::checked_sub`].
impl<Q: RationalScalar> Sub for LogValueOf<Q> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        match self.checked_sub(&rhs) {
            Ok(v) => v,
            Err(e) => panic!("log value subtraction: {e}"),
        }
    }
}

impl<'a, Q: RationalScalar> Sub<&'a LogValueOf<Q>> for &'a LogValueOf<Q> {
    type Output = LogValueOf<Q>;

    fn sub(self, rhs: Self) -> LogValueOf<Q> {
        self.clone() - rhs.clone()
    }
}

impl<Q: RationalScalar> Neg for LogValueOf<Q> {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            LogValueOf::Finite { a, b } => LogValueOf::Finite { a: -a, b: -b },
            LogValueOf::Infinity => panic!("negating an infinite log value"),
        }
    }
}

impl<Q: RationalScalar> std::iter::Sum for LogValueOf<Q> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<Q: RationalScalar> fmt::Display for LogValueOf<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValueOf::Infinity => write!(f, "inf"),
            LogValueOf::Finite { a, b } if b.is_zero() => write!(f, "{a}"),
            LogValueOf::Finite { a, b } => {
                let coef = |f: &mut fmt::Formatter<'_>, b: &Q| {
                    if b.is_one() {
                        write!(f, "sqrt2")
                    } else {
                        write!(f, "{b}*sqrt2")
                    }
                };
                if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-")?;
                    }
                    coef(f, &b.abs())
                } else {
                    write!(f, "{a}{}", if b.is_negative() { "-" } else { "+" })?;
                    coef(f, &b.abs())
                }
            }
        }
    }
}

fn parse_scalar<Q: RationalScalar>(s: &str) -> Result<Q> {
    let t = s.strip_prefix('+').unwrap_or(s);
    t.parse::<Q>().map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

impl<Q: RationalScalar> FromStr for LogValueOf<Q> {
    type Err = Error;

    /// Accepts `inf`, `p/q`, `sqrt2`, `-sqrt2`, `r/s*sqrt2`, `p/q+r/s*sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty log value".into()));
        }
        if s == "inf" || s == "+inf" {
            return Ok(LogValueOf::Infinity);
        }
        let Some(rest) = s.strip_suffix("sqrt2") else {
            return Ok(Self::rational(parse_scalar(&s)?));
        };
        let rest = rest.strip_suffix('*').unwrap_or(rest);
        let split = rest
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a_str, b_str) = match split {
            Some(i) => (&rest[..i], &rest[i..]),
            None => ("", rest),
        };
        let a = if a_str.is_empty() { Q::zero() } else { parse_scalar(a_str)? };
        let b = match b_str {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            other => parse_scalar(other)?,
        };
        Ok(LogValueOf::Finite { a, b })
    }
}

impl<Q: RationalScalar> Serialize for LogValueOf<Q> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogValueOf::Infinity => serializer.serialize_str("inf"),
            LogValueOf::Finite { a, b } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("a", &a.to_string())?;
                map.serialize_entry("b", &b.to_string())?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LogValueRepr {
    Tag(String),
    Pair { a: String, b: String },
}

impl<'de, Q: RationalScalar> Deserialize<'de> for LogValueOf<Q> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match LogValueRepr::deserialize(deserializer)? {
            LogValueRepr::Tag(s) if s == "inf" => Ok(LogValueOf::Infinity),
            LogValueRepr::Tag(s) => Err(de::Error::custom(format!("expected \"inf\" or {{a, b}}, got {s:?}"))),
            LogValueRepr::Pair { a, b } => {
                let a = parse_scalar(&a).map_err(de::Error::custom)?;
                let b = parse_scalar(&b).map_err(de::Error::custom)?;
                Ok(LogValueOf::Finite { a, b })
            }
        }
    }
}

/// The kinds of value group that occur for the coefficient fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueGroup {
    /// Discrete: the uniformizer has value 1.
    Integers,
    /// `Z[1/p]`, dense.
    PAdicFractions(u64),
    /// `Z + Z*sqrt(2)`, dense.
    IntegersPlusSqrt2,
}

impl ValueGroup {
    pub fn is_dense(&self) -> bool {
        !matches!(self, ValueGroup::Integers)
    }

    pub fn contains<Q: RationalScalar>(&self, v: &LogValueOf<Q>) -> bool {
        let (a, b) = match v {
            LogValueOf::Finite { a, b } => (a, b),
            LogValueOf::Infinity => return false,
        };
        match self {
            ValueGroup::Integers => b.is_zero() && a.is_integral(),
            ValueGroup::PAdicFractions(p) => b.is_zero() && is_power_of(&a.denominator_scalar(), *p),
            ValueGroup::IntegersPlusSqrt2 => a.is_integral() && b.is_integral(),
        }
    }

    /// Whether some positive multiple of `v` lies in the group.
    pub fn divisible_closure_contains<Q: RationalScalar>(&self, v: &LogValueOf<Q>) -> bool {
        match v {
            LogValueOf::Infinity => false,
            LogValueOf::Finite { b, .. } => match self {
                ValueGroup::Integers | ValueGroup::PAdicFractions(_) => b.is_zero(),
                ValueGroup::IntegersPlusSqrt2 => true,
            },
        }
    }

    /// A grid `step` such that every multiple of it lies in the group, with
    /// `step <= bound`. `None` for the discrete group when `bound < 1`.
    pub fn grid_step_below<Q: RationalScalar>(&self, bound: &Q) -> Option<Q> {
        match self {
            ValueGroup::Integers | ValueGroup::IntegersPlusSqrt2 => {
                if *bound >= Q::one() {
                    Some(Q::one())
                } else {
                    None
                }
            }
            ValueGroup::PAdicFractions(p) => {
                let p = Q::from_u64(*p)?;
                let mut step = Q::one();
                while step > *bound {
                    step = step / p.clone();
                }
                Some(step)
            }
        }
    }
}

fn is_power_of<Q: RationalScalar>(d: &Q, p: u64) -> bool {
    let p = Q::from_u64(p).unwrap();
    let mut d = d.clone();
    while d > Q::one() {
        let q = d.clone() / p.clone();
        if !q.is_integral() {
            return false;
        }
        d = q;
    }
    d.is_one()
}

/// `divisible_closure_member` in functional form.
pub fn divisible_closure_member<Q: RationalScalar>(v: &LogValueOf<Q>, group: ValueGroup) -> bool {
    group.divisible_closure_contains(v)
}
