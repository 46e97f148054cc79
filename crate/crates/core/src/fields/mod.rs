//! Exact valued coefficient fields.
//!
//! Two families are supported:
//!
//! * `padic:p`: the rationals with the `p`-adic valuation, normalized so
//!   that `v(p) = 1`; value group `Z`.
//! * `genlaurent:p` and `genlaurent:p:u`: finite sums `sum c_e z^e` with
//!   exponents in `Z[1/p]` and coefficients in `F_p` or `F_p(u)`; value group
//!   `Z[1/p]`, which is dense. These are the finite-support elements of the
//!   completed perfection of `F_p((z))` (resp. of `F_p(u)((z))`).

mod residue;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use residue::{elementary_symmetric, Residue};

use crate::error::{Error, Result};
use crate::logval::ValueGroup;
use crate::LogValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueKind {
    /// Residue field `F_p`.
    Fp,
    /// Residue field `F_p(u)`, infinite.
    FpU,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    PAdicQ { p: u64 },
    GenLaurent { p: u64, residue: ResidueKind },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldDescriptor {
    pub fn padic(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(FieldDescriptor::PAdicQ { p })
    }

    pub fn gen_laurent(p: u64, residue: ResidueKind) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(FieldDescriptor::GenLaurent { p, residue })
    }

    fn check_prime(p: u64) -> Result<()> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidParameter(format!("{p} is not a supported prime")));
        }
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        match *self {
            FieldDescriptor::PAdicQ { p } | FieldDescriptor::GenLaurent { p, .. } => p,
        }
    }

    pub fn value_group(&self) -> ValueGroup {
        match *self {
            FieldDescriptor::PAdicQ { .. } => ValueGroup::Integers,
            FieldDescriptor::GenLaurent { p, .. } => ValueGroup::PAdicFractions(p),
        }
    }

    pub fn residue_kind(&self) -> ResidueKind {
        match *self {
            FieldDescriptor::PAdicQ { .. } => ResidueKind::Fp,
            FieldDescriptor::GenLaurent { residue, .. } => residue,
        }
    }

    /// Number of elements of the residue field, `None` when infinite.
    pub fn residue_field_size(&self) -> Option<u64> {
        match self.residue_kind() {
            ResidueKind::Fp => Some(self.prime()),
            ResidueKind::FpU => None,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: *self, repr: self.zero_repr() }
    }

    fn zero_repr(&self) -> Repr {
        match self {
            FieldDescriptor::PAdicQ { .. } => Repr::Rational(BigRational::zero()),
            FieldDescriptor::GenLaurent { .. } => Repr::Series(Vec::new()),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.bigint(&BigInt::from(n))
    }

    pub fn bigint(&self, n: &BigInt) -> FieldElement {
        match *self {
            FieldDescriptor::PAdicQ { .. } => FieldElement { field: *self, repr: Repr::Rational(BigRational::from_integer(n.clone())) },
            FieldDescriptor::GenLaurent { p, .. } => {
                let c = n.mod_floor(&BigInt::from(p)).to_i64().unwrap();
                self.monomial(BigRational::zero(), Residue::constant(c, p))
            }
        }
    }

    /// The uniformizer: `p` for `padic:p`, `z` for the Laurent fields.
    pub fn uniformizer(&self) -> FieldElement {
        match *self {
            FieldDescriptor::PAdicQ { p } => self.int(p as i64),
            FieldDescriptor::GenLaurent { p, .. } => self.monomial(BigRational::one(), Residue::one(p)),
        }
    }

    /// `c * z^e`; for `padic:p` this is `c * p^e` with `c` read as an integer.
    pub fn monomial(&self, e: BigRational, c: Residue) -> FieldElement {
        match *self {
            FieldDescriptor::PAdicQ { p } => {
                assert!(e.is_integer(), "p-adic exponents are integers");
                let c = BigRational::from_integer(BigInt::from(c.as_constant().expect("F_p coefficient")));
                let e = e.to_integer().to_i64().unwrap();
                let pe = pow_rational(&BigRational::from_integer(BigInt::from(p)), e);
                FieldElement { field: *self, repr: Repr::Rational(c * pe) }
            }
            FieldDescriptor::GenLaurent { .. } => {
                let repr = if c.is_zero() { Repr::Series(Vec::new()) } else { Repr::Series(vec![(e, c)]) };
                FieldElement { field: *self, repr }
            }
        }
    }

    /// The transcendental `u` of the residue field `F_p(u)`.
    pub fn u(&self) -> Result<FieldElement> {
        match *self {
            FieldDescriptor::GenLaurent { p, residue: ResidueKind::FpU } => Ok(self.monomial(BigRational::zero(), Residue::u(p))),
            _ => Err(Error::InvalidParameter(format!("field {self} has no variable u"))),
        }
    }

    pub fn rational(&self, q: &BigRational) -> Result<FieldElement> {
        let num = self.bigint(q.numer());
        let den = self.bigint(q.denom());
        num.div(&den)
    }

    /// An element whose valuation is exactly `v`, with leading coefficient `tag`
    /// (default 1).
    pub fn monomial_with_valuation(&self, v: &LogValue, tag: Option<&Residue>) -> Result<FieldElement> {
        if !self.value_group().contains(v) {
            return Err(Error::ValueNotInGroup(v.to_string()));
        }
        let e = v.as_rational().unwrap().clone();
        let p = self.prime();
        let c = match tag {
            Some(t) => {
                if t.is_zero() {
                    return Err(Error::InvalidParameter("leading coefficient tag must be nonzero".into()));
                }
                if self.residue_kind() == ResidueKind::Fp && !t.is_constant() {
                    return Err(Error::InvalidParameter(format!("tag {t} is not in F_{p}")));
                }
                t.clone()
            }
            None => Residue::one(p),
        };
        Ok(self.monomial(e, c))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::PAdicQ { p } => write!(f, "padic:{p}"),
            FieldDescriptor::GenLaurent { p, residue: ResidueKind::Fp } => write!(f, "genlaurent:{p}"),
            FieldDescriptor::GenLaurent { p, residue: ResidueKind::FpU } => write!(f, "genlaurent:{p}:u"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let prime = |t: &str| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime in field `{s}`")));
        match parts.as_slice() {
            ["padic", p] => Self::padic(prime(p)?),
            ["genlaurent", p] => Self::gen_laurent(prime(p)?, ResidueKind::Fp),
            ["genlaurent", p, "u"] => Self::gen_laurent(prime(p)?, ResidueKind::FpU),
            _ => Err(Error::Parse(format!("unknown field `{s}` (expected padic:p, genlaurent:p or genlaurent:p:u)"))),
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    /// Strictly increasing exponents, nonzero coefficients.
    Series(Vec<(BigRational, Residue)>),
}

/// An exact element of a valued field described by a [`FieldDescriptor`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldDescriptor,
    repr: Repr,
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

fn padic_val_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

fn padic_val(q: &BigRational, p: u64) -> i64 {
    padic_val_int(q.numer(), p) - padic_val_int(q.denom(), p)
}

fn rational_residue(q: &BigRational, p: u64) -> Residue {
    let pb = BigInt::from(p);
    let a = q.numer().mod_floor(&pb).to_u64().unwrap();
    let b = q.denom().mod_floor(&pb).to_u64().unwrap();
    Residue::constant(a as i64, p).mul(&Residue::constant(b as i64, p).inv().expect("unit denominator"))
}

impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Series(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Single-term Laurent element, or any nonzero p-adic rational.
    pub fn is_monomial(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => !q.is_zero(),
            Repr::Series(t) => t.len() == 1,
        }
    }

    pub fn valuation(&self) -> LogValue {
        match &self.repr {
            Repr::Rational(q) if q.is_zero() => LogValue::Infinity,
            Repr::Rational(q) => LogValue::int(padic_val(q, self.field.prime())),
            Repr::Series(t) => match t.first() {
                Some((e, _)) => LogValue::rational(e.clone()),
                None => LogValue::Infinity,
            },
        }
    }

    /// Valuation together with the leading coefficient in the residue field
    /// (the image of `x / pi^v(x)`). `None` for zero.
    pub fn leading(&self) -> Option<(LogValue, Residue)> {
        let p = self.field.prime();
        match &self.repr {
            Repr::Rational(q) if q.is_zero() => None,
            Repr::Rational(q) => {
                let v = padic_val(q, p);
                let unit = q * pow_rational(&BigRational::from_integer(BigInt::from(p)), -v);
                Some((LogValue::int(v), rational_residue(&unit, p)))
            }
            Repr::Series(t) => t.first().map(|(e, c)| (LogValue::rational(e.clone()), c.clone())),
        }
    }

    /// The rational value of a p-adic element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Series(_) => None,
        }
    }

    /// The terms `(exponent, coefficient)` of a Laurent element.
    pub fn terms(&self) -> Option<&[(BigRational, Residue)]> {
        match &self.repr {
            Repr::Series(t) => Some(t),
            Repr::Rational(_) => None,
        }
    }

    /// Image in the residue field; requires valuation 0.
    pub fn residue(&self) -> Result<Residue> {
        if self.valuation() != LogValue::zero() {
            return Err(Error::NotAUnit);
        }
        let p = self.field.prime();
        match &self.repr {
            Repr::Rational(q) => Ok(rational_residue(q, p)),
            Repr::Series(t) => Ok(t[0].1.clone()),
        }
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.field, other.field, "arithmetic across fields {} and {}", self.field, other.field);
    }

    pub fn try_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    /// Exact inverse; Laurent elements must be monomials.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.repr {
            Repr::Rational(q) => Ok(FieldElement { field: self.field, repr: Repr::Rational(q.recip()) }),
            Repr::Series(t) if t.len() == 1 => {
                let (e, c) = &t[0];
                Ok(FieldElement { field: self.field, repr: Repr::Series(vec![(-e.clone(), c.inv()?)]) })
            }
            Repr::Series(_) => Err(Error::NonMonomialInverse),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.try_same_field(other)?;
        Ok(self * &other.invert()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = self.field.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Rational power of a monomial with unit leading coefficient (e.g. `z^(1/3)`).
    pub fn pow_rational(&self, q: &BigRational) -> Result<Self> {
        if q.is_integer() {
            return self.pow(q.to_integer().to_i64().ok_or_else(|| Error::InvalidParameter("exponent too large".into()))?);
        }
        match &self.repr {
            Repr::Series(t) if t.len() == 1 && t[0].1.is_one() => {
                let e = &t[0].0 * q;
                let v = LogValue::rational(e.clone());
                if !self.field.value_group().contains(&v) {
                    return Err(Error::ValueNotInGroup(v.to_string()));
                }
                Ok(FieldElement { field: self.field, repr: Repr::Series(vec![(e, t[0].1.clone())]) })
            }
            _ => Err(Error::ValueNotInGroup(format!("fractional power {q} of {self}"))),
        }
    }

    fn series_from_map(field: FieldDescriptor, map: BTreeMap<BigRational, Residue>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FieldElement { field, repr: Repr::Series(terms) }
    }

    /// Multiply by a residue-field constant (a Teichmüller-style scalar).
    pub fn scale_residue(&self, c: &Residue) -> Self {
        match &self.repr {
            Repr::Rational(q) => {
                let k = c.as_constant().expect("F_p scalar");
                FieldElement { field: self.field, repr: Repr::Rational(q * BigRational::from_integer(BigInt::from(k))) }
            }
            Repr::Series(t) => {
                let map = t.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect();
                Self::series_from_map(self.field, map)
            }
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_field(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement { field: self.field, repr: Repr::Rational(a + b) },
            (Repr::Series(a), Repr::Series(b)) => {
                let mut map: BTreeMap<BigRational, Residue> = a.iter().cloned().collect();
                for (e, c) in b {
                    let p = c.prime();
                    let slot = map.entry(e.clone()).or_insert_with(|| Residue::zero(p));
                    *slot = slot.add(c);
                }
                FieldElement::series_from_map(self.field, map)
            }
            _ => unreachable!("representation matches field"),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match &self.repr {
            Repr::Rational(a) => FieldElement { field: self.field, repr: Repr::Rational(-a) },
            Repr::Series(t) => FieldElement {
                field: self.field,
                repr: Repr::Series(t.iter().map(|(e, c)| (e.clone(), c.neg())).collect()),
            },
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_field(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement { field: self.field, repr: Repr::Rational(a * b) },
            (Repr::Series(a), Repr::Series(b)) => {
                let mut map: BTreeMap<BigRational, Residue> = BTreeMap::new();
                for (e1, c1) in a {
                    for (e2, c2) in b {
                        let prod = c1.mul(c2);
                        let slot = map.entry(e1 + e2).or_insert_with(|| Residue::zero(prod.prime()));
                        *slot = slot.add(&prod);
                    }
                }
                FieldElement::series_from_map(self.field, map)
            }
            _ => unreachable!("representation matches field"),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

fn fmt_exponent(e: &BigRational) -> String {
    if e.is_one() {
        "z".to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("z^{e}")
    } else {
        format!("z^({e})")
    }
}

fn fmt_coefficient(c: &Residue) -> String {
    let single_term = c.denominator() == [1] && c.numerator().iter().filter(|&&x| x != 0).count() == 1;
    if single_term {
        c.to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::Series(t) if t.is_empty() => write!(f, "0"),
            Repr::Series(t) => {
                for (i, (e, c)) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if e.is_zero() {
                        write!(f, "{}", fmt_coefficient(c))?;
                    } else if c.is_one() {
                        write!(f, "{}", fmt_exponent(e))?;
                    } else {
                        write!(f, "{}*{}", fmt_coefficient(c), fmt_exponent(e))?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_field_element;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn gl3() -> FieldDescriptor {
        FieldDescriptor::gen_laurent(3, ResidueKind::Fp).unwrap()
    }

    fn gl3u() -> FieldDescriptor {
        FieldDescriptor::gen_laurent(3, ResidueKind::FpU).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let q2 = FieldDescriptor::padic(2).unwrap();
        assert_eq!(q2.int(24).valuation(), LogValue::int(3));
        assert_eq!(q2.rational(&q(3, 8)).unwrap().valuation(), LogValue::int(-3));
        let x = parse_field_element("z^(1/3) + z", gl3()).unwrap();
        assert_eq!(x.valuation(), LogValue::frac(1, 3));
        assert_eq!(q2.zero().valuation(), LogValue::Infinity);
    }

    #[test]
    fn arithmetic_examples() {
        let f = gl3();
        let a = parse_field_element("z + z^2", f).unwrap();
        let z = f.uniformizer();
        assert_eq!(&a * &z, parse_field_element("z^2 + z^3", f).unwrap());
        let cube_root = parse_field_element("z^(1/3)", f).unwrap();
        assert_eq!(cube_root.invert().unwrap(), parse_field_element("z^(-1/3)", f).unwrap());
        let q2 = FieldDescriptor::padic(2).unwrap();
        assert_eq!(q2.rational(&q(3, 4)).unwrap().invert().unwrap(), q2.rational(&q(4, 3)).unwrap());
        assert!(matches!(a.invert(), Err(Error::NonMonomialInverse)));
        assert!(matches!(f.zero().invert(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn characteristic_p_cancellation() {
        let f = gl3();
        let z = f.uniformizer();
        let three_z = &(&z + &z) + &z;
        assert!(three_z.is_zero());
    }

    #[test]
    fn residue_examples() {
        let x = parse_field_element("u^2 + z", gl3u()).unwrap();
        assert_eq!(x.residue().unwrap(), Residue::u_pow(2, 3));
        let y = parse_field_element("2 + z^(1/9)", gl3()).unwrap();
        assert_eq!(y.residue().unwrap(), Residue::constant(2, 3));
        assert!(matches!(gl3().uniformizer().residue(), Err(Error::NotAUnit)));
        let q5 = FieldDescriptor::padic(5).unwrap();
        assert_eq!(q5.rational(&q(7, 3)).unwrap().residue().unwrap(), Residue::constant(4, 5));
    }

    #[test]
    fn monomial_with_valuation_examples() {
        let m = gl3().monomial_with_valuation(&LogValue::frac(5, 9), None).unwrap();
        assert_eq!(m.to_string(), "z^(5/9)");
        let q2 = FieldDescriptor::padic(2).unwrap();
        assert_eq!(q2.monomial_with_valuation(&LogValue::int(3), None).unwrap(), q2.int(8));
        assert!(matches!(q2.monomial_with_valuation(&LogValue::frac(1, 2), None), Err(Error::ValueNotInGroup(_))));
        let tagged = gl3u().monomial_with_valuation(&LogValue::frac(1, 3), Some(&Residue::u_pow(2, 3))).unwrap();
        assert_eq!(tagged.leading().unwrap().1, Residue::u_pow(2, 3));
    }

    #[test]
    fn leading_coefficients() {
        let q3 = FieldDescriptor::padic(3).unwrap();
        let (v, c) = q3.rational(&q(-18, 5)).unwrap().leading().unwrap();
        assert_eq!(v, LogValue::int(2));
        // -18/5 = 9 * (-2/5); -2/5 = -2 * 2 = -4 = 2 mod 3
        assert_eq!(c, Residue::constant(2, 3));
    }

    #[test]
    fn display_round_trip() {
        for (s, f) in [
            ("z^(1/3) + 2*z^(5/9)", gl3()),
            ("1 + z^(-1/3)", gl3()),
            ("u^2 + (u + 1)*z + (1)/(u)*z^3", gl3u()),
            ("-3/8", FieldDescriptor::padic(2).unwrap()),
        ] {
            let x = parse_field_element(s, f).unwrap();
            let again = parse_field_element(&x.to_string(), f).unwrap();
            assert_eq!(x, again, "{s} -> {x}");
        }
        assert_eq!(parse_field_element("z^(1/3) + 2*z^(5/9)", gl3()).unwrap().to_string(), "z^(1/3) + 2*z^(5/9)");
    }

    #[test]
    fn descriptor_text() {
        for s in ["padic:2", "genlaurent:3", "genlaurent:5:u"] {
            assert_eq!(s.parse::<FieldDescriptor>().unwrap().to_string(), s);
        }
        assert!("padic:4".parse::<FieldDescriptor>().is_err());
        assert!("laurent:3".parse::<FieldDescriptor>().is_err());
        assert!(gl3().value_group().is_dense());
        assert!(!FieldDescriptor::padic(2).unwrap().value_group().is_dense());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn laurent(f: FieldDescriptor) -> impl Strategy<Value = FieldElement> {
            prop::collection::vec((-6i64..12, 1u32..3, 0i64..3, 0i64..3), 0..4).prop_map(move |terms| {
                let p = f.prime();
                let mut acc = f.zero();
                for (num, den_pow, c, upow) in terms {
                    let e = BigRational::new(num.into(), BigInt::from(p).pow(den_pow));
                    let mut coef = Residue::constant(c, p);
                    if f.residue_kind() == ResidueKind::FpU {
                        coef = coef.add(&Residue::u_pow(upow, p));
                    }
                    acc = &acc + &f.monomial(e, coef);
                }
                acc
            })
        }

        fn padic() -> impl Strategy<Value = FieldElement> {
            (-200i64..200, 1i64..50).prop_map(|(n, d)| FieldDescriptor::padic(2).unwrap().rational(&q(n, d)).unwrap())
        }

        fn any_element() -> impl Strategy<Value = FieldElement> {
            prop_oneof![laurent(gl3()), laurent(gl3u()), padic()]
        }

        fn pair() -> impl Strategy<Value = (FieldElement, FieldElement)> {
            prop_oneof![
                (laurent(gl3()), laurent(gl3())),
                (laurent(gl3u()), laurent(gl3u())),
                (padic(), padic()),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(500))]

            #[test]
            fn valuation_is_additive((x, y) in pair()) {
                prop_assert_eq!((&x * &y).valuation(), x.valuation() + y.valuation());
            }

            #[test]
            fn ultrametric_inequality((x, y) in pair()) {
                let s = (&x + &y).valuation();
                let m = std::cmp::min(x.valuation(), y.valuation());
                prop_assert!(s >= m);
                if x.valuation() != y.valuation() {
                    prop_assert_eq!(s, m);
                }
            }

            #[test]
            fn residue_is_multiplicative_on_units((x, y) in pair()) {
                if let (Some((vx, _)), Some((vy, _))) = (x.leading(), y.leading()) {
                    // normalize to units by dividing out the leading monomial's valuation
                    let f = x.field();
                    let ux = &x * &f.monomial_with_valuation(&(-vx), None).unwrap();
                    let uy = &y * &f.monomial_with_valuation(&(-vy), None).unwrap();
                    let r = (&ux * &uy).residue().unwrap();
                    prop_assert_eq!(r, ux.residue().unwrap().mul(&uy.residue().unwrap()));
                }
            }

            #[test]
            fn text_round_trip(x in any_element()) {
                let back = parse_field_element(&x.to_string(), x.field()).unwrap();
                prop_assert_eq!(back, x);
            }
        }
    }
}
