//! Laurent polynomials in `T` with the Gauss norm `|T| = 2^-s`, for a
//! log-radius `s` outside the divisible closure of the coefficient value
//! group. Distinct monomials then never tie, so the norm is multiplicative
//! and every nonzero element has a unique dominant term.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};
use crate::text::{self, Algebra, FieldAlgebra};
use crate::LogValue;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusElement {
    field: FieldDescriptor,
    s: LogValue,
    terms: BTreeMap<i64, FieldElement>,
}

impl AnnulusElement {
    pub fn zero(field: FieldDescriptor, s: LogValue) -> Result<Self> {
        if field.value_group().divisible_closure_contains(&s) || !s.is_finite() {
            return Err(Error::RadiusInDivisibleClosure(s.to_string()));
        }
        Ok(AnnulusElement { field, s, terms: BTreeMap::new() })
    }

    pub fn monomial(field: FieldDescriptor, s: LogValue, n: i64, c: FieldElement) -> Result<Self> {
        let mut x = Self::zero(field, s)?;
        if !c.is_zero() {
            x.terms.insert(n, c);
        }
        Ok(x)
    }

    pub fn one(field: FieldDescriptor, s: LogValue) -> Result<Self> {
        Self::monomial(field, s, 0, field.one())
    }

    fn like(&self, terms: BTreeMap<i64, FieldElement>) -> Self {
        AnnulusElement { field: self.field, s: self.s.clone(), terms }
    }

    pub fn radius(&self) -> &LogValue {
        &self.s
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    fn term_valuation(&self, n: i64, c: &FieldElement) -> LogValue {
        &c.valuation() + &self.s.scale_int(n)
    }

    /// The dominant term `(n, a_n)`; unique because `s` is off the divisible closure.
    pub fn dominant(&self) -> Option<(i64, &FieldElement)> {
        self.terms.iter().min_by(|a, b| self.term_valuation(*a.0, a.1).cmp(&self.term_valuation(*b.0, b.1))).map(|(n, c)| (*n, c))
    }

    /// `v_s(x) = min_n (v(a_n) + n s)`.
    pub fn valuation(&self) -> LogValue {
        self.dominant().map_or(LogValue::Infinity, |(n, c)| self.term_valuation(n, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.field, &self.s), (other.field, &other.s), "elements of different annuli");
        let mut terms = self.terms.clone();
        for (n, c) in &other.terms {
            let sum = match terms.remove(n) {
                Some(a) => &a + c,
                None => c.clone(),
            };
            if !sum.is_zero() {
                terms.insert(*n, sum);
            }
        }
        self.like(terms)
    }

    pub fn neg(&self) -> Self {
        self.like(self.terms.iter().map(|(n, c)| (*n, -c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = self.like(BTreeMap::new());
        for (n, a) in &self.terms {
            let part = other.terms.iter().map(|(m, b)| (n + m, a * b)).filter(|(_, c)| !c.is_zero()).collect();
            acc = acc.add(&self.like(part));
        }
        acc
    }

    pub fn parse(s: &str, field: FieldDescriptor, radius: LogValue) -> Result<Self> {
        let alg = AnnulusAlgebra { field, s: radius };
        AnnulusElement::zero(field, alg.s.clone())?;
        text::parse_with(&alg, s)
    }
}

impl fmt::Display for AnnulusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{n}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct AnnulusInverse {
    pub inverse: AnnulusElement,
    /// Number of geometric-series terms summed.
    pub terms: usize,
    /// `v_s(x*y - 1)`, `Infinity` for exact inverses.
    pub residual: LogValue,
}

/// `y` with `v_s(x y - 1) > prec`: factor out the dominant monomial `d` and
/// sum `d^-1 * sum_{i<K} (-r)^i` with `r = d^-1 x - 1`, taking the smallest
/// `K` with `K v_s(r) > prec`.
pub fn annulus_invert(x: &AnnulusElement, prec: &LogValue) -> Result<AnnulusInverse> {
    let (n, c) = x.dominant().ok_or(Error::ZeroDivisorAtPrecision)?;
    let d_inv = AnnulusElement::monomial(x.field, x.s.clone(), -n, c.invert()?)?;
    let one = AnnulusElement::one(x.field, x.s.clone())?;
    let r = d_inv.mul(x).sub(&one);
    if r.is_zero() {
        return Ok(AnnulusInverse { inverse: d_inv, terms: 1, residual: LogValue::Infinity });
    }
    let vr = r.valuation();
    debug_assert!(vr.is_positive());
    let mut k: usize = 1;
    while vr.scale_int(k as i64) <= *prec {
        k += 1;
    }
    let minus_r = r.neg();
    let mut power = one.clone();
    let mut sum = one.clone();
    for _ in 1..k {
        power = power.mul(&minus_r);
        sum = sum.add(&power);
    }
    Ok(AnnulusInverse { inverse: d_inv.mul(&sum), terms: k, residual: vr.scale_int(k as i64) })
}

struct AnnulusAlgebra {
    field: FieldDescriptor,
    s: LogValue,
}

impl Algebra for AnnulusAlgebra {
    type Elem = AnnulusElement;

    fn int(&self, n: &BigInt) -> Result<AnnulusElement> {
        AnnulusElement::monomial(self.field, self.s.clone(), 0, self.field.bigint(n))
    }

    fn var(&self, name: &str) -> Result<AnnulusElement> {
        match name {
            "T" => AnnulusElement::monomial(self.field, self.s.clone(), 1, self.field.one()),
            other => AnnulusElement::monomial(self.field, self.s.clone(), 0, FieldAlgebra(self.field).var(other)?),
        }
    }

    fn add(&self, a: &AnnulusElement, b: &AnnulusElement) -> Result<AnnulusElement> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &AnnulusElement, b: &AnnulusElement) -> Result<AnnulusElement> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &AnnulusElement, b: &AnnulusElement) -> Result<AnnulusElement> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &AnnulusElement, b: &AnnulusElement) -> Result<AnnulusElement> {
        match b.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (n, c) = b.terms.iter().next().unwrap();
                Ok(a.mul(&AnnulusElement::monomial(self.field, self.s.clone(), -n, c.invert()?)?))
            }
            _ => Err(Error::Parse("division only by monomials; use annulus_invert".into())),
        }
    }

    fn neg(&self, a: &AnnulusElement) -> Result<AnnulusElement> {
        Ok(a.neg())
    }

    fn pow(&self, a: &AnnulusElement, e: &BigRational) -> Result<AnnulusElement> {
        if !e.is_integer() {
            if a.terms.len() == 1 && a.terms.contains_key(&0) {
                let c = a.terms[&0].pow_rational(e)?;
                return AnnulusElement::monomial(self.field, self.s.clone(), 0, c);
            }
            return Err(Error::Parse(format!("exponent {e} must be an integer")));
        }
        let k = e.to_integer().to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
        let one = AnnulusElement::one(self.field, self.s.clone())?;
        let base = if k < 0 { self.div(&one, a)? } else { a.clone() };
        Ok((0..k.abs()).fold(one, |acc, _| acc.mul(&base)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> FieldDescriptor {
        FieldDescriptor::padic(2).unwrap()
    }

    fn el(s: &str) -> AnnulusElement {
        AnnulusElement::parse(s, q2(), LogValue::sqrt2()).unwrap()
    }

    #[test]
    fn rational_radius_rejected() {
        assert!(matches!(AnnulusElement::zero(q2(), LogValue::frac(3, 2)), Err(Error::RadiusInDivisibleClosure(_))));
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let inv = annulus_invert(&el("T"), &LogValue::int(5)).unwrap();
        assert_eq!(inv.inverse, el("T^-1"));
        assert_eq!(inv.residual, LogValue::Infinity);
        let inv = annulus_invert(&el("1"), &LogValue::int(5)).unwrap();
        assert_eq!(inv.inverse, el("1"));
    }

    #[test]
    fn geometric_inverse_of_t_minus_lambda() {
        // v(2) = 1 < sqrt2, so the constant term dominates and r = -T/2
        let x = el("T - 2");
        assert_eq!(x.dominant().unwrap().0, 0);
        let prec = LogValue::int(5);
        let inv = annulus_invert(&x, &prec).unwrap();
        // K (sqrt2 - 1) > 5 first holds at K = 13
        assert_eq!(inv.terms, 13);
        let one = AnnulusElement::one(q2(), LogValue::sqrt2()).unwrap();
        let residual = x.mul(&inv.inverse).sub(&one).valuation();
        assert_eq!(residual, inv.residual);
        assert_eq!(residual, LogValue::new(BigRational::from_integer((-13).into()), BigRational::from_integer(13.into())));
        assert!(residual > prec);
        // the K-th dropped term of the inverse itself has v = K (sqrt2 - 1) - 1
        let dropped = |k: i64| LogValue::new(BigRational::from_integer((-k - 1).into()), BigRational::from_integer(k.into()));
        assert!(dropped(14) < prec && dropped(15) > prec);
    }

    #[test]
    fn zero_is_not_invertible() {
        let z = AnnulusElement::zero(q2(), LogValue::sqrt2()).unwrap();
        assert!(matches!(annulus_invert(&z, &LogValue::int(1)), Err(Error::ZeroDivisorAtPrecision)));
    }

    #[test]
    fn multiplicative_on_examples() {
        let a = el("3*T^2 + 2 + 4*T^-1");
        let b = el("T - 2 + 8*T^-3");
        assert_eq!(a.mul(&b).valuation(), &a.valuation() + &b.valuation());
        assert_eq!(AnnulusElement::parse(&a.to_string(), q2(), LogValue::sqrt2()).unwrap(), a);
    }
}
