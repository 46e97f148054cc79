//! Polynomials in `t` and unreduced rational functions over a coefficient field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};
use crate::text::{self, Algebra, FieldAlgebra};
use crate::LogValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldDescriptor,
    /// `a_0, ..., a_d` with `a_d != 0`; empty for the zero polynomial.
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: FieldDescriptor, coeffs: Vec<FieldElement>) -> Self {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from another field");
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(c.field(), vec![c])
    }

    pub fn t(field: FieldDescriptor) -> Self {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `t - λ`
    pub fn linear(lambda: &FieldElement) -> Self {
        let f = lambda.field();
        Poly::new(f, vec![-lambda, f.one()])
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Multiplicity of the root `t = 0`.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(self.field.one()), |acc, _| acc.mul(self))
    }

    /// `Q(t) = P(t + λ)` by Horner's rule on the shifted variable.
    pub fn recenter(&self, lambda: &FieldElement) -> Poly {
        let shift = Poly::new(self.field, vec![lambda.clone(), self.field.one()]);
        let mut q = Poly::zero(self.field);
        for a in self.coeffs.iter().rev() {
            q = q.mul(&shift).add(&Poly::constant(a.clone()));
        }
        q
    }

    /// Coefficient valuations `(i, v(a_i))` for nonzero coefficients.
    pub fn valuation_points(&self) -> Vec<(usize, LogValue)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.valuation()))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Lower convex hull of `(i, v_i)` as a list of root valuations with
/// multiplicities: each hull edge of slope `-r` and horizontal length `k`
/// contributes `(r, k)`. Returned in increasing `r`.
pub fn hull_root_valuations(points: &[(usize, LogValue)]) -> Vec<(LogValue, usize)> {
    let mut pts: Vec<&(usize, LogValue)> = points.iter().filter(|(_, v)| v.is_finite()).collect();
    pts.sort_by_key(|(i, _)| *i);
    let mut hull: Vec<&(usize, LogValue)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b when it lies on or above the segment a-p
            let lhs = (&b.1 - &a.1).scale_int((p.0 - a.0) as i64);
            let rhs = (&p.1 - &a.1).scale_int((b.0 - a.0) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out: Vec<(LogValue, usize)> = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            let r = (&w[0].1 - &w[1].1).scale(&BigRational::new(BigInt::from(1), BigInt::from(len)));
            (r, len)
        })
        .collect();
    out.reverse();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Root valuations with multiplicity, increasing.
    pub slopes: Vec<(LogValue, usize)>,
}

impl NewtonPolygon {
    /// Multiset of root valuations, one entry per root.
    pub fn root_valuations(&self) -> Vec<LogValue> {
        self.slopes.iter().flat_map(|(v, k)| std::iter::repeat_n(v.clone(), *k)).collect()
    }
}

pub fn newton_polygon(p: &Poly) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(NewtonPolygon { slopes: hull_root_valuations(&p.valuation_points()) })
}

/// A formal quotient `num / den`; never reduced.
#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert_eq!(num.field, den.field);
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::constant(p.field.one());
        RatFun { num: p, den: one }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn t(field: FieldDescriptor) -> Self {
        Self::from_poly(Poly::t(field))
    }

    pub fn field(&self) -> FieldDescriptor {
        self.num.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, g: &RatFun) -> RatFun {
        RatFun { num: self.num.mul(&g.den).add(&g.num.mul(&self.den)), den: self.den.mul(&g.den) }
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, g: &RatFun) -> RatFun {
        self.add(&g.neg())
    }

    pub fn mul(&self, g: &RatFun) -> RatFun {
        RatFun { num: self.num.mul(&g.num), den: self.den.mul(&g.den) }
    }

    pub fn invert(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, g: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&g.invert()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFun> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Ok(RatFun { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn parse(s: &str, field: FieldDescriptor) -> Result<RatFun> {
        text::parse_with(&RatFunAlgebra(field), s)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// Rational functions in `t` with constants from the field.
pub struct RatFunAlgebra(pub FieldDescriptor);

impl Algebra for RatFunAlgebra {
    type Elem = RatFun;

    fn int(&self, n: &BigInt) -> Result<RatFun> {
        Ok(RatFun::constant(self.0.bigint(n)))
    }

    fn var(&self, name: &str) -> Result<RatFun> {
        match name {
            "t" => Ok(RatFun::t(self.0)),
            other => Ok(RatFun::constant(FieldAlgebra(self.0).var(other)?)),
        }
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> Result<RatFun> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &RatFun, b: &RatFun) -> Result<RatFun> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> Result<RatFun> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &RatFun, b: &RatFun) -> Result<RatFun> {
        a.div(b)
    }

    fn neg(&self, a: &RatFun) -> Result<RatFun> {
        Ok(a.neg())
    }

    fn pow(&self, a: &RatFun, e: &BigRational) -> Result<RatFun> {
        if e.is_integer() {
            let k = e.to_integer().to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
            return a.pow(k);
        }
        // fractional powers only make sense for constants such as z^(1/3)
        match (a.num.degree(), a.den.degree()) {
            (Some(0), Some(0)) => {
                let n = a.num.coeff(0).pow_rational(e)?;
                let d = a.den.coeff(0).pow_rational(e)?;
                RatFun::new(Poly::constant(n), Poly::constant(d))
            }
            _ => Err(Error::Parse(format!("fractional power {e} of a non-constant"))),
        }
    }
}
