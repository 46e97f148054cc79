//! The weighted Banach field on `F(T_1, T_2, ...)`: norm data `alpha` (the
//! Gauss norm with every `|T_i| = 1`), the depth `f(x)`, projections
//! `pi_k`, and upper bounds `max 2^f(x_i) alpha(x_i)` from decompositions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};
use crate::text::{self, Algebra, FieldAlgebra};
use crate::LogValue;

/// Exponent vector with trailing zeros trimmed; index 0 is `T_1`.
pub type Exponents = Vec<i64>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exponents(a: &[i64], b: &[i64]) -> Exponents {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect())
}

/// Laurent polynomial in `T_1, T_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: FieldDescriptor,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl LaurentPoly {
    pub fn zero(field: FieldDescriptor) -> Self {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn monomial(field: FieldDescriptor, exps: Exponents, c: FieldElement) -> Self {
        let mut p = Self::zero(field);
        if !c.is_zero() {
            p.terms.insert(trim(exps), c);
        }
        p
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c.field(), Vec::new(), c)
    }

    /// The variable `T_k`, `k >= 1`.
    pub fn var(field: FieldDescriptor, k: usize) -> Self {
        let mut e = vec![0; k];
        e[k - 1] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &FieldElement)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let sum = match terms.remove(e) {
                Some(a) => &a + c,
                None => c.clone(),
            };
            if !sum.is_zero() {
                terms.insert(e.clone(), sum);
            }
        }
        LaurentPoly { field: self.field, terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero(self.field);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                acc = acc.add(&Self::monomial(self.field, add_exponents(e1, e2), a * b));
            }
        }
        acc
    }

    /// Smallest coefficient valuation: `alpha = 2^-v`.
    pub fn alpha(&self) -> LogValue {
        self.terms.values().map(|c| c.valuation()).min().unwrap_or(LogValue::Infinity)
    }

    /// Largest variable index occurring.
    pub fn depth(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Monomials with exponent zero in every `T_j`, `j > k`.
    pub fn project(&self, k: usize) -> Self {
        LaurentPoly {
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| e.len() <= k).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Componentwise minimum exponent over all terms.
    fn min_exponents(&self) -> Exponents {
        let n = self.depth();
        (0..n).map(|i| self.terms.keys().map(|e| *e.get(i).unwrap_or(&0)).min().unwrap_or(0)).collect()
    }

    fn shift(&self, e: &[i64]) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(k, c)| (add_exponents(k, e), c.clone())).collect() }
    }

    fn single_term(&self) -> Option<(&Exponents, &FieldElement)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (j, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*T{}", j + 1)?,
                    _ => write!(f, "*T{}^{k}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial or a formal ratio of two.
#[derive(Clone, Debug)]
pub enum MultiVarElement {
    Laurent(LaurentPoly),
    Ratio(LaurentPoly, LaurentPoly),
}

impl PartialEq for MultiVarElement {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        a.mul(&d) == c.mul(&b)
    }
}

impl MultiVarElement {
    fn parts(&self) -> (LaurentPoly, LaurentPoly) {
        match self {
            MultiVarElement::Laurent(p) => (p.clone(), LaurentPoly::constant(p.field.one())),
            MultiVarElement::Ratio(n, d) => (n.clone(), d.clone()),
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            MultiVarElement::Laurent(p) | MultiVarElement::Ratio(p, _) => p.field,
        }
    }

    /// Build `num / den`, folding monomial denominators with invertible
    /// coefficients into the numerator.
    pub fn ratio(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some((e, c)) = den.single_term() {
            if let Ok(ci) = c.invert() {
                let inv_e: Exponents = e.iter().map(|k| -k).collect();
                return Ok(MultiVarElement::Laurent(num.shift(&inv_e).mul(&LaurentPoly::constant(ci))));
            }
        }
        Ok(MultiVarElement::Ratio(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MultiVarElement::Laurent(p) | MultiVarElement::Ratio(p, _) => p.is_zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (MultiVarElement::Laurent(a), MultiVarElement::Laurent(b)) => MultiVarElement::Laurent(a.add(b)),
            _ => {
                let (a, b) = self.parts();
                let (c, d) = other.parts();
                Self::ratio(a.mul(&d).add(&c.mul(&b)), b.mul(&d)).expect("nonzero denominators")
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            MultiVarElement::Laurent(p) => MultiVarElement::Laurent(p.neg()),
            MultiVarElement::Ratio(n, d) => MultiVarElement::Ratio(n.neg(), d.clone()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (MultiVarElement::Laurent(a), MultiVarElement::Laurent(b)) => MultiVarElement::Laurent(a.mul(b)),
            _ => {
                let (a, b) = self.parts();
                let (c, d) = other.parts();
                Self::ratio(a.mul(&c), b.mul(&d)).expect("nonzero denominators")
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        Self::ratio(a.mul(&d), b.mul(&c))
    }

    pub fn parse(s: &str, field: FieldDescriptor) -> Result<Self> {
        text::parse_with(&MultiVarAlgebra(field), s)
    }
}

impl fmt::Display for MultiVarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiVarElement::Laurent(p) => write!(f, "{p}"),
            MultiVarElement::Ratio(n, d) => write!(f, "({n})/({d})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormData {
    /// `alpha(x) = 2^-alpha_v`.
    pub alpha_v: LogValue,
    pub depth: usize,
}

pub fn multivar_norm_data(x: &MultiVarElement) -> Result<NormData> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(match x {
        MultiVarElement::Laurent(p) => NormData { alpha_v: p.alpha(), depth: p.depth() },
        MultiVarElement::Ratio(n, d) => {
            // cancel the common monomial content only
            let mn = n.min_exponents();
            let md = d.min_exponents();
            let len = mn.len().max(md.len());
            let common: Exponents = (0..len).map(|i| (*mn.get(i).unwrap_or(&0)).min(*md.get(i).unwrap_or(&0))).collect();
            let neg: Exponents = common.iter().map(|k| -k).collect();
            let (n2, d2) = (n.shift(&neg), d.shift(&neg));
            NormData { alpha_v: &n.alpha() - &d.alpha(), depth: n2.depth().max(d2.depth()) }
        }
    })
}

/// `pi_k` on Laurent polynomials.
pub fn project(k: usize, x: &MultiVarElement) -> Result<MultiVarElement> {
    match x {
        MultiVarElement::Laurent(p) => Ok(MultiVarElement::Laurent(p.project(k))),
        MultiVarElement::Ratio(..) => Err(Error::UnsupportedDenominator),
    }
}

/// Approximation of `pi_k(num/den)` when the denominator has a unique
/// alpha-dominant monomial `c M`: with `den = c M (1 + e)` and `alpha(e) < 1`,
/// `pi_k` is applied termwise to `num c^-1 M^-1 sum_{i<K} (-e)^i`, taking the
/// smallest `K` whose dropped tail has valuation above `prec`. Returns the
/// approximation and the valuation bound of the dropped tail.
pub fn project_series(k: usize, x: &MultiVarElement, prec: &LogValue) -> Result<(LaurentPoly, LogValue)> {
    let (num, den) = match x {
        MultiVarElement::Laurent(p) => return Ok((p.project(k), LogValue::Infinity)),
        MultiVarElement::Ratio(n, d) => (n, d),
    };
    let vmin = den.alpha();
    let dominant: Vec<_> = den.terms.iter().filter(|(_, c)| c.valuation() == vmin).collect();
    let (e0, c0) = match dominant.as_slice() {
        [one] => *one,
        _ => return Err(Error::UnsupportedDenominator),
    };
    let c_inv = c0.invert().map_err(|_| Error::UnsupportedDenominator)?;
    let m_inv: Exponents = e0.iter().map(|k| -k).collect();
    let lead_inv = LaurentPoly::monomial(den.field, m_inv, c_inv);
    let one = LaurentPoly::constant(den.field.one());
    let e = lead_inv.mul(den).sub(&one);
    let ve = e.alpha();
    let base = num.mul(&lead_inv);
    let vbase = base.alpha();
    let mut terms = 1;
    while &vbase + &ve.scale_int(terms as i64) <= *prec {
        terms += 1;
    }
    let minus_e = e.neg();
    let mut power = one.clone();
    let mut sum = one;
    for _ in 1..terms {
        power = power.mul(&minus_e);
        sum = sum.add(&power);
    }
    let tail = &vbase + &ve.scale_int(terms as i64);
    Ok((base.mul(&sum).project(k), tail))
}

/// Log form of `max_i 2^f(x_i) alpha(x_i)` for a decomposition `x = sum x_i`:
/// returns `min_i (v_alpha(x_i) - f(x_i))`, an upper bound for `|x|` in norm scale.
pub fn multivar_norm_upper(x: &MultiVarElement, decomposition: &[MultiVarElement]) -> Result<LogValue> {
    let f = x.field();
    let total = decomposition.iter().fold(MultiVarElement::Laurent(LaurentPoly::zero(f)), |acc, p| acc.add(p));
    if total != *x {
        return Err(Error::DecompositionMismatch);
    }
    let mut bound = LogValue::Infinity;
    for part in decomposition.iter().filter(|p| !p.is_zero()) {
        let d = multivar_norm_data(part)?;
        bound = bound.min(&d.alpha_v - &LogValue::int(d.depth as i64));
    }
    Ok(bound)
}

struct MultiVarAlgebra(FieldDescriptor);

fn variable_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('T')?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    rest.parse::<usize>().ok().filter(|k| *k >= 1)
}

impl Algebra for MultiVarAlgebra {
    type Elem = MultiVarElement;

    fn int(&self, n: &BigInt) -> Result<MultiVarElement> {
        Ok(MultiVarElement::Laurent(LaurentPoly::constant(self.0.bigint(n))))
    }

    fn var(&self, name: &str) -> Result<MultiVarElement> {
        if let Some(k) = variable_index(name) {
            return Ok(MultiVarElement::Laurent(LaurentPoly::var(self.0, k)));
        }
        Ok(MultiVarElement::Laurent(LaurentPoly::constant(FieldAlgebra(self.0).var(name)?)))
    }

    fn add(&self, a: &MultiVarElement, b: &MultiVarElement) -> Result<MultiVarElement> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &MultiVarElement, b: &MultiVarElement) -> Result<MultiVarElement> {
        Ok(a.add(&b.neg()))
    }

    fn mul(&self, a: &MultiVarElement, b: &MultiVarElement) -> Result<MultiVarElement> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &MultiVarElement, b: &MultiVarElement) -> Result<MultiVarElement> {
        a.div(b)
    }

    fn neg(&self, a: &MultiVarElement) -> Result<MultiVarElement> {
        Ok(a.neg())
    }

    fn pow(&self, a: &MultiVarElement, e: &BigRational) -> Result<MultiVarElement> {
        if !e.is_integer() {
            if let MultiVarElement::Laurent(p) = a {
                if let Some((ex, c)) = p.single_term() {
                    if ex.is_empty() {
                        return Ok(MultiVarElement::Laurent(LaurentPoly::constant(c.pow_rational(e)?)));
                    }
                }
            }
            return Err(Error::Parse(format!("exponent {e} must be an integer")));
        }
        let k = e.to_integer().to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
        let one = MultiVarElement::Laurent(LaurentPoly::constant(self.0.one()));
        let base = if k < 0 { one.div(a)? } else { a.clone() };
        Ok((0..k.abs()).fold(one, |acc, _| acc.mul(&base)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> FieldDescriptor {
        FieldDescriptor::padic(2).unwrap()
    }

    fn el(s: &str) -> MultiVarElement {
        MultiVarElement::parse(s, q2()).unwrap()
    }

    #[test]
    fn norm_data_examples() {
        assert_eq!(multivar_norm_data(&el("T1 + 2*T2")).unwrap(), NormData { alpha_v: LogValue::zero(), depth: 2 });
        assert_eq!(multivar_norm_data(&el("T_3/T_1")).unwrap(), NormData { alpha_v: LogValue::zero(), depth: 3 });
        assert_eq!(multivar_norm_data(&el("12")).unwrap(), NormData { alpha_v: LogValue::int(2), depth: 0 });
        assert!(matches!(multivar_norm_data(&el("0")), Err(Error::ZeroElement)));
    }

    #[test]
    fn common_monomial_cancels_in_depth() {
        let x = MultiVarElement::Ratio(LaurentPoly::var(q2(), 3).mul(&el_poly("T1 + 1")), LaurentPoly::var(q2(), 3).mul(&el_poly("T1 + 2")));
        assert_eq!(multivar_norm_data(&x).unwrap().depth, 1);
    }

    fn el_poly(s: &str) -> LaurentPoly {
        match el(s) {
            MultiVarElement::Laurent(p) => p,
            other => panic!("not a Laurent polynomial: {other}"),
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(1, &el("T1 + T2 + T1*T2^2")).unwrap(), el("T1"));
        let x = el("T1 + 3*T2 - T1^-1");
        assert_eq!(project(2, &x).unwrap(), x);
        assert!(matches!(project(1, &el("1/(T1 + T2)")), Err(Error::UnsupportedDenominator)));
    }

    #[test]
    fn series_projection() {
        // 1/(1 + 2 T2) = 1 - 2 T2 + 4 T2^2 - ..., so pi_1 gives 1 with error from 2^K T2^K
        let x = el("T1/(1 + 2*T2)");
        let (p, err) = project_series(1, &x, &LogValue::int(6)).unwrap();
        assert_eq!(MultiVarElement::Laurent(p), el("T1"));
        assert!(err > LogValue::int(6));
        // the constant-term coefficient of 1/(1 + 2 T1 T2^-1 + 2 T2) picks up cross terms
        let y = el("1/(1 + 2*T1*T2^-1 + 2*T2)");
        let (p, err) = project_series(1, &y, &LogValue::int(4)).unwrap();
        assert!(err > LogValue::int(4));
        // T2-free part of sum_j e^(2j) for j < 3: C(2j, j) 4^j T1^j
        assert_eq!(MultiVarElement::Laurent(p), el("1 + 8*T1 + 96*T1^2"));
        assert!(matches!(project_series(1, &el("1/(T1 + T2)"), &LogValue::int(3)), Err(Error::UnsupportedDenominator)));
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(multivar_norm_upper(&el("T2"), &[el("T2")]).unwrap(), LogValue::int(-2));
        assert_eq!(multivar_norm_upper(&el("T1 + T2"), &[el("T1"), el("T2")]).unwrap(), LogValue::int(-2));
        assert!(matches!(multivar_norm_upper(&el("T1 + T2"), &[el("T1")]), Err(Error::DecompositionMismatch)));
    }

    #[test]
    fn display_round_trip() {
        let x = el("T1 + 3*T2^2*T4^-1 - 1/2");
        assert_eq!(el(&x.to_string()), x);
    }
}
