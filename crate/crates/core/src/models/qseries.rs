//! The ring `A = A_1[T^-1]` where `A_0` consists of series `sum a_n T^n`
//! with `a_n (n!)^n` integral. Norms are reported as the exponent `n` of
//! `2^-n` (base 2 instead of base e).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::{self, Algebra};

/// Laurent polynomial in `T` over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QSeriesElement {
    terms: BTreeMap<i64, BigRational>,
}

impl QSeriesElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(n: i64, a: BigRational) -> Self {
        let mut x = Self::zero();
        if !a.is_zero() {
            x.terms.insert(n, a);
        }
        x
    }

    pub fn constant(a: BigRational) -> Self {
        Self::monomial(0, a)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, (n, a)| acc.add(&Self::monomial(n, a)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(n, a)| (*n, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (n, a) in &other.terms {
            let s = terms.remove(n).unwrap_or_else(BigRational::zero) + a;
            if !s.is_zero() {
                terms.insert(*n, s);
            }
        }
        QSeriesElement { terms }
    }

    pub fn neg(&self) -> Self {
        QSeriesElement { terms: self.terms.iter().map(|(n, a)| (*n, -a)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (n, a) in &self.terms {
            for (m, b) in &other.terms {
                out = out.add(&Self::monomial(n + m, a * b));
            }
        }
        out
    }

    /// Shift by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        QSeriesElement { terms: self.terms.iter().map(|(n, a)| (n + k, a.clone())).collect() }
    }

    pub fn parse(s: &str) -> Result<Self> {
        text::parse_with(&QSeriesAlgebra, s)
    }
}

impl fmt::Display for QSeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (n, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*T")?,
                _ => write!(f, "({a})*T^{n}")?,
            }
        }
        Ok(())
    }
}

fn factorial_power(k: u64) -> BigInt {
    let f: BigInt = (1..=k).map(BigInt::from).product();
    num_traits::pow(f, k as usize)
}

/// Whether `x` lies in `A_0`: no negative degrees and `a_j (j!)^j` integral.
pub fn in_a0(x: &QSeriesElement) -> bool {
    x.terms.iter().all(|(j, a)| {
        *j >= 0 && (a * BigRational::from_integer(factorial_power(*j as u64))).is_integer()
    })
}

/// The largest `n` with `T^-n x` in `A_0`; the norm is `2^-n`.
pub fn qseries_norm(x: &QSeriesElement) -> Result<i64> {
    let mut n = x.min_degree().ok_or(Error::ZeroElement)?;
    // membership is monotone: once T^-n x is in A_0 so is T^-(n-1) x
    while !in_a0(&x.shift(-n)) {
        n -= 1;
    }
    Ok(n)
}

/// Unit ball of the spectral seminorm: `A` intersected with `Q[[T]]`.
pub fn qseries_spectral_ball(x: &QSeriesElement) -> bool {
    x.min_degree().is_none_or(|d| d >= 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub k: u64,
    pub j: u64,
}

/// `v_2((j!)^j) = j (j - s_2(j))`.
pub fn two_adic_factorial_power(j: u64) -> u64 {
    j * (j - u64::from(j.count_ones()))
}

/// Rows `(k, j(k))` with `j(k) = min { j : j (j - s_2(j)) >= k }`, so that
/// `|2^-k|_A = 2^j(k)`.
pub fn qseries_unbounded_witness(kmax: u64) -> Result<Vec<WitnessRow>> {
    if kmax < 1 {
        return Err(Error::InvalidParameter("kmax must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(kmax as usize);
    let mut j = 0;
    for k in 1..=kmax {
        while two_adic_factorial_power(j) < k {
            j += 1;
        }
        rows.push(WitnessRow { k, j });
    }
    Ok(rows)
}

struct QSeriesAlgebra;

impl Algebra for QSeriesAlgebra {
    type Elem = QSeriesElement;

    fn int(&self, n: &BigInt) -> Result<QSeriesElement> {
        Ok(QSeriesElement::constant(BigRational::from_integer(n.clone())))
    }

    fn var(&self, name: &str) -> Result<QSeriesElement> {
        match name {
            "T" => Ok(QSeriesElement::monomial(1, BigRational::one())),
            _ => Err(Error::Parse(format!("unknown symbol `{name}` (only T)"))),
        }
    }

    fn add(&self, a: &QSeriesElement, b: &QSeriesElement) -> Result<QSeriesElement> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &QSeriesElement, b: &QSeriesElement) -> Result<QSeriesElement> {
        Ok(a.add(&b.neg()))
    }

    fn mul(&self, a: &QSeriesElement, b: &QSeriesElement) -> Result<QSeriesElement> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &QSeriesElement, b: &QSeriesElement) -> Result<QSeriesElement> {
        match b.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (n, c) = b.terms.iter().next().unwrap();
                Ok(a.mul(&QSeriesElement::monomial(-n, c.recip())))
            }
            _ => Err(Error::Parse("division only by monomials".into())),
        }
    }

    fn neg(&self, a: &QSeriesElement) -> Result<QSeriesElement> {
        Ok(a.neg())
    }

    fn pow(&self, a: &QSeriesElement, e: &BigRational) -> Result<QSeriesElement> {
        if !e.is_integer() {
            return Err(Error::Parse(format!("exponent {e} must be an integer")));
        }
        let k = e.to_integer().to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
        let base = if k < 0 { self.div(&QSeriesElement::constant(BigRational::one()), a)? } else { a.clone() };
        Ok((0..k.abs()).fold(QSeriesElement::constant(BigRational::one()), |acc, _| acc.mul(&base)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::Signed;

    fn two_adic_valuation(n: &BigInt) -> u64 {
        let mut n = n.abs();
        let two = BigInt::from(2);
        let mut v = 0;
        while n.is_even() && !n.is_zero() {
            n /= &two;
            v += 1;
        }
        v
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn norm_examples() {
        assert_eq!(qseries_norm(&QSeriesElement::parse("T").unwrap()).unwrap(), 1);
        assert_eq!(qseries_norm(&QSeriesElement::constant(q(1, 2))).unwrap(), -2);
        assert_eq!(qseries_norm(&QSeriesElement::monomial(2, q(1, 4))).unwrap(), 0);
        assert!(matches!(qseries_norm(&QSeriesElement::zero()), Err(Error::ZeroElement)));
    }

    #[test]
    fn spectral_ball_examples() {
        assert!(qseries_spectral_ball(&QSeriesElement::constant(q(1, 2))));
        assert!(!qseries_spectral_ball(&QSeriesElement::parse("T^-1").unwrap()));
        assert!(qseries_spectral_ball(&QSeriesElement::zero()));
    }

    #[test]
    fn witness_examples() {
        let rows = qseries_unbounded_witness(100).unwrap();
        assert_eq!(rows[0], WitnessRow { k: 1, j: 2 });
        assert_eq!(rows[9], WitnessRow { k: 10, j: 4 });
        assert_eq!(rows[99], WitnessRow { k: 100, j: 12 });
        assert!(qseries_unbounded_witness(0).is_err());
    }

    #[test]
    fn witness_matches_direct_factorial_valuation() {
        for j in 0..40u64 {
            let direct = if j == 0 { 0 } else { two_adic_valuation(&factorial_power(j)) };
            assert_eq!(two_adic_factorial_power(j), direct, "j={j}");
        }
        // |2^-k|_A read off the membership scan agrees with the table
        for row in qseries_unbounded_witness(30).unwrap() {
            let x = QSeriesElement::constant(BigRational::new(BigInt::one(), BigInt::from(2).pow(row.k as u32)));
            assert_eq!(qseries_norm(&x).unwrap(), -(row.j as i64));
        }
    }

    #[test]
    fn parse_and_display() {
        let x = QSeriesElement::parse("1/2 + 3*T^2 - T^-1").unwrap();
        assert_eq!(x.min_degree(), Some(-1));
        assert_eq!(QSeriesElement::parse(&x.to_string()).unwrap(), x);
    }
}
