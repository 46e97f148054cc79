//! Residue-field elements: `F_p` and the rational function field `F_p(u)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn padd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

fn pneg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
    }
    trim(&mut out);
    out
}

fn pscale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut out);
    out
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            let t = mulmod(c, y, p);
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn monic(a: &[u64], p: u64) -> (Vec<u64>, u64) {
    let lead = *a.last().unwrap();
    (pscale(a, inv_mod(lead, p), p), lead)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y, p);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        monic(&x, p).0
    }
}

/// An element of `F_p(u)` as a reduced fraction with monic denominator.
/// Elements of `F_p` are the constants.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Residue {
    p: u64,
    num: Vec<u64>,
    den: Vec<u64>,
}

impl Residue {
    pub fn constant(c: i64, p: u64) -> Self {
        let c = c.rem_euclid(p as i64) as u64;
        let num = if c == 0 { Vec::new() } else { vec![c] };
        Residue { p, num, den: vec![1] }
    }

    pub fn zero(p: u64) -> Self {
        Self::constant(0, p)
    }

    pub fn one(p: u64) -> Self {
        Self::constant(1, p)
    }

    /// The transcendental `u`.
    pub fn u(p: u64) -> Self {
        Residue { p, num: vec![0, 1], den: vec![1] }
    }

    /// `u^k` for any integer `k`.
    pub fn u_pow(k: i64, p: u64) -> Self {
        let mut mono = vec![0u64; k.unsigned_abs() as usize + 1];
        *mono.last_mut().unwrap() = 1;
        if k >= 0 {
            Residue { p, num: mono, den: vec![1] }
        } else {
            Residue { p, num: vec![1], den: mono }
        }
    }

    /// Build `num/den` from little-endian coefficient lists.
    pub fn from_parts(num: Vec<u64>, den: Vec<u64>, p: u64) -> Result<Self> {
        let num: Vec<u64> = num.into_iter().map(|c| c % p).collect();
        let mut den: Vec<u64> = den.into_iter().map(|c| c % p).collect();
        trim(&mut den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den, p))
    }

    fn reduce(mut num: Vec<u64>, den: Vec<u64>, p: u64) -> Self {
        trim(&mut num);
        if num.is_empty() {
            return Self::zero(p);
        }
        if den.len() == 1 {
            let inv = inv_mod(den[0], p);
            return Residue { p, num: pscale(&num, inv, p), den: vec![1] };
        }
        let g = pgcd(&num, &den, p);
        let (num, den) = if g.len() > 1 {
            (pdivrem(&num, &g, p).0, pdivrem(&den, &g, p).0)
        } else {
            (num, den)
        };
        let (den, lead) = monic(&den, p);
        let num = pscale(&num, inv_mod(lead, p), p);
        Residue { p, num, den }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num == [1] && self.den == [1]
    }

    /// True for elements of the prime field.
    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1 && self.den.len() == 1
    }

    /// The constant term value, if this is an element of `F_p`.
    pub fn as_constant(&self) -> Option<u64> {
        if self.is_constant() {
            Some(self.num.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    /// `Some(k)` when the element is exactly `u^k`.
    pub fn as_u_power(&self) -> Option<i64> {
        let is_mono = |v: &[u64]| v.last() == Some(&1) && v[..v.len() - 1].iter().all(|&c| c == 0);
        if is_mono(&self.num) && is_mono(&self.den) {
            Some(self.num.len() as i64 - self.den.len() as i64)
        } else {
            None
        }
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "residues over different primes");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_prime(other);
        let p = self.p;
        if self.den == other.den {
            let num = padd(&self.num, &other.num, p);
            return Self::reduce(num, self.den.clone(), p);
        }
        let num = padd(&pmul(&self.num, &other.den, p), &pmul(&other.num, &self.den, p), p);
        Self::reduce(num, pmul(&self.den, &other.den, p), p)
    }

    pub fn neg(&self) -> Self {
        Residue { p: self.p, num: pneg(&self.num, self.p), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_prime(other);
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        Self::reduce(pmul(&self.num, &other.num, p), pmul(&self.den, &other.den, p), p)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone(), self.p))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Total order used only for canonical printing and hashing-independent sorting.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.den.len(), &self.den, self.num.len(), &self.num).cmp(&(other.den.len(), &other.den, other.num.len(), &other.num))
    }
}

fn fmt_fp_poly(f: &mut fmt::Formatter<'_>, c: &[u64]) -> fmt::Result {
    let mut first = true;
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (i, a) {
            (0, a) => write!(f, "{a}")?,
            (1, 1) => write!(f, "u")?,
            (1, a) => write!(f, "{a}*u")?,
            (i, 1) => write!(f, "u^{i}")?,
            (i, a) => write!(f, "{a}*u^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == [1] {
            fmt_fp_poly(f, &self.num)
        } else {
            write!(f, "(")?;
            fmt_fp_poly(f, &self.num)?;
            write!(f, ")/(")?;
            fmt_fp_poly(f, &self.den)?;
            write!(f, ")")
        }
    }
}

/// Elementary symmetric functions `e_0, ..., e_n` of the given residues.
pub fn elementary_symmetric(values: &[Residue], p: u64) -> Vec<Residue> {
    let mut e = vec![Residue::one(p)];
    for v in values {
        e.push(Residue::zero(p));
        for r in (1..e.len()).rev() {
            let term = e[r - 1].mul(v);
            e[r] = e[r].add(&term);
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let p = 7;
        let a = Residue::constant(3, p);
        let b = Residue::constant(5, p);
        assert_eq!(a.add(&b), Residue::constant(1, p));
        assert_eq!(a.mul(&b), Residue::constant(1, p));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(Residue::constant(-1, p), Residue::constant(6, p));
        assert!(Residue::zero(p).inv().is_err());
    }

    #[test]
    fn rational_functions_reduce() {
        let p = 3;
        let u = Residue::u(p);
        let u2 = u.mul(&u);
        let x = u2.div(&u).unwrap();
        assert_eq!(x, u);
        let one_plus_u = Residue::one(p).add(&u);
        let r = one_plus_u.mul(&u).div(&one_plus_u).unwrap();
        assert_eq!(r, u);
        assert_eq!(Residue::u_pow(-2, p).mul(&u2), Residue::one(p));
        assert_eq!(u2.as_u_power(), Some(2));
        assert_eq!(Residue::u_pow(-3, p).as_u_power(), Some(-3));
        assert_eq!(one_plus_u.as_u_power(), None);
    }

    #[test]
    fn display_forms() {
        let p = 3;
        let u = Residue::u(p);
        assert_eq!(u.mul(&u).to_string(), "u^2");
        assert_eq!(u.add(&Residue::constant(2, p)).to_string(), "u + 2");
        assert_eq!(Residue::one(p).div(&u).unwrap().to_string(), "(1)/(u)");
        assert_eq!(Residue::zero(p).to_string(), "0");
    }

    #[test]
    fn elementary_symmetric_of_powers_of_u_are_nonzero() {
        let p = 3;
        let vals: Vec<Residue> = (1..=9).map(|i| Residue::u_pow(i, p)).collect();
        let e = elementary_symmetric(&vals, p);
        assert_eq!(e.len(), 10);
        assert!(e.iter().all(|x| !x.is_zero()));
        // e_9 = u^(1+...+9)
        assert_eq!(e[9].as_u_power(), Some(45));
    }

    #[test]
    fn elementary_symmetric_can_vanish_over_small_fields() {
        // residues 1,2 in F_3: e_1 = 1 + 2 = 0
        let p = 3;
        let e = elementary_symmetric(&[Residue::constant(1, p), Residue::constant(2, p)], p);
        assert!(e[1].is_zero());
    }
}
