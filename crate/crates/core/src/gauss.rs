//! Gauss valuations, norm profiles over radius intervals and the unit
//! obstruction `|f|_spect * |f^-1|_spect` in log form.
//!
//! The spectrum of the interval model is identified with the radius interval
//! itself, so sup and inf over the profile are the spectral quantities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::ratfun::{newton_polygon, Poly, RatFun};
use crate::LogValue;

/// Gauss point `|t - center| = 2^-s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussPoint {
    pub center: Option<FieldElement>,
    pub s: LogValue,
}

impl GaussPoint {
    pub fn at(s: LogValue) -> Self {
        assert!(s.is_finite(), "log-radius must be finite");
        GaussPoint { center: None, s }
    }

    pub fn centered(center: FieldElement, s: LogValue) -> Self {
        assert!(s.is_finite(), "log-radius must be finite");
        GaussPoint { center: Some(center), s }
    }
}

/// Log-radius interval `[s_lo, s_hi]`, i.e. norm radii `[2^-s_hi, 2^-s_lo]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusInterval {
    pub s_lo: LogValue,
    pub s_hi: LogValue,
}

impl RadiusInterval {
    pub fn new(s_lo: LogValue, s_hi: LogValue) -> Result<Self> {
        if !s_lo.is_finite() || !s_hi.is_finite() {
            return Err(Error::InvalidParameter("interval endpoints must be finite".into()));
        }
        if s_lo > s_hi {
            return Err(Error::InvalidParameter(format!("empty interval [{s_lo}, {s_hi}]")));
        }
        Ok(RadiusInterval { s_lo, s_hi })
    }

    pub fn contains(&self, s: &LogValue) -> bool {
        &self.s_lo <= s && s <= &self.s_hi
    }

    pub fn length(&self) -> LogValue {
        &self.s_hi - &self.s_lo
    }
}

impl FromStr for RadiusInterval {
    type Err = Error;

    /// `"a,b"` with `a <= b`, each a log value such as `1/2` or `1+sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("interval `{s}` is not of the form a,b")))?;
        let a: LogValue = a.trim().parse()?;
        let b: LogValue = b.trim().parse()?;
        RadiusInterval::new(a, b)
    }
}

impl fmt::Display for RadiusInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.s_lo, self.s_hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Unique(usize),
    Tied(Vec<usize>),
}

impl Dominance {
    pub fn is_unique(&self) -> bool {
        matches!(self, Dominance::Unique(_))
    }

    /// The smallest attaining index.
    pub fn first(&self) -> usize {
        match self {
            Dominance::Unique(i) => *i,
            Dominance::Tied(v) => v[0],
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match self {
            Dominance::Unique(i) => vec![*i],
            Dominance::Tied(v) => v.clone(),
        }
    }
}

/// `min_i (c_i + i*s)` over the given points, with the attaining indices.
pub fn min_plus(points: &[(usize, LogValue)], s: &LogValue) -> Option<(LogValue, Dominance)> {
    let mut best: Option<LogValue> = None;
    let mut arg: Vec<usize> = Vec::new();
    for (i, c) in points {
        let v = c + &s.scale_int(*i as i64);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => arg.push(*i),
            _ => {
                best = Some(v);
                arg = vec![*i];
            }
        }
    }
    let dom = if arg.len() == 1 { Dominance::Unique(arg[0]) } else { Dominance::Tied(arg) };
    best.map(|b| (b, dom))
}

pub fn gauss_valuation(p: &Poly, pt: &GaussPoint) -> Result<(LogValue, Dominance)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let shifted;
    let q = match &pt.center {
        Some(c) if !c.is_zero() => {
            shifted = p.recenter(c);
            &shifted
        }
        _ => p,
    };
    Ok(min_plus(&q.valuation_points(), &pt.s).expect("nonzero polynomial"))
}

pub fn ratfun_gauss(f: &RatFun, pt: &GaussPoint) -> Result<LogValue> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (vn, _) = gauss_valuation(&f.num, pt)?;
    let (vd, _) = gauss_valuation(&f.den, pt)?;
    Ok(&vn - &vd)
}

/// One affine piece `s -> alpha + slope*s` on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub start: LogValue,
    pub end: LogValue,
    pub alpha: LogValue,
    pub slope: i64,
}

impl Piece {
    pub fn value_at(&self, s: &LogValue) -> LogValue {
        &self.alpha + &s.scale_int(self.slope)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormProfile {
    pub interval: RadiusInterval,
    pub pieces: Vec<Piece>,
}

impl NormProfile {
    /// Interior breakpoints, increasing.
    pub fn breakpoints(&self) -> Vec<LogValue> {
        self.pieces.iter().skip(1).map(|p| p.start.clone()).collect()
    }

    pub fn value_at(&self, s: &LogValue) -> Option<LogValue> {
        if !self.interval.contains(s) {
            return None;
        }
        self.pieces.iter().find(|p| s <= &p.end).map(|p| p.value_at(s))
    }

    /// `(s, v_s, slope of the piece starting at s)` at the left endpoint,
    /// each breakpoint and the right endpoint; the last row repeats the
    /// final slope.
    pub fn rows(&self) -> Vec<(LogValue, LogValue, i64)> {
        let mut rows: Vec<_> = self.pieces.iter().map(|p| (p.start.clone(), p.value_at(&p.start), p.slope)).collect();
        if let Some(last) = self.pieces.last() {
            if last.end != last.start {
                rows.push((last.end.clone(), last.value_at(&last.end), last.slope));
            }
        }
        rows
    }

    pub fn is_concave(&self) -> bool {
        self.pieces.windows(2).all(|w| w[1].slope <= w[0].slope)
    }
}

fn clipped_roots(p: &Poly, interval: &RadiusInterval, out: &mut Vec<LogValue>) -> Result<()> {
    for (r, _) in newton_polygon(p)?.slopes {
        if interval.s_lo < r && r < interval.s_hi {
            out.push(r);
        }
    }
    Ok(())
}

fn slope_at(f: &RatFun, s: &LogValue) -> Result<i64> {
    let pt = GaussPoint::at(s.clone());
    let (_, dn) = gauss_valuation(&f.num, &pt)?;
    let (_, dd) = gauss_valuation(&f.den, &pt)?;
    Ok(dn.first() as i64 - dd.first() as i64)
}

pub fn norm_profile(f: &RatFun, interval: &RadiusInterval) -> Result<NormProfile> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut cuts = vec![interval.s_lo.clone(), interval.s_hi.clone()];
    clipped_roots(&f.num, interval, &mut cuts)?;
    clipped_roots(&f.den, interval, &mut cuts)?;
    cuts.sort();
    cuts.dedup();
    let mut pieces: Vec<Piece> = Vec::new();
    if cuts.len() == 1 {
        let s = cuts[0].clone();
        let slope = slope_at(f, &s)?;
        let value = ratfun_gauss(f, &GaussPoint::at(s.clone()))?;
        let alpha = &value - &s.scale_int(slope);
        pieces.push(Piece { start: s.clone(), end: s, alpha, slope });
    }
    for w in cuts.windows(2) {
        let mid = w[0].midpoint(&w[1]);
        let slope = slope_at(f, &mid)?;
        let value = ratfun_gauss(f, &GaussPoint::at(mid.clone()))?;
        let alpha = &value - &mid.scale_int(slope);
        match pieces.last_mut() {
            Some(prev) if prev.slope == slope && prev.alpha == alpha => prev.end = w[1].clone(),
            _ => pieces.push(Piece { start: w[0].clone(), end: w[1].clone(), alpha, slope }),
        }
    }
    Ok(NormProfile { interval: interval.clone(), pieces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extrema {
    /// Smallest valuation: the sup-norm `2^-v_min`.
    pub v_min: LogValue,
    pub arg_min: LogValue,
    /// Largest valuation: the inf-norm `2^-v_max`.
    pub v_max: LogValue,
    pub arg_max: LogValue,
}

pub fn profile_extrema(pr: &NormProfile) -> Extrema {
    let rows = pr.rows();
    let (arg_min, v_min) = rows.iter().map(|r| (r.0.clone(), r.1.clone())).min_by(|a, b| a.1.cmp(&b.1)).expect("nonempty profile");
    let (arg_max, v_max) = rows.iter().map(|r| (r.0.clone(), r.1.clone())).max_by(|a, b| a.1.cmp(&b.1)).expect("nonempty profile");
    Extrema { v_min, arg_min, v_max, arg_max }
}

/// `v_max - v_min`, the log of `|f|_spect * |f^-1|_spect`.
pub fn unit_obstruction(f: &RatFun, interval: &RadiusInterval) -> Result<LogValue> {
    let e = profile_extrema(&norm_profile(f, interval)?);
    Ok(&e.v_max - &e.v_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldDescriptor, ResidueKind};
    use crate::text::parse_field_element;

    fn q2() -> FieldDescriptor {
        FieldDescriptor::padic(2).unwrap()
    }

    fn gl3() -> FieldDescriptor {
        FieldDescriptor::gen_laurent(3, ResidueKind::Fp).unwrap()
    }

    fn interval(a: i64, b: i64) -> RadiusInterval {
        RadiusInterval::new(LogValue::int(a), LogValue::int(b)).unwrap()
    }

    #[test]
    fn gauss_valuation_examples() {
        let p = RatFun::parse("t^2 + 2*t + 8", q2()).unwrap().num;
        assert_eq!(gauss_valuation(&p, &GaussPoint::at(LogValue::frac(3, 2))).unwrap(), (LogValue::frac(5, 2), Dominance::Unique(1)));
        assert_eq!(gauss_valuation(&p, &GaussPoint::at(LogValue::int(2))).unwrap(), (LogValue::int(3), Dominance::Tied(vec![0, 1])));
        let lambda = parse_field_element("z^(3/2)", FieldDescriptor::gen_laurent(2, ResidueKind::Fp).unwrap()).unwrap();
        let lin = Poly::linear(&lambda);
        for (s, expect, tied) in [(LogValue::int(1), LogValue::int(1), false), (LogValue::frac(3, 2), LogValue::frac(3, 2), true), (LogValue::int(2), LogValue::frac(3, 2), false)] {
            let (v, d) = gauss_valuation(&lin, &GaussPoint::at(s)).unwrap();
            assert_eq!(v, expect);
            assert_eq!(!d.is_unique(), tied);
        }
    }

    #[test]
    fn centered_point_recenters() {
        let f = gl3();
        let lambda = f.uniformizer();
        let p = Poly::linear(&lambda);
        let (v, d) = gauss_valuation(&p, &GaussPoint::centered(lambda, LogValue::int(5))).unwrap();
        assert_eq!(v, LogValue::int(5));
        assert_eq!(d, Dominance::Unique(1));
    }

    #[test]
    fn ratfun_gauss_examples() {
        let f = q2();
        let lambda = f.int(2);
        let inv = RatFun::from_poly(Poly::linear(&lambda)).invert().unwrap();
        assert_eq!(ratfun_gauss(&inv, &GaussPoint::at(LogValue::zero())).unwrap(), LogValue::zero());
        let s = LogValue::frac(7, 3);
        assert_eq!(ratfun_gauss(&RatFun::t(f), &GaussPoint::at(s.clone())).unwrap(), s);
        let x = RatFun::parse("(t + 4)/(t^2 + 1)", f).unwrap();
        let r = RatFun::parse("t - 2", f).unwrap();
        let pt = GaussPoint::at(LogValue::frac(1, 3));
        let unreduced = RatFun::new(x.num.mul(&r.num), x.den.mul(&r.num)).unwrap();
        assert_eq!(ratfun_gauss(&x, &pt).unwrap(), ratfun_gauss(&unreduced, &pt).unwrap());
    }

    #[test]
    fn profile_examples() {
        let f = gl3();
        let prof = norm_profile(&RatFun::t(f), &interval(1, 2)).unwrap();
        assert_eq!(prof.pieces.len(), 1);
        assert_eq!(prof.pieces[0].slope, 1);
        let e = profile_extrema(&prof);
        assert_eq!((e.v_min, e.v_max), (LogValue::int(1), LogValue::int(2)));
        assert_eq!(unit_obstruction(&RatFun::t(f), &interval(1, 2)).unwrap(), LogValue::int(1));

        let c = RatFun::constant(parse_field_element("z^(1/3)", f).unwrap());
        let prof = norm_profile(&c, &interval(1, 2)).unwrap();
        assert_eq!(prof.pieces.len(), 1);
        assert_eq!(prof.pieces[0].slope, 0);
        assert_eq!(unit_obstruction(&c, &interval(1, 2)).unwrap(), LogValue::zero());
    }

    #[test]
    fn breakpoint_profile() {
        let f = FieldDescriptor::gen_laurent(2, ResidueKind::Fp).unwrap();
        let x = RatFun::parse("(t - z^(3/2))/t", f).unwrap();
        let prof = norm_profile(&x, &interval(1, 2)).unwrap();
        assert_eq!(prof.breakpoints(), vec![LogValue::frac(3, 2)]);
        assert_eq!((prof.pieces[0].slope, prof.pieces[1].slope), (0, -1));
        // oracle: the direct min formula min(s, 3/2) - s on a grid straddling 3/2
        for k in 0..=12 {
            let s = LogValue::frac(12 + k, 12);
            let direct = &std::cmp::min(s.clone(), LogValue::frac(3, 2)) - &s;
            assert_eq!(prof.value_at(&s).unwrap(), direct);
        }
        let e = profile_extrema(&prof);
        assert_eq!(e.v_min, LogValue::frac(-1, 2));
        assert_eq!(e.arg_min, LogValue::int(2));
        assert_eq!(e.v_max, LogValue::zero());
        assert_eq!(unit_obstruction(&x, &interval(1, 2)).unwrap(), LogValue::frac(1, 2));
    }

    #[test]
    fn degenerate_interval() {
        let f = gl3();
        let i = RadiusInterval::new(LogValue::int(1), LogValue::int(1)).unwrap();
        let prof = norm_profile(&RatFun::t(f), &i).unwrap();
        assert_eq!(prof.rows().len(), 1);
        assert_eq!(unit_obstruction(&RatFun::t(f), &i).unwrap(), LogValue::zero());
    }

    #[test]
    fn interval_text() {
        let i: RadiusInterval = "1,2".parse().unwrap();
        assert_eq!(i, interval(1, 2));
        assert!("2,1".parse::<RadiusInterval>().is_err());
        assert!("1".parse::<RadiusInterval>().is_err());
        let j: RadiusInterval = "0,sqrt2".parse().unwrap();
        assert_eq!(j.s_hi, LogValue::sqrt2());
    }
}
