//! Certificates: every claim about the sequence, checked at every Gauss
//! point where the claim could first fail.
//!
//! All claims compare piecewise linear functions of `s`, so checking a
//! closed zone at its endpoints and at the breakpoints inside it decides
//! the claim on the whole zone.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::centers::CenterSet;
use super::factors::{ForgeFactors, Quantity, Tag};
use super::schedule::{validate_schedule, ForgeSchedule, Mode};
use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::gauss::Dominance;
use crate::LogValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Schedule,
    Window,
    SmallRadius,
    LargeRadius,
    AtCenter,
    AtDelta,
    Spectral,
    Near,
    Far,
    GapSpectral,
    Tail,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    CentersCount,
    CentersDistinct,
    DistinctResidues,
    CenterValMin,
    CenterValMax,
    GapBefore,
    TailRoom,
    MonotoneM,
    PinchLower,
    PinchUpper,
    WindowWidth,
    XnWindow,
    OneMinusXnWindow,
    XnUnit,
    OneMinusXnDecay,
    OneMinusXnUnit,
    XnDecay,
    XnAtCenter,
    OneMinusXnAtCenter,
    XnAtDelta,
    XnSpectral,
    OneMinusXnSpectral,
    YnSpectral,
    GapNear,
    GapFar,
    GapSpectral,
    GapTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cert {
    pub dominance: Option<Dominance>,
    pub tag: Tag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub n: usize,
    pub zone: Zone,
    pub claim: Claim,
    /// Log-radius of the Gauss point; absent for static schedule checks.
    pub s: Option<LogValue>,
    pub lhs: LogValue,
    pub rhs: LogValue,
    pub relation: Relation,
    pub cert: Cert,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForgeCertificate {
    pub schedule: ForgeSchedule,
    pub centers: Vec<Vec<String>>,
    pub records: Vec<Record>,
    pub pass: bool,
}

impl ForgeCertificate {
    pub fn first_failure(&self) -> Option<&Record> {
        self.records.iter().find(|r| !r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn q(n: i64, d: i64) -> LogValue {
    LogValue::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn count(k: usize) -> LogValue {
    LogValue::int(k as i64)
}

fn holds(rel: Relation, lhs: &LogValue, rhs: &LogValue, tag: Tag) -> bool {
    match rel {
        Relation::Eq => lhs == rhs && tag.is_exact(),
        Relation::Ge => lhs >= rhs,
        Relation::Le => lhs <= rhs && tag.is_exact(),
    }
}

/// Endpoints of `[lo, hi]` and every breakpoint strictly inside.
fn zone_points(lo: &LogValue, hi: &LogValue, bps: &[LogValue]) -> Vec<LogValue> {
    if lo > hi {
        return Vec::new();
    }
    let mut pts = vec![lo.clone()];
    pts.extend(bps.iter().filter(|b| lo < *b && *b < hi).cloned());
    if hi != lo {
        pts.push(hi.clone());
    }
    pts
}

struct StepCtx {
    n: usize,
    out: Vec<Record>,
}

impl StepCtx {
    fn fixed(&mut self, zone: Zone, claim: Claim, lhs: LogValue, rhs: LogValue, relation: Relation) {
        let pass = holds(relation, &lhs, &rhs, Tag::Exact);
        let cert = Cert { dominance: None, tag: Tag::Exact };
        self.out.push(Record { n: self.n, zone, claim, s: None, lhs, rhs, relation, cert, pass });
    }

    fn at(&mut self, zone: Zone, claim: Claim, s: &LogValue, val: Quantity, rhs: LogValue, relation: Relation) {
        let pass = holds(relation, &val.value, &rhs, val.tag);
        let cert = Cert { dominance: val.dominance, tag: val.tag };
        self.out.push(Record { n: self.n, zone, claim, s: Some(s.clone()), lhs: val.value, rhs, relation, cert, pass });
    }

    /// Check `f(s) rel g(s)` at every point of the zone.
    fn over(
        &mut self,
        zone: Zone,
        claim: Claim,
        pts: &[LogValue],
        f: impl Fn(&LogValue) -> Quantity,
        g: impl Fn(&LogValue) -> LogValue,
        relation: Relation,
    ) {
        for s in pts {
            self.at(zone, claim, s, f(s), g(s), relation);
        }
    }
}

fn minimum(pts: &[LogValue], f: impl Fn(&LogValue) -> Quantity) -> (LogValue, Quantity) {
    pts.iter().map(|s| (s.clone(), f(s))).min_by(|a, b| a.1.value.cmp(&b.1.value)).expect("nonempty interval")
}

/// `min_{s in I} v(y_n - y_{n-1})` with the attaining point.
fn gap_minimum(sch: &ForgeSchedule, fx: &ForgeFactors, n: usize) -> (LogValue, Quantity) {
    let i = &sch.interval;
    let pts = zone_points(&i.s_lo, &i.s_hi, &fx.breakpoints_upto(n));
    minimum(&pts, |s| fx.gap(n, s))
}

fn step_records(sch: &ForgeSchedule, centers: &[FieldElement], fx: &ForgeFactors, n: usize, gap_min: Option<&(LogValue, Quantity)>) -> Vec<Record> {
    let mut cx = StepCtx { n, out: Vec::new() };
    let st = sch.step(n);
    let m = st.m;
    let mi = m as i64;
    let i = &sch.interval;
    let c = &sch.c_log;
    let f = fx.factor(n);
    let bps = f.breakpoints.clone();
    let n_i = n as i64;

    // schedule
    let vals: Vec<LogValue> = centers.iter().map(FieldElement::valuation).collect();
    let vmin = vals.iter().min().cloned().unwrap_or(LogValue::Infinity);
    let vmax = vals.iter().max().cloned().unwrap_or(LogValue::Infinity);
    cx.fixed(Zone::Schedule, Claim::CentersCount, count(centers.len()), count(2 * m - 1), Relation::Eq);
    match sch.mode {
        Mode::Theorem => {
            let mut d = vals.clone();
            d.sort();
            d.dedup();
            cx.fixed(Zone::Schedule, Claim::CentersDistinct, count(d.len()), count(2 * m - 1), Relation::Eq);
            cx.fixed(Zone::Schedule, Claim::CenterValMin, vmin, st.s_plus.clone(), Relation::Ge);
            cx.fixed(Zone::Schedule, Claim::CenterValMax, vmax, st.s_minus.clone(), Relation::Le);
        }
        Mode::Example => {
            let mut res: Vec<_> = centers.iter().filter_map(|c| c.leading().map(|(_, r)| r)).collect();
            res.sort_by(|a, b| a.canonical_cmp(b));
            res.dedup();
            cx.fixed(Zone::Schedule, Claim::DistinctResidues, count(res.len()), count(2 * m - 1), Relation::Eq);
            cx.fixed(Zone::Schedule, Claim::CenterValMin, vmin, st.s.clone(), Relation::Eq);
            cx.fixed(Zone::Schedule, Claim::CenterValMax, vmax, st.s.clone(), Relation::Eq);
        }
    }
    if n > 1 {
        let prev = sch.step(n - 1);
        if !sch.small {
            let m_ref = if sch.mode == Mode::Theorem { prev.m } else { m };
            cx.fixed(Zone::Schedule, Claim::GapBefore, &prev.s - &st.s, q(n_i, m_ref as i64), Relation::Ge);
        }
        cx.fixed(Zone::Schedule, Claim::MonotoneM, count(m), count(prev.m), Relation::Ge);
    }
    if n == sch.depth && !sch.small {
        cx.fixed(Zone::Schedule, Claim::TailRoom, &st.s - &i.s_lo, q(n_i + 1, mi), Relation::Ge);
    }

    let decay = |a: &LogValue, b: &LogValue| (a - b).scale_int(mi);
    match sch.mode {
        Mode::Theorem => {
            let (sp, sm) = (&st.s_plus, &st.s_minus);
            // middle zone: pinch hypotheses, the static window bound, then values
            cx.fixed(Zone::Window, Claim::PinchLower, &st.s - sp, q(1, mi), Relation::Le);
            cx.fixed(Zone::Window, Claim::PinchUpper, sm - &st.s, q(1, mi), Relation::Le);
            cx.fixed(Zone::Window, Claim::WindowWidth, (sm - sp).scale_int(2 * mi - 1), LogValue::int(4), Relation::Le);
            let floor = -(&LogValue::int(4) + &c.scale_int(2));
            let wpts = zone_points(std::cmp::max(sp, &i.s_lo), std::cmp::min(sm, &i.s_hi), &bps);
            cx.over(Zone::Window, Claim::XnWindow, &wpts, |s| f.x(s), |_| floor.clone(), Relation::Ge);
            cx.over(Zone::Window, Claim::OneMinusXnWindow, &wpts, |s| f.one_minus_x(s), |_| floor.clone(), Relation::Ge);

            let small = zone_points(sm, &i.s_hi, &bps);
            cx.over(Zone::SmallRadius, Claim::XnUnit, &small, |s| f.x(s), |_| LogValue::zero(), Relation::Eq);
            cx.over(Zone::SmallRadius, Claim::OneMinusXnDecay, &small, |s| f.one_minus_x(s), |s| decay(s, sm), Relation::Ge);
            let large = zone_points(&i.s_lo, sp, &bps);
            cx.over(Zone::LargeRadius, Claim::OneMinusXnUnit, &large, |s| f.one_minus_x(s), |_| LogValue::zero(), Relation::Eq);
            cx.over(Zone::LargeRadius, Claim::XnDecay, &large, |s| f.x(s), |s| decay(sp, s), Relation::Ge);
            cx.at(Zone::AtDelta, Claim::XnAtDelta, &i.s_lo, f.x(&i.s_lo), LogValue::int(n_i - 1), Relation::Ge);
        }
        Mode::Example => {
            let sn = &st.s;
            let small = zone_points(sn, &i.s_hi, &bps);
            cx.over(Zone::SmallRadius, Claim::XnUnit, &small, |s| f.x(s), |_| LogValue::zero(), Relation::Eq);
            cx.over(Zone::SmallRadius, Claim::OneMinusXnDecay, &small, |s| f.one_minus_x(s), |s| decay(s, sn), Relation::Eq);
            let large = zone_points(&i.s_lo, sn, &bps);
            cx.over(Zone::LargeRadius, Claim::OneMinusXnUnit, &large, |s| f.one_minus_x(s), |_| LogValue::zero(), Relation::Eq);
            cx.over(Zone::LargeRadius, Claim::XnDecay, &large, |s| f.x(s), |s| decay(sn, s), Relation::Eq);
            cx.at(Zone::AtCenter, Claim::XnAtCenter, sn, f.x(sn), LogValue::zero(), Relation::Eq);
            cx.at(Zone::AtCenter, Claim::OneMinusXnAtCenter, sn, f.one_minus_x(sn), LogValue::zero(), Relation::Eq);
            cx.at(Zone::AtDelta, Claim::XnAtDelta, &i.s_lo, f.x(&i.s_lo), LogValue::int(n_i), Relation::Ge);
            let all = zone_points(&i.s_lo, &i.s_hi, &bps);
            let (s, v) = minimum(&all, |s| f.x(s));
            cx.at(Zone::Spectral, Claim::XnSpectral, &s, v, LogValue::zero(), Relation::Ge);
            let (s, v) = minimum(&all, |s| f.one_minus_x(s));
            cx.at(Zone::Spectral, Claim::OneMinusXnSpectral, &s, v, LogValue::zero(), Relation::Ge);
            let ypts = zone_points(&i.s_lo, &i.s_hi, &fx.breakpoints_upto(n));
            let (s, v) = minimum(&ypts, |s| fx.y(n, s));
            cx.at(Zone::Spectral, Claim::YnSpectral, &s, v, LogValue::zero(), Relation::Ge);
        }
    }

    let (near_rhs, far_rhs) = match sch.mode {
        Mode::Theorem => (&LogValue::int(n_i - 5) - &c.scale_int(2), &LogValue::int(n_i - 14) - &c.scale_int(6)),
        Mode::Example => (LogValue::int(n_i), LogValue::int(n_i - 2)),
    };
    let gbps = fx.breakpoints_upto(n);
    if n > 1 {
        let s_prev = &sch.step(n - 1).s;
        let pts = zone_points(s_prev, &i.s_hi, &gbps);
        cx.over(Zone::Near, Claim::GapNear, &pts, |s| fx.gap(n, s), |_| near_rhs.clone(), Relation::Ge);
    }
    if n > 3 {
        let s_prev = &sch.step(n - 1).s;
        let pts = zone_points(&i.s_lo, s_prev, &gbps);
        cx.over(Zone::Far, Claim::GapFar, &pts, |s| fx.gap(n, s), |_| far_rhs.clone(), Relation::Ge);
        let (s, v) = gap_min.expect("gap minimum for n > 3").clone();
        cx.at(Zone::GapSpectral, Claim::GapSpectral, &s, v, far_rhs, Relation::Ge);
    }
    cx.out
}

/// Evaluate every claim; the result records failures instead of stopping.
pub fn build_certificate(sch: &ForgeSchedule, centers: &CenterSet) -> Result<ForgeCertificate> {
    if sch.steps.len() != sch.depth || sch.steps.iter().enumerate().any(|(k, st)| st.n != k + 1 || st.m == 0) {
        return Err(Error::InvalidParameter("malformed schedule steps".into()));
    }
    let fx = ForgeFactors::build(sch, centers)?;
    let gap_mins: Vec<Option<(LogValue, Quantity)>> =
        (1..=sch.depth).into_par_iter().map(|n| (n > 3).then(|| gap_minimum(sch, &fx, n))).collect();
    let per_step: Vec<Vec<Record>> = (1..=sch.depth)
        .into_par_iter()
        .map(|n| step_records(sch, &centers.centers[n - 1], &fx, n, gap_mins[n - 1].as_ref()))
        .collect();
    let mut records: Vec<Record> = per_step.into_iter().flatten().collect();

    // ultrametric tail: |y_N - y_{k-1}| <= max_{n = k..N} |y_n - y_{n-1}|
    for k in 4..=sch.depth {
        let (s, v) = gap_mins[k - 1..].iter().flatten().min_by(|a, b| a.1.value.cmp(&b.1.value)).unwrap().clone();
        let ki = k as i64;
        let rhs = match sch.mode {
            Mode::Theorem => &LogValue::int(ki - 14) - &sch.c_log.scale_int(6),
            Mode::Example => LogValue::int(ki - 2),
        };
        let pass = v.value >= rhs;
        let cert = Cert { dominance: None, tag: v.tag };
        records.push(Record { n: k, zone: Zone::Tail, claim: Claim::GapTail, s: Some(s), lhs: v.value, rhs, relation: Relation::Ge, cert, pass });
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(ForgeCertificate { schedule: sch.clone(), centers: centers.to_text(), records, pass })
}

/// Build and insist on success; the error carries the first failing record.
pub fn verify_certificate(sch: &ForgeSchedule, centers: &CenterSet) -> Result<ForgeCertificate> {
    let cert = build_certificate(sch, centers)?;
    match cert.first_failure() {
        Some(r) => Err(Error::CertificateFailure(Box::new(r.clone()))),
        None => Ok(cert),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub pass: bool,
    pub records: usize,
    /// Records whose stored content differs from the recomputation.
    pub mismatches: usize,
    pub schedule_violations: Vec<String>,
    pub first_failure: Option<Record>,
}

/// Re-validate a certificate against its own schedule and centers: every
/// stored record must match its recomputation and every claim must hold.
pub fn check_certificate(cert: &ForgeCertificate) -> Result<CheckReport> {
    let sch = &cert.schedule;
    let centers = CenterSet::from_text(&cert.centers, sch.field)?;
    let mut mismatches = usize::from(centers.to_text() != cert.centers);
    let schedule_violations = validate_schedule(sch);
    let fresh = build_certificate(sch, &centers)?;
    mismatches += fresh.records.iter().zip(&cert.records).filter(|(a, b)| a != b).count();
    mismatches += fresh.records.len().abs_diff(cert.records.len());
    mismatches += usize::from(fresh.pass != cert.pass);
    let first_failure = fresh.first_failure().cloned();
    let pass = mismatches == 0 && fresh.pass && schedule_violations.is_empty();
    Ok(CheckReport { pass, records: cert.records.len(), mismatches, schedule_violations, first_failure })
}
