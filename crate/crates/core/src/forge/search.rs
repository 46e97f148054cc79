//! Search for a triple `(t, gamma, delta)` with `delta = c gamma` such that
//! `|lambda| |(t - lambda)^-1|_spect <= c^2` whenever `gamma <= |lambda| <= delta`.
//! Failures yield a `lambda` that is absorbed into `t`, and the loop repeats.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::gauss::{norm_profile, profile_extrema, RadiusInterval};
use crate::ratfun::RatFun;
use crate::LogValue;

/// Result of probing the condition on one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    /// The condition holds; `sup_log` is the log of the supremum used.
    Holds { sup_log: LogValue },
    /// A violating `lambda`, with `v_min((t - lambda)^-1)` on the spectrum.
    Violated { lambda: FieldElement, inverse_spect: LogValue },
}

/// Access to the spectral seminorm of a concrete ring.
pub trait SpectralOracle {
    /// `v_min(f)`: the spectral seminorm of `f` is `2^-v_min`.
    fn spect(&self, f: &RatFun) -> Result<LogValue>;

    /// Decide the condition for `t` with log-radii `s_gamma >= s_delta`.
    fn probe(&self, t: &RatFun, s_gamma: &LogValue, s_delta: &LogValue, c_log: &LogValue) -> Result<Probe>;
}

/// Rational functions with the supremum of Gauss norms over a radius interval.
#[derive(Clone, Debug)]
pub struct IntervalModel {
    pub interval: RadiusInterval,
}

impl SpectralOracle for IntervalModel {
    fn spect(&self, f: &RatFun) -> Result<LogValue> {
        Ok(profile_extrema(&norm_profile(f, &self.interval)?).v_min)
    }

    /// Bounds the supremum by `delta / gamma`.
    fn probe(&self, _t: &RatFun, s_gamma: &LogValue, s_delta: &LogValue, c_log: &LogValue) -> Result<Probe> {
        let sup_log = s_gamma - s_delta;
        if sup_log <= c_log.scale_int(2) {
            Ok(Probe::Holds { sup_log })
        } else {
            Err(Error::Inconclusive(format!("delta/gamma = 2^{sup_log} exceeds c^2")))
        }
    }
}

/// A test oracle whose condition always fails: it answers with `|lambda| = delta`
/// and declares `|(t - lambda)^-1|_spect = 2^excess / |lambda|` for a fixed
/// `excess > 2 c_log`. Spectral norms of `t` itself come from the interval model.
#[derive(Clone, Debug)]
pub struct ForcedDescentModel {
    pub base: IntervalModel,
    pub excess: LogValue,
}

impl SpectralOracle for ForcedDescentModel {
    fn spect(&self, f: &RatFun) -> Result<LogValue> {
        self.base.spect(f)
    }

    fn probe(&self, t: &RatFun, s_gamma: &LogValue, s_delta: &LogValue, _c_log: &LogValue) -> Result<Probe> {
        let field = t.field();
        let group = field.value_group();
        // discrete groups fall back to the integer grid
        let step = group.grid_step_below(&BigRational::new(1.into(), 64.into())).unwrap_or_else(BigRational::one);
        let v = LogValue::rational(s_delta.ceil_to_grid(&step).ok_or_else(|| Error::Inconclusive("irrational radius".into()))?);
        if v > *s_gamma {
            return Err(Error::Inconclusive(format!("no radius of the value group in [{s_delta}, {s_gamma}]")));
        }
        let lambda = field.monomial_with_valuation(&v, None)?;
        Ok(Probe::Violated { inverse_spect: -(&v + &self.excess), lambda })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStep {
    pub iteration: usize,
    /// Accumulated shift: `t_n = t_0 - mu`.
    pub mu: String,
    pub s_gamma: LogValue,
    pub s_delta: LogValue,
    pub lambda: Option<String>,
    /// `v_min(t_n)`; must not change along the descent.
    pub t_spect: LogValue,
    /// `gamma_{n+1} < gamma_n / c` after a violation.
    pub descent_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum SearchOutcome {
    Success { t: String, s_gamma: LogValue, s_delta: LogValue },
    IterationCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchTrace {
    /// Power applied to the input so that the obstruction reaches `c`.
    pub power: i64,
    pub steps: Vec<SearchStep>,
    pub outcome: SearchOutcome,
}

impl SearchTrace {
    /// Whether every descent step shrank gamma and kept `|t|_spect` fixed.
    pub fn invariants_hold(&self) -> bool {
        let spect_fixed = self.steps.windows(2).all(|w| w[0].t_spect == w[1].t_spect);
        spect_fixed && self.steps.iter().all(|s| s.descent_ok != Some(false))
    }
}

pub fn interval_search(oracle: &dyn SpectralOracle, t0: &RatFun, c_log: &LogValue, max_iter: usize) -> Result<SearchTrace> {
    if !c_log.is_positive() || !c_log.is_finite() {
        return Err(Error::InvalidParameter("c_log must be positive".into()));
    }
    let v_min = oracle.spect(t0)?;
    let v_max = -oracle.spect(&t0.invert()?)?;
    let obstruction = &v_max - &v_min;
    if obstruction.is_zero() {
        return Err(Error::PreconditionFlat);
    }
    let mut power = 1i64;
    while obstruction.scale_int(power) < *c_log {
        power += 1;
    }
    let t_start = t0.pow(power)?;
    let field = t_start.field();
    let mut mu = field.zero();
    let mut t = t_start.clone();
    let mut s_gamma = -oracle.spect(&t.invert()?)?;
    let mut steps = Vec::new();
    for iteration in 0..max_iter {
        let s_delta = &s_gamma - c_log;
        let t_spect = oracle.spect(&t)?;
        match oracle.probe(&t, &s_gamma, &s_delta, c_log)? {
            Probe::Holds { .. } => {
                steps.push(SearchStep { iteration, mu: mu.to_string(), s_gamma: s_gamma.clone(), s_delta: s_delta.clone(), lambda: None, t_spect, descent_ok: None });
                return Ok(SearchTrace { power, steps, outcome: SearchOutcome::Success { t: t.to_string(), s_gamma, s_delta } });
            }
            Probe::Violated { lambda, inverse_spect } => {
                let next_gamma = -inverse_spect;
                let descent_ok = next_gamma > &s_gamma + c_log;
                steps.push(SearchStep {
                    iteration,
                    mu: mu.to_string(),
                    s_gamma: s_gamma.clone(),
                    s_delta,
                    lambda: Some(lambda.to_string()),
                    t_spect,
                    descent_ok: Some(descent_ok),
                });
                mu = &mu + &lambda;
                t = t_start.sub(&RatFun::constant(mu.clone()));
                s_gamma = next_gamma;
            }
        }
    }
    Ok(SearchTrace { power, steps, outcome: SearchOutcome::IterationCap })
}
