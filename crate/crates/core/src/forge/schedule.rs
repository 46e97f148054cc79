//! Radius schedules for the counterexample sequences.
//!
//! All radii are log-radii: `s = -log2(rho)`, so the increasing radii
//! `rho_1 < rho_2 < ...` become decreasing `s_1 > s_2 > ...` and the window
//! `[rho_n^-, rho_n^+]` becomes `[s_plus, s_minus]` with `s_plus < s_n < s_minus`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FieldDescriptor;
use crate::gauss::RadiusInterval;
use crate::LogValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Distinct center norms pinched around each radius; needs a dense value group.
    Theorem,
    /// Equal center norms with distinct residues; radii in the value group.
    Example,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Theorem => "theorem",
            Mode::Example => "example",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Mode::Theorem),
            "example" => Ok(Mode::Example),
            _ => Err(Error::Parse(format!("unknown mode `{s}` (theorem or example)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub n: usize,
    pub s: LogValue,
    pub s_plus: LogValue,
    pub s_minus: LogValue,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForgeSchedule {
    pub field: FieldDescriptor,
    pub mode: Mode,
    pub interval: RadiusInterval,
    pub c_log: LogValue,
    pub depth: usize,
    pub steps: Vec<Step>,
    /// Small instances relax the gap conditions; used for oracle comparisons.
    #[serde(default)]
    pub small: bool,
}

impl ForgeSchedule {
    pub fn step(&self, n: usize) -> &Step {
        &self.steps[n - 1]
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn lv(q: BigRational) -> LogValue {
    LogValue::rational(q)
}

fn check_common(interval: &RadiusInterval, c_log: &LogValue, depth: usize) -> Result<()> {
    if interval.s_lo >= interval.s_hi {
        return Err(Error::InfeasibleSchedule("the interval must have positive length".into()));
    }
    if !c_log.is_positive() || !c_log.is_finite() {
        return Err(Error::InvalidParameter("c_log must be positive".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    Ok(())
}

const M_CAP: usize = 4096;

/// Build a schedule of depth `depth` with a constant multiplicity `m`,
/// searching upward from `m_hint` for the first feasible value.
///
/// Consecutive radii satisfy `s_k - s_{k+1} >= (k+1)/m`, and the last one
/// keeps room `s_N - s_lo >= (N+1)/m` for a virtual next radius.
pub fn make_schedule(
    field: FieldDescriptor,
    interval: &RadiusInterval,
    c_log: &LogValue,
    mode: Mode,
    depth: usize,
    m_hint: usize,
) -> Result<ForgeSchedule> {
    check_common(interval, c_log, depth)?;
    if mode == Mode::Theorem && !field.value_group().is_dense() {
        return Err(Error::ValueGroupTooSparse(format!("{field} has a discrete value group")));
    }
    for m in m_hint.max(1)..=M_CAP {
        let steps = match mode {
            Mode::Theorem => theorem_steps(field, interval, depth, m),
            Mode::Example => example_steps(field, interval, depth, m),
        };
        if let Some(steps) = steps {
            return Ok(ForgeSchedule { field, mode, interval: interval.clone(), c_log: c_log.clone(), depth, steps, small: false });
        }
        if mode == Mode::Example && !field.value_group().is_dense() && m > 4 * depth * depth + 16 {
            // integer radii: a larger m cannot shrink the unit gaps any further
            break;
        }
    }
    Err(Error::InfeasibleSchedule(format!("depth {depth} does not fit in [{}, {}]", interval.s_lo, interval.s_hi)))
}

fn theorem_steps(field: FieldDescriptor, interval: &RadiusInterval, depth: usize, m: usize) -> Option<Vec<Step>> {
    let mi = m as i64;
    let w = rat(1, 2 * mi);
    let step = field.value_group().grid_step_below(&rat(1, 8 * mi))?;
    let mut steps = Vec::with_capacity(depth);
    // s_1^- sits strictly below s_hi so that s_hi lies in the small-radius zone of x_1
    let mut target = &interval.s_hi - &lv(&w * BigInt::from(3));
    for n in 1..=depth {
        let s_plus = target.floor_to_grid(&step)?;
        let s = &s_plus + &w;
        let s_minus = &s + &w;
        let s_lv = lv(s.clone());
        if lv(s_plus.clone()) <= interval.s_lo {
            return None;
        }
        target = &s_lv - &lv(rat(n as i64 + 1, mi) + &w);
        steps.push(Step { n, s: s_lv, s_plus: lv(s_plus), s_minus: lv(s_minus), m });
    }
    let last = &steps[depth - 1].s;
    if last - &lv(rat(depth as i64 + 1, mi)) < interval.s_lo {
        return None;
    }
    Some(steps)
}

fn example_steps(field: FieldDescriptor, interval: &RadiusInterval, depth: usize, m: usize) -> Option<Vec<Step>> {
    let mi = m as i64;
    let group = field.value_group();
    let step = if group.is_dense() { group.grid_step_below(&rat(1, 4 * mi))? } else { BigRational::one() };
    let mut steps = Vec::with_capacity(depth);
    let mut target = interval.s_hi.clone();
    for n in 1..=depth {
        let s = lv(target.floor_to_grid(&step)?);
        if s <= interval.s_lo {
            return None;
        }
        target = &s - &lv(rat(n as i64 + 1, mi));
        steps.push(Step { n, s: s.clone(), s_plus: s.clone(), s_minus: s, m });
    }
    if &steps[depth - 1].s - &lv(rat(depth as i64 + 1, mi)) < interval.s_lo {
        return None;
    }
    Some(steps)
}

/// A schedule with multiplicity `m` and evenly spread radii, without the gap
/// conditions; meant for comparisons against full expansion.
pub fn make_small_schedule(
    field: FieldDescriptor,
    interval: &RadiusInterval,
    c_log: &LogValue,
    mode: Mode,
    depth: usize,
    m: usize,
) -> Result<ForgeSchedule> {
    check_common(interval, c_log, depth)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    if mode == Mode::Theorem && !field.value_group().is_dense() {
        return Err(Error::ValueGroupTooSparse(format!("{field} has a discrete value group")));
    }
    let len = interval.length();
    let slot = len.scale(&rat(1, depth as i64));
    let group = field.value_group();
    let mut steps = Vec::with_capacity(depth);
    for n in 1..=depth {
        let mid = &interval.s_hi - &slot.scale(&rat(2 * n as i64 - 1, 2));
        let step = match mode {
            Mode::Theorem => {
                let w = std::cmp::min(lv(rat(1, 2 * m as i64)), slot.scale(&rat(1, 4)));
                let w_q = w.as_rational().cloned().ok_or_else(|| Error::InfeasibleSchedule("irrational slot width".into()))?;
                let grid = group.grid_step_below(&(&w_q / BigInt::from(4))).unwrap_or_else(BigRational::zero);
                if grid.is_zero() {
                    return Err(Error::ValueGroupTooSparse(format!("{field}")));
                }
                let s_plus = (&mid - &w).floor_to_grid(&grid).unwrap();
                let s = &s_plus + &w_q;
                Step { n, s: lv(s.clone()), s_plus: lv(s_plus), s_minus: lv(&s + &w_q), m }
            }
            Mode::Example => {
                let grid = if group.is_dense() { group.grid_step_below(&rat(1, 64)).unwrap() } else { BigRational::one() };
                let s = lv(mid.floor_to_grid(&grid).unwrap());
                if !interval.contains(&s) || steps.last().is_some_and(|p: &Step| p.s <= s) {
                    return Err(Error::InfeasibleSchedule("interval too short for integer radii".into()));
                }
                Step { n, s: s.clone(), s_plus: s.clone(), s_minus: s, m }
            }
        };
        steps.push(step);
    }
    Ok(ForgeSchedule { field, mode, interval: interval.clone(), c_log: c_log.clone(), depth, steps, small: true })
}

/// Independent constraint check; returns every violated condition.
pub fn validate_schedule(sch: &ForgeSchedule) -> Vec<String> {
    let mut bad = Vec::new();
    let i = &sch.interval;
    if sch.steps.len() != sch.depth {
        bad.push(format!("{} steps for depth {}", sch.steps.len(), sch.depth));
        return bad;
    }
    if i.s_lo >= i.s_hi {
        bad.push("interval has no length".into());
    }
    if sch.mode == Mode::Theorem && !sch.field.value_group().is_dense() {
        bad.push("theorem mode needs a dense value group".into());
    }
    for (k, st) in sch.steps.iter().enumerate() {
        let n = k + 1;
        if st.n != n {
            bad.push(format!("step {k} is labelled {}", st.n));
        }
        if st.m == 0 {
            bad.push(format!("m_{n} = 0"));
            continue;
        }
        if !(i.s_lo < st.s && st.s <= i.s_hi) {
            bad.push(format!("s_{n} = {} outside the interval", st.s));
        }
        let inv_m = lv(rat(1, st.m as i64));
        match sch.mode {
            Mode::Theorem => {
                if !(st.s_plus < st.s && st.s < st.s_minus) {
                    bad.push(format!("window of step {n} does not straddle s_{n}"));
                }
                if &st.s - &st.s_plus > inv_m || &st.s_minus - &st.s > inv_m {
                    bad.push(format!("pinch of step {n} wider than 1/m"));
                }
                if st.s_minus > i.s_hi || st.s_plus < i.s_lo {
                    bad.push(format!("window of step {n} leaves the interval"));
                }
            }
            Mode::Example => {
                if st.s_plus != st.s || st.s_minus != st.s {
                    bad.push(format!("example step {n} carries a window"));
                }
                if !sch.field.value_group().contains(&st.s) {
                    bad.push(format!("s_{n} = {} not in the value group", st.s));
                }
            }
        }
        if k > 0 {
            let prev = &sch.steps[k - 1];
            if st.s >= prev.s {
                bad.push(format!("s_{n} does not decrease"));
            }
            if sch.mode == Mode::Theorem && st.m < prev.m {
                bad.push(format!("m decreases at step {n}"));
            }
            if sch.mode == Mode::Theorem && st.s_minus >= prev.s_plus {
                bad.push(format!("windows {} and {n} overlap", n - 1));
            }
            if !sch.small {
                // gap between s_{n-1} and s_n, with m_{n-1} (theorem) or m_n (example)
                let m_ref = if sch.mode == Mode::Theorem { prev.m } else { st.m };
                if &prev.s - &st.s < lv(rat(n as i64, m_ref as i64)) {
                    bad.push(format!("gap s_{} - s_{n} below {n}/m", n - 1));
                }
            }
        }
    }
    if !sch.small {
        let last = &sch.steps[sch.depth - 1];
        let need = lv(rat(sch.depth as i64 + 1, last.m as i64));
        if &last.s - &i.s_lo < need {
            bad.push("no room below s_N for the next radius".into());
        }
    }
    bad
}
