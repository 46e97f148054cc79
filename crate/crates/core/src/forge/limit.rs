use serde::Serialize;

use super::centers::CenterSet;
use super::factors::{ForgeFactors, Tag};
use super::schedule::{ForgeSchedule, Mode};
use crate::error::{Error, Result};
use crate::LogValue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitRow {
    pub s: LogValue,
    /// `v(y_n)` for `n = 1..=N`.
    pub values: Vec<LogValue>,
    pub tags: Vec<Tag>,
    /// First `n` with `s` past the window of `x_n` (past `s_n` in example mode).
    pub predicted: Option<usize>,
    /// First `n` from which `v(y_k) = v(y_{k-1})` holds exactly for all `k >= n`.
    pub observed: Option<usize>,
}

impl LimitRow {
    pub fn stabilizes_as_predicted(&self) -> bool {
        self.predicted.is_some() && self.predicted == self.observed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitTable {
    pub rows: Vec<LimitRow>,
    /// `v(y_n)` at `s_lo`, increasing strictly with `v(y_n) >= n - 1`.
    pub delta_growth: bool,
}

/// Tabulate `v(y_n)` at the given log-radii and at `s_lo`.
pub fn limit_table(sch: &ForgeSchedule, centers: &CenterSet, samples: &[LogValue]) -> Result<LimitTable> {
    let fx = ForgeFactors::build(sch, centers)?;
    let i = &sch.interval;
    let n_max = sch.depth;
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        if !i.contains(s) {
            return Err(Error::InvalidParameter(format!("sample {s} outside [{}, {}]", i.s_lo, i.s_hi)));
        }
        let ys: Vec<_> = (1..=n_max).map(|n| fx.y(n, s)).collect();
        let values: Vec<LogValue> = ys.iter().map(|q| q.value.clone()).collect();
        let tags: Vec<Tag> = ys.iter().map(|q| q.tag).collect();
        let predicted = if *s == i.s_lo {
            None
        } else {
            sch.steps
                .iter()
                .find(|st| match sch.mode {
                    Mode::Theorem => *s > st.s_minus,
                    Mode::Example => *s >= st.s,
                })
                .map(|st| st.n)
        };
        let same = |k: usize| {
            let prev = if k == 1 { LogValue::zero() } else { values[k - 2].clone() };
            values[k - 1] == prev && tags[k - 1].is_exact()
        };
        let mut observed = None;
        for n in (1..=n_max).rev() {
            if same(n) {
                observed = Some(n);
            } else {
                break;
            }
        }
        rows.push(LimitRow { s: s.clone(), values, tags, predicted, observed });
    }
    let at_delta: Vec<LogValue> = (1..=n_max).map(|n| fx.y(n, &i.s_lo).value).collect();
    let delta_growth = at_delta.iter().enumerate().all(|(k, v)| *v >= LogValue::int(k as i64))
        && at_delta.windows(2).all(|w| w[0] < w[1]);
    Ok(LimitTable { rows, delta_growth })
}
