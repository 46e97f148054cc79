//! Lazy evaluation of `x_n = N_lo / P_n` and `1 - x_n = N_hi / P_n` where
//! `P_n = prod_i (t - lambda_{n,i})` has degree `2m - 1`, `N_lo` keeps the
//! coefficients of degree `< m` and `N_hi` the rest.
//!
//! The coefficient of `t^j` in `P_n` is `(-1)^k e_k(lambda)` with
//! `k = 2m - 1 - j`. Its valuation is at least the sum `cv_j` of the `k`
//! smallest center valuations, with equality exactly when the residue sum
//! over the minimizing subsets is nonzero. That residue is computed with
//! elementary symmetric functions of the leading residues, so nothing of
//! degree `2m - 1` is ever expanded.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::centers::CenterSet;
use super::schedule::ForgeSchedule;
use crate::error::{Error, Result};
use crate::fields::{elementary_symmetric, FieldElement, Residue};
use crate::gauss::{min_plus, ratfun_gauss, Dominance, GaussPoint};
use crate::ratfun::{hull_root_valuations, Poly, RatFun};
use crate::LogValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    /// Unique dominant term with a certified coefficient.
    Exact,
    /// Tied dominant terms, every one certified; the value is still exact.
    Gauss,
    /// A dominant coefficient may cancel; the value is only a lower bound.
    Bound,
}

impl Tag {
    pub fn combine(self, other: Tag) -> Tag {
        match (self, other) {
            (Tag::Bound, _) | (_, Tag::Bound) => Tag::Bound,
            (Tag::Exact, Tag::Exact) => Tag::Exact,
            _ => Tag::Gauss,
        }
    }

    /// Whether the value is exact rather than a lower bound.
    pub fn is_exact(self) -> bool {
        self != Tag::Bound
    }
}

/// A valuation together with how it was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    pub value: LogValue,
    pub dominance: Option<Dominance>,
    pub tag: Tag,
}

impl Quantity {
    fn sum<'a>(parts: impl IntoIterator<Item = &'a Quantity>) -> Quantity {
        let mut value = LogValue::zero();
        let mut tag = Tag::Exact;
        for q in parts {
            value = &value + &q.value;
            tag = tag.combine(q.tag);
        }
        Quantity { value, dominance: None, tag }
    }
}

#[derive(Clone, Debug)]
pub struct FactorData {
    pub m: usize,
    /// Center valuations, increasing.
    pub center_vals: Vec<LogValue>,
    /// `cv_j` for `j = 0..2m`.
    pub coeff_vals: Vec<LogValue>,
    /// Whether `v(P_{n,j}) = cv_j`.
    pub certified: Vec<bool>,
    /// Every `s` where the slope of `v(x_n)` or `v(1 - x_n)` may change.
    pub breakpoints: Vec<LogValue>,
}

impl FactorData {
    pub fn new(centers: &[FieldElement]) -> Result<Self> {
        let deg = centers.len();
        if deg == 0 || deg.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("{deg} centers; need 2m - 1")));
        }
        let m = deg.div_ceil(2);
        let mut leads: Vec<(LogValue, Residue)> =
            centers.iter().map(|c| c.leading().ok_or(Error::ZeroElement)).collect::<Result<_>>()?;
        leads.sort_by(|a, b| a.0.cmp(&b.0));
        let p = centers[0].field().prime();
        let center_vals: Vec<LogValue> = leads.iter().map(|(v, _)| v.clone()).collect();

        // groups of equal valuation with their elementary symmetric residues
        let mut groups: Vec<(usize, usize, Vec<Residue>)> = Vec::new();
        let mut start = 0;
        while start < deg {
            let mut end = start + 1;
            while end < deg && center_vals[end] == center_vals[start] {
                end += 1;
            }
            let res: Vec<Residue> = leads[start..end].iter().map(|(_, r)| r.clone()).collect();
            groups.push((start, end, elementary_symmetric(&res, p)));
            start = end;
        }

        let mut prefix = vec![LogValue::zero()];
        for v in &center_vals {
            let next = prefix.last().unwrap() + v;
            prefix.push(next);
        }
        let mut coeff_vals = Vec::with_capacity(deg + 1);
        let mut certified = Vec::with_capacity(deg + 1);
        for j in 0..=deg {
            let k = deg - j;
            coeff_vals.push(prefix[k].clone());
            // the k smallest: all groups strictly before the one holding index k-1, plus r from it
            let ok = if k == 0 {
                true
            } else {
                let (gs, _, e) = groups.iter().find(|(s, e, _)| *s < k && k <= *e).unwrap();
                !e[k - gs].is_zero()
            };
            certified.push(ok);
        }

        let mut breakpoints = center_vals.clone();
        let lo: Vec<(usize, LogValue)> = (0..m).map(|j| (j, coeff_vals[j].clone())).collect();
        let hi: Vec<(usize, LogValue)> = (m..=deg).map(|j| (j, coeff_vals[j].clone())).collect();
        breakpoints.extend(hull_root_valuations(&lo).into_iter().map(|(r, _)| r));
        breakpoints.extend(hull_root_valuations(&hi).into_iter().map(|(r, _)| r));
        breakpoints.sort();
        breakpoints.dedup();
        Ok(FactorData { m, center_vals, coeff_vals, certified, breakpoints })
    }

    /// `v_s(P_n) = sum_i min(v(lambda_i), s)`; always exact.
    pub fn v_p(&self, s: &LogValue) -> LogValue {
        self.center_vals.iter().map(|v| std::cmp::min(v, s).clone()).sum()
    }

    fn part(&self, range: std::ops::Range<usize>, s: &LogValue) -> Quantity {
        let pts: Vec<(usize, LogValue)> = range.map(|j| (j, self.coeff_vals[j].clone())).collect();
        let (value, dom) = min_plus(&pts, s).expect("nonempty range");
        let tag = match &dom {
            Dominance::Unique(j) if self.certified[*j] => Tag::Exact,
            Dominance::Tied(js) if js.iter().all(|j| self.certified[*j]) => Tag::Gauss,
            _ => Tag::Bound,
        };
        Quantity { value, dominance: Some(dom), tag }
    }

    pub fn n_lo(&self, s: &LogValue) -> Quantity {
        self.part(0..self.m, s)
    }

    pub fn n_hi(&self, s: &LogValue) -> Quantity {
        self.part(self.m..2 * self.m, s)
    }

    pub fn x(&self, s: &LogValue) -> Quantity {
        let mut q = self.n_lo(s);
        q.value = &q.value - &self.v_p(s);
        q
    }

    pub fn one_minus_x(&self, s: &LogValue) -> Quantity {
        let mut q = self.n_hi(s);
        q.value = &q.value - &self.v_p(s);
        q
    }
}

/// Per-step factor data for a whole schedule.
#[derive(Clone, Debug)]
pub struct ForgeFactors {
    pub factors: Vec<FactorData>,
}

impl ForgeFactors {
    pub fn build(sch: &ForgeSchedule, centers: &CenterSet) -> Result<Self> {
        if centers.centers.len() != sch.depth {
            return Err(Error::InvalidParameter(format!("{} center rows for depth {}", centers.centers.len(), sch.depth)));
        }
        let factors = centers.centers.par_iter().map(|row| FactorData::new(row)).collect::<Result<Vec<_>>>()?;
        Ok(ForgeFactors { factors })
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, n: usize) -> &FactorData {
        &self.factors[n - 1]
    }

    /// `(v(x_n), v(1 - x_n))` at log-radius `s`.
    pub fn eval_factor(&self, n: usize, s: &LogValue) -> (Quantity, Quantity) {
        let f = self.factor(n);
        (f.x(s), f.one_minus_x(s))
    }

    /// `v(y_n) = sum_{k <= n} v(x_k)`; `y_0 = 1`.
    pub fn y(&self, n: usize, s: &LogValue) -> Quantity {
        let xs: Vec<Quantity> = (1..=n).map(|k| self.factor(k).x(s)).collect();
        Quantity::sum(&xs)
    }

    /// `v(y_n - y_{n-1}) = v(y_{n-1}) + v(1 - x_n)`.
    pub fn gap(&self, n: usize, s: &LogValue) -> Quantity {
        let mut parts: Vec<Quantity> = (1..n).map(|k| self.factor(k).x(s)).collect();
        parts.push(self.factor(n).one_minus_x(s));
        Quantity::sum(&parts)
    }

    /// Union of breakpoints of the factors `1..=n`.
    pub fn breakpoints_upto(&self, n: usize) -> Vec<LogValue> {
        let mut all: Vec<LogValue> = self.factors[..n].iter().flat_map(|f| f.breakpoints.iter().cloned()).collect();
        all.sort();
        all.dedup();
        all
    }
}

/// Full expansion of the sequence, for small instances only.
pub struct ExpandedForge {
    pub x: Vec<RatFun>,
    pub one_minus_x: Vec<RatFun>,
    pub y: Vec<RatFun>,
}

impl ExpandedForge {
    pub fn build(centers: &CenterSet) -> Result<Self> {
        let mut x = Vec::new();
        let mut one_minus_x = Vec::new();
        let mut y: Vec<RatFun> = Vec::new();
        for row in &centers.centers {
            let field = row[0].field();
            let m = row.len().div_ceil(2);
            let p = row.iter().fold(Poly::constant(field.one()), |acc, c| acc.mul(&Poly::linear(c)));
            let lo = Poly::new(field, p.coeffs()[..m].to_vec());
            let hi = p.sub(&lo);
            let xn = RatFun::new(lo, p.clone())?;
            let yn = match y.last() {
                Some(prev) => prev.mul(&xn),
                None => xn.clone(),
            };
            one_minus_x.push(RatFun::new(hi, p)?);
            x.push(xn);
            y.push(yn);
        }
        Ok(ExpandedForge { x, one_minus_x, y })
    }

    /// `(v(x_n), v(1 - x_n), v(y_n))` by direct Gauss valuation.
    pub fn values(&self, n: usize, s: &LogValue) -> Result<(LogValue, LogValue, LogValue)> {
        let pt = GaussPoint::at(s.clone());
        Ok((ratfun_gauss(&self.x[n - 1], &pt)?, ratfun_gauss(&self.one_minus_x[n - 1], &pt)?, ratfun_gauss(&self.y[n - 1], &pt)?))
    }
}
