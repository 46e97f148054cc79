use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{ratfun_gauss, GaussPoint};
use crate::ratfun::RatFun;
use crate::LogValue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusRow {
    pub n: usize,
    /// `v(x_{n+1} - x_n) - v(x_n) - v(x_{n+1})`.
    pub predicted: LogValue,
    /// `v(x_n^-1 - x_{n+1}^-1)` computed from the inverses.
    pub direct: LogValue,
}

#[derive(Clone, Debug)]
pub struct CauchyInverse {
    pub inverses: Vec<RatFun>,
    pub moduli: Vec<ModulusRow>,
}

impl CauchyInverse {
    pub fn consistent(&self) -> bool {
        self.moduli.iter().all(|r| r.predicted == r.direct)
    }
}

fn value(f: &RatFun, pt: &GaussPoint) -> Result<LogValue> {
    if f.is_zero() {
        return Ok(LogValue::Infinity);
    }
    ratfun_gauss(f, pt)
}

/// Invert a sequence whose norms stay bounded below (`v(x_n) <= lower`) and
/// report the Cauchy modulus of the inverses, `x_n^-1 - x_{n+1}^-1 =
/// (x_{n+1} - x_n) / (x_n x_{n+1})`, both predicted and computed directly.
pub fn cauchy_invert(seq: &[RatFun], pt: &GaussPoint, lower: &LogValue) -> Result<CauchyInverse> {
    let mut vals = Vec::with_capacity(seq.len());
    for (k, x) in seq.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroTerm { index: k + 1 });
        }
        let v = ratfun_gauss(x, pt)?;
        if v > *lower {
            return Err(Error::NotBoundedBelow { index: k + 1 });
        }
        vals.push(v);
    }
    let inverses = seq.iter().map(RatFun::invert).collect::<Result<Vec<_>>>()?;
    let mut moduli = Vec::new();
    for k in 0..seq.len().saturating_sub(1) {
        let diff = value(&seq[k + 1].sub(&seq[k]), pt)?;
        let predicted = &(&diff - &vals[k]) - &vals[k + 1];
        let direct = value(&inverses[k].sub(&inverses[k + 1]), pt)?;
        moduli.push(ModulusRow { n: k + 1, predicted, direct });
    }
    Ok(CauchyInverse { inverses, moduli })
}
