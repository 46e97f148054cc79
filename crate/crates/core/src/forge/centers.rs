use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::schedule::{ForgeSchedule, Mode};
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement, Residue, ResidueKind};
use crate::text::parse_field_element;
use crate::LogValue;

/// Centers `lambda_{n,i}` of the linear factors of `P_n`, one list per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSet {
    pub centers: Vec<Vec<FieldElement>>,
}

impl CenterSet {
    pub fn to_text(&self) -> Vec<Vec<String>> {
        self.centers.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect()
    }

    pub fn from_text(rows: &[Vec<String>], field: FieldDescriptor) -> Result<Self> {
        let parse = |s: &String| {
            let c = parse_field_element(s, field)?;
            if !c.is_monomial() || !field.value_group().contains(&c.valuation()) {
                return Err(Error::ValueNotInGroup(format!("center {s} of {field}")));
            }
            Ok(c)
        };
        let centers = rows.iter().map(|row| row.iter().map(parse).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(CenterSet { centers })
    }
}

impl Serialize for CenterSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_text().serialize(s)
    }
}

/// Pick `2m - 1` centers per step.
///
/// Theorem mode: monomials `z^(b + eps p^i)` with pairwise distinct norms
/// strictly inside the window, so every subset sum of valuations of a given
/// size has a unique minimizer. Example mode: equal norms `2^-s_n` with
/// distinct residues, `u^i` over `F_p(u)` or the constants `1..2m-1` over `F_p`.
pub fn choose_centers(sch: &ForgeSchedule) -> Result<CenterSet> {
    let field = sch.field;
    let mut centers = Vec::with_capacity(sch.depth);
    for st in &sch.steps {
        let count = 2 * st.m - 1;
        let row = match sch.mode {
            Mode::Theorem => theorem_row(field, &st.s_plus, &st.s_minus, count)?,
            Mode::Example => example_row(field, &st.s, count)?,
        };
        centers.push(row);
    }
    Ok(CenterSet { centers })
}

fn theorem_row(field: FieldDescriptor, lo: &LogValue, hi: &LogValue, count: usize) -> Result<Vec<FieldElement>> {
    let group = field.value_group();
    if !group.is_dense() {
        return Err(Error::ValueGroupTooSparse(format!("{field} has a discrete value group")));
    }
    let width = (hi - lo).as_rational().cloned().ok_or_else(|| Error::InvalidParameter("window width must be rational".into()))?;
    let grid = group
        .grid_step_below(&(&width / BigInt::from(4)))
        .ok_or_else(|| Error::ValueGroupTooSparse(format!("no grid finer than {width}")))?;
    let base = lo.floor_to_grid(&grid).ok_or_else(|| Error::InvalidParameter("irrational window".into()))? + &grid;
    let room = hi - &LogValue::rational(base.clone());
    let p = BigRational::from_integer(BigInt::from(field.prime()));
    // eps = p^-K with eps * p^(count-1) < room
    let mut top = num_traits::pow(p.clone(), count - 1);
    let mut eps = BigRational::one();
    while LogValue::rational(top.clone()) >= room {
        top /= &p;
        eps /= &p;
    }
    let one = Residue::one(field.prime());
    let mut row = Vec::with_capacity(count);
    let mut pi = BigRational::one();
    for _ in 0..count {
        row.push(field.monomial(&base + &eps * &pi, one.clone()));
        pi *= &p;
    }
    Ok(row)
}

fn example_row(field: FieldDescriptor, s: &LogValue, count: usize) -> Result<Vec<FieldElement>> {
    let p = field.prime();
    let tags: Vec<Residue> = match field.residue_kind() {
        ResidueKind::FpU => (1..=count as i64).map(|i| Residue::u_pow(i, p)).collect(),
        ResidueKind::Fp => {
            if count as u64 > p - 1 {
                return Err(Error::ResidueFieldTooSmall { needed: count, available: p - 1 });
            }
            (1..=count as i64).map(|i| Residue::constant(i, p)).collect()
        }
    };
    tags.iter().map(|c| field.monomial_with_valuation(s, Some(c))).collect()
}
