#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultranorm::gauss::GaussPoint;
use ultranorm::models::{AnnulusElement, QSeriesElement};
use ultranorm::{FieldDescriptor, FieldElement, LogValue, Poly, Residue, ResidueKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn fields() -> Vec<FieldDescriptor> {
    vec![
        FieldDescriptor::padic(3).unwrap(),
        FieldDescriptor::gen_laurent(2, ResidueKind::Fp).unwrap(),
        FieldDescriptor::gen_laurent(3, ResidueKind::FpU).unwrap(),
        FieldDescriptor::gen_laurent(5, ResidueKind::Fp).unwrap(),
    ]
}

fn random_residue(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> Residue {
    let p = field.prime();
    let c = Residue::constant(rng.gen_range(1..p as i64), p);
    match field.residue_kind() {
        ResidueKind::FpU if rng.gen_bool(0.5) => c.mul(&Residue::u_pow(rng.gen_range(-2..=2), p)),
        _ => c,
    }
}

/// A nonzero element with one to three terms.
pub fn random_element(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> FieldElement {
    loop {
        let mut x = field.zero();
        for _ in 0..rng.gen_range(1..=3) {
            let e = match field {
                FieldDescriptor::PAdicQ { .. } => q(rng.gen_range(-3..=3), 1),
                FieldDescriptor::GenLaurent { p, .. } => {
                    let d = [1, 2, p as i64, (p * p) as i64][rng.gen_range(0..4)];
                    q(rng.gen_range(-3 * d..=3 * d), d)
                }
            };
            x = &x + &field.monomial(e, random_residue(rng, field));
        }
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, field: FieldDescriptor, max_deg: usize) -> Poly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs = (0..=deg).map(|_| if rng.gen_bool(0.25) { field.zero() } else { random_element(rng, field) }).collect();
        let p = Poly::new(field, coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Uncentered or centered Gauss point with a rational log-radius in [-3, 3].
pub fn random_point(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> GaussPoint {
    let s = LogValue::rational(q(rng.gen_range(-18..=18), 6));
    if rng.gen_bool(0.5) {
        GaussPoint::at(s)
    } else {
        GaussPoint::centered(random_element(rng, field), s)
    }
}

pub fn random_qseries(rng: &mut ChaCha8Rng) -> QSeriesElement {
    loop {
        let terms: Vec<(i64, BigRational)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let d = [1, 2, 3, 4, 8][rng.gen_range(0..5)];
                (rng.gen_range(-1..=4), q(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }, d))
            })
            .collect();
        let x = QSeriesElement::from_terms(terms);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_annulus(rng: &mut ChaCha8Rng, field: FieldDescriptor, s: &LogValue) -> AnnulusElement {
    loop {
        let mut x = AnnulusElement::zero(field, s.clone()).unwrap();
        for _ in 0..rng.gen_range(1..=4) {
            let c = random_element(rng, field);
            x = x.add(&AnnulusElement::monomial(field, s.clone(), rng.gen_range(-3..=3), c).unwrap());
        }
        if !x.is_zero() {
            return x;
        }
    }
}
