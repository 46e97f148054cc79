mod common;

use common::{fields, random_element, rng};
use rand::Rng;
use ultranorm::models::{multivar_norm_data, multivar_norm_upper, project, LaurentPoly, MultiVarElement};
use ultranorm::FieldDescriptor;

fn random_laurent(r: &mut rand_chacha::ChaCha8Rng, field: FieldDescriptor) -> LaurentPoly {
    let mut p = LaurentPoly::zero(field);
    for _ in 0..r.gen_range(1..=5) {
        let vars = r.gen_range(0..=4);
        let exps = (0..vars).map(|_| r.gen_range(-2..=2)).collect();
        p = p.add(&LaurentPoly::monomial(field, exps, random_element(r, field)));
    }
    p
}

#[test]
fn projection_never_raises_alpha() {
    let mut r = rng(378);
    let fs = fields();
    for i in 0..200 {
        let field = fs[i % fs.len()];
        let p = random_laurent(&mut r, field);
        let x = MultiVarElement::Laurent(p.clone());
        for k in 0..=5 {
            let MultiVarElement::Laurent(pk) = project(k, &x).unwrap() else { unreachable!() };
            assert!(pk.alpha() >= p.alpha(), "{x} k={k}");
            assert!(pk.depth() <= k);
        }
    }
}

#[test]
fn alpha_below_every_decomposition_bound() {
    let mut r = rng(387);
    let fs = fields();
    let mut checked = 0;
    for i in 0..200 {
        let field = fs[i % fs.len()];
        let parts: Vec<MultiVarElement> = (0..r.gen_range(1..=4)).map(|_| MultiVarElement::Laurent(random_laurent(&mut r, field))).collect();
        let x = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p));
        if x.is_zero() {
            continue;
        }
        let bound = multivar_norm_upper(&x, &parts).unwrap();
        let own = multivar_norm_upper(&x, std::slice::from_ref(&x)).unwrap();
        let alpha_v = multivar_norm_data(&x).unwrap().alpha_v;
        assert!(alpha_v >= bound, "{x}");
        assert!(alpha_v >= own);
        checked += 1;
    }
    assert!(checked > 150);
}

#[test]
fn mismatched_decomposition_rejected() {
    let f = fields()[1];
    let x = MultiVarElement::Laurent(LaurentPoly::var(f, 1));
    let y = MultiVarElement::Laurent(LaurentPoly::var(f, 2));
    assert!(multivar_norm_upper(&x, &[y]).is_err());
}
