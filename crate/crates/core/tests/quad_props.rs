use proptest::prelude::*;
use qsm_core::quad::zeta::{enumerate_ideals, ideal_counts_by_enumeration};
use qsm_core::quad::{
    compose, factor_ideal, ideal_class, ideal_count_coeffs, negative_fundamental_discriminants, ClassGroup, QuadElement,
    QuadField, QuadForm, QuadIdeal,
};

fn discriminant() -> impl Strategy<Value = i64> {
    prop::sample::select(negative_fundamental_discriminants(-300))
}

fn field_and_ideals() -> impl Strategy<Value = (i64, usize, usize)> {
    (discriminant(), 0usize..400, 0usize..400)
}

fn pick(field: QuadField, i: usize) -> QuadIdeal {
    let all = enumerate_ideals(field, 120);
    all[i % all.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn element_norm_is_multiplicative(d in discriminant(), u in -50i128..50, v in -50i128..50, s in -50i128..50, t in -50i128..50) {
        let k = QuadField::new(d).unwrap();
        let x = QuadElement::from_basis(k, u, v);
        let y = QuadElement::from_basis(k, s, t);
        prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn ideal_norm_is_multiplicative((d, i, j) in field_and_ideals()) {
        let k = QuadField::new(d).unwrap();
        let (a, b) = (pick(k, i), pick(k, j));
        prop_assert_eq!(a.mul(b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.mul(b), b.mul(a));
        prop_assert_eq!(a.mul(a.conj()), QuadIdeal::principal_integer(k, a.norm()));
        prop_assert_eq!(a.mul(b).exact_div(b), Some(a));
    }

    #[test]
    fn ideal_class_is_a_homomorphism((d, i, j) in field_and_ideals()) {
        let g = ClassGroup::new(d).unwrap();
        let k = g.field();
        let (a, b) = (pick(k, i), pick(k, j));
        prop_assert_eq!(ideal_class(&g, a.mul(b)), g.mul(ideal_class(&g, a), ideal_class(&g, b)));
        prop_assert_eq!(ideal_class(&g, a.conj()), g.inv(ideal_class(&g, a)));
    }

    #[test]
    fn composition_matches_ideal_multiplication((d, i, j) in field_and_ideals()) {
        let k = QuadField::new(d).unwrap();
        let (a, b) = (pick(k, i), pick(k, j));
        let (fa, fb) = (QuadForm::from_ideal(a), QuadForm::from_ideal(b));
        prop_assert_eq!(compose(&fa, &fb), QuadForm::from_ideal(a.mul(b)).reduce());
    }

    #[test]
    fn factorization_reconstructs((d, i, _) in field_and_ideals()) {
        let k = QuadField::new(d).unwrap();
        let a = pick(k, i);
        let product = factor_ideal(a).into_iter().fold(QuadIdeal::unit(k), |acc, (p, e)| acc.mul(p.ideal.pow(e)));
        prop_assert_eq!(product, a);
    }

    #[test]
    fn characters_are_homomorphisms(d in discriminant(), x in 0usize..100, y in 0usize..100, c in 0usize..100) {
        let g = ClassGroup::new(d).unwrap();
        let (x, y) = (x % g.class_number(), y % g.class_number());
        let chi = c % g.character_count();
        let lhs = g.character_value(chi, g.mul(x, y));
        let rhs = &g.character_value(chi, x) * &g.character_value(chi, y);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn ideal_counts_agree_with_enumeration() {
    for d in negative_fundamental_discriminants(-200) {
        let k = QuadField::new(d).unwrap();
        assert_eq!(ideal_count_coeffs(k, 500), ideal_counts_by_enumeration(k, 500), "D = {d}");
    }
}

#[test]
fn class_numbers_from_the_literature() {
    let known = [(-3, 1), (-4, 1), (-7, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-56, 4), (-84, 4), (-163, 1), (-199, 9)];
    for (d, h) in known {
        assert_eq!(ClassGroup::new(d).unwrap().class_number(), h, "D = {d}");
    }
}
