use proptest::prelude::*;
use qsm_core::bc::kms::gibbs_value_with;
use qsm_core::bc::{
    bc_adjoint, bc_mul, bc_symmetry, kms_high_temp_value, BCElement, BCMonomial, PartitionFunction, SymmetryClass,
};
use qsm_core::exact::arith::{gcd, lcm, units_mod};
use qsm_core::exact::{Rational, TorsionLabel};
use rug::{Complex, Float};

fn term() -> impl Strategy<Value = (u64, u64, i64, u64, i64)> {
    (1..=6u64, 1..=6u64, 0..12i64, 1..=12u64, -3..=3i64).prop_filter("coprime, nonzero", |(a, b, _, _, c)| {
        gcd(*a, *b) == 1 && *c != 0
    })
}

fn element() -> impl Strategy<Value = BCElement> {
    prop::collection::vec(term(), 1..=3).prop_map(|terms| {
        terms.into_iter().fold(BCElement::zero(), |acc, (a, b, num, den, c)| {
            let r = TorsionLabel::new(num, den).unwrap();
            acc.add(&BCElement::monomial(BCMonomial::new(a, r, b).unwrap(), Rational::from(c)))
        })
    })
}

fn label() -> impl Strategy<Value = TorsionLabel> {
    (1..=12u64).prop_flat_map(|den| (0..den as i64).prop_map(move |num| TorsionLabel::new(num, den).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(x in element(), y in element(), z in element()) {
        prop_assert_eq!(bc_mul(&bc_mul(&x, &y), &z), bc_mul(&x, &bc_mul(&y, &z)));
    }

    #[test]
    fn adjoint_is_an_anti_involution(x in element(), y in element()) {
        prop_assert_eq!(bc_adjoint(&bc_adjoint(&x)), x.clone());
        prop_assert_eq!(bc_adjoint(&bc_mul(&x, &y)), bc_mul(&bc_adjoint(&y), &bc_adjoint(&x)));
    }

    #[test]
    fn symmetries_are_automorphisms(x in element(), y in element(), pick in 0usize..1000) {
        let xy = bc_mul(&x, &y);
        let n = lcm(lcm(x.level(), y.level()), xy.level());
        let units = units_mod(n);
        let u = units[pick % units.len()] as i64;
        let lhs = bc_symmetry(u, n, &xy).unwrap();
        let rhs = bc_mul(&bc_symmetry(u, n, &x).unwrap(), &bc_symmetry(u, n, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gibbs_and_polylog_routes_agree(r in label(), pick in 0usize..100, beta in prop::sample::select(vec![1.5, 2.0, 3.0])) {
        let units = units_mod(r.den());
        let alpha = SymmetryClass::new(r.den(), units[pick % units.len()] as i64).unwrap();
        let b = Float::with_val(128, beta);
        let pf = PartitionFunction::new(&b, 2_000).unwrap();
        let g = gibbs_value_with(&BCElement::e(r), &alpha, &pf).unwrap();
        let p = kms_high_temp_value(r, &alpha, &b, 2_000).unwrap();
        let diff = Complex::with_val(128, g.complex(128) - p.complex(128));
        prop_assert!(Float::with_val(128, diff.abs_ref()) < 1e-25);
    }

    #[test]
    fn gibbs_states_are_positive(x in element()) {
        let xsx = bc_mul(&bc_adjoint(&x), &x);
        let alpha = SymmetryClass::new(xsx.level(), 1).unwrap();
        let b = Float::with_val(128, 2);
        let pf = PartitionFunction::new(&b, 2_000).unwrap();
        let v = gibbs_value_with(&xsx, &alpha, &pf).unwrap().complex(128);
        prop_assert!(*v.real() >= -1e-30);
        prop_assert!(Float::with_val(128, v.imag().abs_ref()) < 1e-30);
    }
}

#[test]
fn gibbs_value_of_identity_is_one() {
    let b = Float::with_val(128, 2);
    let r = qsm_core::bc::gibbs_value(&BCElement::one(), &SymmetryClass::identity(1), &b, 1_000).unwrap();
    assert!(r.exact);
    assert_eq!(r.real(64), 1);
}
