use proptest::prelude::*;
use qsm_core::cm::{cm_function_eval, cm_state_value, klattice_action, CMFunction, KLatticePoint, TruncatedCMRep};
use qsm_core::quad::zeta::enumerate_ideals;
use qsm_core::quad::ClassGroup;
use rug::Float;

fn d() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-3i64, -4, -15, -20, -23, -47, -84])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_star_inverts_mu(d in d(), j in 0usize..50, k in 0usize..500) {
        let rep = TruncatedCMRep::new(ClassGroup::new(d).unwrap(), 2_000).unwrap();
        let js = enumerate_ideals(rep.group().field(), 40);
        let j = js[j % js.len()];
        let k = k % rep.ideals().len();
        if let Some(jk) = rep.mu(j, k) {
            prop_assert_eq!(rep.mu_star(j, jk), Some(k));
            prop_assert_eq!(rep.e(j, jk), Some(jk));
        }
    }

    #[test]
    fn action_composes(d in d(), base in 0usize..10, i in 0usize..50, j in 0usize..50) {
        let g = ClassGroup::new(d).unwrap();
        let k = g.field();
        let js = enumerate_ideals(k, 40);
        let (a, b) = (js[i % js.len()], js[j % js.len()]);
        let p = KLatticePoint::invertible(k, base % g.class_number());
        prop_assert_eq!(klattice_action(klattice_action(p, a), b), klattice_action(p, a.mul(b)));
    }

    #[test]
    fn divisor_functions_detect_divisibility(d in d(), i in 0usize..50, j in 0usize..50) {
        let g = ClassGroup::new(d).unwrap();
        let k = g.field();
        let js = enumerate_ideals(k, 40);
        let (a, b) = (js[i % js.len()], js[j % js.len()]);
        let p = klattice_action(KLatticePoint::invertible(k, 0), b);
        let v = cm_function_eval(&g, &CMFunction::e(a), p);
        prop_assert_eq!(v.is_zero(), !a.divides(b));
    }
}

#[test]
fn states_are_bounded_by_sup_norm() {
    let beta = Float::with_val(128, 2);
    for d in [-15i64, -23] {
        let rep = TruncatedCMRep::new(ClassGroup::new(d).unwrap(), 5_000).unwrap();
        let g = rep.group();
        for chi in 0..g.character_count() {
            for base in 0..g.class_number() {
                let r = cm_state_value(&rep, &CMFunction::chi(chi), base, &beta).unwrap();
                let z = r.complex(128);
                assert!(Float::with_val(128, z.abs_ref()) <= 1 + r.tail_bound.clone());
            }
        }
    }
}
