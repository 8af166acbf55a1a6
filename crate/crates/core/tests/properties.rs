//! Randomized identities of brackets, linearizations and normal forms.

mod common;

use common::identities::*;
use common::{heat_scaling, kpp, laplace, Fixture};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>()) {
        prop_assert_eq!(antisymmetry(seed), Ok(()));
    }

    #[test]
    fn jacobi_identity(seed in any::<u64>()) {
        prop_assert_eq!(jacobi(seed), Ok(()));
    }

    #[test]
    fn two_term_multi_bracket_is_jacobi(seed in any::<u64>()) {
        prop_assert_eq!(multi_is_jacobi(seed), Ok(()));
    }

    #[test]
    fn hessian_is_symmetric(seed in any::<u64>()) {
        prop_assert_eq!(hessian_symmetry(seed), Ok(()));
    }

    #[test]
    fn leibniz_rule_with_hessian(seed in any::<u64>()) {
        prop_assert_eq!(compensated_leibniz(seed), Ok(()));
    }

    #[test]
    fn commutator_of_linearizations(seed in any::<u64>()) {
        prop_assert_eq!(anomaly(seed), Ok(()));
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        prop_assert_eq!(derivatives_commute(seed), Ok(()));
    }

    #[test]
    fn format_parse_round_trip(seed in any::<u64>()) {
        prop_assert_eq!(round_trip(seed), Ok(()));
    }
}

fn check_orders(fx: Fixture) {
    let members = orders_agree(&fx, 200).unwrap();
    assert!(members > 0 && members < 200, "{}: {members} members", fx.name);
}

#[test]
fn membership_is_order_independent_laplace() {
    check_orders(laplace());
}

#[test]
fn membership_is_order_independent_heat_scaling() {
    check_orders(heat_scaling());
}

#[test]
fn membership_is_order_independent_kpp() {
    check_orders(kpp());
}
