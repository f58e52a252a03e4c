mod common;

use common::{closed_form_oracle, fixed_points_by_smith, primitive_by_recursion, smith_diagonal};
use fried_torsion::fried::*;
use fried_torsion::linalg::{c, C64};
use fried_torsion::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

const MATRICES: [[[i64; 2]; 2]; 5] = [[[2, 1], [1, 1]], [[3, 1], [2, 1]], [[5, 2], [2, 1]], [[-2, -1], [-1, -1]], [[1, 1], [1, 2]]];

#[test]
fn smith_oracle_on_a_known_matrix() {
    let m = vec![vec![BigInt::from(2), BigInt::from(4)], vec![BigInt::from(6), BigInt::from(8)]];
    assert_eq!(smith_diagonal(m), vec![BigInt::from(2), BigInt::from(4)]);
}

#[test]
fn cat_map_counts() {
    let t = OrbitTable::build(&SuspensionModel::cat_map(0.0), 6).unwrap();
    let n: Vec<BigInt> = [1, 5, 16, 45, 121, 320].into_iter().map(BigInt::from).collect();
    let p: Vec<BigInt> = [1, 2, 5, 10, 24, 50].into_iter().map(BigInt::from).collect();
    assert_eq!(t.fixed, n);
    assert_eq!(t.primitive, p);
}

#[test]
fn fixed_counts_agree_with_smith_normal_form() {
    for a in MATRICES {
        let model = SuspensionModel::new(a, 0.0).unwrap();
        let n = fixed_counts(&model, 40);
        for (k, nk) in n.iter().enumerate() {
            assert_eq!(*nk, fixed_points_by_smith(a, k + 1), "{a:?} k = {}", k + 1);
        }
        assert_eq!(primitive_counts(&n).unwrap(), primitive_by_recursion(&n), "{a:?}");
    }
}

#[test]
fn non_hyperbolic_matrices_are_rejected() {
    assert!(matches!(SuspensionModel::new([[1, 1], [0, 1]], 0.0), Err(Error::NotHyperbolic(_))));
    assert!(matches!(SuspensionModel::new([[2, 1], [1, 2]], 0.0), Err(Error::NotHyperbolic(_))));
}

#[test]
fn inconsistent_counts_are_reported() {
    let n: Vec<BigInt> = [1, 4, 16].into_iter().map(BigInt::from).collect();
    assert!(primitive_counts(&n).is_err());
}

#[test]
fn truncated_product_matches_closed_form() {
    let cat = SuspensionModel::cat_map(0.0);
    for j in 0..=15 {
        let s = 1.5 + 0.1 * j as f64;
        let z = fried_zeta_truncated(&cat, c(s), 60).unwrap();
        let oracle = closed_form_oracle(3.0, s);
        assert!((z.value - oracle).norm() <= 1e-8, "σ = {s}");
        assert!((z.value - oracle).norm() <= z.tail_bound + 1e-14, "σ = {s}");
    }
    let r2 = fried_closed_form(&cat, c(2.0)).unwrap();
    assert_eq!(format!("{:.4}", r2.re), "0.8190");
    assert!((r2.re - closed_form_oracle(3.0, 2.0)).abs() <= 1e-15);
}

#[test]
fn pole_of_order_minus_two_at_zero() {
    for a in MATRICES {
        let m = SuspensionModel::new(a, 0.0).unwrap();
        assert_eq!(closed_form_order(&m, c(0.0)), -2);
        assert_eq!(fried_closed_form(&m, c(0.0)), Err(Error::Pole { order: -2 }));
    }
    assert_eq!(closed_form_order(&SuspensionModel::cat_map(0.5), c(0.0)), 0);
}

#[test]
fn duality_and_twist_symmetries() {
    for theta in [0.0, 0.4, 1.3] {
        let m = SuspensionModel::cat_map(theta);
        for s in [C64::new(2.0, 0.0), C64::new(1.7, -0.4)] {
            assert!(duality_check(&m, s, 60).unwrap().residual <= 1e-9);
            assert!(twist_shift_residual(&m, s, 60).unwrap() <= 1e-10);
            assert!(conjugation_residual(&m, s, 60).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn unbounded_tails_are_flagged() {
    let z = fried_zeta_truncated(&SuspensionModel::cat_map(0.0), c(0.5), 20).unwrap();
    assert!(!z.bounded());
    assert!(z.tail_bound.is_infinite());
}

#[test]
fn negative_trace_models() {
    let m = SuspensionModel::new([[-2, -1], [-1, -1]], 0.0).unwrap();
    assert!(m.eigenvalue() < -1.0);
    for s in [1.5, 2.0, 3.0] {
        let z = fried_zeta_truncated(&m, c(s), 60).unwrap();
        let r = fried_closed_form(&m, c(s)).unwrap();
        assert!((z.value - r).norm() <= 1e-8, "σ = {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mobius_inversion_round_trips(a in 1i64..6, b in 1i64..6, k in 1usize..25) {
        // d = b + 1, c from det = 1.
        let d = 1 + b;
        if (a * d - 1) % b != 0 {
            return Ok(());
        }
        let cc = (a * d - 1) / b;
        let Ok(m) = SuspensionModel::new([[a, b], [cc, d]], 0.0) else { return Ok(()); };
        let t = OrbitTable::build(&m, k).unwrap();
        prop_assert!(t.first_inconsistency().is_none());
        for (j, n) in t.fixed.iter().enumerate() {
            prop_assert_eq!(n, &fixed_points_by_smith([[a, b], [cc, d]], j + 1));
        }
    }

    #[test]
    fn closed_form_at_real_sigma(s in 1.2f64..4.0) {
        let cat = SuspensionModel::cat_map(0.0);
        let r = fried_closed_form(&cat, c(s)).unwrap();
        prop_assert!((r.re - closed_form_oracle(3.0, s)).abs() <= 1e-12 * r.norm().max(1.0));
        prop_assert!(r.im.abs() <= 1e-14);
    }
}
