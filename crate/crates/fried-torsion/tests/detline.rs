use fried_torsion::detline::*;
use fried_torsion::graded::*;
use fried_torsion::linalg::{c, Mat, C64};
use fried_torsion::report::hand_model;
use proptest::prelude::*;
use rand::Rng;

fn random_space(rng: &mut impl Rng, max_dim: usize) -> GradedSpace {
    let len = rng.random_range(2..=5);
    let p = rng.random_range(-2..=2);
    GradedSpace::new(p, random_exact_dims(rng, len, max_dim)).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a / b - 1.0).norm()
}

/// `∏ det(L|_{E^i})^{(−1)^i i}` from determinants of the dense blocks of `dδ + δd`.
fn laplacian_oracle(cx: &Complex) -> C64 {
    let d = cx.d().unwrap();
    let x = cx.delta().unwrap();
    let mut acc = C64::new(1.0, 0.0);
    for i in cx.space.degrees() {
        let l: Mat = x.block_or_zero(i + 1) * d.block_or_zero(i) + d.block_or_zero(i - 1) * x.block_or_zero(i);
        if l.nrows() == 0 {
            continue;
        }
        let e = if i.rem_euclid(2) == 0 { i } else { -i };
        acc *= l.determinant().powi(e);
    }
    acc
}

fn only_d(cx: &Complex) -> Complex {
    Complex { space: cx.space.clone(), d: cx.d.clone(), delta: None }
}

#[test]
fn hand_instance_gives_one_sixth() {
    let r = torsion_ratio(&hand_model()).unwrap();
    assert_eq!(r.ratio, c(1.0 / 6.0));
    assert_eq!(tau_d(&hand_model()).unwrap().scalar, c(0.5));
    assert_eq!(tau_delta(&hand_model()).unwrap().scalar, c(3.0));
}

#[test]
fn torsion_ratio_on_two_hundred_pairs() {
    let mut spans = [0usize; 6];
    for trial in 0..200 {
        let mut rng = trial_rng(314, trial);
        let space = random_space(&mut rng, 6);
        spans[space.len()] += 1;
        let cx = random_invertible_pair(&mut rng, &space, PairSpectrum::Generic).unwrap();
        let r = torsion_ratio(&cx).unwrap();
        assert!(rel(r.ratio, laplacian_oracle(&cx)) <= 1e-9, "trial {trial}: {r:?}");
        assert!(r.unit_residual() <= 1e-9, "trial {trial}: {r:?}");
    }
    assert!(spans[2..=5].iter().all(|&n| n > 0), "{spans:?}");
}

#[test]
fn sections_do_not_depend_on_complements() {
    for trial in 0..40 {
        let mut rng = trial_rng(99, trial);
        let space = random_space(&mut rng, 5);
        let cx = random_invertible_pair(&mut rng, &space, PairSpectrum::Generic).unwrap();
        let td = tau_d(&cx).unwrap().scalar;
        let tx = tau_delta(&cx).unwrap().scalar;
        for s in 0..10 {
            assert!(rel(tau_d_with(&cx, Complements::Random(s)).unwrap().scalar, td) <= 1e-9);
            assert!(rel(tau_delta_with(&cx, Complements::Random(s)).unwrap().scalar, tx) <= 1e-9);
        }
    }
}

#[test]
fn structural_identities() {
    for trial in 0..100 {
        let mut rng = trial_rng(2718, trial);
        let space = random_space(&mut rng, 6);
        let cx = random_invertible_pair(&mut rng, &space, PairSpectrum::Generic).unwrap();
        let g = random_aut(&mut rng, &space);
        let (moved, dg) = act_aut(&g, &only_d(&cx)).unwrap();
        let dense: C64 = space.degrees().map(|i| g.block_or_zero(i).determinant().powi(if i.rem_euclid(2) == 0 { 1 } else { -1 })).product();
        assert!(rel(dg, dense) <= 1e-9, "trial {trial}");
        assert!(rel(tau_d(&moved).unwrap().scalar, dg * tau_d(&cx).unwrap().scalar) <= 1e-9, "trial {trial}");
        assert!((dual_identity_check(&cx).unwrap() - 1.0).norm() <= 1e-9, "trial {trial}");
        assert!((shift_identity_check(&cx).unwrap() - 1.0).norm() <= 1e-9, "trial {trial}");
        assert!(norm_identities(&cx).unwrap().max_residual() <= 1e-9, "trial {trial}");
    }
}

#[test]
fn determinant_on_cohomology() {
    for trial in 0..50 {
        let mut rng = trial_rng(61, trial);
        let exact = random_space(&mut rng, 4);
        let h: Vec<usize> = (0..exact.len()).map(|_| rng.random_range(0..=2)).collect();
        let (cx, g) = random_complex_with_symmetry(&mut rng, &exact, &h).unwrap();
        assert!(rel(det_aut(&g).unwrap(), det_on_cohomology(&g, &cx).unwrap()) <= 1e-9, "trial {trial}");
    }
}

#[test]
fn direct_sums_multiply_up_to_sign() {
    for trial in 0..30 {
        let mut rng = trial_rng(17, trial);
        let len = rng.random_range(2..=4);
        let e = GradedSpace::new(0, random_exact_dims(&mut rng, len, 3)).unwrap();
        let f = GradedSpace::new(0, random_exact_dims(&mut rng, len, 3)).unwrap();
        let a = random_exact_complex_with(&mut rng, &e).unwrap();
        let b = random_exact_complex_with(&mut rng, &f).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        let want = tau_d(&a).unwrap().scalar * tau_d(&b).unwrap().scalar * direct_sum_sign(&e, &f) as f64;
        assert!(rel(tau_d(&sum).unwrap().scalar, want) <= 1e-10, "trial {trial}");
    }
}

#[test]
fn contact_models_satisfy_the_reflection_identity() {
    for m in 0..3 {
        let gs = contact_model(m).unwrap();
        let rg = rho_gamma(&gs).unwrap().scalar;
        assert!(rel(tau_d(&gs.complex).unwrap().scalar, rg) <= 1e-9);
        assert!(rel(tau_delta(&gs.complex).unwrap().scalar, rg) <= 1e-9);
        assert!(abc_split(&gs).unwrap().multiplicativity_residual(&gs.complex).unwrap() <= 1e-9);
        let mut rng = trial_rng(m as u64, 0);
        let g = random_aut(&mut rng, &gs.complex.space);
        let moved = gs.conjugate(&g).unwrap();
        let rg = rho_gamma(&moved).unwrap().scalar;
        assert!(rel(tau_d(&moved.complex).unwrap().scalar, rg) <= 1e-9);
        assert!(rel(tau_delta(&moved.complex).unwrap().scalar, rg) <= 1e-9);
    }
}

#[test]
fn broken_reflections_are_rejected() {
    let gs = contact_model(1).unwrap();
    let s = gs.complex.space.clone();
    let blocks: Vec<Mat> = s.degrees().map(|i| gs.gamma.block(i).scale(2.0)).collect();
    let bad = Reflection::new(&s, blocks).unwrap();
    assert!(GammaStructure::new(gs.complex.clone(), bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_law(seed in any::<u64>(), a in 0.3f64..3.0, phase in 0.0f64..std::f64::consts::TAU) {
        let mut rng = trial_rng(seed, 0);
        let space = random_space(&mut rng, 4);
        let cx = random_exact_complex_with(&mut rng, &space).unwrap();
        let z = C64::from_polar(a, phase);
        let scaled = Complex { space: space.clone(), d: Some(cx.d().unwrap().scale(z)), delta: None };
        let want = tau_d(&cx).unwrap().scalar * z.powi(space.chi_prime() as i32);
        prop_assert!(rel(tau_d(&scaled).unwrap().scalar, want) <= 1e-10);
    }

    #[test]
    fn ratio_identity_on_identity_laplacian(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let space = random_space(&mut rng, 4);
        let cx = random_invertible_pair(&mut rng, &space, PairSpectrum::Identity).unwrap();
        let r = torsion_ratio(&cx).unwrap();
        prop_assert!(r.ratio_residual() <= 1e-9);
    }
}
