use liftcorr_core::filterbank::{build_polyphase, Family, FilterQuadruple, Role};
use liftcorr_core::lifting::{
    euclidean_factorize, expand_scheme, forward_direct, forward_lift, inverse_lift, scheme_for, DwtPair,
};
use liftcorr_core::scalar::{QSqrt2, Rational, Scalar};
use liftcorr_core::signal::{circ_shift, dot};
use proptest::prelude::*;

fn exact<T: Scalar>(v: &[i64]) -> Vec<T> {
    v.iter().map(|&x| T::from_i64(x)).collect()
}

fn even_len_ints(max_half: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_half).prop_flat_map(|h| prop::collection::vec(-1000i64..1000, 2 * h))
}

fn floats(max_half: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_half).prop_flat_map(|h| prop::collection::vec(-1.0f64..1.0, 2 * h))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_lift_matches_direct<T: Scalar>(family: Family, role: Role, x: &[T]) {
    let s = scheme_for::<T>(family, role).unwrap();
    let p = build_polyphase(&FilterQuadruple::<T>::for_family(family).unwrap(), role);
    assert_eq!(forward_lift(&s, x).unwrap(), forward_direct(&p, x).unwrap());
}

fn check_round_trip<T: Scalar>(family: Family, x: &[T]) {
    let analysis = scheme_for::<T>(family, Role::Analysis).unwrap();
    let synthesis = scheme_for::<T>(family, Role::Synthesis).unwrap();
    let pair = forward_lift(&analysis, x).unwrap();
    assert_eq!(inverse_lift(&synthesis, &pair).unwrap(), x);
    assert_eq!(inverse_lift(&analysis.inverted().unwrap(), &pair).unwrap(), x);
}

fn check_dual_inner_product<T: Scalar>(family: Family, x: &[T], y: &[T]) {
    let a = forward_lift(&scheme_for::<T>(family, Role::Analysis).unwrap(), x).unwrap();
    let d = forward_lift(&scheme_for::<T>(family, Role::DualAnalysis).unwrap(), y).unwrap();
    assert_eq!(dot(x, y), dot(&a.approx, &d.approx) + dot(&a.detail, &d.detail));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn legall_lift_equals_direct(x in even_len_ints(128)) {
        for role in [Role::Analysis, Role::DualAnalysis] {
            check_lift_matches_direct::<Rational>(Family::LeGall53, role, &exact(&x));
        }
    }

    #[test]
    fn cdf97_lift_equals_direct(x in even_len_ints(32)) {
        for role in [Role::Analysis, Role::DualAnalysis] {
            check_lift_matches_direct::<QSqrt2>(Family::Cdf97, role, &exact(&x));
        }
    }

    #[test]
    fn daub4_lift_equals_direct(x in floats(128)) {
        let s = scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap();
        let p = build_polyphase(&FilterQuadruple::<f64>::daub4_causal().unwrap(), Role::Analysis);
        let lifted = forward_lift(&s, &x).unwrap();
        let direct = forward_direct(&p, &x).unwrap();
        prop_assert!(max_abs_diff(&lifted.approx, &direct.approx) <= 1e-12);
        prop_assert!(max_abs_diff(&lifted.detail, &direct.detail) <= 1e-12);
    }

    #[test]
    fn exact_perfect_reconstruction(x in even_len_ints(64)) {
        check_round_trip::<Rational>(Family::LeGall53, &exact(&x));
        check_round_trip::<QSqrt2>(Family::Cdf97, &exact(&x[..x.len().min(32)]));
    }

    #[test]
    fn daub4_reconstruction_is_two_sample_delay(x in floats(128)) {
        let pair = forward_lift(&scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap(), &x).unwrap();
        let y = inverse_lift(&scheme_for::<f64>(Family::Daub4Causal, Role::Synthesis).unwrap(), &pair).unwrap();
        prop_assert!(max_abs_diff(&y, &circ_shift(&x, -2)) <= 1e-10);
        let inv = scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap().inverted().unwrap();
        prop_assert!(max_abs_diff(&inverse_lift(&inv, &pair).unwrap(), &x) <= 1e-10);
    }

    #[test]
    fn daub4_preserves_energy(x in floats(128)) {
        let pair = forward_lift(&scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap(), &x).unwrap();
        let before = dot(&x, &x);
        let after = dot(&pair.approx, &pair.approx) + dot(&pair.detail, &pair.detail);
        prop_assert!((before - after).abs() <= 1e-10 * before.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn dual_bases_preserve_inner_products(
        (x, y) in (1usize..=32).prop_flat_map(|h| (
            prop::collection::vec(-1000i64..1000, 2 * h),
            prop::collection::vec(-1000i64..1000, 2 * h),
        ))
    ) {
        check_dual_inner_product::<Rational>(Family::LeGall53, &exact(&x), &exact(&y));
        check_dual_inner_product::<QSqrt2>(Family::Cdf97, &exact(&x), &exact(&y));
        let (xf, yf): (Vec<f64>, Vec<f64>) = (exact(&x), exact(&y));
        let a = forward_lift(&scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap(), &xf).unwrap();
        let d = forward_lift(&scheme_for::<f64>(Family::Daub4Causal, Role::DualAnalysis).unwrap(), &yf).unwrap();
        let lhs = dot(&xf, &yf);
        let rhs = dot(&a.approx, &d.approx) + dot(&a.detail, &d.detail);
        let scale = dot(&xf, &xf).sqrt() * dot(&yf, &yf).sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1.0));
    }
}

#[test]
fn constants_have_no_legall_detail() {
    let s = scheme_for::<Rational>(Family::LeGall53, Role::Analysis).unwrap();
    let pair = forward_lift(&s, &exact::<Rational>(&[7; 16])).unwrap();
    assert!(pair.detail.iter().all(|d| *d == Rational::from_i64(0)));
}

#[test]
fn cdf97_annihilates_cubics_away_from_the_wrap() {
    let s = scheme_for::<QSqrt2>(Family::Cdf97, Role::Analysis).unwrap();
    let x: Vec<QSqrt2> = (0..32i64).map(|n| QSqrt2::from_i64(n * n * n - 4 * n + 1)).collect();
    let pair = forward_lift(&s, &x).unwrap();
    // interior detail coefficients see only the cubic, not the periodic seam
    for k in 3..13 {
        assert_eq!(pair.detail[k], QSqrt2::from_i64(0), "detail[{k}]");
    }
}

#[test]
fn ones_through_daub4_keep_their_energy() {
    let s = scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap();
    let pair = forward_lift(&s, &[1.0; 8]).unwrap();
    let energy = dot(&pair.approx, &pair.approx) + dot(&pair.detail, &pair.detail);
    assert!((energy - 8.0).abs() < 1e-12);
}

#[test]
fn zero_pair_reconstructs_zero() {
    let s = scheme_for::<Rational>(Family::LeGall53, Role::Synthesis).unwrap();
    let y = inverse_lift(&s, &DwtPair::zeros(8)).unwrap();
    assert_eq!(y, vec![Rational::from_i64(0); 16]);
}

#[test]
fn impulse_response_reads_out_filter_phases() {
    let quad = FilterQuadruple::<Rational>::legall53();
    let p = build_polyphase(&quad, Role::Analysis);
    let mut x = vec![Rational::from_i64(0); 16];
    x[0] = Rational::from_i64(1);
    let pair = forward_direct(&p, &x).unwrap();
    // ã[k] = Σ_n h̃[n] x[2k + n]  →  ã[k] = h̃-tap at n = −2k (circularly)
    for k in 0..8i64 {
        let n = -2 * k;
        let n = if n < -8 { n + 16 } else { n };
        assert_eq!(pair.approx[k as usize], quad.h_tilde.coeff(-n), "approx[{k}]");
        assert_eq!(pair.detail[k as usize], quad.g_tilde.coeff(-n), "detail[{k}]");
    }
}

#[test]
fn euclid_refactors_every_analysis_matrix() {
    let p = build_polyphase(&FilterQuadruple::<QSqrt2>::for_family(Family::Cdf97).unwrap(), Role::Analysis);
    let s = euclidean_factorize(&p).unwrap();
    assert_eq!(expand_scheme(&s).entries, p.entries);

    for role in [Role::Analysis, Role::DualAnalysis] {
        let p = build_polyphase(&FilterQuadruple::<Rational>::legall53(), role);
        let s = euclidean_factorize(&p).unwrap();
        assert_eq!(expand_scheme(&s).entries, p.entries);
    }

    let p = build_polyphase(&FilterQuadruple::<f64>::daub4_causal().unwrap(), Role::Analysis);
    let s = euclidean_factorize(&p).unwrap();
    assert!(expand_scheme(&s).max_abs_diff(&p) < 1e-12);
}

#[test]
fn mechanical_inverse_matches_given_synthesis() {
    let a = scheme_for::<Rational>(Family::LeGall53, Role::Analysis).unwrap();
    let s = scheme_for::<Rational>(Family::LeGall53, Role::Synthesis).unwrap();
    assert_eq!(expand_scheme(&a.inverted().unwrap()).entries, expand_scheme(&s).entries);
    let a = scheme_for::<f64>(Family::Daub4Causal, Role::Analysis).unwrap();
    let s = scheme_for::<f64>(Family::Daub4Causal, Role::Synthesis).unwrap();
    // the given synthesis carries one extra polyphase delay
    let shifted = expand_scheme(&a.inverted().unwrap()).delay(1);
    assert!(expand_scheme(&s).max_abs_diff(&shifted) < 1e-12);
}

#[test]
fn scheme_dump_lists_one_step_per_line() {
    let s = scheme_for::<Rational>(Family::LeGall53, Role::Analysis).unwrap();
    assert_eq!(s.to_text(), "predict -1 -1/2 -1/2\nupdate 0 1/4 1/4\nscale 1 1/2\n");
}
