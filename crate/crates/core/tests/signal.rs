use liftcorr_core::signal::{
    circ_corr_bruteforce, circ_shift, gen_backscatter, gen_chirp, inner_product, ChirpParams, ComplexSeq, Target,
    TargetScene,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complex_vec(len: usize) -> impl Strategy<Value = ComplexSeq> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| ComplexSeq::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

proptest! {
    #[test]
    fn shifts_compose_additively(v in prop::collection::vec(0i32..100, 1..40), a in -50i64..50, b in -50i64..50) {
        prop_assert_eq!(circ_shift(&circ_shift(&v, a), b), circ_shift(&v, a + b));
        prop_assert_eq!(circ_shift(&v, v.len() as i64), v);
    }

    #[test]
    fn lag_zero_is_the_inner_product((x, y) in (1usize..32).prop_flat_map(|n| (complex_vec(n), complex_vec(n)))) {
        let r = circ_corr_bruteforce(&x, &y).unwrap();
        prop_assert_eq!(*r.at(0).unwrap(), inner_product(&x, &y).unwrap());
    }

    #[test]
    fn correlation_recovers_shifts(x in complex_vec(32), l in -31i64..32) {
        let r = circ_corr_bruteforce(&x, &x.shifted(-l)).unwrap();
        let best = r.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        // y[n] = x[n − l] is matched when the template is advanced by −l
        prop_assert!((r.at(-l).unwrap().norm() - best).abs() <= 1e-12 * best.max(1.0));
    }

    #[test]
    fn correlation_is_periodic(x in complex_vec(16), y in complex_vec(16), l in 0i64..16) {
        let r = circ_corr_bruteforce(&x, &y).unwrap();
        prop_assert_eq!(r.at(l - 16), r.at(l));
    }

    #[test]
    fn backscatter_energy_is_bounded(
        delays in prop::collection::vec(0usize..64, 1..6),
        amps in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 6),
    ) {
        let chirp = gen_chirp(&ChirpParams::from_time_bandwidth(1e6, 24.0)).unwrap();
        let targets: Vec<Target> = delays
            .iter()
            .zip(&amps)
            .map(|(&delay, &(re, im))| Target { delay, reflectivity: Complex64::new(re, im) })
            .collect();
        let sum_amp: f64 = targets.iter().map(|t| t.reflectivity.norm()).sum();
        let y = gen_backscatter(&chirp, &TargetScene { targets, window: 64 }).unwrap();
        prop_assert!(y.norm_sqr() <= sum_amp * sum_amp * chirp.norm_sqr() * (1.0 + 1e-12));
    }
}

#[test]
fn bruteforce_on_seeded_vectors_matches_explicit_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut draw = || ComplexSeq::new((0..8).map(|_| Complex64::new(rng.gen(), rng.gen())).collect());
    let (x, y) = (draw(), draw());
    let r = circ_corr_bruteforce(&x, &y).unwrap();
    assert_eq!(r.values.len(), 16);
    for l in -8i64..8 {
        let mut acc = Complex64::new(0.0, 0.0);
        // sum in reverse order as an independent evaluation
        for n in (0..8usize).rev() {
            acc += x.samples[(n as i64 + l).rem_euclid(8) as usize].conj() * y.samples[n];
        }
        assert!((acc - r.at(l).unwrap()).norm() < 1e-14);
    }
    assert!(circ_corr_bruteforce(&x, &ComplexSeq::zeros(4)).is_err());
    assert!(inner_product(&x, &ComplexSeq::zeros(4)).is_err());
}

#[test]
fn chirp_self_product_counts_samples() {
    let x = gen_chirp(&ChirpParams::from_time_bandwidth(8e6, 160.0)).unwrap();
    let p = inner_product(&x, &x).unwrap();
    assert!((p.re - 160.0).abs() < 1e-10 && p.im == 0.0);
    let params = ChirpParams::from_time_bandwidth(8e6, 160.0);
    assert!((params.bandwidth() - 8e6).abs() < 1e-6);
    assert!((params.time_bandwidth() - 160.0).abs() < 1e-9);
}

#[test]
fn two_target_scene_is_linear() {
    let chirp = gen_chirp(&ChirpParams::from_time_bandwidth(1e6, 16.0)).unwrap();
    let unit = |delay| Target { delay, reflectivity: Complex64::new(1.0, 0.0) };
    let y = gen_backscatter(&chirp, &TargetScene { targets: vec![unit(0), unit(5)], window: 32 }).unwrap();
    let mut padded = chirp.samples.clone();
    padded.resize(32, Complex64::new(0.0, 0.0));
    let want: Vec<Complex64> = padded.iter().zip(circ_shift(&padded, -5)).map(|(a, b)| a + b).collect();
    assert!(y.samples.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-15));
}
