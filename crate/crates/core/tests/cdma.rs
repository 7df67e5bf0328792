use jointrank_core::cdma::{
    build_code_matrix, build_convolution_matrix, draw_multipath, effective_signatures, generate_codes, lognormal_powers,
    path_powers, synthesize_received, CdmaLink, CdmaScenario, ChannelKind, ChannelRealization, ScenarioParams,
};
use jointrank_core::numkernel::estimate_moments;
use jointrank_core::{ComplexMatrix, ComplexVector, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn codes_are_unit_norm_chips(seed in any::<u64>(), k in 1usize..8, n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codes = generate_codes(k, n, &mut rng).unwrap();
        prop_assert_eq!(codes.len(), k);
        for c in &codes {
            prop_assert_eq!(c.len(), n);
            prop_assert!(c.iter().all(|&x| (x.abs() - 1.0 / (n as f64).sqrt()).abs() < 1e-15));
            prop_assert!((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn code_matrix_has_orthonormal_columns(seed in any::<u64>(), n in 2usize..20, ls in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = &generate_codes(1, n, &mut rng).unwrap()[0];
        let c = build_code_matrix(code, ls).unwrap();
        prop_assert_eq!((c.rows(), c.cols()), ((2 * ls - 1) * n, 2 * ls - 1));
        let gram = c.adjoint_matmul(&c).unwrap();
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(2 * ls - 1)) < 1e-12);
    }

    #[test]
    fn signatures_equal_convolution_times_codes(seed in any::<u64>(), n in 2usize..20, ls in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = &generate_codes(1, n, &mut rng).unwrap()[0];
        let h = draw_multipath(&mut rng).taps();
        let direct = effective_signatures(code, &h, ls);
        let product = build_convolution_matrix(&h, n, ls).unwrap().matmul(&build_code_matrix(code, ls).unwrap()).unwrap();
        prop_assert!(direct.max_abs_diff(&product) < 1e-13);
    }

    #[test]
    fn superposition_is_linear(seed in any::<u64>()) {
        // the observation of a two-user scene equals the sum of each user
        // alone (noise added once)
        let params = ScenarioParams { num_users: 2, spreading_gain: 8, ..Default::default() };
        let scenario = CdmaScenario::draw(params, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let channels: Vec<ComplexVector> = (0..2).map(|_| draw_multipath(&mut rng).taps()).collect();
        let symbols: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..scenario.symbol_window()).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect())
            .collect();
        let m = scenario.observation_dim();
        let noise = ComplexVector::from_fn(m, |i| C64::new(i as f64 * 0.01, -0.02));
        let zero = ComplexVector::zeros(m);
        let both = synthesize_received(&scenario, &channels, &symbols, &noise).unwrap();
        let silent = vec![0.0; scenario.symbol_window()];
        let only0 = synthesize_received(&scenario, &channels, &[symbols[0].clone(), silent.clone()], &zero).unwrap();
        let only1 = synthesize_received(&scenario, &channels, &[silent, symbols[1].clone()], &zero).unwrap();
        let sum = only0.add(&only1).unwrap().add(&noise).unwrap();
        prop_assert!(both.max_abs_diff(&sum) < 1e-13);
    }
}

#[test]
fn chip_values_are_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let codes = generate_codes(500, 16, &mut rng).unwrap();
    let mean: f64 = codes.iter().flatten().map(|x| x * 4.0).sum::<f64>() / 8000.0;
    // ±1 chips: standard error 1/√8000 ≈ 0.011
    assert!(mean.abs() < 0.05, "{mean}");
}

#[test]
fn path_powers_follow_profile() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 20_000;
    let mut acc = [0.0; 3];
    for _ in 0..n {
        let ch = draw_multipath(&mut rng);
        assert_eq!(ch.delays[0], 0);
        assert!(ch.delays.windows(2).all(|w| w[1] > w[0]));
        for (a, g) in acc.iter_mut().zip(&ch.gains) {
            *a += g.norm_sqr();
        }
    }
    for (a, p) in acc.iter().zip(path_powers()) {
        let db = 10.0 * (a / n as f64 / p).log10();
        assert!(db.abs() < 0.3, "{db} dB");
    }
}

#[test]
fn lognormal_spread_has_requested_std() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = 1.5;
    let db: Vec<f64> = (0..2000)
        .flat_map(|_| lognormal_powers(6, sigma, &mut rng).unwrap())
        .map(|a| 20.0 * a.log10())
        .collect();
    let mean = db.iter().sum::<f64>() / db.len() as f64;
    let var = db.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (db.len() - 1) as f64;
    assert!((var.sqrt() - sigma).abs() < 0.1, "std {}", var.sqrt());
    assert!(mean.abs() < 0.1, "mean {mean}");
}

#[test]
fn true_moments_match_long_run_estimate() {
    let params = ScenarioParams::default();
    let scenario = CdmaScenario::draw(params, 4).unwrap();
    let mut link = CdmaLink::new(scenario, ChannelKind::Static, 4).unwrap();
    let truth = link.true_moments();
    let frames: Vec<_> = (0..40_000).map(|_| link.next_frame()).collect();
    let est = estimate_moments(frames.iter().map(|f| (&f.received, C64::new(f.desired, 0.0)))).unwrap();
    let scale = truth.r.frobenius_norm();
    assert!(est.r.sub(&truth.r).unwrap().frobenius_norm() / scale < 0.03);
    assert!(est.p.sub(&truth.p).unwrap().norm() / truth.p.norm() < 0.03);
    assert_eq!(est.sigma_d_sq, 1.0);
}

#[test]
fn identity_channel_single_user_is_the_code_window() {
    let params = ScenarioParams { num_users: 1, ..Default::default() };
    let scenario = CdmaScenario::draw(params, 6).unwrap();
    let mut link = CdmaLink::with_noise_variance(scenario.clone(), ChannelKind::Identity, 6, 0.0).unwrap();
    let mut impulse = ComplexVector::zeros(params.channel_window);
    impulse[0] = C64::new(1.0, 0.0);
    let c = build_convolution_matrix(&impulse, params.spreading_gain, params.isi_span)
        .unwrap()
        .matmul(&build_code_matrix(&scenario.codes[0], params.isi_span).unwrap())
        .unwrap();
    for _ in 0..20 {
        let f = link.next_frame();
        let b = ComplexVector::from_fn(c.cols(), |j| C64::new(scenario.amplitudes[0] * f.symbols[0][j], 0.0));
        assert!(f.received.max_abs_diff(&c.mul_vec(&b).unwrap()) < 1e-15);
        assert_eq!(f.desired, f.symbols[0][scenario.current_symbol_index()]);
    }
    assert_eq!(link.channel_paths()[0], ChannelRealization::impulse(0).unwrap());
}

#[test]
fn fading_channels_move_and_static_ones_do_not() {
    let scenario = CdmaScenario::draw(ScenarioParams::default(), 7).unwrap();
    let mut fixed = CdmaLink::new(scenario.clone(), ChannelKind::Static, 7).unwrap();
    let mut moving = CdmaLink::new(scenario, ChannelKind::Clarke { normalized_doppler: 0.01 }, 7).unwrap();
    fixed.next_frame();
    moving.next_frame();
    let (a0, b0) = (fixed.channels(), moving.channels());
    for _ in 0..50 {
        fixed.next_frame();
        moving.next_frame();
    }
    assert_eq!(fixed.channels(), a0);
    assert!(moving.channels()[0].max_abs_diff(&b0[0]) > 1e-3);
}
