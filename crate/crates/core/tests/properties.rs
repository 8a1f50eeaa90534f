use proptest::prelude::*;

use entlab::entangler::{encode, encode_step, project, EntanglementKey, PairEncoder, StepMetrics};
use entlab::labs;
use entlab::lshstats::{self, sign_quantize, BinomialModel};
use entlab::reconciler::{self, pnm, BitMessage, GrayMessage};
use entlab::relativity::{self, BoostParams, Event, IntervalKind};
use entlab::rng::{derive_stream, gaussian_matrix, gaussian_rows};
use entlab::{BitVector, ReducedCodeword};

fn vector(dim: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-6))
}

/// (ell, n, k, t, seed) with k <= n.
fn sizes() -> impl Strategy<Value = (usize, usize, usize, usize, u64)> {
    (1usize..24, 4usize..80, 1usize..6, any::<u64>()).prop_flat_map(|(ell, n, t, seed)| {
        (Just(ell), Just(n), 1..=n, Just(t), Just(seed))
    })
}

fn codeword(values: Vec<f64>) -> ReducedCodeword {
    ReducedCodeword { step: 1, values }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrices_are_deterministic_and_row_addressable(
        seed in any::<u64>(), step in 0u64..1000, n in 1usize..12, d in 1usize..12,
    ) {
        let a = gaussian_matrix(seed, step, n, d).unwrap();
        let b = gaussian_matrix(seed, step, n, d).unwrap();
        prop_assert_eq!(a.as_slice(), b.as_slice());
        let idx: Vec<usize> = (0..n).step_by(2).collect();
        let rows = gaussian_rows(seed, step, &idx, n, d).unwrap();
        for (r, &i) in idx.iter().enumerate() {
            prop_assert_eq!(rows.row(r), a.row(i));
        }
    }

    #[test]
    fn reduced_codewords_are_unit_and_reproducible((ell, n, k, t, seed) in sizes(), raw in vector(1..24)) {
        let w: Vec<f64> = raw.iter().cycle().take(ell).copied().collect();
        prop_assume!(w.iter().any(|&x| x != 0.0));
        let enc = encode(&w, n, k, t, seed).unwrap();
        for c in &enc.codewords {
            let norm: f64 = c.values.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
        }
        let again = project(&enc.key, &w).unwrap();
        for (a, b) in enc.codewords.iter().zip(&again) {
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn projection_is_antisymmetric((ell, n, k, t, seed) in sizes(), raw in vector(1..24), other in vector(1..24)) {
        let w: Vec<f64> = raw.iter().cycle().take(ell).copied().collect();
        let wp: Vec<f64> = other.iter().cycle().take(ell).copied().collect();
        prop_assume!(w.iter().any(|&x| x != 0.0) && wp.iter().any(|&x| x != 0.0));
        let key = encode(&w, n, k, t, seed).unwrap().key;
        let neg: Vec<f64> = wp.iter().map(|x| -x).collect();
        let a = project(&key, &wp).unwrap();
        let b = project(&key, &neg).unwrap();
        for (ca, cb) in a.iter().zip(&b) {
            prop_assert_eq!(&ca.negated(), cb);
        }
    }

    #[test]
    fn selection_is_maximal(w in vector(1..20), n in 2usize..120, kf in 0.0f64..1.0, seed in any::<u64>(), step in 0usize..5) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let out = encode_step(&w, seed, step, n, k).unwrap();
        prop_assert_eq!(out.selection.len(), k);
        prop_assert!(out.selection.windows(2).all(|p| p[0] < p[1]));
        let mut chosen = vec![false; n];
        out.selection.iter().for_each(|&i| chosen[i] = true);
        let lo = out.selection.iter().map(|&i| out.projection[i].abs()).fold(f64::INFINITY, f64::min);
        let hi = (0..n).filter(|&i| !chosen[i]).map(|i| out.projection[i].abs()).fold(0.0, f64::max);
        prop_assert!(lo >= hi);
    }

    #[test]
    fn key_bytes_round_trip((ell, n, k, t, seed) in sizes()) {
        let w: Vec<f64> = (0..ell).map(|i| i as f64 + 0.5).collect();
        let key = encode(&w, n, k, t, seed).unwrap().key;
        let bytes = key.to_bytes();
        prop_assert_eq!(bytes.len(), 32 + 4 * t * k);
        prop_assert_eq!(EntanglementKey::from_bytes(&bytes).unwrap(), key);
    }

    #[test]
    fn pair_encoder_metrics_obey_trajectory_algebra(w in vector(3..12), seed in any::<u64>()) {
        let wp: Vec<f64> = w.iter().rev().map(|x| x * 0.7 + 0.1).collect();
        prop_assume!(wp.iter().any(|&x| x != 0.0));
        let mut pair = PairEncoder::new(&w, &wp, 40, 10, seed).unwrap();
        for _ in 0..4 {
            let (c, cp) = pair.advance().unwrap();
            let m = StepMetrics::measure(&c, &cp, 40).unwrap();
            let want = 2.0 - 2.0 * (std::f64::consts::PI * m.angle_theta).cos();
            prop_assert!((m.euclid_sq - want).abs() <= 1e-9);
            prop_assert!((m.euclid_sq + m.euclid_sq_flipped - 4.0).abs() <= 1e-9);
            prop_assert!((m.hamming_n * 40.0 - m.hamming_k * 10.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn identical_and_opposite_pairs_stay_constant(w in vector(2..10), seed in any::<u64>(), flip in any::<bool>()) {
        let wp: Vec<f64> = if flip { w.iter().map(|x| -x).collect() } else { w.clone() };
        let traj = labs::run_pair(&w, &wp, 30, 8, 5, seed).unwrap();
        let (angle, dist) = if flip { (1.0, 4.0) } else { (0.0, 0.0) };
        for m in &traj {
            prop_assert_eq!(m.angle_theta, angle);
            // 4·‖ĉ‖² for opposite pairs, so only as exact as the normalization.
            prop_assert!((m.euclid_sq - dist).abs() <= 1e-12);
            prop_assert_eq!(m.hamming_k, if flip { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn sign_quantize_is_antisymmetric_off_zero(c in prop::collection::vec(-5.0f64..5.0, 1..50)) {
        prop_assume!(c.iter().all(|&x| x != 0.0));
        let neg: Vec<f64> = c.iter().map(|x| -x).collect();
        prop_assert_eq!(sign_quantize(&neg), sign_quantize(&c).complement());
    }

    #[test]
    fn pmf_sums_to_one(n in 1u64..=64, theta in 0.0f64..=1.0) {
        let m = BinomialModel::new(n, theta).unwrap();
        let total: f64 = (0..=n).map(|k| lshstats::binomial_pmf(&m, k).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ratio_at_truth_is_the_coefficient(n in 1u64..=200, kf in 0.0f64..=1.0, theta in 0.01f64..0.99) {
        let k = (n as f64 * kf) as u64;
        let r = lshstats::density_ratio(n, k, theta, theta).unwrap();
        match lshstats::binomial_coefficient_exact(n, k) {
            Some(c) => prop_assert_eq!(r, c as f64),
            None => {
                let c = lshstats::ln_binomial_coefficient(n, k).exp();
                prop_assert!(((r - c) / c).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn sequence_likelihood_peaks_at_mle(n in 1u64..=64, kf in 0.0f64..=1.0) {
        let k = (n as f64 * kf) as u64;
        let mle = lshstats::mle_theta(n, k).unwrap();
        let at = |th: f64| lshstats::ln_sequence_likelihood(&BinomialModel::new(n, th).unwrap(), k).unwrap();
        let best = at(mle);
        for i in 0..=200 {
            prop_assert!(at(i as f64 / 200.0) <= best + 1e-12);
        }
        let nll = -best / std::f64::consts::LN_2;
        prop_assert!((lshstats::min_nll(n, k).unwrap() - nll).abs() <= 1e-9);
    }

    #[test]
    fn boosts_preserve_the_interval(
        v_limit in 0.2f64..5.0, beta in -0.99f64..0.99,
        s in -10.0f64..10.0, x in -10.0f64..10.0, y in -10.0f64..10.0,
    ) {
        let p = BoostParams::new(v_limit, beta * v_limit).unwrap();
        let e = Event::new(s, x, y);
        prop_assert!(relativity::check_interval_invariance(&e, &p) < 1e-9);
        let g = relativity::gamma(&p);
        prop_assert!(g >= 1.0);
        let back = relativity::lorentz_boost(&relativity::lorentz_boost(&e, &p), &p.reversed());
        prop_assert!((back.s - e.s).abs() <= 1e-12 * (1.0 + s.abs()) * g * g);
        prop_assert!((back.x - e.x).abs() <= 1e-12 * (1.0 + x.abs() + s.abs() * v_limit) * g * g);
        prop_assert_eq!(back.y, e.y);
        let prod = relativity::time_dilation(x, &p) * relativity::length_contraction(x, &p);
        prop_assert!((prod - x * x).abs() <= 1e-12 * (1.0 + x * x));
        let iv = relativity::interval(&e, v_limit);
        if iv < -1e-6 {
            let boosted = relativity::interval(&relativity::lorentz_boost(&e, &p), v_limit);
            prop_assert_eq!(relativity::classify(boosted, 1e-9), IntervalKind::Timelike);
        }
    }

    #[test]
    fn zero_boost_has_unit_gamma(v_limit in 0.01f64..100.0) {
        prop_assert_eq!(relativity::gamma(&BoostParams::new(v_limit, 0.0).unwrap()), 1.0);
    }

    #[test]
    fn bit_codec_round_trip_and_complement(bits in prop::collection::vec(any::<bool>(), 1..64), c in prop::collection::vec(-1.0f64..1.0, 64)) {
        let k = bits.len();
        let c = codeword(c[..k].to_vec());
        let m = BitMessage::from_bits(BitVector::new(bits)).unwrap();
        let y = reconciler::encode_bits(&m, &c).unwrap();
        prop_assert_eq!(&reconciler::decode_bits(&y, &c).unwrap(), &m);
        // An exactly opposite sign pattern (sgn(0) = +1, so avoid zeros).
        let opp = codeword(c.values.iter().map(|&x| if x >= 0.0 { -1.0 - x } else { 1.0 - x }).collect());
        prop_assert_eq!(reconciler::decode_bits(&y, &opp).unwrap(), m.complement());
    }

    #[test]
    fn pilot_resolves_orientation(bits in prop::collection::vec(any::<bool>(), 1..40), c in prop::collection::vec(-1.0f64..1.0, 56)) {
        let payload = BitMessage::from_bits(BitVector::new(bits)).unwrap();
        let frame = reconciler::with_pilot(&payload, 16).unwrap();
        let c = codeword(c[..frame.len()].to_vec());
        let opp = c.negated();
        prop_assume!(c.values.iter().all(|&x| x != 0.0));
        let y = reconciler::encode_bits(&frame, &c).unwrap();
        for (cp, flipped) in [(&c, false), (&opp, true)] {
            let d = reconciler::disambiguate(&reconciler::decode_bits(&y, cp).unwrap(), 16).unwrap();
            prop_assert_eq!(d.flipped, flipped);
            prop_assert_eq!(d.payload(), payload.bits().as_slice());
        }
    }

    #[test]
    fn gray_mse_identity(
        levels in prop::collection::vec(0.0f64..=1.0, 1..40),
        c in prop::collection::vec(-1.0f64..1.0, 40),
        cp in prop::collection::vec(-1.0f64..1.0, 40),
        alpha in 0.05f64..2.0,
    ) {
        let k = levels.len();
        let m = GrayMessage::new(levels, k, 1).unwrap();
        let (c, cp) = (codeword(c[..k].to_vec()), codeword(cp[..k].to_vec()));
        let y = reconciler::encode_gray(&m, &c, alpha).unwrap();
        for sigma in [1i8, -1] {
            let m_hat = reconciler::gray_hypothesis(&y, &cp, alpha, sigma);
            let err: f64 = m_hat.iter().zip(m.levels()).map(|(a, b)| (a - b).powi(2)).sum();
            let s = f64::from(sigma);
            let dist: f64 = c.values.iter().zip(&cp.values).map(|(a, b)| (a - s * b).powi(2)).sum();
            prop_assert!((err - alpha * alpha * dist).abs() <= 1e-9);
        }
    }

    #[test]
    fn images_round_trip(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
        let mut rng = derive_stream(seed, 0);
        let bits: Vec<bool> = (0..w * h).map(|_| rng.next_u64() & 1 == 1).collect();
        let bm = BitMessage::new(BitVector::new(bits), w, h).unwrap();
        for bytes in [pnm::encode_pbm(&bm), pnm::encode_pbm_ascii(&bm)] {
            match pnm::decode(&bytes).unwrap() {
                pnm::Image::Bit(back) => prop_assert_eq!(back, bm.clone()),
                other => prop_assert!(false, "decoded {other:?}"),
            }
        }
        let levels: Vec<f64> = (0..w * h).map(|_| (rng.next_u64() % 256) as f64 / 255.0).collect();
        let gm = GrayMessage::new(levels, w, h).unwrap();
        for bytes in [pnm::encode_pgm(&gm, 255).unwrap(), pnm::encode_pgm_ascii(&gm, 255).unwrap()] {
            match pnm::decode(&bytes).unwrap() {
                pnm::Image::Gray(back) => {
                    for (a, b) in back.levels().iter().zip(gm.levels()) {
                        prop_assert!((a - b).abs() <= 1e-12);
                    }
                }
                other => prop_assert!(false, "decoded {other:?}"),
            }
        }
    }
}
