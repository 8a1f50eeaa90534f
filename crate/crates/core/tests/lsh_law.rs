use entlab::lshstats::{angle_theta, encode_lsh, hamming, sign_quantize};
use entlab::rng::{derive_stream, gaussian_matrix};

const N: usize = 2000;

fn distances(u: &[f64], v: &[f64], seed: u64, matrices: u64) -> Vec<f64> {
    (0..matrices)
        .map(|m| {
            let g = gaussian_matrix(seed, m, N, u.len()).unwrap();
            let a = sign_quantize(&encode_lsh(u, &g).unwrap());
            let b = sign_quantize(&encode_lsh(v, &g).unwrap());
            hamming(&a, &b).unwrap() as f64
        })
        .collect()
}

fn pair(seed: u64, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut g = derive_stream(seed, 0).into_gaussians();
    let u: Vec<f64> = (&mut g).take(dim).collect();
    let v: Vec<f64> = g.take(dim).collect();
    (u, v)
}

#[test]
fn mean_disagreement_rate_matches_the_angle() {
    for seed in [1u64, 2, 3] {
        let (u, v) = pair(seed, 24);
        let theta = angle_theta(&u, &v).unwrap();
        let m = 200;
        let rate = distances(&u, &v, seed, m).iter().sum::<f64>() / (N as f64 * m as f64);
        let band = 4.0 * (theta * (1.0 - theta) / (N as f64 * m as f64)).sqrt();
        assert!((rate - theta).abs() <= band, "seed {seed}: rate {rate}, theta {theta} ± {band}");
    }
}

#[test]
fn standardized_distances_are_nearly_symmetric() {
    let (u, v) = pair(11, 24);
    let theta = angle_theta(&u, &v).unwrap();
    let sd = (N as f64 * theta * (1.0 - theta)).sqrt();
    let z: Vec<f64> = distances(&u, &v, 11, 500)
        .iter()
        .map(|x| (x - N as f64 * theta) / sd)
        .collect();
    let m = z.len() as f64;
    let mean = z.iter().sum::<f64>() / m;
    let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    let skew = z.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / m / var.powf(1.5);
    assert!(skew.abs() < 0.2, "skewness {skew}");
}

#[test]
fn parallel_and_opposite_inputs_are_deterministic() {
    let (u, _) = pair(5, 8);
    let scaled: Vec<f64> = u.iter().map(|x| 3.0 * x).collect();
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    assert!(distances(&u, &scaled, 5, 10).iter().all(|&d| d == 0.0));
    assert!(distances(&u, &neg, 5, 10).iter().all(|&d| d == N as f64));
}
