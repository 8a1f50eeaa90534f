//! Hamming distance between sign codewords follows Bin(n, θ), θ = angle/π.
//!
//!     cargo run --release --example lsh_law

use entlab::lshstats::{angle_theta, encode_lsh, hamming, sign_quantize};
use entlab::rng::gaussian_matrix;

fn main() -> entlab::Result<()> {
    let n = 2000;
    let trials = 300;
    for degrees in [10.0f64, 45.0, 90.0, 150.0] {
        let r = degrees.to_radians();
        let u = [1.0, 0.0, 0.0];
        let v = [r.cos(), r.sin(), 0.0];
        let theta = angle_theta(&u, &v)?;

        let mut ds = Vec::with_capacity(trials);
        for m in 0..trials as u64 {
            let g = gaussian_matrix(42, m, n, 3)?;
            let d = hamming(&sign_quantize(&encode_lsh(&u, &g)?), &sign_quantize(&encode_lsh(&v, &g)?))?;
            ds.push(d as f64);
        }
        let mean = ds.iter().sum::<f64>() / trials as f64;
        let var = ds.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        println!(
            "{degrees:>5}°  theta {theta:.4}  mean {mean:8.2} (nθ {:8.2})  var {var:7.2} (nθ(1-θ) {:7.2})",
            n as f64 * theta,
            n as f64 * theta * (1.0 - theta)
        );
    }
    Ok(())
}
