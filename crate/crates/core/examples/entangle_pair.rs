//! Two unrelated vectors pushed through the same reduced projections end up
//! equal or exactly opposite.
//!
//!     cargo run --release --example entangle_pair

use entlab::entangler::{PairEncoder, StepMetrics};
use entlab::rng::derive_stream;

fn main() -> entlab::Result<()> {
    let (ell, n, k, t) = (512, 2000, 500, 15);
    let mut g = derive_stream(2024, 0).into_gaussians();
    let w: Vec<f64> = (&mut g).take(ell).collect();
    let wp: Vec<f64> = g.take(ell).collect();

    let mut pair = PairEncoder::new(&w, &wp, n, k, 7)?;
    println!("step  angle/π   d_H/k   min ‖ĉ ∓ ĉ'‖²");
    for _ in 0..t {
        let (c, cp) = pair.advance()?;
        let m = StepMetrics::measure(&c, &cp, n)?;
        println!(
            "{:>4}  {:.5}  {:.4}  {:.3e}",
            m.step,
            m.angle_theta,
            m.hamming_k,
            m.min_euclid_sq()
        );
    }
    Ok(())
}
