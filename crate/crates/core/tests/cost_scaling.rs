//! Coarse timing check: encoding cost is linear in t and quadratic in n at a
//! fixed k/n ratio. Bounds are wide; this guards against accidental
//! asymptotic regressions, not against noise.

use std::time::Instant;

use entlab::entangler::encode;

fn best_of_three(ell: usize, n: usize, k: usize, t: usize) -> f64 {
    let w: Vec<f64> = (0..ell).map(|i| ((i * 7919) % 101) as f64 - 50.0).collect();
    (0..3)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(encode(&w, n, k, t, 1).unwrap());
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn cost_is_linear_in_steps_and_quadratic_in_n() {
    let short = best_of_three(300, 1200, 300, 4);
    let long = best_of_three(300, 1200, 300, 16);
    let ratio = long / short;
    assert!((2.0..=8.0).contains(&ratio), "t x4 gave time x{ratio:.2}");

    let small = best_of_three(250, 1000, 250, 6);
    let large = best_of_three(500, 2000, 500, 6);
    let ratio_n = large / small;
    assert!((2.0..=8.0).contains(&ratio_n), "n x2 gave time x{ratio_n:.2}");
}
