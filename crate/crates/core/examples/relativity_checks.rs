//! Lorentz boosts: γ, the invariant interval, dilation and contraction.
//!
//!     cargo run --release --example relativity_checks

use entlab::relativity::{self, BoostParams, Event};

fn main() -> entlab::Result<()> {
    let events = [Event::new(1.0, 0.5, 0.0), Event::new(1.0, 2.0, 0.3), Event::new(2.0, 2.0, 0.0)];
    for v in [0.0, 0.3, 0.6, 0.9, 0.99] {
        let p = BoostParams::new(1.0, v)?;
        println!(
            "v = {v:<4}  γ = {:.6}  Δs = {:.6}  Δx = {:.6}",
            relativity::gamma(&p),
            relativity::time_dilation(1.0, &p),
            relativity::length_contraction(1.0, &p)
        );
        for e in &events {
            let b = relativity::lorentz_boost(e, &p);
            let iv = relativity::interval(e, 1.0);
            println!(
                "    ({}, {}, {}) -> ({:+.4}, {:+.4}, {:+.4})  interval {iv:+.4} {:?}, residual {:.1e}",
                e.s,
                e.x,
                e.y,
                b.s,
                b.x,
                b.y,
                relativity::classify(iv, 1e-12),
                relativity::check_interval_invariance(e, &p)
            );
        }
    }
    match BoostParams::new(1.0, 1.2) {
        Err(e) => println!("faster than the limit: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
