//! Gray-level transport y = α·ĉ + m: the receiver's error shrinks as the pair
//! converges. Since ĉ has unit norm, the mask per pixel is only about α/√k,
//! so reading y directly is already close; compare the keyless rows.
//!
//!     cargo run --release --example adversarial_gray

use entlab::entangler::{encode, PairEncoder};
use entlab::reconciler::{self, GrayMessage};
use entlab::rng::derive_stream;

fn main() -> entlab::Result<()> {
    let (n, k, alpha) = (3500, 2500, 0.5);
    let levels: Vec<f64> = (0..k)
        .map(|i| match (i / 50) % 5 {
            0 => 0.0,
            1 => 1.0,
            _ => (i % 50) as f64 / 49.0,
        })
        .collect();
    let m = GrayMessage::new(levels, 50, 50)?;

    let mut g = derive_stream(8, 0).into_gaussians();
    let w: Vec<f64> = (&mut g).take(512).collect();
    let wp: Vec<f64> = g.take(512).collect();
    let mut pair = PairEncoder::new(&w, &wp, n, k, 3)?;
    println!("step  orientation  MSE");
    for step in 1..=30 {
        let (c, cp) = pair.advance()?;
        if step % 5 == 0 {
            let y = reconciler::encode_gray(&m, &c, alpha)?;
            let dec = reconciler::decode_gray(&y, &cp, alpha)?;
            println!("{step:>4}  {:>+11}  {:.3e}", dec.orientation, dec.mse(&m)?);
        }
    }

    let (c, _) = pair.advance()?;
    let y = reconciler::encode_gray(&m, &c, alpha)?;
    let w_star: Vec<f64> = derive_stream(1234, 0).into_gaussians().take(k).collect();
    let c_star = encode(&w_star, n, k, 10, 1234)?.codewords.pop().expect("t >= 1");
    let guess = reconciler::decode_gray(&y, &c_star, alpha)?;
    println!("keyless receiver MSE: {:.3e}", guess.mse(&m)?);
    let raw: f64 = y.values.iter().zip(m.levels()).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / k as f64;
    println!("y read as the image:  {raw:.3e} (α²/k = {:.3e})", alpha * alpha / k as f64);
    Ok(())
}
