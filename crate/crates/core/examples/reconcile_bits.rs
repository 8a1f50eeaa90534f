//! Send a 50x50 bitmap over an entangled pair: XOR with the sender's signs,
//! undo with the receiver's, and use a pilot block to resolve complements.
//!
//!     cargo run --release --example reconcile_bits [out_dir]

use entlab::reconciler::{self, pnm, BitMessage};
use entlab::rng::derive_stream;
use entlab::BitVector;

fn main() -> entlab::Result<()> {
    let out_dir = std::env::args().nth(1).map(std::path::PathBuf::from);
    let (w_side, h_side) = (50, 50);
    let bits: BitVector = (0..w_side * h_side)
        .map(|i| {
            let (x, y) = ((i % w_side) as i64 - 25, (i / w_side) as i64 - 25);
            (x * x + y * y < 300) ^ (x.abs() < 4)
        })
        .collect();
    let message = BitMessage::new(bits, w_side, h_side)?;
    let frame = reconciler::with_pilot(&message, reconciler::DEFAULT_PILOT_LEN)?;
    let k = frame.len();

    let mut g = derive_stream(5, 0).into_gaussians();
    let w: Vec<f64> = (&mut g).take(512).collect();
    let wp: Vec<f64> = g.take(512).collect();
    let pair = reconciler::entangle(&w, &wp, 3500, k, 200, 11)?;
    println!("k = {k}: entangled {} after {} steps", pair.entangled, pair.t_used);

    let y = reconciler::encode_bits(&frame, &pair.sender)?;
    let raw = reconciler::decode_bits(&y, &pair.receiver)?;
    let d = reconciler::disambiguate(&raw, reconciler::DEFAULT_PILOT_LEN)?;
    let recovered = d.payload_image(w_side, h_side)?;
    println!("receiver flipped: {}, exact recovery: {}", d.flipped, recovered == message);

    let adv = reconciler::adversary_attempt(&y, 3500, k, pair.t_used, 77, &frame)?;
    println!("keyless attempt, complement-corrected BER: {adv:.4}");

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("message.pbm"), pnm::encode_pbm(&message))?;
        std::fs::write(dir.join("recovered.pbm"), pnm::encode_pbm(&recovered))?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
