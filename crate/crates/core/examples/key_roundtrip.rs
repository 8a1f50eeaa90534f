//! Encode, save the key, reload it and reproduce the codewords from the
//! original input; project a second input through the same key.
//!
//!     cargo run --release --example key_roundtrip

use entlab::entangler::{encode, load_key, project, save_key};
use entlab::rng::derive_stream;

fn main() -> entlab::Result<()> {
    let w: Vec<f64> = derive_stream(1, 0).into_gaussians().take(128).collect();
    let enc = encode(&w, 1000, 250, 10, 99)?;

    let path = std::env::temp_dir().join("entlab-example.entk");
    save_key(&enc.key, &path)?;
    let key = load_key(&path)?;
    println!(
        "{}: {} bytes, seed {}, n {}, k {}, t {}",
        path.display(),
        std::fs::metadata(&path)?.len(),
        key.master_seed(),
        key.n(),
        key.k(),
        key.t()
    );

    let again = project(&key, &w)?;
    let same = enc.codewords.iter().zip(&again).all(|(a, b)| a == b);
    println!("projection of the encoded input reproduces its codewords: {same}");

    let other: Vec<f64> = w.iter().map(|x| -x).collect();
    let flipped = project(&key, &other)?;
    let opposite = again.iter().zip(&flipped).all(|(a, b)| a.negated() == *b);
    println!("projection of -w is the exact negation: {opposite}");
    std::fs::remove_file(path)?;
    Ok(())
}
