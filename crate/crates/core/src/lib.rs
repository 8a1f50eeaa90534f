//! Iterative random-projection entanglement of feature pairs.
//!
//! Two unrelated feature vectors, pushed repeatedly through shared Gaussian
//! projections that keep only the `k` largest-magnitude coordinates, end up
//! as reduced codewords that are equal or exactly opposite. This crate
//! implements that encoder and the tools around it:
//!
//! - [`rng`]: seeded splitmix64 streams and Box–Muller Gaussian matrices.
//! - [`lshstats`]: sign-projection LSH, Hamming/angle metrics, binomial
//!   likelihoods, entropy and divergence.
//! - [`entangler`]: the encoder, the projection of a second sample through
//!   the recorded reduced matrices, and the compact key file.
//! - [`relativity`]: Lorentz boosts and their invariants, checked numerically.
//! - [`reconciler`]: one-time-pad style message transport over an entangled
//!   pair, plus netpbm image I/O.
//! - [`labs`]: cohort experiments, trajectory CSV and summary JSON.
//!
//! Everything is deterministic given its seed.

pub mod cli;
pub mod entangler;
pub mod error;
pub mod labs;
pub mod lshstats;
pub mod reconciler;
pub mod relativity;
pub mod rng;

pub use entangler::{
    encode, encode_step, load_key, project, save_key, EncodeStep, Encoding, EntanglementKey,
    PairEncoder, ReducedCodeword, StepMetrics, Trajectory,
};
pub use error::{Error, Result};
pub use lshstats::{BinomialModel, BitVector};
pub use reconciler::{BitMessage, CipherMode, CipherVector, GrayMessage};
pub use rng::{derive_stream, gaussian_matrix, ProjectionMatrix, RngStream};
