//! Deterministic, portable randomness.
//!
//! The generator is splitmix64: the state advances by a fixed odd constant
//! and each output is the state passed through a 64-bit finalizer. Because the
//! state after `j` draws is `state0 + j * GAMMA`, any output can be computed
//! directly from its index, which lets us regenerate individual matrix rows
//! without replaying the whole stream.
//!
//! Gaussians come from Box–Muller over consecutive uniform pairs: uniforms
//! `2p` and `2p + 1` produce entries `2p` (cosine branch) and `2p + 1` (sine
//! branch). Matrices are filled row-major from that sequence.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// splitmix64 increment (the 64-bit golden ratio).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Salt mixed into the step index before it is combined with the seed.
const STEP_SALT: u64 = 0xD1B5_4A32_D192_ED03;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;
const HALF_ULP: f64 = INV_2_53 / 2.0;

/// The splitmix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a seed with a secondary index into a new 64-bit seed.
///
/// Used both for per-step matrix streams and for per-pair seeds in cohort runs.
#[inline]
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index ^ STEP_SALT))
}

/// Maps a raw 64-bit draw to a uniform in (0, 1].
///
/// Zero is unreachable, which keeps `ln(u)` finite in Box–Muller. The top
/// draw rounds to exactly 1.0, where Box–Muller simply yields 0.
#[inline]
pub fn to_open_unit(raw: u64) -> f64 {
    (raw >> 11) as f64 * INV_2_53 + HALF_ULP
}

#[inline]
fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    (r * c, r * s)
}

/// A seeded splitmix64 stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn from_state(state: u64) -> Self {
        RngStream { state }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in (0, 1]; never returns 0.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        to_open_unit(self.next_u64())
    }

    /// The `index`-th future output (0 = the value `next_u64` would return),
    /// without advancing the stream.
    #[inline]
    pub fn peek_at(&self, index: u64) -> u64 {
        mix64(self.state.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))))
    }

    /// Advances the stream by `count` outputs in constant time.
    pub fn skip(&mut self, count: u64) {
        self.state = self.state.wrapping_add(GAMMA.wrapping_mul(count));
    }

    /// Standard-normal entry number `entry` of this stream's Gaussian
    /// sequence, computed by random access.
    pub fn gaussian_at(&self, entry: u64) -> f64 {
        let pair = entry / 2;
        let u1 = to_open_unit(self.peek_at(2 * pair));
        let u2 = to_open_unit(self.peek_at(2 * pair + 1));
        let (z0, z1) = box_muller(u1, u2);
        if entry % 2 == 0 {
            z0
        } else {
            z1
        }
    }

    pub fn into_gaussians(self) -> GaussianStream {
        GaussianStream {
            rng: self,
            spare: None,
        }
    }
}

/// The stream for `(master_seed, step)`.
pub fn derive_stream(master_seed: u64, step: u64) -> RngStream {
    RngStream::from_state(mix_seed(master_seed, step))
}

/// Sequential standard normals, consuming uniforms in pairs.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: RngStream,
    spare: Option<f64>,
}

impl GaussianStream {
    #[inline]
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.rng.next_uniform();
        let u2 = self.rng.next_uniform();
        let (z0, z1) = box_muller(u1, u2);
        self.spare = Some(z1);
        z0
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_gaussian();
        }
    }

    /// Access to the underlying uniform stream (discards any cached spare).
    pub fn uniforms(&mut self) -> &mut RngStream {
        self.spare = None;
        &mut self.rng
    }
}

impl Iterator for GaussianStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_gaussian())
    }
}

/// A dense row-major real matrix; rows are the hash vectors `v_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ProjectionMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                what: "matrix data",
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(ProjectionMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// `self · x`; the caller guarantees `x.len() == cols`.
    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| dot(row, x))
            .collect()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_shape(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Dimension(format!(
            "projection matrix needs n >= 1 and d >= 1, got n={n}, d={d}"
        )));
    }
    Ok(())
}

/// The `n x d` standard-normal matrix for `(master_seed, step)`.
pub fn gaussian_matrix(master_seed: u64, step: u64, n: usize, d: usize) -> Result<ProjectionMatrix> {
    check_shape(n, d)?;
    let mut data = vec![0.0; n * d];
    derive_stream(master_seed, step)
        .into_gaussians()
        .fill(&mut data);
    Ok(ProjectionMatrix {
        rows: n,
        cols: d,
        data,
    })
}

/// Rows `indices` of `gaussian_matrix(master_seed, step, n, d)`, in the
/// order given, without generating the other rows.
pub fn gaussian_rows(
    master_seed: u64,
    step: u64,
    indices: &[usize],
    n: usize,
    d: usize,
) -> Result<ProjectionMatrix> {
    check_shape(n, d)?;
    if indices.is_empty() {
        return Err(Error::Dimension("row selection is empty".into()));
    }
    let base = derive_stream(master_seed, step);
    let mut data = Vec::with_capacity(indices.len() * d);
    for &i in indices {
        if i >= n {
            return Err(Error::Dimension(format!("row index {i} out of range for n={n}")));
        }
        let start = (i * d) as u64;
        let mut stream = base.clone();
        if start % 2 == 1 {
            data.push(base.gaussian_at(start));
            stream.skip(start + 1);
        } else {
            stream.skip(start);
        }
        let mut gauss = stream.into_gaussians();
        let remaining = d - (start % 2) as usize;
        data.extend((&mut gauss).take(remaining));
    }
    Ok(ProjectionMatrix {
        rows: indices.len(),
        cols: d,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent scalar re-implementation of the documented mixer, written
    // from the published splitmix64 constants.
    fn oracle_output(seed: u64, step: u64, j: u64) -> u64 {
        fn fin(x: u64) -> u64 {
            let x = (x ^ (x >> 30)).wrapping_mul(13787848793156543929);
            let x = (x ^ (x >> 27)).wrapping_mul(10723151780598845931);
            x ^ (x >> 31)
        }
        let salted = fin(step ^ 15111065706836454659);
        let s0 = fin(seed ^ salted);
        fin(s0.wrapping_add(11400714819323198485u64.wrapping_mul(j + 1)))
    }

    fn oracle_gaussian(seed: u64, step: u64, entry: u64) -> f64 {
        let p = entry / 2;
        let u = |j| ((oracle_output(seed, step, j) >> 11) as f64 + 0.5) / 9007199254740992.0;
        let (u1, u2) = (u(2 * p), u(2 * p + 1));
        let r = (-2.0 * u1.ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * u2;
        if entry % 2 == 0 {
            r * a.cos()
        } else {
            r * a.sin()
        }
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = derive_stream(0, 0);
        let mut b = derive_stream(0, 0);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn adjacent_steps_diverge() {
        let mut a = derive_stream(0, 0);
        let mut b = derive_stream(0, 1);
        let differ = (0..1000).filter(|_| a.next_u64() != b.next_u64()).count();
        assert!(differ >= 990, "only {differ} positions differ");
    }

    #[test]
    fn first_output_matches_oracle() {
        let mut s = derive_stream(7, 3);
        assert_eq!(s.next_u64(), oracle_output(7, 3, 0));
        for j in 1..64 {
            assert_eq!(s.next_u64(), oracle_output(7, 3, j));
        }
    }

    #[test]
    fn small_matrix_matches_oracle() {
        let g = gaussian_matrix(1, 0, 2, 2).unwrap();
        for e in 0..4u64 {
            let (i, j) = ((e / 2) as usize, (e % 2) as usize);
            let want = oracle_gaussian(1, 0, e);
            assert!(
                (g.get(i, j) - want).abs() <= 1e-12 * want.abs().max(1.0),
                "entry {e}: {} vs {want}",
                g.get(i, j)
            );
        }
    }

    #[test]
    fn uniforms_exclude_zero() {
        assert_eq!(to_open_unit(0), 2f64.powi(-54));
        assert!(to_open_unit(u64::MAX) <= 1.0);
        assert!(to_open_unit(u64::MAX - (1 << 12)) < 1.0);
        let (z0, z1) = box_muller(to_open_unit(u64::MAX), 0.3);
        assert!(z0.is_finite() && z1.is_finite());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(gaussian_matrix(1, 0, 0, 3), Err(Error::Dimension(_))));
        assert!(matches!(gaussian_matrix(1, 0, 3, 0), Err(Error::Dimension(_))));
    }

    #[test]
    fn matrix_is_deterministic() {
        let a = gaussian_matrix(42, 5, 17, 9).unwrap();
        let b = gaussian_matrix(42, 5, 17, 9).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn random_access_rows_match_full_matrix() {
        for &(n, d) in &[(7usize, 5usize), (6, 4), (9, 1), (3, 3)] {
            let full = gaussian_matrix(99, 2, n, d).unwrap();
            let idx: Vec<usize> = (0..n).rev().collect();
            let sub = gaussian_rows(99, 2, &idx, n, d).unwrap();
            for (r, &i) in idx.iter().enumerate() {
                assert_eq!(sub.row(r), full.row(i), "n={n} d={d} row {i}");
            }
        }
    }

    #[test]
    fn gaussian_at_matches_sequential() {
        let base = derive_stream(3, 9);
        let seq: Vec<f64> = base.clone().into_gaussians().take(101).collect();
        for (e, z) in seq.iter().enumerate() {
            assert_eq!(base.gaussian_at(e as u64), *z);
        }
    }

    #[test]
    fn million_entry_moments() {
        let g = gaussian_matrix(1, 0, 1000, 1000).unwrap();
        let xs = g.as_slice();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((0.99..=1.01).contains(&var), "variance {var}");
    }

    #[test]
    fn ks_statistic_small() {
        use statrs::distribution::{ContinuousCDF, Normal};
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut total = 0.0;
        for seed in [11u64, 12, 13] {
            let mut xs: Vec<f64> = derive_stream(seed, 0).into_gaussians().take(100_000).collect();
            xs.sort_by(f64::total_cmp);
            let m = xs.len() as f64;
            let d = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let f = normal.cdf(x);
                    (f - i as f64 / m).abs().max(((i + 1) as f64 / m - f).abs())
                })
                .fold(0.0, f64::max);
            total += d;
        }
        let mean_d = total / 3.0;
        assert!(mean_d < 0.01, "KS {mean_d}");
    }

    #[test]
    fn steps_uncorrelated() {
        let a = gaussian_matrix(5, 0, 100, 1000).unwrap();
        let b = gaussian_matrix(5, 1, 100, 1000).unwrap();
        let (xs, ys) = (a.as_slice(), b.as_slice());
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for (x, y) in xs.iter().zip(ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let r = sxy / (sxx * syy).sqrt();
        assert!(r.abs() < 0.01, "r = {r}");
    }
}
