//! Iterative reduced-codeword encoding.
//!
//! Each step projects the current input through a fresh Gaussian matrix
//! `G_step` (`n` rows), keeps the `k` coordinates with the largest magnitude,
//! and normalizes the result; that unit vector is the next step's input. The
//! kept rows form the reduced matrix `Ĝ_step`. A second sample is carried
//! through the same reduced matrices, normalizing after each one, and the two
//! sequences are compared step by step.
//!
//! Matrices are never stored. An [`EntanglementKey`] holds the seed and the
//! per-step row selections, and `Ĝ_step` is regenerated from those on demand.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lshstats::{check_len, check_nonzero, hamming, norm, sign_quantize};
use crate::rng::{dot, gaussian_matrix, gaussian_rows, ProjectionMatrix};

/// Key file magic bytes.
pub const KEY_MAGIC: [u8; 4] = *b"ENTK";
pub const KEY_VERSION: u16 = 1;
/// Fixed header size of a key file, magic included.
pub const KEY_HEADER_LEN: usize = 32;

/// A unit-norm reduced codeword produced at `step` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCodeword {
    pub step: usize,
    pub values: Vec<f64>,
}

impl ReducedCodeword {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn negated(&self) -> ReducedCodeword {
        ReducedCodeword {
            step: self.step,
            values: self.values.iter().map(|x| -x).collect(),
        }
    }
}

/// `k/n > 1/4` exceeds the causality bound `k/n <= 1/4`. Callers surface this
/// as a warning; encoding still proceeds.
pub fn exceeds_causality_bound(n: usize, k: usize) -> bool {
    4 * k > n
}

/// Indices of the `k` largest `|c_i|`, ties broken toward the lower index,
/// returned in ascending order.
pub fn top_k_indices(c: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    let by_magnitude = |a: &usize, b: &usize| c[*b].abs().total_cmp(&c[*a].abs()).then(a.cmp(b));
    if k < order.len() {
        order.select_nth_unstable_by(k, by_magnitude);
        order.truncate(k);
    }
    order.sort_unstable();
    order
}

fn normalized(values: Vec<f64>, step: usize, which: &str) -> Result<ReducedCodeword> {
    let len = norm(&values);
    if len == 0.0 || !len.is_finite() {
        return Err(Error::Degenerate(format!(
            "{which} reduced codeword at step {step} has norm {len}"
        )));
    }
    Ok(ReducedCodeword {
        step,
        values: values.into_iter().map(|x| x / len).collect(),
    })
}

fn check_sizes(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k must not exceed n (k = {k}, n = {n})"
        )));
    }
    Ok(())
}

/// Result of one encoding step.
#[derive(Debug, Clone)]
pub struct EncodeStep {
    pub codeword: ReducedCodeword,
    /// Selected row indices, ascending.
    pub selection: Vec<usize>,
    /// The full projection `G_step · w` the selection was taken from.
    pub projection: Vec<f64>,
}

fn encode_with(w: &[f64], g: &ProjectionMatrix, k: usize, step: usize) -> Result<EncodeStep> {
    let projection = g.apply(w);
    let selection = top_k_indices(&projection, k);
    let reduced = selection.iter().map(|&i| projection[i]).collect();
    let codeword = normalized(reduced, step + 1, "encoded")?;
    Ok(EncodeStep {
        codeword,
        selection,
        projection,
    })
}

/// Projects `w` through `G_step` and reduces to the top `k` coordinates.
///
/// `step` is 0-based; the returned codeword carries `step + 1`.
pub fn encode_step(w: &[f64], master_seed: u64, step: usize, n: usize, k: usize) -> Result<EncodeStep> {
    check_sizes(n, k)?;
    check_nonzero("input vector", w)?;
    let g = gaussian_matrix(master_seed, step as u64, n, w.len())?;
    encode_with(w, &g, k, step)
}

/// Output of [`encode`].
#[derive(Debug, Clone)]
pub struct Encoding {
    pub codewords: Vec<ReducedCodeword>,
    pub key: EntanglementKey,
}

/// Runs `t` encoding steps starting from `w0`.
pub fn encode(w0: &[f64], n: usize, k: usize, t: usize, master_seed: u64) -> Result<Encoding> {
    check_sizes(n, k)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    check_nonzero("initial vector", w0)?;
    let mut codewords = Vec::with_capacity(t);
    let mut selections = Vec::with_capacity(t);
    let mut input = w0.to_vec();
    for step in 0..t {
        let out = encode_step(&input, master_seed, step, n, k)?;
        input.clone_from(&out.codeword.values);
        codewords.push(out.codeword);
        selections.push(out.selection);
    }
    let key = EntanglementKey::new(master_seed, w0.len(), n, k, selections)?;
    Ok(Encoding { codewords, key })
}

/// Carries `w0p` through the reduced matrices recorded in `key`.
pub fn project(key: &EntanglementKey, w0p: &[f64]) -> Result<Vec<ReducedCodeword>> {
    check_len("projected input", key.ell, w0p.len())?;
    check_nonzero("projected input", w0p)?;
    let mut out = Vec::with_capacity(key.t());
    let mut input = w0p.to_vec();
    for step in 0..key.t() {
        let g_hat = key.reduced_matrix(step)?;
        let c = normalized(g_hat.apply(&input), step + 1, "projected")?;
        input.clone_from(&c.values);
        out.push(c);
    }
    Ok(out)
}

/// Seed, dimensions and per-step row selections; enough to rebuild every
/// reduced matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntanglementKey {
    master_seed: u64,
    ell: usize,
    n: usize,
    k: usize,
    selections: Vec<Vec<usize>>,
}

impl EntanglementKey {
    pub fn new(
        master_seed: u64,
        ell: usize,
        n: usize,
        k: usize,
        selections: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_sizes(n, k)?;
        if ell == 0 {
            return Err(Error::InvalidParameter("input dimension must be at least 1".into()));
        }
        if selections.is_empty() {
            return Err(Error::InvalidParameter("key needs at least one step".into()));
        }
        for (step, sel) in selections.iter().enumerate() {
            if sel.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "selection {step} has {} indices, expected {k}",
                    sel.len()
                )));
            }
            if sel.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "selection {step} is not strictly ascending"
                )));
            }
            if let Some(&last) = sel.last() {
                if last >= n {
                    return Err(Error::InvalidParameter(format!(
                        "selection {step} index {last} out of range for n = {n}"
                    )));
                }
            }
        }
        Ok(EntanglementKey {
            master_seed,
            ell,
            n,
            k,
            selections,
        })
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.selections.len()
    }

    pub fn selections(&self) -> &[Vec<usize>] {
        &self.selections
    }

    /// Input dimension of step `step` (0-based).
    pub fn input_dim(&self, step: usize) -> usize {
        if step == 0 {
            self.ell
        } else {
            self.k
        }
    }

    /// `Ĝ_{step+1}`: the selected rows of `G_step`.
    pub fn reduced_matrix(&self, step: usize) -> Result<ProjectionMatrix> {
        let sel = self.selections.get(step).ok_or_else(|| {
            Error::InvalidParameter(format!("step {step} beyond key length {}", self.t()))
        })?;
        gaussian_rows(self.master_seed, step as u64, sel, self.n, self.input_dim(step))
    }

    /// Keeps only the first `t` steps.
    pub fn truncated(&self, t: usize) -> Result<EntanglementKey> {
        if t == 0 || t > self.t() {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate a {}-step key to {t} steps",
                self.t()
            )));
        }
        let mut key = self.clone();
        key.selections.truncate(t);
        Ok(key)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(KEY_HEADER_LEN + 4 * self.k * self.t());
        out.extend_from_slice(&KEY_MAGIC);
        out.extend_from_slice(&KEY_VERSION.to_le_bytes());
        out.extend_from_slice(&0u16.to_le_bytes());
        for v in [self.ell, self.n, self.k, self.t()] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.master_seed.to_le_bytes());
        for sel in &self.selections {
            for &i in sel {
                out.extend_from_slice(&(i as u32).to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: String| Error::format("key file", msg);
        if bytes.len() < KEY_HEADER_LEN {
            return Err(bad(format!("truncated header ({} bytes)", bytes.len())));
        }
        if bytes[..4] != KEY_MAGIC {
            return Err(bad("bad magic".into()));
        }
        let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
        let version = u16_at(4);
        if version != KEY_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        if u16_at(6) != 0 {
            return Err(bad("reserved field is nonzero".into()));
        }
        let (ell, n, k, t) = (u32_at(8), u32_at(12), u32_at(16), u32_at(20));
        let master_seed = u64::from_le_bytes(bytes[24..32].try_into().unwrap());
        let body = t
            .checked_mul(k)
            .and_then(|x| x.checked_mul(4))
            .ok_or_else(|| bad("size overflow".into()))?;
        let expected = KEY_HEADER_LEN + body;
        if bytes.len() < expected {
            return Err(bad(format!(
                "truncated: {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        if bytes.len() > expected {
            return Err(bad(format!(
                "{} trailing bytes after selections",
                bytes.len() - expected
            )));
        }
        let selections = (0..t)
            .map(|s| {
                (0..k)
                    .map(|j| u32_at(KEY_HEADER_LEN + 4 * (s * k + j)))
                    .collect()
            })
            .collect();
        EntanglementKey::new(master_seed, ell, n, k, selections).map_err(|e| bad(e.to_string()))
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<usize> {
        let bytes = self.to_bytes();
        writer.write_all(&bytes)?;
        Ok(bytes.len())
    }

    pub fn read_from<R: Read>(mut reader: R) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

/// Writes `key` to `path`, returning the number of bytes written.
pub fn save_key(key: &EntanglementKey, path: impl AsRef<Path>) -> Result<usize> {
    let bytes = key.to_bytes();
    fs::write(path, &bytes)?;
    Ok(bytes.len())
}

pub fn load_key(path: impl AsRef<Path>) -> Result<EntanglementKey> {
    EntanglementKey::from_bytes(&fs::read(path)?)
}

/// Distances between the two codewords of a pair at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepMetrics {
    pub step: usize,
    /// `arccos(ĉ · ĉ') / π`.
    pub angle_theta: f64,
    /// Hamming distance of the sign patterns over `k`.
    pub hamming_k: f64,
    /// Hamming distance of the sign patterns over `n`.
    pub hamming_n: f64,
    /// `‖ĉ - ĉ'‖²`.
    pub euclid_sq: f64,
    /// `‖ĉ + ĉ'‖²`.
    pub euclid_sq_flipped: f64,
}

impl StepMetrics {
    pub fn measure(c: &ReducedCodeword, cp: &ReducedCodeword, n: usize) -> Result<Self> {
        check_len("reduced codeword", c.dim(), cp.dim())?;
        let k = c.dim();
        let (mut minus, mut plus) = (0.0, 0.0);
        for (a, b) in c.values.iter().zip(&cp.values) {
            minus += (a - b) * (a - b);
            plus += (a + b) * (a + b);
        }
        let d = hamming(&sign_quantize(&c.values), &sign_quantize(&cp.values))? as f64;
        Ok(StepMetrics {
            step: c.step,
            // Half-angle form: exact at 0 and π, unlike acos of a dot product.
            angle_theta: 2.0 * minus.sqrt().atan2(plus.sqrt()) / std::f64::consts::PI,
            hamming_k: d / k as f64,
            hamming_n: d / n as f64,
            euclid_sq: minus,
            euclid_sq_flipped: plus,
        })
    }

    /// `min(‖ĉ - ĉ'‖², ‖ĉ + ĉ'‖²)`: distance to perfect (anti-)correlation.
    pub fn min_euclid_sq(&self) -> f64 {
        self.euclid_sq.min(self.euclid_sq_flipped)
    }
}

/// Per-step metrics of one pair.
pub type Trajectory = Vec<StepMetrics>;

/// Encodes two samples side by side through the same fresh matrices.
///
/// Stepping is equivalent to `encode(w)` followed by `project(key, w')`, but
/// each `G_step` is generated once and shared by both sides.
#[derive(Debug, Clone)]
pub struct PairEncoder {
    master_seed: u64,
    ell: usize,
    n: usize,
    k: usize,
    current: Vec<f64>,
    partner: Vec<f64>,
    selections: Vec<Vec<usize>>,
}

impl PairEncoder {
    pub fn new(w: &[f64], wp: &[f64], n: usize, k: usize, master_seed: u64) -> Result<Self> {
        check_sizes(n, k)?;
        check_len("partner vector", w.len(), wp.len())?;
        check_nonzero("encoded vector", w)?;
        check_nonzero("partner vector", wp)?;
        Ok(PairEncoder {
            master_seed,
            ell: w.len(),
            n,
            k,
            current: w.to_vec(),
            partner: wp.to_vec(),
            selections: Vec::new(),
        })
    }

    /// Steps taken so far.
    pub fn steps(&self) -> usize {
        self.selections.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Advances one step and returns `(ĉ, ĉ')`.
    pub fn advance(&mut self) -> Result<(ReducedCodeword, ReducedCodeword)> {
        let step = self.selections.len();
        let g = gaussian_matrix(self.master_seed, step as u64, self.n, self.current.len())?;
        let out = encode_with(&self.current, &g, self.k, step)?;
        let reduced: Vec<f64> = out
            .selection
            .iter()
            .map(|&i| dot(g.row(i), &self.partner))
            .collect();
        let cp = normalized(reduced, step + 1, "projected")?;
        self.current.clone_from(&out.codeword.values);
        self.partner.clone_from(&cp.values);
        self.selections.push(out.selection);
        Ok((out.codeword, cp))
    }

    /// Key covering the steps taken so far.
    pub fn key(&self) -> Result<EntanglementKey> {
        EntanglementKey::new(
            self.master_seed,
            self.ell,
            self.n,
            self.k,
            self.selections.clone(),
        )
    }
}
