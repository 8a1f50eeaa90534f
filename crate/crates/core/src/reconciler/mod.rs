//! Message transport over an entangled codeword pair.
//!
//! Bit mode is a one-time pad: the sender XORs the message with the sign
//! pattern of its codeword, the receiver XORs again with the sign pattern of
//! its own. When the pair is fully entangled the two patterns are equal or
//! exact complements, so the receiver gets either the message or its
//! complement; a known all-zero pilot prefix tells the two apart.
//!
//! Gray mode adds a scaled codeword to gray levels, `y = α·ĉ + m`, and the
//! receiver subtracts `±α·ĉ'`, choosing the sign whose result stays inside
//! `[0, 1]` best.

pub mod pnm;

use serde::{Deserialize, Serialize};

use crate::entangler::{encode, PairEncoder, ReducedCodeword};
use crate::error::{Error, Result};
use crate::lshstats::{check_len, hamming, sign_quantize, BitVector};
use crate::rng::{derive_stream, mix_seed};

/// Default length of the all-zero pilot prefix.
pub const DEFAULT_PILOT_LEN: usize = 16;
/// Smallest pilot accepted by [`disambiguate`].
pub const MIN_PILOT_LEN: usize = 8;

fn check_dims(len: usize, width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "message dimensions must be positive, got {width}x{height}"
        )));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::InvalidParameter(format!(
            "{len} values do not fill a {width}x{height} raster"
        )));
    }
    Ok(())
}

/// Binary message laid out as a row-major `width x height` raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMessage {
    bits: BitVector,
    width: usize,
    height: usize,
}

impl BitMessage {
    pub fn new(bits: BitVector, width: usize, height: usize) -> Result<Self> {
        check_dims(bits.len(), width, height)?;
        Ok(BitMessage {
            bits,
            width,
            height,
        })
    }

    /// A single-row message.
    pub fn from_bits(bits: BitVector) -> Result<Self> {
        let w = bits.len();
        Self::new(bits, w, 1)
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn complement(&self) -> BitMessage {
        BitMessage {
            bits: self.bits.complement(),
            ..*self
        }
    }
}

/// Gray-level message with levels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayMessage {
    levels: Vec<f64>,
    width: usize,
    height: usize,
}

impl GrayMessage {
    pub fn new(levels: Vec<f64>, width: usize, height: usize) -> Result<Self> {
        check_dims(levels.len(), width, height)?;
        if let Some(bad) = levels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidParameter(format!(
                "gray level {bad} outside [0, 1]"
            )));
        }
        Ok(GrayMessage {
            levels,
            width,
            height,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CipherMode {
    Bit,
    Gray,
}

/// The transmitted vector `y`, serialized as JSON for interchange.
///
/// `width`/`height` describe the payload image; in bit mode `pilot` zero bits
/// precede it, so `values.len() == pilot + width * height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CipherVector {
    pub mode: CipherMode,
    pub alpha: Option<f64>,
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub pilot: usize,
    pub values: Vec<f64>,
}

impl CipherVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cipher serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let y: CipherVector =
            serde_json::from_str(text).map_err(|e| Error::format("cipher JSON", e.to_string()))?;
        let payload = y.width.checked_mul(y.height).and_then(|p| p.checked_add(y.pilot));
        if payload != Some(y.values.len()) {
            return Err(Error::format(
                "cipher JSON",
                format!(
                    "{} values do not match {}x{} plus pilot {}",
                    y.values.len(),
                    y.width,
                    y.height,
                    y.pilot
                ),
            ));
        }
        match y.mode {
            CipherMode::Bit if y.values.iter().any(|&v| v != 0.0 && v != 1.0) => {
                Err(Error::format("cipher JSON", "bit-mode values must be 0 or 1"))
            }
            CipherMode::Gray if !y.alpha.is_some_and(|a| a > 0.0) => {
                Err(Error::format("cipher JSON", "gray mode needs a positive alpha"))
            }
            _ => Ok(y),
        }
    }
}

/// `y = sgn(ĉ) ⊕ m`.
pub fn encode_bits(m: &BitMessage, c: &ReducedCodeword) -> Result<CipherVector> {
    check_len("codeword", m.len(), c.dim())?;
    let y = sign_quantize(&c.values).xor(&m.bits)?;
    Ok(CipherVector {
        mode: CipherMode::Bit,
        alpha: None,
        width: m.width,
        height: m.height,
        pilot: 0,
        values: y.as_slice().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
    })
}

fn cipher_bits(y: &CipherVector) -> Result<BitVector> {
    if y.mode != CipherMode::Bit {
        return Err(Error::InvalidParameter("expected a bit-mode cipher".into()));
    }
    y.values
        .iter()
        .map(|&v| {
            if v == 0.0 {
                Ok(false)
            } else if v == 1.0 {
                Ok(true)
            } else {
                Err(Error::InvalidParameter(format!("bit cipher value {v}")))
            }
        })
        .collect()
}

/// `m̂ = y ⊕ sgn(ĉ')`, laid out with the cipher's frame (pilot included, as
/// a single row when a pilot is present).
pub fn decode_bits(y: &CipherVector, cp: &ReducedCodeword) -> Result<BitMessage> {
    check_len("codeword", y.len(), cp.dim())?;
    let bits = cipher_bits(y)?.xor(&sign_quantize(&cp.values))?;
    if y.pilot == 0 {
        BitMessage::new(bits, y.width, y.height)
    } else {
        BitMessage::from_bits(bits)
    }
}

/// Prefixes `payload` with `pilot_len` zero bits.
pub fn with_pilot(payload: &BitMessage, pilot_len: usize) -> Result<BitMessage> {
    let mut bits = vec![false; pilot_len];
    bits.extend_from_slice(payload.bits.as_slice());
    BitMessage::from_bits(bits.into())
}

/// Outcome of [`disambiguate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disambiguated {
    /// The whole frame, complemented when `flipped`.
    pub frame: BitMessage,
    pub flipped: bool,
    pilot_len: usize,
}

impl Disambiguated {
    /// The frame with the pilot stripped.
    pub fn payload(&self) -> &[bool] {
        &self.frame.bits.as_slice()[self.pilot_len..]
    }

    /// The payload as a `width x height` image.
    pub fn payload_image(&self, width: usize, height: usize) -> Result<BitMessage> {
        BitMessage::new(self.payload().to_vec().into(), width, height)
    }
}

/// Complements `m_hat` when most of its pilot bits are set; a tie keeps it.
pub fn disambiguate(m_hat: &BitMessage, pilot_len: usize) -> Result<Disambiguated> {
    if pilot_len < MIN_PILOT_LEN {
        return Err(Error::InvalidParameter(format!(
            "pilot must be at least {MIN_PILOT_LEN} bits, got {pilot_len}"
        )));
    }
    if pilot_len >= m_hat.len() {
        return Err(Error::InvalidParameter(format!(
            "pilot of {pilot_len} bits leaves no payload in {} bits",
            m_hat.len()
        )));
    }
    let ones = m_hat.bits.as_slice()[..pilot_len].iter().filter(|&&b| b).count();
    let flipped = 2 * ones > pilot_len;
    Ok(Disambiguated {
        frame: if flipped { m_hat.complement() } else { m_hat.clone() },
        flipped,
        pilot_len,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// `y = α·ĉ + m`, without clamping.
pub fn encode_gray(m: &GrayMessage, c: &ReducedCodeword, alpha: f64) -> Result<CipherVector> {
    check_alpha(alpha)?;
    check_len("codeword", m.len(), c.dim())?;
    Ok(CipherVector {
        mode: CipherMode::Gray,
        alpha: Some(alpha),
        width: m.width,
        height: m.height,
        pilot: 0,
        values: m
            .levels
            .iter()
            .zip(&c.values)
            .map(|(l, x)| alpha * x + l)
            .collect(),
    })
}

/// Outcome of [`decode_gray`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrayDecode {
    /// Unclamped `y - σ·α·ĉ'` for the chosen `σ`.
    pub levels: Vec<f64>,
    /// The chosen `σ`, `+1` or `-1`.
    pub orientation: i8,
    /// Out-of-range mass of the `σ = +1` and `σ = -1` hypotheses.
    pub out_of_range: [f64; 2],
    pub width: usize,
    pub height: usize,
}

impl GrayDecode {
    /// Clamped to `[0, 1]` for export.
    pub fn to_message(&self) -> GrayMessage {
        let levels = self.levels.iter().map(|l| l.clamp(0.0, 1.0)).collect();
        GrayMessage::new(levels, self.width, self.height).expect("clamped levels are valid")
    }

    /// `‖m̂ - m‖² / k` on the unclamped levels.
    pub fn mse(&self, truth: &GrayMessage) -> Result<f64> {
        check_len("gray message", self.levels.len(), truth.len())?;
        let sum: f64 = self
            .levels
            .iter()
            .zip(&truth.levels)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(sum / truth.len() as f64)
    }
}

/// `y - σ·α·ĉ'` for a fixed orientation.
pub fn gray_hypothesis(y: &CipherVector, cp: &ReducedCodeword, alpha: f64, sigma: i8) -> Vec<f64> {
    let s = alpha * f64::from(sigma);
    y.values.iter().zip(&cp.values).map(|(v, x)| v - s * x).collect()
}

fn out_of_range_mass(levels: &[f64]) -> f64 {
    levels
        .iter()
        .map(|&l| (l - 1.0).max(0.0) + (-l).max(0.0))
        .sum()
}

/// Recovers gray levels from `y` using the receiver's codeword.
///
/// Both orientations are tried; the one with the smaller out-of-range mass
/// wins, `+1` on a tie.
pub fn decode_gray(y: &CipherVector, cp: &ReducedCodeword, alpha: f64) -> Result<GrayDecode> {
    check_alpha(alpha)?;
    check_len("codeword", y.len(), cp.dim())?;
    if y.mode != CipherMode::Gray {
        return Err(Error::InvalidParameter("expected a gray-mode cipher".into()));
    }
    let plus = gray_hypothesis(y, cp, alpha, 1);
    let minus = gray_hypothesis(y, cp, alpha, -1);
    let mass = [out_of_range_mass(&plus), out_of_range_mass(&minus)];
    let (levels, orientation) = if mass[1] < mass[0] {
        (minus, -1)
    } else {
        (plus, 1)
    };
    Ok(GrayDecode {
        levels,
        orientation,
        out_of_range: mass,
        width: y.width,
        height: y.height,
    })
}

/// Bit-error rate of `m_hat` against `truth`, folded so that a complemented
/// decode counts as success: `min(ber, 1 - ber)`.
pub fn corrected_ber(m_hat: &BitVector, truth: &BitVector) -> Result<f64> {
    let ber = hamming(m_hat, truth)? as f64 / truth.len() as f64;
    Ok(ber.min(1.0 - ber))
}

/// Stream index reserved for adversary samples, away from matrix steps.
const ADVERSARY_STREAM: u64 = 1 << 62;

/// An eavesdropper without the key: draws a fresh `w*` in `R^k`, encodes it
/// with fresh matrices for `t` steps, and decodes `y` with the result.
/// Returns the complement-corrected bit-error rate against `m`.
pub fn adversary_attempt(
    y: &CipherVector,
    n: usize,
    k: usize,
    t: usize,
    fresh_seed: u64,
    m: &BitMessage,
) -> Result<f64> {
    check_len("cipher", k, y.len())?;
    let w_star: Vec<f64> = derive_stream(fresh_seed, ADVERSARY_STREAM)
        .into_gaussians()
        .take(k)
        .collect();
    let enc = encode(&w_star, n, k, t, mix_seed(fresh_seed, ADVERSARY_STREAM))?;
    let c_star = enc.codewords.last().expect("t >= 1");
    let m_hat = decode_bits(y, c_star)?;
    corrected_ber(m_hat.bits(), m.bits())
}

/// Sign patterns of a pair that agree everywhere or nowhere.
pub fn fully_entangled(c: &ReducedCodeword, cp: &ReducedCodeword) -> Result<bool> {
    let d = hamming(&sign_quantize(&c.values), &sign_quantize(&cp.values))?;
    Ok(d == 0 || d == c.dim())
}

/// A codeword pair produced by [`entangle`].
#[derive(Debug, Clone)]
pub struct EntangledPair {
    pub sender: ReducedCodeword,
    pub receiver: ReducedCodeword,
    /// Steps actually run.
    pub t_used: usize,
    /// Whether the sign patterns ended fully (anti-)correlated.
    pub entangled: bool,
    pub key: crate::entangler::EntanglementKey,
}

/// Steps a pair until its sign patterns are fully entangled or `t_max`
/// steps have run.
pub fn entangle(
    w: &[f64],
    wp: &[f64],
    n: usize,
    k: usize,
    t_max: usize,
    seed: u64,
) -> Result<EntangledPair> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    let mut pair = PairEncoder::new(w, wp, n, k, seed)?;
    loop {
        let (c, cp) = pair.advance()?;
        let done = fully_entangled(&c, &cp)?;
        if done || pair.steps() == t_max {
            return Ok(EntangledPair {
                sender: c,
                receiver: cp,
                t_used: pair.steps(),
                entangled: done,
                key: pair.key()?,
            });
        }
    }
}
