//! Sign-random-projection LSH and the binomial likelihood mathematics around it.
//!
//! For two nonzero inputs `u`, `v` and a Gaussian projection `G`, each sign
//! bit of `G·u` and `G·v` disagrees independently with probability
//! `angle(u, v) / π`, so the Hamming distance between the quantized codewords
//! is `Bin(n, θ)`. The functions here cover both sides of that statement: the
//! encoding and distance metrics, and the binomial likelihood / entropy /
//! divergence quantities used to reason about it. Likelihoods are evaluated
//! in log space and reported in bits.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rng::{derive_stream, dot, ProjectionMatrix};

/// Largest `n` for which binomial coefficients are computed exactly.
pub const EXACT_BINOMIAL_LIMIT: u64 = 64;

/// A vector of bits, stored one per `bool`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitVector(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> BitVector {
        BitVector(self.0.iter().map(|b| !b).collect())
    }

    /// Bitwise XOR; lengths must agree.
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        check_len("bit vector", self.len(), other.len())?;
        Ok(BitVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }
}

impl From<Vec<bool>> for BitVector {
    fn from(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitVector(iter.into_iter().collect())
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch {
            what,
            expected,
            actual,
        });
    }
    Ok(())
}

pub(crate) fn check_nonzero(what: &'static str, w: &[f64]) -> Result<()> {
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} has non-finite entries")));
    }
    if w.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector(what));
    }
    Ok(())
}

pub(crate) fn norm(w: &[f64]) -> f64 {
    dot(w, w).sqrt()
}

/// The codeword `G·w`.
pub fn encode_lsh(w: &[f64], g: &ProjectionMatrix) -> Result<Vec<f64>> {
    check_len("feature vector", g.cols(), w.len())?;
    check_nonzero("feature vector", w)?;
    Ok(g.apply(w))
}

/// One bit per coordinate: 1 for `c_i >= 0` (so `sgn(0) = +1`), else 0.
pub fn sign_quantize(c: &[f64]) -> BitVector {
    c.iter().map(|&x| x >= 0.0).collect()
}

pub fn hamming(a: &BitVector, b: &BitVector) -> Result<usize> {
    check_len("bit vector", a.len(), b.len())?;
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// `arccos(<u/|u|, v/|v|>) / π`, in [0, 1].
pub fn angle_theta(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len("feature vector", u.len(), v.len())?;
    check_nonzero("u", u)?;
    check_nonzero("v", v)?;
    let cos = dot(u, v) / (norm(u) * norm(v));
    Ok(cos.clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
}

/// `Bin(n, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialModel {
    n: u64,
    theta: f64,
}

impl BinomialModel {
    pub fn new(n: u64, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("binomial model needs n >= 1".into()));
        }
        check_probability("theta", theta)?;
        Ok(BinomialModel { n, theta })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k > self.n {
            return Err(Error::InvalidParameter(format!(
                "k = {k} exceeds n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

fn check_open_probability(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

/// `count * ln(p)` with `0 * ln(0) = 0`.
fn xlogy(count: u64, p: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * p.ln()
    }
}

/// Exact `C(n, k)` for `n <= 64`, `None` above that.
pub fn binomial_coefficient_exact(n: u64, k: u64) -> Option<u128> {
    if k > n || n > EXACT_BINOMIAL_LIMIT {
        return None;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // Division is exact at every step: c holds C(n, i + 1) afterwards.
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    Some(c)
}

/// `ln C(n, k)`; exact integers for small `n`, log-gamma otherwise.
pub fn ln_binomial_coefficient(n: u64, k: u64) -> f64 {
    assert!(k <= n, "k must not exceed n");
    match binomial_coefficient_exact(n, k) {
        Some(c) => (c as f64).ln(),
        None => {
            ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
        }
    }
}

fn binomial_coefficient_f64(n: u64, k: u64) -> f64 {
    match binomial_coefficient_exact(n, k) {
        Some(c) => c as f64,
        None => ln_binomial_coefficient(n, k).exp(),
    }
}

/// Natural log of the single-sequence likelihood `θ^k (1-θ)^(n-k)`.
pub fn ln_sequence_likelihood(model: &BinomialModel, k: u64) -> Result<f64> {
    model.check_k(k)?;
    Ok(xlogy(k, model.theta) + xlogy(model.n - k, 1.0 - model.theta))
}

/// `θ^k (1-θ)^(n-k)`: the likelihood of one particular outcome sequence.
pub fn bernoulli_seq_likelihood(model: &BinomialModel, k: u64) -> Result<f64> {
    Ok(ln_sequence_likelihood(model, k)?.exp())
}

/// Natural log of `P(x = k)` under `Bin(n, θ)`.
pub fn ln_binomial_pmf(model: &BinomialModel, k: u64) -> Result<f64> {
    let seq = ln_sequence_likelihood(model, k)?;
    Ok(ln_binomial_coefficient(model.n, k) + seq)
}

/// `P(x = k) = C(n, k) θ^k (1-θ)^(n-k)`.
pub fn binomial_pmf(model: &BinomialModel, k: u64) -> Result<f64> {
    Ok(ln_binomial_pmf(model, k)?.exp())
}

/// `f(k; θ0) / f'(k; θ)`: the binomial pmf at `θ0` over the sequence
/// likelihood at `θ`. Equals `C(n, k)` when `θ = θ0`.
pub fn density_ratio(n: u64, k: u64, theta0: f64, theta: f64) -> Result<f64> {
    check_probability("theta0", theta0)?;
    check_probability("theta", theta)?;
    let model = BinomialModel::new(n, theta)?;
    model.check_k(k)?;
    let denom = ln_sequence_likelihood(&model, k)?;
    if denom == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(format!(
            "division by zero: theta = {theta} assigns zero likelihood to k = {k} of n = {n}"
        )));
    }
    let numer = xlogy(k, theta0) + xlogy(n - k, 1.0 - theta0);
    let shift = if theta0 == theta { 0.0 } else { numer - denom };
    Ok(binomial_coefficient_f64(n, k) * shift.exp())
}

/// The maximum-likelihood estimate `k / n`.
pub fn mle_theta(n: u64, k: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("mle needs n >= 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    Ok(k as f64 / n as f64)
}

/// `H2(p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}

/// Minimum negative log2-likelihood `n · H2(k/n)`, in bits.
pub fn min_nll(n: u64, k: u64) -> Result<f64> {
    let theta = mle_theta(n, k)?;
    Ok(n as f64 * binary_entropy(theta)?)
}

/// Outcome of [`nll_decomposition_check`]; all quantities in bits.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NllCheck {
    /// Sample mean of `-log2 f(x_i; θ)` over `x_i ~ Bin(n, θ0)`.
    pub empirical: f64,
    /// `kl + entropy`.
    pub analytic: f64,
    /// `D_KL(Bin(n, θ0) || Bin(n, θ))`.
    pub kl: f64,
    /// `H(Bin(n, θ0))`.
    pub entropy: f64,
    /// Sample standard deviation of the per-draw NLL.
    pub sample_std: f64,
    pub samples: u64,
}

/// Compares the Monte-Carlo expected NLL under a misspecified `θ` with its
/// exact decomposition into divergence plus entropy.
pub fn nll_decomposition_check(
    n: u64,
    theta0: f64,
    theta: f64,
    samples: u64,
    seed: u64,
) -> Result<NllCheck> {
    check_open_probability("theta0", theta0)?;
    check_open_probability("theta", theta)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let truth = BinomialModel::new(n, theta0)?;
    let model = BinomialModel::new(n, theta)?;

    let nll_bits = |m: &BinomialModel, k| ln_binomial_pmf(m, k).map(|l| -l / std::f64::consts::LN_2);
    let mut table = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        table.push(nll_bits(&model, k)?);
    }

    let mut entropy = 0.0;
    let mut kl = 0.0;
    for k in 0..=n {
        let p0 = binomial_pmf(&truth, k)?;
        if p0 > 0.0 {
            let own = nll_bits(&truth, k)?;
            entropy += p0 * own;
            kl += p0 * (table[k as usize] - own);
        }
    }

    let mut rng = derive_stream(seed, 0);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let x = (0..n).filter(|_| rng.next_uniform() < theta0).count();
        let v = table[x];
        sum += v;
        sum_sq += v * v;
    }
    let m = samples as f64;
    let empirical = sum / m;
    let var = if samples > 1 {
        ((sum_sq - m * empirical * empirical) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };

    Ok(NllCheck {
        empirical,
        analytic: kl + entropy,
        kl,
        entropy,
        sample_std: var.sqrt(),
        samples,
    })
}
