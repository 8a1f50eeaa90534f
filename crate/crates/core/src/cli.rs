//! The `entlab` command line.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on validation failure.
//! Machine-readable output goes to files or stdout as CSV/JSON; warnings and
//! human-readable notes go to stderr. Every output is computed before the
//! first file is written, so a validation failure leaves nothing behind.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::entangler::{encode, exceeds_causality_bound, load_key, project, ReducedCodeword};
use crate::error::{Error, Result};
use crate::labs::{self, CohortSpec};
use crate::lshstats::{self, BinomialModel};
use crate::reconciler::pnm::{self, Image};
use crate::reconciler::{self, BitMessage, CipherMode, CipherVector};
use crate::relativity::{self, BoostParams, Event};
use crate::rng::{derive_stream, mix_seed};

/// Environment variable capping the cohort worker count.
pub const THREADS_ENV: &str = "ENTLAB_THREADS";

/// Stream used for `--random` input vectors.
const RANDOM_INPUT_STREAM: u64 = 0x5EED_F00D;

#[derive(Debug, Parser)]
#[command(name = "entlab", version, about = "Iterative random-projection entanglement toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a vector for t steps; write the key and the reduced codewords.
    Encode(EncodeArgs),
    /// Carry a second vector through the reduced matrices of a key.
    Project(ProjectArgs),
    /// Run a synthetic cohort and write trajectories plus a summary.
    Cohort(CohortArgs),
    /// Write a k = 3 trajectory for plotting.
    Export3d(Export3dArgs),
    /// Encode or decode a message image over an entangled pair.
    Reconcile(ReconcileArgs),
    /// Lorentz factor, boost, interval and dilation/contraction values as JSON.
    Relativity(RelativityArgs),
    /// Binomial likelihood, MLE, minimum NLL and the NLL decomposition as JSON.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV of feature vectors, one per line.
    #[arg(long, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Row of --input to use (0-based).
    #[arg(long, default_value_t = 0)]
    pub row: usize,
    /// Use a seeded standard-normal vector instead of --input.
    #[arg(long)]
    pub random: bool,
    /// Dimension of the --random vector.
    #[arg(long, default_value_t = 512)]
    pub dim: usize,
    /// Seed for the --random vector (defaults to --seed).
    #[arg(long)]
    pub input_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Codeword length per step.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    /// Reduced codeword length.
    #[arg(long, default_value_t = 500)]
    pub k: usize,
    /// Number of steps (the maximum when --until-entangled is given).
    #[arg(long, default_value_t = 15)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop at the first step where the sign patterns of this partner vector
    /// and the input agree or disagree everywhere.
    #[arg(long)]
    pub until_entangled: Option<PathBuf>,
    /// Row of the partner CSV.
    #[arg(long, default_value_t = 0)]
    pub partner_row: usize,
    #[arg(long, default_value = "key.entk")]
    pub key_out: PathBuf,
    #[arg(long, default_value = "codewords.csv")]
    pub codewords_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub key: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Negate the input vector before projecting.
    #[arg(long)]
    pub negate: bool,
    #[arg(long, default_value = "projected.csv")]
    pub codewords_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CohortArgs {
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    /// Feature dimension.
    #[arg(long, default_value_t = 512)]
    pub dim: usize,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub k: usize,
    #[arg(long, default_value_t = 15)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of inter-class pairs; the rest are intra-class.
    #[arg(long, default_value_t = 0.5)]
    pub inter_fraction: f64,
    /// Convergence threshold for the summary.
    #[arg(long, default_value_t = labs::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value = "trajectories.csv")]
    pub csv_out: PathBuf,
    #[arg(long, default_value = "summary.json")]
    pub summary_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Export3dArgs {
    /// CSV whose first two rows are w and w'; omit for seeded 3-D vectors.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "trajectory3d.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bit,
    Gray,
}

#[derive(Debug, Args)]
pub struct ReconcileArgs {
    #[command(subcommand)]
    pub action: ReconcileAction,
}

#[derive(Debug, Subcommand)]
pub enum ReconcileAction {
    /// Encrypt an image with the sender's final reduced codeword.
    Encode(ReconcileEncodeArgs),
    /// Recover an image with the receiver's final reduced codeword.
    Decode(ReconcileDecodeArgs),
}

#[derive(Debug, Args)]
pub struct ReconcileEncodeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Bit)]
    pub mode: ModeArg,
    /// PBM (bit mode) or PGM (gray mode) message image.
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Codeword scale in gray mode.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// All-zero pilot bits prepended in bit mode (0 disables).
    #[arg(long, default_value_t = reconciler::DEFAULT_PILOT_LEN)]
    pub pilot: usize,
    #[arg(long, default_value = "cipher.json")]
    pub cipher_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconcileDecodeArgs {
    #[arg(long)]
    pub cipher: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// The original image, for BER / MSE metrics.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Also run a keyless decode attempt with fresh randomness.
    #[arg(long)]
    pub adversary: bool,
    #[arg(long, default_value_t = 1)]
    pub adversary_seed: u64,
    #[arg(long, default_value = "recovered.pnm")]
    pub image_out: PathBuf,
    #[arg(long, default_value = "metrics.json")]
    pub metrics_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RelativityArgs {
    /// Boost speed.
    #[arg(long, allow_hyphen_values = true)]
    pub v: f64,
    /// Invariant speed.
    #[arg(long, default_value_t = 1.0)]
    pub slimit: f64,
    /// Event as s,x,y.
    #[arg(long, default_value = "1,0.5,0", allow_hyphen_values = true)]
    pub event: String,
    /// Proper time interval to dilate.
    #[arg(long, default_value_t = 1.0)]
    pub ds: f64,
    /// Proper length to contract.
    #[arg(long, default_value_t = 1.0)]
    pub dx: f64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    /// Model success probability.
    #[arg(long)]
    pub theta: f64,
    /// True probability for the density ratio and NLL check (defaults to k/n).
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Monte-Carlo draws for the NLL decomposition check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A file to write once every computation has succeeded.
struct Output {
    path: PathBuf,
    bytes: Vec<u8>,
}

fn out(path: &Path, bytes: impl Into<Vec<u8>>) -> Output {
    Output {
        path: path.to_path_buf(),
        bytes: bytes.into(),
    }
}

fn commit(outputs: Vec<Output>) -> Result<()> {
    for o in outputs {
        fs::write(&o.path, &o.bytes)?;
    }
    Ok(())
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn read_vector(args: &InputArgs, seed: u64) -> Result<Vec<f64>> {
    match (&args.input, args.random) {
        (Some(path), false) => pick_row(&labs::import_features(path)?, args.row, path),
        (None, true) => {
            if args.dim == 0 {
                return Err(invalid("--dim must be at least 1"));
            }
            let s = args.input_seed.unwrap_or(seed);
            Ok(derive_stream(mix_seed(s, RANDOM_INPUT_STREAM), 0)
                .into_gaussians()
                .take(args.dim)
                .collect())
        }
        _ => Err(invalid("give exactly one of --input or --random")),
    }
}

fn pick_row(rows: &[Vec<f64>], row: usize, path: &Path) -> Result<Vec<f64>> {
    rows.get(row).cloned().ok_or_else(|| {
        invalid(format!(
            "{} has {} rows, row {row} requested",
            path.display(),
            rows.len()
        ))
    })
}

fn warn_causality(n: usize, k: usize) {
    if exceeds_causality_bound(n, k) {
        eprintln!(
            "warning: k/n = {}/{} = {:.3} exceeds the causality bound k/n <= 1/4",
            k,
            n,
            k as f64 / n as f64
        );
    }
}

/// `step,c0,...,c{k-1}` rows.
pub fn codewords_csv(codewords: &[ReducedCodeword]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let k = codewords.first().map_or(0, |c| c.dim());
    let mut header = vec!["step".to_string()];
    header.extend((0..k).map(|i| format!("c{i}")));
    w.write_record(&header).expect("in-memory write");
    for c in codewords {
        let mut rec = vec![c.step.to_string()];
        rec.extend(c.values.iter().map(f64::to_string));
        w.write_record(&rec).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn cmd_encode(a: &EncodeArgs) -> Result<()> {
    let w = read_vector(&a.input, a.seed)?;
    if a.k > a.n {
        return Err(invalid(format!("k must not exceed n (k = {}, n = {})", a.k, a.n)));
    }
    warn_causality(a.n, a.k);
    let (codewords, key) = match &a.until_entangled {
        None => {
            let e = encode(&w, a.n, a.k, a.t, a.seed)?;
            (e.codewords, e.key)
        }
        Some(path) => {
            let wp = pick_row(&labs::import_features(path)?, a.partner_row, path)?;
            let pair = reconciler::entangle(&w, &wp, a.n, a.k, a.t, a.seed)?;
            eprintln!(
                "entangled: {} after {} steps",
                pair.entangled, pair.t_used
            );
            (project(&pair.key, &w)?, pair.key)
        }
    };
    eprintln!(
        "encoded {} steps: n = {}, k = {}, input dimension {}",
        key.t(),
        a.n,
        a.k,
        w.len()
    );
    commit(vec![
        out(&a.key_out, key.to_bytes()),
        out(&a.codewords_out, codewords_csv(&codewords)),
    ])
}

fn cmd_project(a: &ProjectArgs) -> Result<()> {
    let key = load_key(&a.key)?;
    let mut w = read_vector(&a.input, key.master_seed())?;
    if a.negate {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let codewords = project(&key, &w)?;
    commit(vec![out(&a.codewords_out, codewords_csv(&codewords))])
}

fn worker_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .map(Some)
            .ok_or_else(|| invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn cmd_cohort(a: &CohortArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.inter_fraction) {
        return Err(invalid("--inter-fraction must lie in [0, 1]"));
    }
    let spec = CohortSpec {
        pair_count: a.pairs,
        ell: a.dim,
        n: a.n,
        k: a.k,
        t_max: a.t,
        inter_fraction: a.inter_fraction,
        intra_fraction: 1.0 - a.inter_fraction,
        master_seed: a.seed,
        epsilon: a.epsilon,
    };
    spec.validate()?;
    warn_causality(a.n, a.k);
    let result = match worker_threads()? {
        Some(t) => labs::run_cohort_with_threads(&spec, t)?,
        None => labs::run_cohort(&spec)?,
    };
    if let Some(last) = result.summary.steps.last() {
        eprintln!(
            "step {}: converged {:.3}, middle band {:.3} over {} pairs",
            last.step, last.converged, last.middle_band, spec.pair_count
        );
    }
    commit(vec![
        out(&a.csv_out, result.to_csv_bytes()),
        out(&a.summary_out, result.summary_json() + "\n"),
    ])
}

fn cmd_export3d(a: &Export3dArgs) -> Result<()> {
    let (w, wp) = match &a.input {
        Some(path) => {
            let rows = labs::import_features(path)?;
            if rows.len() < 2 {
                return Err(invalid(format!("{} needs two rows (w and w')", path.display())));
            }
            (rows[0].clone(), rows[1].clone())
        }
        None => {
            let mut g = derive_stream(mix_seed(a.seed, RANDOM_INPUT_STREAM), 0).into_gaussians();
            let w: Vec<f64> = (&mut g).take(3).collect();
            (w, g.take(3).collect())
        }
    };
    if a.n < 3 {
        return Err(invalid("--n must be at least 3"));
    }
    let rows = labs::export_3d(&w, &wp, a.n, a.t, a.seed)?;
    let mut buf = Vec::new();
    labs::write_3d_csv(&rows, &mut buf)?;
    commit(vec![out(&a.out, buf)])
}

fn final_codeword(key_path: &Path, input: &InputArgs) -> Result<(ReducedCodeword, usize, usize)> {
    let key = load_key(key_path)?;
    let w = read_vector(input, key.master_seed())?;
    let c = project(&key, &w)?.pop().expect("keys have at least one step");
    Ok((c, key.t(), key.k()))
}

fn cmd_reconcile_encode(a: &ReconcileEncodeArgs) -> Result<()> {
    let image = pnm::load_image(&a.image)?;
    let (c, _, k) = final_codeword(&a.key, &a.input)?;
    let y = match (a.mode, image) {
        (ModeArg::Bit, Image::Bit(m)) => {
            let (w, h) = (m.width(), m.height());
            let frame = if a.pilot == 0 {
                m
            } else {
                if a.pilot < reconciler::MIN_PILOT_LEN {
                    return Err(invalid(format!(
                        "--pilot must be 0 or at least {}",
                        reconciler::MIN_PILOT_LEN
                    )));
                }
                reconciler::with_pilot(&m, a.pilot)?
            };
            if frame.len() != k {
                return Err(invalid(format!(
                    "message frame has {} bits (pilot {} + {w}x{h}) but the key has k = {k}",
                    frame.len(),
                    a.pilot
                )));
            }
            let mut y = reconciler::encode_bits(&frame, &c)?;
            y.width = w;
            y.height = h;
            y.pilot = a.pilot;
            y
        }
        (ModeArg::Gray, Image::Gray(m)) => {
            if m.len() != k {
                return Err(invalid(format!(
                    "image has {} pixels but the key has k = {k}",
                    m.len()
                )));
            }
            reconciler::encode_gray(&m, &c, a.alpha)?
        }
        (ModeArg::Bit, Image::Gray(_)) => return Err(invalid("bit mode needs a PBM image")),
        (ModeArg::Gray, Image::Bit(_)) => return Err(invalid("gray mode needs a PGM image")),
    };
    commit(vec![out(&a.cipher_out, y.to_json() + "\n")])
}

#[derive(Debug, Serialize)]
struct DecodeMetrics {
    mode: CipherMode,
    t_used: usize,
    orientation: i8,
    #[serde(skip_serializing_if = "Option::is_none")]
    ber: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    adversary_ber: Option<f64>,
}

fn cmd_reconcile_decode(a: &ReconcileDecodeArgs) -> Result<()> {
    let y = CipherVector::from_json(&fs::read_to_string(&a.cipher)?)?;
    let key = load_key(&a.key)?;
    if key.k() != y.len() {
        return Err(invalid(format!(
            "cipher has {} values but the key has k = {}",
            y.len(),
            key.k()
        )));
    }
    let (cp, t_used, _) = final_codeword(&a.key, &a.input)?;
    let truth = a.truth.as_ref().map(pnm::load_image).transpose()?;

    let (image_bytes, metrics) = match y.mode {
        CipherMode::Bit => {
            let raw = reconciler::decode_bits(&y, &cp)?;
            let truth = match truth {
                Some(Image::Bit(m)) => Some(m),
                Some(Image::Gray(_)) => return Err(invalid("bit-mode truth must be a PBM image")),
                None => None,
            };
            let (payload, orientation) = if y.pilot > 0 {
                let d = reconciler::disambiguate(&raw, y.pilot)?;
                let o = if d.flipped { -1 } else { 1 };
                (d.payload_image(y.width, y.height)?, o)
            } else {
                let img = BitMessage::new(raw.bits().clone(), y.width, y.height)?;
                match &truth {
                    Some(t) if lshstats::hamming(img.bits(), t.bits())? * 2 > t.len() => {
                        (img.complement(), -1)
                    }
                    _ => (img, 1),
                }
            };
            let ber = truth
                .as_ref()
                .map(|t| {
                    Ok::<_, Error>(lshstats::hamming(payload.bits(), t.bits())? as f64 / t.len() as f64)
                })
                .transpose()?;
            let adversary_ber = if a.adversary {
                let frame = match &truth {
                    Some(t) => Some(if y.pilot > 0 {
                        reconciler::with_pilot(t, y.pilot)?
                    } else {
                        t.clone()
                    }),
                    None => None,
                };
                let frame = frame.ok_or_else(|| invalid("--adversary needs --truth"))?;
                Some(reconciler::adversary_attempt(
                    &y,
                    key.n(),
                    key.k(),
                    key.t(),
                    a.adversary_seed,
                    &frame,
                )?)
            } else {
                None
            };
            (
                pnm::encode_pbm(&payload),
                DecodeMetrics {
                    mode: CipherMode::Bit,
                    t_used,
                    orientation,
                    ber,
                    mse: None,
                    adversary_ber,
                },
            )
        }
        CipherMode::Gray => {
            if a.adversary {
                return Err(invalid("--adversary applies to bit mode"));
            }
            let alpha = y.alpha.expect("validated gray cipher");
            let dec = reconciler::decode_gray(&y, &cp, alpha)?;
            let mse = match truth {
                Some(Image::Gray(t)) => Some(dec.mse(&t)?),
                Some(Image::Bit(_)) => return Err(invalid("gray-mode truth must be a PGM image")),
                None => None,
            };
            (
                pnm::encode_pgm(&dec.to_message(), 255)?,
                DecodeMetrics {
                    mode: CipherMode::Gray,
                    t_used,
                    orientation: dec.orientation,
                    ber: None,
                    mse,
                    adversary_ber: None,
                },
            )
        }
    };
    let metrics = serde_json::to_string_pretty(&metrics).expect("metrics serialize") + "\n";
    commit(vec![out(&a.image_out, image_bytes), out(&a.metrics_out, metrics)])
}

fn parse_event(text: &str) -> Result<Event> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| invalid(format!("--event must be s,x,y; got {text:?}")))?;
    match parts.as_slice() {
        [s, x, y] if parts.iter().all(|v| v.is_finite()) => Ok(Event::new(*s, *x, *y)),
        _ => Err(invalid(format!("--event must be three finite numbers s,x,y; got {text:?}"))),
    }
}

fn cmd_relativity(a: &RelativityArgs) -> Result<String> {
    let p = BoostParams::new(a.slimit, a.v)?;
    let e = parse_event(&a.event)?;
    let boosted = relativity::lorentz_boost(&e, &p);
    let before = relativity::interval(&e, a.slimit);
    let after = relativity::interval(&boosted, a.slimit);
    let report = json!({
        "v_limit": a.slimit,
        "v_boost": a.v,
        "gamma": relativity::gamma(&p),
        "event": e,
        "boosted": boosted,
        "interval": before,
        "boosted_interval": after,
        "interval_kind": relativity::classify(before, 1e-9),
        "interval_residual": relativity::check_interval_invariance(&e, &p),
        "time_dilation": { "ds_prime": a.ds, "ds": relativity::time_dilation(a.ds, &p) },
        "length_contraction": { "dx_prime": a.dx, "dx": relativity::length_contraction(a.dx, &p) },
    });
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn cmd_stats(a: &StatsArgs) -> Result<String> {
    let model = BinomialModel::new(a.n, a.theta)?;
    let mle = lshstats::mle_theta(a.n, a.k)?;
    let theta0 = a.theta0.unwrap_or(mle);
    let pmf_table = (0..=a.n)
        .map(|k| lshstats::binomial_pmf(&model, k))
        .collect::<Result<Vec<f64>>>()?;
    // The decomposition needs open probabilities; report null at the edges.
    let open = |p: f64| p > 0.0 && p < 1.0;
    let nll_check = if open(theta0) && open(a.theta) {
        Some(lshstats::nll_decomposition_check(
            a.n, theta0, a.theta, a.samples, a.seed,
        )?)
    } else {
        None
    };
    let density_ratio = lshstats::density_ratio(a.n, a.k, theta0, a.theta).ok();
    let report = json!({
        "n": a.n,
        "k": a.k,
        "theta": a.theta,
        "theta0": theta0,
        "pmf": lshstats::binomial_pmf(&model, a.k)?,
        "sequence_likelihood": lshstats::bernoulli_seq_likelihood(&model, a.k)?,
        "density_ratio": density_ratio,
        "mle": mle,
        "min_nll": lshstats::min_nll(a.n, a.k)?,
        "binary_entropy_mle": lshstats::binary_entropy(mle)?,
        "pmf_table": pmf_table,
        "nll_check": nll_check,
    });
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Project(a) => cmd_project(a),
        Command::Cohort(a) => cmd_cohort(a),
        Command::Export3d(a) => cmd_export3d(a),
        Command::Reconcile(r) => match &r.action {
            ReconcileAction::Encode(a) => cmd_reconcile_encode(a),
            ReconcileAction::Decode(a) => cmd_reconcile_decode(a),
        },
        Command::Relativity(a) => cmd_relativity(a).map(|s| println!("{s}")),
        Command::Stats(a) => cmd_stats(a).map(|s| println!("{s}")),
    }
}

/// Maps a result onto the exit-code contract.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) if e.is_io() => 1,
        Err(_) => 2,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}
