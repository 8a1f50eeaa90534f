//! Convergence experiments over cohorts of feature pairs.
//!
//! Pairs are synthetic: inter-class pairs are two independent Gaussian
//! vectors (nearly orthogonal in high dimension), intra-class pairs are
//! rotated copies at an angle below 45°. Each pair gets its own seed, mixed
//! from the cohort seed and the pair id, so the cohort result does not depend
//! on how pairs are scheduled across threads.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::entangler::{PairEncoder, StepMetrics, Trajectory};
use crate::error::{Error, Result};
use crate::lshstats::norm;
use crate::rng::{derive_stream, dot, mix_seed};

/// Header of the per-step trajectory CSV.
pub const TRAJECTORY_HEADER: [&str; 7] = [
    "pair_id",
    "step",
    "angle_theta",
    "hamming_k",
    "hamming_n",
    "euclid_sq",
    "euclid_sq_flipped",
];

/// Header of the 3-D export CSV.
pub const EXPORT_3D_HEADER: [&str; 7] = ["step", "cx", "cy", "cz", "cpx", "cpy", "cpz"];

pub const DEFAULT_EPSILON: f64 = 0.05;

/// Stream index for feature synthesis, disjoint from matrix steps.
const FEATURE_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    Inter,
    Intra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    pub pair_count: usize,
    pub ell: usize,
    pub n: usize,
    pub k: usize,
    pub t_max: usize,
    pub inter_fraction: f64,
    pub intra_fraction: f64,
    pub master_seed: u64,
    /// Convergence threshold used in the summary.
    pub epsilon: f64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        CohortSpec {
            pair_count: 100,
            ell: 512,
            n: 2000,
            k: 500,
            t_max: 15,
            inter_fraction: 0.5,
            intra_fraction: 0.5,
            master_seed: 0,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl CohortSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(0.0..=1.0).contains(&self.inter_fraction) || !(0.0..=1.0).contains(&self.intra_fraction) {
            return bad("class fractions must lie in [0, 1]".into());
        }
        if (self.inter_fraction + self.intra_fraction - 1.0).abs() > 1e-9 {
            return bad(format!(
                "class fractions sum to {}, not 1",
                self.inter_fraction + self.intra_fraction
            ));
        }
        if self.t_max == 0 {
            return bad("t_max must be at least 1".into());
        }
        if self.k == 0 || self.k > self.n {
            return bad(format!("k must not exceed n (k = {}, n = {})", self.k, self.n));
        }
        if self.ell == 0 {
            return bad("ell must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return bad(format!("epsilon must lie in (0, 0.5), got {}", self.epsilon));
        }
        if self.intra_count() > 0 && self.ell < 2 {
            return bad("intra-class pairs need ell >= 2".into());
        }
        Ok(())
    }

    pub fn inter_count(&self) -> usize {
        (self.pair_count as f64 * self.inter_fraction).round() as usize
    }

    pub fn intra_count(&self) -> usize {
        self.pair_count - self.inter_count().min(self.pair_count)
    }

    /// Pairs `0..inter_count()` are inter-class, the rest intra-class.
    pub fn class_of(&self, pair_id: usize) -> PairClass {
        if pair_id < self.inter_count() {
            PairClass::Inter
        } else {
            PairClass::Intra
        }
    }

    pub fn pair_seed(&self, pair_id: usize) -> u64 {
        mix_seed(self.master_seed, pair_id as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePair {
    pub id: usize,
    pub class: PairClass,
    pub w: Vec<f64>,
    pub wp: Vec<f64>,
}

fn synth_pair(spec: &CohortSpec, id: usize) -> Result<FeaturePair> {
    let class = spec.class_of(id);
    let mut gauss = derive_stream(spec.pair_seed(id), FEATURE_STREAM).into_gaussians();
    let w: Vec<f64> = (&mut gauss).take(spec.ell).collect();
    let u: Vec<f64> = (&mut gauss).take(spec.ell).collect();
    let wp = match class {
        PairClass::Inter => u,
        PairClass::Intra => {
            let w_len = norm(&w);
            let w_hat: Vec<f64> = w.iter().map(|x| x / w_len).collect();
            let along = dot(&u, &w_hat);
            let ortho: Vec<f64> = u.iter().zip(&w_hat).map(|(a, b)| a - along * b).collect();
            let o_len = norm(&ortho);
            if o_len == 0.0 {
                return Err(Error::Degenerate(format!("pair {id}: no orthogonal direction")));
            }
            let phi = gauss.uniforms().next_uniform() * std::f64::consts::FRAC_PI_4;
            let (s, c) = phi.sin_cos();
            w_hat
                .iter()
                .zip(&ortho)
                .map(|(a, b)| c * a + s * b / o_len)
                .collect()
        }
    };
    Ok(FeaturePair { id, class, w, wp })
}

/// Deterministic synthetic pairs for `spec`.
pub fn synth_pairs(spec: &CohortSpec) -> Result<Vec<FeaturePair>> {
    spec.validate()?;
    (0..spec.pair_count).map(|id| synth_pair(spec, id)).collect()
}

/// Entangles `w` with `wp` for `t_max` steps and records per-step metrics.
pub fn run_pair(w: &[f64], wp: &[f64], n: usize, k: usize, t_max: usize, seed: u64) -> Result<Trajectory> {
    let mut pair = PairEncoder::new(w, wp, n, k, seed)?;
    (0..t_max)
        .map(|_| {
            let (c, cp) = pair.advance()?;
            StepMetrics::measure(&c, &cp, n)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub pair_id: usize,
    #[serde(flatten)]
    pub metrics: StepMetrics,
}

/// Converged fractions at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSummary {
    pub step: usize,
    /// `angle_theta < ε` or `> 1 - ε`.
    pub angle_converged: f64,
    /// `min(euclid_sq, 4 - euclid_sq) < ε`.
    pub distance_converged: f64,
    /// Both of the above.
    pub converged: f64,
    /// `angle_theta` in `[0.1, 0.9]`.
    pub middle_band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortSummary {
    pub pair_count: usize,
    pub epsilon: f64,
    pub steps: Vec<StepSummary>,
}

impl CohortSummary {
    pub fn at_step(&self, step: usize) -> Option<&StepSummary> {
        self.steps.iter().find(|s| s.step == step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohortResult {
    /// Sorted by `(pair_id, step)`.
    pub rows: Vec<TrajectoryRow>,
    pub summary: CohortSummary,
}

pub fn angle_converged(m: &StepMetrics, epsilon: f64) -> bool {
    m.angle_theta < epsilon || m.angle_theta > 1.0 - epsilon
}

pub fn distance_converged(m: &StepMetrics, epsilon: f64) -> bool {
    m.euclid_sq.min(4.0 - m.euclid_sq) < epsilon
}

/// Per-step converged fractions over `rows`.
pub fn summarize(rows: &[TrajectoryRow], pair_count: usize, t_max: usize, epsilon: f64) -> CohortSummary {
    let mut counts = vec![[0usize; 4]; t_max];
    for row in rows {
        let m = &row.metrics;
        let c = &mut counts[m.step - 1];
        let a = angle_converged(m, epsilon);
        let d = distance_converged(m, epsilon);
        c[0] += a as usize;
        c[1] += d as usize;
        c[2] += (a && d) as usize;
        c[3] += (0.1..=0.9).contains(&m.angle_theta) as usize;
    }
    let frac = |x: usize| if pair_count == 0 { 0.0 } else { x as f64 / pair_count as f64 };
    CohortSummary {
        pair_count,
        epsilon,
        steps: counts
            .iter()
            .enumerate()
            .map(|(i, c)| StepSummary {
                step: i + 1,
                angle_converged: frac(c[0]),
                distance_converged: frac(c[1]),
                converged: frac(c[2]),
                middle_band: frac(c[3]),
            })
            .collect(),
    }
}

fn cohort_rows(spec: &CohortSpec) -> Result<Vec<TrajectoryRow>> {
    let per_pair: Vec<Vec<TrajectoryRow>> = (0..spec.pair_count)
        .into_par_iter()
        .map(|id| {
            let pair = synth_pair(spec, id)?;
            let traj = run_pair(&pair.w, &pair.wp, spec.n, spec.k, spec.t_max, spec.pair_seed(id))?;
            Ok(traj
                .into_iter()
                .map(|metrics| TrajectoryRow { pair_id: id, metrics })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

/// Runs every pair of the cohort on the global rayon pool.
pub fn run_cohort(spec: &CohortSpec) -> Result<CohortResult> {
    spec.validate()?;
    let rows = cohort_rows(spec)?;
    let summary = summarize(&rows, spec.pair_count, spec.t_max, spec.epsilon);
    Ok(CohortResult { rows, summary })
}

/// Like [`run_cohort`], on a dedicated pool of `threads` workers.
pub fn run_cohort_with_threads(spec: &CohortSpec, threads: usize) -> Result<CohortResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| run_cohort(spec))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::format("CSV", format!("{other:?}")),
    }
}

impl CohortResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(TRAJECTORY_HEADER).map_err(csv_error)?;
        for row in &self.rows {
            let m = &row.metrics;
            out.write_record([
                row.pair_id.to_string(),
                m.step.to_string(),
                m.angle_theta.to_string(),
                m.hamming_k.to_string(),
                m.hamming_n.to_string(),
                m.euclid_sq.to_string(),
                m.euclid_sq_flipped.to_string(),
            ])
            .map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        buf
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

/// One step of a `k = 3` trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Row3d {
    pub step: usize,
    pub c: [f64; 3],
    pub cp: [f64; 3],
}

impl Row3d {
    pub fn min_euclid_sq(&self) -> f64 {
        let (mut minus, mut plus) = (0.0, 0.0);
        for i in 0..3 {
            minus += (self.c[i] - self.cp[i]).powi(2);
            plus += (self.c[i] + self.cp[i]).powi(2);
        }
        minus.min(plus)
    }
}

/// Unit 3-vectors `ĉ_t`, `ĉ'_t` for every step, for plotting.
pub fn export_3d(w: &[f64], wp: &[f64], n: usize, t_max: usize, seed: u64) -> Result<Vec<Row3d>> {
    let mut pair = PairEncoder::new(w, wp, n, 3, seed)?;
    (0..t_max)
        .map(|_| {
            let (c, cp) = pair.advance()?;
            Ok(Row3d {
                step: c.step,
                c: [c.values[0], c.values[1], c.values[2]],
                cp: [cp.values[0], cp.values[1], cp.values[2]],
            })
        })
        .collect()
}

pub fn write_3d_csv<W: Write>(rows: &[Row3d], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(EXPORT_3D_HEADER).map_err(csv_error)?;
    for r in rows {
        let mut rec = vec![r.step.to_string()];
        rec.extend(r.c.iter().chain(&r.cp).map(f64::to_string));
        out.write_record(&rec).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads feature vectors, one per CSV line, all of equal width.
pub fn read_features<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let row = rec
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    Error::format(
                        "feature CSV",
                        format!("line {line}, column {}: not a finite number: {field:?}", col + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = out.first() {
            if row.len() != first.len() {
                return Err(Error::format(
                    "feature CSV",
                    format!("line {line} has {} fields, expected {}", row.len(), first.len()),
                ));
            }
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::format("feature CSV", "no vectors"));
    }
    Ok(out)
}

pub fn import_features(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    read_features(File::open(path)?)
}

pub fn write_features<W: Write>(vectors: &[Vec<f64>], writer: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for v in vectors {
        out.write_record(v.iter().map(f64::to_string)).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_features(vectors: &[Vec<f64>], path: impl AsRef<Path>) -> Result<()> {
    write_features(vectors, File::create(path)?)
}
