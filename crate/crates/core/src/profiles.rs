//! Depth profiles: every length measure over a ladder of prefix lengths,
//! CSV output, and the paired profiles of the slow-growth experiment.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexity::{density_curves, dk_fst, dk_pb_upper, fst_min_witness, PbPoolEntry, MAX_FST_K};
use crate::constructions::{
    build_t_powprint, build_t_printreverse, witness_remark1_prefix, witness_thm4_prefix, ConstructionError,
    WitnessString,
};
use crate::fst::{il_check, FstMachine};
use crate::lz78::lz78_lens;
use crate::pebble::{pb_run_with, PebbleMachine, RunOptions};
use crate::pushdown::{pdc_output_len, PdcMachine};
use crate::sequences::{FstImage, Remark1Sequence};
use crate::words::{block_frequency_deviation_of, BitStreamSource, BitWord};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("prefix lengths must be ascending")]
    NotAscending,
    #[error("witness for n = {n} does not reproduce the sequence prefix")]
    WitnessMismatch { n: usize },
    #[error("witness construction failed: {0}")]
    Construction(#[from] ConstructionError),
    #[error("pushdown run failed at n = {n}: {msg}")]
    Pushdown { n: usize, msg: String },
    #[error("transform is not information lossless up to length {0}")]
    NotLossless(usize),
    #[error("transform can stall forever without output")]
    Stalls,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Other(String),
}

/// One prefix length of a depth profile. Absent measures are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthProfileRow {
    pub n: usize,
    pub len_identity: usize,
    pub len_lz78_plain: usize,
    pub len_lz78_gamma: usize,
    pub len_cprime: Option<usize>,
    pub len_updc_best: Option<usize>,
    pub dk_fst: Option<usize>,
    pub pb_ub: Option<usize>,
    pub gap_fs_pb: Option<f64>,
    pub normality_dev: Option<f64>,
}

pub const CSV_HEADER: [&str; 10] = [
    "n",
    "len_identity",
    "len_lz78_plain",
    "len_lz78_gamma",
    "len_cprime",
    "len_updc_best",
    "dk_fst",
    "pb_ub",
    "gap_fs_pb",
    "normality_dev",
];

pub type WitnessFn = Arc<dyn Fn(usize) -> Result<WitnessString, ConstructionError> + Send + Sync>;

/// How the pebble side of a row is bounded.
#[derive(Clone, Default)]
pub enum PbMeasure {
    #[default]
    Absent,
    /// A witness builder; when a machine is given, witnesses are also run on
    /// it for `n <= verify_up_to`.
    Witness { machine: Option<Arc<PebbleMachine>>, build: WitnessFn, verify_up_to: usize },
    /// Exhaustive search over short inputs of each pool machine.
    Pool { entries: Vec<PbPoolEntry>, cap: usize },
}

impl std::fmt::Debug for PbMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PbMeasure::Absent => f.write_str("Absent"),
            PbMeasure::Witness { verify_up_to, .. } => write!(f, "Witness(verify_up_to={verify_up_to})"),
            PbMeasure::Pool { entries, cap } => write!(f, "Pool({} machines, cap={cap})", entries.len()),
        }
    }
}

/// Default verification limit for witness-based pebble bounds.
pub const DEFAULT_VERIFY_UP_TO: usize = 1 << 15;

/// Witness lengths for the flag sequence. The machine itself is only
/// materialized for `k <= 5`; larger `k` rely on the builder alone.
pub fn thm4_pb_measure(k: usize, v: usize) -> Result<PbMeasure, ConstructionError> {
    crate::sequences::Thm4Params::new(k, v)?;
    let machine = build_t_printreverse(k).ok().map(Arc::new);
    let build: WitnessFn = Arc::new(move |n| witness_thm4_prefix(k, v, n));
    Ok(PbMeasure::Witness { machine, build, verify_up_to: DEFAULT_VERIFY_UP_TO })
}

pub fn remark1_pb_measure(seq: Arc<Remark1Sequence>) -> PbMeasure {
    let machine = Some(Arc::new(build_t_powprint()));
    let build: WitnessFn = Arc::new(move |n| witness_remark1_prefix(&seq, n));
    PbMeasure::Witness { machine, build, verify_up_to: DEFAULT_VERIFY_UP_TO }
}

/// Which measures to compute.
#[derive(Debug, Clone)]
pub struct MeasureConfig {
    /// Exact `D^k` over FSTs, computed only for `n <= dk_max_n`.
    pub dk_k: Option<usize>,
    pub dk_max_n: usize,
    /// FST decompressors for the finite-state side when `D^k` is not
    /// computed; the identity is always included.
    pub fs_pool: Vec<FstMachine>,
    pub cprime: Option<Arc<PdcMachine>>,
    pub updc_pool: Vec<Arc<PdcMachine>>,
    pub pb: PbMeasure,
    /// Block length for the normality deviation.
    pub normality_block: Option<usize>,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            dk_k: None,
            dk_max_n: 16,
            fs_pool: Vec::new(),
            cprime: None,
            updc_pool: Vec::new(),
            pb: PbMeasure::Absent,
            normality_block: None,
        }
    }
}

fn pb_bound(pb: &PbMeasure, x: &BitWord) -> Result<Option<usize>, ProfileError> {
    let n = x.len();
    match pb {
        PbMeasure::Absent => Ok(None),
        PbMeasure::Witness { machine, build, verify_up_to } => {
            let w = build(n)?;
            if w.expected_output != *x {
                return Err(ProfileError::WitnessMismatch { n });
            }
            if let Some(machine) = machine.as_deref().filter(|_| n <= *verify_up_to) {
                let ok = matches!(pb_run_with(machine, &w.input, RunOptions::default()), Ok((o, _)) if o == *x);
                if !ok {
                    return Err(ProfileError::WitnessMismatch { n });
                }
            }
            Ok(Some(w.input.len()))
        }
        PbMeasure::Pool { entries, cap } => Ok(dk_pb_upper(x, entries, *cap).value),
    }
}

/// Finite-state side of the gap: exact `D^k` when configured, else the
/// shortest input found for any pool decompressor.
fn fs_measure(cfg: &MeasureConfig, x: &[bool], dk: Option<usize>) -> usize {
    if let Some(d) = dk {
        return d;
    }
    cfg.fs_pool
        .iter()
        .filter_map(|t| fst_min_witness(t, x).map(|y| y.len()))
        .fold(x.len(), usize::min)
}

/// One row for the prefix `x`.
pub fn profile_row(x: &BitWord, cfg: &MeasureConfig) -> Result<DepthProfileRow, ProfileError> {
    let n = x.len();
    let (plain, gamma) = lz78_lens(x);
    let len_cprime = match &cfg.cprime {
        Some(c) => Some(pdc_output_len(c, x).map_err(|e| ProfileError::Pushdown { n, msg: e.to_string() })?),
        None => None,
    };
    let len_updc_best = cfg.updc_pool.iter().filter_map(|c| pdc_output_len(c, x).ok()).min();
    let dk = match cfg.dk_k {
        Some(k) if k <= MAX_FST_K && n <= cfg.dk_max_n => dk_fst(x, k).ok().and_then(|r| r.value),
        _ => None,
    };
    let pb_ub = pb_bound(&cfg.pb, x)?;
    let fs = fs_measure(cfg, x, dk);
    let gap_fs_pb = match pb_ub {
        Some(p) if n > 0 => Some((fs as f64 - p as f64) / n as f64),
        _ => None,
    };
    let normality_dev = match cfg.normality_block {
        Some(b) if (1..=16).contains(&b) && n >= 1 << b => Some(block_frequency_deviation_of(x, b)),
        _ => None,
    };
    Ok(DepthProfileRow {
        n,
        len_identity: n,
        len_lz78_plain: plain,
        len_lz78_gamma: gamma,
        len_cprime,
        len_updc_best,
        dk_fst: dk,
        pb_ub,
        gap_fs_pb,
        normality_dev,
    })
}

/// One row per requested prefix length; rows are computed concurrently.
pub fn profile(
    source: &dyn BitStreamSource,
    n_list: &[usize],
    cfg: &MeasureConfig,
) -> Result<Vec<DepthProfileRow>, ProfileError> {
    if n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(ProfileError::NotAscending);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| s.spawn(move || profile_row(&source.prefix(n), cfg)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("profile worker panicked")).collect()
    })
}

pub fn emit_csv(rows: &[DepthProfileRow]) -> Result<String, ProfileError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| ProfileError::Other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ProfileError::Other(e.to_string()))
}

pub fn parse_csv(text: &str) -> Result<Vec<DepthProfileRow>, ProfileError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(ProfileError::from)).collect()
}

/// Smallest gap over the last three rows that carry one.
pub fn min_tail_gap(rows: &[DepthProfileRow]) -> Option<f64> {
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap_fs_pb).collect();
    match gaps.len() {
        0 => None,
        1 => Some(gaps[0]),
        _ => density_curves(&gaps, 3).ok().map(|(lo, _)| lo),
    }
}

/// Paired profiles of `S` and of its image `M(S)`.
#[derive(Debug, Clone)]
pub struct SglReport {
    pub source: Vec<DepthProfileRow>,
    pub image: Vec<DepthProfileRow>,
    pub source_gap: Option<f64>,
    pub image_gap: Option<f64>,
    /// `1 / max output stall` of the transform.
    pub beta: f64,
}

impl SglReport {
    /// `gap(M(S)) > 0` implies `gap(S) >= β·gap(M(S))`.
    pub fn consistent(&self) -> bool {
        match (self.source_gap, self.image_gap) {
            (Some(s), Some(i)) if i > 0.0 => s >= self.beta * i - 1e-12,
            _ => true,
        }
    }
}

/// Profiles `S` at `n_list` and `M(S)` at the image lengths `|M(S ↾ m)|`
/// for the least `m` reaching each `n`. The image's pebble bound is the
/// source witness for `S ↾ m`, run through the pebble machine followed by
/// `M`; the image's finite-state side also tries `M` as a decompressor.
pub fn sgl_experiment<S: BitStreamSource + Clone>(
    source: S,
    m: &FstMachine,
    n_list: &[usize],
    cfg: &MeasureConfig,
) -> Result<SglReport, ProfileError> {
    const IL_LEN: usize = 12;
    if !il_check(m, IL_LEN).map_err(|e| ProfileError::Other(e.to_string()))?.is_injective() {
        return Err(ProfileError::NotLossless(IL_LEN));
    }
    let stall = m.max_output_stall().ok_or(ProfileError::Stalls)?;
    let beta = 1.0 / (stall + 1) as f64;
    let image = FstImage::new(source.clone(), m.clone()).map_err(|_| ProfileError::Stalls)?;
    let src_rows = profile(&source, n_list, cfg)?;

    let mut img_cfg = cfg.clone();
    img_cfg.fs_pool.push(m.clone());
    img_cfg.pb = PbMeasure::Absent;
    let pairs: Vec<(usize, BitWord)> = n_list.iter().map(|&n| image.source_len_for(n)).collect();
    let img_rows = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|(src_len, y)| {
                let img_cfg = &img_cfg;
                let source = &source;
                s.spawn(move || -> Result<DepthProfileRow, ProfileError> {
                    let mut row = profile_row(y, img_cfg)?;
                    let pb = pb_bound(&cfg.pb, &source.prefix(*src_len))?;
                    row.pb_ub = pb;
                    let fs = fs_measure(img_cfg, y, row.dk_fst);
                    row.gap_fs_pb = pb.map(|p| (fs as f64 - p as f64) / y.len().max(1) as f64);
                    Ok(row)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("profile worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SglReport {
        source_gap: min_tail_gap(&src_rows),
        image_gap: min_tail_gap(&img_rows),
        source: src_rows,
        image: img_rows,
        beta,
    })
}
