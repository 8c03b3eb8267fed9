//! Embedding matrices, kernels, and the calculators around them.
//!
//! An embedding matrix has one row per dataset graph and one column per bank
//! pattern. Integer modes (`hom`, `truncated`) carry exact counts and are the
//! authority for completeness claims; real modes (`density`, `log1p`,
//! `standardized`) feed learning pipelines. Gram matrices are plain dot
//! products of rows, which in density mode equals the averaged kernel
//! `(1/ℓ) Σ t(F_i, G) t(F_i, G')`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{make_nice, validate, DecompositionError, NiceTreeDecomposition};
use crate::graph::Graph;
use crate::hom::{hom_dp, log1p_count, ratio_to_f64, HomError};
use crate::sampler::PatternBank;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Columns are standardized against this floor; anything below collapses to
/// an all-zero column instead of dividing by noise.
pub const STD_FLOOR: f64 = 1e-12;

/// Componentwise tolerance for row comparisons in real modes.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Largest integer every f64 represents exactly; Gram entries above this
/// refuse to convert.
const F64_EXACT_MAX: u64 = 1 << 53;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("bank has no patterns")]
    EmptyBank,
    #[error("graph {index} has no vertices")]
    EmptyGraph { index: usize },
    #[error("pattern {ordinal} has no valid decomposition: {source}")]
    PatternDecomposition {
        ordinal: usize,
        source: DecompositionError,
    },
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("{0} requires a real-valued embedding mode")]
    NotRealMode(&'static str),
    #[error("{0} requires an integer embedding mode")]
    NotIntegerMode(&'static str),
    #[error("min kernel requires truncated-mode embeddings")]
    NotTruncatedMode,
    #[error(
        "gram entry at ({row}, {col}) exceeds the exact f64 integer range; \
         use density or log1p mode"
    )]
    GramOverflow { row: usize, col: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("embedding csv line {line}: {message}")]
    CsvParse { line: usize, message: String },
}

/// Column semantics of an embedding matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedMode {
    /// Raw counts hom(F, G).
    Hom,
    /// t(F, G) / sqrt(ℓ): the averaged-kernel feature map.
    Density,
    /// Counts zeroed whenever v(F) > v(G); rows of the min kernel.
    Truncated,
    /// ln(1 + hom(F, G)).
    Log1p,
    /// Counts standardized to mean 0 / std 1 per column over the given graphs.
    Standardized,
}

impl EmbedMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EmbedMode::Hom => "hom",
            EmbedMode::Density => "density",
            EmbedMode::Truncated => "truncated",
            EmbedMode::Log1p => "log1p",
            EmbedMode::Standardized => "standardized",
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, EmbedMode::Hom | EmbedMode::Truncated)
    }
}

impl std::str::FromStr for EmbedMode {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hom" => Ok(EmbedMode::Hom),
            "density" => Ok(EmbedMode::Density),
            "truncated" => Ok(EmbedMode::Truncated),
            "log1p" => Ok(EmbedMode::Log1p),
            "standardized" => Ok(EmbedMode::Standardized),
            other => Err(EmbedError::BadParameter(format!(
                "unknown embedding mode `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum MatrixValues {
    Int(Vec<Vec<BigUint>>),
    Real(Vec<Vec<f64>>),
}

/// Rows = dataset graphs, columns = bank patterns.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix {
    pub graph_ids: Vec<String>,
    pub pattern_ordinals: Vec<usize>,
    values: MatrixValues,
    pub mode: EmbedMode,
}

impl EmbeddingMatrix {
    pub fn graph_count(&self) -> usize {
        self.graph_ids.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.pattern_ordinals.len()
    }

    pub fn int_rows(&self) -> Option<&[Vec<BigUint>]> {
        match &self.values {
            MatrixValues::Int(rows) => Some(rows),
            MatrixValues::Real(_) => None,
        }
    }

    pub fn real_rows(&self) -> Option<&[Vec<f64>]> {
        match &self.values {
            MatrixValues::Real(rows) => Some(rows),
            MatrixValues::Int(_) => None,
        }
    }

    /// Whether rows `i` and `j` differ: exact comparison in integer modes,
    /// componentwise `tolerance` in real modes.
    pub fn rows_distinct(&self, i: usize, j: usize, tolerance: f64) -> bool {
        match &self.values {
            MatrixValues::Int(rows) => rows[i] != rows[j],
            MatrixValues::Real(rows) => rows[i]
                .iter()
                .zip(&rows[j])
                .any(|(a, b)| (a - b).abs() > tolerance),
        }
    }

    /// CSV with header `graph_id,p0,p1,...`; integer modes emit decimal
    /// integers of arbitrary length, real modes 17-significant-digit floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph_id");
        for ordinal in &self.pattern_ordinals {
            out.push_str(&format!(",p{ordinal}"));
        }
        out.push('\n');
        for (i, id) in self.graph_ids.iter().enumerate() {
            out.push_str(id);
            match &self.values {
                MatrixValues::Int(rows) => {
                    for cell in &rows[i] {
                        out.push_str(&format!(",{cell}"));
                    }
                }
                MatrixValues::Real(rows) => {
                    for cell in &rows[i] {
                        out.push_str(&format!(",{cell:.16e}"));
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses an embedding CSV. Cell format decides the container: all-digit
    /// cells load as exact integers (reported as truncated mode), anything
    /// else as floats (reported as density mode).
    pub fn from_csv(text: &str) -> Result<EmbeddingMatrix, EmbedError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(EmbedError::CsvParse {
            line: 1,
            message: "missing header".into(),
        })?;
        let mut ordinals = Vec::new();
        let mut fields = header.split(',');
        if fields.next() != Some("graph_id") {
            return Err(EmbedError::CsvParse {
                line: 1,
                message: "header must start with graph_id".into(),
            });
        }
        for field in fields {
            let ordinal = field
                .strip_prefix('p')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| EmbedError::CsvParse {
                    line: 1,
                    message: format!("bad pattern column `{field}`"),
                })?;
            ordinals.push(ordinal);
        }

        let mut ids = Vec::new();
        let mut raw_rows: Vec<Vec<String>> = Vec::new();
        let mut all_integer = true;
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let id = fields.next().unwrap_or_default().to_string();
            let cells: Vec<String> = fields.map(str::to_string).collect();
            if cells.len() != ordinals.len() {
                return Err(EmbedError::CsvParse {
                    line: idx + 1,
                    message: format!(
                        "expected {} cells, found {}",
                        ordinals.len(),
                        cells.len()
                    ),
                });
            }
            all_integer &= cells
                .iter()
                .all(|c| !c.is_empty() && c.bytes().all(|b| b.is_ascii_digit()));
            ids.push(id);
            raw_rows.push(cells);
        }

        let values = if all_integer {
            MatrixValues::Int(
                raw_rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| BigUint::parse_bytes(c.as_bytes(), 10).expect("digits"))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            let mut rows = Vec::with_capacity(raw_rows.len());
            for (i, row) in raw_rows.iter().enumerate() {
                let mut parsed = Vec::with_capacity(row.len());
                for cell in row {
                    parsed.push(cell.parse::<f64>().map_err(|e| EmbedError::CsvParse {
                        line: i + 2,
                        message: format!("bad float `{cell}`: {e}"),
                    })?);
                }
                rows.push(parsed);
            }
            MatrixValues::Real(rows)
        };
        Ok(EmbeddingMatrix {
            graph_ids: ids,
            pattern_ordinals: ordinals,
            mode: if all_integer {
                EmbedMode::Truncated
            } else {
                EmbedMode::Density
            },
            values,
        })
    }
}

/// Computes the embedding matrix of `graphs` against `bank`.
///
/// Every entry is the exact count `hom(F_j, G_i)` obtained by the treewidth
/// DP over the bank's stored decomposition, transformed per `mode`. With the
/// `parallel` feature rows are computed concurrently; results land in fixed
/// slots, so output never depends on scheduling.
pub fn embed(
    graphs: &[Graph],
    bank: &PatternBank,
    mode: EmbedMode,
) -> Result<EmbeddingMatrix, EmbedError> {
    if bank.is_empty() {
        return Err(EmbedError::EmptyBank);
    }
    if let Some(index) = graphs.iter().position(|g| g.vertex_count() == 0) {
        return Err(EmbedError::EmptyGraph { index });
    }
    let ntds: Vec<NiceTreeDecomposition> = bank
        .patterns
        .iter()
        .map(|p| {
            validate(&p.pattern, &p.decomposition).map_err(|source| {
                EmbedError::PatternDecomposition {
                    ordinal: p.ordinal,
                    source,
                }
            })?;
            make_nice(&p.decomposition).map_err(|source| EmbedError::PatternDecomposition {
                ordinal: p.ordinal,
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let count_row = |g: &Graph| -> Vec<BigUint> {
        bank.patterns
            .iter()
            .zip(&ntds)
            .map(|(p, ntd)| {
                if mode == EmbedMode::Truncated
                    && p.pattern.vertex_count() > g.vertex_count()
                {
                    BigUint::zero()
                } else {
                    hom_dp(&p.pattern, ntd, g).expect("decomposition validated above")
                }
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let counts: Vec<Vec<BigUint>> = graphs.par_iter().map(count_row).collect();
    #[cfg(not(feature = "parallel"))]
    let counts: Vec<Vec<BigUint>> = graphs.iter().map(count_row).collect();

    let graph_ids: Vec<String> = (0..graphs.len()).map(|i| i.to_string()).collect();
    let pattern_ordinals: Vec<usize> = bank.patterns.iter().map(|p| p.ordinal).collect();
    let ell = bank.len() as f64;

    let values = match mode {
        EmbedMode::Hom | EmbedMode::Truncated => MatrixValues::Int(counts),
        EmbedMode::Density => {
            let scale = ell.sqrt().recip();
            let rows = counts
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .zip(&bank.patterns)
                        .map(|(count, p)| {
                            let denom = BigUint::from(graphs[i].vertex_count())
                                .pow(p.pattern.vertex_count() as u32);
                            ratio_to_f64(count, &denom) * scale
                        })
                        .collect()
                })
                .collect();
            MatrixValues::Real(rows)
        }
        EmbedMode::Log1p => MatrixValues::Real(
            counts
                .iter()
                .map(|row| row.iter().map(log1p_count).collect())
                .collect(),
        ),
        EmbedMode::Standardized => {
            let raw: Vec<Vec<f64>> = counts
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
                        .collect()
                })
                .collect();
            MatrixValues::Real(standardize_columns(raw))
        }
    };

    Ok(EmbeddingMatrix {
        graph_ids,
        pattern_ordinals,
        values,
        mode,
    })
}

/// Per-column mean 0 / std 1 (population std) with the [`STD_FLOOR`] floor:
/// near-constant columns become all zeros.
fn standardize_columns(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows.len() as f64;
    let cols = rows[0].len();
    for c in 0..cols {
        let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        if std < STD_FLOOR {
            for r in &mut rows {
                r[c] = 0.0;
            }
        } else {
            for r in &mut rows {
                r[c] = (r[c] - mean) / std;
            }
        }
    }
    rows
}

/// Which inner product a Gram matrix holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelTag {
    Dot,
    AveragedDensity,
    MinKernel,
}

impl KernelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelTag::Dot => "dot",
            KernelTag::AveragedDensity => "averaged-density",
            KernelTag::MinKernel => "min-kernel",
        }
    }
}

/// Symmetric matrix of pairwise kernel values.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub graph_ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub kernel: KernelTag,
}

impl GramMatrix {
    /// CSV with a graph-id header row and leading graph-id column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph_id");
        for id in &self.graph_ids {
            out.push_str(&format!(",{id}"));
        }
        out.push('\n');
        for (i, id) in self.graph_ids.iter().enumerate() {
            out.push_str(id);
            for cell in &self.values[i] {
                out.push_str(&format!(",{cell:.16e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Pairwise dot products of embedding rows. Real modes go straight to f64;
/// integer modes are computed exactly and refuse entries beyond the exact
/// f64 integer range (use density or log1p for such datasets). Density-mode
/// input is tagged as the averaged kernel `k̃`.
pub fn gram(emb: &EmbeddingMatrix) -> Result<GramMatrix, EmbedError> {
    let tag = match emb.mode {
        EmbedMode::Density => KernelTag::AveragedDensity,
        _ => KernelTag::Dot,
    };
    gram_with_tag(emb, tag)
}

/// The min kernel over a truncated-mode embedding: because each row is
/// already zeroed beyond its graph's size, the dot product of two rows only
/// sums patterns with `v(F) <= min(v(G), v(G'))`.
pub fn gram_min(emb: &EmbeddingMatrix) -> Result<GramMatrix, EmbedError> {
    if emb.mode != EmbedMode::Truncated {
        return Err(EmbedError::NotTruncatedMode);
    }
    gram_with_tag(emb, KernelTag::MinKernel)
}

fn gram_with_tag(emb: &EmbeddingMatrix, kernel: KernelTag) -> Result<GramMatrix, EmbedError> {
    let n = emb.graph_count();
    let mut values = vec![vec![0.0f64; n]; n];
    match &emb.values {
        MatrixValues::Real(rows) => {
            for i in 0..n {
                for j in i..n {
                    let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                    values[i][j] = dot;
                    values[j][i] = dot;
                }
            }
        }
        MatrixValues::Int(rows) => {
            for i in 0..n {
                for j in i..n {
                    let dot: BigUint = rows[i]
                        .iter()
                        .zip(&rows[j])
                        .map(|(a, b)| a * b)
                        .sum();
                    let as_float = dot
                        .to_u64()
                        .filter(|&v| v <= F64_EXACT_MAX)
                        .map(|v| v as f64)
                        .ok_or(EmbedError::GramOverflow { row: i, col: j })?;
                    values[i][j] = as_float;
                    values[j][i] = as_float;
                }
            }
        }
    }
    Ok(GramMatrix {
        graph_ids: emb.graph_ids.clone(),
        values,
        kernel,
    })
}

/// The min kernel of a single pair: the dot product of whatever truncated
/// rows `truncated_row` produces. By the truncation, this equals the inner
/// product restricted to patterns no larger than the smaller graph.
pub fn min_kernel<F>(g: &Graph, h: &Graph, mut truncated_row: F) -> BigUint
where
    F: FnMut(&Graph) -> Vec<BigUint>,
{
    let row_g = truncated_row(g);
    let row_h = truncated_row(h);
    row_g.iter().zip(&row_h).map(|(a, b)| a * b).sum()
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<(), EmbedError> {
    if !(value > 0.0 && value < 1.0) {
        return Err(EmbedError::BadParameter(format!(
            "{name} = {value} outside (0, 1)"
        )));
    }
    Ok(())
}

/// Smallest ℓ with `|S|² · 2 · exp(−2ε²ℓ) ≤ δ`: the explicit constant behind
/// the `O(log(|S|/δ)/ε²)` sample bound for a dataset of `sample_size` graphs.
pub fn hoeffding_samples(eps: f64, delta: f64, sample_size: u64) -> Result<u64, EmbedError> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    if sample_size == 0 {
        return Err(EmbedError::BadParameter("sample_size must be >= 1".into()));
    }
    let s = sample_size as f64;
    // In log space: ℓ ≥ ln(2 s² / δ) / (2 ε²).
    let lhs = (2.0 * s * s / delta).ln();
    Ok(smallest_ell(lhs, eps))
}

/// Smallest ℓ covering all of G_n simultaneously, via `|G_n| ≤ 2^(n²)`:
/// `ℓ = ⌈(2 n² ln 2 + ln(2/δ)) / (2 ε²)⌉`.
pub fn hoeffding_samples_all(eps: f64, delta: f64, n: u64) -> Result<u64, EmbedError> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    if n == 0 {
        return Err(EmbedError::BadParameter("n must be >= 1".into()));
    }
    let lhs = 2.0 * (n as f64) * (n as f64) * std::f64::consts::LN_2 + (2.0 / delta).ln();
    Ok(smallest_ell(lhs, eps))
}

/// Smallest integer ℓ with `lhs ≤ 2 ε² ℓ`, robust to float fuzz at the
/// boundary.
fn smallest_ell(lhs: f64, eps: f64) -> u64 {
    let rate = 2.0 * eps * eps;
    let mut ell = (lhs / rate).ceil().max(1.0) as u64;
    while lhs > rate * ell as f64 {
        ell += 1;
    }
    while ell > 1 && lhs <= rate * (ell - 1) as f64 {
        ell -= 1;
    }
    ell
}

/// Density embedding over an explicit pattern list with known probabilities:
/// entry (i, j) = √p_j · t(F_j, G_i). The squared row distances equal
/// `Σ_j p_j (t(F_j,G) − t(F_j,G'))²`, the reference the sampled embeddings
/// converge to.
pub fn weighted_reference_embedding(
    graphs: &[Graph],
    patterns: &[(Graph, f64)],
) -> Result<EmbeddingMatrix, EmbedError> {
    if patterns.is_empty() {
        return Err(EmbedError::EmptyBank);
    }
    if let Some(index) = graphs.iter().position(|g| g.vertex_count() == 0) {
        return Err(EmbedError::EmptyGraph { index });
    }
    for (j, (_, p)) in patterns.iter().enumerate() {
        if !(*p >= 0.0 && p.is_finite()) {
            return Err(EmbedError::BadParameter(format!(
                "pattern {j} has invalid probability {p}"
            )));
        }
    }
    let ntds: Vec<NiceTreeDecomposition> = patterns
        .iter()
        .map(|(f, _)| {
            make_nice(&crate::decomposition::TreeDecomposition::single_bag(
                f.vertex_count(),
            ))
            .expect("single bag is tree shaped")
        })
        .collect();
    let rows = graphs
        .iter()
        .map(|g| {
            patterns
                .iter()
                .zip(&ntds)
                .map(|((f, p), ntd)| {
                    let count = hom_dp(f, ntd, g)?;
                    let denom =
                        BigUint::from(g.vertex_count()).pow(f.vertex_count() as u32);
                    Ok(p.sqrt() * ratio_to_f64(&count, &denom))
                })
                .collect::<Result<Vec<f64>, EmbedError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EmbeddingMatrix {
        graph_ids: (0..graphs.len()).map(|i| i.to_string()).collect(),
        pattern_ordinals: (0..patterns.len()).collect(),
        values: MatrixValues::Real(rows),
        mode: EmbedMode::Density,
    })
}

/// One graph pair's squared-distance deviation between a sampled embedding
/// and a reference embedding.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairDeviation {
    pub left: usize,
    pub right: usize,
    pub sampled_sq_dist: f64,
    pub reference_sq_dist: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub pairs: Vec<PairDeviation>,
    pub max_abs_deviation: f64,
}

/// Compares squared embedding distances pair by pair between a sampled
/// real-mode embedding and a reference over the same graphs.
pub fn distance_check(
    sampled: &EmbeddingMatrix,
    reference: &EmbeddingMatrix,
) -> Result<DeviationReport, EmbedError> {
    let rows_s = sampled
        .real_rows()
        .ok_or(EmbedError::NotRealMode("distance_check"))?;
    let rows_r = reference
        .real_rows()
        .ok_or(EmbedError::NotRealMode("distance_check"))?;
    if sampled.graph_ids != reference.graph_ids {
        return Err(EmbedError::Mismatch(
            "sampled and reference embeddings cover different graphs".into(),
        ));
    }
    let n = rows_s.len();
    let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
    let mut max_abs = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let sampled_sq_dist = sq_dist(&rows_s[i], &rows_s[j]);
            let reference_sq_dist = sq_dist(&rows_r[i], &rows_r[j]);
            let deviation = (sampled_sq_dist - reference_sq_dist).abs();
            max_abs = max_abs.max(deviation);
            pairs.push(PairDeviation {
                left: i,
                right: j,
                sampled_sq_dist,
                reference_sq_dist,
                deviation,
            });
        }
    }
    Ok(DeviationReport {
        pairs,
        max_abs_deviation: max_abs,
    })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassPairStats {
    pub total: usize,
    pub distinguished: usize,
}

/// How many row pairs an embedding separates, optionally broken down by
/// class labels. Field order matches the report file format.
#[derive(Clone, Debug, Serialize)]
pub struct DistinguishabilityReport {
    pub pairs_total: usize,
    pub pairs_distinguished: usize,
    pub by_class_pair: BTreeMap<String, ClassPairStats>,
    pub mode: String,
    pub tolerance: f64,
}

impl DistinguishabilityReport {
    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("report serializes");
        json.push('\n');
        json
    }
}

/// Counts pairs `(i, j)` with distinct embedding rows. Integer modes compare
/// exactly (tolerance reported as 0); real modes use componentwise
/// `tolerance`. With labels, per-class-pair counts expose the confusion
/// structure: `a|b` keys for cross-class pairs, `a|a` for within-class.
pub fn distinguishability_report(
    emb: &EmbeddingMatrix,
    labels: Option<&[String]>,
    tolerance: f64,
) -> Result<DistinguishabilityReport, EmbedError> {
    if let Some(labels) = labels {
        if labels.len() != emb.graph_count() {
            return Err(EmbedError::Mismatch(format!(
                "{} labels for {} graphs",
                labels.len(),
                emb.graph_count()
            )));
        }
    }
    let exact = emb.mode.is_integer();
    let tolerance = if exact { 0.0 } else { tolerance };
    let n = emb.graph_count();
    let mut pairs_total = 0;
    let mut pairs_distinguished = 0;
    let mut by_class_pair: BTreeMap<String, ClassPairStats> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs_total += 1;
            let distinct = emb.rows_distinct(i, j, tolerance);
            if distinct {
                pairs_distinguished += 1;
            }
            if let Some(labels) = labels {
                let (a, b) = if labels[i] <= labels[j] {
                    (&labels[i], &labels[j])
                } else {
                    (&labels[j], &labels[i])
                };
                let stats = by_class_pair
                    .entry(format!("{a}|{b}"))
                    .or_insert(ClassPairStats {
                        total: 0,
                        distinguished: 0,
                    });
                stats.total += 1;
                if distinct {
                    stats.distinguished += 1;
                }
            }
        }
    }
    Ok(DistinguishabilityReport {
        pairs_total,
        pairs_distinguished,
        by_class_pair,
        mode: if exact { "exact" } else { "tolerance" }.to_string(),
        tolerance,
    })
}
