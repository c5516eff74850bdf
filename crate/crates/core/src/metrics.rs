//! Aggregate metrics and benchmark reports.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::SampleId;
use crate::search::SearchStats;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("cannot aggregate an empty list")]
    Empty,
    #[error("ratio {0} is not positive")]
    NonPositive(f64),
    #[error("runs and baseline are misaligned at index {index}")]
    Misaligned { index: usize },
    #[error("baseline counters for {sample} are missing or zero")]
    ZeroBaseline { sample: SampleId },
    #[error("no valid runs to aggregate")]
    NoValidRuns,
    #[error("growth series has no scale-1 entry")]
    MissingScaleOne,
}

/// Outcome of one algorithm on one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub sample: SampleId,
    pub algorithm: String,
    /// Absent for model-only paths, which do no search.
    pub stats: Option<SearchStats>,
    pub path_length: Option<f64>,
    pub valid: bool,
    /// A* optimum for the same sample.
    pub optimal_length: f64,
}

/// `exp(mean(ln r))`.
pub fn geometric_mean(ratios: &[f64]) -> Result<f64, MetricsError> {
    if ratios.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(&bad) = ratios.iter().find(|&&r| r.is_nan() || r <= 0.0) {
        return Err(MetricsError::NonPositive(bad));
    }
    let mean_log = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
    Ok(mean_log.exp())
}

/// Geometric-mean expansion and peak-storage ratios against `baseline`, in
/// percent. Invalid runs and runs without counters are left out.
pub fn efficiency_ratios(runs: &[RunRecord], baseline: &[RunRecord]) -> Result<(f64, f64), MetricsError> {
    if runs.len() != baseline.len() {
        return Err(MetricsError::Misaligned { index: runs.len().min(baseline.len()) });
    }
    let mut ops = Vec::with_capacity(runs.len());
    let mut storage = Vec::with_capacity(runs.len());
    for (index, (run, base)) in runs.iter().zip(baseline).enumerate() {
        if run.sample != base.sample {
            return Err(MetricsError::Misaligned { index });
        }
        let Some(stats) = run.stats.filter(|_| run.valid) else { continue };
        let base_stats = base
            .stats
            .filter(|s| s.expansions > 0 && s.peak_storage > 0)
            .ok_or(MetricsError::ZeroBaseline { sample: base.sample })?;
        ops.push(stats.expansions as f64 / base_stats.expansions as f64);
        storage.push(stats.peak_storage as f64 / base_stats.peak_storage as f64);
    }
    if ops.is_empty() {
        return Err(MetricsError::NoValidRuns);
    }
    Ok((100.0 * geometric_mean(&ops)?, 100.0 * geometric_mean(&storage)?))
}

/// Geometric mean of `path_length / optimal_length` over valid runs, in percent.
pub fn relative_path_length(runs: &[RunRecord]) -> Result<f64, MetricsError> {
    let ratios: Vec<f64> = runs
        .iter()
        .filter(|r| r.valid)
        .filter_map(|r| r.path_length.map(|len| len / r.optimal_length))
        .collect();
    if ratios.is_empty() {
        return Err(MetricsError::NoValidRuns);
    }
    Ok(100.0 * geometric_mean(&ratios)?)
}

pub fn valid_path_ratio(runs: &[RunRecord]) -> Result<f64, MetricsError> {
    if runs.is_empty() {
        return Err(MetricsError::Empty);
    }
    let valid = runs.iter().filter(|r| r.valid).count();
    Ok(100.0 * valid as f64 / runs.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub scale: i64,
    pub mean_ops: f64,
    pub mean_storage: f64,
    pub ops_growth: f64,
    pub storage_growth: f64,
    /// Arithmetic mean of the two growth factors.
    pub combined: f64,
}

/// Usage at each scale relative to scale 1. `series` holds
/// `(scale, mean_ops, mean_storage)`.
pub fn growth_factor(series: &[(i64, f64, f64)]) -> Result<Vec<Growth>, MetricsError> {
    let &(_, ops1, sto1) = series.iter().find(|s| s.0 == 1).ok_or(MetricsError::MissingScaleOne)?;
    for &v in [ops1, sto1].iter() {
        if v.is_nan() || v <= 0.0 {
            return Err(MetricsError::NonPositive(v));
        }
    }
    Ok(series
        .iter()
        .map(|&(scale, mean_ops, mean_storage)| {
            let ops_growth = mean_ops / ops1;
            let storage_growth = mean_storage / sto1;
            Growth { scale, mean_ops, mean_storage, ops_growth, storage_growth, combined: (ops_growth + storage_growth) / 2.0 }
        })
        .collect())
}

/// One row of a benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: String,
    /// Percent of the A* baseline; absent when the algorithm does no search.
    pub operation_ratio: Option<f64>,
    pub storage_ratio: Option<f64>,
    /// Absent when no run produced a valid path.
    pub relative_path_length: Option<f64>,
    pub valid_path_ratio: f64,
}

impl ReportRow {
    pub fn from_runs(algorithm: &str, runs: &[RunRecord], baseline: &[RunRecord]) -> Result<Self, MetricsError> {
        let searched = runs.iter().any(|r| r.stats.is_some());
        let (operation_ratio, storage_ratio) = match efficiency_ratios(runs, baseline) {
            Ok((o, s)) if searched => (Some(o), Some(s)),
            Ok(_) | Err(MetricsError::NoValidRuns) => (None, None),
            Err(e) => return Err(e),
        };
        let relative_path_length = match relative_path_length(runs) {
            Ok(v) => Some(v),
            Err(MetricsError::NoValidRuns) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            algorithm: algorithm.to_string(),
            operation_ratio,
            storage_ratio,
            relative_path_length,
            valid_path_ratio: valid_path_ratio(runs)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub samples: usize,
    pub scale: i64,
    pub rows: Vec<ReportRow>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Fixed-width table, one line per row.
    pub fn to_table(&self) -> String {
        let headers = ["Method", "Operation Ratio (%)", "Storage Ratio (%)", "Relative Path Length (%)", "Valid Path Ratio (%)"];
        let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        let mut lines: Vec<[String; 5]> = vec![headers.map(String::from)];
        for row in &self.rows {
            lines.push([
                row.algorithm.clone(),
                cell(row.operation_ratio),
                cell(row.storage_ratio),
                cell(row.relative_path_length),
                cell(Some(row.valid_path_ratio)),
            ]);
        }
        let widths: Vec<usize> = (0..5).map(|c| lines.iter().map(|l| l[c].len()).max().unwrap()).collect();
        let mut out = format!("samples: {}  scale: {}\n", self.samples, self.scale);
        for line in &lines {
            let mut text = format!("{:<w$}", line[0], w = widths[0]);
            for c in 1..5 {
                write!(text, "  {:>w$}", line[c], w = widths[c]).unwrap();
            }
            out.push_str(&text);
            out.push('\n');
        }
        out
    }
}

/// Growth series for each algorithm of a scalability sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub queries: usize,
    pub series: Vec<(String, Vec<Growth>)>,
}

impl ScaleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("queries per scale: {}\n", self.queries);
        for (name, series) in &self.series {
            writeln!(out, "{name}").unwrap();
            writeln!(out, "{:>5}  {:>12}  {:>12}  {:>8}  {:>8}  {:>8}", "scale", "ops", "storage", "ops x", "sto x", "comb x").unwrap();
            for g in series {
                writeln!(
                    out,
                    "{:>5}  {:>12.1}  {:>12.1}  {:>8.2}  {:>8.2}  {:>8.2}",
                    g.scale, g.mean_ops, g.mean_storage, g.ops_growth, g.storage_growth, g.combined
                )
                .unwrap();
            }
        }
        out
    }
}
