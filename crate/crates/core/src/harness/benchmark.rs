use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{DatasetIndex, Sample};
use crate::baselines::{estimate_framework, FrameworkConfig, Norm};
use crate::error::{Error, Result};
use crate::graph::Prior;
use crate::illuminant::Illuminant;
use crate::image::LinearImage;
use crate::metrics::{recovery_error, reproduction_error, summarize, ErrorStats};
use crate::pcc::{estimate_from_segments, PccConfig};
use crate::superpixel::{segment, SlicParams, SuperpixelMap};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "PCC_WORKERS";

/// An illuminant estimator under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pcc(Prior),
    Framework { name: FrameworkName, config: FrameworkConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameworkName {
    GrayWorld,
    WhitePatch,
    ShadesOfGray,
    GrayEdge,
    GrayEdge2nd,
    Custom,
}

/// Free parameters of the named framework estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodParams {
    pub shades_p: f64,
    pub edge_p: f64,
    pub edge_sigma: f64,
    pub edge2_p: f64,
    pub edge2_sigma: f64,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self { shades_p: 6.0, edge_p: 1.0, edge_sigma: 6.0, edge2_p: 1.0, edge2_sigma: 1.0 }
    }
}

impl Method {
    pub const NAMES: &'static [&'static str] =
        &["pcc_q1", "pcc_q2", "gray_world", "white_patch", "shades_of_gray", "gray_edge", "gray_edge_2nd"];

    pub fn parse(name: &str, params: &MethodParams) -> Result<Self> {
        let fw = |name, config| Method::Framework { name, config };
        Ok(match name {
            "pcc_q1" => Method::Pcc(Prior::Threshold),
            "pcc_q2" => Method::Pcc(Prior::Linear),
            "gray_world" => fw(FrameworkName::GrayWorld, FrameworkConfig::gray_world()),
            "white_patch" => fw(FrameworkName::WhitePatch, FrameworkConfig::white_patch()),
            "shades_of_gray" => fw(FrameworkName::ShadesOfGray, FrameworkConfig::shades_of_gray(params.shades_p)),
            "gray_edge" => fw(FrameworkName::GrayEdge, FrameworkConfig::gray_edge(params.edge_p, params.edge_sigma)),
            "gray_edge_2nd" => {
                fw(FrameworkName::GrayEdge2nd, FrameworkConfig::gray_edge_2nd(params.edge2_p, params.edge2_sigma))
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown method {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    /// All named methods with the given parameters.
    pub fn all(params: &MethodParams) -> Vec<Method> {
        Self::NAMES.iter().map(|n| Self::parse(n, params).expect("known name")).collect()
    }

    pub fn name(&self) -> String {
        match self {
            Method::Pcc(p) => format!("pcc_{}", p.name()),
            Method::Framework { name, config } => match name {
                FrameworkName::GrayWorld => "gray_world".into(),
                FrameworkName::WhitePatch => "white_patch".into(),
                FrameworkName::ShadesOfGray => "shades_of_gray".into(),
                FrameworkName::GrayEdge => "gray_edge".into(),
                FrameworkName::GrayEdge2nd => "gray_edge_2nd".into(),
                FrameworkName::Custom => {
                    let p = match config.norm {
                        Norm::Finite(p) => p.to_string(),
                        Norm::Max => "inf".into(),
                    };
                    format!("framework_n{}_p{}_s{}", config.order, p, config.sigma)
                }
            },
        }
    }

    /// Estimates with this method. One segmentation can serve several PCC methods.
    pub fn estimate(&self, img: &LinearImage, pcc: &PccConfig, segments: Option<&SuperpixelMap>) -> Result<Illuminant> {
        match self {
            Method::Framework { config, .. } => estimate_framework(img, config),
            Method::Pcc(prior) => {
                let cfg = PccConfig { prior: *prior, ..*pcc };
                let map = match segments {
                    Some(m) => m.clone(),
                    None => segment_for(img, &cfg.slic)?,
                };
                Ok(estimate_from_segments(map, &cfg)?.illuminant)
            }
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, &MethodParams::default())
    }
}

fn segment_for(img: &LinearImage, slic: &SlicParams) -> Result<SuperpixelMap> {
    let slic = SlicParams { target_segments: slic.target_segments.min(img.len()), ..*slic };
    segment(img, &slic)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BenchmarkOptions {
    pub pcc: PccConfig,
    /// Size of the worker pool; 0 picks the default.
    pub workers: usize,
}


/// Worker count from `PCC_WORKERS`, else the machine's available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub image: String,
    pub method: String,
    pub recovery_deg: f64,
    pub reproduction_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub image: String,
    pub method: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodStats {
    pub method: String,
    pub recovery: Option<ErrorStats>,
    pub reproduction: Option<ErrorStats>,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub methods: Vec<Method>,
    pub pcc: PccConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub images: usize,
    pub stats: Vec<MethodStats>,
    pub rows: Vec<ReportRow>,
    pub failures: Vec<RowFailure>,
    pub config: ConfigEcho,
}

type Outcome = std::result::Result<(f64, f64), String>;

fn evaluate(img: &LinearImage, gt: &Illuminant, methods: &[Method], pcc: &PccConfig) -> Vec<Outcome> {
    let needs_segments = methods.iter().any(|m| matches!(m, Method::Pcc(_)));
    let segments = if needs_segments { Some(segment_for(img, &pcc.slic)) } else { None };
    methods
        .iter()
        .map(|m| {
            let est = match (m, &segments) {
                (Method::Pcc(_), Some(Err(e))) => return Err(e.to_string()),
                (Method::Pcc(_), Some(Ok(map))) => m.estimate(img, pcc, Some(map)),
                _ => m.estimate(img, pcc, None),
            }
            .map_err(|e| e.to_string())?;
            let rec = recovery_error(*gt, est).map_err(|e| e.to_string())?;
            let rep = reproduction_error(*gt, est).map_err(|e| e.to_string())?;
            Ok((rec, rep))
        })
        .collect()
}

fn run_with<F>(count: usize, methods: &[Method], opts: &BenchmarkOptions, load: F) -> Result<BenchmarkReport>
where
    F: Fn(usize) -> Result<Sample> + Sync,
{
    if count == 0 {
        return Err(Error::Dataset("benchmark needs at least one image".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidArgument("benchmark needs at least one method".into()));
    }
    opts.pcc.graph.validate()?;
    let workers = if opts.workers == 0 { default_workers() } else { opts.workers };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?;

    let results: Vec<Result<(String, Vec<Outcome>)>> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let s = load(i)?;
                Ok((s.id.clone(), evaluate(&s.image, &s.ground_truth, methods, &opts.pcc)))
            })
            .collect()
    });

    let names: Vec<String> = methods.iter().map(Method::name).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for res in results {
        let (image, outcomes) = res?;
        for (name, out) in names.iter().zip(outcomes) {
            match out {
                Ok((rec, rep)) => rows.push(ReportRow {
                    image: image.clone(),
                    method: name.clone(),
                    recovery_deg: rec,
                    reproduction_deg: rep,
                }),
                Err(error) => failures.push(RowFailure { image: image.clone(), method: name.clone(), error }),
            }
        }
    }

    let stats = names
        .iter()
        .map(|name| {
            let (rec, rep): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| &r.method == name)
                .map(|r| (r.recovery_deg, r.reproduction_deg))
                .unzip();
            MethodStats {
                method: name.clone(),
                recovery: summarize(&rec).ok(),
                reproduction: summarize(&rep).ok(),
                failures: failures.iter().filter(|f| &f.method == name).count(),
            }
        })
        .collect();

    Ok(BenchmarkReport {
        images: count,
        stats,
        rows,
        failures,
        config: ConfigEcho { methods: methods.to_vec(), pcc: opts.pcc },
    })
}

/// Evaluates every method on every sample. Output order follows the input order.
pub fn run_benchmark(samples: &[Sample], methods: &[Method], opts: &BenchmarkOptions) -> Result<BenchmarkReport> {
    run_with(samples.len(), methods, opts, |i| Ok(samples[i].clone()))
}

/// Like [`run_benchmark`], decoding each image inside its worker.
pub fn run_benchmark_index(
    index: &DatasetIndex,
    linearize: bool,
    methods: &[Method],
    opts: &BenchmarkOptions,
) -> Result<BenchmarkReport> {
    run_with(index.len(), methods, opts, |i| index.load(i, linearize))
}

impl BenchmarkReport {
    /// Per-image rows as CSV: `image,method,recovery_deg,reproduction_deg`.
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("image,method,recovery_deg,reproduction_deg\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.image, r.method, r.recovery_deg, r.reproduction_deg);
        }
        out
    }

    /// Aggregate statistics, failures and configuration as pretty JSON.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary<'a> {
            images: usize,
            stats: &'a [MethodStats],
            failures: &'a [RowFailure],
            config: &'a ConfigEcho,
        }
        Ok(serde_json::to_string_pretty(&Summary {
            images: self.images,
            stats: &self.stats,
            failures: &self.failures,
            config: &self.config,
        })?)
    }

    /// Plain-text table with both error families side by side.
    pub fn table(&self) -> String {
        let width = self.stats.iter().map(|s| s.method.len()).max().unwrap_or(6).max(6);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:width$} | {:^39} || {:^39}",
            "",
            "Recovery angular error",
            "Reproduction angular error"
        );
        let head = format!("{:>7} {:>7} {:>7} {:>7} {:>7}", "Best25", "Mean", "Med.", "Tri.", "W.25");
        let _ = writeln!(out, "{:width$} | {head} || {head}", "Method");
        let _ = writeln!(out, "{}", "-".repeat(width + 86));
        let cells = |s: &Option<ErrorStats>| match s {
            Some(s) => format!(
                "{:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
                s.best25_mean, s.mean, s.median, s.trimean, s.worst25_mean
            ),
            None => format!("{:>39}", "n/a"),
        };
        for s in &self.stats {
            let _ = writeln!(out, "{:width$} | {} || {}", s.method, cells(&s.recovery), cells(&s.reproduction));
        }
        let _ = writeln!(out, "{} images, {} failed estimates", self.images, self.failures.len());
        out
    }

    /// Writes `rows.csv` and `summary.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
        let rows = dir.join("rows.csv");
        fs::write(&rows, self.rows_csv()).map_err(|source| Error::Io { path: rows, source })?;
        let summary = dir.join("summary.json");
        fs::write(&summary, self.summary_json()?).map_err(|source| Error::Io { path: summary, source })?;
        Ok(())
    }
}
