//! Command-line front end: `estimate`, `correct`, `mask` and `benchmark`.
//!
//! Exit codes: 0 success, 1 usage error, 2 dataset error, 3 numerical failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{estimate_framework, FrameworkConfig, Norm};
use crate::error::{Error, Result};
use crate::graph::{GraphParams, Prior, Selection};
use crate::harness::benchmark::{default_workers, run_benchmark_index, MethodParams};
use crate::harness::dataset::index_dataset;
use crate::harness::{correct_image, label_map, load_linear_image, render_mask, save_linear_image, CorrectionMode, Method};
use crate::illuminant::Illuminant;
use crate::pcc::{estimate, PccConfig};
use crate::superpixel::SlicParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATASET: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pcc", version, about = "Illuminant estimation with probabilistic color constancy and classical baselines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the illuminant of one image and print it as JSON.
    Estimate(EstimateArgs),
    /// White-balance an image with an estimated or given illuminant.
    Correct(CorrectArgs),
    /// Export the per-segment probability mask of one image.
    Mask(MaskArgs),
    /// Evaluate methods over a directory of images with a ground-truth CSV.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    q0_fraction: f64,
    #[arg(long, default_value_t = 0.1)]
    prior_weight: f64,
    #[arg(long, default_value_t = 0.01)]
    top_fraction: f64,
    #[arg(long, default_value_t = 1e-8)]
    ridge: f64,
    /// Count the top fraction in pixels or in segments.
    #[arg(long, value_enum, default_value_t = SelectionArg::Pixels)]
    selection: SelectionArg,
    #[arg(long, default_value_t = 800)]
    target_segments: usize,
    #[arg(long, default_value_t = 10.0)]
    compactness: f64,
    #[arg(long, default_value_t = 10)]
    iterations: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelectionArg {
    Pixels,
    Segments,
}

impl GraphArgs {
    fn pcc(&self, prior: Prior) -> PccConfig {
        PccConfig {
            slic: SlicParams {
                target_segments: self.target_segments,
                compactness: self.compactness,
                iterations: self.iterations,
            },
            graph: GraphParams {
                gamma: self.gamma,
                epsilon: self.epsilon,
                q0_fraction: self.q0_fraction,
                prior_weight: self.prior_weight,
                top_fraction: self.top_fraction,
                ridge: self.ridge,
                selection: match self.selection {
                    SelectionArg::Pixels => Selection::Pixels,
                    SelectionArg::Segments => Selection::Segments,
                },
            },
            prior,
        }
    }
}

#[derive(Debug, Args)]
struct MethodArgs {
    /// pcc_q1, pcc_q2, gray_world, white_patch, shades_of_gray, gray_edge, gray_edge_2nd or framework.
    #[arg(long, default_value = "pcc_q2")]
    method: String,
    /// Derivative order for `--method framework`.
    #[arg(long, default_value_t = 0)]
    order: u8,
    /// Minkowski order for `--method framework`; `inf` for the maximum.
    #[arg(long, default_value = "1")]
    p: String,
    /// Gaussian scale for `--method framework`.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[command(flatten)]
    named: NamedMethodArgs,
    #[command(flatten)]
    graph: GraphArgs,
}

#[derive(Debug, Args)]
struct NamedMethodArgs {
    #[arg(long, default_value_t = 6.0)]
    shades_p: f64,
    #[arg(long, default_value_t = 1.0)]
    edge_p: f64,
    #[arg(long, default_value_t = 6.0)]
    edge_sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    edge2_p: f64,
    #[arg(long, default_value_t = 1.0)]
    edge2_sigma: f64,
}

impl NamedMethodArgs {
    fn params(&self) -> MethodParams {
        MethodParams {
            shades_p: self.shades_p,
            edge_p: self.edge_p,
            edge_sigma: self.edge_sigma,
            edge2_p: self.edge2_p,
            edge2_sigma: self.edge2_sigma,
        }
    }
}

impl MethodArgs {
    fn method(&self) -> Result<Method> {
        if self.method == "framework" {
            let norm = match self.p.as_str() {
                "inf" | "max" => Norm::Max,
                s => Norm::Finite(
                    s.parse().map_err(|_| Error::InvalidArgument(format!("invalid Minkowski order {s:?}")))?,
                ),
            };
            let config = FrameworkConfig { order: self.order, norm, sigma: self.sigma };
            config.validate()?;
            return Ok(Method::Framework { name: crate::harness::benchmark::FrameworkName::Custom, config });
        }
        Method::parse(&self.method, &self.named.params())
    }

    fn estimate(&self, img: &crate::image::LinearImage) -> Result<Illuminant> {
        match self.method()? {
            Method::Pcc(prior) => Ok(estimate(img, &self.graph.pcc(prior))?.illuminant),
            Method::Framework { config, .. } => estimate_framework(img, &config),
        }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    input: PathBuf,
    /// Input is sRGB-encoded; linearize before estimating.
    #[arg(long)]
    srgb: bool,
    /// Also write the segment labels as a 16-bit PNG (PCC methods only).
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Debug, Args)]
struct CorrectArgs {
    input: PathBuf,
    output: PathBuf,
    /// Use this illuminant (`r,g,b`) instead of estimating one.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    illuminant: Option<Vec<f64>>,
    /// Keep the green channel fixed instead of the neutral-identity normalization.
    #[arg(long)]
    preserve_green: bool,
    /// Write a 16-bit PNG.
    #[arg(long)]
    sixteen_bit: bool,
    /// Input is sRGB-encoded; linearize on load and re-encode on save.
    #[arg(long)]
    srgb: bool,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Debug, Args)]
struct MaskArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = PriorArg::Q2)]
    prior: PriorArg,
    #[arg(long)]
    srgb: bool,
    /// Also write the segment labels as a 16-bit PNG.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PriorArg {
    Q1,
    Q2,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    image_dir: PathBuf,
    gt_csv: PathBuf,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', default_value = "pcc_q1,pcc_q2,gray_world,white_patch,shades_of_gray,gray_edge,gray_edge_2nd")]
    methods: Vec<String>,
    /// Directory for rows.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides the PCC_WORKERS environment variable.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    srgb: bool,
    #[command(flatten)]
    named: NamedMethodArgs,
    #[command(flatten)]
    graph: GraphArgs,
}

#[derive(Serialize)]
struct EstimateOutput {
    image: String,
    method: String,
    illuminant: [f64; 3],
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => EXIT_USAGE,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_DATASET,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => {
            let method = args.method.method()?;
            let img = load_linear_image(&args.input, args.srgb)?;
            let illuminant = match method {
                Method::Pcc(prior) => {
                    let out = estimate(&img, &args.method.graph.pcc(prior))?;
                    if let Some(path) = &args.labels {
                        label_map(&out.superpixels)?
                            .save(path)
                            .map_err(|source| Error::Image { path: path.clone(), source })?;
                    }
                    out.illuminant
                }
                Method::Framework { config, .. } => estimate_framework(&img, &config)?,
            };
            let out = EstimateOutput {
                image: args.input.display().to_string(),
                method: method.name(),
                illuminant: illuminant.rgb(),
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Correct(args) => {
            let given = match args.illuminant.as_deref() {
                Some(&[r, g, b]) => Some(Illuminant::new([r, g, b]).map_err(|e| Error::InvalidArgument(e.to_string()))?),
                Some(v) => return Err(Error::InvalidArgument(format!("--illuminant takes 3 values, got {}", v.len()))),
                None => {
                    args.method.method()?;
                    None
                }
            };
            let img = load_linear_image(&args.input, args.srgb)?;
            let est = match given {
                Some(est) => est,
                None => args.method.estimate(&img)?,
            };
            let mode = if args.preserve_green { CorrectionMode::PreserveGreen } else { CorrectionMode::Neutral };
            let out = correct_image(&img, &est, mode).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            save_linear_image(&out, &args.output, args.sixteen_bit, args.srgb)?;
            let e = est.rgb();
            eprintln!("corrected with illuminant [{:.6}, {:.6}, {:.6}]", e[0], e[1], e[2]);
        }
        Command::Mask(args) => {
            let img = load_linear_image(&args.input, args.srgb)?;
            let prior = match args.prior {
                PriorArg::Q1 => Prior::Threshold,
                PriorArg::Q2 => Prior::Linear,
            };
            let out = estimate(&img, &args.graph.pcc(prior))?;
            render_mask(&out.superpixels, &out.probabilities)?
                .save(&args.output)
                .map_err(|source| Error::Image { path: args.output.clone(), source })?;
            if let Some(path) = &args.labels {
                label_map(&out.superpixels)?
                    .save(path)
                    .map_err(|source| Error::Image { path: path.clone(), source })?;
            }
        }
        Command::Benchmark(args) => {
            let params = args.named.params();
            let methods = args.methods.iter().map(|m| Method::parse(m.trim(), &params)).collect::<Result<Vec<_>>>()?;
            let index = index_dataset(&args.image_dir, &args.gt_csv)?;
            for w in &index.warnings {
                eprintln!("warning: {w}");
            }
            let opts = crate::harness::BenchmarkOptions {
                pcc: args.graph.pcc(Prior::Linear),
                workers: args.workers.filter(|&w| w > 0).unwrap_or_else(default_workers),
            };
            let report = run_benchmark_index(&index, args.srgb, &methods, &opts)?;
            if let Some(dir) = &args.out {
                report.write_to(dir)?;
            }
            print!("{}", report.table());
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

