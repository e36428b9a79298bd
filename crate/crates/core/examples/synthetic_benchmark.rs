//! Benchmark every method on a synthetic dataset written to disk.
//!
//! ```text
//! cargo run --release --example synthetic_benchmark -- [images] [out_dir]
//! ```

use pcc::harness::benchmark::{run_benchmark_index, BenchmarkOptions, MethodParams};
use pcc::harness::dataset::index_dataset;
use pcc::harness::{write_dataset, Method, Sample};
use pcc::synthetic::{mosaic_set, MosaicSpec};

fn main() -> pcc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let count = args.first().and_then(|s| s.parse().ok()).unwrap_or(20);
    let out_dir = args.get(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("pcc_synthetic"));

    let samples: Vec<Sample> = mosaic_set(2024, count, &MosaicSpec::default())?
        .into_iter()
        .enumerate()
        .map(|(i, s)| Sample { id: format!("scene_{i:03}"), image: s.image, ground_truth: s.illuminant })
        .collect();
    let images = out_dir.join("images");
    let csv = write_dataset(&images, &samples)?;

    let index = index_dataset(&images, &csv)?;
    let methods = Method::all(&MethodParams::default());
    let report = run_benchmark_index(&index, false, &methods, &BenchmarkOptions::default())?;
    report.write_to(&out_dir.join("report"))?;
    print!("{}", report.table());
    println!("reports in {}", out_dir.join("report").display());
    Ok(())
}
