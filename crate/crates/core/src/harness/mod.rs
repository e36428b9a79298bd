//! Dataset ingestion, correction, mask export and batch benchmarking.

pub mod benchmark;
pub mod dataset;
pub mod output;

pub use benchmark::{run_benchmark, BenchmarkOptions, BenchmarkReport, Method, MethodStats, ReportRow, RowFailure};
pub use dataset::{load_dataset, load_linear_image, read_ground_truth, write_dataset, Dataset, GroundTruthRecord, Sample};
pub use output::{correct_image, label_map, render_mask, save_linear_image, CorrectionMode};
