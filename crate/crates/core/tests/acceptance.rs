//! Acceptance criteria, one check per criterion. Prints a PASS/FAIL line for each
//! and exits non-zero if any gate fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use pcc::baselines::framework_statistic;
use pcc::harness::benchmark::{run_benchmark_index, BenchmarkOptions, MethodParams};
use pcc::harness::dataset::index_dataset;
use pcc::harness::{write_dataset, Method, Sample};
use pcc::synthetic::{mosaic_set, MosaicSpec};
use pcc::{
    estimate, oracle_minimize, recovery_error, reproduction_error, solve_probabilities,
    summarize, AffinityGraph, FrameworkConfig, GraphParams, LabColor, LinearImage, OracleSettings, PccConfig,
    Prior,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_lab(rng: &mut impl Rng) -> LabColor {
    LabColor::new(rng.gen_range(0.0..100.0), rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0))
}

fn criterion_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = GraphParams::default();
    let mut worst = 0.0f64;
    let mut solved = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=10);
        let nodes: Vec<LabColor> = (0..n).map(|_| random_lab(&mut rng)).collect();
        for prior in [Prior::Threshold, Prior::Linear] {
            let graph = AffinityGraph::build(&nodes, prior, &params).unwrap();
            let closed = graph.solve().unwrap();
            let oracle = match oracle_minimize(&graph.similarity, &graph.prior, &OracleSettings::default()) {
                Ok(p) => p,
                Err(e) => return outcome(false, format!("oracle failed: {e}")),
            };
            let diff = closed
                .as_slice()
                .iter()
                .zip(oracle.as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
            solved += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-6 && elapsed < Duration::from_secs(10),
        format!("{solved} solves, max L∞ gap {worst:.2e} (tol 1e-6), {:.2}s (limit 10s)", elapsed.as_secs_f64()),
    )
}

fn criterion_nonnegativity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let params = GraphParams::default();
    let mut min_p = f64::INFINITY;
    let mut worst_sum = 0.0f64;
    for k in 0..1000 {
        // mostly moderate sizes, with every 50th graph at the full 800 nodes
        let n = if k % 50 == 0 { 800 } else { rng.gen_range(2..=400) };
        let nodes: Vec<LabColor> = (0..n).map(|_| random_lab(&mut rng)).collect();
        let prior = if k % 2 == 0 { Prior::Threshold } else { Prior::Linear };
        let p = AffinityGraph::build(&nodes, prior, &params).unwrap().solve().unwrap();
        min_p = min_p.min(p.as_slice().iter().cloned().fold(f64::INFINITY, f64::min));
        worst_sum = worst_sum.max((p.as_slice().iter().sum::<f64>() - 1.0).abs());
    }
    outcome(
        min_p >= -1e-12 && worst_sum <= 1e-9,
        format!("1000 graphs, min p {min_p:.3e} (>= -1e-12), max |Σp − 1| {worst_sum:.2e} (<= 1e-9)"),
    )
}

fn criterion_metric_identities() -> Outcome {
    let zero = recovery_error([0.2, 0.5, 0.3], [0.2, 0.5, 0.3]).unwrap();
    let right = recovery_error([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
    let half = recovery_error([1.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
    let repro = reproduction_error([2.0, 1.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
    let pass = zero.abs() <= 1e-9
        && (right - 90.0).abs() <= 1e-9
        && (half - 45.0).abs() <= 1e-9
        && (repro - 19.471).abs() <= 1e-3;
    outcome(pass, format!("recovery 0°={zero:e}, 90°={right}, 45°={half}; reproduction {repro:.6}° (19.471 ± 1e-3)"))
}

fn criterion_framework_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let img = LinearImage::from_fn(97, 61, |_, _| [0; 3].map(|_| rng.gen_range(0.0..1.0))).unwrap();
    let px = img.pixels();
    let n = px.len() as f64;
    let mut direct_mean = [0.0; 3];
    let mut direct_max = [0.0f64; 3];
    for p in px {
        for c in 0..3 {
            direct_mean[c] += p[c];
            direct_max[c] = direct_max[c].max(p[c]);
        }
    }
    let direct_mean = direct_mean.map(|v| v / n);
    let unit = |v: [f64; 3]| {
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|c| c / s)
    };

    let gw1 = pcc::estimate_framework(&img, &FrameworkConfig::gray_world()).unwrap();
    let gw2 = pcc::estimate_framework(&img, &FrameworkConfig::gray_world()).unwrap();
    let wp1 = pcc::estimate_framework(&img, &FrameworkConfig::white_patch()).unwrap();
    let wp2 = pcc::estimate_framework(&img, &FrameworkConfig::white_patch()).unwrap();
    let bits = |v: [f64; 3]| v.map(f64::to_bits);
    let deterministic = bits(gw1.rgb()) == bits(gw2.rgb()) && bits(wp1.rgb()) == bits(wp2.rgb());

    let mean_stat = framework_statistic(&img, &FrameworkConfig::gray_world()).unwrap();
    let max_stat = framework_statistic(&img, &FrameworkConfig::white_patch()).unwrap();
    let dev = |a: [f64; 3], b: [f64; 3]| (0..3).map(|c| (a[c] - b[c]).abs()).fold(0.0, f64::max);
    let gw_dir = dev(gw1.rgb(), unit(direct_mean));
    let wp_dir = dev(wp1.rgb(), unit(direct_max));
    let stat_dev = dev(mean_stat, direct_mean).max(dev(max_stat, direct_max));
    outcome(
        deterministic && gw_dir <= 1e-9 && wp_dir <= 1e-9 && stat_dev <= 1e-12,
        format!(
            "bit-deterministic={deterministic}, gray-world direction gap {gw_dir:.1e}, white-patch gap {wp_dir:.1e} (tol 1e-9)"
        ),
    )
}

fn criterion_synthetic_recovery() -> Outcome {
    let spec = MosaicSpec::default();
    let scenes = mosaic_set(5, 50, &spec).unwrap();
    let cfg = PccConfig::new(Prior::Linear);
    let mut pcc_err = Vec::new();
    let mut gw_err = Vec::new();
    for s in &scenes {
        let est = match estimate(&s.image, &cfg) {
            Ok(o) => o.illuminant,
            Err(e) => return outcome(false, format!("PCC failed on a scene: {e}")),
        };
        pcc_err.push(recovery_error(s.illuminant, est).unwrap());
        let gw = pcc::baselines::gray_world(&s.image).unwrap();
        gw_err.push(recovery_error(s.illuminant, gw).unwrap());
    }
    let pcc_med = summarize(&pcc_err).unwrap().median;
    let gw_med = summarize(&gw_err).unwrap().median;
    outcome(
        pcc_med <= 3.0 && pcc_med < gw_med,
        format!("50 mosaics: PCC-Q2 median {pcc_med:.3}° (<= 3°), Gray-World median {gw_med:.3}°"),
    )
}

/// Informational only: runs on a user-supplied dataset subset if one is configured.
fn criterion_dataset_report() -> Outcome {
    let dir = std::env::var_os("PCC_DATASET_DIR").map(PathBuf::from);
    let gt = std::env::var_os("PCC_DATASET_GT").map(PathBuf::from);
    let (Some(dir), Some(gt)) = (dir, gt) else {
        return outcome(true, "informational: set PCC_DATASET_DIR and PCC_DATASET_GT to run on a real subset");
    };
    let index = match index_dataset(&dir, &gt) {
        Ok(i) => i,
        Err(e) => return outcome(false, format!("cannot index dataset: {e}")),
    };
    if index.len() < 20 {
        return outcome(false, format!("need at least 20 matched images, found {}", index.len()));
    }
    let methods = Method::all(&MethodParams::default());
    match run_benchmark_index(&index, false, &methods, &BenchmarkOptions::default()) {
        Ok(report) => {
            println!("{}", report.table());
            outcome(true, format!("informational: report over {} images (reference PCC-Q2 mean 3.9°, median 2.4°)", index.len()))
        }
        Err(e) => outcome(false, format!("benchmark failed: {e}")),
    }
}

fn criterion_performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (w, h, patch) = (1920, 1080, 60);
    let cols = w / patch;
    let patches: Vec<[f64; 3]> = (0..cols * (h / patch)).map(|_| [0; 3].map(|_| rng.gen_range(0.05..0.9))).collect();
    let img = LinearImage::from_fn(w, h, |x, y| {
        let base = patches[(y / patch) * cols + x / patch];
        let t = ((x * 31 + y * 17) % 23) as f64 / 23.0 * 0.05;
        base.map(|c| (c + t).min(1.0))
    })
    .unwrap();

    let cfg = PccConfig::new(Prior::Linear);
    let start = Instant::now();
    let out = estimate(&img, &cfg).unwrap();
    let pipeline = start.elapsed();

    let nodes: Vec<LabColor> = (0..800).map(|_| random_lab(&mut rng)).collect();
    let graph = AffinityGraph::build(&nodes, Prior::Linear, &GraphParams::default()).unwrap();
    let mut best = Duration::MAX;
    for _ in 0..3 {
        let t = Instant::now();
        solve_probabilities(&graph.system).unwrap();
        best = best.min(t.elapsed());
    }
    outcome(
        pipeline < Duration::from_secs(2) && best < Duration::from_millis(50),
        format!(
            "1920x1080 pipeline {:.3}s with {} segments (limit 2s), 800x800 solve {:.1}ms (limit 50ms)",
            pipeline.as_secs_f64(),
            out.superpixels.len(),
            best.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_determinism() -> Outcome {
    let spec = MosaicSpec { patch_size: 12, ..Default::default() };
    let samples: Vec<Sample> = mosaic_set(8, 10, &spec)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, s)| Sample { id: format!("scene_{i:02}"), image: s.image, ground_truth: s.illuminant })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let csv = write_dataset(dir.path(), &samples).unwrap();
    let index = index_dataset(dir.path(), &csv).unwrap();
    let methods = Method::all(&MethodParams::default());
    let run = |workers| {
        let opts = BenchmarkOptions { workers, ..Default::default() };
        run_benchmark_index(&index, false, &methods, &opts).unwrap()
    };
    let a = run(1);
    let b = run(2);
    let out_a = dir.path().join("run_a");
    let out_b = dir.path().join("run_b");
    a.write_to(&out_a).unwrap();
    b.write_to(&out_b).unwrap();
    let rows_a = std::fs::read(out_a.join("rows.csv")).unwrap();
    let rows_b = std::fs::read(out_b.join("rows.csv")).unwrap();
    let stats_equal = a.summary_json().unwrap() == b.summary_json().unwrap();
    outcome(
        rows_a == rows_b && stats_equal,
        format!("{} rows, byte-identical CSV={}, identical stats={stats_equal}", a.rows.len(), rows_a == rows_b),
    )
}

fn main() {
    // cargo passes harness flags such as --nocapture; a filter argument selects criteria by number
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 oracle equivalence", criterion_oracle_equivalence),
        ("2 nonnegativity and normalization", criterion_nonnegativity),
        ("3 metric identities", criterion_metric_identities),
        ("4 framework consistency", criterion_framework_consistency),
        ("5 synthetic recovery", criterion_synthetic_recovery),
        ("6 dataset report", criterion_dataset_report),
        ("7 performance", criterion_performance),
        ("8 determinism", criterion_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.starts_with(f.as_str())) {
            continue;
        }
        let o = check();
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
