//! Run every Minkowski-framework baseline on one synthetic scene.
//!
//! ```text
//! cargo run --example baselines
//! ```

use pcc::baselines::{estimate_framework, FrameworkConfig, Norm};
use pcc::synthetic::{mosaic, MosaicSpec};
use pcc::{recovery_error, reproduction_error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pcc::Result<()> {
    let scene = mosaic(&mut ChaCha8Rng::seed_from_u64(7), &MosaicSpec::default())?;
    let gt = scene.illuminant;
    println!("ground truth [{:.4}, {:.4}, {:.4}]", gt.rgb()[0], gt.rgb()[1], gt.rgb()[2]);

    let methods = [
        ("gray_world", FrameworkConfig::gray_world()),
        ("white_patch", FrameworkConfig::white_patch()),
        ("shades_of_gray p=6", FrameworkConfig::shades_of_gray(6.0)),
        ("gray_edge p=1 s=6", FrameworkConfig::gray_edge(1.0, 6.0)),
        ("gray_edge_2nd p=1 s=1", FrameworkConfig::gray_edge_2nd(1.0, 1.0)),
        ("max edge s=2", FrameworkConfig { order: 1, norm: Norm::Max, sigma: 2.0 }),
    ];
    println!("{:<22} {:>10} {:>10}", "method", "recovery", "reprod.");
    for (name, cfg) in methods {
        let est = estimate_framework(&scene.image, &cfg)?;
        println!(
            "{name:<22} {:>9.3}° {:>9.3}°",
            recovery_error(gt, est)?,
            reproduction_error(gt, est)?
        );
    }
    Ok(())
}
