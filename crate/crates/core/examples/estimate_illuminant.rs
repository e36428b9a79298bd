//! Estimate the illuminant of an image with both PCC priors.
//!
//! ```text
//! cargo run --example estimate_illuminant -- [image.png] [--srgb]
//! ```
//! Without an argument a synthetic mosaic with known ground truth is used.

use pcc::synthetic::{mosaic, MosaicSpec};
use pcc::{estimate, load_linear_image, recovery_error, PccConfig, Prior};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pcc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let srgb = args.iter().any(|a| a == "--srgb");
    let (img, truth) = match args.iter().find(|a| !a.starts_with("--")) {
        Some(path) => (load_linear_image(path.as_ref(), srgb)?, None),
        None => {
            let scene = mosaic(&mut ChaCha8Rng::seed_from_u64(42), &MosaicSpec::default())?;
            (scene.image, Some(scene.illuminant))
        }
    };
    println!("image {}x{}", img.width(), img.height());

    for prior in [Prior::Threshold, Prior::Linear] {
        let out = estimate(&img, &PccConfig::new(prior))?;
        let rgb = out.illuminant.rgb();
        print!("pcc_{:<3} [{:.4}, {:.4}, {:.4}] from {} segments", prior.name(), rgb[0], rgb[1], rgb[2], out.superpixels.len());
        match truth {
            Some(gt) => println!(", recovery error {:.3} deg", recovery_error(gt, out.illuminant)?),
            None => println!(),
        }
    }
    Ok(())
}
