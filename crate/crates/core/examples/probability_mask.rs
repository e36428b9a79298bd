//! Write the PCC probability mask and the white-balanced image.
//!
//! ```text
//! cargo run --example probability_mask -- [image.png] [out_dir]
//! ```

use pcc::harness::save_linear_image;
use pcc::synthetic::{mosaic, MosaicSpec};
use pcc::{correct_image, estimate, load_linear_image, render_mask, CorrectionMode, PccConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pcc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(path) => load_linear_image(path.as_ref(), false)?,
        None => mosaic(&mut ChaCha8Rng::seed_from_u64(11), &MosaicSpec::default())?.image,
    };
    let out_dir = args.get(1).map(Into::into).unwrap_or_else(std::env::temp_dir);

    let out = estimate(&img, &PccConfig::default())?;
    let mask_path = out_dir.join("pcc_mask.png");
    render_mask(&out.superpixels, &out.probabilities)?.save(&mask_path).expect("write mask");

    let corrected = correct_image(&img, &out.illuminant, CorrectionMode::Neutral)?;
    let corrected_path = out_dir.join("pcc_corrected.png");
    save_linear_image(&corrected, &corrected_path, true, false)?;

    let p = out.probabilities.as_slice();
    let top = p.iter().cloned().fold(0.0, f64::max);
    println!("max segment probability {top:.4} over {} segments", p.len());
    println!("mask      {}", mask_path.display());
    println!("corrected {}", corrected_path.display());
    Ok(())
}
