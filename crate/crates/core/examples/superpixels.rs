//! Segment an image into SLIC superpixels and save the label map.
//!
//! ```text
//! cargo run --example superpixels -- [image.png] [segments]
//! ```

use pcc::harness::label_map;
use pcc::synthetic::{mosaic, MosaicSpec};
use pcc::{load_linear_image, segment, SlicParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pcc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(path) => load_linear_image(path.as_ref(), false)?,
        None => mosaic(&mut ChaCha8Rng::seed_from_u64(1), &MosaicSpec::default())?.image,
    };
    let target = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let params = SlicParams { target_segments: target, ..Default::default() };
    let map = segment(&img, &params)?;

    let sizes = map.sizes();
    let min = sizes.iter().min().unwrap();
    let max = sizes.iter().max().unwrap();
    println!("{} segments requested, {} produced, sizes {min}..{max}", target, map.len());

    let out = std::env::temp_dir().join("pcc_labels.png");
    label_map(&map)?.save(&out).expect("write label map");
    println!("labels written to {}", out.display());
    Ok(())
}
