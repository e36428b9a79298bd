//! Mondrian-style test scenes with a known illuminant.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::illuminant::Illuminant;
use crate::image::LinearImage;

/// Layout and statistics of a generated mosaic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MosaicSpec {
    /// Patches per side; the scene has `grid²` patches.
    pub grid: usize,
    pub patch_size: usize,
    /// Number of bright neutral patches, at least one.
    pub achromatic_patches: usize,
    /// Reflectance range of the colored patches.
    pub reflectance: (f64, f64),
    /// Reflectance range of the neutral patches.
    pub achromatic_reflectance: (f64, f64),
    /// Per-pixel uniform noise amplitude.
    pub noise: f64,
    /// Red/green and blue/green illuminant ratios are drawn log-uniformly from `[1/k, k]`.
    pub max_channel_ratio: f64,
    /// Value of the brightest channel of a perfect white patch.
    pub exposure: f64,
}

impl Default for MosaicSpec {
    fn default() -> Self {
        Self {
            grid: 8,
            patch_size: 24,
            achromatic_patches: 1,
            reflectance: (0.05, 0.85),
            achromatic_reflectance: (0.9, 1.0),
            noise: 0.004,
            max_channel_ratio: 2.0,
            exposure: 0.95,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub image: LinearImage,
    pub illuminant: Illuminant,
}

/// Draws a diagonal illuminant `(r, 1, b)` with both ratios in `[1/k, k]`.
pub fn random_illuminant(rng: &mut impl Rng, max_ratio: f64) -> [f64; 3] {
    let ln = max_ratio.ln();
    [rng.gen_range(-ln..=ln).exp(), 1.0, rng.gen_range(-ln..=ln).exp()]
}

/// Renders one mosaic of random reflectances under a random illuminant.
pub fn mosaic(rng: &mut impl Rng, spec: &MosaicSpec) -> Result<SyntheticScene> {
    let patches = spec.grid * spec.grid;
    let neutral = sample(rng, patches, spec.achromatic_patches.clamp(1, patches)).into_vec();
    let reflect: Vec<[f64; 3]> = (0..patches)
        .map(|k| {
            if neutral.contains(&k) {
                let v = rng.gen_range(spec.achromatic_reflectance.0..=spec.achromatic_reflectance.1);
                [v; 3]
            } else {
                [0; 3].map(|_| rng.gen_range(spec.reflectance.0..=spec.reflectance.1))
            }
        })
        .collect();
    let light = random_illuminant(rng, spec.max_channel_ratio);
    let peak = light.iter().cloned().fold(0.0, f64::max);
    let gain = light.map(|c| spec.exposure * c / peak);

    let side = spec.grid * spec.patch_size;
    let mut data = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let r = reflect[(y / spec.patch_size) * spec.grid + x / spec.patch_size];
            let mut px = [0.0; 3];
            for c in 0..3 {
                let noise = if spec.noise > 0.0 { rng.gen_range(-spec.noise..=spec.noise) } else { 0.0 };
                px[c] = (r[c] * gain[c] + noise).clamp(0.0, 1.0);
            }
            data.push(px);
        }
    }
    Ok(SyntheticScene { image: LinearImage::new(side, side, data)?, illuminant: Illuminant::new(light)? })
}

/// `count` scenes from a seeded generator; identical seeds give identical scenes.
pub fn mosaic_set(seed: u64, count: usize, spec: &MosaicSpec) -> Result<Vec<SyntheticScene>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| mosaic(&mut rng, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenes_are_reproducible_and_bounded() {
        let spec = MosaicSpec { grid: 4, patch_size: 5, ..Default::default() };
        let a = mosaic_set(3, 2, &spec).unwrap();
        let b = mosaic_set(3, 2, &spec).unwrap();
        assert_eq!(a[1].image, b[1].image);
        assert_eq!(a[0].image.width(), 20);
        let rgb = a[0].illuminant.rgb();
        assert!(rgb[0] / rgb[1] >= 0.5 - 1e-12 && rgb[0] / rgb[1] <= 2.0 + 1e-12);
        assert!(rgb[2] / rgb[1] >= 0.5 - 1e-12 && rgb[2] / rgb[1] <= 2.0 + 1e-12);
    }
}
