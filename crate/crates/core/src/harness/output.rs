use std::path::Path;

use image::{GrayImage, ImageBuffer, Luma, Rgb};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ProbabilityVector;
use crate::illuminant::Illuminant;
use crate::image::{linear_to_srgb, LinearImage};
use crate::superpixel::SuperpixelMap;

/// Normalization of the per-channel correction gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionMode {
    /// `out = in / (√3 · est)`: the neutral illuminant is the identity.
    #[default]
    Neutral,
    /// `out = in · est_g / est`: the green channel is left untouched.
    PreserveGreen,
}

/// Diagonal correction by the estimated illuminant, clipped to `[0, 1]`.
pub fn correct_image(img: &LinearImage, est: &Illuminant, mode: CorrectionMode) -> Result<LinearImage> {
    let e = est.rgb();
    if !est.is_positive() {
        return Err(Error::InvalidInput(format!("correction needs a positive illuminant, got {e:?}")));
    }
    let divisor = match mode {
        CorrectionMode::Neutral => e.map(|c| 3f64.sqrt() * c),
        CorrectionMode::PreserveGreen => e.map(|c| c / e[1]),
    };
    Ok(img.map_clipped(|px| [px[0] / divisor[0], px[1] / divisor[1], px[2] / divisor[2]]))
}

/// Per-pixel probability of its segment, scaled so the largest probability is white.
pub fn render_mask(map: &SuperpixelMap, p: &ProbabilityVector) -> Result<GrayImage> {
    if p.len() != map.len() {
        return Err(Error::InvalidInput(format!("{} probabilities for {} segments", p.len(), map.len())));
    }
    let probs = p.as_slice();
    let max = probs.iter().cloned().fold(0.0, f64::max);
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    let levels: Vec<u8> = probs.iter().map(|&v| (v.max(0.0) * scale).round().min(255.0) as u8).collect();
    Ok(GrayImage::from_fn(map.width() as u32, map.height() as u32, |x, y| {
        Luma([levels[map.label_at(x as usize, y as usize) as usize]])
    }))
}

/// Segment labels as a 16-bit grayscale image.
pub fn label_map(map: &SuperpixelMap) -> Result<ImageBuffer<Luma<u16>, Vec<u16>>> {
    if map.len() > u16::MAX as usize + 1 {
        return Err(Error::InvalidInput(format!("{} segments do not fit in 16 bits", map.len())));
    }
    Ok(ImageBuffer::from_fn(map.width() as u32, map.height() as u32, |x, y| {
        Luma([map.label_at(x as usize, y as usize) as u16])
    }))
}

/// Writes a PNG, 8-bit unless `sixteen_bit`; `encode_srgb` applies the sRGB curve first.
pub fn save_linear_image(img: &LinearImage, path: &Path, sixteen_bit: bool, encode_srgb: bool) -> Result<()> {
    let encode = |c: f64| if encode_srgb { linear_to_srgb(c) } else { c };
    let (w, h) = (img.width() as u32, img.height() as u32);
    let res = if sixteen_bit {
        ImageBuffer::from_fn(w, h, |x, y| {
            Rgb(img.pixel(x as usize, y as usize).map(|c| (encode(c) * 65535.0).round() as u16))
        })
        .save(path)
    } else {
        ImageBuffer::from_fn(w, h, |x, y| {
            Rgb(img.pixel(x as usize, y as usize).map(|c| (encode(c) * 255.0).round() as u8))
        })
        .save(path)
    };
    res.map_err(|source| Error::Image { path: path.to_path_buf(), source })
}
