//! Classical statistics-based estimators as instances of one Minkowski-norm framework:
//! smooth each channel with a Gaussian of scale σ, take the n-th order derivative
//! magnitude, and aggregate with a p-norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::illuminant::Illuminant;
use crate::image::LinearImage;

/// Order of the Minkowski norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Finite(f64),
    /// The `p → ∞` limit: per-channel maximum.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameworkConfig {
    /// Derivative order: 0, 1 or 2.
    pub order: u8,
    pub norm: Norm,
    /// Gaussian smoothing scale in pixels; 0 disables smoothing.
    pub sigma: f64,
}

impl FrameworkConfig {
    pub fn gray_world() -> Self {
        Self { order: 0, norm: Norm::Finite(1.0), sigma: 0.0 }
    }

    pub fn white_patch() -> Self {
        Self { order: 0, norm: Norm::Max, sigma: 0.0 }
    }

    pub fn shades_of_gray(p: f64) -> Self {
        Self { order: 0, norm: Norm::Finite(p), sigma: 0.0 }
    }

    pub fn gray_edge(p: f64, sigma: f64) -> Self {
        Self { order: 1, norm: Norm::Finite(p), sigma }
    }

    pub fn gray_edge_2nd(p: f64, sigma: f64) -> Self {
        Self { order: 2, norm: Norm::Finite(p), sigma }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order > 2 {
            return Err(Error::InvalidArgument(format!("derivative order must be 0, 1 or 2, got {}", self.order)));
        }
        if let Norm::Finite(p) = self.norm {
            if !(p.is_finite() && p >= 1.0) {
                return Err(Error::InvalidArgument(format!("Minkowski order must be >= 1, got {p}")));
            }
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if self.order > 0 && self.sigma == 0.0 {
            return Err(Error::InvalidArgument("derivative estimators need sigma > 0".into()));
        }
        Ok(())
    }
}

pub fn gray_world(img: &LinearImage) -> Result<Illuminant> {
    estimate_framework(img, &FrameworkConfig::gray_world())
}

pub fn white_patch(img: &LinearImage) -> Result<Illuminant> {
    estimate_framework(img, &FrameworkConfig::white_patch())
}

pub fn shades_of_gray(img: &LinearImage, p: f64) -> Result<Illuminant> {
    estimate_framework(img, &FrameworkConfig::shades_of_gray(p))
}

pub fn gray_edge(img: &LinearImage, p: f64, sigma: f64) -> Result<Illuminant> {
    estimate_framework(img, &FrameworkConfig::gray_edge(p, sigma))
}

pub fn gray_edge_2nd(img: &LinearImage, p: f64, sigma: f64) -> Result<Illuminant> {
    estimate_framework(img, &FrameworkConfig::gray_edge_2nd(p, sigma))
}

/// Per-channel framework statistic, before unit normalization.
pub fn framework_statistic(img: &LinearImage, cfg: &FrameworkConfig) -> Result<[f64; 3]> {
    cfg.validate()?;
    let (w, h) = (img.width(), img.height());
    let mut out = [0.0; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        let mut plane = img.channel(c);
        if cfg.sigma > 0.0 {
            plane = gaussian_blur(&plane, w, h, cfg.sigma);
        }
        let magnitude = match cfg.order {
            0 => plane,
            1 => gradient_magnitude(&plane, w, h),
            _ => hessian_magnitude(&plane, w, h),
        };
        *slot = minkowski(&magnitude, cfg.norm);
    }
    Ok(out)
}

/// Estimates the illuminant with one framework setting.
pub fn estimate_framework(img: &LinearImage, cfg: &FrameworkConfig) -> Result<Illuminant> {
    let stat = framework_statistic(img, cfg)?;
    if stat.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateEstimate("framework statistic is zero in every channel".into()));
    }
    Illuminant::positive(stat)
}

fn minkowski(values: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::Max => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        Norm::Finite(p) if p == 1.0 => values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64,
        Norm::Finite(p) => {
            let mean = values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / values.len() as f64;
            mean.powf(1.0 / p)
        }
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// Separable Gaussian blur with replicated borders.
pub fn gaussian_blur(plane: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    let kernel = gaussian_kernel(sigma);
    let r = (kernel.len() / 2) as isize;
    let mut tmp = vec![0.0; plane.len()];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                acc += kv * row[clamp_index(x as isize + k as isize - r, w)];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; plane.len()];
    for y in 0..h {
        for (k, kv) in kernel.iter().enumerate() {
            let src = clamp_index(y as isize + k as isize - r, h) * w;
            let dst = y * w;
            for x in 0..w {
                out[dst + x] += kv * tmp[src + x];
            }
        }
    }
    out
}

/// `√(f_x² + f_y²)` from central differences, borders replicated.
pub fn gradient_magnitude(plane: &[f64], w: usize, h: usize) -> Vec<f64> {
    let at = |x: isize, y: isize| plane[clamp_index(y, h) * w + clamp_index(x, w)];
    let mut out = Vec::with_capacity(plane.len());
    for y in 0..h as isize {
        for x in 0..w as isize {
            let fx = 0.5 * (at(x + 1, y) - at(x - 1, y));
            let fy = 0.5 * (at(x, y + 1) - at(x, y - 1));
            out.push((fx * fx + fy * fy).sqrt());
        }
    }
    out
}

/// Frobenius norm of the Hessian from second-order central differences.
pub fn hessian_magnitude(plane: &[f64], w: usize, h: usize) -> Vec<f64> {
    let at = |x: isize, y: isize| plane[clamp_index(y, h) * w + clamp_index(x, w)];
    let mut out = Vec::with_capacity(plane.len());
    for y in 0..h as isize {
        for x in 0..w as isize {
            let c = at(x, y);
            let fxx = at(x + 1, y) - 2.0 * c + at(x - 1, y);
            let fyy = at(x, y + 1) - 2.0 * c + at(x, y - 1);
            let fxy = 0.25 * (at(x + 1, y + 1) - at(x + 1, y - 1) - at(x - 1, y + 1) + at(x - 1, y - 1));
            out.push((fxx * fxx + 2.0 * fxy * fxy + fyy * fyy).sqrt());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: [f64; 3]) -> [f64; 3] {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|c| c / n)
    }

    #[test]
    fn gray_world_on_uniform() {
        let img = LinearImage::uniform(5, 4, [0.4, 0.2, 0.2]).unwrap();
        let est = gray_world(&img).unwrap();
        let expect = unit([0.4, 0.2, 0.2]);
        for c in 0..3 {
            assert!((est.rgb()[c] - expect[c]).abs() < 1e-12);
        }
    }

    #[test]
    fn white_patch_takes_channel_maxima() {
        let img = LinearImage::new(3, 1, vec![[1.0, 0.1, 0.1], [0.2, 0.5, 0.0], [0.0, 0.3, 0.25]]).unwrap();
        let est = white_patch(&img).unwrap();
        let expect = unit([1.0, 0.5, 0.25]);
        for c in 0..3 {
            assert!((est.rgb()[c] - expect[c]).abs() < 1e-15);
        }
    }

    #[test]
    fn shades_of_gray_matches_direct_sum() {
        let px = vec![[0.1, 0.9, 0.3], [0.7, 0.2, 0.4], [0.5, 0.5, 0.6], [0.3, 0.1, 0.2]];
        let img = LinearImage::new(2, 2, px.clone()).unwrap();
        let stat = framework_statistic(&img, &FrameworkConfig::shades_of_gray(6.0)).unwrap();
        for c in 0..3 {
            let direct = (px.iter().map(|p| p[c].powi(6)).sum::<f64>() / 4.0).powf(1.0 / 6.0);
            assert!((stat[c] - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = LinearImage::uniform(16, 16, [0.5; 3]).unwrap();
        assert!(matches!(gray_edge(&img, 1.0, 1.0), Err(Error::DegenerateEstimate(_))));
        assert!(matches!(gray_edge_2nd(&img, 1.0, 1.0), Err(Error::DegenerateEstimate(_))));
    }

    #[test]
    fn all_zero_image_is_degenerate() {
        let img = LinearImage::uniform(4, 4, [0.0; 3]).unwrap();
        assert!(matches!(gray_world(&img), Err(Error::DegenerateEstimate(_))));
    }

    #[test]
    fn config_validation() {
        assert!(FrameworkConfig { order: 1, norm: Norm::Finite(1.0), sigma: 0.0 }.validate().is_err());
        assert!(FrameworkConfig { order: 3, norm: Norm::Finite(1.0), sigma: 1.0 }.validate().is_err());
        assert!(FrameworkConfig::shades_of_gray(0.5).validate().is_err());
        assert!(FrameworkConfig::gray_edge(1.0, 6.0).validate().is_ok());
    }

    #[test]
    fn ramp_gradient_is_constant_inside() {
        let (w, h) = (20, 12);
        let plane: Vec<f64> = (0..w * h).map(|p| 0.03 * (p % w) as f64 + 0.04 * (p / w) as f64).collect();
        let g = gradient_magnitude(&plane, w, h);
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                assert!((g[y * w + x] - 0.05).abs() < 1e-12);
            }
        }
        let hm = hessian_magnitude(&plane, w, h);
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                assert!(hm[y * w + x].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn blur_preserves_constants_and_mass() {
        let (w, h) = (9, 7);
        let flat = vec![0.25; w * h];
        assert!(gaussian_blur(&flat, w, h, 2.0).iter().all(|v| (v - 0.25).abs() < 1e-15));
        let k = gaussian_kernel(1.5);
        assert_eq!(k.len(), 11);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
