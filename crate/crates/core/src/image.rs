//! Scene-linear RGB rasters.

use crate::error::{Error, Result};

/// An H×W raster of scene-linear RGB triples, every channel finite and in `[0, 1]`.
///
/// Pixels are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl LinearImage {
    pub fn new(width: usize, height: usize, data: Vec<[f64; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image must have at least one pixel, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some((idx, px)) = data
            .iter()
            .enumerate()
            .find(|(_, px)| px.iter().any(|c| !c.is_finite() || !(0.0..=1.0).contains(c)))
        {
            return Err(Error::InvalidInput(format!(
                "pixel {idx} has channel outside [0, 1]: {px:?}"
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [f64; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn uniform(width: usize, height: usize, color: [f64; 3]) -> Result<Self> {
        Self::new(width, height, vec![color; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }

    /// One channel as a contiguous row-major plane.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.data.iter().map(|px| px[c]).collect()
    }

    /// Applies `f` to every pixel and clips the result to `[0, 1]`.
    pub fn map_clipped(&self, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> LinearImage {
        let data = self
            .data
            .iter()
            .map(|&px| f(px).map(|c| if c.is_nan() { 0.0 } else { c.clamp(0.0, 1.0) }))
            .collect();
        LinearImage { width: self.width, height: self.height, data }
    }

    pub fn into_pixels(self) -> Vec<[f64; 3]> {
        self.data
    }
}

/// Inverse of the sRGB transfer curve for one encoded channel in `[0, 1]`.
pub fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// sRGB transfer curve for one linear channel in `[0, 1]`.
pub fn linear_to_srgb(v: f64) -> f64 {
    if v <= 0.003_130_8 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_and_empty() {
        assert!(LinearImage::new(0, 3, vec![]).is_err());
        assert!(LinearImage::new(1, 1, vec![[1.5, 0.0, 0.0]]).is_err());
        assert!(LinearImage::new(1, 1, vec![[f64::NAN, 0.0, 0.0]]).is_err());
        assert!(LinearImage::new(2, 1, vec![[0.0; 3]]).is_err());
        assert!(LinearImage::new(1, 1, vec![[1.0, 0.0, 0.5]]).is_ok());
    }

    #[test]
    fn from_fn_is_row_major() {
        let img = LinearImage::from_fn(3, 2, |x, y| [x as f64 / 4.0, y as f64 / 4.0, 0.0]).unwrap();
        assert_eq!(img.pixel(2, 1), [0.5, 0.25, 0.0]);
        assert_eq!(img.pixels()[5], [0.5, 0.25, 0.0]);
    }

    #[test]
    fn srgb_curve_round_trips() {
        for i in 0..=100 {
            let v = i as f64 / 100.0;
            assert!((linear_to_srgb(srgb_to_linear(v)) - v).abs() < 1e-12);
        }
        assert_eq!(srgb_to_linear(1.0), 1.0);
    }
}
