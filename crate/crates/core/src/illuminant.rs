use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-norm RGB direction of a light source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Illuminant {
    rgb: [f64; 3],
}

impl Illuminant {
    /// Normalizes a finite, non-negative, non-zero triple to unit length.
    pub fn new(rgb: [f64; 3]) -> Result<Self> {
        if rgb.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidInput(format!("illuminant channels must be finite and non-negative, got {rgb:?}")));
        }
        let norm = norm3(rgb);
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("illuminant must be non-zero".into()));
        }
        Ok(Self { rgb: rgb.map(|c| c / norm) })
    }

    /// Like [`Illuminant::new`] but every channel must be strictly positive.
    pub fn positive(rgb: [f64; 3]) -> Result<Self> {
        if rgb.iter().any(|c| !(*c > 0.0)) || rgb.iter().any(|c| !c.is_finite()) {
            return Err(Error::DegenerateEstimate(format!(
                "estimate has a non-positive channel: {rgb:?}"
            )));
        }
        Self::new(rgb)
    }

    /// The neutral illuminant `(1, 1, 1) / √3`.
    pub fn neutral() -> Self {
        Self::new([1.0; 3]).expect("neutral is valid")
    }

    pub fn rgb(&self) -> [f64; 3] {
        self.rgb
    }

    pub fn is_positive(&self) -> bool {
        self.rgb.iter().all(|&c| c > 0.0)
    }
}

impl From<Illuminant> for [f64; 3] {
    fn from(i: Illuminant) -> Self {
        i.rgb
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
