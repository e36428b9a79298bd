//! Linear RGB ↔ CIELAB under the D65 reference white.
//!
//! Inputs are scene-linear RGB with sRGB primaries. The XYZ reference white is
//! the image of `(1, 1, 1)` under the primaries matrix, so every achromatic
//! input lands on the neutral axis (`a = b = 0`).

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Linear sRGB (D65) to CIE XYZ.
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

static XYZ_TO_RGB: LazyLock<[[f64; 3]; 3]> = LazyLock::new(|| invert3(&RGB_TO_XYZ));

static WHITE: LazyLock<[f64; 3]> = LazyLock::new(|| {
    [0, 1, 2].map(|r| RGB_TO_XYZ[r].iter().sum::<f64>())
});

const DELTA: f64 = 6.0 / 29.0;

/// A CIELAB color. `l` is lightness in `[0, 100]` for in-gamut inputs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }

    pub fn is_finite(&self) -> bool {
        self.l.is_finite() && self.a.is_finite() && self.b.is_finite()
    }
}

fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(u: f64) -> f64 {
    if u > DELTA {
        u * u * u
    } else {
        3.0 * DELTA * DELTA * (u - 4.0 / 29.0)
    }
}

fn mul3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
}

fn invert3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let cof = [
        [c(1, 1, 2, 2), -c(1, 0, 2, 2), c(1, 0, 2, 1)],
        [-c(0, 1, 2, 2), c(0, 0, 2, 2), -c(0, 0, 2, 1)],
        [c(0, 1, 1, 2), -c(0, 0, 1, 2), c(0, 0, 1, 1)],
    ];
    let det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    // adjugate is the transposed cofactor matrix
    let mut inv = [[0.0; 3]; 3];
    for r in 0..3 {
        for k in 0..3 {
            inv[r][k] = cof[k][r] / det;
        }
    }
    inv
}

/// Unchecked conversion for callers that already validated their pixels.
pub(crate) fn rgb_to_lab_unchecked(c: [f64; 3]) -> LabColor {
    let xyz = mul3(&RGB_TO_XYZ, c);
    let white = &*WHITE;
    let fx = lab_f(xyz[0] / white[0]);
    let fy = lab_f(xyz[1] / white[1]);
    let fz = lab_f(xyz[2] / white[2]);
    LabColor {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// Converts a scene-linear RGB triple to CIELAB (D65).
pub fn rgb_to_lab(c: [f64; 3]) -> Result<LabColor> {
    if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "rgb_to_lab expects finite non-negative channels, got {c:?}"
        )));
    }
    Ok(rgb_to_lab_unchecked(c))
}

/// Inverse of [`rgb_to_lab`]; may return out-of-gamut (negative) channels.
pub fn lab_to_rgb(lab: LabColor) -> [f64; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let white = &*WHITE;
    let xyz = [
        white[0] * lab_f_inv(fx),
        white[1] * lab_f_inv(fy),
        white[2] * lab_f_inv(fz),
    ];
    mul3(&XYZ_TO_RGB, xyz)
}

/// Euclidean distance over `(L, a, b)`.
pub fn lab_distance(p: LabColor, q: LabColor) -> f64 {
    let dl = p.l - q.l;
    let da = p.a - q.a;
    let db = p.b - q.b;
    (dl * dl + da * da + db * db).sqrt()
}

/// Relative luminance `Y` of a linear RGB triple (white has `Y = 1`).
pub fn luminance(c: [f64; 3]) -> f64 {
    mul3(&RGB_TO_XYZ, c)[1] / WHITE[1]
}

/// CIELAB lightness `L` of a linear RGB triple.
pub fn lightness(c: [f64; 3]) -> f64 {
    116.0 * lab_f(luminance(c)) - 16.0
}
