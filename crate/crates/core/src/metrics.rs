//! Angular errors between illuminants and the five-number dataset summary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_vector(v: [f64; 3], what: &str) -> Result<f64> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} has non-finite channel: {v:?}")));
    }
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        return Err(Error::InvalidInput(format!("{what} is the zero vector")));
    }
    Ok(n)
}

/// Angle between two vectors via `atan2(|a × b|, a · b)`, which stays accurate near 0° and 180°.
fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    sin.atan2(cos).to_degrees()
}

/// Angle in degrees between the ground-truth and estimated illuminant vectors.
pub fn recovery_error(gt: impl Into<[f64; 3]>, est: impl Into<[f64; 3]>) -> Result<f64> {
    let (gt, est) = (gt.into(), est.into());
    check_vector(gt, "ground truth")?;
    check_vector(est, "estimate")?;
    Ok(angle_between(gt, est))
}

/// Angle in degrees between `gt / est` (element-wise) and the neutral vector `(1, 1, 1)`.
pub fn reproduction_error(gt: impl Into<[f64; 3]>, est: impl Into<[f64; 3]>) -> Result<f64> {
    let (gt, est) = (gt.into(), est.into());
    check_vector(gt, "ground truth")?;
    if est.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(Error::InvalidInput(format!("estimate channels must be positive, got {est:?}")));
    }
    let r = [gt[0] / est[0], gt[1] / est[1], gt[2] / est[2]];
    check_vector(r, "channel ratio")?;
    Ok(angle_between(r, [1.0; 3]))
}

/// Summary statistics of a set of angular errors, all in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub best25_mean: f64,
    pub mean: f64,
    pub median: f64,
    pub trimean: f64,
    pub worst25_mean: f64,
    pub count: usize,
}

/// Linear interpolation between order statistics at fractional rank `q · (N − 1)`.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Best-25% mean, mean, median, Tukey's trimean and worst-25% mean.
///
/// The tail sets hold `ceil(N / 4)` samples; quartiles interpolate linearly.
pub fn summarize(errors: &[f64]) -> Result<ErrorStats> {
    if errors.is_empty() {
        return Err(Error::InvalidInput("cannot summarize an empty error list".into()));
    }
    if let Some(e) = errors.iter().find(|e| !e.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite error value {e}")));
    }
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let tail = n.div_ceil(4);
    let mean_of = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let median = quantile(&sorted, 0.5);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    Ok(ErrorStats {
        best25_mean: mean_of(&sorted[..tail]),
        mean: mean_of(&sorted),
        median,
        trimean: (q1 + 2.0 * median + q3) / 4.0,
        worst25_mean: mean_of(&sorted[n - tail..]),
        count: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn recovery_examples() {
        assert_eq!(recovery_error([0.3, 0.5, 0.2], [0.3, 0.5, 0.2]).unwrap(), 0.0);
        assert!((recovery_error([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap() - 90.0).abs() < 1e-9);
        assert!((recovery_error([1.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap() - 45.0).abs() < 1e-9);
        assert!(recovery_error([0.0; 3], [1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn reproduction_examples() {
        assert_eq!(reproduction_error([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]).unwrap(), 0.0);
        // acos(4 / (√6 √3)), evaluated independently
        let e = reproduction_error([2.0, 1.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        assert!((e - 19.471_220_634_490_674).abs() < 1e-9, "{e}");
        assert!(reproduction_error([1.0; 3], [1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn summary_examples() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.median, s.trimean, s.mean, s.best25_mean, s.worst25_mean), (3.0, 3.0, 3.0, 1.5, 4.5));
        let s = summarize(&[2.5; 7]).unwrap();
        assert!([s.best25_mean, s.mean, s.median, s.trimean, s.worst25_mean].iter().all(|&v| v == 2.5));
        let s = summarize(&[4.2]).unwrap();
        assert_eq!((s.median, s.trimean, s.best25_mean, s.worst25_mean, s.count), (4.2, 4.2, 4.2, 4.2, 1));
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn even_count_median_is_midpoint() {
        let s = summarize(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.5);
        // Q1 at rank 0.75 → 1.75, Q3 at rank 2.25 → 3.25
        assert_eq!(s.trimean, (1.75 + 5.0 + 3.25) / 4.0);
    }

    fn positive_vec() -> impl Strategy<Value = [f64; 3]> {
        [0.01..1.0f64, 0.01..1.0f64, 0.01..1.0f64]
    }

    proptest! {
        #[test]
        fn recovery_symmetric_and_scale_free(a in positive_vec(), b in positive_vec(), k in 0.1..10.0f64) {
            let e = recovery_error(a, b).unwrap();
            prop_assert!((e - recovery_error(b, a).unwrap()).abs() < 1e-9);
            prop_assert!((e - recovery_error(a.map(|v| v * k), b).unwrap()).abs() < 1e-6);
            prop_assert!(recovery_error(a, a.map(|v| v * k)).unwrap() < 1e-5);
        }

        #[test]
        fn reproduction_scale_free_in_estimate(a in positive_vec(), b in positive_vec(), k in 0.1..10.0f64) {
            let e = reproduction_error(a, b).unwrap();
            prop_assert!((e - reproduction_error(a, b.map(|v| v * k)).unwrap()).abs() < 1e-6);
        }

        #[test]
        fn summary_ordering_and_permutation(mut v in proptest::collection::vec(0.0..40.0f64, 1..60)) {
            let s = summarize(&v).unwrap();
            prop_assert!(s.best25_mean <= s.median + 1e-12 && s.median <= s.worst25_mean + 1e-12);
            prop_assert!(s.best25_mean <= s.mean + 1e-12 && s.mean <= s.worst25_mean + 1e-12);
            v.reverse();
            let r = summarize(&v).unwrap();
            prop_assert!((r.mean - s.mean).abs() < 1e-9);
            prop_assert_eq!(r.median, s.median);
            prop_assert_eq!(r.trimean, s.trimean);
            prop_assert_eq!(r.best25_mean, s.best25_mean);
        }
    }
}
