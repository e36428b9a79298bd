//! The full probabilistic estimator: superpixels → affinity graph → closed-form
//! probabilities → weighted sum of the most probable segments.

use serde::{Deserialize, Serialize};

use crate::color::{rgb_to_lab, LabColor};
use crate::error::{Error, Result};
use crate::graph::{AffinityGraph, GraphParams, Prior, ProbabilityVector, Selection};
use crate::illuminant::Illuminant;
use crate::image::LinearImage;
use crate::superpixel::{segment, SlicParams, SuperpixelMap};

/// The segments retained for the final estimate and their renormalized weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSelection {
    /// Segment indices in descending probability order.
    pub segments: Vec<usize>,
    /// Weights over `segments`, summing to one.
    pub weights: Vec<f64>,
    /// `Σ weight · mean color`, before unit normalization.
    pub raw: [f64; 3],
}

/// Picks the highest-probability prefix of segments and forms their weighted mean color.
///
/// Ties in probability are broken by segment index.
pub fn select_weighted(map: &SuperpixelMap, p: &ProbabilityVector, params: &GraphParams) -> Result<WeightedSelection> {
    let probs = p.as_slice();
    if probs.len() != map.len() {
        return Err(Error::InvalidInput(format!(
            "probability vector has {} entries for {} segments",
            probs.len(),
            map.len()
        )));
    }
    if !(params.top_fraction > 0.0 && params.top_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!("top_fraction out of range: {}", params.top_fraction)));
    }
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));

    let keep = match params.selection {
        Selection::Pixels => {
            let need = params.top_fraction * map.total_pixels() as f64;
            let mut covered = 0usize;
            let mut keep = 0;
            for &k in &order {
                covered += map.sizes()[k];
                keep += 1;
                if covered as f64 >= need {
                    break;
                }
            }
            keep
        }
        Selection::Segments => ((params.top_fraction * order.len() as f64).ceil() as usize).clamp(1, order.len()),
    };
    order.truncate(keep);

    let weights: Vec<f64> = if keep == probs.len() {
        order.iter().map(|&k| probs[k]).collect()
    } else {
        let mass: f64 = order.iter().map(|&k| probs[k]).sum();
        if !(mass > 0.0) {
            return Err(Error::DegenerateEstimate("selected segments carry no probability".into()));
        }
        order.iter().map(|&k| probs[k] / mass).collect()
    };

    let mut raw = [0.0; 3];
    for (&k, &w) in order.iter().zip(&weights) {
        let m = map.means()[k];
        for c in 0..3 {
            raw[c] += w * m[c];
        }
    }
    Ok(WeightedSelection { segments: order, weights, raw })
}

/// Weighted-sum illuminant from the most probable segments.
pub fn estimate_illuminant(map: &SuperpixelMap, p: &ProbabilityVector, params: &GraphParams) -> Result<Illuminant> {
    let sel = select_weighted(map, p, params)?;
    Illuminant::positive(sel.raw)
}

/// Lab colors of the segment means, the graph's nodes.
pub fn segment_nodes(map: &SuperpixelMap) -> Result<Vec<LabColor>> {
    map.means().iter().map(|&c| rgb_to_lab(c)).collect()
}

/// Settings for the end-to-end estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PccConfig {
    pub slic: SlicParams,
    pub graph: GraphParams,
    pub prior: Prior,
}

impl PccConfig {
    pub fn new(prior: Prior) -> Self {
        Self { slic: SlicParams::default(), graph: GraphParams::default(), prior }
    }
}

impl Default for PccConfig {
    fn default() -> Self {
        Self::new(Prior::Linear)
    }
}

/// Everything the estimator produced for one image.
#[derive(Debug, Clone)]
pub struct PccOutput {
    pub superpixels: SuperpixelMap,
    pub probabilities: ProbabilityVector,
    pub illuminant: Illuminant,
}

/// Runs the estimator on `img`. The target segment count is capped at the pixel count.
pub fn estimate(img: &LinearImage, cfg: &PccConfig) -> Result<PccOutput> {
    cfg.graph.validate()?;
    let slic = SlicParams { target_segments: cfg.slic.target_segments.min(img.len()), ..cfg.slic };
    let map = segment(img, &slic)?;
    estimate_from_segments(map, cfg)
}

/// Runs the graph stage on an existing segmentation.
pub fn estimate_from_segments(map: SuperpixelMap, cfg: &PccConfig) -> Result<PccOutput> {
    let nodes = segment_nodes(&map)?;
    let graph = AffinityGraph::build(&nodes, cfg.prior, &cfg.graph)?;
    let probabilities = graph.solve()?;
    let illuminant = estimate_illuminant(&map, &probabilities, &cfg.graph)?;
    Ok(PccOutput { superpixels: map, probabilities, illuminant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpixel::as_single_pixels;

    fn two_segment_map() -> SuperpixelMap {
        let img = LinearImage::from_fn(10, 10, |x, _| if x < 5 { [0.8, 0.4, 0.2] } else { [0.1, 0.3, 0.6] }).unwrap();
        let labels = (0..100).map(|p| if p % 10 < 5 { 0 } else { 1 }).collect();
        SuperpixelMap::from_labels(&img, labels).unwrap()
    }

    #[test]
    fn prefix_rule_picks_first_segment() {
        let map = two_segment_map();
        assert_eq!(map.sizes(), &[50, 50]);
        let p = ProbabilityVector::normalize(vec![0.9, 0.1]).unwrap();
        let est = estimate_illuminant(&map, &p, &GraphParams::default()).unwrap();
        let expect = Illuminant::new([0.8, 0.4, 0.2]).unwrap();
        for c in 0..3 {
            assert!((est.rgb()[c] - expect.rgb()[c]).abs() < 1e-15);
        }
    }

    #[test]
    fn full_selection_is_plain_weighted_sum() {
        let map = two_segment_map();
        let p = ProbabilityVector::normalize(vec![0.25, 0.75]).unwrap();
        let params = GraphParams { top_fraction: 1.0, ..Default::default() };
        let sel = select_weighted(&map, &p, &params).unwrap();
        assert_eq!(sel.segments, vec![1, 0]);
        assert_eq!(sel.weights, vec![0.75, 0.25]);
        let expect = [0.25 * 0.8 + 0.75 * 0.1, 0.25 * 0.4 + 0.75 * 0.3, 0.25 * 0.2 + 0.75 * 0.6];
        for c in 0..3 {
            assert!((sel.raw[c] - expect[c]).abs() < 1e-15);
        }
    }

    #[test]
    fn ties_break_by_index() {
        let map = two_segment_map();
        let p = ProbabilityVector::uniform(2);
        let sel = select_weighted(&map, &p, &GraphParams::default()).unwrap();
        assert_eq!(sel.segments, vec![0]);
    }

    #[test]
    fn segment_count_selection() {
        let img = LinearImage::from_fn(10, 1, |x, _| [0.1 * x as f64, 0.5, 0.5]).unwrap();
        let map = as_single_pixels(&img);
        let p = ProbabilityVector::normalize((1..=10).map(|v| v as f64).collect()).unwrap();
        let params = GraphParams { top_fraction: 0.25, selection: Selection::Segments, ..Default::default() };
        let sel = select_weighted(&map, &p, &params).unwrap();
        assert_eq!(sel.segments, vec![9, 8, 7]);
    }

    #[test]
    fn uniform_image_recovers_its_color() {
        let c = [0.6, 0.45, 0.2];
        let img = LinearImage::uniform(40, 30, c).unwrap();
        for prior in [Prior::Threshold, Prior::Linear] {
            let cfg = PccConfig { slic: SlicParams { target_segments: 20, ..Default::default() }, ..PccConfig::new(prior) };
            let out = estimate(&img, &cfg).unwrap();
            let expect = Illuminant::new(c).unwrap();
            for k in 0..3 {
                assert!((out.illuminant.rgb()[k] - expect.rgb()[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dark_single_channel_is_degenerate() {
        let img = LinearImage::from_fn(8, 8, |x, _| [0.1 + 0.05 * x as f64, 0.0, 0.0]).unwrap();
        let map = as_single_pixels(&img);
        let err = estimate_from_segments(map, &PccConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateEstimate(_)), "{err:?}");
    }

    #[test]
    fn misaligned_probabilities_rejected() {
        let map = two_segment_map();
        let p = ProbabilityVector::uniform(3);
        assert!(estimate_illuminant(&map, &p, &GraphParams::default()).is_err());
    }
}
