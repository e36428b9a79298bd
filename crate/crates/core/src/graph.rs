//! Color-similarity graph over segments and the closed-form probability solve.
//!
//! The probabilities minimize `Σ q_i p_i² + ½ Σ_ij s_ij (p_i − p_j)²` subject to
//! `Σ p_i = 1`. In matrix form that is `pᵀ H p` with `H = D − S + Q`, whose optimum
//! on the constraint is `H⁻¹1 / (1ᵀ H⁻¹ 1)`.

use serde::{Deserialize, Serialize};

use crate::color::{lab_distance, LabColor};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, SquareMatrix};

/// How the top-probability prefix used for the final estimate is sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Keep segments until their cumulative pixel count reaches `top_fraction` of the image.
    #[default]
    Pixels,
    /// Keep `ceil(top_fraction · n)` segments.
    Segments,
}

/// Hyperparameters of the affinity graph and the final estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    /// Lab-distance scale in the similarity kernel.
    pub gamma: f64,
    /// Kernel regularizer; caps the weight of identical colors at `1 / epsilon`.
    pub epsilon: f64,
    /// Lightness threshold of the step prior, as a fraction of the brightest segment.
    pub q0_fraction: f64,
    /// Magnitude of the dark-segment penalty in both priors.
    pub prior_weight: f64,
    /// Fraction of the image kept for the weighted-sum estimate.
    pub top_fraction: f64,
    /// Added to the diagonal of `H` when the prior is identically zero.
    pub ridge: f64,
    #[serde(default)]
    pub selection: Selection,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            gamma: 2.0,
            epsilon: 1e-4,
            q0_fraction: 0.1,
            prior_weight: 0.1,
            top_fraction: 0.01,
            ridge: 1e-8,
            selection: Selection::Pixels,
        }
    }
}

impl GraphParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidArgument(format!("{what} out of range: {v}")));
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return bad("gamma", self.gamma);
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon", self.epsilon);
        }
        if !(self.q0_fraction > 0.0 && self.q0_fraction < 1.0) {
            return bad("q0_fraction", self.q0_fraction);
        }
        if !(self.top_fraction > 0.0 && self.top_fraction <= 1.0) {
            return bad("top_fraction", self.top_fraction);
        }
        if !(self.prior_weight.is_finite() && self.prior_weight >= 0.0) {
            return bad("prior_weight", self.prior_weight);
        }
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return bad("ridge", self.ridge);
        }
        Ok(())
    }
}

/// Diagonal prior penalizing dark segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prior {
    /// Fixed penalty below a lightness threshold.
    #[serde(rename = "q1")]
    Threshold,
    /// Penalty falling linearly from the darkest to the brightest segment.
    #[serde(rename = "q2")]
    Linear,
}

impl Prior {
    pub fn name(&self) -> &'static str {
        match self {
            Prior::Threshold => "q1",
            Prior::Linear => "q2",
        }
    }

    pub fn build(&self, nodes: &[LabColor], params: &GraphParams) -> Vec<f64> {
        match self {
            Prior::Threshold => build_prior_q1(nodes, params),
            Prior::Linear => build_prior_q2(nodes, params),
        }
    }
}

/// Pairwise kernel `1 / (ε + d_ij / γ)` with a zero diagonal.
pub fn build_similarity(nodes: &[LabColor], params: &GraphParams) -> SquareMatrix {
    let n = nodes.len();
    let mut s = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..i {
            let v = 1.0 / (params.epsilon + lab_distance(nodes[i], nodes[j]) / params.gamma);
            s.set(i, j, v);
            s.set(j, i, v);
        }
    }
    s
}

fn lightness_range(nodes: &[LabColor]) -> (f64, f64) {
    nodes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c.l), hi.max(c.l)))
}

/// `prior_weight` for segments darker than `q0_fraction · L_max`, zero otherwise.
pub fn build_prior_q1(nodes: &[LabColor], params: &GraphParams) -> Vec<f64> {
    let (_, l_max) = lightness_range(nodes);
    let threshold = params.q0_fraction * l_max;
    nodes
        .iter()
        .map(|c| if c.l < threshold { params.prior_weight } else { 0.0 })
        .collect()
}

/// `prior_weight · (L_max − L) / (L_max − L_min)`; a flat image gets `prior_weight / 2` everywhere.
pub fn build_prior_q2(nodes: &[LabColor], params: &GraphParams) -> Vec<f64> {
    let (l_min, l_max) = lightness_range(nodes);
    let span = l_max - l_min;
    if !(span > 0.0) {
        return vec![params.prior_weight / 2.0; nodes.len()];
    }
    nodes.iter().map(|c| params.prior_weight * (l_max - c.l) / span).collect()
}

/// `H = diag(rowsums(S)) − S + diag(Q)`, plus `ridge · I` if `Q` is all zero.
pub fn assemble_h(s: &SquareMatrix, q: &[f64], ridge: f64) -> Result<SquareMatrix> {
    let n = s.dim();
    if q.len() != n {
        return Err(Error::InvalidInput(format!("prior has {} entries, similarity is {n}x{n}", q.len())));
    }
    let shift = if q.iter().all(|&v| v == 0.0) { ridge } else { 0.0 };
    let degree = s.row_sums();
    Ok(SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            degree[i] - s.get(i, i) + q[i] + shift
        } else {
            -s.get(i, j)
        }
    }))
}

/// Segment weights: nonnegative and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Divides `weights` by their sum. Fails if the sum is not positive or an entry is negative.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidInput(format!("weights must have a positive finite sum, got {total}")));
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0.0 && w < -1e-12 * total) {
            return Err(Error::InvalidInput(format!("negative weight {w}")));
        }
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Solves `H y = 1` by Cholesky and returns `y / Σ y`.
pub fn solve_probabilities(h: &SquareMatrix) -> Result<ProbabilityVector> {
    let chol = Cholesky::factor(h)?;
    let y = chol.solve(&vec![1.0; h.dim()]);
    let total: f64 = y.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::SingularSystem { index: 0, pivot: chol.min_diagonal().powi(2) });
    }
    Ok(ProbabilityVector(y.into_iter().map(|v| v / total).collect()))
}

/// Similarity, prior, degrees and system matrix for one set of nodes.
#[derive(Debug, Clone)]
pub struct AffinityGraph {
    pub similarity: SquareMatrix,
    pub prior: Vec<f64>,
    pub degree: Vec<f64>,
    pub system: SquareMatrix,
    /// Whether the ridge was added because the prior was all zero.
    pub ridge_applied: bool,
}

impl AffinityGraph {
    pub fn build(nodes: &[LabColor], prior: Prior, params: &GraphParams) -> Result<Self> {
        params.validate()?;
        if nodes.is_empty() {
            return Err(Error::InvalidInput("graph needs at least one node".into()));
        }
        if let Some(c) = nodes.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite node color {c:?}")));
        }
        let similarity = build_similarity(nodes, params);
        let q = prior.build(nodes, params);
        Self::from_parts(similarity, q, params.ridge)
    }

    pub fn from_parts(similarity: SquareMatrix, prior: Vec<f64>, ridge: f64) -> Result<Self> {
        let system = assemble_h(&similarity, &prior, ridge)?;
        let degree = similarity.row_sums();
        let ridge_applied = prior.iter().all(|&v| v == 0.0) && ridge > 0.0;
        Ok(Self { similarity, prior, degree, system, ridge_applied })
    }

    pub fn len(&self) -> usize {
        self.prior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prior.is_empty()
    }

    pub fn solve(&self) -> Result<ProbabilityVector> {
        solve_probabilities(&self.system)
    }
}
