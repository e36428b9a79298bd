//! Direct minimization of the probability objective, used to validate the closed form.
//!
//! Works on the raw sums `Σ q_i p_i² + ½ Σ_ij s_ij (p_i − p_j)²` and never forms `H`.
//! Accelerated projected gradient descent over the probability simplex, started
//! from the uniform vector, with adaptive restart.

use crate::error::{Error, Result};
use crate::graph::ProbabilityVector;
use crate::linalg::SquareMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub max_iterations: usize,
    /// Stop once an iteration moves no coordinate by more than this.
    pub step_tolerance: f64,
    /// Largest problem the oracle accepts.
    pub max_nodes: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self { max_iterations: 2_000_000, step_tolerance: 1e-15, max_nodes: 12 }
    }
}

/// Objective value at `p`, evaluated term by term.
pub fn objective(s: &SquareMatrix, q: &[f64], p: &[f64]) -> f64 {
    let n = p.len();
    let mut prior = 0.0;
    let mut smooth = 0.0;
    for i in 0..n {
        prior += p[i] * p[i] * q[i];
        for j in 0..n {
            let d = p[i] - p[j];
            smooth += d * d * s.get(i, j);
        }
    }
    prior + 0.5 * smooth
}

fn gradient(s: &SquareMatrix, q: &[f64], p: &[f64], out: &mut [f64]) {
    let n = p.len();
    for k in 0..n {
        let mut g = 2.0 * q[k] * p[k];
        for j in 0..n {
            g += 2.0 * s.get(k, j) * (p[k] - p[j]);
        }
        out[k] = g;
    }
}

/// Euclidean projection onto `{p : p ≥ 0, Σ p = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Minimizes the objective over the simplex for a small graph.
pub fn oracle_minimize(s: &SquareMatrix, q: &[f64], settings: &OracleSettings) -> Result<ProbabilityVector> {
    let n = s.dim();
    if n == 0 || q.len() != n {
        return Err(Error::InvalidInput(format!("oracle needs matching non-empty S and Q, got {n} and {}", q.len())));
    }
    if n > settings.max_nodes {
        return Err(Error::InvalidArgument(format!("oracle limited to {} nodes, got {n}", settings.max_nodes)));
    }

    // Gershgorin bound on the Hessian 2(D − S + Q)
    let lipschitz = (0..n)
        .map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| s.get(i, j)).sum();
            2.0 * (q[i] + 2.0 * off)
        })
        .fold(0.0, f64::max);
    if lipschitz == 0.0 {
        return Ok(ProbabilityVector::uniform(n));
    }
    let step = 1.0 / lipschitz;

    let mut x = vec![1.0 / n as f64; n];
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut g = vec![0.0; n];
    let mut fx = objective(s, q, &x);
    let mut last_step = f64::INFINITY;

    for _ in 0..settings.max_iterations {
        gradient(s, q, &y, &mut g);
        let trial: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| yi - step * gi).collect();
        let next = project_to_simplex(&trial);
        let f_next = objective(s, q, &next);

        if f_next > fx && t > 1.0 {
            // restart momentum from the current iterate
            y.clone_from(&x);
            t = 1.0;
            continue;
        }

        last_step = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let momentum = (t - 1.0) / t_next;
        for k in 0..n {
            y[k] = next[k] + momentum * (next[k] - x[k]);
        }
        x = next;
        fx = f_next;
        t = t_next;
        if last_step <= settings.step_tolerance {
            return ProbabilityVector::normalize(x);
        }
    }
    Err(Error::OracleFailure { iterations: settings.max_iterations, last_step })
}
