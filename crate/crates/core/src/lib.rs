//! Illuminant estimation by probabilistic color constancy.
//!
//! An image is abstracted into SLIC superpixels, which become the nodes of a
//! color-similarity graph. Each node receives a probability of carrying
//! information about the light source: similar colors get similar
//! probabilities, dark segments are penalized by a diagonal prior, and the
//! resulting constrained quadratic program is solved in closed form. The
//! illuminant is the probability-weighted mean color of the most probable
//! segments.
//!
//! The crate also provides the Minkowski-framework baselines (Gray-World,
//! White-Patch, Shades-of-Gray, first- and second-order Gray-Edge), recovery and
//! reproduction angular errors with the usual five-number summary, and a
//! benchmark harness over a directory of images and a ground-truth CSV.
//!
//! ```no_run
//! use pcc::{estimate, load_linear_image, PccConfig};
//!
//! let img = load_linear_image("scene.png".as_ref(), false)?;
//! let out = estimate(&img, &PccConfig::default())?;
//! println!("{:?}", out.illuminant.rgb());
//! # Ok::<(), pcc::Error>(())
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod baselines;
pub mod cli;
pub mod color;
pub mod error;
pub mod graph;
pub mod harness;
pub mod illuminant;
pub mod image;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod pcc;
pub mod superpixel;
pub mod synthetic;

pub use baselines::{estimate_framework, FrameworkConfig, Norm};
pub use color::{lab_distance, lab_to_rgb, rgb_to_lab, LabColor};
pub use error::{Error, Result};
pub use graph::{
    assemble_h, build_prior_q1, build_prior_q2, build_similarity, solve_probabilities, AffinityGraph, GraphParams,
    Prior, ProbabilityVector, Selection,
};
pub use harness::{correct_image, load_dataset, load_linear_image, render_mask, run_benchmark, CorrectionMode, Method};
pub use illuminant::Illuminant;
pub use image::LinearImage;
pub use metrics::{recovery_error, reproduction_error, summarize, ErrorStats};
pub use oracle::{oracle_minimize, OracleSettings};
pub use pcc::{estimate, estimate_from_segments, estimate_illuminant, PccConfig, PccOutput};
pub use superpixel::{as_single_pixels, segment, SlicParams, SuperpixelMap};
