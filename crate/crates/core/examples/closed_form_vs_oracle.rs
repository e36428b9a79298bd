//! Compare the closed-form probabilities with the projected-gradient oracle.
//!
//! ```text
//! cargo run --example closed_form_vs_oracle
//! ```

use pcc::oracle::objective;
use pcc::{oracle_minimize, AffinityGraph, GraphParams, LabColor, OracleSettings, Prior};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> pcc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let nodes: Vec<LabColor> = (0..8)
        .map(|_| LabColor::new(rng.gen_range(0.0..100.0), rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0)))
        .collect();

    for prior in [Prior::Threshold, Prior::Linear] {
        let graph = AffinityGraph::build(&nodes, prior, &GraphParams::default())?;
        let closed = graph.solve()?;
        let oracle = oracle_minimize(&graph.similarity, &graph.prior, &OracleSettings::default())?;
        let gap = closed
            .as_slice()
            .iter()
            .zip(oracle.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("prior {}", prior.name());
        for (i, (c, o)) in closed.as_slice().iter().zip(oracle.as_slice()).enumerate() {
            println!("  node {i}  L={:6.2}  closed {c:.8}  oracle {o:.8}", nodes[i].l);
        }
        println!(
            "  objective closed {:.10e}, oracle {:.10e}, max gap {gap:.2e}",
            objective(&graph.similarity, &graph.prior, closed.as_slice()),
            objective(&graph.similarity, &graph.prior, oracle.as_slice())
        );
    }
    Ok(())
}
