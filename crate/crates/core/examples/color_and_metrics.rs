//! CIELAB conversion and the angular error metrics.
//!
//! ```text
//! cargo run --example color_and_metrics
//! ```

use pcc::{lab_distance, lab_to_rgb, recovery_error, reproduction_error, rgb_to_lab, summarize};

fn main() -> pcc::Result<()> {
    for rgb in [[1.0, 1.0, 1.0], [0.5, 0.5, 0.5], [0.8, 0.2, 0.1], [0.05, 0.3, 0.6]] {
        let lab = rgb_to_lab(rgb)?;
        let back = lab_to_rgb(lab);
        println!(
            "rgb {rgb:?} -> L={:.3} a={:.3} b={:.3} -> [{:.6}, {:.6}, {:.6}]",
            lab.l, lab.a, lab.b, back[0], back[1], back[2]
        );
    }
    let d = lab_distance(rgb_to_lab([0.8, 0.2, 0.1])?, rgb_to_lab([0.7, 0.25, 0.1])?);
    println!("Lab distance between two reds: {d:.3}");

    let gt = [1.0, 1.0, 1.0];
    println!("recovery  (2,1,1) vs white: {:.4} deg", recovery_error(gt, [2.0, 1.0, 1.0])?);
    println!("reproduction (2,1,1) vs white: {:.4} deg", reproduction_error(gt, [2.0, 1.0, 1.0])?);

    let errors = [0.4, 1.2, 2.5, 3.1, 7.8, 0.9, 1.7];
    let s = summarize(&errors)?;
    println!(
        "best25 {:.3}  mean {:.3}  median {:.3}  trimean {:.3}  worst25 {:.3}",
        s.best25_mean, s.mean, s.median, s.trimean, s.worst25_mean
    );
    Ok(())
}
