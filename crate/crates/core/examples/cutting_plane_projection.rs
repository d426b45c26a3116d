//! Project a point onto a box with the cutting-plane solver and check the
//! certified gap against the exact answer.
//!
//!     cargo run --release --example cutting_plane_projection

use liftsampler::cutting_plane::{cp_minimize, CpProblem};
use liftsampler::oracle::library::boxed;

fn main() -> liftsampler::Result<()> {
    let n = 6;
    let target: Vec<f64> = (0..n).map(|i| 2.0 * ((i as f64) - 2.5) / 2.5).collect();
    let body = boxed(n, 1.0);

    let objective = |x: &[f64]| {
        let g: Vec<f64> = x.iter().zip(&target).map(|(a, b)| a - b).collect();
        (0.5 * g.iter().map(|v| v * v).sum::<f64>(), g)
    };
    let separation = |x: &[f64]| Ok(body.separate(x));
    let problem = CpProblem {
        dim: n,
        objective: &objective,
        separation: &separation,
        center: vec![0.0; n],
        radius: body.outer_radius(),
        strong_convexity: 1.0,
        target_gap: 1e-8,
        max_iterations: None,
    };
    let result = cp_minimize(&problem)?;

    let exact: Vec<f64> = target.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
    let true_gap = objective(&result.point).0 - objective(&exact).0;
    println!("point     {:?}", result.point.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>());
    println!("exact     {:?}", exact.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>());
    println!("certified gap {:.2e} >= true gap {:.2e}", result.certified_gap, true_gap);
    println!(
        "{} iterations, {} separation and {} subgradient calls",
        result.iterations, result.calls.separation, result.calls.subgradient
    );
    Ok(())
}
