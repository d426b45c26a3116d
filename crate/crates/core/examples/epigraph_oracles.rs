//! Build separation oracles for lifted bodies from function oracles:
//! subgradient-based, proximal-only, and the doubly lifted composite body.
//!
//!     cargo run --example epigraph_oracles

use liftsampler::lifting::{CompositeTarget, DoubleLiftedTarget};
use liftsampler::oracle::library::{boxed, l1_norm, shifted_l1};
use liftsampler::oracle::{project_epigraph_prox, separate_constrained_q};

fn main() -> liftsampler::Result<()> {
    let f = l1_norm(2);
    let k = boxed(2, 1.0);
    let a = 2.0;

    // (x, t) with |x|_1 = 1.2 > a t = 0.4: outside Q.
    let q = [0.5, -0.7, 0.2];
    println!("subgradient route: {:?}", separate_constrained_q(&k, &f, a, &q, 1e-12)?);
    let prox_only = f.clone().without_subgradient();
    println!("proximal route:    {:?}", separate_constrained_q(&k, &prox_only, a, &q, 1e-12)?);
    println!("outside K:         {:?}", separate_constrained_q(&k, &f, a, &[1.5, 0.0, 9.0], 1e-12)?);

    // Projection onto the epigraph of |x|_1 via bisection on the prox parameter.
    let p = project_epigraph_prox(&f, &[0.5, -0.7, 0.0], 1e-12)?;
    println!("proj onto epi |x|_1 of (0.5, -0.7, 0): {p:.4?}");

    // Composite body Q~ for f = |x|_1, h = |x - 0.5|_1.
    let lifted = DoubleLiftedTarget::new(CompositeTarget::new(f, shifted_l1(vec![0.5; 2], 1.0))?)?;
    println!("oracle case: {:?}", lifted.case);
    for p in [[0.0, 0.0, 1.0, 2.0], [0.0, 0.0, 0.1, 5.0], [0.0, 0.0, 1.0, 0.5]] {
        println!("Q~ at {p:?}: member {} -> {:?}", lifted.qtilde_member(&p), lifted.separate(&p)?);
    }
    Ok(())
}
