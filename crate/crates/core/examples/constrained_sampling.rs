//! Sample exp(-|x|_1) restricted to the box [-1, 1]^4 and report moments.
//!
//!     cargo run --release --example constrained_sampling

use liftsampler::harness::{instance, MomentReport};
use liftsampler::sampler::{run_seeded, SamplerConfig};

fn main() -> liftsampler::Result<()> {
    let spec = instance("C1_d4").expect("registry instance");
    let target = spec.build()?;

    // a = d and eta = 1/d^2 by default.
    let mut config = SamplerConfig::for_dim(spec.dim);
    config.iterations = 6000;
    config.seed = 1;

    let trace = run_seeded(&config, &target, None)?;
    let report = MomentReport::from_chain(trace.samples())?;
    let se = report.errors.as_ref().unwrap();

    println!("{} samples after {} burn-in steps", trace.len(), config.burn_in);
    for (i, (m, s)) in report.mean.iter().zip(&se.mean).enumerate() {
        println!("  E[x{}] = {m:+.4} +- {s:.4}", i + 1);
    }
    // Each coordinate is independent with E|x_i| = (1 - 2/e) / (1 - 1/e).
    let e = std::f64::consts::E;
    println!("  E|x|_1 = {:.4} +- {:.4} (exact {:.4})", report.l1, se.l1, 4.0 * (1.0 - 2.0 / e) / (1.0 - 1.0 / e));
    println!(
        "  mean proposals per step {:.2}, separation calls per step {:.1}",
        trace.totals.mean_proposals(),
        trace.totals.cp_separation_calls as f64 / trace.totals.calls as f64
    );
    Ok(())
}
