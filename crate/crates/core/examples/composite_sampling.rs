//! Sample exp(-|x|_1 - |x - 0.5|_1) on R^2 and compare with quadrature.
//!
//!     cargo run --release --example composite_sampling

use liftsampler::harness::{instance, quadrature_moments, MomentReport};
use liftsampler::sampler::{run_seeded, SamplerConfig};

fn main() -> liftsampler::Result<()> {
    let spec = instance("P2_d2").expect("registry instance");
    let target = spec.build()?;
    let mut config = SamplerConfig::for_dim(spec.dim);
    config.iterations = 8000;
    config.seed = 2;

    let trace = run_seeded(&config, &target, None)?;
    let chain = MomentReport::from_chain(trace.samples())?;
    let reference = quadrature_moments(&spec, 1e-2)?;
    let se = chain.errors.as_ref().unwrap();

    for i in 0..spec.dim {
        println!(
            "E[x{}]: chain {:.4} +- {:.4}, quadrature {:.4}",
            i + 1,
            chain.mean[i],
            se.mean[i],
            reference.mean[i]
        );
    }
    println!("mean proposals per step {:.2}", trace.totals.mean_proposals());
    Ok(())
}
