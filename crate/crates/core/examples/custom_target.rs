//! Sample a user-defined target: the Huber potential on a disc, supplied as
//! closures for value and subgradient.
//!
//!     cargo run --release --example custom_target

use liftsampler::harness::MomentReport;
use liftsampler::lifting::ConstrainedTarget;
use liftsampler::oracle::library::ball;
use liftsampler::oracle::FunctionOracle;
use liftsampler::sampler::{run_seeded, SamplerConfig, Target};

fn huber(delta: f64) -> FunctionOracle {
    let value = move |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r <= delta { 0.5 * r * r / delta } else { r - 0.5 * delta }
    };
    let grad = move |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = if r <= delta { 1.0 / delta } else { 1.0 / r };
        x.iter().map(|v| v * scale).collect()
    };
    FunctionOracle::new("huber", 2, 1.0, value).with_subgradient(grad)
}

fn main() -> liftsampler::Result<()> {
    let target = Target::Constrained(ConstrainedTarget::new(huber(0.5), ball(2, 2.0))?);
    let mut config = SamplerConfig::for_dim(2);
    config.iterations = 5000;
    config.seed = 4;
    let trace = run_seeded(&config, &target, Some(&[0.5, 0.5]))?;
    let report = MomentReport::from_chain(trace.samples())?;
    println!("E[x] = {:.3?}, Var[x] = {:.3?}", report.mean, report.variance);
    println!("mean proposals per step {:.2}", trace.totals.mean_proposals());
    Ok(())
}
