//! Drive a multi-chain run through the same path as `liftsampler run`,
//! writing CSV samples and stats.json to a temporary directory.
//!
//!     cargo run --release --example run_config

use liftsampler::cli::{execute_run, RunConfig};

fn main() -> liftsampler::Result<()> {
    let out = std::env::temp_dir().join("liftsampler_run_config_example");
    let json = format!(
        r#"{{
            "instance": {{"name": "ball_linear", "kind": "constrained", "dim": 3,
                         "body": {{"type": "ball", "radius": 1.0}},
                         "f": {{"type": "linear", "c": [1.0, 0.0, 0.0]}}}},
            "sampler": {{"iterations": 2000, "burn_in": 500, "seed": 9}},
            "chains": 2,
            "out_dir": {out:?}
        }}"#
    );
    let config: RunConfig = serde_json::from_str(&json)?;
    let stats = execute_run(&config)?;
    for chain in &stats.chains {
        println!("{}: {} samples (seed {})", out.join(&chain.file).display(), chain.samples, chain.seed);
    }
    println!(
        "mean proposals {:.2}, separation calls {}, wall {} ms",
        stats.mean_proposals, stats.cp_sep_calls, stats.wall_ms
    );
    Ok(())
}
