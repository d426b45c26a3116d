//! Cross-check the RGO against brute-force rejection and the chain against
//! quadrature for a small registry instance.
//!
//!     cargo run --release --example verify_instance -- C1_d1

use liftsampler::cli::{print_checks, verify_instance, VerifySettings};
use liftsampler::harness::instance;

fn main() -> liftsampler::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "C1_d1".into());
    let spec = instance(&name).ok_or_else(|| liftsampler::Error::Config(format!("unknown instance {name}")))?;
    let checks = verify_instance(&spec, &VerifySettings::default())?;
    print_checks(&name, &checks);
    Ok(())
}
