//! Draw from the shifted-radial proposal and compare radius moments with
//! quadrature of r^(n-1) exp(-(r - c)^2 / (2 eta)).
//!
//!     cargo run --release --example radial_proposal

use liftsampler::proposal::{ProposalSampler, ProposalSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> liftsampler::Result<()> {
    let (n, shift, eta) = (5usize, 0.3, 0.1);
    let spec = ProposalSpec { center: vec![0.0; n], shift, step: eta };
    let mut sampler = ProposalSampler::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let draws = 200_000;
    let mut sum = 0.0;
    for _ in 0..draws {
        let w = sampler.sample(&mut rng)?;
        sum += w.iter().map(|v| v * v).sum::<f64>().sqrt();
    }

    let log_density = |r: f64| (n as f64 - 1.0) * r.ln() - (r - shift).powi(2) / (2.0 * eta);
    let h = 1e-4;
    let (mut z, mut m) = (0.0, 0.0);
    for i in 1..100_000 {
        let r = i as f64 * h;
        let p = log_density(r).exp();
        z += p;
        m += r * p;
    }
    println!("mean radius: sampled {:.4}, quadrature {:.4}", sum / draws as f64, m / z);
    Ok(())
}
