//! Draw from N(z, eta I) restricted to the lifted body Q with the
//! restricted Gaussian oracle, and inspect the work it did.
//!
//!     cargo run --release --example rgo_draw

use liftsampler::lifting::{ConstrainedTarget, SingleLiftedTarget};
use liftsampler::oracle::library::{boxed, l1_norm};
use liftsampler::rgo::{rgo_sample_constrained, RgoInputConstrained, RgoSettings, RgoStats};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> liftsampler::Result<()> {
    let target = SingleLiftedTarget::new(ConstrainedTarget::new(l1_norm(2), boxed(2, 1.0))?);
    // A half-step well outside Q: the centre solve has real work to do.
    let input = RgoInputConstrained { target: &target, y: vec![1.8, -0.4], s: -0.5, eta: 0.25 };
    println!("z = {:?}", input.z());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let settings = RgoSettings::default();
    let mut totals = RgoStats::default();
    for i in 0..5 {
        let (w, stats) = rgo_sample_constrained(&input, &settings, &mut rng)?;
        println!("draw {i}: w = [{:.4}, {:.4}, {:.4}], proposals {}", w[0], w[1], w[2], stats.proposals);
        assert!(target.q_member(&w));
        totals.absorb(&stats);
    }
    println!(
        "separation calls {}, subgradient calls {}, largest certified gap {:.2e}",
        totals.cp_separation_calls, totals.cp_subgradient_calls, totals.certified_gap
    );
    Ok(())
}
