//! The proximal sampler on the lifted bodies.
//!
//! Each step adds `sqrt(η)` Gaussian noise to the lifted iterate and then
//! calls the restricted Gaussian oracle. The chain starts from a feasible
//! `x₀` whose lifted coordinates are drawn exactly from their conditional
//! law given `x₀` (shifted exponentials), so only `x₀` affects warmness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifting::{CompositeTarget, ConstrainedTarget, DoubleLiftedTarget, SingleLiftedTarget};
use crate::proposal::inverse_exp_tail;
use crate::rgo::{
    rgo_sample_composite, rgo_sample_constrained, Envelope, RgoInputComposite,
    RgoInputConstrained, RgoSettings, RgoStats,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub eta: f64,
    pub a: f64,
    pub b: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub proposal_budget: u64,
    pub envelope: Envelope,
    pub gap_factor: f64,
}

impl SamplerConfig {
    /// `η = 1/d²`, `a = b = d`, burn-in `max(10 d², 1000)`.
    pub fn for_dim(d: usize) -> Self {
        let df = d as f64;
        let rgo = RgoSettings::default();
        Self {
            eta: 1.0 / (df * df),
            a: df,
            b: df,
            iterations: 10_000 + (10 * d * d).max(1000),
            burn_in: (10 * d * d).max(1000),
            seed: 0,
            proposal_budget: rgo.proposal_budget,
            envelope: rgo.envelope,
            gap_factor: rgo.gap_factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("eta", self.eta)?;
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("gap_factor", self.gap_factor)?;
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be positive".into()));
        }
        if self.burn_in > self.iterations {
            return Err(Error::Config(format!(
                "burn_in ({}) exceeds iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.proposal_budget == 0 {
            return Err(Error::Config("proposal_budget must be positive".into()));
        }
        Ok(())
    }

    pub fn rgo_settings(&self) -> RgoSettings {
        RgoSettings {
            envelope: self.envelope,
            gap_factor: self.gap_factor,
            proposal_budget: self.proposal_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    /// `(x, t)` or `(x, s, t)`.
    pub point: Vec<f64>,
    pub step: usize,
    pub stats: RgoStats,
}

/// The unlifted target a chain runs on.
#[derive(Debug, Clone)]
pub enum Target {
    Constrained(ConstrainedTarget),
    Composite(CompositeTarget),
}

impl Target {
    pub fn dim(&self) -> usize {
        match self {
            Target::Constrained(t) => t.dim(),
            Target::Composite(t) => t.dim(),
        }
    }

    /// Number of lifted coordinates (1 or 2).
    pub fn lift_count(&self) -> usize {
        match self {
            Target::Constrained(_) => 1,
            Target::Composite(_) => 2,
        }
    }
}

/// A target lifted with the scales of a config.
#[derive(Debug, Clone)]
pub enum LiftedTarget {
    Single(SingleLiftedTarget),
    Double(DoubleLiftedTarget),
}

impl LiftedTarget {
    pub fn new(target: &Target, config: &SamplerConfig) -> Result<Self> {
        Ok(match target {
            Target::Constrained(t) => {
                LiftedTarget::Single(SingleLiftedTarget::with_scale(t.clone(), config.a)?)
            }
            Target::Composite(t) => LiftedTarget::Double(DoubleLiftedTarget::with_scales(
                t.clone(),
                config.a,
                config.b,
                None,
            )?),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            LiftedTarget::Single(t) => t.dim(),
            LiftedTarget::Double(t) => t.dim(),
        }
    }

    pub fn member(&self, point: &[f64]) -> bool {
        match self {
            LiftedTarget::Single(t) => point.len() == t.lifted_dim() && t.q_member(point),
            LiftedTarget::Double(t) => point.len() == t.lifted_dim() && t.qtilde_member(point),
        }
    }
}

/// `(x₀, t₀)` with `a t₀ - f(x₀)` a unit exponential.
pub fn init_constrained<R: Rng + ?Sized>(
    x0: &[f64],
    target: &SingleLiftedTarget,
    rng: &mut R,
) -> Result<ChainState> {
    if x0.len() != target.dim() || !target.base.k.contains(x0) {
        return Err(Error::Precondition("initial point is not in K".into()));
    }
    let a = target.a;
    let u: f64 = rng.gen();
    let t0 = inverse_exp_tail(a, target.base.f.value(x0) / a, u)?;
    let mut point = x0.to_vec();
    point.push(t0);
    Ok(ChainState { point, step: 0, stats: RgoStats::default() })
}

/// `(x₀, s₀, t₀)` with both lifted slacks unit exponentials.
pub fn init_composite<R: Rng + ?Sized>(
    x0: &[f64],
    target: &DoubleLiftedTarget,
    rng: &mut R,
) -> Result<ChainState> {
    if x0.len() != target.dim() {
        return Err(Error::Precondition("initial point has the wrong dimension".into()));
    }
    let (a, b) = (target.a, target.b);
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let s0 = inverse_exp_tail(a, target.base.h.value(x0) / a, u1)?;
    let t0 = inverse_exp_tail(b, (target.base.f.value(x0) + a * s0) / b, u2)?;
    let mut point = x0.to_vec();
    point.extend([s0, t0]);
    Ok(ChainState { point, step: 0, stats: RgoStats::default() })
}

fn gaussian_step<R: Rng + ?Sized>(point: &[f64], eta: f64, rng: &mut R) -> Vec<f64> {
    let sd = eta.sqrt();
    point
        .iter()
        .map(|p| {
            let g: f64 = rng.sample(StandardNormal);
            p + sd * g
        })
        .collect()
}

/// One Gaussian step followed by one RGO draw. Returns the stats of the draw.
pub fn step_constrained<R: Rng + ?Sized>(
    state: &mut ChainState,
    config: &SamplerConfig,
    target: &SingleLiftedTarget,
    rng: &mut R,
) -> Result<RgoStats> {
    let d = target.dim();
    let mut ys = gaussian_step(&state.point, config.eta, rng);
    let s = ys.pop().expect("lifted point has a t coordinate");
    debug_assert_eq!(ys.len(), d);
    let input = RgoInputConstrained { target, y: ys, s, eta: config.eta };
    let (w, stats) = rgo_sample_constrained(&input, &config.rgo_settings(), rng)?;
    state.point = w;
    state.step += 1;
    state.stats.absorb(&stats);
    Ok(stats)
}

pub fn step_composite<R: Rng + ?Sized>(
    state: &mut ChainState,
    config: &SamplerConfig,
    target: &DoubleLiftedTarget,
    rng: &mut R,
) -> Result<RgoStats> {
    let yuv = gaussian_step(&state.point, config.eta, rng);
    let input = RgoInputComposite {
        target,
        yuv,
        eta: config.eta,
        prev: state.point.clone(),
    };
    let (p, stats) = rgo_sample_composite(&input, &config.rgo_settings(), rng)?;
    state.point = p;
    state.step += 1;
    state.stats.absorb(&stats);
    Ok(stats)
}

/// Kept samples of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub config: SamplerConfig,
    pub dim: usize,
    /// Step index of each kept sample (1-based, after burn-in).
    pub steps: Vec<usize>,
    /// Lifted iterates; the first `dim` coordinates are the sample.
    pub lifted: Vec<Vec<f64>>,
    /// RGO work per step, burn-in included.
    pub step_stats: Vec<RgoStats>,
    pub totals: RgoStats,
}

impl Trace {
    pub fn samples(&self) -> impl Iterator<Item = &[f64]> + Clone + '_ {
        self.lifted.iter().map(move |p| &p[..self.dim])
    }

    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.lifted.iter().map(|p| p[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.lifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifted.is_empty()
    }
}

/// Result of a run that may have stopped early.
#[derive(Debug)]
pub struct RunOutcome {
    pub trace: Trace,
    pub error: Option<Error>,
}

/// Like [`run`], but keeps what was collected before a failure.
pub fn run_partial<R: Rng + ?Sized>(
    config: &SamplerConfig,
    target: &Target,
    x0: Option<&[f64]>,
    rng: &mut R,
) -> Result<RunOutcome> {
    config.validate()?;
    let d = target.dim();
    let origin = vec![0.0; d];
    let x0 = x0.unwrap_or(&origin);
    let lifted = LiftedTarget::new(target, config)?;
    let mut state = match &lifted {
        LiftedTarget::Single(t) => init_constrained(x0, t, rng)?,
        LiftedTarget::Double(t) => init_composite(x0, t, rng)?,
    };
    let keep = config.iterations - config.burn_in;
    let mut trace = Trace {
        config: config.clone(),
        dim: d,
        steps: Vec::with_capacity(keep),
        lifted: Vec::with_capacity(keep),
        step_stats: Vec::with_capacity(config.iterations),
        totals: RgoStats::default(),
    };
    let mut error = None;
    for k in 1..=config.iterations {
        let stats = match &lifted {
            LiftedTarget::Single(t) => step_constrained(&mut state, config, t, rng),
            LiftedTarget::Double(t) => step_composite(&mut state, config, t, rng),
        };
        match stats {
            Ok(s) => trace.step_stats.push(s),
            Err(e) => {
                error = Some(e);
                break;
            }
        }
        if k > config.burn_in {
            if !lifted.member(&state.point) {
                error = Some(Error::Infeasible(format!("iterate {k} left the lifted body")));
                break;
            }
            trace.steps.push(k);
            trace.lifted.push(state.point.clone());
        }
    }
    trace.totals = state.stats;
    Ok(RunOutcome { trace, error })
}

/// Initialize at `x₀` (default: the origin), iterate, and keep the
/// post-burn-in iterates. Deterministic given the RNG state.
pub fn run<R: Rng + ?Sized>(
    config: &SamplerConfig,
    target: &Target,
    x0: Option<&[f64]>,
    rng: &mut R,
) -> Result<Trace> {
    let outcome = run_partial(config, target, x0, rng)?;
    match outcome.error {
        Some(e) => Err(e),
        None => Ok(outcome.trace),
    }
}

/// [`run`] with a ChaCha8 stream seeded from `config.seed`.
pub fn run_seeded(config: &SamplerConfig, target: &Target, x0: Option<&[f64]>) -> Result<Trace> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run(config, target, x0, &mut rng)
}

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chain `k` for a multi-chain run: `mix64(seed + k)`.
pub fn chain_seed(seed: u64, k: u64) -> u64 {
    mix64(seed.wrapping_add(k))
}

/// Run `chains` independent chains on scoped threads, one per chain.
pub fn run_chains(
    config: &SamplerConfig,
    target: &Target,
    x0: Option<&[f64]>,
    chains: usize,
) -> Vec<Result<RunOutcome>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..chains)
            .map(|k| {
                let mut cfg = config.clone();
                cfg.seed = if chains == 1 { config.seed } else { chain_seed(config.seed, k as u64) };
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    run_partial(&cfg, target, x0, &mut rng)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain thread panicked"))
            .collect()
    })
}
