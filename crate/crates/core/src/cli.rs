//! Command-line front end: `run` samples an instance to CSV and JSON,
//! `verify` cross-checks a small instance against the reference oracles.
//!
//! Exit codes: 0 success, 2 configuration error, 3 unsupported request,
//! 4 sampler failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{
    compare_rgo_to_naive, default_rgo_point, instance, quadrature_moments, InstanceSpec,
    MomentReport,
};
use crate::rgo::{Envelope, RgoStats};
use crate::sampler::{run_chains, run_seeded, LiftedTarget, SamplerConfig, Trace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Json(_) | Error::Io(_) | Error::Precondition(_) => EXIT_CONFIG,
        Error::Unsupported(_) | Error::MissingCapability { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_RUNTIME,
    }
}

/// A registry name or an inline instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceRef {
    Name(String),
    Inline(InstanceSpec),
}

impl InstanceRef {
    pub fn resolve(&self) -> Result<InstanceSpec> {
        match self {
            InstanceRef::Name(name) => {
                instance(name).ok_or_else(|| Error::Config(format!("unknown instance '{name}'")))
            }
            InstanceRef::Inline(spec) => Ok(spec.clone()),
        }
    }
}

/// Sampler settings; anything left out takes the dimension-based default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerOverrides {
    pub eta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub iterations: Option<usize>,
    pub burn_in: Option<usize>,
    pub seed: Option<u64>,
    pub proposal_budget: Option<u64>,
    pub envelope: Option<Envelope>,
    pub gap_factor: Option<f64>,
}

impl SamplerOverrides {
    pub fn resolve(&self, d: usize) -> SamplerConfig {
        let base = SamplerConfig::for_dim(d);
        SamplerConfig {
            eta: self.eta.unwrap_or(base.eta),
            a: self.a.unwrap_or(base.a),
            b: self.b.unwrap_or(base.b),
            iterations: self.iterations.unwrap_or(base.iterations),
            burn_in: self.burn_in.unwrap_or(base.burn_in),
            seed: self.seed.unwrap_or(base.seed),
            proposal_budget: self.proposal_budget.unwrap_or(base.proposal_budget),
            envelope: self.envelope.unwrap_or(base.envelope),
            gap_factor: self.gap_factor.unwrap_or(base.gap_factor),
        }
    }

    fn from_config(c: &SamplerConfig) -> Self {
        Self {
            eta: Some(c.eta),
            a: Some(c.a),
            b: Some(c.b),
            iterations: Some(c.iterations),
            burn_in: Some(c.burn_in),
            seed: Some(c.seed),
            proposal_budget: Some(c.proposal_budget),
            envelope: Some(c.envelope),
            gap_factor: Some(c.gap_factor),
        }
    }
}

fn default_chains() -> usize {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// The JSON run file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceRef,
    #[serde(default)]
    pub sampler: SamplerOverrides,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    /// Starting point (default: the origin).
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("malformed config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub seed: u64,
    pub samples: usize,
    pub file: String,
    pub rgo: RgoStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Contents of `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Mean proposals per RGO call (per step).
    pub mean_proposals: f64,
    pub cp_sep_calls: u64,
    pub cp_subgrad_calls: u64,
    /// Accepted proposals, one per completed step.
    pub accepted: u64,
    pub rejected: u64,
    pub envelope_violations: u64,
    pub wall_ms: u128,
    pub seed: u64,
    /// Fully resolved config; feeding it back reproduces the run.
    pub config: RunConfig,
    pub chains: Vec<ChainSummary>,
}

/// CSV of the kept samples: `step,x1..xd,lift1[,lift2]`.
pub fn write_samples_csv(trace: &Trace, lifts: usize, out: &mut impl std::io::Write) -> Result<()> {
    let mut header = String::from("step");
    for i in 1..=trace.dim {
        header.push_str(&format!(",x{i}"));
    }
    for i in 1..=lifts {
        header.push_str(&format!(",lift{i}"));
    }
    writeln!(out, "{header}")?;
    for (step, point) in trace.steps.iter().zip(&trace.lifted) {
        let mut line = step.to_string();
        for v in point {
            line.push(',');
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn samples_file(chains: usize, k: usize) -> String {
    if chains == 1 {
        "samples.csv".into()
    } else {
        format!("samples_chain{k}.csv")
    }
}

/// Run every chain of `config` and write its samples and `stats.json`.
/// Stats are written even when a chain fails; the first failure is returned.
pub fn execute_run(config: &RunConfig) -> Result<RunStats> {
    if config.chains == 0 {
        return Err(Error::Config("chains must be positive".into()));
    }
    let spec = config.instance.resolve()?;
    let target = spec.build()?;
    let sampler = config.sampler.resolve(spec.dim);
    sampler.validate()?;
    LiftedTarget::new(&target, &sampler)?;
    if let Some(x0) = &config.x0 {
        if x0.len() != spec.dim {
            return Err(Error::Config(format!(
                "x0 has {} coordinates for dimension {}",
                x0.len(),
                spec.dim
            )));
        }
    }
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", config.out_dir.display())))?;

    let started = Instant::now();
    let outcomes = run_chains(&sampler, &target, config.x0.as_deref(), config.chains);
    let wall_ms = started.elapsed().as_millis();

    let mut totals = RgoStats::default();
    let mut summaries = Vec::with_capacity(config.chains);
    let mut first_error = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        let trace = &outcome.trace;
        let file = samples_file(config.chains, k);
        let mut writer = std::io::BufWriter::new(fs::File::create(config.out_dir.join(&file))?);
        write_samples_csv(trace, target.lift_count(), &mut writer)?;
        writer.flush()?;
        totals.absorb(&trace.totals);
        summaries.push(ChainSummary {
            seed: trace.config.seed,
            samples: trace.len(),
            file,
            rgo: trace.totals.clone(),
            error: outcome.error.as_ref().map(|e| e.to_string()),
        });
        if first_error.is_none() {
            first_error = outcome.error;
        }
    }
    let echo = RunConfig {
        instance: InstanceRef::Inline(spec),
        sampler: SamplerOverrides::from_config(&sampler),
        chains: config.chains,
        out_dir: config.out_dir.clone(),
        x0: config.x0.clone(),
    };
    let stats = RunStats {
        mean_proposals: totals.mean_proposals(),
        cp_sep_calls: totals.cp_separation_calls,
        cp_subgrad_calls: totals.cp_subgradient_calls,
        accepted: totals.calls,
        rejected: totals.proposals - totals.calls,
        envelope_violations: totals.envelope_violations,
        wall_ms,
        seed: sampler.seed,
        config: echo,
        chains: summaries,
    };
    let json = serde_json::to_string_pretty(&stats)?;
    fs::write(config.out_dir.join("stats.json"), json + "\n")?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(stats),
    }
}

/// One line of the verify table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySettings {
    pub seed: u64,
    /// RGO and naive draws per seed.
    pub rgo_draws: usize,
    /// Kept chain steps for the moment check.
    pub chain_steps: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { seed: 0, rgo_draws: 20_000, chain_steps: 20_000 }
    }
}

/// RGO-vs-naive KS (p > 0.01 for at least 2 of 3 seeds per coordinate) and
/// chain moments within 3 batch-means standard errors of quadrature.
pub fn verify_instance(spec: &InstanceSpec, settings: &VerifySettings) -> Result<Vec<Check>> {
    if spec.dim > 2 {
        return Err(Error::Unsupported(format!(
            "{}: verification needs d <= 2, got {}",
            spec.name, spec.dim
        )));
    }
    let target = spec.build()?;
    let mut config = SamplerConfig::for_dim(spec.dim);
    config.seed = settings.seed;
    let lifted = LiftedTarget::new(&target, &config)?;
    let point = default_rgo_point(&lifted);
    let mut checks = Vec::new();

    let mut passes: Vec<usize> = Vec::new();
    let mut worst: Vec<f64> = Vec::new();
    for rep in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(rep));
        let cmp = compare_rgo_to_naive(
            &lifted,
            &point,
            config.eta,
            &config.rgo_settings(),
            settings.rgo_draws,
            &mut rng,
        )?;
        if passes.is_empty() {
            passes = vec![0; cmp.p_values.len()];
            worst = vec![1.0; cmp.p_values.len()];
        }
        for (i, p) in cmp.p_values.iter().enumerate() {
            if *p > 0.01 {
                passes[i] += 1;
            }
            worst[i] = worst[i].min(*p);
        }
        checks.push(Check {
            name: format!("rgo_infeasible_draws_seed{rep}"),
            value: cmp.infeasible as f64,
            threshold: 0.0,
            pass: cmp.infeasible == 0,
        });
    }
    for (i, (n, p)) in passes.iter().zip(&worst).enumerate() {
        checks.push(Check {
            name: format!("rgo_ks_coord{} (min p over 3 seeds, {n}/3 > 0.01)", i + 1),
            value: *p,
            threshold: 0.01,
            pass: *n >= 2,
        });
    }

    config.burn_in = 1000;
    config.iterations = config.burn_in + settings.chain_steps;
    let trace = run_seeded(&config, &target, None)?;
    let feasible = trace.lifted.iter().filter(|p| lifted.member(p)).count();
    checks.push(Check {
        name: "chain_feasible_fraction".into(),
        value: feasible as f64 / trace.len() as f64,
        threshold: 1.0,
        pass: feasible == trace.len(),
    });
    let reference = quadrature_moments(spec, 1e-3)?;
    let report = MomentReport::from_chain(trace.samples())?;
    let errors = report.errors.clone().expect("chain moments carry errors");
    for i in 0..spec.dim {
        let z = (report.mean[i] - reference.mean[i]).abs() / errors.mean[i];
        checks.push(Check {
            name: format!("mean_x{} vs quadrature (in SE)", i + 1),
            value: z,
            threshold: 3.0,
            pass: z <= 3.0,
        });
    }
    let z = (report.l1 - reference.l1).abs() / errors.l1;
    checks.push(Check { name: "mean_l1 vs quadrature (in SE)".into(), value: z, threshold: 3.0, pass: z <= 3.0 });
    Ok(checks)
}

pub fn print_checks(name: &str, checks: &[Check]) {
    println!("verify {name}");
    for c in checks {
        println!(
            "  {:<4} {:<52} value={:<12.6} threshold={}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
}

#[derive(Debug, Parser)]
#[command(name = "liftsampler", about = "Sample log-concave targets through epigraph lifting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run chains from a JSON config and write samples and stats.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        chains: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check a registry instance (d <= 2) against reference oracles.
    Verify {
        instance: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn cmd_run(
    config_path: &Path,
    seed: Option<u64>,
    chains: Option<usize>,
    out: Option<PathBuf>,
) -> i32 {
    let result = RunConfig::load(config_path).and_then(|mut config| {
        if seed.is_some() {
            config.sampler.seed = seed;
        }
        if let Some(c) = chains {
            config.chains = c;
        }
        if let Some(o) = out {
            config.out_dir = o;
        }
        execute_run(&config)
    });
    match result {
        Ok(stats) => {
            log::info!(
                "done: {} chains, mean proposals {:.3}, {} ms",
                stats.chains.len(),
                stats.mean_proposals,
                stats.wall_ms
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cmd_verify(name: &str, seed: u64) -> i32 {
    let Some(spec) = instance(name) else {
        eprintln!("error: unknown instance '{name}'");
        return EXIT_CONFIG;
    };
    let settings = VerifySettings { seed, ..Default::default() };
    match verify_instance(&spec, &settings) {
        Ok(checks) => {
            print_checks(name, &checks);
            if checks.iter().all(|c| c.pass) {
                EXIT_OK
            } else {
                EXIT_RUNTIME
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("LIFTSAMPLER_LOG", "error"),
    )
    .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run { config, seed, chains, out } => cmd_run(&config, seed, chains, out),
        Command::Verify { instance, seed } => cmd_verify(&instance, seed),
    }
}
