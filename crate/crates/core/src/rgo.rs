//! Restricted Gaussian oracles for the lifted targets.
//!
//! Given the Gaussian half-step `(y, s)` of the proximal sampler, the RGO
//! must return an exact draw of `N(z, ηI)` restricted to `Q`, where
//! `z = (y, s - aη)`. The draw is produced by rejection sampling from a
//! shifted-radial proposal centred at an approximate projection `w~` of `z`
//! onto `Q`; `w~` comes from a cutting-plane solve with a certified gap.
//! The composite oracle does the same on `Q~` with `q = (y, u, v - bη)`,
//! localizing the solve to the ball of radius `2|prev - q|` around `q`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cutting_plane::{cp_minimize, CpCalls, CpProblem};
use crate::error::{Error, Result};
use crate::lifting::{DoubleLiftedTarget, SingleLiftedTarget};
use crate::linalg::{dist, norm};
use crate::oracle::{separate_ball, separate_intersection, SeparationResult};
use crate::proposal::{ProposalSampler, ProposalSpec};

/// Which dominating potential the rejection step uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// Radius from the certified gap of the centre solve, no constant slack:
    /// `P(w) = (|w-w~|² + |w~-z|²)/(2η) - (δ/η)(|w-w~| + |w~-z|) + offset`
    /// with `δ = (1 + L/a)·sqrt(2η·gap)` (constrained) or `sqrt(2η·gap)`
    /// (composite).
    #[default]
    Certified,
    /// The fixed-radius potentials with their constant slack terms, exactly
    /// as [`p1_eval`] and [`ptilde1_eval`] compute them.
    Printed,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RgoSettings {
    pub envelope: Envelope,
    /// The centre solve targets `gap_factor / (n)` with `n` the lifted
    /// dimension (`d + 1` or `d + 2`).
    pub gap_factor: f64,
    pub proposal_budget: u64,
}

impl Default for RgoSettings {
    fn default() -> Self {
        Self {
            envelope: Envelope::Certified,
            gap_factor: 1e-6,
            proposal_budget: 1_000_000,
        }
    }
}

/// Work done by one or more RGO calls.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RgoStats {
    pub calls: u64,
    pub proposals: u64,
    pub cp_separation_calls: u64,
    pub cp_subgradient_calls: u64,
    /// Largest certified gap seen.
    pub certified_gap: f64,
    /// Proposals where the envelope exceeded the target potential.
    pub envelope_violations: u64,
}

impl RgoStats {
    pub fn absorb(&mut self, other: &RgoStats) {
        self.calls += other.calls;
        self.proposals += other.proposals;
        self.cp_separation_calls += other.cp_separation_calls;
        self.cp_subgradient_calls += other.cp_subgradient_calls;
        self.certified_gap = self.certified_gap.max(other.certified_gap);
        self.envelope_violations += other.envelope_violations;
    }

    pub fn mean_proposals(&self) -> f64 {
        if self.calls == 0 {
            0.0
        } else {
            self.proposals as f64 / self.calls as f64
        }
    }
}

/// Approximate projection used as the proposal centre.
#[derive(Debug, Clone)]
pub struct ProposalCenter {
    pub point: Vec<f64>,
    pub certified_gap: f64,
    pub converged: bool,
    pub calls: CpCalls,
}

/// Dominating potential with centre `center`, anchor `anchor` (`z` or `q`),
/// radius `delta`, constant slack and additive offset.
#[derive(Debug, Clone)]
pub struct EnvelopeParams {
    pub center: Vec<f64>,
    pub anchor: Vec<f64>,
    pub eta: f64,
    pub delta: f64,
    pub slack: f64,
    pub offset: f64,
}

impl EnvelopeParams {
    pub fn eval(&self, w: &[f64]) -> f64 {
        let r = dist(w, &self.center);
        let r0 = dist(&self.center, &self.anchor);
        (r * r + r0 * r0) / (2.0 * self.eta) - self.delta / self.eta * (r + r0) - self.slack
            + self.offset
    }

    /// The proposal law `∝ exp(-eval)`: completing the square in `r` gives
    /// radial shift `δ`.
    pub fn proposal(&self) -> ProposalSpec {
        ProposalSpec {
            center: self.center.clone(),
            shift: self.delta,
            step: self.eta,
        }
    }
}

// ---------------------------------------------------------------------------
// Constrained target

/// RGO input for the single-lifted body: the Gaussian half-step `(y, s)`.
#[derive(Debug, Clone)]
pub struct RgoInputConstrained<'a> {
    pub target: &'a SingleLiftedTarget,
    pub y: Vec<f64>,
    pub s: f64,
    pub eta: f64,
}

impl RgoInputConstrained<'_> {
    /// `z = (y, s - aη)`.
    pub fn z(&self) -> Vec<f64> {
        let mut z = self.y.clone();
        z.push(self.s - self.target.a * self.eta);
        z
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::Precondition(format!("step must be positive, got {}", self.eta)));
        }
        if self.y.len() != self.target.dim() {
            return Err(Error::Precondition("RGO input has the wrong dimension".into()));
        }
        Ok(())
    }
}

/// `ζ(x) = |x-y|²/(2η) + [f(x)/a - (s-aη)]₊²/(2η)` together with
/// `t(x) = max(f(x)/a, s - aη)`.
pub fn zeta_eval(x: &[f64], input: &RgoInputConstrained<'_>) -> (f64, f64) {
    let a = input.target.a;
    let eta = input.eta;
    let floor = input.s - a * eta;
    let fa = input.target.base.f.value(x) / a;
    let excess = (fa - floor).max(0.0);
    let value = dist(x, &input.y).powi(2) / (2.0 * eta) + excess * excess / (2.0 * eta);
    (value, fa.max(floor))
}

fn zeta_with_subgradient(
    x: &[f64],
    input: &RgoInputConstrained<'_>,
) -> Result<(f64, Vec<f64>)> {
    let a = input.target.a;
    let eta = input.eta;
    let f = &input.target.base.f;
    let floor = input.s - a * eta;
    let excess = (f.value(x) / a - floor).max(0.0);
    let value = dist(x, &input.y).powi(2) / (2.0 * eta) + excess * excess / (2.0 * eta);
    let mut grad: Vec<f64> = x.iter().zip(&input.y).map(|(xi, yi)| (xi - yi) / eta).collect();
    if excess > 0.0 {
        let g = f.subgradient(x)?;
        for (gi, fi) in grad.iter_mut().zip(g) {
            *gi += excess * fi / (a * eta);
        }
    }
    Ok((value, grad))
}

/// Approximate `proj_Q(z)` by minimizing `ζ` over `K` with the cutting-plane
/// method, then lifting with `t~ = max(f(x~)/a, s - aη)`.
pub fn rgo_subproblem_constrained(
    input: &RgoInputConstrained<'_>,
    target_gap: f64,
) -> Result<ProposalCenter> {
    input.validate()?;
    let target = input.target;
    let d = target.dim();
    let f = &target.base.f;
    if !f.capabilities().subgradient {
        return Err(Error::MissingCapability {
            oracle: f.name().to_string(),
            capability: "subgradient",
        });
    }
    // ζ is only evaluated at feasible points, where f's subgradient exists.
    let failure = std::cell::RefCell::new(None);
    let objective = |x: &[f64]| match zeta_with_subgradient(x, input) {
        Ok(v) => v,
        Err(e) => {
            *failure.borrow_mut() = Some(e);
            (f64::INFINITY, vec![0.0; x.len()])
        }
    };
    let k = &target.base.k;
    let separation = |x: &[f64]| Ok(k.separate(x));
    let problem = CpProblem {
        dim: d,
        objective: &objective,
        separation: &separation,
        center: vec![0.0; d],
        radius: target.base.outer_radius(),
        strong_convexity: 1.0 / input.eta,
        target_gap,
        max_iterations: None,
    };
    let result = cp_minimize(&problem)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let (_, t) = zeta_eval(&result.point, input);
    let mut point = result.point;
    point.push(t);
    Ok(ProposalCenter {
        point,
        certified_gap: result.certified_gap,
        converged: result.converged,
        calls: result.calls,
    })
}

/// `Θ(w) = I_Q(w) + a t + |w - (y, s)|²/(2η)`.
pub fn theta_eval(w: &[f64], input: &RgoInputConstrained<'_>) -> f64 {
    let target = input.target;
    if !target.q_member(w) {
        return f64::INFINITY;
    }
    let d = target.dim();
    let mut ys = input.y.clone();
    ys.push(input.s);
    target.a * w[d] + dist(w, &ys).powi(2) / (2.0 * input.eta)
}

/// The fixed-radius proposal potential
/// `P₁(w) = (|w-w~|² + |w~-z|²)/(2η) - √2(L+d)/(a√(η(d+1)))·(|w-w~| + |w~-z|)
///          - 6(L+d)²/(a²(d+1)) + a s - a²η/2`.
pub fn p1_eval(w: &[f64], center: &[f64], input: &RgoInputConstrained<'_>) -> f64 {
    let target = input.target;
    let d = target.dim() as f64;
    let l = target.base.lipschitz();
    let a = target.a;
    let eta = input.eta;
    let z = input.z();
    let r = dist(w, center);
    let r0 = dist(center, &z);
    (r * r + r0 * r0) / (2.0 * eta)
        - 2f64.sqrt() * (l + d) / (a * (eta * (d + 1.0)).sqrt()) * (r + r0)
        - 6.0 * (l + d).powi(2) / (a * a * (d + 1.0))
        + a * input.s
        - a * a * eta / 2.0
}

/// Envelope parameters for the constrained RGO around `center`.
pub fn constrained_envelope(
    input: &RgoInputConstrained<'_>,
    center: &ProposalCenter,
    mode: Envelope,
) -> Result<EnvelopeParams> {
    let target = input.target;
    let d = target.dim() as f64;
    let l = target.base.lipschitz();
    let a = target.a;
    let eta = input.eta;
    let offset = a * input.s - a * a * eta / 2.0;
    let (delta, slack) = match mode {
        Envelope::Certified => ((1.0 + l / a) * (2.0 * eta * center.certified_gap).sqrt(), 0.0),
        Envelope::Printed => {
            if (a - d).abs() > 1e-12 * d.max(1.0) {
                return Err(Error::Precondition(format!(
                    "the printed envelope requires a = d (a = {a}, d = {d})"
                )));
            }
            (
                (2.0 * eta / (d + 1.0)).sqrt() * (l + d) / a,
                6.0 * (l + d).powi(2) / (a * a * (d + 1.0)),
            )
        }
    };
    Ok(EnvelopeParams {
        center: center.point.clone(),
        anchor: input.z(),
        eta,
        delta,
        slack,
        offset,
    })
}

fn required_gap(lifted_dim: usize) -> f64 {
    1.0 / lifted_dim as f64
}

/// Use the solve if it converged, if its certified gap is within ten times
/// the target, or if it still meets the `1/n` accuracy the envelope radius
/// is calibrated for; otherwise fail rather than risk an invalid envelope.
fn accept_center(center: &ProposalCenter, target_gap: f64, lifted_dim: usize) -> Result<()> {
    let required = required_gap(lifted_dim);
    if center.converged || center.certified_gap <= 10.0 * target_gap {
        return Ok(());
    }
    if center.certified_gap <= required {
        log::debug!(
            "centre solve stopped at gap {:e} (target {:e}); within 1/n",
            center.certified_gap,
            target_gap
        );
        return Ok(());
    }
    Err(Error::CpNotConverged {
        certified_gap: center.certified_gap,
        required_gap: required,
    })
}

fn rejection_loop<R: Rng + ?Sized>(
    envelope: &EnvelopeParams,
    theta: impl Fn(&[f64]) -> f64,
    budget: u64,
    stats: &mut RgoStats,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut sampler = ProposalSampler::new(envelope.proposal())?;
    for _ in 0..budget {
        stats.proposals += 1;
        let w = sampler.sample(rng)?;
        let th = theta(&w);
        if !th.is_finite() {
            continue;
        }
        let log_ratio = envelope.eval(&w) - th;
        if log_ratio > 1e-9 * (1.0 + th.abs()) {
            stats.envelope_violations += 1;
            log::warn!("envelope exceeds target potential by {log_ratio:e}");
        }
        let u: f64 = rng.gen();
        if u.ln() <= log_ratio {
            return Ok(w);
        }
    }
    Err(Error::ProposalBudget { budget })
}

/// One exact draw from `N(z, ηI)|_Q`.
pub fn rgo_sample_constrained<R: Rng + ?Sized>(
    input: &RgoInputConstrained<'_>,
    settings: &RgoSettings,
    rng: &mut R,
) -> Result<(Vec<f64>, RgoStats)> {
    let n = input.target.lifted_dim();
    let target_gap = settings.gap_factor * required_gap(n);
    let center = rgo_subproblem_constrained(input, target_gap)?;
    accept_center(&center, target_gap, n)?;
    let envelope = constrained_envelope(input, &center, settings.envelope)?;
    let mut stats = RgoStats {
        calls: 1,
        cp_separation_calls: center.calls.separation,
        cp_subgradient_calls: center.calls.subgradient,
        certified_gap: center.certified_gap,
        ..Default::default()
    };
    let w = rejection_loop(
        &envelope,
        |w| theta_eval(w, input),
        settings.proposal_budget,
        &mut stats,
        rng,
    )?;
    Ok((w, stats))
}

// ---------------------------------------------------------------------------
// Composite target

/// RGO input for the double-lifted body: the Gaussian half-step
/// `(y, u, v)` and the previous (feasible) RGO output.
#[derive(Debug, Clone)]
pub struct RgoInputComposite<'a> {
    pub target: &'a DoubleLiftedTarget,
    pub yuv: Vec<f64>,
    pub eta: f64,
    pub prev: Vec<f64>,
}

impl RgoInputComposite<'_> {
    /// `q = (y, u, v - bη)`.
    pub fn q(&self) -> Vec<f64> {
        let mut q = self.yuv.clone();
        let last = q.len() - 1;
        q[last] -= self.target.b * self.eta;
        q
    }

    pub fn local_radius(&self) -> f64 {
        dist(&self.prev, &self.q())
    }

    pub fn v(&self) -> f64 {
        self.yuv[self.yuv.len() - 1]
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::Precondition(format!("step must be positive, got {}", self.eta)));
        }
        let n = self.target.lifted_dim();
        if self.yuv.len() != n || self.prev.len() != n {
            return Err(Error::Precondition("RGO input has the wrong dimension".into()));
        }
        if !self.target.qtilde_member(&self.prev) {
            return Err(Error::Precondition("previous RGO output is not in Q~".into()));
        }
        Ok(())
    }
}

/// Approximate `proj_Q~(q)` by minimizing `|p - q|²/(2η)` over
/// `Q~ ∩ B(q, 2 r_loc)`, `r_loc = |prev - q|`.
pub fn rgo_subproblem_composite(
    input: &RgoInputComposite<'_>,
    target_gap: f64,
) -> Result<ProposalCenter> {
    input.validate()?;
    let q = input.q();
    let r_loc = dist(&input.prev, &q);
    if r_loc == 0.0 {
        return Ok(ProposalCenter {
            point: input.prev.clone(),
            certified_gap: 0.0,
            converged: true,
            calls: CpCalls::default(),
        });
    }
    let eta = input.eta;
    let target = input.target;
    let radius = 2.0 * r_loc;
    let objective = |p: &[f64]| {
        let diff: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a - b).collect();
        let v = norm(&diff).powi(2) / (2.0 * eta);
        (v, diff.into_iter().map(|g| g / eta).collect())
    };
    let qtilde = |p: &[f64]| target.separate(p);
    let local_ball = |p: &[f64]| Ok(separate_ball(&q, radius, p));
    let parts: [&dyn Fn(&[f64]) -> Result<SeparationResult>; 2] = [&qtilde, &local_ball];
    let separation = |p: &[f64]| separate_intersection(&parts, p);
    let problem = CpProblem {
        dim: target.lifted_dim(),
        objective: &objective,
        separation: &separation,
        center: q.clone(),
        radius,
        strong_convexity: 1.0 / eta,
        target_gap,
        max_iterations: None,
    };
    let result = cp_minimize(&problem)?;
    Ok(ProposalCenter {
        point: result.point,
        certified_gap: result.certified_gap,
        converged: result.converged,
        calls: result.calls,
    })
}

/// `Θ~(p) = I_Q~(p) + |p - q|²/(2η) + b v - η b²/2`.
pub fn theta_tilde_eval(p: &[f64], input: &RgoInputComposite<'_>) -> f64 {
    let target = input.target;
    if !target.qtilde_member(p) {
        return f64::INFINITY;
    }
    let b = target.b;
    dist(p, &input.q()).powi(2) / (2.0 * input.eta) + b * input.v() - input.eta * b * b / 2.0
}

/// `P~₁(p) = (|p-p~|² + |p~-q|²)/(2η) - (δ/η)(|p-p~| + |p~-q|) + b v - b²η/2 - δ²/η`
/// with `δ = sqrt(2η/(d+2))`.
pub fn ptilde1_eval(p: &[f64], center: &[f64], input: &RgoInputComposite<'_>) -> f64 {
    let target = input.target;
    let eta = input.eta;
    let b = target.b;
    let delta = (2.0 * eta / (target.dim() as f64 + 2.0)).sqrt();
    let q = input.q();
    let r = dist(p, center);
    let r0 = dist(center, &q);
    (r * r + r0 * r0) / (2.0 * eta) - delta / eta * (r + r0) + b * input.v()
        - b * b * eta / 2.0
        - delta * delta / eta
}

pub fn composite_envelope(
    input: &RgoInputComposite<'_>,
    center: &ProposalCenter,
    mode: Envelope,
) -> EnvelopeParams {
    let target = input.target;
    let eta = input.eta;
    let b = target.b;
    let (delta, slack) = match mode {
        Envelope::Certified => ((2.0 * eta * center.certified_gap).sqrt(), 0.0),
        Envelope::Printed => {
            let delta = (2.0 * eta / (target.dim() as f64 + 2.0)).sqrt();
            (delta, delta * delta / eta)
        }
    };
    EnvelopeParams {
        center: center.point.clone(),
        anchor: input.q(),
        eta,
        delta,
        slack,
        offset: b * input.v() - b * b * eta / 2.0,
    }
}

/// One exact draw from `N(q, ηI)|_Q~`.
pub fn rgo_sample_composite<R: Rng + ?Sized>(
    input: &RgoInputComposite<'_>,
    settings: &RgoSettings,
    rng: &mut R,
) -> Result<(Vec<f64>, RgoStats)> {
    let n = input.target.lifted_dim();
    let target_gap = settings.gap_factor * required_gap(n);
    let center = rgo_subproblem_composite(input, target_gap)?;
    accept_center(&center, target_gap, n)?;
    let envelope = composite_envelope(input, &center, settings.envelope);
    let mut stats = RgoStats {
        calls: 1,
        cp_separation_calls: center.calls.separation,
        cp_subgradient_calls: center.calls.subgradient,
        certified_gap: center.certified_gap,
        ..Default::default()
    };
    let p = rejection_loop(
        &envelope,
        |p| theta_tilde_eval(p, input),
        settings.proposal_budget,
        &mut stats,
        rng,
    )?;
    Ok((p, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{CompositeTarget, ConstrainedTarget};
    use crate::oracle::library::{abs_1d, boxed, zero};

    fn c1_target(f: crate::oracle::FunctionOracle) -> SingleLiftedTarget {
        SingleLiftedTarget::with_scale(ConstrainedTarget::new(f, boxed(1, 1.0)).unwrap(), 1.0)
            .unwrap()
    }

    fn input(t: &SingleLiftedTarget, y: f64, s: f64, eta: f64) -> RgoInputConstrained<'_> {
        RgoInputConstrained { target: t, y: vec![y], s, eta }
    }

    #[test]
    fn zeta_examples() {
        let t0 = c1_target(zero(1));
        assert_eq!(zeta_eval(&[0.0], &input(&t0, 0.0, 1.0, 1.0)).0, 0.0);
        let t = c1_target(abs_1d());
        let inp = input(&t, 0.0, 0.0, 1.0);
        assert_eq!(zeta_eval(&[0.0], &inp).0, 0.5);
        assert_eq!(zeta_eval(&[1.0], &inp).0, 2.5);
        assert_eq!(zeta_eval(&[1.0], &inp).1, 1.0);
    }

    #[test]
    fn theta_examples() {
        let t = c1_target(zero(1));
        let inp = input(&t, 0.0, 0.0, 1.0);
        assert_eq!(theta_eval(&[0.0, 0.0], &inp), 0.0);
        assert_eq!(theta_eval(&[2.0, 0.0], &inp), f64::INFINITY);
        let inp = input(&t, 0.5, 1.0, 1.0);
        assert_eq!(theta_eval(&[0.5, 1.0], &inp), 1.0);
    }

    #[test]
    fn p1_examples() {
        // d = 1, L = 1, a = 1, eta = 1; pick y, s with z = w~ = w.
        let t = c1_target(abs_1d());
        let inp = input(&t, 0.0, 0.0, 1.0);
        let z = inp.z();
        assert!((p1_eval(&z, &z, &inp) + 12.5).abs() <= 1e-12);
        let w = vec![z[0] + 1.0, z[1]];
        assert!((p1_eval(&w, &z, &inp) + 14.0).abs() <= 1e-12);
        let inp2 = input(&t, 0.0, 2.0, 1.0);
        let z2 = inp2.z();
        assert!((p1_eval(&z2, &z2, &inp2) + 10.5).abs() <= 1e-12);
    }

    #[test]
    fn printed_envelope_matches_p1() {
        let t = SingleLiftedTarget::new(
            ConstrainedTarget::new(crate::oracle::library::l1_norm(2), boxed(2, 1.0)).unwrap(),
        );
        let inp = RgoInputConstrained { target: &t, y: vec![0.3, -0.2], s: 0.4, eta: 0.25 };
        let center = ProposalCenter {
            point: vec![0.25, -0.1, 0.3],
            certified_gap: 0.01,
            converged: true,
            calls: CpCalls::default(),
        };
        let env = constrained_envelope(&inp, &center, Envelope::Printed).unwrap();
        for w in [[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [0.25, -0.1, 0.3]] {
            let a = env.eval(&w);
            let b = p1_eval(&w, &center.point, &inp);
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn printed_envelope_requires_a_equal_d() {
        let t = c1_target(abs_1d());
        let t2 = SingleLiftedTarget::with_scale(t.base.clone(), 2.0).unwrap();
        let inp = input(&t2, 0.0, 1.0, 0.25);
        let center = ProposalCenter {
            point: vec![0.0, 0.5],
            certified_gap: 0.0,
            converged: true,
            calls: CpCalls::default(),
        };
        assert!(constrained_envelope(&inp, &center, Envelope::Printed).is_err());
        assert!(constrained_envelope(&inp, &center, Envelope::Certified).is_ok());
    }

    #[test]
    fn subproblem_examples() {
        // f = 0, K = [-1,1], a = 1, eta = 1, (y, s) = (2, 6): proj_Q(z) = (1, 5)
        let t = c1_target(zero(1));
        let radius = 2.0 * (2.0f64 / 2.0).sqrt();
        let inp = input(&t, 2.0, 6.0, 1.0);
        let c = rgo_subproblem_constrained(&inp, 0.5).unwrap();
        assert!(dist(&c.point, &[1.0, 5.0]) <= radius);
        let c = rgo_subproblem_constrained(&inp, 1e-9).unwrap();
        assert!(dist(&c.point, &[1.0, 5.0]) <= 1e-4);
        // z inside Q
        let inp = input(&t, 0.0, 10.0, 1.0);
        let c = rgo_subproblem_constrained(&inp, 0.5).unwrap();
        assert!(dist(&c.point, &inp.z()) <= radius);
        // f = |x|, z = (0, -2): projection (0, 0)
        let t = c1_target(abs_1d());
        let inp = input(&t, 0.0, -1.0, 1.0);
        let c = rgo_subproblem_constrained(&inp, 1e-10).unwrap();
        assert!(dist(&c.point, &[0.0, 0.0]) <= 1e-4, "{:?}", c.point);
    }

    #[test]
    fn subproblem_needs_subgradient() {
        let t = c1_target(abs_1d().without_subgradient());
        let inp = input(&t, 0.0, 1.0, 1.0);
        assert!(matches!(
            rgo_subproblem_constrained(&inp, 0.5),
            Err(Error::MissingCapability { .. })
        ));
    }

    fn p_simple() -> DoubleLiftedTarget {
        DoubleLiftedTarget::with_scales(
            CompositeTarget::new(zero(1), abs_1d()).unwrap(),
            1.0,
            1.0,
            None,
        )
        .unwrap()
    }

    #[test]
    fn ptilde1_examples() {
        let t = p_simple();
        let inp = RgoInputComposite { target: &t, yuv: vec![0.0, 0.0, 0.0], eta: 1.0, prev: vec![0.0, 1.0, 2.0] };
        let q = inp.q();
        assert_eq!(q, vec![0.0, 0.0, -1.0]);
        assert!((ptilde1_eval(&q, &q, &inp) + 7.0 / 6.0).abs() <= 1e-12);
        let inp2 = RgoInputComposite { yuv: vec![0.0, 0.0, 2.0], ..inp.clone() };
        let q2 = inp2.q();
        assert!((ptilde1_eval(&q2, &q2, &inp2) - 5.0 / 6.0).abs() <= 1e-12);
        let p = vec![1.0, 0.0, -1.0];
        let expect = 0.5 - (2.0f64 / 3.0).sqrt() - 7.0 / 6.0;
        assert!((ptilde1_eval(&p, &q, &inp) - expect).abs() <= 1e-12);
        assert!((expect + 1.4832).abs() <= 1e-4);
    }

    #[test]
    fn composite_subproblem_examples() {
        let t = p_simple();
        let eta = 0.25;
        let delta = (2.0 * eta / 3.0f64).sqrt();
        // q deep inside Q~
        let inp = RgoInputComposite { target: &t, yuv: vec![0.1, 2.0, 5.0 + eta], eta, prev: vec![0.0, 1.0, 2.0] };
        let c = rgo_subproblem_composite(&inp, 1.0 / 3.0).unwrap();
        assert!(dist(&c.point, &inp.q()) <= delta);
        // q = (0, -1, 2): projection (0, 0, 2)
        let inp = RgoInputComposite { target: &t, yuv: vec![0.0, -1.0, 2.0 + eta], eta, prev: vec![0.0, 1.0, 2.0] };
        let c = rgo_subproblem_composite(&inp, 1.0 / 3.0).unwrap();
        assert!(dist(&c.point, &[0.0, 0.0, 2.0]) <= delta, "{:?}", c.point);
        // degenerate radius
        let inp = RgoInputComposite { target: &t, yuv: vec![0.0, 1.0, 2.0 + eta], eta, prev: vec![0.0, 1.0, 2.0] };
        let c = rgo_subproblem_composite(&inp, 1.0 / 3.0).unwrap();
        assert_eq!(c.point, vec![0.0, 1.0, 2.0]);
        assert_eq!(c.calls, CpCalls::default());
    }

    #[test]
    fn composite_rejects_infeasible_prev() {
        let t = p_simple();
        let inp = RgoInputComposite { target: &t, yuv: vec![0.0, 1.0, 2.0], eta: 0.25, prev: vec![0.0, -1.0, 0.0] };
        assert!(matches!(rgo_subproblem_composite(&inp, 0.1), Err(Error::Precondition(_))));
    }
}
