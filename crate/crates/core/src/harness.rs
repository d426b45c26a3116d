//! Reference oracles and comparators: a brute-force truncated Gaussian,
//! grid quadrature for low-dimensional targets, the two-sample
//! Kolmogorov-Smirnov test, moment summaries, and the instance registry.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifting::{CompositeTarget, ConstrainedTarget};
use crate::oracle::library::{ball, boxed, linear, shifted_l1, zero};
use crate::oracle::{FunctionOracle, SetOracle};
use crate::rgo::{
    rgo_sample_composite, rgo_sample_constrained, RgoInputComposite, RgoInputConstrained,
    RgoSettings, RgoStats,
};
use crate::sampler::{LiftedTarget, Target};

/// Draw `N(z, ηI)` until `member` accepts. Returns the draw and the number
/// of Gaussian draws used.
pub fn naive_truncated_gaussian<R: Rng + ?Sized>(
    z: &[f64],
    eta: f64,
    member: impl Fn(&[f64]) -> bool,
    rng: &mut R,
    max_tries: u64,
) -> Result<(Vec<f64>, u64)> {
    let sd = eta.sqrt();
    let mut w = vec![0.0; z.len()];
    for tries in 1..=max_tries {
        for (wi, zi) in w.iter_mut().zip(z) {
            let g: f64 = rng.sample(StandardNormal);
            *wi = zi + sd * g;
        }
        if member(&w) {
            return Ok((w, tries));
        }
    }
    Err(Error::ProposalBudget { budget: max_tries })
}

// ---------------------------------------------------------------------------
// Moments

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentErrors {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub l1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub count: usize,
    pub mean: Vec<f64>,
    /// Diagonal of the covariance.
    pub variance: Vec<f64>,
    /// `E |X|₁`.
    pub l1: f64,
    /// Absent for quadrature references.
    pub errors: Option<MomentErrors>,
}

fn mean_and_se_iid(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (var / n).sqrt())
}

/// Mean and batch-means standard error with `floor(sqrt(n))` batches.
fn mean_and_se_batch(v: &[f64]) -> (f64, f64) {
    let n = v.len();
    let batches = ((n as f64).sqrt() as usize).max(2);
    let size = n / batches;
    if size < 2 {
        return mean_and_se_iid(v);
    }
    let m = v.iter().sum::<f64>() / n as f64;
    let means: Vec<f64> = (0..batches)
        .map(|b| v[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    (m, (var / batches as f64).sqrt())
}

impl MomentReport {
    fn build<'a>(
        samples: impl Iterator<Item = &'a [f64]> + Clone,
        estimator: fn(&[f64]) -> (f64, f64),
    ) -> Result<Self> {
        let d = samples
            .clone()
            .next()
            .map(|s| s.len())
            .ok_or_else(|| Error::Precondition("no samples".into()))?;
        let count = samples.clone().count();
        if count < 2 {
            return Err(Error::Precondition("need at least two samples".into()));
        }
        let mut mean = vec![0.0; d];
        let mut variance = vec![0.0; d];
        let mut se_mean = vec![0.0; d];
        let mut se_var = vec![0.0; d];
        for i in 0..d {
            let xi: Vec<f64> = samples.clone().map(|s| s[i]).collect();
            let (m, se) = estimator(&xi);
            let sq: Vec<f64> = xi.iter().map(|x| (x - m).powi(2)).collect();
            let (v, sev) = estimator(&sq);
            mean[i] = m;
            se_mean[i] = se;
            variance[i] = v * count as f64 / (count as f64 - 1.0);
            se_var[i] = sev;
        }
        let l1s: Vec<f64> = samples.map(|s| s.iter().map(|x| x.abs()).sum()).collect();
        let (l1, se_l1) = estimator(&l1s);
        Ok(Self {
            count,
            mean,
            variance,
            l1,
            errors: Some(MomentErrors { mean: se_mean, variance: se_var, l1: se_l1 }),
        })
    }

    /// Moments of independent draws.
    pub fn from_iid<'a>(samples: impl Iterator<Item = &'a [f64]> + Clone) -> Result<Self> {
        Self::build(samples, mean_and_se_iid)
    }

    /// Moments of a Markov chain, with batch-means standard errors.
    pub fn from_chain<'a>(samples: impl Iterator<Item = &'a [f64]> + Clone) -> Result<Self> {
        Self::build(samples, mean_and_se_batch)
    }
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Constrained,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Box { half_width: f64 },
    Ball { radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    Zero,
    /// `scale·|x|₁`.
    L1 { scale: f64 },
    /// `scale·|x - shift·1|₁`.
    ShiftedL1 { shift: f64, scale: f64 },
    /// `<c, x>`.
    Linear { c: Vec<f64> },
}

impl PotentialSpec {
    pub fn build(&self, d: usize) -> Result<FunctionOracle> {
        Ok(match self {
            PotentialSpec::Zero => zero(d),
            PotentialSpec::L1 { scale } => shifted_l1(vec![0.0; d], *scale),
            PotentialSpec::ShiftedL1 { shift, scale } => shifted_l1(vec![*shift; d], *scale),
            PotentialSpec::Linear { c } => {
                if c.len() != d {
                    return Err(Error::Config(format!(
                        "linear potential has {} coefficients for dimension {d}",
                        c.len()
                    )));
                }
                linear(c.clone())
            }
        })
    }
}

impl BodySpec {
    pub fn build(&self, d: usize) -> Result<SetOracle> {
        match *self {
            BodySpec::Box { half_width } if half_width > 0.0 => Ok(boxed(d, half_width)),
            BodySpec::Ball { radius } if radius > 0.0 => Ok(ball(d, radius)),
            _ => Err(Error::Config("body size must be positive".into())),
        }
    }

    fn half_extent(&self) -> f64 {
        match *self {
            BodySpec::Box { half_width } => half_width,
            BodySpec::Ball { radius } => radius,
        }
    }
}

/// A reproducible target description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    pub kind: InstanceKind,
    pub dim: usize,
    /// Required for constrained instances.
    #[serde(default)]
    pub body: Option<BodySpec>,
    pub f: PotentialSpec,
    /// Required for composite instances.
    #[serde(default)]
    pub h: Option<PotentialSpec>,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Target> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let f = self.f.build(d)?;
        match self.kind {
            InstanceKind::Constrained => {
                let body = self
                    .body
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("{}: constrained instance needs a body", self.name)))?;
                Ok(Target::Constrained(ConstrainedTarget::new(f, body.build(d)?)?))
            }
            InstanceKind::Composite => {
                let h = self
                    .h
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("{}: composite instance needs h", self.name)))?;
                Ok(Target::Composite(CompositeTarget::new(f, h.build(d)?)?))
            }
        }
    }

    /// Unnormalized log-density of the unlifted target (`-∞` off `K`).
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        Ok(match self.build()? {
            Target::Constrained(t) => {
                if t.k.contains(x) {
                    -t.f.value(x)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Target::Composite(t) => -t.f.value(x) - t.h.value(x),
        })
    }
}

fn c1(d: usize) -> InstanceSpec {
    InstanceSpec {
        name: format!("C1_d{d}"),
        kind: InstanceKind::Constrained,
        dim: d,
        body: Some(BodySpec::Box { half_width: 1.0 }),
        f: PotentialSpec::L1 { scale: 1.0 },
        h: None,
    }
}

/// The fixed instance set. Names carry the dimension, e.g. `C1_d4`.
pub fn registry() -> Vec<InstanceSpec> {
    let mut out: Vec<InstanceSpec> = [1, 2, 4, 8].into_iter().map(c1).collect();
    for d in [1, 2, 4] {
        out.push(InstanceSpec {
            name: format!("C2_d{d}"),
            kind: InstanceKind::Constrained,
            dim: d,
            body: Some(BodySpec::Ball { radius: 1.0 }),
            f: PotentialSpec::Zero,
            h: None,
        });
        out.push(InstanceSpec {
            name: format!("C3_d{d}"),
            kind: InstanceKind::Constrained,
            dim: d,
            body: Some(BodySpec::Ball { radius: 1.0 }),
            f: PotentialSpec::Linear { c: vec![1.0 / (d as f64).sqrt(); d] },
            h: None,
        });
    }
    out.push(InstanceSpec {
        name: "P1_d1".into(),
        kind: InstanceKind::Composite,
        dim: 1,
        body: None,
        f: PotentialSpec::L1 { scale: 1.0 },
        h: Some(PotentialSpec::ShiftedL1 { shift: 0.5, scale: 2.0 }),
    });
    for d in [2, 4] {
        out.push(InstanceSpec {
            name: format!("P2_d{d}"),
            kind: InstanceKind::Composite,
            dim: d,
            body: None,
            f: PotentialSpec::L1 { scale: 1.0 },
            h: Some(PotentialSpec::ShiftedL1 { shift: 0.5, scale: 1.0 }),
        });
    }
    out
}

pub fn instance(name: &str) -> Option<InstanceSpec> {
    registry().into_iter().find(|s| s.name == name)
}

// ---------------------------------------------------------------------------
// Quadrature

/// Half-width of the integration box for composite targets.
pub const COMPOSITE_QUADRATURE_RANGE: f64 = 10.0;

/// Moments of the normalized target by composite Simpson quadrature with
/// spacing about `resolution` (polar coordinates for discs). Only `d <= 2`
/// is supported.
pub fn quadrature_moments(spec: &InstanceSpec, resolution: f64) -> Result<MomentReport> {
    let d = spec.dim;
    if d > 2 {
        return Err(Error::Unsupported(format!("quadrature needs d <= 2, got {d}")));
    }
    if !(resolution > 0.0) {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    let target = spec.build()?;
    let half = match (&target, &spec.body) {
        (Target::Constrained(_), Some(body)) => body.half_extent(),
        _ => COMPOSITE_QUADRATURE_RANGE,
    };
    // Composite Simpson on a grid symmetric about 0 with a multiple of 4
    // intervals, so kinks of |x| and |x - 0.5| land on even nodes.
    let nodes = 4 * ((2.0 * half / resolution / 4.0).round() as usize).max(1);
    let h = 2.0 * half / nodes as f64;
    let coord = |i: usize| -half + i as f64 * h;
    let weight = |i: usize| {
        if i == 0 || i == nodes {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let density = |x: &[f64]| -> f64 {
        match &target {
            Target::Constrained(t) => {
                if t.k.contains(x) {
                    (-t.f.value(x)).exp()
                } else {
                    0.0
                }
            }
            Target::Composite(t) => (-t.f.value(x) - t.h.value(x)).exp(),
        }
    };
    let mut mass = 0.0;
    let mut m1 = vec![0.0; d];
    let mut m2 = vec![0.0; d];
    let mut l1 = 0.0;
    let mut x = vec![0.0; d];
    let mut accumulate = |x: &[f64], w: f64| {
        let p = w * density(x);
        if p == 0.0 {
            return;
        }
        mass += p;
        for i in 0..d {
            m1[i] += p * x[i];
            m2[i] += p * x[i] * x[i];
        }
        l1 += p * x.iter().map(|v| v.abs()).sum::<f64>();
    };
    if let (2, Some(BodySpec::Ball { radius })) = (d, &spec.body) {
        // Polar grid: Simpson in r, periodic trapezoid in θ. A Cartesian grid
        // would smear the indicator of the disc and converge at O(h^1.5).
        let radius = *radius;
        let nr = 2 * ((radius / resolution).ceil() as usize).max(1);
        let hr = radius / nr as f64;
        let nt = ((2.0 * std::f64::consts::PI * radius / resolution).ceil() as usize).max(8);
        let ht = 2.0 * std::f64::consts::PI / nt as f64;
        for i in 0..=nr {
            let r = i as f64 * hr;
            let simpson = if i == 0 || i == nr { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            for j in 0..nt {
                let theta = j as f64 * ht;
                x[0] = r * theta.cos();
                x[1] = r * theta.sin();
                // Points on the rim may round outside; pull them in.
                if i == nr {
                    x[0] *= 1.0 - 1e-15;
                    x[1] *= 1.0 - 1e-15;
                }
                accumulate(&x, simpson * r);
            }
        }
    } else if d == 1 {
        for i in 0..=nodes {
            x[0] = coord(i);
            accumulate(&x, weight(i));
        }
    } else {
        for i in 0..=nodes {
            for j in 0..=nodes {
                x[0] = coord(i);
                x[1] = coord(j);
                accumulate(&x, weight(i) * weight(j));
            }
        }
    }
    if !(mass > 0.0) {
        return Err(Error::Numeric("target has no mass on the grid".into()));
    }
    let mean: Vec<f64> = m1.iter().map(|m| m / mass).collect();
    let variance = m2.iter().zip(&mean).map(|(s, m)| s / mass - m * m).collect();
    Ok(MomentReport { count: 0, mean, variance, l1: l1 / mass, errors: None })
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    // The alternating series converges slowly near zero, where the value is 1.
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS statistic and its asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("both samples must be nonempty".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut stat = 0.0f64;
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        stat = stat.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    Ok((stat, kolmogorov_sf(ne.sqrt() * stat)))
}

// ---------------------------------------------------------------------------
// RGO cross-check

/// A fixed Gaussian half-step for RGO comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RgoPoint {
    Constrained { y: Vec<f64>, s: f64 },
    Composite { yuv: Vec<f64>, prev: Vec<f64> },
}

/// `(y, s) = (0, 1)` for constrained targets. For composite targets `prev`
/// lifts the origin with median slacks and `(y, u, v) = prev`.
pub fn default_rgo_point(target: &LiftedTarget) -> RgoPoint {
    match target {
        LiftedTarget::Single(t) => RgoPoint::Constrained { y: vec![0.0; t.dim()], s: 1.0 },
        LiftedTarget::Double(t) => {
            let d = t.dim();
            let x = vec![0.0; d];
            let ln2 = std::f64::consts::LN_2;
            let s = (t.base.h.value(&x) + ln2) / t.a;
            let tt = (t.base.f.value(&x) + t.a * s + ln2) / t.b;
            let mut prev = x;
            prev.extend([s, tt]);
            RgoPoint::Composite { yuv: prev.clone(), prev }
        }
    }
}

/// Per-coordinate KS comparison of the RGO against brute-force rejection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RgoComparison {
    pub statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub mean_proposals: f64,
    /// Draws of either sampler that failed membership.
    pub infeasible: usize,
}

/// Draw `n` lifted points from the RGO and from
/// [`naive_truncated_gaussian`] at the same input and compare every
/// coordinate with [`ks_two_sample`].
pub fn compare_rgo_to_naive<R: Rng + ?Sized>(
    target: &LiftedTarget,
    point: &RgoPoint,
    eta: f64,
    settings: &RgoSettings,
    n: usize,
    rng: &mut R,
) -> Result<RgoComparison> {
    let mut ours = Vec::with_capacity(n);
    let mut naive = Vec::with_capacity(n);
    let mut stats = RgoStats::default();
    let max_tries = 10_000_000;
    match (target, point) {
        (LiftedTarget::Single(t), RgoPoint::Constrained { y, s }) => {
            let input = RgoInputConstrained { target: t, y: y.clone(), s: *s, eta };
            let z = input.z();
            for _ in 0..n {
                let (w, st) = rgo_sample_constrained(&input, settings, rng)?;
                stats.absorb(&st);
                ours.push(w);
                naive.push(naive_truncated_gaussian(&z, eta, |w| t.q_member(w), rng, max_tries)?.0);
            }
        }
        (LiftedTarget::Double(t), RgoPoint::Composite { yuv, prev }) => {
            let input = RgoInputComposite { target: t, yuv: yuv.clone(), eta, prev: prev.clone() };
            let q = input.q();
            for _ in 0..n {
                let (p, st) = rgo_sample_composite(&input, settings, rng)?;
                stats.absorb(&st);
                ours.push(p);
                naive.push(
                    naive_truncated_gaussian(&q, eta, |p| t.qtilde_member(p), rng, max_tries)?.0,
                );
            }
        }
        _ => return Err(Error::Precondition("RGO point does not match the target kind".into())),
    }
    let infeasible = ours.iter().chain(&naive).filter(|p| !target.member(p)).count();
    let dim = ours.first().map_or(0, |p| p.len());
    let mut statistics = Vec::with_capacity(dim);
    let mut p_values = Vec::with_capacity(dim);
    for i in 0..dim {
        let a: Vec<f64> = ours.iter().map(|p| p[i]).collect();
        let b: Vec<f64> = naive.iter().map(|p| p[i]).collect();
        let (stat, p) = ks_two_sample(&a, &b)?;
        statistics.push(stat);
        p_values.push(p);
    }
    Ok(RgoComparison { statistics, p_values, mean_proposals: stats.mean_proposals(), infeasible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn naive_gaussian_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let z = [0.3, -1.0];
        let mut s = [0.0; 2];
        for _ in 0..n {
            let (w, tries) = naive_truncated_gaussian(&z, 0.5, |_| true, &mut rng, 10).unwrap();
            assert_eq!(tries, 1);
            s[0] += w[0];
            s[1] += w[1];
        }
        let se = (0.5f64 / n as f64).sqrt();
        assert!((s[0] / n as f64 - 0.3).abs() <= 3.0 * se);
        assert!((s[1] / n as f64 + 1.0).abs() <= 3.0 * se);

        let mut tries = 0;
        let draws = 20_000;
        for _ in 0..draws {
            tries += naive_truncated_gaussian(&z, 0.5, |w| w[1] >= -1.0, &mut rng, 1000).unwrap().1;
        }
        let frac = draws as f64 / tries as f64;
        assert!((frac - 0.5).abs() <= 0.01, "{frac}");
        assert!(naive_truncated_gaussian(&z, 0.5, |_| false, &mut rng, 5).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let c1 = instance("C1_d1").unwrap();
        let r = quadrature_moments(&c1, 1e-4).unwrap();
        let e1 = (-1f64).exp();
        assert!((r.l1 - (1.0 - 2.0 * e1) / (1.0 - e1)).abs() <= 1e-7, "{}", r.l1);
        assert!((r.l1 - 0.41802).abs() <= 1e-5);
        let flat = InstanceSpec { f: PotentialSpec::Zero, ..c1 };
        let r = quadrature_moments(&flat, 1e-3).unwrap();
        assert!(r.mean[0].abs() <= 1e-12);
        assert!((r.variance[0] - 1.0 / 3.0).abs() <= 1e-6);
        let p1 = instance("P1_d1").unwrap();
        let fine = quadrature_moments(&p1, 1e-4).unwrap();
        let coarse = quadrature_moments(&p1, 2e-4).unwrap();
        assert!((fine.mean[0] - coarse.mean[0]).abs() <= 1e-6);
        assert!(matches!(
            quadrature_moments(&instance("C1_d4").unwrap(), 0.1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quadrature_2d_uniform_box() {
        let spec = InstanceSpec { f: PotentialSpec::Zero, ..instance("C1_d2").unwrap() };
        let r = quadrature_moments(&spec, 1e-2).unwrap();
        assert!((r.variance[0] - 1.0 / 3.0).abs() <= 1e-4);
        assert!((r.l1 - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn ks_examples() {
        let a = [0.1, 0.5, 0.9];
        assert_eq!(ks_two_sample(&a, &a).unwrap().0, 0.0);
        assert_eq!(ks_two_sample(&a, &[2.0, 3.0]).unwrap().0, 1.0);
        assert!(ks_two_sample(&[], &a).is_err());
    }

    #[test]
    fn ks_null_calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pass = 0;
        for _ in 0..100 {
            let a: Vec<f64> = (0..10_000).map(|_| rng.gen()).collect();
            let b: Vec<f64> = (0..10_000).map(|_| rng.gen()).collect();
            if ks_two_sample(&a, &b).unwrap().1 > 0.01 {
                pass += 1;
            }
        }
        assert!(pass >= 98, "{pass}");
    }

    #[test]
    fn kolmogorov_tail_values() {
        // Known quantiles of the Kolmogorov distribution.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() <= 1e-3);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() <= 1e-3);
    }

    #[test]
    fn registry_builds() {
        for spec in registry() {
            let t = spec.build().unwrap();
            assert_eq!(t.dim(), spec.dim);
        }
        assert!(instance("C1_d8").is_some());
        assert!(instance("nope").is_none());
    }

    #[test]
    fn batch_means_exceed_iid_for_correlated_series() {
        let mut x = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let series: Vec<f64> = (0..40_000)
            .map(|_| {
                let g: f64 = rng.sample(StandardNormal);
                x = 0.9 * x + g;
                x
            })
            .collect();
        let (_, se_iid) = mean_and_se_iid(&series);
        let (_, se_bm) = mean_and_se_batch(&series);
        assert!(se_bm > 2.0 * se_iid);
    }
}
