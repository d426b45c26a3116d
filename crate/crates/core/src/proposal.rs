//! Exact draws from the shifted-radial proposal
//! `Λ(w) ∝ exp(-(|w - center| - c)² / (2η))` on `R^n`.
//!
//! In polar coordinates around the centre the direction is uniform on the
//! sphere and the radius has density `∝ r^(n-1) exp(-(r - c)² / (2η))` on
//! `(0, ∞)`, which is log-concave. Radii are drawn by tangent-hull adaptive
//! rejection sampling with a chord squeeze.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::norm;

/// Maximum number of abscissae kept by the adaptive hull.
const MAX_ABSCISSAE: usize = 64;
/// Attempts to push the rightmost abscissa past the mode.
const MAX_HULL_REPAIRS: usize = 60;

/// Uniform direction on the unit sphere in `R^n` (normalized Gaussian).
pub fn sample_unit_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be positive");
    loop {
        let w: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&w);
        if r > 0.0 {
            return w.into_iter().map(|v| v / r).collect();
        }
    }
}

/// Radial law `∝ r^power exp(-(r - shift)² / (2 step))` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLaw {
    pub power: f64,
    pub shift: f64,
    pub step: f64,
}

impl RadialLaw {
    pub fn new(power: f64, shift: f64, step: f64) -> Result<Self> {
        if !(power >= 0.0) || !(shift >= 0.0) || !(step > 0.0) || !shift.is_finite() {
            return Err(Error::Domain(format!(
                "radial law needs power >= 0, shift >= 0, step > 0 (got {power}, {shift}, {step})"
            )));
        }
        Ok(Self { power, shift, step })
    }

    pub fn log_density(&self, r: f64) -> f64 {
        let q = -(r - self.shift).powi(2) / (2.0 * self.step);
        if self.power == 0.0 {
            q
        } else {
            self.power * r.ln() + q
        }
    }

    pub fn dlog_density(&self, r: f64) -> f64 {
        self.power / r - (r - self.shift) / self.step
    }

    /// Second derivative of the log-density, `-power/r² - 1/step`.
    pub fn d2log_density(&self, r: f64) -> f64 {
        -self.power / (r * r) - 1.0 / self.step
    }

    /// `(c + sqrt(c² + 4 m η)) / 2`, the maximizer of the density.
    pub fn mode(&self) -> f64 {
        let (c, m, eta) = (self.shift, self.power, self.step);
        0.5 * (c + (c * c + 4.0 * m * eta).sqrt())
    }
}

/// Adaptive rejection sampler for a [`RadialLaw`]. The hull persists across
/// draws, so reusing one sampler for many draws from the same law is cheap.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    law: RadialLaw,
    xs: Vec<f64>,
    hs: Vec<f64>,
    dhs: Vec<f64>,
    /// Segment `j` of the upper hull covers `[bounds[j], bounds[j+1]]`.
    bounds: Vec<f64>,
    cumulative: Vec<f64>,
    offset: f64,
}

impl RadialSampler {
    pub fn new(law: RadialLaw) -> Result<Self> {
        let mode = law.mode();
        let anchor = if mode > 0.0 { mode } else { law.step.sqrt() };
        let mut s = Self {
            law,
            xs: Vec::new(),
            hs: Vec::new(),
            dhs: Vec::new(),
            bounds: Vec::new(),
            cumulative: Vec::new(),
            offset: 0.0,
        };
        for r in [0.5 * anchor, anchor, 2.0 * anchor] {
            s.insert(r);
        }
        let mut repairs = 0;
        while !(s.dhs[s.dhs.len() - 1] < 0.0) {
            repairs += 1;
            if repairs > MAX_HULL_REPAIRS {
                return Err(Error::Numeric(
                    "adaptive rejection: no abscissa right of the mode".into(),
                ));
            }
            let last = s.xs[s.xs.len() - 1];
            s.insert(2.0 * last + law.step.sqrt());
        }
        s.offset = s.hs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        s.rebuild()?;
        Ok(s)
    }

    pub fn law(&self) -> RadialLaw {
        self.law
    }

    fn insert(&mut self, r: f64) {
        let h = self.law.log_density(r);
        let dh = self.law.dlog_density(r);
        if !h.is_finite() || !dh.is_finite() {
            return;
        }
        let pos = self.xs.partition_point(|&x| x < r);
        if pos < self.xs.len() && self.xs[pos] == r {
            return;
        }
        self.xs.insert(pos, r);
        self.hs.insert(pos, h);
        self.dhs.insert(pos, dh);
    }

    fn tangent(&self, j: usize, r: f64) -> f64 {
        self.hs[j] + self.dhs[j] * (r - self.xs[j]) - self.offset
    }

    fn rebuild(&mut self) -> Result<()> {
        let k = self.xs.len();
        self.bounds.clear();
        self.bounds.push(0.0);
        for j in 0..k - 1 {
            let (x0, x1) = (self.xs[j], self.xs[j + 1]);
            let (s0, s1) = (self.dhs[j], self.dhs[j + 1]);
            let z = if (s0 - s1).abs() > 1e-300 {
                (self.hs[j + 1] - self.hs[j] - x1 * s1 + x0 * s0) / (s0 - s1)
            } else {
                0.5 * (x0 + x1)
            };
            self.bounds.push(z.clamp(x0, x1));
        }
        self.bounds.push(f64::INFINITY);

        self.cumulative.clear();
        let log_masses: Vec<f64> = (0..k).map(|j| self.segment_log_mass(j)).collect();
        let top = log_masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::Numeric("adaptive rejection: degenerate hull".into()));
        }
        let mut acc = 0.0;
        for lm in log_masses {
            acc += (lm - top).exp();
            self.cumulative.push(acc);
        }
        Ok(())
    }

    fn segment_log_mass(&self, j: usize) -> f64 {
        let (lo, hi) = (self.bounds[j], self.bounds[j + 1]);
        let s = self.dhs[j];
        if hi <= lo {
            return f64::NEG_INFINITY;
        }
        let ulo = self.tangent(j, lo);
        if s == 0.0 {
            return ulo + (hi - lo).ln();
        }
        let width = hi - lo;
        if s > 0.0 {
            let uhi = self.tangent(j, hi);
            uhi + (-(-s * width).exp_m1()).ln() - s.ln()
        } else {
            let decay = if width.is_finite() { (-(s * width).exp_m1()).ln() } else { 0.0 };
            ulo + decay - (-s).ln()
        }
    }

    fn sample_segment<R: Rng + ?Sized>(&self, j: usize, rng: &mut R) -> f64 {
        let (lo, hi) = (self.bounds[j], self.bounds[j + 1]);
        let s = self.dhs[j];
        let u: f64 = rng.gen();
        if s == 0.0 {
            return lo + u * (hi - lo);
        }
        // expm1/ln1p keep nearly flat segments (the tangent at the mode)
        // accurate; the naive inverse cancels catastrophically there.
        if s > 0.0 {
            hi + ((1.0 - u) * (-s * (hi - lo)).exp_m1()).ln_1p() / s
        } else {
            let span = if hi.is_finite() { (s * (hi - lo)).exp_m1() } else { -1.0 };
            lo + (u * span).ln_1p() / s
        }
    }

    fn squeeze(&self, r: f64) -> f64 {
        let k = self.xs.len();
        if r < self.xs[0] || r > self.xs[k - 1] {
            return f64::NEG_INFINITY;
        }
        let j = self.xs.partition_point(|&x| x <= r).min(k - 1).max(1) - 1;
        let (x0, x1) = (self.xs[j], self.xs[j + 1]);
        let t = (r - x0) / (x1 - x0);
        (1.0 - t) * self.hs[j] + t * self.hs[j + 1] - self.offset
    }

    /// One exact draw from the radial law.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<f64> {
        loop {
            let total = self.cumulative[self.cumulative.len() - 1];
            let pick = rng.gen::<f64>() * total;
            let j = self.cumulative.partition_point(|&c| c < pick).min(self.xs.len() - 1);
            let r = self.sample_segment(j, rng);
            if !(r > 0.0) || !r.is_finite() {
                continue;
            }
            let upper = self.tangent(j, r);
            let log_u = rng.gen::<f64>().ln();
            if log_u <= self.squeeze(r) - upper {
                return Ok(r);
            }
            let h = self.law.log_density(r) - self.offset;
            let accept = log_u <= h - upper;
            if self.xs.len() < MAX_ABSCISSAE {
                self.insert(r);
                self.rebuild()?;
            }
            if accept {
                return Ok(r);
            }
        }
    }
}

/// One exact draw from `law`.
pub fn ars_sample<R: Rng + ?Sized>(law: RadialLaw, rng: &mut R) -> Result<f64> {
    RadialSampler::new(law)?.sample(rng)
}

/// Parameters of the shifted-radial proposal: centre, radial shift `c` and
/// step `η`; the ambient dimension is the length of the centre.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalSpec {
    pub center: Vec<f64>,
    pub shift: f64,
    pub step: f64,
}

impl ProposalSpec {
    pub fn radial_law(&self) -> Result<RadialLaw> {
        let n = self.center.len();
        if n == 0 {
            return Err(Error::Domain("proposal centre must be nonempty".into()));
        }
        RadialLaw::new((n - 1) as f64, self.shift, self.step)
    }
}

/// Reusable sampler for one [`ProposalSpec`].
#[derive(Debug, Clone)]
pub struct ProposalSampler {
    spec: ProposalSpec,
    radial: RadialSampler,
}

impl ProposalSampler {
    pub fn new(spec: ProposalSpec) -> Result<Self> {
        let radial = RadialSampler::new(spec.radial_law()?)?;
        Ok(Self { spec, radial })
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Vec<f64>> {
        let theta = sample_unit_sphere(self.spec.center.len(), rng);
        let r = self.radial.sample(rng)?;
        Ok(self
            .spec
            .center
            .iter()
            .zip(theta)
            .map(|(c, t)| c + r * t)
            .collect())
    }
}

/// One draw `center + r θ` from the proposal described by `spec`.
pub fn sample_proposal<R: Rng + ?Sized>(spec: &ProposalSpec, rng: &mut R) -> Result<Vec<f64>> {
    ProposalSampler::new(spec.clone())?.sample(rng)
}

/// Inverse CDF of the tail law `∝ e^(-rate t) 1{t >= lower}`:
/// `t = lower - ln(1 - u) / rate`.
pub fn inverse_exp_tail(rate: f64, lower: f64, u: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::Domain(format!("rate must be positive, got {rate}")));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("uniform variate must lie in [0, 1), got {u}")));
    }
    Ok(lower - (-u).ln_1p() / rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi4_radius_matches_exact_cdf() {
        // Power 3, no shift: the radius of a 4-dim Gaussian. The hull holds a
        // tangent of slope ~1e-16 at the mode, which must not bias draws.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut sampler = RadialSampler::new(RadialLaw::new(3.0, 0.0, 0.25).unwrap()).unwrap();
        let m = 200_000;
        let mut r: Vec<f64> = (0..m).map(|_| sampler.sample(&mut rng).unwrap()).collect();
        r.sort_by(f64::total_cmp);
        let cdf = |r: f64| {
            let x = r * r / 0.5;
            1.0 - (-x).exp() * (1.0 + x)
        };
        let d = r
            .iter()
            .enumerate()
            .map(|(i, &ri)| {
                let f = cdf(ri);
                (f - i as f64 / m as f64).max((i + 1) as f64 / m as f64 - f)
            })
            .fold(0.0, f64::max);
        let p = crate::harness::kolmogorov_sf((m as f64).sqrt() * d);
        assert!(p > 0.001, "D = {d}, p = {p}");
    }

    fn mean_and_se(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    }

    fn draws(law: RadialLaw, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = RadialSampler::new(law).unwrap();
        (0..n).map(|_| s.sample(&mut rng).unwrap()).collect()
    }

    #[test]
    fn sphere_is_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            for _ in 0..100 {
                assert!((norm(&sample_unit_sphere(n, &mut rng)) - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_one_dimensional_signs_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pos = (0..10_000).filter(|_| sample_unit_sphere(1, &mut rng)[0] > 0.0).count();
        assert!((pos as f64 / 1e4 - 0.5).abs() <= 0.02);
    }

    #[test]
    fn sphere_three_dimensional_centered() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut sums = [0.0; 3];
        for _ in 0..n {
            let t = sample_unit_sphere(3, &mut rng);
            for i in 0..3 {
                sums[i] += t[i];
            }
        }
        // coordinate variance is 1/3 on S^2
        let tol = 3.0 / (n as f64).sqrt() * (1.0 / 3f64.sqrt()) * 3.0;
        for s in sums {
            assert!((s / n as f64).abs() <= tol);
        }
    }

    #[test]
    fn half_normal_mean() {
        let v = draws(RadialLaw::new(0.0, 0.0, 1.0).unwrap(), 100_000, 4);
        let (m, se) = mean_and_se(&v);
        assert!((m - (2.0 / std::f64::consts::PI).sqrt()).abs() <= 3.0 * se, "{m} ± {se}");
        assert!(v.iter().all(|r| *r > 0.0));
    }

    #[test]
    fn maxwell_mean() {
        let v = draws(RadialLaw::new(2.0, 0.0, 1.0).unwrap(), 100_000, 5);
        let (m, se) = mean_and_se(&v);
        assert!((m - 2.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() <= 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn shifted_gaussian_mean() {
        let v = draws(RadialLaw::new(0.0, 5.0, 1.0).unwrap(), 100_000, 6);
        let (m, se) = mean_and_se(&v);
        assert!((m - 5.0).abs() <= 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn log_concavity_on_grid() {
        for (m, c, eta) in [(0.0, 0.0, 1.0), (1.0, 0.3, 0.25), (8.0, 2.0, 1.0 / 64.0), (3.0, 0.0, 5.0)] {
            let law = RadialLaw::new(m, c, eta).unwrap();
            for i in 1..=200 {
                let r = i as f64 * 0.05;
                assert!(law.d2log_density(r) < 0.0);
            }
        }
    }

    #[test]
    fn invalid_laws_rejected() {
        assert!(RadialLaw::new(-1.0, 0.0, 1.0).is_err());
        assert!(RadialLaw::new(1.0, -0.1, 1.0).is_err());
        assert!(RadialLaw::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rayleigh_radius_of_planar_proposal() {
        let spec = ProposalSpec { center: vec![1.0, -2.0], shift: 0.0, step: 1.0 };
        let mut s = ProposalSampler::new(spec.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..100_000).map(|_| s.sample(&mut rng).unwrap()).collect();
        let radii: Vec<f64> = pts.iter().map(|p| crate::linalg::dist(p, &spec.center)).collect();
        let (m, se) = mean_and_se(&radii);
        assert!((m - (std::f64::consts::PI / 2.0).sqrt()).abs() <= 3.0 * se);
        for i in 0..2 {
            let c: Vec<f64> = pts.iter().map(|p| p[i]).collect();
            let (m, se) = mean_and_se(&c);
            assert!((m - spec.center[i]).abs() <= 3.0 * se);
        }
    }

    #[test]
    fn shifted_proposal_is_centered() {
        let spec = ProposalSpec { center: vec![0.5, 0.0, -1.0], shift: 0.7, step: 0.1 };
        let mut s = ProposalSampler::new(spec.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<Vec<f64>> = (0..50_000).map(|_| s.sample(&mut rng).unwrap()).collect();
        for i in 0..3 {
            let c: Vec<f64> = pts.iter().map(|p| p[i]).collect();
            let (m, se) = mean_and_se(&c);
            assert!((m - spec.center[i]).abs() <= 3.5 * se);
        }
    }

    #[test]
    fn determinism() {
        let spec = ProposalSpec { center: vec![0.0, 0.0, 0.0], shift: 0.4, step: 0.3 };
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let mut s = ProposalSampler::new(spec.clone()).unwrap();
            (0..200).map(|_| s.sample(&mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn exp_tail_examples() {
        let u = 1.0 - (-1f64).exp();
        assert!((inverse_exp_tail(1.0, 0.0, u).unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(inverse_exp_tail(1.0, 0.3, 0.0).unwrap(), 0.3);
        assert!((inverse_exp_tail(2.0, 3.0, 0.5).unwrap() - (3.0 + 2f64.ln() / 2.0)).abs() <= 1e-12);
        assert!(inverse_exp_tail(1.0, 0.0, 1.0).is_err());
        assert!(inverse_exp_tail(0.0, 0.0, 0.5).is_err());
    }
}
