//! Central-cut ellipsoid method with a certified optimality gap.
//!
//! The solver minimizes a convex objective over a convex body that is known
//! only through a separation oracle and lies inside the box
//! `center + R·B_∞`. Infeasible ellipsoid centres are cut with the
//! feasibility separator; feasible centres are cut with an objective
//! subgradient and recorded.
//!
//! Every recorded objective cut `(v_i, x_i, g_i)` gives the lower bound
//! `f(x*) >= v_i + <g_i, x* - x_i>`, and since every minimizer stays inside
//! the current ellipsoid `E = {x : (x-c)^T P^{-1} (x-c) <= 1}`, minimizing
//! the right-hand side over `E` in closed form yields
//! `v_i + <g_i, c - x_i> - sqrt(g_i^T P g_i)`. The certified gap is the best
//! recorded value minus the largest such bound.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::oracle::SeparationResult;

/// Width floor below which the ellipsoid is treated as degenerate.
const DEGENERATE_WIDTH: f64 = 1e-14;

/// A minimization problem for [`cp_minimize`].
pub struct CpProblem<'a> {
    pub dim: usize,
    /// Returns the objective value and a subgradient at a feasible point.
    pub objective: &'a dyn Fn(&[f64]) -> (f64, Vec<f64>),
    pub separation: &'a dyn Fn(&[f64]) -> Result<SeparationResult>,
    /// Centre of the enclosing box.
    pub center: Vec<f64>,
    /// Half-width `R` of the enclosing box `center + R·B_∞`.
    pub radius: f64,
    /// Strong-convexity modulus of the objective (0 if unknown).
    pub strong_convexity: f64,
    pub target_gap: f64,
    /// Overrides the default iteration budget.
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CpCalls {
    pub separation: u64,
    pub subgradient: u64,
}

#[derive(Debug, Clone)]
pub struct CpResult {
    pub point: Vec<f64>,
    pub best_value: f64,
    pub certified_gap: f64,
    pub calls: CpCalls,
    pub iterations: usize,
    pub converged: bool,
}

/// Default iteration budget
/// `50·n²·ln(max(R / sqrt(ε·min(μ,1)/2), 10)) + 1000`.
pub fn iteration_budget(n: usize, radius: f64, target_gap: f64, strong_convexity: f64) -> usize {
    let mu = if strong_convexity > 0.0 { strong_convexity.min(1.0) } else { 1.0 };
    let ratio = radius / (target_gap * mu * 0.5).sqrt();
    let n2 = (n * n) as f64;
    (50.0 * n2 * ratio.max(10.0).ln()).ceil() as usize + 1000
}

/// Localization ellipsoid `{x : (x-c)^T P^{-1} (x-c) <= 1}`, `P` row-major.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub center: Vec<f64>,
    pub shape: Vec<f64>,
}

impl Ellipsoid {
    /// The ball circumscribing `center + R·B_∞`.
    pub fn enclosing_box(center: Vec<f64>, radius: f64) -> Self {
        let n = center.len();
        let mut shape = vec![0.0; n * n];
        for i in 0..n {
            shape[i * n + i] = n as f64 * radius * radius;
        }
        Self { center, shape }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn shape_times(&self, g: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| dot(&self.shape[i * n..(i + 1) * n], g)).collect()
    }

    /// `sqrt(g^T P g)`: half the width of the ellipsoid along `g`, times `|g|`.
    pub fn support(&self, g: &[f64]) -> f64 {
        dot(g, &self.shape_times(g)).max(0.0).sqrt()
    }

    /// Whether `x` lies in the ellipsoid (up to `slack` in the quadratic form).
    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        // Solve P y = x - c by Cholesky; tiny dimensions only.
        let n = self.dim();
        let diff: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        match cholesky_solve(&self.shape, n, &diff) {
            Some(y) => dot(&diff, &y) <= 1.0 + slack,
            None => false,
        }
    }

    /// Keep the half `{x : <g, x - c> <= 0}` and replace the ellipsoid with
    /// the minimum-volume ellipsoid containing it. Returns `false` when the
    /// ellipsoid is degenerate along `g`.
    pub fn cut(&mut self, g: &[f64]) -> bool {
        let n = self.dim();
        let pg = self.shape_times(g);
        let gpg = dot(g, &pg);
        let gnorm = norm(g);
        if !(gpg > 0.0) || gpg.sqrt() <= DEGENERATE_WIDTH * gnorm {
            return false;
        }
        let root = gpg.sqrt();
        if n == 1 {
            // interval bisection
            let half = self.shape[0].sqrt() / 2.0;
            self.center[0] -= g[0].signum() * half;
            self.shape[0] /= 4.0;
            return true;
        }
        let nf = n as f64;
        let b: Vec<f64> = pg.iter().map(|v| v / root).collect();
        for (c, bi) in self.center.iter_mut().zip(&b) {
            *c -= bi / (nf + 1.0);
        }
        let factor = nf * nf / (nf * nf - 1.0);
        let coef = 2.0 / (nf + 1.0);
        for i in 0..n {
            for j in i..n {
                let v = factor * (self.shape[i * n + j] - coef * b[i] * b[j]);
                self.shape[i * n + j] = v;
                self.shape[j * n + i] = v;
            }
        }
        true
    }
}

fn cholesky_solve(a: &[f64], n: usize, rhs: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    Some(y)
}

struct ObjectiveCut {
    value: f64,
    point: Vec<f64>,
    grad: Vec<f64>,
}

impl ObjectiveCut {
    fn lower_bound(&self, e: &Ellipsoid) -> f64 {
        let shift: f64 = self
            .grad
            .iter()
            .zip(e.center.iter().zip(&self.point))
            .map(|(g, (c, x))| g * (c - x))
            .sum();
        self.value + shift - e.support(&self.grad)
    }
}

/// Minimize a convex objective over a convex body given by separation.
///
/// Returns the best feasible point found with a certified gap; `converged`
/// is set exactly when the certified gap reached the target. Fails with
/// [`Error::Infeasible`] if no feasible point was ever found.
pub fn cp_minimize(problem: &CpProblem<'_>) -> Result<CpResult> {
    cp_minimize_observed(problem, |_| {})
}

/// As [`cp_minimize`], calling `observe` with the ellipsoid after each cut.
pub fn cp_minimize_observed(
    problem: &CpProblem<'_>,
    mut observe: impl FnMut(&Ellipsoid),
) -> Result<CpResult> {
    let n = problem.dim;
    if n == 0 || problem.center.len() != n {
        return Err(Error::Precondition("cutting plane: dimension mismatch".into()));
    }
    if !(problem.radius > 0.0) || !(problem.target_gap > 0.0) {
        return Err(Error::Precondition(
            "cutting plane: radius and target gap must be positive".into(),
        ));
    }
    let budget = problem.max_iterations.unwrap_or_else(|| {
        iteration_budget(n, problem.radius, problem.target_gap, problem.strong_convexity)
    });
    // Recent objective cuts are re-evaluated on the shrinking ellipsoid.
    let window = 2 * n + 2;

    let mut ellipsoid = Ellipsoid::enclosing_box(problem.center.clone(), problem.radius);
    let mut calls = CpCalls::default();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut lower = f64::NEG_INFINITY;
    let mut recent: VecDeque<ObjectiveCut> = VecDeque::with_capacity(window);
    let mut iterations = 0;

    let gap = |best: &Option<(f64, Vec<f64>)>, lower: f64| match best {
        Some((v, _)) => (v - lower).max(0.0),
        None => f64::INFINITY,
    };

    while iterations < budget {
        iterations += 1;
        let c = ellipsoid.center.clone();
        calls.separation += 1;
        let cut_dir = match (problem.separation)(&c)? {
            SeparationResult::Separated(g) => g,
            SeparationResult::Inside => {
                calls.subgradient += 1;
                let (value, grad) = (problem.objective)(&c);
                if best.as_ref().map_or(true, |(v, _)| value < *v) {
                    best = Some((value, c.clone()));
                }
                if grad.iter().all(|g| *g == 0.0) {
                    // stationary feasible point of a convex objective
                    lower = lower.max(value);
                    break;
                }
                if recent.len() == window {
                    recent.pop_front();
                }
                recent.push_back(ObjectiveCut {
                    value,
                    point: c.clone(),
                    grad: grad.clone(),
                });
                grad
            }
        };
        if !ellipsoid.cut(&cut_dir) {
            break;
        }
        observe(&ellipsoid);
        for cut in &recent {
            lower = lower.max(cut.lower_bound(&ellipsoid));
        }
        if gap(&best, lower) <= problem.target_gap {
            break;
        }
    }

    match best {
        Some((best_value, point)) => {
            let certified_gap = gap(&Some((best_value, point.clone())), lower);
            Ok(CpResult {
                point,
                best_value,
                certified_gap,
                calls,
                iterations,
                converged: certified_gap <= problem.target_gap,
            })
        }
        None => Err(Error::Infeasible(format!(
            "cutting plane found no feasible point in {iterations} iterations"
        ))),
    }
}
