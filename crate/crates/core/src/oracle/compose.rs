//! Separation and projection oracles assembled from simpler oracles:
//! epigraphs from subgradients or proximal maps, separation from projection,
//! and the lifted feasible sets of the single and double epigraph liftings.

use crate::error::{Error, Result};
use crate::linalg::{dist, sub};

use super::{FunctionOracle, SeparationResult, SetOracle};

/// Doubling and bisection budgets for the epigraph projection root-find.
const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 200;

/// Separation for `epi(f)` at `q = (x, t)` from a subgradient of `f`.
///
/// Returns `(g, -1)` with `g ∈ ∂f(x)` when `f(x) > t`.
pub fn separate_epigraph_subgrad(f: &FunctionOracle, q: &[f64]) -> Result<SeparationResult> {
    let d = f.dim();
    let (x, t) = (&q[..d], q[d]);
    let fx = f.value(x);
    if fx <= t {
        return Ok(SeparationResult::Inside);
    }
    let mut g = f.subgradient(x)?;
    g.push(-1.0);
    Ok(SeparationResult::Separated(g))
}

/// Euclidean projection of `q = (x, t)` onto `epi(f)` using the proximal map.
///
/// For infeasible input the projection is `(prox_{λ f}(x), t + λ)` where `λ`
/// is the root of `φ(λ) = f(prox_{λ f}(x)) - t - λ`, which is strictly
/// decreasing. The root is bracketed by doubling from `max(tol, f(x) - t)`
/// and then bisected until `|φ| <= tol`.
pub fn project_epigraph_prox(f: &FunctionOracle, q: &[f64], tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let d = f.dim();
    let (x, t) = (&q[..d], q[d]);
    let fx = f.value(x);
    if fx <= t {
        return Ok(q.to_vec());
    }
    let phi = |lambda: f64| -> Result<(f64, Vec<f64>)> {
        let p = f.prox(x, lambda)?;
        Ok((f.value(&p) - t - lambda, p))
    };

    let mut lo = 0.0;
    let mut hi = tol.max(fx - t);
    let mut upper = phi(hi)?;
    let mut doublings = 0;
    while upper.0 > 0.0 {
        if upper.0 <= tol {
            return Ok(finish(upper.1, t + hi));
        }
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Numeric(
                "epigraph projection: could not bracket the multiplier".into(),
            ));
        }
        lo = hi;
        hi *= 2.0;
        upper = phi(hi)?;
    }
    if -upper.0 <= tol {
        return Ok(finish(upper.1, t + hi));
    }

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let (v, p) = phi(mid)?;
        if v.abs() <= tol || hi - lo <= f64::EPSILON * hi {
            return Ok(finish(p, t + mid));
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric(
        "epigraph projection: bisection budget exhausted".into(),
    ))
}

fn finish(mut x: Vec<f64>, t: f64) -> Vec<f64> {
    x.push(t);
    x
}

/// Separation from a Euclidean projection: `x - proj(x)` unless `x` is fixed.
pub fn separation_from_projection(proj: impl Fn(&[f64]) -> Vec<f64>, x: &[f64]) -> SeparationResult {
    let p = proj(x);
    if p.as_slice() == x {
        SeparationResult::Inside
    } else {
        SeparationResult::Separated(sub(x, &p))
    }
}

/// Separation for `Q = {(x, t) : x ∈ K, f(x) <= a t}`.
///
/// Points with `x ∉ K` are cut by the lifted `K`-separator `(p, 0)`.
/// Otherwise the epigraph of `f / a` is separated, by subgradient when `f`
/// has one and by proximal projection (tolerance `tol`) otherwise.
pub fn separate_constrained_q(
    k: &SetOracle,
    f: &FunctionOracle,
    a: f64,
    q: &[f64],
    tol: f64,
) -> Result<SeparationResult> {
    let caps = f.capabilities();
    if !caps.subgradient && !caps.proximal {
        return Err(Error::MissingCapability {
            oracle: f.name().to_string(),
            capability: "subgradient or proximal",
        });
    }
    let d = f.dim();
    let x = &q[..d];
    if !k.contains(x) {
        return Ok(k.separate(x).lifted(1));
    }
    if f.value(x) <= a * q[d] {
        return Ok(SeparationResult::Inside);
    }
    let scaled = f.scaled_down(a);
    epigraph_separation(&scaled, q, tol)
}

/// Epigraph separation preferring the subgradient route.
fn epigraph_separation(f: &FunctionOracle, q: &[f64], tol: f64) -> Result<SeparationResult> {
    if f.capabilities().subgradient {
        separate_epigraph_subgrad(f, q)
    } else {
        let p = project_epigraph_prox(f, q, tol)?;
        Ok(separation_from_projection(|_| p.clone(), q))
    }
}

/// Proximal map of `f~(x, s) = f(x) + a s` at `(x0, s0)`:
/// `(prox_{λ f}(x0), s0 - λ a)`.
pub fn prox_ftilde(
    prox_f: impl Fn(&[f64], f64) -> Vec<f64>,
    a: f64,
    lambda: f64,
    q: &[f64],
) -> Vec<f64> {
    let d = q.len() - 1;
    let mut out = prox_f(&q[..d], lambda);
    out.push(q[d] - lambda * a);
    out
}

/// Oracle combination used to separate the double-lifted set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleCase {
    /// Proximal maps for both `f` and `h`.
    ProxProx,
    /// Subgradient for `f`, proximal map for `h`.
    SubgradProx,
}

impl OracleCase {
    /// The case a pair of oracles supports, preferring subgradients for `f`.
    pub fn detect(f: &FunctionOracle, h: &FunctionOracle) -> Option<OracleCase> {
        if !h.capabilities().proximal {
            return None;
        }
        let fc = f.capabilities();
        if fc.subgradient {
            Some(OracleCase::SubgradProx)
        } else if fc.proximal {
            Some(OracleCase::ProxProx)
        } else {
            None
        }
    }

    pub fn check(self, f: &FunctionOracle, h: &FunctionOracle) -> Result<()> {
        let need = |o: &FunctionOracle, ok: bool, cap: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(Error::MissingCapability {
                    oracle: o.name().to_string(),
                    capability: cap,
                })
            }
        };
        need(h, h.capabilities().proximal, "proximal")?;
        match self {
            OracleCase::ProxProx => need(f, f.capabilities().proximal, "proximal"),
            OracleCase::SubgradProx => need(f, f.capabilities().subgradient, "subgradient"),
        }
    }
}

/// Separation for `Q~ = {(x, s, t) : h(x) <= a s, f(x) + a s <= b t}`.
///
/// The first constraint is separated through the projection onto
/// `epi(h / a)` (prox of `h`), lifted by a zero `t`-coordinate. The second is
/// the epigraph of `f~ / b` with `f~(x, s) = f(x) + a s`, separated by the
/// subgradient `(f'(x), a)` in [`OracleCase::SubgradProx`] or by projection
/// through the proximal map of `f~` in [`OracleCase::ProxProx`].
pub fn separate_qtilde(
    case: OracleCase,
    f: &FunctionOracle,
    h: &FunctionOracle,
    a: f64,
    b: f64,
    p: &[f64],
    tol: f64,
) -> Result<SeparationResult> {
    case.check(f, h)?;
    let d = f.dim();
    let (x, s, t) = (&p[..d], p[d], p[d + 1]);
    if h.value(x) > a * s {
        let hs = h.scaled_down(a);
        let proj = project_epigraph_prox(&hs, &p[..=d], tol)?;
        return Ok(separation_from_projection(|_| proj.clone(), &p[..=d]).lifted(1));
    }
    let ftilde_value = f.value(x) + a * s;
    if ftilde_value <= b * t {
        return Ok(SeparationResult::Inside);
    }
    let ft = f.plus_linear_lift(a);
    let ft = match case {
        OracleCase::SubgradProx => ft.without_proximal(),
        OracleCase::ProxProx => ft.without_subgradient(),
    };
    epigraph_separation(&ft.scaled_down(b), p, tol)
}

/// Separation for the closed ball `{x : |x - center| <= radius}`.
pub fn separate_ball(center: &[f64], radius: f64, x: &[f64]) -> SeparationResult {
    if dist(x, center) <= radius {
        SeparationResult::Inside
    } else {
        SeparationResult::Separated(sub(x, center))
    }
}

/// Separation for an intersection: the first member that separates wins.
pub fn separate_intersection<F>(oracles: &[F], x: &[f64]) -> Result<SeparationResult>
where
    F: Fn(&[f64]) -> Result<SeparationResult>,
{
    if oracles.is_empty() {
        return Err(Error::Precondition(
            "intersection of an empty family of sets".into(),
        ));
    }
    for oracle in oracles {
        let r = oracle(x)?;
        if !r.is_inside() {
            return Ok(r);
        }
    }
    Ok(SeparationResult::Inside)
}
