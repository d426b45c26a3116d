//! Epigraph liftings.
//!
//! A constrained target `ν ∝ exp(-f)·1_K` on `R^d` is lifted to
//! `π(x, t) ∝ exp(-a t)` on `Q = {(x, t) : x ∈ K, f(x) <= a t}`; a composite
//! target `ν~ ∝ exp(-f-h)` is lifted twice, first `h` into
//! `K~ = {(x, s) : h(x) <= a s}` and then `f~(x, s) = f(x) + a s` into
//! `Q~ = {(x, s, t) : (x, s) ∈ K~, f~(x, s) <= b t}` with
//! `π~ ∝ exp(-b t)`. Dropping the lifted coordinates recovers the target.

use crate::error::{Error, Result};
use crate::oracle::{
    separate_constrained_q, separate_qtilde, FunctionOracle, OracleCase, SeparationResult,
    SetOracle,
};

/// `exp(-f(x)) 1_K(x)` on `R^d`.
#[derive(Debug, Clone)]
pub struct ConstrainedTarget {
    pub f: FunctionOracle,
    pub k: SetOracle,
}

impl ConstrainedTarget {
    pub fn new(f: FunctionOracle, k: SetOracle) -> Result<Self> {
        if f.dim() != k.dim() {
            return Err(Error::Precondition(format!(
                "potential has dimension {} but the body has dimension {}",
                f.dim(),
                k.dim()
            )));
        }
        let caps = f.capabilities();
        if !caps.subgradient && !caps.proximal {
            return Err(Error::MissingCapability {
                oracle: f.name().to_string(),
                capability: "subgradient or proximal",
            });
        }
        Ok(Self { f, k })
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn lipschitz(&self) -> f64 {
        self.f.lipschitz()
    }

    pub fn outer_radius(&self) -> f64 {
        self.k.outer_radius()
    }
}

/// The lifted body `Q` with scale `a`.
#[derive(Debug, Clone)]
pub struct SingleLiftedTarget {
    pub base: ConstrainedTarget,
    pub a: f64,
    /// Tolerance for proximal epigraph projections in separation queries.
    pub epigraph_tol: f64,
}

impl SingleLiftedTarget {
    /// Lift with the default scale `a = d`.
    pub fn new(base: ConstrainedTarget) -> Self {
        let a = base.dim() as f64;
        Self { base, a, epigraph_tol: 1e-12 }
    }

    pub fn with_scale(base: ConstrainedTarget, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Precondition(format!("scale a must be positive, got {a}")));
        }
        if (a - base.dim() as f64).abs() > 1e-12 {
            log::warn!(
                "lifting scale a = {a} differs from d = {}; the printed proposal envelope assumes a = d",
                base.dim()
            );
        }
        Ok(Self { base, a, epigraph_tol: 1e-12 })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn lifted_dim(&self) -> usize {
        self.dim() + 1
    }

    /// `x ∈ K` and `f(x) <= a t`.
    pub fn q_member(&self, w: &[f64]) -> bool {
        let d = self.dim();
        debug_assert_eq!(w.len(), d + 1);
        let x = &w[..d];
        self.base.k.contains(x) && self.base.f.value(x) <= self.a * w[d]
    }

    /// `a t` on `Q`, `+∞` off it.
    pub fn lifted_potential(&self, w: &[f64]) -> f64 {
        if self.q_member(w) {
            self.a * w[self.dim()]
        } else {
            f64::INFINITY
        }
    }

    pub fn separate(&self, w: &[f64]) -> Result<SeparationResult> {
        separate_constrained_q(&self.base.k, &self.base.f, self.a, w, self.epigraph_tol)
    }
}

/// `exp(-f(x) - h(x))` on `R^d`.
#[derive(Debug, Clone)]
pub struct CompositeTarget {
    pub f: FunctionOracle,
    pub h: FunctionOracle,
}

impl CompositeTarget {
    pub fn new(f: FunctionOracle, h: FunctionOracle) -> Result<Self> {
        if f.dim() != h.dim() {
            return Err(Error::Precondition("f and h must share a dimension".into()));
        }
        Ok(Self { f, h })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }
}

/// The doubly lifted body `Q~` with scales `a`, `b`.
#[derive(Debug, Clone)]
pub struct DoubleLiftedTarget {
    pub base: CompositeTarget,
    pub a: f64,
    pub b: f64,
    pub case: OracleCase,
    pub epigraph_tol: f64,
}

impl DoubleLiftedTarget {
    /// Lift with `a = b = d`, choosing the oracle case from the capabilities.
    pub fn new(base: CompositeTarget) -> Result<Self> {
        let d = base.dim() as f64;
        Self::with_scales(base, d, d, None)
    }

    pub fn with_scales(
        base: CompositeTarget,
        a: f64,
        b: f64,
        case: Option<OracleCase>,
    ) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Precondition(format!(
                "scales must be positive, got a = {a}, b = {b}"
            )));
        }
        let case = match case {
            Some(c) => c,
            None => OracleCase::detect(&base.f, &base.h).ok_or_else(|| Error::MissingCapability {
                oracle: format!("{} / {}", base.f.name(), base.h.name()),
                capability: "prox of h with prox or subgradient of f",
            })?,
        };
        case.check(&base.f, &base.h)?;
        Ok(Self { base, a, b, case, epigraph_tol: 1e-12 })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn lifted_dim(&self) -> usize {
        self.dim() + 2
    }

    /// `h(x) <= a s` and `f(x) + a s <= b t`.
    pub fn qtilde_member(&self, p: &[f64]) -> bool {
        let d = self.dim();
        debug_assert_eq!(p.len(), d + 2);
        let (x, s, t) = (&p[..d], p[d], p[d + 1]);
        self.base.h.value(x) <= self.a * s && self.base.f.value(x) + self.a * s <= self.b * t
    }

    pub fn lifted_potential(&self, p: &[f64]) -> f64 {
        if self.qtilde_member(p) {
            self.b * p[self.dim() + 1]
        } else {
            f64::INFINITY
        }
    }

    pub fn separate(&self, p: &[f64]) -> Result<SeparationResult> {
        separate_qtilde(
            self.case,
            &self.base.f,
            &self.base.h,
            self.a,
            self.b,
            p,
            self.epigraph_tol,
        )
    }
}

/// The first `d` coordinates of a lifted point.
pub fn drop_lift(lifted: &[f64], d: usize) -> &[f64] {
    &lifted[..d]
}
