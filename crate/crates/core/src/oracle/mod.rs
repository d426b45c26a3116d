//! Oracle access to convex functions and convex sets.
//!
//! A [`FunctionOracle`] always evaluates and may additionally expose a
//! subgradient and/or a proximal map; a [`SetOracle`] always answers
//! membership and separation queries and may expose a Euclidean projection.
//! Capabilities are advertised explicitly so that constructions which need a
//! particular kind of access (see [`compose`]) can dispatch on them.

pub mod compose;
pub mod library;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use compose::{
    prox_ftilde, project_epigraph_prox, separate_ball, separate_constrained_q,
    separate_epigraph_subgrad, separate_intersection, separate_qtilde,
    separation_from_projection, OracleCase,
};

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ProxFn = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;
type MemberFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
type SepFn = Arc<dyn Fn(&[f64]) -> SeparationResult + Send + Sync>;
type ProjFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Answer of a separation oracle at a query point `x`.
///
/// A `Separated(g)` answer promises `<g, x> > <g, y>` for every `y` in the
/// set. Separators are not normalized.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparationResult {
    Inside,
    Separated(Vec<f64>),
}

impl SeparationResult {
    pub fn is_inside(&self) -> bool {
        matches!(self, SeparationResult::Inside)
    }

    pub fn separator(&self) -> Option<&[f64]> {
        match self {
            SeparationResult::Inside => None,
            SeparationResult::Separated(g) => Some(g),
        }
    }

    /// Append `tail` zero coordinates to the separator, turning a separator
    /// for `S` into one for `S x R^tail`.
    pub fn lifted(self, tail: usize) -> Self {
        match self {
            SeparationResult::Inside => SeparationResult::Inside,
            SeparationResult::Separated(mut g) => {
                g.extend(std::iter::repeat(0.0).take(tail));
                SeparationResult::Separated(g)
            }
        }
    }
}

/// Which optional oracles a function exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub subgradient: bool,
    pub proximal: bool,
}

/// A closed convex function on `R^dim` accessed through oracles.
#[derive(Clone)]
pub struct FunctionOracle {
    name: String,
    dim: usize,
    lipschitz: f64,
    eval: EvalFn,
    subgradient: Option<GradFn>,
    proximal: Option<ProxFn>,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .field("capabilities", &self.capabilities())
            .finish()
    }
}

impl FunctionOracle {
    /// An evaluation-only oracle. Attach further capabilities with
    /// [`with_subgradient`](Self::with_subgradient) and
    /// [`with_proximal`](Self::with_proximal).
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        lipschitz: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            lipschitz,
            eval: Arc::new(eval),
            subgradient: None,
            proximal: None,
        }
    }

    pub fn with_subgradient(
        mut self,
        g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.subgradient = Some(Arc::new(g));
        self
    }

    /// `prox(x, lambda)` must return `argmin_u f(u) + |u - x|^2 / (2 lambda)`.
    pub fn with_proximal(
        mut self,
        p: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.proximal = Some(Arc::new(p));
        self
    }

    /// Drop the subgradient oracle, e.g. to force a proximal code path.
    pub fn without_subgradient(mut self) -> Self {
        self.subgradient = None;
        self
    }

    pub fn without_proximal(mut self) -> Self {
        self.proximal = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn capabilities(&self) -> Capabilities {
        Capabilities {
            subgradient: self.subgradient.is_some(),
            proximal: self.proximal.is_some(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.subgradient {
            Some(g) => Ok(g(x)),
            None => Err(self.missing("subgradient")),
        }
    }

    pub fn prox(&self, x: &[f64], lambda: f64) -> Result<Vec<f64>> {
        match &self.proximal {
            Some(p) => Ok(p(x, lambda)),
            None => Err(self.missing("proximal")),
        }
    }

    /// The function `x -> f(x) / a` with all capabilities carried over.
    pub fn scaled_down(&self, a: f64) -> FunctionOracle {
        let eval = self.eval.clone();
        let mut out = FunctionOracle {
            name: format!("({})/{}", self.name, a),
            dim: self.dim,
            lipschitz: self.lipschitz / a,
            eval: Arc::new(move |x| eval(x) / a),
            subgradient: None,
            proximal: None,
        };
        if let Some(g) = self.subgradient.clone() {
            out.subgradient = Some(Arc::new(move |x| g(x).into_iter().map(|v| v / a).collect()));
        }
        if let Some(p) = self.proximal.clone() {
            out.proximal = Some(Arc::new(move |x, lambda| p(x, lambda / a)));
        }
        out
    }

    /// `f~(x, s) = f(x) + a s` on `R^(dim+1)`, the potential left after
    /// lifting the second summand of a composite target into its epigraph.
    pub fn plus_linear_lift(&self, a: f64) -> FunctionOracle {
        let d = self.dim;
        let eval = self.eval.clone();
        let mut out = FunctionOracle {
            name: format!("{} + {}*s", self.name, a),
            dim: d + 1,
            lipschitz: (self.lipschitz * self.lipschitz + a * a).sqrt(),
            eval: Arc::new(move |xs| eval(&xs[..d]) + a * xs[d]),
            subgradient: None,
            proximal: None,
        };
        if let Some(g) = self.subgradient.clone() {
            out.subgradient = Some(Arc::new(move |xs| {
                let mut v = g(&xs[..d]);
                v.push(a);
                v
            }));
        }
        if let Some(p) = self.proximal.clone() {
            out.proximal = Some(Arc::new(move |xs, lambda| {
                prox_ftilde(|x, l| p(x, l), a, lambda, xs)
            }));
        }
        out
    }

    fn missing(&self, capability: &'static str) -> Error {
        Error::MissingCapability {
            oracle: self.name.clone(),
            capability,
        }
    }
}

/// A closed convex set in `R^dim` with ball-sandwich metadata
/// `inner_radius * B ⊆ K ⊆ outer_radius * B` (both balls centred at 0).
#[derive(Clone)]
pub struct SetOracle {
    name: String,
    dim: usize,
    inner_radius: f64,
    outer_radius: f64,
    membership: MemberFn,
    separation: SepFn,
    projection: Option<ProjFn>,
}

impl fmt::Debug for SetOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetOracle")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("inner_radius", &self.inner_radius)
            .field("outer_radius", &self.outer_radius)
            .field("projection", &self.projection.is_some())
            .finish()
    }
}

impl SetOracle {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        inner_radius: f64,
        outer_radius: f64,
        membership: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        separation: impl Fn(&[f64]) -> SeparationResult + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            inner_radius,
            outer_radius,
            membership: Arc::new(membership),
            separation: Arc::new(separation),
            projection: None,
        }
    }

    /// Build a set from its Euclidean projection alone; membership and
    /// separation follow from it.
    pub fn from_projection(
        name: impl Into<String>,
        dim: usize,
        inner_radius: f64,
        outer_radius: f64,
        membership: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        projection: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        let proj: ProjFn = Arc::new(projection);
        let member: MemberFn = Arc::new(membership);
        let (p, m) = (proj.clone(), member.clone());
        Self {
            name: name.into(),
            dim,
            inner_radius,
            outer_radius,
            membership: member,
            separation: Arc::new(move |x| {
                if m(x) {
                    SeparationResult::Inside
                } else {
                    separation_from_projection(|y| p(y), x)
                }
            }),
            projection: Some(proj),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.membership)(x)
    }

    pub fn separate(&self, x: &[f64]) -> SeparationResult {
        (self.separation)(x)
    }

    pub fn has_projection(&self) -> bool {
        self.projection.is_some()
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.projection {
            Some(p) => Ok(p(x)),
            None => Err(Error::MissingCapability {
                oracle: self.name.clone(),
                capability: "projection",
            }),
        }
    }
}
