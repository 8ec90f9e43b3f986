//! The recursion system as executable operators on edge and ratio functions.
//!
//! An edge function maps `(a, v, d)` to a value approximating `P_av(d)`; a
//! ratio function maps `(a, b, d)` to a value approximating `R_ab(d)`. Both are
//! shared as `Arc<dyn …>` so operators can be composed lazily.
//!
//! Exactly-zero factors short-circuit: when a product already contains an
//! exact zero the remaining (possibly undefined) factors are not evaluated.

mod base;
mod chi;
mod fixpoint;
mod ops;
mod propagate;
mod two_path;

use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::PairConstraint;
use crate::scalar::Scalar;
use crate::sequence::{l1_distance, DegreeSequence};

pub use base::{ConstEdge, ConstRatio, ExactP, ExactR, FnEdge, FnRatio, FormulaP, FormulaR, PKind, RKind, Scaled};
pub use chi::{chi_distance, log_distance, DomainLadder, PairSelection};
pub use fixpoint::{iterate_fixed_point, FixedPointReport, StepReport};
pub use ops::{apply_c, apply_p, apply_r};
pub use propagate::{ratio_propagate, sequence_graph_edges, Propagation};
pub use two_path::{bad, sigma_k0, two_path};

/// An L¹ ball of non-negative sequences about `root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub root: DegreeSequence,
    pub radius: u64,
}

impl Domain {
    pub fn new(root: DegreeSequence, radius: u64) -> Self {
        Domain { root, radius }
    }

    pub fn contains(&self, d: &DegreeSequence) -> bool {
        l1_distance(d, &self.root).is_ok_and(|x| x <= self.radius)
    }

    pub fn check(&self, d: &DegreeSequence) -> Result<()> {
        let distance = l1_distance(d, &self.root)?;
        if distance > self.radius {
            return Err(Error::OutOfDomain {
                seq: d.to_signed(),
                distance,
                radius: self.radius,
            });
        }
        Ok(())
    }

    /// The ball `by` units smaller.
    pub fn shrink(&self, by: u64) -> Result<Domain> {
        if self.radius < by {
            return Err(Error::RequiredRadius {
                need: by,
                have: self.radius,
            });
        }
        Ok(Domain::new(self.root.clone(), self.radius - by))
    }
}

fn shrink_opt(d: Option<&Domain>, by: u64) -> Result<Option<Domain>> {
    d.map(|d| d.shrink(by)).transpose()
}

fn narrower(a: Option<Domain>, b: Option<Domain>) -> Option<Domain> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.radius <= y.radius { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Settings shared by the operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorConfig {
    /// Truncation depth of the alternating 2-path sum, at least 1.
    pub k0: u32,
    pub constraint: PairConstraint,
}

impl OperatorConfig {
    pub fn new(n: usize, k0: u32) -> Result<Self> {
        Self::with_constraint(PairConstraint::complete(n), k0)
    }

    pub fn with_constraint(constraint: PairConstraint, k0: u32) -> Result<Self> {
        if k0 < 1 {
            return Err(Error::invalid("k0 must be at least 1"));
        }
        Ok(OperatorConfig { k0, constraint })
    }

    /// L¹ radius consumed by one application of `𝒞`.
    pub fn step_radius(&self) -> u64 {
        2 * self.k0 as u64 + 2
    }
}

pub trait EdgeFunction<S: Scalar>: Send + Sync {
    /// Raw evaluation; callers should prefer [`EdgeFunction::value`].
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S>;

    fn domain(&self) -> Option<&Domain> {
        None
    }

    fn label(&self) -> String;

    /// Evaluation with the domain check applied.
    fn value(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S> {
        if let Some(dom) = self.domain() {
            dom.check(d)?;
        }
        self.eval(a, v, d)
    }
}

pub trait RatioFunction<S: Scalar>: Send + Sync {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<S>;

    fn domain(&self) -> Option<&Domain> {
        None
    }

    fn label(&self) -> String;

    fn value(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<S> {
        if let Some(dom) = self.domain() {
            dom.check(d)?;
        }
        self.eval(a, b, d)
    }
}

pub type EdgeFn<S> = Arc<dyn EdgeFunction<S>>;
pub type RatioFn<S> = Arc<dyn RatioFunction<S>>;

type MemoKey = (usize, usize, DegreeSequence);

/// Caches every evaluation, failures included.
pub struct MemoEdge<S: Scalar> {
    inner: EdgeFn<S>,
    cache: DashMap<MemoKey, Result<S>>,
}

impl<S: Scalar> MemoEdge<S> {
    pub fn wrap(inner: EdgeFn<S>) -> EdgeFn<S> {
        Arc::new(MemoEdge {
            inner,
            cache: DashMap::new(),
        })
    }
}

impl<S: Scalar> EdgeFunction<S> for MemoEdge<S> {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S> {
        let key = (a, v, d.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = self.inner.eval(a, v, d);
        self.cache.insert(key, out.clone());
        out
    }

    fn domain(&self) -> Option<&Domain> {
        self.inner.domain()
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

pub struct MemoRatio<S: Scalar> {
    inner: RatioFn<S>,
    cache: DashMap<MemoKey, Result<S>>,
}

impl<S: Scalar> MemoRatio<S> {
    pub fn wrap(inner: RatioFn<S>) -> RatioFn<S> {
        Arc::new(MemoRatio {
            inner,
            cache: DashMap::new(),
        })
    }
}

impl<S: Scalar> RatioFunction<S> for MemoRatio<S> {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<S> {
        let key = (a, b, d.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = self.inner.eval(a, b, d);
        self.cache.insert(key, out.clone());
        out
    }

    fn domain(&self) -> Option<&Domain> {
        self.inner.domain()
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

/// `d + Σ deltas`, or a singularity error naming the negative sequence.
pub(crate) fn shift(d: &DegreeSequence, deltas: &[(usize, i64)], context: &str) -> Result<DegreeSequence> {
    d.shifted(deltas).ok_or_else(|| {
        let mut s = d.to_signed();
        for &(i, dx) in deltas {
            s[i] += dx;
        }
        Error::singular(format!("{context}: negative entry"), &s)
    })
}
