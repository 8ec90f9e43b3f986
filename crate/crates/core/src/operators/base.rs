//! Concrete edge and ratio functions the operators start from.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Domain, EdgeFn, EdgeFunction, RatioFunction};
use crate::asymptotics::{self, PiRhoParams, PiRhoVariant};
use crate::error::Result;
use crate::exact::{Counter, PairConstraint};
use crate::scalar::Scalar;
use crate::sequence::DegreeSequence;

/// The true edge probability `P_av(d)` from the exact counter.
pub struct ExactP {
    pub counter: Arc<Counter>,
    pub constraint: PairConstraint,
}

impl ExactP {
    pub fn new(counter: Arc<Counter>, constraint: PairConstraint) -> Self {
        ExactP { counter, constraint }
    }
}

impl EdgeFunction<BigRational> for ExactP {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<BigRational> {
        self.counter.edge_prob(d, a, v, &self.constraint)
    }

    fn label(&self) -> String {
        "exact P".into()
    }
}

/// The true count ratio `R_ab(d)`.
pub struct ExactR {
    pub counter: Arc<Counter>,
    pub constraint: PairConstraint,
}

impl ExactR {
    pub fn new(counter: Arc<Counter>, constraint: PairConstraint) -> Self {
        ExactR { counter, constraint }
    }
}

impl RatioFunction<BigRational> for ExactR {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<BigRational> {
        self.counter.ratio(d, a, b, &self.constraint)
    }

    fn label(&self) -> String {
        "exact R".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PKind {
    Pgr,
    Pi(PiRhoVariant),
}

/// A closed-form edge function.
pub struct FormulaP {
    pub kind: PKind,
    pub domain: Option<Domain>,
}

impl FormulaP {
    pub fn new(kind: PKind, domain: Option<Domain>) -> Self {
        FormulaP { kind, domain }
    }

    pub fn pgr(domain: Option<Domain>) -> Self {
        Self::new(PKind::Pgr, domain)
    }
}

impl EdgeFunction<f64> for FormulaP {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<f64> {
        match self.kind {
            PKind::Pgr => asymptotics::pgr(d, a, v),
            PKind::Pi(variant) => asymptotics::pi(variant, &PiRhoParams::of(d, a, v)?),
        }
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        match self.kind {
            PKind::Pgr => "P^gr".into(),
            PKind::Pi(v) => format!("pi[{v:?}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RKind {
    Rgr,
    Rho(PiRhoVariant),
}

/// A closed-form ratio function.
pub struct FormulaR {
    pub kind: RKind,
    pub domain: Option<Domain>,
}

impl FormulaR {
    pub fn new(kind: RKind, domain: Option<Domain>) -> Self {
        FormulaR { kind, domain }
    }

    pub fn rgr(domain: Option<Domain>) -> Self {
        Self::new(RKind::Rgr, domain)
    }
}

impl RatioFunction<f64> for FormulaR {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<f64> {
        if a == b {
            return Ok(1.0);
        }
        match self.kind {
            RKind::Rgr => asymptotics::rgr(d, a, b),
            RKind::Rho(variant) => asymptotics::rho(variant, &PiRhoParams::of(d, a, b)?),
        }
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        match self.kind {
            RKind::Rgr => "R^gr".into(),
            RKind::Rho(v) => format!("rho[{v:?}]"),
        }
    }
}

/// `factor · inner`.
pub struct Scaled<S: Scalar> {
    pub inner: EdgeFn<S>,
    pub factor: S,
}

impl<S: Scalar> Scaled<S> {
    pub fn new(inner: EdgeFn<S>, factor: S) -> Self {
        Scaled { inner, factor }
    }
}

impl<S: Scalar> EdgeFunction<S> for Scaled<S> {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S> {
        Ok(self.inner.eval(a, v, d)?.mul(&self.factor))
    }

    fn domain(&self) -> Option<&Domain> {
        self.inner.domain()
    }

    fn label(&self) -> String {
        format!("{:?} * {}", self.factor, self.inner.label())
    }
}

pub struct ConstEdge<S: Scalar> {
    pub value: S,
    pub domain: Option<Domain>,
}

impl<S: Scalar> ConstEdge<S> {
    pub fn new(value: S) -> Self {
        ConstEdge { value, domain: None }
    }
}

impl<S: Scalar> EdgeFunction<S> for ConstEdge<S> {
    fn eval(&self, _: usize, _: usize, _: &DegreeSequence) -> Result<S> {
        Ok(self.value.clone())
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        format!("const {:?}", self.value)
    }
}

pub struct ConstRatio<S: Scalar> {
    pub value: S,
}

impl<S: Scalar> ConstRatio<S> {
    pub fn new(value: S) -> Self {
        ConstRatio { value }
    }
}

impl<S: Scalar> RatioFunction<S> for ConstRatio<S> {
    fn eval(&self, a: usize, b: usize, _: &DegreeSequence) -> Result<S> {
        Ok(if a == b { S::one() } else { self.value.clone() })
    }

    fn label(&self) -> String {
        format!("const {:?}", self.value)
    }
}

type EdgeClosure<S> = dyn Fn(usize, usize, &DegreeSequence) -> Result<S> + Send + Sync;

/// An edge function from a closure.
pub struct FnEdge<S: Scalar> {
    f: Box<EdgeClosure<S>>,
    name: String,
    domain: Option<Domain>,
}

impl<S: Scalar> FnEdge<S> {
    pub fn new(
        name: impl Into<String>,
        domain: Option<Domain>,
        f: impl Fn(usize, usize, &DegreeSequence) -> Result<S> + Send + Sync + 'static,
    ) -> Self {
        FnEdge {
            f: Box::new(f),
            name: name.into(),
            domain,
        }
    }
}

impl<S: Scalar> EdgeFunction<S> for FnEdge<S> {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S> {
        (self.f)(a, v, d)
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// A ratio function from a closure.
pub struct FnRatio<S: Scalar> {
    f: Box<EdgeClosure<S>>,
    name: String,
}

impl<S: Scalar> FnRatio<S> {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(usize, usize, &DegreeSequence) -> Result<S> + Send + Sync + 'static,
    ) -> Self {
        FnRatio {
            f: Box::new(f),
            name: name.into(),
        }
    }
}

impl<S: Scalar> RatioFunction<S> for FnRatio<S> {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<S> {
        (self.f)(a, b, d)
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}
