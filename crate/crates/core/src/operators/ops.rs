//! The operators `ℛ`, `𝒫` and `𝒞 = 𝒫(·, ℛ(·))`.

use std::sync::Arc;

use super::two_path::bad;
use super::{narrower, shift, shrink_opt, Domain, EdgeFn, EdgeFunction, MemoEdge, MemoRatio, OperatorConfig, RatioFn, RatioFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::DegreeSequence;

struct ApplyR<S: Scalar> {
    p: EdgeFn<S>,
    cfg: OperatorConfig,
    domain: Option<Domain>,
}

impl<S: Scalar> RatioFunction<S> for ApplyR<S> {
    fn eval(&self, a: usize, b: usize, d: &DegreeSequence) -> Result<S> {
        if a == b {
            return Ok(S::one());
        }
        let (da, db) = (d.get(a), d.get(b));
        if db == 0 {
            return Err(Error::singular(format!("R(p)_{a},{b} with d_b = 0"), &d.to_signed()));
        }
        if da == 0 {
            return Ok(S::zero());
        }
        let num = bad(self.p.as_ref(), a, b, &shift(d, &[(b, -1)], "R(p)")?, &self.cfg)?.one_minus();
        if num.is_zero() {
            return Ok(S::zero());
        }
        let at = shift(d, &[(a, -1)], "R(p)")?;
        let den = bad(self.p.as_ref(), b, a, &at, &self.cfg)?.one_minus();
        if den.is_zero() {
            return Err(Error::singular(format!("R(p): bad({b},{a}) = 1"), &at.to_signed()));
        }
        Ok(S::from_ratio(da as i64, db as i64).mul(&num).div(&den))
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        format!("R({})", self.p.label())
    }
}

struct ApplyP<S: Scalar> {
    p: EdgeFn<S>,
    r: RatioFn<S>,
    cfg: OperatorConfig,
    domain: Option<Domain>,
}

impl<S: Scalar> EdgeFunction<S> for ApplyP<S> {
    fn eval(&self, a: usize, v: usize, d: &DegreeSequence) -> Result<S> {
        let dv = d.get(v);
        if dv == 0 {
            return Err(Error::singular(format!("P(p,r)_{a},{v} with d_v = 0"), &d.to_signed()));
        }
        let below = shift(d, &[(a, -1), (v, -1)], "P(p,r)")?;
        let den = self.p.value(a, v, &below)?.one_minus();
        if den.is_zero() {
            return Err(Error::singular("P(p,r): 1 - p_av(d - e_a - e_v) = 0", &below.to_signed()));
        }
        let minus_v = shift(d, &[(v, -1)], "P(p,r)")?;
        let mut sum = S::zero();
        for b in self.cfg.constraint.allowable(v) {
            let r = self.r.value(b, a, &minus_v)?;
            if r.is_zero() {
                continue;
            }
            let pb = self.p.value(b, v, &shift(d, &[(b, -1), (v, -1)], "P(p,r)")?)?;
            sum = sum.add(&r.mul(&pb.one_minus()).div(&den));
        }
        if sum.is_zero() {
            return Err(Error::singular(format!("P(p,r)_{a},{v}: zero summation"), &d.to_signed()));
        }
        Ok(S::from_int(dv as i64).div(&sum))
    }

    fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    fn label(&self) -> String {
        format!("P({}, {})", self.p.label(), self.r.label())
    }
}

/// `ℛ(p)`, lazily evaluated and memoised. Its domain is `p`'s shrunk by `2k0 + 1`.
pub fn apply_r<S: Scalar>(p: EdgeFn<S>, cfg: &OperatorConfig) -> Result<RatioFn<S>> {
    let domain = shrink_opt(p.domain(), 2 * cfg.k0 as u64 + 1)?;
    Ok(MemoRatio::wrap(Arc::new(ApplyR {
        p,
        cfg: cfg.clone(),
        domain,
    })))
}

/// `𝒫(p, r)`, lazily evaluated and memoised.
pub fn apply_p<S: Scalar>(p: EdgeFn<S>, r: RatioFn<S>, cfg: &OperatorConfig) -> Result<EdgeFn<S>> {
    let domain = narrower(shrink_opt(p.domain(), 2)?, shrink_opt(r.domain(), 1)?);
    Ok(MemoEdge::wrap(Arc::new(ApplyP {
        p,
        r,
        cfg: cfg.clone(),
        domain,
    })))
}

/// `𝒞(p) = 𝒫(p, ℛ(p))`; the domain shrinks by `2k0 + 2`.
pub fn apply_c<S: Scalar>(p: EdgeFn<S>, cfg: &OperatorConfig) -> Result<EdgeFn<S>> {
    let r = apply_r(p.clone(), cfg)?;
    apply_p(p, r, cfg)
}
