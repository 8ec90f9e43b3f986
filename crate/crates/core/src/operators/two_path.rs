//! The truncated 2-path expansion and the `bad` switching weight.

use super::{shift, EdgeFunction, OperatorConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::DegreeSequence;

fn pair_down(d: &DegreeSequence, a: usize, v: usize, k: u32) -> Result<DegreeSequence> {
    let k = k as i64;
    shift(d, &[(a, -k), (v, -k)], "2-path expansion")
}

/// `Σ_{k=1}^{k0} (−1)^{k−1} p_bv(d − k s) ∏_{j<k} p_av(d − j s)/(1 − p_av(d − (j+1) s))`
/// with `s = e_a + e_v`.
pub fn sigma_k0<S: Scalar>(
    p: &dyn EdgeFunction<S>,
    d: &DegreeSequence,
    a: usize,
    v: usize,
    b: usize,
    k0: u32,
) -> Result<S> {
    let mut sum = S::zero();
    let mut prod = S::one();
    for k in 1..=k0 {
        if k > 1 {
            let num = p.value(a, v, &pair_down(d, a, v, k - 1)?)?;
            if num.is_zero() {
                break;
            }
            let at = pair_down(d, a, v, k)?;
            let den = p.value(a, v, &at)?.one_minus();
            if den.is_zero() {
                return Err(Error::singular("2-path product denominator 1 - p_av", &at.to_signed()));
            }
            prod = prod.mul(&num).div(&den);
        }
        let term = p.value(b, v, &pair_down(d, a, v, k)?)?.mul(&prod);
        sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
    }
    Ok(sum)
}

/// `p_avb(d) = p_av(d)/(1 − p_av(d − e_a − e_v)) · Σ^{k0}`.
pub fn two_path<S: Scalar>(
    p: &dyn EdgeFunction<S>,
    d: &DegreeSequence,
    a: usize,
    v: usize,
    b: usize,
    k0: u32,
) -> Result<S> {
    let lead = p.value(a, v, d)?;
    if lead.is_zero() {
        return Ok(S::zero());
    }
    let below = pair_down(d, a, v, 1)?;
    let den = p.value(a, v, &below)?.one_minus();
    if den.is_zero() {
        return Err(Error::singular("2-path denominator 1 - p_av", &below.to_signed()));
    }
    Ok(lead.div(&den).mul(&sigma_k0(p, d, a, v, b, k0)?))
}

/// `bad(i, j, d) = (1/d_i)(Σ_{v ∈ 𝒜(i)∖𝒜(j)} p_iv(d) + Σ_{v ∈ 𝒜(i)∩𝒜(j)} p_ivj(d))`.
pub fn bad<S: Scalar>(p: &dyn EdgeFunction<S>, i: usize, j: usize, d: &DegreeSequence, cfg: &OperatorConfig) -> Result<S> {
    let di = d.get(i);
    if di == 0 {
        return Err(Error::singular(format!("bad({i},{j}) with d_{i} = 0"), &d.to_signed()));
    }
    let c = &cfg.constraint;
    let mut sum = S::zero();
    for v in 0..d.n() {
        if !c.is_allowed(i, v) {
            continue;
        }
        let term = if c.is_allowed(j, v) {
            two_path(p, d, i, v, j, cfg.k0)?
        } else {
            p.value(i, v, d)?
        };
        sum = sum.add(&term);
    }
    Ok(sum.div(&S::from_int(di as i64)))
}
