//! Closed-form asymptotic formulas, evaluated in log space where they involve
//! large binomials.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::sequence::DegreeSequence;

/// A formula value carried as its natural log; `value` is `None` when the
/// exponential over- or underflows binary64.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaResult {
    pub log_value: f64,
    pub value: Option<f64>,
}

impl FormulaResult {
    pub fn from_log(log_value: f64) -> Self {
        let v = log_value.exp();
        let value = (v.is_finite() && (v > 0.0 || log_value == f64::NEG_INFINITY)).then_some(v);
        FormulaResult { log_value, value }
    }

    /// `self / other` as a plain float.
    pub fn ratio_to(&self, other: &FormulaResult) -> f64 {
        (self.log_value - other.log_value).exp()
    }
}

fn lnb(n: u64, k: u64) -> f64 {
    ln_binomial(n, k)
}

fn require_even_fitting(d: &DegreeSequence) -> Result<()> {
    if !d.is_even() {
        return Err(Error::invalid("degree sum must be even"));
    }
    let n = d.n() as u32;
    if d.degrees().iter().any(|&x| x + 1 > n) {
        return Err(Error::invalid("every degree must be at most n - 1"));
    }
    Ok(())
}

fn mu_interior(d: &DegreeSequence) -> Result<f64> {
    let mu = d.mu_f64();
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid(format!("density mu = {mu} must lie strictly inside (0, 1)")));
    }
    Ok(mu)
}

/// `Pr_{B_m}(d) = C(n(n−1), 2m)^{-1} ∏ C(n−1, d_i)`.
pub fn binom_model_prob(d: &DegreeSequence) -> Result<FormulaResult> {
    require_even_fitting(d)?;
    let n = d.n() as u64;
    let log = d.degrees().iter().map(|&x| lnb(n - 1, x as u64)).sum::<f64>() - lnb(n * (n - 1), d.m1());
    Ok(FormulaResult::from_log(log))
}

/// Exact-rational `Pr_{B_m}(d)`.
pub fn binom_model_prob_exact(d: &DegreeSequence) -> Result<BigRational> {
    require_even_fitting(d)?;
    let n = d.n() as u64;
    let num = d
        .degrees()
        .iter()
        .fold(BigUint::one(), |acc, &x| acc * binomial(BigUint::from(n - 1), BigUint::from(x)));
    let den = binomial(BigUint::from(n * (n - 1)), BigUint::from(d.m1()));
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn gamma_correction(d: &DegreeSequence, mu: f64) -> f64 {
    let g = d.gamma2_f64();
    0.25 - g * g / (4.0 * mu * mu * (1.0 - mu) * (1.0 - mu))
}

/// `H(d) = Pr_{B_m}(d) · exp(1/4 − γ₂²/(4μ²(1−μ)²))`.
pub fn h_formula(d: &DegreeSequence) -> Result<FormulaResult> {
    let mu = mu_interior(d)?;
    let base = binom_model_prob(d)?;
    Ok(FormulaResult::from_log(base.log_value + gamma_correction(d, mu)))
}

/// The conjectured asymptotic number of graphs with degree sequence `d`.
pub fn conjectured_count(d: &DegreeSequence) -> Result<FormulaResult> {
    let mu = mu_interior(d)?;
    let n = d.n() as u64;
    let pairs = (n * (n - 1)) as f64 / 2.0;
    let entropy = mu * mu.ln() + (1.0 - mu) * (1.0 - mu).ln();
    let log = 0.5 * std::f64::consts::LN_2
        + gamma_correction(d, mu)
        + pairs * entropy
        + d.degrees().iter().map(|&x| lnb(n - 1, x as u64)).sum::<f64>();
    Ok(FormulaResult::from_log(log))
}

/// `C(n−1, d)^n · C(C(n,2), m) / C(n(n−1), 2m) · e^{1/4}` with `m = dn/2`.
pub fn regular_count_formula(n: u64, d: u64) -> Result<FormulaResult> {
    if n < 3 || d < 1 || d + 2 > n {
        return Err(Error::invalid(format!("need 1 <= d <= n - 2, got n = {n}, d = {d}")));
    }
    if (d * n) % 2 == 1 {
        return Err(Error::invalid("d * n must be even"));
    }
    let m = d * n / 2;
    let log = n as f64 * lnb(n - 1, d) + lnb(n * (n - 1) / 2, m) - lnb(n * (n - 1), 2 * m) + 0.25;
    Ok(FormulaResult::from_log(log))
}

fn vertex(d: &DegreeSequence, i: usize) -> Result<f64> {
    if i >= d.n() {
        return Err(Error::invalid(format!("vertex {i} out of range")));
    }
    Ok(d.get(i) as f64)
}

/// Leading term of `H(d − e_a)/H(d − e_b)` for odd `d`.
///
/// `γ₂` is taken from `d`; `d̄` and `μ` from `d − e_a`, whose mean equals that
/// of `d − e_b`.
pub fn conj_ratio(d: &DegreeSequence, a: usize, b: usize) -> Result<f64> {
    let (da, db) = (vertex(d, a)?, vertex(d, b)?);
    let n = d.n() as f64;
    if d.is_even() {
        return Err(Error::invalid("the ratio formula needs an odd degree sum"));
    }
    if d.max_degree() as f64 > n / 2.0 {
        return Err(Error::invalid("the ratio formula needs max degree <= n/2"));
    }
    if da < 1.0 || db < 1.0 {
        return Err(Error::invalid("d_a and d_b must be positive"));
    }
    let mean = (d.m1() as f64 - 1.0) / n;
    let mu = mean / (n - 1.0);
    if mu <= 0.0 {
        return Err(Error::invalid("the ratio formula needs mu > 0"));
    }
    let g = d.gamma2_f64();
    Ok(da * (n - db) / (db * (n - da)) * ((da - db) * g / (mean * mean * (1.0 - mu) * (1.0 - mu))).exp())
}

fn check_mean(d: &DegreeSequence) -> Result<f64> {
    let mean = d.mean_f64();
    let n = d.n() as f64;
    if !(mean > 0.0 && mean < n - 1.0) {
        return Err(Error::invalid(format!("mean degree {mean} must lie strictly inside (0, n - 1)")));
    }
    Ok(mean)
}

/// `P^gr_av(d) = (d_a d_v/(d̄(n−1)))·(1 − (d_a−d̄)(d_v−d̄)/(d̄(n−1−d̄)))`.
pub fn pgr(d: &DegreeSequence, a: usize, v: usize) -> Result<f64> {
    let (da, dv) = (vertex(d, a)?, vertex(d, v)?);
    let mean = check_mean(d)?;
    let n1 = d.n() as f64 - 1.0;
    Ok(da * dv / (mean * n1) * (1.0 - (da - mean) * (dv - mean) / (mean * (n1 - mean))))
}

/// `R^gr_ab(d) = d_a(n−d_b)/(d_b(n−d_a)) · (1 + (d_a−d_b)σ²/(d̄²n))`.
pub fn rgr(d: &DegreeSequence, a: usize, b: usize) -> Result<f64> {
    let (da, db) = (vertex(d, a)?, vertex(d, b)?);
    let mean = check_mean(d)?;
    let n = d.n() as f64;
    if db == 0.0 || da == n {
        return Err(Error::invalid("R^gr needs d_b > 0 and d_a < n"));
    }
    Ok(da * (n - db) / (db * (n - da)) * (1.0 + (da - db) * d.sigma2_f64() / (mean * mean * n)))
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn pgr_exact(d: &DegreeSequence, a: usize, v: usize) -> Result<BigRational> {
    vertex(d, a)?;
    vertex(d, v)?;
    check_mean(d)?;
    let s = d.stats();
    let n1 = q(d.n() as i64 - 1);
    let (da, dv) = (q(d.get(a) as i64), q(d.get(v) as i64));
    let mean = &s.mean;
    let lead = &da * &dv / (mean * &n1);
    let corr = (&da - mean) * (&dv - mean) / (mean * (&n1 - mean));
    Ok(lead * (BigRational::one() - corr))
}

pub fn rgr_exact(d: &DegreeSequence, a: usize, b: usize) -> Result<BigRational> {
    vertex(d, a)?;
    vertex(d, b)?;
    check_mean(d)?;
    let n = d.n() as i64;
    let (da, db) = (d.get(a) as i64, d.get(b) as i64);
    if db == 0 || da == n {
        return Err(Error::invalid("R^gr needs d_b > 0 and d_a < n"));
    }
    let s = d.stats();
    let lead = BigRational::new(BigInt::from(da * (n - db)), BigInt::from(db * (n - da)));
    let corr = q(da - db) * &s.sigma2 / (&s.mean * &s.mean * q(n));
    Ok(lead * (BigRational::one() + corr))
}

/// The edge-probability theorem's leading term; identical to `pgr`.
pub fn edge_prob_formula(d: &DegreeSequence, a: usize, b: usize) -> Result<f64> {
    pgr(d, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiRhoVariant {
    /// The dense-regime forms with `σ²/(d̄n)` and `1/(n−1)` corrections.
    Section7,
    /// The simpler forms used for the near-regular estimates.
    Appendix,
}

/// Parameters shared by `pi` and `rho`. `n` is a float so that `n = ∞`
/// switches off the `1/n` corrections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiRhoParams {
    pub eps_a: f64,
    pub eps_other: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub mean: f64,
    pub n: f64,
}

impl PiRhoParams {
    /// Parameters read off a sequence for the ordered pair `(a, other)`.
    pub fn of(d: &DegreeSequence, a: usize, other: usize) -> Result<Self> {
        let (da, db) = (vertex(d, a)?, vertex(d, other)?);
        let mean = check_mean(d)?;
        Ok(PiRhoParams {
            eps_a: (da - mean) / mean,
            eps_other: (db - mean) / mean,
            mu: d.mu_f64(),
            sigma2: d.sigma2_f64(),
            mean,
            n: d.n() as f64,
        })
    }

    fn check(&self) -> Result<()> {
        if self.mu.is_nan() || self.mu >= 1.0 {
            return Err(Error::invalid("pi/rho need mu < 1"));
        }
        if 1.0 + self.eps_a <= 0.0 || 1.0 + self.eps_other <= 0.0 {
            return Err(Error::invalid("pi/rho need 1 + eps > 0"));
        }
        Ok(())
    }
}

pub fn pi(variant: PiRhoVariant, p: &PiRhoParams) -> Result<f64> {
    p.check()?;
    let (ea, ev, mu) = (p.eps_a, p.eps_other, p.mu);
    let lead = mu * (1.0 + ea) * (1.0 + ev);
    Ok(match variant {
        PiRhoVariant::Section7 => {
            let dn = p.mean * p.n;
            lead * (1.0 + (-mu * ea * ev + (ea + ev) * p.sigma2 / dn) / (1.0 - mu) + (ea + ev) / (p.n - 1.0))
        }
        PiRhoVariant::Appendix => lead * (1.0 - ea * ev * mu / (1.0 - mu)),
    })
}

pub fn rho(variant: PiRhoVariant, p: &PiRhoParams) -> Result<f64> {
    p.check()?;
    let (ea, eb, mu) = (p.eps_a, p.eps_other, p.mu);
    let dn = p.mean * p.n;
    let shift = match variant {
        PiRhoVariant::Section7 => 1.0 / p.n,
        PiRhoVariant::Appendix => 0.0,
    };
    let num = 1.0 - mu * (1.0 + eb) + shift;
    let den = 1.0 - mu * (1.0 + ea) + shift;
    if num <= 0.0 || den <= 0.0 {
        return Err(Error::invalid("rho has a nonpositive factor"));
    }
    let corr = match variant {
        PiRhoVariant::Section7 => (ea - eb) * p.sigma2 / ((1.0 - mu) * (1.0 - mu) * dn),
        PiRhoVariant::Appendix => (ea - eb) * p.sigma2 / dn,
    };
    Ok((1.0 + ea) / (1.0 + eb) * num / den * (1.0 + corr))
}

/// Sparse-range leading term `d_a d_v / M₁`.
pub fn sparse_edge_prob(d: &DegreeSequence, a: usize, v: usize) -> Result<f64> {
    let (da, dv) = (vertex(d, a)?, vertex(d, v)?);
    if d.m1() == 0 {
        return Err(Error::invalid("M1 = 0"));
    }
    Ok(da * dv / d.m1() as f64)
}

/// Sparse-range leading term `(d_a/d_b)(1 + (d_a−d_b)(M₁+M₂)/M₁²)`.
pub fn sparse_ratio(d: &DegreeSequence, a: usize, b: usize) -> Result<f64> {
    let (da, db) = (vertex(d, a)?, vertex(d, b)?);
    if db == 0.0 {
        return Err(Error::invalid("d_b = 0"));
    }
    let m1 = d.m1() as f64;
    if m1 == 0.0 {
        return Err(Error::invalid("M1 = 0"));
    }
    Ok(da / db * (1.0 + (da - db) * (m1 + d.m2() as f64) / (m1 * m1)))
}

/// Error scales attached to the near-regular estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEnvelope {
    pub eta1: f64,
    pub eta2: f64,
    pub xi: f64,
    pub delta: f64,
    pub epsilon: f64,
    /// `1 + ln ε / ln d̄`, when `ε > 0` and `d̄ > 1`.
    pub alpha: Option<f64>,
    /// `log²n/√n + d̄^{5α−3}`, when `alpha` is defined.
    pub theorem_error: Option<f64>,
}

/// `k0 = None` is the `k0 → ∞` limit; `epsilon = None` uses the sequence's own
/// spread `max |d_i − d̄| / d̄`.
pub fn error_envelope(d: &DegreeSequence, k0: Option<u32>, epsilon: Option<f64>) -> Result<ErrorEnvelope> {
    let mean = d.mean_f64();
    if mean <= 0.0 {
        return Err(Error::invalid("error envelope needs a positive mean degree"));
    }
    let n = d.n() as f64;
    let eps = epsilon.unwrap_or_else(|| d.spread_f64());
    if eps < 0.0 {
        return Err(Error::invalid("epsilon must be non-negative"));
    }
    let n2 = n * n;
    let tail = k0.map_or(0.0, |k| (2.0 * mean / n).powi(k as i32));
    let eta1 = 1.0 / (mean * n) + eps * mean / n2 + eps.powi(4) * mean * mean / n2 + tail;
    let eta2 = eps / n + eps.powi(3) * mean * mean / n2;
    let xi = n.ln().powi(2) / n.sqrt();
    let alpha = (eps > 0.0 && mean > 1.0).then(|| 1.0 + eps.ln() / mean.ln());
    Ok(ErrorEnvelope {
        eta1,
        eta2,
        xi,
        delta: 1.0 / mean,
        epsilon: eps,
        alpha,
        theorem_error: alpha.map(|al| xi + mean.powf(5.0 * al - 3.0)),
    })
}

/// `C(n, k)` as a big integer, for callers comparing against exact counts.
pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}
