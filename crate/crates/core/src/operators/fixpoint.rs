//! Repeated application of `𝒞` with contraction measurements.

use serde::{Serialize, Serializer};

use super::{apply_c, DomainLadder, EdgeFn, OperatorConfig, PairSelection};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::operators::chi_distance;
use crate::scalar::Scalar;

/// JSON has no infinity; write it as the string `"inf"`.
pub fn ser_ext<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

fn ser_ext_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_ext(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub step: usize,
    /// `χ(p_t, p_{t−1})`.
    #[serde(serialize_with = "ser_ext")]
    pub chi_to_previous: f64,
    /// `χ(p_t, p′_t)` when a companion start was given.
    #[serde(serialize_with = "ser_ext_opt")]
    pub chi_pair: Option<f64>,
    /// `χ(p_t, p′_t) / χ(p_{t−1}, p′_{t−1})`.
    #[serde(serialize_with = "ser_ext_opt")]
    pub contraction: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    /// Every distance is measured on `Ω^(s)` for this `s` (the innermost level),
    /// which makes the steps comparable. Measuring the earlier iterates on a
    /// smaller set can only lower their distances, so contraction ratios are
    /// conservative.
    pub measured_at: u64,
    pub points: usize,
    pub pairs: usize,
    #[serde(serialize_with = "ser_ext_opt")]
    pub initial_chi_pair: Option<f64>,
    pub steps: Vec<StepReport>,
    /// Set when a singularity ended the iteration early.
    pub stopped: Option<String>,
}

/// Applies `𝒞` `steps` times to `p0` (and to `companion` if given).
pub fn iterate_fixed_point<S: Scalar>(
    p0: EdgeFn<S>,
    companion: Option<EdgeFn<S>>,
    steps: usize,
    cfg: &OperatorConfig,
    ladder: &DomainLadder,
    selection: &PairSelection,
    exec: Exec,
) -> Result<(EdgeFn<S>, FixedPointReport)> {
    let need = steps as u64 * cfg.step_radius();
    if ladder.radius < need {
        return Err(Error::RequiredRadius {
            need,
            have: ladder.radius,
        });
    }
    let pairs = selection.pairs(&ladder.root, &cfg.constraint)?;
    let points = ladder.points(need).len();
    let chi = |x: &EdgeFn<S>, y: &EdgeFn<S>| chi_distance(x.as_ref(), y.as_ref(), ladder, need, &pairs, exec);
    let mut report = FixedPointReport {
        measured_at: need,
        points,
        pairs: pairs.len(),
        initial_chi_pair: None,
        steps: Vec::new(),
        stopped: None,
    };
    let mut cur = p0;
    let mut other = companion;
    let mut prev_pair = match &other {
        Some(q) => match chi(&cur, q) {
            Ok(x) => Some(x),
            Err(e) => {
                report.stopped = Some(e.to_string());
                return Ok((cur, report));
            }
        },
        None => None,
    };
    report.initial_chi_pair = prev_pair;
    for step in 1..=steps {
        let outcome = (|| -> Result<(EdgeFn<S>, Option<EdgeFn<S>>, StepReport)> {
            let next = apply_c(cur.clone(), cfg)?;
            let chi_to_previous = chi(&next, &cur)?;
            let next_other = other.as_ref().map(|q| apply_c(q.clone(), cfg)).transpose()?;
            let chi_pair = next_other.as_ref().map(|q| chi(&next, q)).transpose()?;
            let contraction = match (chi_pair, prev_pair) {
                (Some(x), Some(y)) if y > 0.0 => Some(x / y),
                _ => None,
            };
            Ok((
                next,
                next_other,
                StepReport {
                    step,
                    chi_to_previous,
                    chi_pair,
                    contraction,
                },
            ))
        })();
        match outcome {
            Ok((next, next_other, rep)) => {
                prev_pair = rep.chi_pair;
                report.steps.push(rep);
                cur = next;
                other = next_other;
            }
            Err(e) => {
                report.stopped = Some(e.to_string());
                break;
            }
        }
    }
    Ok((cur, report))
}
