use serde::{Deserialize, Serialize};

use super::samplers::{sample_with, ModelKind, ModelSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub spec: ModelSpec,
    pub samples: usize,
    pub alpha: f64,
    /// Exact `Var d₁` under the model.
    pub var_d1: f64,
    /// `α d̄ + 1/n`.
    pub threshold: f64,
    pub exceedances: usize,
    pub frequency: f64,
    pub max_deviation: f64,
}

/// Variance of a hypergeometric draw of `draws` items from `total` with `good` marked.
fn hypergeometric_var(total: f64, good: f64, draws: f64) -> f64 {
    let q = good / total;
    draws * q * (1.0 - q) * (total - draws) / (total - 1.0)
}

/// Frequency of `|σ²(d) − Var d₁| ≥ α d̄ + 1/n` over `samples` draws.
pub fn sigma_concentration(spec: &ModelSpec, samples: usize, alpha: f64, exec: Exec) -> Result<ConcentrationReport> {
    spec.validate()?;
    let n = spec.n as f64;
    let m = spec.m.unwrap_or(0) as f64;
    // Vertex 1 sees n−1 of the pairs (gnm) or n−1 of the cells (bm).
    let var_d1 = match spec.kind {
        ModelKind::Gnm => hypergeometric_var(n * (n - 1.0) / 2.0, m, n - 1.0),
        ModelKind::Bm => hypergeometric_var(n * (n - 1.0), 2.0 * m, n - 1.0),
        other => return Err(Error::invalid(format!("concentration needs gnm or bm, not {other:?}"))),
    };
    let mean = 2.0 * m / n;
    let threshold = alpha * mean + 1.0 / n;
    let devs = sample_with(spec, samples, exec, |_, d| {
        let s2 = d.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n;
        (s2 - var_d1).abs()
    })?;
    let exceedances = devs.iter().filter(|&&x| x >= threshold).count();
    Ok(ConcentrationReport {
        spec: spec.clone(),
        samples,
        alpha,
        var_d1,
        threshold,
        exceedances,
        frequency: exceedances as f64 / samples.max(1) as f64,
        max_deviation: devs.into_iter().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_alpha_never_exceeds() {
        let spec = ModelSpec::with_m(ModelKind::Gnm, 20, 40, 5);
        let r = sigma_concentration(&spec, 2000, 20.0, Exec::Parallel).unwrap();
        assert_eq!(r.exceedances, 0);
    }

    #[test]
    fn variance_matches_empirical() {
        let spec = ModelSpec::with_m(ModelKind::Bm, 12, 18, 5);
        let d1: Vec<f64> = sample_with(&spec, 40000, Exec::Parallel, |_, d| d[0] as f64).unwrap();
        let mean = d1.iter().sum::<f64>() / d1.len() as f64;
        let var = d1.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d1.len() as f64;
        let r = sigma_concentration(&spec, 10, 1.0, Exec::Sequential).unwrap();
        assert!((var - r.var_d1).abs() < 0.05 * r.var_d1, "{var} vs {}", r.var_d1);
        assert!((mean - 3.0).abs() < 0.03);
    }

    #[test]
    fn rejects_other_models() {
        let spec = ModelSpec::with_p(ModelKind::Gnp, 12, 0.2, 5);
        assert!(sigma_concentration(&spec, 10, 1.0, Exec::Sequential).is_err());
    }
}
