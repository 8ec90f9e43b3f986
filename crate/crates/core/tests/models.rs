use degseq_core::models::{compare, ks_pvalue, sample_with, sigma_concentration, ModelKind, ModelSpec, Statistic};
use degseq_core::Exec;
use statrs::function::factorial::ln_binomial;

/// `Pr(d₁ = k)` under the binomial model conditioned on `Σ d = 2m`, by
/// convolving one `Bin(n−1, ·)` vertex against the other `n − 1`.
fn conditioned_marginal(n: u64, m: u64) -> Vec<f64> {
    let log_mass = |k: u64| ln_binomial(n - 1, k) + ln_binomial((n - 1) * (n - 1), 2 * m - k) - ln_binomial(n * (n - 1), 2 * m);
    (0..n).map(|k| if k <= 2 * m { log_mass(k).exp() } else { 0.0 }).collect()
}

#[test]
fn bm_first_degree_matches_exact_marginal() {
    let (n, m, count) = (10usize, 9u64, 100_000usize);
    let pmf = conditioned_marginal(n as u64, m);
    assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let spec = ModelSpec::with_m(ModelKind::Bm, n, m, 11);
    let d1 = sample_with(&spec, count, Exec::Parallel, |_, d| d[0] as usize).unwrap();
    let mut hist = vec![0usize; n];
    for k in d1 {
        hist[k] += 1;
    }
    let (mut fe, mut ft, mut ks) = (0.0, 0.0, 0.0f64);
    for k in 0..n {
        fe += hist[k] as f64 / count as f64;
        ft += pmf[k];
        ks = ks.max((fe - ft).abs());
    }
    let p = ks_pvalue(ks, count);
    assert!(p > 0.01, "ks = {ks}, p = {p}");
}

#[test]
fn gnm_first_degree_mean() {
    let spec = ModelSpec::with_m(ModelKind::Gnm, 30, 60, 3);
    let d1: Vec<f64> = sample_with(&spec, 100_000, Exec::Parallel, |_, d| d[0] as f64).unwrap();
    let mean = d1.iter().sum::<f64>() / d1.len() as f64;
    let sd = (d1.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d1.len() as f64).sqrt();
    assert!((mean - 4.0).abs() < 3.0 * sd / (d1.len() as f64).sqrt(), "{mean}");
}

#[test]
fn binomial_models_have_close_max_degree() {
    let a = ModelSpec::with_p(ModelKind::Gnp, 30, 0.2, 1);
    let b = ModelSpec::with_p(ModelKind::Bhatp, 30, 0.2, 2);
    let r = compare(&a, &b, Statistic::MaxDegree, 40_000, 0, Exec::Parallel).unwrap();
    assert!(r.tv < 0.1, "{}", r.tv);
}

#[test]
fn concentration_is_comparable_across_models() {
    let gnm = sigma_concentration(&ModelSpec::with_m(ModelKind::Gnm, 50, 250, 4), 20_000, 1.0, Exec::Parallel).unwrap();
    let bm = sigma_concentration(&ModelSpec::with_m(ModelKind::Bm, 50, 250, 4), 20_000, 1.0, Exec::Parallel).unwrap();
    assert!(gnm.frequency < 0.01 && bm.frequency < 0.01, "{} {}", gnm.frequency, bm.frequency);
    let big = sigma_concentration(&ModelSpec::with_m(ModelKind::Bm, 50, 250, 4), 2_000, 50.0, Exec::Parallel).unwrap();
    assert_eq!(big.exceedances, 0);
}
