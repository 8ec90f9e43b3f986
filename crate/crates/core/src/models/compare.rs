use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::samplers::{sample_with, ModelSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// A scalar or vector summary of a degree sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    SortedSequence,
    FirstDegree,
    MaxDegree,
    /// Lower median: element `⌊(n−1)/2⌋` of the ascending sort.
    MedianDegree,
    /// Number of vertices of degree `k`.
    CountOfDegree(u32),
}

impl Statistic {
    pub fn key(&self, d: &[u32]) -> Vec<u32> {
        match *self {
            Statistic::SortedSequence => {
                let mut s = d.to_vec();
                s.sort_unstable();
                s
            }
            Statistic::FirstDegree => vec![d[0]],
            Statistic::MaxDegree => vec![d.iter().copied().max().unwrap_or(0)],
            Statistic::MedianDegree => {
                let mut s = d.to_vec();
                s.sort_unstable();
                vec![s[(s.len() - 1) / 2]]
            }
            Statistic::CountOfDegree(k) => vec![d.iter().filter(|&&x| x == k).count() as u32],
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Statistic::SortedSequence)
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sorted" => Statistic::SortedSequence,
            "first" => Statistic::FirstDegree,
            "max" => Statistic::MaxDegree,
            "median" => Statistic::MedianDegree,
            _ => match s.strip_prefix("nk:") {
                Some(k) => Statistic::CountOfDegree(
                    k.parse()
                        .map_err(|_| Error::invalid(format!("bad degree in statistic {s:?}")))?,
                ),
                None => {
                    return Err(Error::invalid(format!(
                        "unknown statistic {s:?} (sorted|first|max|median|nk:K)"
                    )))
                }
            },
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::SortedSequence => f.write_str("sorted"),
            Statistic::FirstDegree => f.write_str("first"),
            Statistic::MaxDegree => f.write_str("max"),
            Statistic::MedianDegree => f.write_str("median"),
            Statistic::CountOfDegree(k) => write!(f, "nk:{k}"),
        }
    }
}

type Histogram = BTreeMap<Vec<u32>, u64>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub statistic: Statistic,
    pub samples_a: usize,
    pub samples_b: usize,
    /// Total variation between the two empirical distributions of the statistic.
    pub tv: f64,
    /// Kolmogorov–Smirnov distance, for scalar statistics.
    pub ks: Option<f64>,
    /// Half-width of the central 95% bootstrap interval for `tv`.
    pub tv_half_width: f64,
    pub bootstrap_replicates: usize,
    /// `(value, frequency)` per model.
    pub dist_a: Vec<(Vec<u32>, f64)>,
    pub dist_b: Vec<(Vec<u32>, f64)>,
}

fn histogram(spec: &ModelSpec, stat: Statistic, count: usize, exec: Exec) -> Result<Histogram> {
    let keys = sample_with(spec, count, exec, |_, d| stat.key(&d))?;
    let mut h = Histogram::new();
    for k in keys {
        *h.entry(k).or_default() += 1;
    }
    Ok(h)
}

fn frequencies(h: &Histogram) -> BTreeMap<Vec<u32>, f64> {
    let total: u64 = h.values().sum();
    h.iter().map(|(k, &c)| (k.clone(), c as f64 / total as f64)).collect()
}

fn tv(a: &BTreeMap<Vec<u32>, f64>, b: &BTreeMap<Vec<u32>, f64>) -> f64 {
    let mut keys: Vec<&Vec<u32>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

fn ks(a: &BTreeMap<Vec<u32>, f64>, b: &BTreeMap<Vec<u32>, f64>) -> f64 {
    let mut keys: Vec<&Vec<u32>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let (mut fa, mut fb, mut worst) = (0.0, 0.0, 0.0f64);
    for k in keys {
        fa += a.get(k).unwrap_or(&0.0);
        fb += b.get(k).unwrap_or(&0.0);
        worst = worst.max((fa - fb).abs());
    }
    worst
}

/// A multinomial resample of `h`'s empirical distribution with the same total.
fn resample(h: &Histogram, rng: &mut ChaCha8Rng) -> BTreeMap<Vec<u32>, f64> {
    let total: u64 = h.values().sum();
    let mut left = total;
    let mut mass_left = total;
    let mut out = BTreeMap::new();
    for (k, &c) in h {
        if left == 0 {
            break;
        }
        let draw = if c == mass_left {
            left
        } else {
            Binomial::new(left, c as f64 / mass_left as f64)
                .expect("probability in range")
                .sample(rng)
        };
        left -= draw;
        mass_left -= c;
        out.insert(k.clone(), draw as f64 / total as f64);
    }
    out
}

/// Samples both models and compares the distributions of `stat`.
pub fn compare(a: &ModelSpec, b: &ModelSpec, stat: Statistic, samples: usize, bootstrap: usize, exec: Exec) -> Result<ComparisonReport> {
    if a.n != b.n {
        return Err(Error::LengthMismatch { left: a.n, right: b.n });
    }
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let ha = histogram(a, stat, samples, exec)?;
    let hb = histogram(b, stat, samples, exec)?;
    let (fa, fb) = (frequencies(&ha), frequencies(&hb));
    let reps = exec.map_range(bootstrap, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ b.seed.rotate_left(32));
        rng.set_stream(i as u64);
        tv(&resample(&ha, &mut rng), &resample(&hb, &mut rng))
    });
    let half_width = if reps.len() >= 2 {
        let mut r = reps;
        r.sort_by(f64::total_cmp);
        let q = |p: f64| r[((r.len() - 1) as f64 * p).round() as usize];
        (q(0.975) - q(0.025)) / 2.0
    } else {
        0.0
    };
    Ok(ComparisonReport {
        statistic: stat,
        samples_a: samples,
        samples_b: samples,
        tv: tv(&fa, &fb),
        ks: stat.is_scalar().then(|| ks(&fa, &fb)),
        tv_half_width: half_width,
        bootstrap_replicates: bootstrap,
        dist_a: fa.into_iter().collect(),
        dist_b: fb.into_iter().collect(),
    })
}

/// Asymptotic p-value of a one-sample KS distance `d` over `n` observations.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let x = (n as f64).sqrt() * d;
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let t = 2.0 * (if k % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * (k * k) as f64 * x * x).exp();
        sum += t;
        if t.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}
