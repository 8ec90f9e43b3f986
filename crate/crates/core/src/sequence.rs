//! The degree-sequence data model and its summary statistics.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of non-negative degrees, indexed by 0-based vertex.
///
/// Entries are not required to be below `n`; operators evaluate functions at
/// perturbed sequences that need not be graphical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    n: usize,
    degrees: Vec<u32>,
}

impl TryFrom<SequenceJson> for DegreeSequence {
    type Error = Error;
    fn try_from(j: SequenceJson) -> Result<Self> {
        if j.n != j.degrees.len() {
            return Err(Error::LengthMismatch {
                left: j.n,
                right: j.degrees.len(),
            });
        }
        DegreeSequence::new(j.degrees)
    }
}

impl From<DegreeSequence> for SequenceJson {
    fn from(d: DegreeSequence) -> Self {
        SequenceJson {
            n: d.n(),
            degrees: d.degrees,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(sum: u64) -> Self {
        if sum.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::invalid("a degree sequence needs at least one vertex"));
        }
        Ok(DegreeSequence { degrees })
    }

    /// Builds from signed entries, returning `None` if any is negative.
    pub fn from_signed(entries: &[i64]) -> Option<Self> {
        if entries.is_empty() {
            return None;
        }
        entries
            .iter()
            .map(|&x| u32::try_from(x).ok())
            .collect::<Option<Vec<_>>>()
            .map(|degrees| DegreeSequence { degrees })
    }

    /// `n` copies of `d`.
    pub fn regular(n: usize, d: u32) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.degrees
    }

    pub fn get(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.degrees.iter().map(|&x| x as i64).collect()
    }

    pub fn m1(&self) -> u64 {
        self.degrees.iter().map(|&x| x as u64).sum()
    }

    pub fn m2(&self) -> u64 {
        self.degrees
            .iter()
            .map(|&x| x as u64 * (x as u64).saturating_sub(1))
            .sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.m1())
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn sorted_desc(&self) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { degrees }
    }

    /// Adds `delta` to each listed coordinate; `None` if an entry goes negative.
    pub fn shifted(&self, deltas: &[(usize, i64)]) -> Option<Self> {
        let mut degrees = self.degrees.clone();
        for &(i, dx) in deltas {
            let v = degrees[i] as i64 + dx;
            degrees[i] = u32::try_from(v).ok()?;
        }
        Some(DegreeSequence { degrees })
    }

    /// `d − e_i`, or `None` when `d_i = 0`.
    pub fn minus(&self, i: usize) -> Option<Self> {
        self.shifted(&[(i, -1)])
    }

    /// `d − k(e_a + e_v)`.
    pub fn minus_pair(&self, a: usize, v: usize, k: u32) -> Option<Self> {
        self.shifted(&[(a, -(k as i64)), (v, -(k as i64))])
    }

    pub fn mean_f64(&self) -> f64 {
        self.m1() as f64 / self.n() as f64
    }

    /// `d̄/(n−1)`; NaN for `n = 1`.
    pub fn mu_f64(&self) -> f64 {
        if self.n() < 2 {
            return f64::NAN;
        }
        self.mean_f64() / (self.n() - 1) as f64
    }

    pub fn sigma2_f64(&self) -> f64 {
        let n = self.n() as f64;
        let mean = self.mean_f64();
        self.degrees
            .iter()
            .map(|&x| (x as f64 - mean).powi(2))
            .sum::<f64>()
            / n
    }

    pub fn gamma2_f64(&self) -> f64 {
        let n = self.n() as f64;
        self.sigma2_f64() * n / ((n - 1.0) * (n - 1.0))
    }

    /// Largest relative deviation `max |d_i − d̄| / d̄`.
    pub fn spread_f64(&self) -> f64 {
        let mean = self.mean_f64();
        self.degrees
            .iter()
            .map(|&x| (x as f64 - mean).abs())
            .fold(0.0, f64::max)
            / mean
    }

    pub fn stats(&self) -> SequenceStats {
        SequenceStats::of(self)
    }

    /// Parses `"3,3,3,3"` or whitespace/newline-separated integers.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty());
        let mut degrees = Vec::new();
        for t in parts {
            let v: i64 = t
                .parse()
                .map_err(|_| Error::invalid(format!("not an integer degree: {t:?}")))?;
            if v < 0 {
                return Err(Error::invalid(format!("negative degree {v}")));
            }
            let v = u32::try_from(v).map_err(|_| Error::invalid(format!("degree {v} too large")))?;
            degrees.push(v);
        }
        Self::new(degrees)
    }

    /// One integer per line.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::invalid(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serialises")
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Exact summary statistics. `mu` needs `n ≥ 2` and `eps` needs `d̄ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStats {
    pub n: usize,
    pub m1: u64,
    pub m2: u64,
    pub mean: BigRational,
    mu: Option<BigRational>,
    pub sigma2: BigRational,
    pub gamma2: BigRational,
    pub delta: u32,
    eps: Option<Vec<BigRational>>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl SequenceStats {
    pub fn of(d: &DegreeSequence) -> Self {
        let n = d.n();
        let m1 = d.m1();
        let mean = BigRational::new(BigInt::from(m1), BigInt::from(n));
        let mu = (n >= 2).then(|| &mean / rat(n as i64 - 1));
        let ss: BigRational = d
            .degrees()
            .iter()
            .map(|&x| {
                let dev = rat(x as i64) - &mean;
                &dev * &dev
            })
            .fold(BigRational::zero(), |acc, t| acc + t);
        let sigma2 = &ss / rat(n as i64);
        let gamma2 = if n >= 2 {
            &ss / rat((n as i64 - 1) * (n as i64 - 1))
        } else {
            BigRational::zero()
        };
        let eps = (!mean.is_zero()).then(|| {
            d.degrees()
                .iter()
                .map(|&x| (rat(x as i64) - &mean) / &mean)
                .collect()
        });
        SequenceStats {
            n,
            m1,
            m2: d.m2(),
            mean,
            mu,
            sigma2,
            gamma2,
            delta: d.max_degree(),
            eps,
        }
    }

    pub fn mu(&self) -> Result<&BigRational> {
        self.mu
            .as_ref()
            .ok_or_else(|| Error::invalid("mu needs n >= 2"))
    }

    pub fn eps(&self) -> Result<&[BigRational]> {
        self.eps
            .as_deref()
            .ok_or_else(|| Error::invalid("relative deviations need a positive mean"))
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.m1)
    }

    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mu_f64(&self) -> Option<f64> {
        self.mu.as_ref().and_then(|m| m.to_f64())
    }

    pub fn sigma2_f64(&self) -> f64 {
        self.sigma2.to_f64().unwrap_or(f64::NAN)
    }

    pub fn gamma2_f64(&self) -> f64 {
        self.gamma2.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn l1_distance(d1: &DegreeSequence, d2: &DegreeSequence) -> Result<u64> {
    if d1.n() != d2.n() {
        return Err(Error::LengthMismatch {
            left: d1.n(),
            right: d2.n(),
        });
    }
    Ok(d1
        .degrees()
        .iter()
        .zip(d2.degrees())
        .map(|(&x, &y)| (x as i64 - y as i64).unsigned_abs())
        .sum())
}

/// Membership in the parity-restricted L¹ ball of radius `r` about `root`.
pub fn ball_member(d: &DegreeSequence, root: &DegreeSequence, r: u64, parity: Parity) -> Result<bool> {
    Ok(l1_distance(d, root)? <= r && d.parity() == parity)
}
