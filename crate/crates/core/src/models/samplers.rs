use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::sequence::DegreeSequence;

/// Draws per RNG stream. Fixed, so output does not depend on the thread count.
pub const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Degrees of a uniform graph with `m` edges.
    Gnm,
    /// Degrees of a graph with independent edges of probability `p`.
    Gnp,
    /// `n` independent `Bin(n−1, p)`.
    Bp,
    /// `Bp` conditioned on sum `2m`.
    Bm,
    /// `Bp` conditioned on an even sum.
    Ep,
    /// `Bm` with `m ~ Bin(n(n−1)/2, p)`.
    EpPrime,
    /// `Ep` with `p` replaced by a truncated-normal draw.
    Bhatp,
}

impl ModelKind {
    pub fn uses_m(self) -> bool {
        matches!(self, ModelKind::Gnm | ModelKind::Bm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSample {
    pub seq: DegreeSequence,
    pub model: ModelKind,
    pub seed: u64,
    pub draw: u64,
}

impl ModelSpec {
    pub fn with_m(kind: ModelKind, n: usize, m: u64, seed: u64) -> Self {
        ModelSpec { kind, n, m: Some(m), p: None, seed }
    }

    pub fn with_p(kind: ModelKind, n: usize, p: f64, seed: u64) -> Self {
        ModelSpec { kind, n, m: None, p: Some(p), seed }
    }

    fn pairs(&self) -> u64 {
        (self.n as u64) * (self.n as u64 - 1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("models need n >= 2"));
        }
        if self.kind.uses_m() {
            let m = self.m.ok_or_else(|| Error::invalid(format!("{:?} needs m", self.kind)))?;
            if m > self.pairs() {
                return Err(Error::invalid(format!("m = {m} exceeds n(n-1)/2 = {}", self.pairs())));
            }
        } else {
            let p = self.p.ok_or_else(|| Error::invalid(format!("{:?} needs p", self.kind)))?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(format!("p = {p} must lie in (0, 1)")));
            }
        }
        Ok(())
    }

    /// Expected edge density, used to compare models on the same footing.
    pub fn density(&self) -> f64 {
        match (self.m, self.p) {
            (Some(m), _) => m as f64 / self.pairs() as f64,
            (None, Some(p)) => p,
            _ => f64::NAN,
        }
    }
}

struct Sampler {
    spec: ModelSpec,
    pairs: Vec<(u32, u32)>,
}

impl Sampler {
    fn new(spec: &ModelSpec) -> Self {
        let n = spec.n as u32;
        let pairs = if spec.kind == ModelKind::Gnm {
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
        } else {
            Vec::new()
        };
        Sampler {
            spec: spec.clone(),
            pairs,
        }
    }

    fn bm<R: Rng>(&self, rng: &mut R, m: u64) -> Vec<u32> {
        let n = self.spec.n;
        let mut deg = vec![0u32; n];
        for cell in index::sample(rng, n * (n - 1), 2 * m as usize) {
            deg[cell / (n - 1)] += 1;
        }
        deg
    }

    fn bp<R: Rng>(&self, rng: &mut R, p: f64) -> Vec<u32> {
        let bin = Binomial::new(self.spec.n as u64 - 1, p).expect("valid p");
        (0..self.spec.n).map(|_| bin.sample(rng) as u32).collect()
    }

    fn even_bp<R: Rng>(&self, rng: &mut R, p: f64) -> Vec<u32> {
        loop {
            let d = self.bp(rng, p);
            if d.iter().map(|&x| x as u64).sum::<u64>() % 2 == 0 {
                return d;
            }
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Vec<u32> {
        let n = self.spec.n;
        match self.spec.kind {
            ModelKind::Gnm => {
                let mut deg = vec![0u32; n];
                let m = self.spec.m.unwrap() as usize;
                for k in index::sample(rng, self.pairs.len(), m) {
                    let (i, j) = self.pairs[k];
                    deg[i as usize] += 1;
                    deg[j as usize] += 1;
                }
                deg
            }
            ModelKind::Gnp => {
                let p = self.spec.p.unwrap();
                let mut deg = vec![0u32; n];
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.random_bool(p) {
                            deg[i] += 1;
                            deg[j] += 1;
                        }
                    }
                }
                deg
            }
            ModelKind::Bp => self.bp(rng, self.spec.p.unwrap()),
            ModelKind::Bm => self.bm(rng, self.spec.m.unwrap()),
            ModelKind::Ep => self.even_bp(rng, self.spec.p.unwrap()),
            ModelKind::EpPrime => {
                let m = Binomial::new(self.spec.pairs(), self.spec.p.unwrap())
                    .expect("valid p")
                    .sample(rng);
                self.bm(rng, m)
            }
            ModelKind::Bhatp => {
                let p = self.spec.p.unwrap();
                let sd = (p * (1.0 - p) / (n * (n - 1)) as f64).sqrt();
                let normal = Normal::new(p, sd).expect("finite sd");
                let phat = loop {
                    let x = normal.sample(rng);
                    if x > 0.0 && x < 1.0 {
                        break x;
                    }
                };
                self.even_bp(rng, phat)
            }
        }
    }
}

/// Draws `count` sequences and maps each through `f`, in draw order.
///
/// Draw `i` comes from ChaCha8 stream `i / CHUNK` seeded by `spec.seed`, so the
/// result is identical for any thread count.
pub fn sample_with<T, F>(spec: &ModelSpec, count: usize, exec: Exec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, Vec<u32>) -> T + Sync + Send,
{
    spec.validate()?;
    let sampler = Sampler::new(spec);
    let chunks = count.div_ceil(CHUNK);
    let parts = exec.map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(c as u64);
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(count);
        (lo..hi).map(|i| f(i as u64, sampler.draw(&mut rng))).collect::<Vec<T>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

pub fn sample(spec: &ModelSpec, count: usize, exec: Exec) -> Result<Vec<ModelSample>> {
    sample_with(spec, count, exec, |draw, deg| ModelSample {
        seq: DegreeSequence::new(deg).expect("n >= 2"),
        model: spec.kind,
        seed: spec.seed,
        draw,
    })
}
