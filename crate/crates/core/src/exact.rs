//! Exact enumeration of labelled simple graphs with a given degree sequence.
//!
//! Vertices that no constraint touches are exchangeable, so they are tracked
//! only as a multiset of residual degrees. That multiset (stored as one count
//! per degree value) is the memo key and does not depend on `n`. Endpoints of
//! forbidden pairs are handled explicitly first, one vertex at a time.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::DegreeSequence;

pub type ExactCount = BigUint;
/// Exact rational; a probability when produced by `edge_prob`/`path_prob`.
pub type ExactProb = BigRational;

pub const DEFAULT_CAP: usize = 16;
/// Memo keys store per-value vertex counts in a byte.
pub const MAX_CAP: usize = 255;

/// Allowable pairs (complete graph minus `forbidden`) plus required edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairConstraint {
    pub n: usize,
    pub forbidden: BTreeSet<(usize, usize)>,
    pub forced: BTreeSet<(usize, usize)>,
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl PairConstraint {
    pub fn complete(n: usize) -> Self {
        PairConstraint {
            n,
            ..Default::default()
        }
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::invalid(format!("pair {a}-{b} is a loop")));
        }
        if a >= self.n || b >= self.n {
            return Err(Error::invalid(format!("pair {a}-{b} outside [0, {})", self.n)));
        }
        Ok(())
    }

    pub fn forbid(mut self, a: usize, b: usize) -> Result<Self> {
        self.check_pair(a, b)?;
        let p = norm(a, b);
        if self.forced.contains(&p) {
            return Err(Error::invalid(format!("pair {a}-{b} both forced and forbidden")));
        }
        self.forbidden.insert(p);
        Ok(self)
    }

    pub fn force(mut self, a: usize, b: usize) -> Result<Self> {
        self.check_pair(a, b)?;
        let p = norm(a, b);
        if self.forbidden.contains(&p) {
            return Err(Error::invalid(format!("pair {a}-{b} both forced and forbidden")));
        }
        self.forced.insert(p);
        Ok(self)
    }

    pub fn is_allowed(&self, a: usize, b: usize) -> bool {
        a != b && !self.forbidden.contains(&norm(a, b))
    }

    /// `𝒜(a)`: vertices joined to `a` by an allowable pair.
    pub fn allowable(&self, a: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.is_allowed(a, v)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.forbidden.is_empty()
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: n,
            });
        }
        for &(a, b) in self.forbidden.iter().chain(&self.forced) {
            self.check_pair(a, b)?;
        }
        if self.forbidden.intersection(&self.forced).next().is_some() {
            return Err(Error::invalid("forced and forbidden pairs overlap"));
        }
        Ok(())
    }
}

fn binom_table() -> &'static Vec<Vec<BigUint>> {
    static TABLE: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Vec<BigUint>> = Vec::with_capacity(MAX_CAP + 1);
        for n in 0..=MAX_CAP {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &t[n - 1][k - 1] + &t[n - 1][k];
            }
            t.push(row);
        }
        t
    })
}

fn binom(n: usize, k: usize) -> &'static BigUint {
    &binom_table()[n][k]
}

/// Residual-degree classes: `classes[j]` vertices still need `j + 1` edges.
type Classes = Vec<u8>;

fn trim(mut c: Classes) -> Classes {
    while c.last() == Some(&0) {
        c.pop();
    }
    c
}

/// Every way of picking `need` vertices from the classes, with the multiplicity
/// and the classes after each picked vertex loses one unit of residual degree.
fn for_each_pick(classes: &[u8], need: usize, f: &mut dyn FnMut(&BigUint, Classes)) {
    fn rec(
        classes: &[u8],
        j: usize,
        need: usize,
        avail_below: &[usize],
        picks: &mut Vec<u8>,
        f: &mut dyn FnMut(&BigUint, Classes),
    ) {
        if need == 0 {
            let mut next = vec![0u8; classes.len()];
            let mut coeff = BigUint::one();
            for (i, &c) in classes.iter().enumerate() {
                let x = picks.get(i).copied().unwrap_or(0);
                next[i] += c - x;
                if i > 0 {
                    next[i - 1] += x;
                }
                if x > 0 {
                    coeff *= binom(c as usize, x as usize);
                }
            }
            f(&coeff, trim(next));
            return;
        }
        if j == 0 || avail_below[j] < need {
            return;
        }
        let idx = j - 1;
        let hi = (classes[idx] as usize).min(need);
        for x in 0..=hi {
            picks[idx] = x as u8;
            rec(classes, j - 1, need - x, avail_below, picks, f);
        }
        picks[idx] = 0;
    }
    // avail_below[j] = number of vertices in classes[0..j].
    let mut avail_below = vec![0usize; classes.len() + 1];
    for j in 0..classes.len() {
        avail_below[j + 1] = avail_below[j] + classes[j] as usize;
    }
    let mut picks = vec![0u8; classes.len()];
    rec(classes, classes.len(), need, &avail_below, &mut picks, f);
}

/// Memoised exact counter. Cheap to share across threads.
#[derive(Debug)]
pub struct Counter {
    cap: usize,
    memo: DashMap<Classes, BigUint>,
}

impl Default for Counter {
    fn default() -> Self {
        Self::new()
    }
}

impl Counter {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        Counter {
            cap: cap.min(MAX_CAP),
            memo: DashMap::new(),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::Capacity { n, cap: self.cap });
        }
        Ok(())
    }

    fn count_classes(&self, key: &[u8]) -> BigUint {
        if key.is_empty() {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(key) {
            return v.clone();
        }
        let value = self.count_classes_uncached(key);
        self.memo.insert(key.to_vec(), value.clone());
        value
    }

    fn count_classes_uncached(&self, key: &[u8]) -> BigUint {
        let sum: usize = key.iter().enumerate().map(|(j, &c)| (j + 1) * c as usize).sum();
        if sum % 2 == 1 {
            return BigUint::zero();
        }
        let k = key.len();
        let mut rest = key.to_vec();
        rest[k - 1] -= 1;
        let remaining: usize = rest.iter().map(|&c| c as usize).sum();
        if k > remaining {
            return BigUint::zero();
        }
        let mut total = BigUint::zero();
        for_each_pick(&rest, k, &mut |coeff, next| {
            let sub = self.count_classes(&next);
            if !sub.is_zero() {
                total += coeff * sub;
            }
        });
        total
    }

    /// Number of graphs realising `d` with no edge in `forbidden` and every
    /// edge in `forced`. Non-realisable input counts as 0.
    pub fn count(&self, d: &DegreeSequence, c: &PairConstraint) -> Result<ExactCount> {
        self.check_cap(d.n())?;
        c.validate(d.n())?;
        let mut residual = d.to_signed();
        for &(a, b) in &c.forced {
            residual[a] -= 1;
            residual[b] -= 1;
        }
        let mut forbidden = c.forbidden.clone();
        forbidden.extend(c.forced.iter().copied());
        Ok(self.count_residual(&residual, &forbidden))
    }

    pub fn count_plain(&self, d: &DegreeSequence) -> Result<ExactCount> {
        self.count(d, &PairConstraint::complete(d.n()))
    }

    /// Like `count`, but accepts signed entries; any negative entry gives 0.
    pub fn count_signed(&self, d: &[i64], c: &PairConstraint) -> Result<ExactCount> {
        match DegreeSequence::from_signed(d) {
            Some(d) => self.count(&d, c),
            None => {
                self.check_cap(d.len())?;
                Ok(BigUint::zero())
            }
        }
    }

    fn count_residual(&self, d: &[i64], forbidden: &BTreeSet<(usize, usize)>) -> BigUint {
        let n = d.len();
        if d.iter().any(|&x| x < 0 || x as usize >= n) || d.iter().sum::<i64>() % 2 == 1 {
            return BigUint::zero();
        }
        let mut dist: Vec<usize> = forbidden.iter().flat_map(|&(a, b)| [a, b]).collect();
        dist.sort_unstable();
        dist.dedup();
        // Highest residual first keeps the branching small.
        dist.sort_by_key(|&v| std::cmp::Reverse(d[v]));
        let mut classes = vec![0u8; n];
        for (v, &x) in d.iter().enumerate() {
            if x > 0 && !dist.contains(&v) {
                classes[x as usize - 1] += 1;
            }
        }
        let classes = trim(classes);
        if dist.is_empty() {
            return self.count_classes(&classes);
        }
        let allowed: Vec<Vec<bool>> = dist
            .iter()
            .map(|&u| dist.iter().map(|&w| u != w && !forbidden.contains(&norm(u, w))).collect())
            .collect();
        let res: Vec<u32> = dist.iter().map(|&v| d[v] as u32).collect();
        let mut local = HashMap::new();
        self.count_distinguished(&allowed, 0, res, classes, &mut local)
    }

    fn count_distinguished(
        &self,
        allowed: &[Vec<bool>],
        i: usize,
        res: Vec<u32>,
        classes: Classes,
        local: &mut HashMap<(usize, Vec<u32>, Classes), BigUint>,
    ) -> BigUint {
        if i == res.len() {
            return self.count_classes(&classes);
        }
        let key = (i, res.clone(), classes.clone());
        if let Some(v) = local.get(&key) {
            return v.clone();
        }
        let r = res[i] as usize;
        let later: Vec<usize> = (i + 1..res.len())
            .filter(|&j| allowed[i][j] && res[j] > 0)
            .collect();
        let pool: usize = classes.iter().map(|&c| c as usize).sum();
        let mut total = BigUint::zero();
        for mask in 0u32..(1 << later.len()) {
            let s = mask.count_ones() as usize;
            if s > r || r - s > pool {
                continue;
            }
            let mut next_res = res.clone();
            next_res[i] = 0;
            for (bit, &j) in later.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    next_res[j] -= 1;
                }
            }
            for_each_pick(&classes, r - s, &mut |coeff, next| {
                let sub = self.count_distinguished(allowed, i + 1, next_res.clone(), next, local);
                if !sub.is_zero() {
                    total += coeff * sub;
                }
            });
        }
        local.insert(key, total.clone());
        total
    }

    /// `P_E(d) = N_E(d)/N(d)` for an explicit edge set.
    pub fn edges_prob(&self, d: &DegreeSequence, edges: &[(usize, usize)], c: &PairConstraint) -> Result<ExactProb> {
        let total = self.count(d, c)?;
        if total.is_zero() {
            return Err(Error::UndefinedProbability { seq: d.to_signed() });
        }
        let mut with = c.clone();
        for &(a, b) in edges {
            c.check_pair(a, b)?;
            if c.forbidden.contains(&norm(a, b)) {
                return Ok(BigRational::zero());
            }
            with = with.force(a, b)?;
        }
        let num = self.count(d, &with)?;
        Ok(BigRational::new(BigInt::from(num), BigInt::from(total)))
    }

    /// `P_av(d)`.
    pub fn edge_prob(&self, d: &DegreeSequence, a: usize, v: usize, c: &PairConstraint) -> Result<ExactProb> {
        self.edges_prob(d, &[(a, v)], c)
    }

    /// `P_avb(d)`: both `av` and `bv` present.
    pub fn path_prob(&self, d: &DegreeSequence, a: usize, v: usize, b: usize, c: &PairConstraint) -> Result<ExactProb> {
        if a == b || a == v || b == v {
            return Err(Error::invalid("path endpoints must be distinct"));
        }
        self.edges_prob(d, &[(a, v), (b, v)], c)
    }

    /// `R_ab(d) = N(d − e_a)/N(d − e_b)`.
    pub fn ratio(&self, d: &DegreeSequence, a: usize, b: usize, c: &PairConstraint) -> Result<ExactProb> {
        if a >= d.n() || b >= d.n() {
            return Err(Error::invalid("vertex out of range"));
        }
        let mut da = d.to_signed();
        da[a] -= 1;
        let mut db = d.to_signed();
        db[b] -= 1;
        let den = self.count_signed(&db, c)?;
        if den.is_zero() {
            return Err(Error::singular("ratio with N(d - e_b) = 0", &db));
        }
        let num = self.count_signed(&da, c)?;
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Checks `N_av(d) = N(d − e_a − e_v) − N_av(d − e_a − e_v)`.
    pub fn removal_identity_check(&self, d: &DegreeSequence, a: usize, v: usize, c: &PairConstraint) -> Result<bool> {
        let with = c.clone().force(a, v)?;
        let lhs = self.count(d, &with)?;
        let mut reduced = d.to_signed();
        reduced[a] -= 1;
        reduced[v] -= 1;
        let all = self.count_signed(&reduced, c)?;
        let also = self.count_signed(&reduced, &with)?;
        Ok(BigInt::from(lhs) == BigInt::from(all) - BigInt::from(also))
    }
}

/// Upper bound on any `P_av(d)` from the simple switching argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SwitchingBound {
    Finite(#[serde(serialize_with = "ser_rational")] BigRational),
    Infinite,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SwitchingBound {
    pub fn admits(&self, p: &BigRational) -> bool {
        match self {
            SwitchingBound::Finite(b) => p <= b,
            SwitchingBound::Infinite => true,
        }
    }
}

/// `Δ² / (dn − Δ(Δ+2))` when the denominator is positive.
pub fn switching_bound(d: &DegreeSequence) -> SwitchingBound {
    let delta = d.max_degree() as i64;
    let den = d.m1() as i64 - delta * (delta + 2);
    if den <= 0 {
        SwitchingBound::Infinite
    } else {
        SwitchingBound::Finite(BigRational::new(BigInt::from(delta * delta), BigInt::from(den)))
    }
}
