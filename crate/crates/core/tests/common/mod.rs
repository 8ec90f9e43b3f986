//! Brute-force reference implementations: every labelled graph on up to
//! seven vertices is enumerated as a bitmask over the pairs of `K_n`.
#![allow(dead_code)]

use std::collections::HashMap;

use degseq_core::DegreeSequence;

pub fn seq(v: &[u32]) -> DegreeSequence {
    DegreeSequence::new(v.to_vec()).unwrap()
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

pub fn bit(n: usize, a: usize, b: usize) -> u32 {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    // Row-major index of (i, j) in the upper triangle.
    let idx = i * (2 * n - i - 1) / 2 + (j - i - 1);
    1 << idx
}

pub fn degrees_of(n: usize, mask: u32, pairs: &[(usize, usize)]) -> Vec<u32> {
    let mut d = vec![0u32; n];
    for (t, &(i, j)) in pairs.iter().enumerate() {
        if mask >> t & 1 == 1 {
            d[i] += 1;
            d[j] += 1;
        }
    }
    d
}

/// All graphs on `n ≤ 7` labelled vertices, grouped by degree sequence.
pub struct Oracle {
    pub n: usize,
    pub by_seq: HashMap<Vec<u32>, Vec<u32>>,
}

impl Oracle {
    pub fn new(n: usize) -> Self {
        assert!(n <= 7, "oracle is exhaustive over 2^C(n,2) graphs");
        let ps = pairs(n);
        let mut by_seq: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for mask in 0u32..(1u32 << ps.len()) {
            by_seq.entry(degrees_of(n, mask, &ps)).or_default().push(mask);
        }
        Oracle { n, by_seq }
    }

    pub fn graphs(&self, d: &[u32]) -> &[u32] {
        self.by_seq.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: &[u32]) -> u64 {
        self.graphs(d).len() as u64
    }

    pub fn realisable(&self, d: &[u32]) -> bool {
        self.by_seq.contains_key(d)
    }

    /// Graphs with degree sequence `d` avoiding `forbidden` and containing `forced`.
    pub fn count_with(&self, d: &[u32], forbidden: &[(usize, usize)], forced: &[(usize, usize)]) -> u64 {
        let n = self.n;
        let no = forbidden.iter().fold(0, |m, &(a, b)| m | bit(n, a, b));
        let yes = forced.iter().fold(0, |m, &(a, b)| m | bit(n, a, b));
        self.graphs(d).iter().filter(|&&g| g & no == 0 && g & yes == yes).count() as u64
    }

    /// `(graphs containing every edge of `edges`, all graphs)`.
    pub fn edges_fraction(&self, d: &[u32], edges: &[(usize, usize)]) -> (u64, u64) {
        (self.count_with(d, &[], edges), self.count(d))
    }

    /// Non-negative integer vectors of length `n` with entries at most `max`.
    pub fn sequences(n: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
        let total = (max as u64 + 1).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut v = vec![0u32; n];
            for x in v.iter_mut() {
                *x = (code % (max as u64 + 1)) as u32;
                code /= max as u64 + 1;
            }
            v
        })
    }
}

/// Realisability by backtracking, for sizes past the exhaustive oracle.
pub fn realisable_search(d: &[u32]) -> bool {
    fn go(rem: &mut Vec<u32>, i: usize) -> bool {
        let n = rem.len();
        if i == n {
            return true;
        }
        if rem[i] == 0 {
            return go(rem, i + 1);
        }
        let need = rem[i] as usize;
        let cands: Vec<usize> = (i + 1..n).filter(|&j| rem[j] > 0).collect();
        if cands.len() < need {
            return false;
        }
        let mut pick = Vec::with_capacity(need);
        choose(rem, i, &cands, 0, need, &mut pick)
    }
    fn choose(rem: &mut Vec<u32>, i: usize, cands: &[usize], from: usize, need: usize, pick: &mut Vec<usize>) -> bool {
        if pick.len() == need {
            let saved = rem[i];
            rem[i] = 0;
            for &j in pick.iter() {
                rem[j] -= 1;
            }
            let ok = go(rem, i + 1);
            for &j in pick.iter() {
                rem[j] += 1;
            }
            rem[i] = saved;
            return ok;
        }
        for t in from..cands.len() {
            if cands.len() - t < need - pick.len() {
                break;
            }
            pick.push(cands[t]);
            if choose(rem, i, cands, t + 1, need, pick) {
                pick.pop();
                return true;
            }
            pick.pop();
        }
        false
    }
    go(&mut d.to_vec(), 0)
}
