//! Graphicality tests.

use serde::{Deserialize, Serialize};

use crate::sequence::DegreeSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphicalMode {
    #[default]
    ErdosGallai,
    /// The disjoint-sets form: `Σ_S d − Σ_T d ≤ s(n−1−t)` for all disjoint `S, T`.
    Koren,
}

/// Above this size the Koren mode stops enumerating every `(S, T)` and checks
/// only the extremal choice for each `(|S|, |T|)`.
pub const KOREN_EXHAUSTIVE_MAX_N: usize = 12;

pub fn is_graphical(d: &DegreeSequence) -> bool {
    is_graphical_with(d, GraphicalMode::ErdosGallai)
}

pub fn is_graphical_with(d: &DegreeSequence, mode: GraphicalMode) -> bool {
    let n = d.n();
    if d.degrees().iter().any(|&x| x as usize >= n) || !d.is_even() {
        return false;
    }
    match mode {
        GraphicalMode::ErdosGallai => erdos_gallai(d),
        GraphicalMode::Koren if n <= KOREN_EXHAUSTIVE_MAX_N => koren_exhaustive(d),
        GraphicalMode::Koren => koren_extremal(d),
    }
}

fn erdos_gallai(d: &DegreeSequence) -> bool {
    let s = d.sorted_desc();
    let x: Vec<u64> = s.degrees().iter().map(|&v| v as u64).collect();
    let n = x.len();
    let mut lhs = 0u64;
    for k in 1..=n {
        lhs += x[k - 1];
        let rhs = (k * (k - 1)) as u64 + x[k..].iter().map(|&v| v.min(k as u64)).sum::<u64>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// For fixed sizes the left side is largest with `S` the top `s` degrees and
/// `T` the bottom `t`, so checking those choices is equivalent to the full test.
fn koren_extremal(d: &DegreeSequence) -> bool {
    let s = d.sorted_desc();
    let x: Vec<i64> = s.degrees().iter().map(|&v| v as i64).collect();
    let n = x.len() as i64;
    let mut top = 0i64;
    for sz in 0..x.len() {
        if sz > 0 {
            top += x[sz - 1];
        }
        let mut bottom = 0i64;
        for t in 0..=(x.len() - sz) {
            if t > 0 {
                bottom += x[x.len() - t];
            }
            if sz + t == 0 {
                continue;
            }
            if top - bottom > sz as i64 * (n - 1 - t as i64) {
                return false;
            }
        }
    }
    true
}

fn koren_exhaustive(d: &DegreeSequence) -> bool {
    fn go(x: &[u32], i: usize, sum: i64, s: i64, t: i64, n: i64) -> bool {
        if i == x.len() {
            return s + t == 0 || sum <= s * (n - 1 - t);
        }
        let v = x[i] as i64;
        go(x, i + 1, sum, s, t, n)
            && go(x, i + 1, sum + v, s + 1, t, n)
            && go(x, i + 1, sum - v, s, t + 1, n)
    }
    go(d.degrees(), 0, 0, 0, 0, d.n() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(!is_graphical(&seq(&[1, 1, 1])));
        assert!(is_graphical(&seq(&[2, 2, 2])));
        assert!(!is_graphical(&seq(&[4, 4, 4, 1, 1])));
        assert!(!is_graphical(&seq(&[3, 1, 0])));
        assert!(is_graphical(&seq(&[0])));
    }

    #[test]
    fn modes_agree_on_extremal_reduction() {
        for d in [[3u32, 3, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1], [5, 5, 5, 5, 5, 5, 1, 1, 1, 1, 1, 1, 1, 1]] {
            let d = seq(&d);
            assert_eq!(koren_extremal(&d), erdos_gallai(&d));
        }
    }
}
