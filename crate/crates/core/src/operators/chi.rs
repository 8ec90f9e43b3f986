//! The `χ^(s)` distance between edge functions over a shrinking domain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EdgeFunction;
use crate::error::{Error, Result};
use crate::exact::PairConstraint;
use crate::exec::Exec;
use crate::scalar::Scalar;
use crate::sequence::DegreeSequence;

/// `Ω^(0)` is the non-negative L¹ ball of `radius` about `root`; `Ω^(s)` is the
/// set of its points whose radius-`s` neighbourhood stays inside.
///
/// In the default (relaxed) mode `Ω^(s)` is the ball of radius `radius − s`.
/// The literal mode additionally demands `d_i ≥ s`, because the neighbourhood
/// is taken in `ℤⁿ` and must avoid negative entries. Operators never step to a
/// negative entry without a zero factor short-circuiting first, so the relaxed
/// mode is what they actually need; the literal one is empty for sparse roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainLadder {
    pub root: DegreeSequence,
    pub radius: u64,
    #[serde(default)]
    pub literal: bool,
}

impl DomainLadder {
    pub fn new(root: DegreeSequence, radius: u64) -> Self {
        DomainLadder {
            root,
            radius,
            literal: false,
        }
    }

    pub fn literal(root: DegreeSequence, radius: u64) -> Self {
        DomainLadder {
            root,
            radius,
            literal: true,
        }
    }

    /// Every point of `Ω^(s)`, in a fixed order.
    pub fn points(&self, s: u64) -> Vec<DegreeSequence> {
        if s > self.radius {
            return Vec::new();
        }
        let floor = if self.literal { s as i64 } else { 0 };
        let root = self.root.to_signed();
        let mut out = Vec::new();
        let mut cur = root.clone();
        fn rec(i: usize, budget: i64, floor: i64, root: &[i64], cur: &mut Vec<i64>, out: &mut Vec<DegreeSequence>) {
            if i == root.len() {
                if cur.iter().all(|&x| x >= floor) {
                    out.push(DegreeSequence::from_signed(cur).expect("entries checked"));
                }
                return;
            }
            for delta in -budget..=budget {
                let x = root[i] + delta;
                if x < floor {
                    continue;
                }
                cur[i] = x;
                rec(i + 1, budget - delta.abs(), floor, root, cur, out);
            }
            cur[i] = root[i];
        }
        rec(0, (self.radius - s) as i64, floor, &root, &mut cur, &mut out);
        out
    }
}

/// Which ordered pairs `cw` the maximum ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSelection {
    All,
    /// One pair per ordered combination of root degree classes. Exact for
    /// label-equivariant functions under complete allowable pairs, since
    /// permuting vertices within a class maps the domain onto itself.
    ClassRepresentatives,
    Explicit(Vec<(usize, usize)>),
}

impl PairSelection {
    pub fn pairs(&self, root: &DegreeSequence, c: &PairConstraint) -> Result<Vec<(usize, usize)>> {
        let n = root.n();
        match self {
            PairSelection::All => Ok((0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| c.is_allowed(a, b))
                .collect()),
            PairSelection::ClassRepresentatives => {
                if !c.is_complete() {
                    return Err(Error::invalid("class representatives need complete allowable pairs"));
                }
                let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for (i, &x) in root.degrees().iter().enumerate() {
                    classes.entry(x).or_default().push(i);
                }
                let mut out = Vec::new();
                for ca in classes.values() {
                    for cb in classes.values() {
                        let a = ca[0];
                        if let Some(&b) = cb.iter().find(|&&b| b != a) {
                            out.push((a, b));
                        }
                    }
                }
                Ok(out)
            }
            PairSelection::Explicit(v) => {
                for &(a, b) in v {
                    if a >= n || b >= n || !c.is_allowed(a, b) {
                        return Err(Error::invalid(format!("pair ({a},{b}) is not allowable")));
                    }
                }
                Ok(v.clone())
            }
        }
    }
}

/// `|ln(x/y)|`, with 0 for two zeros and `+∞` for a lone zero or a sign clash.
pub fn log_distance<S: Scalar>(x: &S, y: &S) -> f64 {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ if x.is_negative() != y.is_negative() => f64::INFINITY,
        _ => x.div(y).to_f64().abs().ln().abs(),
    }
}

/// `χ^(s)(p1, p2)`: the largest `|ln(p1/p2)|` over the chosen pairs and `Ω^(s)`.
/// An empty `Ω^(s)` gives 0.
pub fn chi_distance<S: Scalar>(
    p1: &dyn EdgeFunction<S>,
    p2: &dyn EdgeFunction<S>,
    ladder: &DomainLadder,
    s: u64,
    pairs: &[(usize, usize)],
    exec: Exec,
) -> Result<f64> {
    let points = ladder.points(s);
    let per_point = exec.try_map(&points, |d| -> Result<f64> {
        let mut worst = 0.0f64;
        for &(c, w) in pairs {
            let x = p1.value(c, w, d)?;
            let y = p2.value(c, w, d)?;
            worst = worst.max(log_distance(&x, &y));
        }
        Ok(worst)
    })?;
    Ok(per_point.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::operators::{ConstEdge, FormulaP, Scaled};

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ladder_points() {
        let l = DomainLadder::new(seq(&[1, 0, 2]), 2);
        assert_eq!(l.points(2), vec![seq(&[1, 0, 2])]);
        // Radius-1 ball minus the point with a negative middle entry.
        assert_eq!(l.points(1).len(), 6);
        assert!(l.points(3).is_empty());
        let strict = DomainLadder::literal(seq(&[1, 0, 2]), 2);
        assert_eq!(strict.points(1), vec![seq(&[1, 1, 2])]);
        assert!(strict.points(2).is_empty());
    }

    #[test]
    fn chi_basics() {
        let root = seq(&[3, 3, 2, 2, 2]);
        let ladder = DomainLadder::new(root.clone(), 2);
        let c = PairConstraint::complete(5);
        let pairs = PairSelection::All.pairs(&root, &c).unwrap();
        let p: Arc<dyn EdgeFunction<f64>> = Arc::new(FormulaP::pgr(None));
        let p2 = Scaled::new(p.clone(), 2.0);
        assert_eq!(chi_distance(p.as_ref(), p.as_ref(), &ladder, 0, &pairs, Exec::Sequential).unwrap(), 0.0);
        let x = chi_distance(p.as_ref(), &p2, &ladder, 0, &pairs, Exec::Parallel).unwrap();
        assert!((x - 2f64.ln()).abs() < 1e-12);
        assert_eq!(chi_distance(p.as_ref(), &p2, &ladder, 3, &pairs, Exec::Sequential).unwrap(), 0.0);
        let z = ConstEdge::new(0.0);
        assert_eq!(chi_distance(p.as_ref(), &z, &ladder, 1, &pairs, Exec::Sequential).unwrap(), f64::INFINITY);
        let neg = ConstEdge::new(-0.1);
        assert_eq!(log_distance(&0.1, &neg.value), f64::INFINITY);
    }

    #[test]
    fn class_representatives() {
        let root = seq(&[3, 3, 2, 2, 1]);
        let reps = PairSelection::ClassRepresentatives
            .pairs(&root, &PairConstraint::complete(5))
            .unwrap();
        // Classes {0,1}, {2,3}, {4}; the singleton class has no internal pair.
        assert_eq!(reps.len(), 8);
        let constrained = PairConstraint::complete(5).forbid(0, 1).unwrap();
        assert!(PairSelection::ClassRepresentatives.pairs(&root, &constrained).is_err());
    }
}
