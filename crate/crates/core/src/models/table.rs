use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{big_binomial, h_formula};
use crate::error::{Error, Result};
use crate::exact::{Counter, PairConstraint};
use crate::exec::Exec;
use crate::graphical::is_graphical;
use crate::scalar::rational_to_f64;
use crate::sequence::DegreeSequence;

/// Largest `n` the table will enumerate.
pub const TABLE_MAX_N: usize = 10;

/// All graphical non-increasing sequences of length `n` with sum `2m`.
pub fn canonical_sequences(n: usize, m: u64) -> Vec<DegreeSequence> {
    fn rec(n: usize, left: u64, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeSequence>) {
        let slots = (n - cur.len()) as u64;
        if slots == 0 {
            if left == 0 {
                let d = DegreeSequence::new(cur.clone()).expect("non-empty");
                if is_graphical(&d) {
                    out.push(d);
                }
            }
            return;
        }
        if left > slots * cap as u64 {
            return;
        }
        for x in (0..=cap.min(left as u32)).rev() {
            cur.push(x);
            rec(n, left - x as u64, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, 2 * m, n as u32 - 1, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaRow {
    pub class: DegreeSequence,
    pub permutations: u64,
    pub count: String,
    /// Probability that the degree sequence of `G(n,m)` lies in this class.
    #[serde(skip)]
    pub exact_class_prob: BigRational,
    pub exact_class_prob_f64: f64,
    /// Per-sequence probability under `G(n,m)`.
    pub exact_prob: f64,
    /// Per-sequence formula value, when the formula is defined.
    pub formula: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaTable {
    pub n: usize,
    pub m: u64,
    pub rows: Vec<FormulaRow>,
    /// Exact sum of the class probabilities, as `p/q`.
    pub total: String,
}

impl FormulaTable {
    pub fn total_exact(&self) -> BigRational {
        self.rows.iter().fold(BigRational::zero(), |acc, r| acc + &r.exact_class_prob)
    }
}

fn permutations(d: &DegreeSequence) -> u64 {
    let mut f = (1..=d.n() as u64).product::<u64>();
    let s = d.degrees();
    let mut i = 0;
    while i < s.len() {
        let j = s[i..].iter().take_while(|&&x| x == s[i]).count();
        f /= (1..=j as u64).product::<u64>();
        i += j;
    }
    f
}

/// Exact `G(n,m)` degree-class probabilities next to the binomial-model formula.
pub fn exact_vs_formula(n: usize, m: u64, counter: &Counter, exec: Exec) -> Result<FormulaTable> {
    if n == 0 || n > TABLE_MAX_N {
        return Err(Error::Capacity { n, cap: TABLE_MAX_N });
    }
    let pairs = (n * (n - 1) / 2) as u64;
    if m > pairs {
        return Err(Error::invalid(format!("m = {m} exceeds C({n}, 2) = {pairs}")));
    }
    let classes = canonical_sequences(n, m);
    let total_graphs = BigInt::from(big_binomial(pairs, m));
    let c = PairConstraint::complete(n);
    let rows = exec.try_map(&classes, |d| -> Result<FormulaRow> {
        let count: BigUint = counter.count(d, &c)?;
        let perms = permutations(d);
        let per_seq = BigRational::new(BigInt::from(count.clone()), total_graphs.clone());
        let class_prob = &per_seq * BigRational::from_integer(BigInt::from(perms));
        let exact_prob = rational_to_f64(&per_seq);
        let formula = h_formula(d).ok().and_then(|h| h.value);
        Ok(FormulaRow {
            class: d.clone(),
            permutations: perms,
            count: count.to_string(),
            exact_class_prob_f64: rational_to_f64(&class_prob),
            exact_class_prob: class_prob,
            exact_prob,
            ratio: formula.map(|f| exact_prob / f),
            formula,
        })
    })?;
    let mut table = FormulaTable { n, m, rows, total: String::new() };
    let total = table.total_exact();
    table.total = if total.is_one() { "1".into() } else { total.to_string() };
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_normalize() {
        let counter = Counter::new();
        for (n, m) in [(4, 3), (6, 9), (5, 0), (5, 10)] {
            let t = exact_vs_formula(n, m, &counter, Exec::Parallel).unwrap();
            assert!(t.total_exact().is_one(), "n={n} m={m}: {}", t.total);
        }
    }

    #[test]
    fn four_three_classes() {
        let t = exact_vs_formula(4, 3, &Counter::new(), Exec::Sequential).unwrap();
        let classes: Vec<String> = t.rows.iter().map(|r| r.class.to_string()).collect();
        assert_eq!(classes, ["3,1,1,1", "2,2,2,0", "2,2,1,1"]);
        // 4 stars, 12 paths, 4 triangles out of C(6,3) = 20.
        let probs: Vec<_> = t.rows.iter().map(|r| r.exact_class_prob.clone()).collect();
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(probs, [r(1, 5), r(1, 5), r(3, 5)]);
    }

    #[test]
    fn regular_row_ratio_is_sane() {
        let t = exact_vs_formula(6, 9, &Counter::new(), Exec::Parallel).unwrap();
        let row = t.rows.iter().find(|r| r.class.degrees() == [3; 6]).unwrap();
        assert_eq!(row.count, "70");
        let ratio = row.ratio.unwrap();
        assert!(ratio > 0.5 && ratio < 2.0, "{ratio}");
    }

    #[test]
    fn capacity_and_domain() {
        assert!(matches!(exact_vs_formula(11, 5, &Counter::new(), Exec::Sequential), Err(Error::Capacity { .. })));
        assert!(exact_vs_formula(4, 7, &Counter::new(), Exec::Sequential).is_err());
    }
}
