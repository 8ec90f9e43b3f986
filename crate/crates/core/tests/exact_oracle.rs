mod common;

use std::sync::OnceLock;

use common::{seq, Oracle};
use degseq_core::exact::{switching_bound, Counter, PairConstraint};
use degseq_core::graphical::{is_graphical, is_graphical_with, GraphicalMode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn oracle(n: usize) -> &'static Oracle {
    static CELLS: [OnceLock<Oracle>; 8] = [const { OnceLock::new() }; 8];
    CELLS[n].get_or_init(|| Oracle::new(n))
}

fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn count_matches_enumeration_up_to_six() {
    let counter = Counter::new();
    for n in 1..=6 {
        let o = oracle(n);
        let c = PairConstraint::complete(n);
        for d in Oracle::sequences(n, 3) {
            let got = counter.count(&seq(&d), &c).unwrap();
            assert_eq!(got, BigUint::from(o.count(&d)), "{d:?}");
        }
    }
}

#[test]
fn graphical_matches_realisability() {
    for n in 1..=7 {
        let o = oracle(n);
        for d in Oracle::sequences(n, 4) {
            let s = seq(&d);
            let truth = o.realisable(&d);
            assert_eq!(is_graphical(&s), truth, "{d:?}");
            assert_eq!(is_graphical_with(&s, GraphicalMode::Koren), truth, "koren {d:?}");
        }
    }
}

#[test]
fn graphical_matches_search_at_eight() {
    let mut d = vec![0u32; 8];
    // Non-increasing sequences with entries at most 4.
    fn rec(d: &mut Vec<u32>, i: usize, cap: u32) {
        if i == d.len() {
            let s = seq(d);
            let truth = common::realisable_search(d);
            assert_eq!(is_graphical(&s), truth, "{d:?}");
            assert_eq!(is_graphical_with(&s, GraphicalMode::Koren), truth, "koren {d:?}");
            return;
        }
        for x in 0..=cap {
            d[i] = x;
            rec(d, i + 1, x);
        }
    }
    rec(&mut d, 0, 4);
}

#[test]
fn probabilities_match_enumeration() {
    let counter = Counter::new();
    for n in 3..=6 {
        let o = oracle(n);
        let c = PairConstraint::complete(n);
        for d in Oracle::sequences(n, 3).filter(|d| o.realisable(d)) {
            let s = seq(&d);
            for a in 0..n {
                for v in 0..n {
                    if a == v {
                        continue;
                    }
                    let (k, t) = o.edges_fraction(&d, &[(a, v)]);
                    let p = counter.edge_prob(&s, a, v, &c).unwrap();
                    assert_eq!(p, frac(k, t), "P {d:?} {a} {v}");
                    assert_eq!(p, counter.edge_prob(&s, v, a, &c).unwrap());
                    for b in 0..n {
                        if b == a || b == v {
                            continue;
                        }
                        let (k, t) = o.edges_fraction(&d, &[(a, v), (b, v)]);
                        let pp = counter.path_prob(&s, a, v, b, &c).unwrap();
                        assert_eq!(pp, frac(k, t), "P_avb {d:?} {a} {v} {b}");
                        assert_eq!(pp, counter.path_prob(&s, b, v, a, &c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn constrained_counts_match_enumeration() {
    let counter = Counter::new();
    let n = 6;
    let o = oracle(n);
    let ps = common::pairs(n);
    let choices: Vec<(usize, usize)> = vec![(0, 1), (0, 5), (2, 3), (1, 4)];
    for d in Oracle::sequences(n, 3).filter(|d| d.iter().sum::<u32>() % 2 == 0) {
        let s = seq(&d);
        for (i, &e) in choices.iter().enumerate() {
            for &f in &choices[i + 1..] {
                let forb = PairConstraint::complete(n).forbid(e.0, e.1).unwrap();
                assert_eq!(counter.count(&s, &forb).unwrap(), BigUint::from(o.count_with(&d, &[e], &[])));
                let mixed = forb.force(f.0, f.1).unwrap();
                assert_eq!(
                    counter.count(&s, &mixed).unwrap(),
                    BigUint::from(o.count_with(&d, &[e], &[f])),
                    "{d:?} -{e:?} +{f:?}"
                );
                let both = PairConstraint::complete(n).force(e.0, e.1).unwrap().force(f.0, f.1).unwrap();
                assert_eq!(counter.count(&s, &both).unwrap(), BigUint::from(o.count_with(&d, &[], &[e, f])));
            }
        }
    }
    assert_eq!(ps.len(), 15);
}

#[test]
fn forced_edges_reduce_to_forbidden() {
    let counter = Counter::new();
    let n = 7;
    let edge_sets: Vec<Vec<(usize, usize)>> = vec![vec![(0, 1)], vec![(2, 6)], vec![(0, 1), (1, 2)], vec![(0, 3), (4, 5)]];
    for d in Oracle::sequences(n, 3).filter(|d| d.iter().sum::<u32>() % 2 == 0) {
        for es in &edge_sets {
            let mut forced = PairConstraint::complete(n);
            let mut forbidden = PairConstraint::complete(n);
            let mut reduced: Vec<i64> = d.iter().map(|&x| x as i64).collect();
            for &(a, b) in es {
                forced = forced.force(a, b).unwrap();
                forbidden = forbidden.forbid(a, b).unwrap();
                reduced[a] -= 1;
                reduced[b] -= 1;
            }
            let lhs = counter.count(&seq(&d), &forced).unwrap();
            let rhs = counter.count_signed(&reduced, &forbidden).unwrap();
            assert_eq!(lhs, rhs, "{d:?} {es:?}");
        }
    }
}

#[test]
fn degree_sum_identity() {
    let counter = Counter::new();
    for n in 2..=7 {
        let c = PairConstraint::complete(n);
        for d in Oracle::sequences(n, 3).filter(|d| oracle(n).realisable(d)) {
            let s = seq(&d);
            let total = counter.count(&s, &c).unwrap();
            for v in 0..n {
                let sum: BigUint = (0..n)
                    .filter(|&b| b != v)
                    .map(|b| counter.count(&s, &c.clone().force(b, v).unwrap()).unwrap())
                    .sum();
                assert_eq!(sum, &total * BigUint::from(d[v]), "{d:?} v={v}");
            }
        }
    }
}

#[test]
fn removal_identity_and_switching_bound() {
    let counter = Counter::new();
    for n in 2..=7 {
        let o = oracle(n);
        let c = PairConstraint::complete(n);
        for d in Oracle::sequences(n, 4).filter(|d| d.iter().sum::<u32>() % 2 == 0) {
            let s = seq(&d);
            let bound = switching_bound(&s);
            for a in 0..n {
                for v in a + 1..n {
                    assert!(counter.removal_identity_check(&s, a, v, &c).unwrap(), "{d:?} {a} {v}");
                    if o.realisable(&d) {
                        let p = counter.edge_prob(&s, a, v, &c).unwrap();
                        assert!(bound.admits(&p), "{d:?} {a} {v}: {p} vs {bound:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn ratio_matches_enumeration_and_is_reciprocal() {
    let counter = Counter::new();
    for n in 2..=6 {
        let o = oracle(n);
        let c = PairConstraint::complete(n);
        for d in Oracle::sequences(n, 3).filter(|d| d.iter().sum::<u32>() % 2 == 1) {
            let s = seq(&d);
            for a in 0..n {
                for b in 0..n {
                    let minus = |i: usize| {
                        let mut x = d.clone();
                        x[i] = x[i].checked_sub(1)?;
                        Some(o.count(&x))
                    };
                    let (na, nb) = (minus(a).unwrap_or(0), minus(b).unwrap_or(0));
                    let r = counter.ratio(&s, a, b, &c);
                    if nb == 0 {
                        assert!(r.is_err(), "{d:?} {a} {b}");
                        continue;
                    }
                    let r = r.unwrap();
                    assert_eq!(r, frac(na, nb));
                    if na > 0 {
                        let back = counter.ratio(&s, b, a, &c).unwrap();
                        assert!((r * back).is_one());
                    } else {
                        assert!(r.is_zero());
                    }
                }
            }
        }
    }
}
