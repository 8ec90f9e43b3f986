mod common;

use std::sync::Arc;

use common::{seq, Oracle};
use degseq_core::exact::{Counter, PairConstraint};
use degseq_core::graphical::is_graphical;
use degseq_core::operators::{apply_p, apply_r, two_path, EdgeFn, ExactP, ExactR, OperatorConfig, RatioFn};
use degseq_core::DegreeSequence;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

fn exact(n: usize, counter: &Arc<Counter>) -> (EdgeFn<BigRational>, RatioFn<BigRational>) {
    let c = PairConstraint::complete(n);
    (
        Arc::new(ExactP::new(counter.clone(), c.clone())),
        Arc::new(ExactR::new(counter.clone(), c)),
    )
}

fn graphical(n: usize, max: u32) -> Vec<DegreeSequence> {
    Oracle::sequences(n, max).map(|d| seq(&d)).filter(is_graphical).collect()
}

fn down(d: &DegreeSequence, a: usize, v: usize, k: u32) -> Option<DegreeSequence> {
    d.minus_pair(a, v, k)
}

#[test]
fn exact_functions_are_fixed_points() {
    let counter = Arc::new(Counter::new());
    let (mut checked_p, mut checked_r) = (0, 0);
    for n in 3..=6 {
        let (p, r) = exact(n, &counter);
        let c = PairConstraint::complete(n);
        for d in graphical(n, 3) {
            let cfg = OperatorConfig::new(n, d.max_degree() + 1).unwrap();
            let pp = apply_p(p.clone(), r.clone(), &cfg).unwrap();
            for a in 0..n {
                for v in 0..n {
                    if a == v {
                        continue;
                    }
                    let truth = counter.edge_prob(&d, a, v, &c).unwrap();
                    if truth.is_zero() {
                        continue;
                    }
                    match pp.value(a, v, &d) {
                        Ok(x) => {
                            assert_eq!(x, truth, "P {d:?} {a} {v}");
                            checked_p += 1;
                        }
                        // Only undefined shadows may stop the evaluation.
                        Err(e) => assert!(matches!(e.kind(), "undefined_probability" | "singularity"), "{e}"),
                    }
                }
            }
        }
        for d in Oracle::sequences(n, 3).map(|d| seq(&d)).filter(|d| !d.is_even()) {
            let cfg = OperatorConfig::new(n, d.max_degree() + 1).unwrap();
            let rr = apply_r(p.clone(), &cfg).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let realisable = |i: usize| d.minus(i).is_some_and(|x| is_graphical(&x));
                    if a == b || !realisable(a) || !realisable(b) {
                        continue;
                    }
                    let truth = counter.ratio(&d, a, b, &c).unwrap();
                    match rr.value(a, b, &d) {
                        Ok(x) => {
                            assert_eq!(x, truth, "R {d:?} {a} {b}");
                            checked_r += 1;
                        }
                        Err(e) => assert!(matches!(e.kind(), "undefined_probability" | "singularity"), "{e}"),
                    }
                }
            }
        }
    }
    assert!(checked_p > 1000 && checked_r > 1000, "{checked_p} {checked_r}");
}

#[test]
fn two_path_truncations_alternate() {
    let counter = Arc::new(Counter::new());
    let mut checked = [0usize; 3];
    for n in 3..=6 {
        let (p, _) = exact(n, &counter);
        let c = PairConstraint::complete(n);
        // k0 = 3 needs d_a, d_v >= 4, so the family runs up to Δ = n - 1.
        for d in graphical(n, n as u32 - 1) {
            for a in 0..n {
                for v in 0..n {
                    for b in 0..n {
                        if a == v || b == v || a == b {
                            continue;
                        }
                        let truth = counter.path_prob(&d, a, v, b, &c).unwrap();
                        for k0 in 1..=3u32 {
                            let hyp = (0..=k0).all(|k| {
                                down(&d, a, v, k).is_some_and(|x| {
                                    let all = counter.count(&x, &c).unwrap();
                                    let with = counter.count(&x, &c.clone().force(a, v).unwrap()).unwrap();
                                    !with.is_zero() && with < all
                                })
                            });
                            if !hyp {
                                continue;
                            }
                            let tp = two_path(p.as_ref(), &d, a, v, b, k0).unwrap();
                            let tail = down(&d, a, v, k0).unwrap();
                            let both = c.clone().force(a, v).unwrap().force(b, v).unwrap();
                            if counter.count(&tail, &both).unwrap() == BigUint::zero() {
                                assert_eq!(tp, truth, "= {d:?} {a}{v}{b} k0={k0}");
                            } else if k0 % 2 == 1 {
                                assert!(truth <= tp, "odd {d:?} {a}{v}{b} k0={k0}");
                            } else {
                                assert!(truth >= tp, "even {d:?} {a}{v}{b} k0={k0}");
                            }
                            checked[k0 as usize - 1] += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked.iter().all(|&c| c > 50), "{checked:?}");
}
