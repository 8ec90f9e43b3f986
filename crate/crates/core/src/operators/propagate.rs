//! Weights on a set of sequences from a ratio function, by telescoping.

use std::collections::{HashMap, VecDeque};

use super::RatioFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::DegreeSequence;

#[derive(Debug, Clone)]
pub struct Propagation<S> {
    /// Same order as the input vertex list.
    pub weights: Vec<(DegreeSequence, S)>,
    /// Largest `|ln(w(x) / (w(y) r_ab(x + e_a)))|` over all edges.
    pub max_inconsistency: f64,
    pub edges: usize,
}

/// Directed edges `(x, y, a, b)` with `x = d − e_a`, `y = d − e_b`, both in the set.
pub fn sequence_graph_edges(vertices: &[DegreeSequence]) -> Vec<(usize, usize, usize, usize)> {
    let index: HashMap<&DegreeSequence, usize> = vertices.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut out = Vec::new();
    for (xi, x) in vertices.iter().enumerate() {
        for b in 0..x.n() {
            if x.get(b) == 0 {
                continue;
            }
            for a in 0..x.n() {
                if a == b {
                    continue;
                }
                let y = x.shifted(&[(a, 1), (b, -1)]).expect("x_b > 0");
                if let Some(&yi) = index.get(&y) {
                    out.push((xi, yi, a, b));
                }
            }
        }
    }
    out
}

/// Assigns `w(reference) = 1` and `w(x)/w(y) = r_ab(d)` along a BFS tree, then
/// reports how far the remaining edges are from consistent.
pub fn ratio_propagate<S: Scalar>(
    vertices: &[DegreeSequence],
    r: &dyn RatioFunction<S>,
    reference: &DegreeSequence,
) -> Result<Propagation<S>> {
    let root = vertices
        .iter()
        .position(|d| d == reference)
        .ok_or_else(|| Error::invalid("reference sequence not among the vertices"))?;
    let edges = sequence_graph_edges(vertices);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (k, &(x, y, _, _)) in edges.iter().enumerate() {
        adj[x].push(k);
        adj[y].push(k);
    }
    // Component labels first, so a disconnected graph fails before any evaluation.
    let mut comp = vec![usize::MAX; vertices.len()];
    let mut ncomp = 0;
    for s in 0..vertices.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &k in &adj[u] {
                let (x, y, _, _) = edges[k];
                let w = if x == u { y } else { x };
                if comp[w] == usize::MAX {
                    comp[w] = ncomp;
                    q.push_back(w);
                }
            }
        }
        ncomp += 1;
    }
    if ncomp > 1 {
        let mut components = vec![Vec::new(); ncomp];
        for (i, d) in vertices.iter().enumerate() {
            components[comp[i]].push(d.to_signed());
        }
        return Err(Error::Disconnected { components });
    }
    let ratio = |k: usize| -> Result<S> {
        let (x, _, a, b) = edges[k];
        let d = vertices[x].shifted(&[(a, 1)]).expect("increment");
        r.value(a, b, &d)
    };
    let mut w: Vec<Option<S>> = vec![None; vertices.len()];
    w[root] = Some(S::one());
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        let wu = w[u].clone().expect("visited");
        for &k in &adj[u] {
            let (x, y, _, _) = edges[k];
            let (other, forward) = if x == u { (y, true) } else { (x, false) };
            if w[other].is_some() {
                continue;
            }
            let rv = ratio(k)?;
            if rv.is_zero() {
                return Err(Error::singular("zero ratio on a propagation edge", &vertices[x].to_signed()));
            }
            // w(x) = w(y) · r
            w[other] = Some(if forward { wu.div(&rv) } else { wu.mul(&rv) });
            q.push_back(other);
        }
    }
    let w: Vec<S> = w.into_iter().map(|x| x.expect("connected")).collect();
    let mut worst = 0.0f64;
    for (k, &(x, y, _, _)) in edges.iter().enumerate() {
        let predicted = w[y].mul(&ratio(k)?);
        worst = worst.max(super::log_distance(&w[x], &predicted));
    }
    Ok(Propagation {
        weights: vertices.iter().cloned().zip(w).collect(),
        max_inconsistency: worst,
        edges: edges.len(),
    })
}
