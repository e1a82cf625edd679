//! Standard finite spaces used throughout the examples and checks.

use crate::metric::{FiniteMetricSpace, Norm, ProductMetric};

/// `n` points, all pairwise distances `t` (the graph `tK_n`).
pub fn uniform(n: usize, t: f64) -> FiniteMetricSpace {
    let mut dist = vec![t; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    FiniteMetricSpace::from_parts((0..n).map(|i| i.to_string()).collect(), dist, false)
}

/// `n` points, pairwise infinitely far apart.
pub fn discrete(n: usize) -> FiniteMetricSpace {
    uniform(n, f64::INFINITY)
}

/// The graph `tK_{n,m}`: `a_i`–`b_j` at distance `t`, same-side pairs at `2t`.
pub fn complete_bipartite(n: usize, m: usize, t: f64) -> FiniteMetricSpace {
    let vs: Vec<String> = (0..n).map(|i| format!("a{i}")).chain((0..m).map(|j| format!("b{j}"))).collect();
    let mut es = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            es.push((format!("a{i}"), format!("b{j}"), None));
        }
    }
    FiniteMetricSpace::from_graph(&vs, &es, t).expect("valid bipartite graph")
}

/// `K_{3,3}` with the three edges `b_i b_j` added, edges of length `t`.
pub fn k33_plus_triangle(t: f64) -> FiniteMetricSpace {
    let vs = ["a0", "a1", "a2", "b0", "b1", "b2"];
    let mut es = Vec::new();
    for a in &vs[..3] {
        for b in &vs[3..] {
            es.push((*a, *b, None));
        }
    }
    es.extend([("b0", "b1", None), ("b0", "b2", None), ("b1", "b2", None)]);
    FiniteMetricSpace::from_graph(&vs, &es, t).expect("valid graph")
}

/// The four-vertex Y-shaped graph (a centre joined to three leaves).
pub fn y_graph(t: f64) -> FiniteMetricSpace {
    FiniteMetricSpace::from_graph(&["c", "x", "y", "z"], &[("c", "x", None), ("c", "y", None), ("c", "z", None)], t)
        .expect("valid graph")
}

/// Finite subset of the real line.
pub fn real_line(points: &[f64]) -> crate::error::Result<FiniteMetricSpace> {
    FiniteMetricSpace::from_points(&points.iter().map(|x| vec![*x]).collect::<Vec<_>>(), Norm::L2)
}

/// `F_q^N` with the Hamming metric, built as an `N`-fold sum-tensor power.
pub fn hamming(q: usize, len: u32) -> FiniteMetricSpace {
    let letter = uniform(q, 1.0);
    let mut space = uniform(1, 1.0);
    for _ in 0..len {
        space = space.tensor_product(&letter, ProductMetric::Sum);
    }
    space
}

/// A chain `0 < 1 < … < n−1` as a generalized space.
pub fn chain(n: usize) -> FiniteMetricSpace {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let covers: Vec<(String, String)> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    FiniteMetricSpace::from_poset(&names, &covers).expect("chains are acyclic")
}

/// An antichain on `n` elements.
pub fn antichain(n: usize) -> FiniteMetricSpace {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FiniteMetricSpace::from_poset::<String>(&names, &[]).expect("no relations")
}
