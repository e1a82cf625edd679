//! Finite (generalized) metric spaces: construction, validation, rescaling
//! and the standard ways of combining spaces.
//!
//! Distances are `f64` with `f64::INFINITY` standing for an infinite
//! distance. A *generalized* space may be asymmetric and may have distinct
//! points at distance zero; posets are the main source of these.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Relative tolerance for triangle-inequality and additivity checks.
pub const METRIC_TOL: f64 = 1e-9;

/// `x ≤ y` up to [`METRIC_TOL`], with `∞` handled exactly.
#[inline]
pub(crate) fn approx_le(x: f64, y: f64) -> bool {
    if y == f64::INFINITY {
        return true;
    }
    if x == f64::INFINITY {
        return false;
    }
    x <= y + METRIC_TOL * y.abs().max(1.0)
}

#[inline]
pub(crate) fn approx_eq(x: f64, y: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        return x == y;
    }
    (x - y).abs() <= METRIC_TOL * x.abs().max(y.abs()).max(1.0)
}

/// Norm used to metrize points of ℝᴺ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
        match self {
            Norm::L1 => diffs.sum(),
            Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Norm::LInf => diffs.fold(0.0, f64::max),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "inf" | "linf" => Ok(Norm::LInf),
            other => Err(Error::Parse(format!("unknown norm {other:?}"))),
        }
    }
}

/// How distances combine in a tensor product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMetric {
    /// `d_A + d_B`; the product magnitude is multiplicative for this one.
    Sum,
    /// `max(d_A, d_B)`.
    Max,
}

/// A finite metric space given by its full distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    symmetric: bool,
    generalized: bool,
}

/// A space viewed at scale `t`, without copying the distances.
#[derive(Clone, Copy, Debug)]
pub struct ScaledSpace<'a> {
    pub base: &'a FiniteMetricSpace,
    pub t: f64,
}

impl ScaledSpace<'_> {
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let d = self.base.distance(a, b);
        if d == 0.0 {
            0.0
        } else {
            self.t * d
        }
    }

    pub fn to_space(&self) -> FiniteMetricSpace {
        self.base.scale_unchecked(self.t)
    }
}

/// Result of a projection search: `projector[i]` is the gate chosen for the
/// `i`-th point of `A`, if one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionCheck {
    pub holds: bool,
    pub projector: Vec<(usize, Option<usize>)>,
}

impl FiniteMetricSpace {
    /// The empty space.
    pub fn empty() -> Self {
        FiniteMetricSpace { labels: Vec::new(), dist: Vec::new(), symmetric: true, generalized: false }
    }

    /// Builds a space from trusted data. Callers guarantee the axioms.
    pub(crate) fn from_parts(labels: Vec<String>, dist: Vec<f64>, generalized: bool) -> Self {
        let n = labels.len();
        debug_assert_eq!(dist.len(), n * n);
        let symmetric = (0..n).all(|i| (0..i).all(|j| dist[i * n + j] == dist[j * n + i]));
        FiniteMetricSpace { labels, dist, symmetric, generalized }
    }

    fn default_labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// Validates a square matrix of distances (`∞` allowed).
    pub fn from_distance_matrix(rows: &[Vec<f64>], generalized: bool) -> Result<Self> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, row: r, cols: row.len() });
            }
        }
        let dist: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::validate(n, &dist, generalized)?;
        Ok(Self::from_parts(Self::default_labels(n), dist, generalized))
    }

    fn validate(n: usize, dist: &[f64], generalized: bool) -> Result<()> {
        for a in 0..n {
            for b in 0..n {
                let v = dist[a * n + b];
                if v.is_nan() || v < 0.0 {
                    return Err(Error::NegativeDistance { a, b, value: v });
                }
                if a == b && v != 0.0 {
                    return Err(Error::NonzeroDiagonal { a, value: v });
                }
                if a != b && v == 0.0 && !generalized {
                    return Err(Error::ZeroOffDiagonal { a, b });
                }
                if !generalized && !approx_eq(v, dist[b * n + a]) {
                    return Err(Error::AsymmetricDistance { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = dist[a * n + b];
                if ab == f64::INFINITY {
                    continue;
                }
                for c in 0..n {
                    if !approx_le(dist[a * n + c], ab + dist[b * n + c]) {
                        return Err(Error::TriangleViolation { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces the point labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Points of ℝᴺ under the given norm. Coincident points are rejected.
    pub fn from_points(coords: &[Vec<f64>], norm: Norm) -> Result<Self> {
        let dim = coords.first().map_or(0, Vec::len);
        for (index, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { index, expected: dim, found: c.len() });
            }
        }
        let n = coords.len();
        let mut dist = vec![0.0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let d = norm.distance(&coords[a], &coords[b]);
                if d == 0.0 {
                    return Err(Error::ZeroOffDiagonal { a, b });
                }
                dist[a * n + b] = d;
                dist[b * n + a] = d;
            }
        }
        Ok(FiniteMetricSpace { labels: Self::default_labels(n), dist, symmetric: true, generalized: false })
    }

    /// Shortest-path metric of an undirected graph. Edges carry an optional
    /// length; `None` means `default_length`. Unreachable pairs are at `∞`.
    pub fn from_graph<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S, Option<f64>)],
        default_length: f64,
    ) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let n = labels.len();
        let mut dist = vec![f64::INFINITY; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
        }
        for (u, v, len) in edges {
            let len = len.unwrap_or(default_length);
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::NonpositiveLength(len));
            }
            let i = *index.get(u.as_ref()).ok_or_else(|| Error::UnknownLabel(u.as_ref().into()))?;
            let j = *index.get(v.as_ref()).ok_or_else(|| Error::UnknownLabel(v.as_ref().into()))?;
            if i == j {
                continue;
            }
            let d = dist[i * n + j].min(len);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
        // Floyd–Warshall.
        for k in 0..n {
            for i in 0..n {
                let ik = dist[i * n + k];
                if ik == f64::INFINITY {
                    continue;
                }
                for j in 0..n {
                    let via = ik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist, symmetric: true, generalized: false })
    }

    /// A poset as a generalized space: `d(a, b) = 0` when `a ≤ b` in the
    /// transitive closure of `covers`, `∞` otherwise.
    pub fn from_poset<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = elements.iter().map(|v| v.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        for (lo, hi) in covers {
            let i = *index.get(lo.as_ref()).ok_or_else(|| Error::UnknownLabel(lo.as_ref().into()))?;
            let j = *index.get(hi.as_ref()).ok_or_else(|| Error::UnknownLabel(hi.as_ref().into()))?;
            if i == j {
                return Err(Error::CycleDetected(labels[i].clone()));
            }
            succ[i].push(j);
        }
        let mut dist = vec![f64::INFINITY; n * n];
        for s in 0..n {
            let mut stack = vec![s];
            dist[s * n + s] = 0.0;
            while let Some(x) = stack.pop() {
                for &y in &succ[x] {
                    if y == s {
                        return Err(Error::CycleDetected(labels[s].clone()));
                    }
                    if dist[s * n + y] != 0.0 {
                        dist[s * n + y] = 0.0;
                        stack.push(y);
                    }
                }
            }
        }
        Ok(Self::from_parts(labels, dist, true))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.len() + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let n = self.len();
        &self.dist[a * n..(a + 1) * n]
    }

    pub fn distance_rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    /// Largest distance (`∞` if some pair is infinitely far apart, 0 when
    /// there are fewer than two points).
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest distance between distinct points (`∞` for < 2 points).
    pub fn separation(&self) -> f64 {
        let n = self.len();
        let mut m = f64::INFINITY;
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    m = m.min(self.distance(a, b));
                }
            }
        }
        m
    }

    /// Multiplies every distance by `t > 0`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonpositiveScale(t));
        }
        Ok(self.scale_unchecked(t))
    }

    pub(crate) fn scale_unchecked(&self, t: f64) -> Self {
        let dist = self.dist.iter().map(|&d| if d == 0.0 { 0.0 } else { t * d }).collect();
        FiniteMetricSpace { labels: self.labels.clone(), dist, symmetric: self.symmetric, generalized: self.generalized }
    }

    pub fn scaled(&self, t: f64) -> Result<ScaledSpace<'_>> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonpositiveScale(t));
        }
        Ok(ScaledSpace { base: self, t })
    }

    /// Subspace on the given point indices, in the given order.
    pub fn subspace(&self, points: &[usize]) -> Self {
        let labels = points.iter().map(|&i| self.labels[i].clone()).collect();
        let mut dist = Vec::with_capacity(points.len() * points.len());
        for &a in points {
            for &b in points {
                dist.push(self.distance(a, b));
            }
        }
        Self::from_parts(labels, dist, self.generalized)
    }

    /// Cartesian product; point `(i, j)` sits at index `i * #B + j`.
    pub fn tensor_product(&self, other: &Self, metric: ProductMetric) -> Self {
        let (na, nb) = (self.len(), other.len());
        let n = na * nb;
        let mut labels = Vec::with_capacity(n);
        for la in &self.labels {
            for lb in &other.labels {
                labels.push(format!("({la},{lb})"));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..na {
            for j in 0..nb {
                let row = (i * nb + j) * n;
                for k in 0..na {
                    let da = self.distance(i, k);
                    for l in 0..nb {
                        let db = other.distance(j, l);
                        dist[row + k * nb + l] = match metric {
                            ProductMetric::Sum => da + db,
                            ProductMetric::Max => da.max(db),
                        };
                    }
                }
            }
        }
        FiniteMetricSpace {
            labels,
            dist,
            symmetric: self.symmetric && other.symmetric,
            generalized: self.generalized || other.generalized,
        }
    }

    /// Disjoint union with every cross distance `cross`.
    fn join(&self, other: &Self, cross: f64) -> Self {
        let (na, nb) = (self.len(), other.len());
        let n = na + nb;
        let mut dist = vec![cross; n * n];
        for i in 0..na {
            dist[i * n..i * n + na].copy_from_slice(self.row(i));
        }
        for j in 0..nb {
            let r = (na + j) * n + na;
            dist[r..r + nb].copy_from_slice(other.row(j));
        }
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        FiniteMetricSpace {
            labels,
            dist,
            symmetric: self.symmetric && other.symmetric,
            generalized: self.generalized || other.generalized,
        }
    }

    /// Coproduct: the two spaces infinitely far apart.
    pub fn distant_union(&self, other: &Self) -> Self {
        self.join(other, f64::INFINITY)
    }

    /// `A +_D B`: disjoint union with all cross distances equal to `d`.
    pub fn constant_distance_glue(&self, other: &Self, d: f64) -> Result<Self> {
        let required = self.diameter().max(other.diameter()) / 2.0;
        if !(d > 0.0) || !d.is_finite() || !approx_le(required, d) {
            return Err(Error::GlueDistanceTooSmall { distance: d, required });
        }
        Ok(self.join(other, d))
    }

    /// Searches, for every `a ∈ A`, a gate `π(a) ∈ A ∩ B` with
    /// `d(a, b) = d(a, π(a)) + d(π(a), b)` for all `b ∈ B`. A point of the
    /// intersection is tried as its own gate first.
    pub fn check_projection(&self, a: &[usize], b: &[usize]) -> ProjectionCheck {
        let inter: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
        let projector: Vec<(usize, Option<usize>)> = a
            .iter()
            .map(|&x| {
                let is_gate = |c: usize| {
                    b.iter().all(|&y| approx_eq(self.distance(x, y), self.distance(x, c) + self.distance(c, y)))
                };
                let own = inter.contains(&x).then_some(x).filter(|&c| is_gate(c));
                (x, own.or_else(|| inter.iter().copied().find(|&c| is_gate(c))))
            })
            .collect();
        ProjectionCheck { holds: projector.iter().all(|(_, p)| p.is_some()), projector }
    }

    /// Exhaustive check that `pmap: self → base` is a metric fibration.
    pub fn check_fibration(&self, base: &Self, pmap: &[usize]) -> bool {
        let n = self.len();
        if pmap.len() != n || pmap.iter().any(|&b| b >= base.len()) {
            return false;
        }
        for a in 0..n {
            for a2 in 0..n {
                if !approx_le(base.distance(pmap[a], pmap[a2]), self.distance(a, a2)) {
                    return false;
                }
            }
        }
        let mut fibres = vec![Vec::new(); base.len()];
        for (a, &b) in pmap.iter().enumerate() {
            fibres[b].push(a);
        }
        for a in 0..n {
            for (b2, fibre) in fibres.iter().enumerate() {
                let db = base.distance(pmap[a], b2);
                if db == f64::INFINITY {
                    continue;
                }
                let lifted = fibre.iter().any(|&lift| {
                    fibre.iter().all(|&a2| approx_eq(self.distance(a, a2), db + self.distance(lift, a2)))
                });
                if !lifted {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ultrametric(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| approx_le(self.distance(a, c), self.distance(a, b).max(self.distance(b, c)))))
        })
    }

    /// Every distance between distinct points exceeds `log(#A − 1)`.
    pub fn is_scattered(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        self.separation() > ((n - 1) as f64).ln()
    }

    /// Whether the isometry group acts transitively.
    pub fn is_homogeneous(&self) -> bool {
        crate::isometry::is_homogeneous(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> Vec<Vec<f64>> {
        v.iter().map(|x| vec![*x]).collect()
    }

    #[test]
    fn distance_matrix_validation() {
        let one = FiniteMetricSpace::from_distance_matrix(&[vec![0.0]], false).unwrap();
        assert_eq!(one.len(), 1);
        let two = FiniteMetricSpace::from_distance_matrix(&[vec![0.0, 2.5], vec![2.5, 0.0]], false).unwrap();
        assert!(two.is_symmetric());
        let bad = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_distance_matrix(&bad, false),
            Err(Error::TriangleViolation { .. })
        ));
        let neg = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_distance_matrix(&neg, false),
            Err(Error::NegativeDistance { .. })
        ));
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_distance_matrix(&zero, false),
            Err(Error::ZeroOffDiagonal { .. })
        ));
        assert!(FiniteMetricSpace::from_distance_matrix(&zero, true).is_ok());
        let ragged = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(
            FiniteMetricSpace::from_distance_matrix(&ragged, false),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn triangle_check_tolerates_rounding_and_infinity() {
        let m = vec![vec![0.0, 1.0, 2.0 + 1e-12], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        assert!(FiniteMetricSpace::from_distance_matrix(&m, true).is_ok());
        let inf = vec![vec![0.0, f64::INFINITY], vec![f64::INFINITY, 0.0]];
        let s = FiniteMetricSpace::from_distance_matrix(&inf, false).unwrap();
        assert_eq!(s.diameter(), f64::INFINITY);
    }

    #[test]
    fn point_clouds_under_each_norm() {
        let line = FiniteMetricSpace::from_points(&pts(&[0.0, 1.0, 3.0]), Norm::L2).unwrap();
        assert_eq!((line.distance(0, 1), line.distance(1, 2), line.distance(0, 2)), (1.0, 2.0, 3.0));
        let diag = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert_eq!(FiniteMetricSpace::from_points(&diag, Norm::L1).unwrap().distance(0, 1), 2.0);
        assert_eq!(FiniteMetricSpace::from_points(&diag, Norm::L2).unwrap().distance(0, 1), 2f64.sqrt());
        assert_eq!(FiniteMetricSpace::from_points(&diag, Norm::LInf).unwrap().distance(0, 1), 1.0);
        let t = 0.7;
        let star = vec![vec![0.0, 0.0], vec![t, 0.0], vec![0.0, t], vec![-t, 0.0]];
        let s = FiniteMetricSpace::from_points(&star, Norm::L1).unwrap();
        assert_eq!(s.distance(1, 3), 2.0 * t);
        assert!((s.distance(1, 2) - 2.0 * t).abs() < 1e-15);
        assert!(matches!(
            FiniteMetricSpace::from_points(&[vec![0.0], vec![0.0, 1.0]], Norm::L2),
            Err(Error::DimensionMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn graphs() {
        let k3 = FiniteMetricSpace::from_graph(&["a", "b", "c"], &[("a", "b", None), ("b", "c", None), ("a", "c", None)], 1.0)
            .unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| k3.distance(i, j) == if i == j { 0.0 } else { 1.0 })));
        let t = 0.8;
        let k32 = complete_bipartite(3, 2, t);
        assert_eq!(k32.distance(0, 3), t);
        assert_eq!(k32.distance(0, 1), 2.0 * t);
        assert_eq!(k32.distance(3, 4), 2.0 * t);
        let apart = FiniteMetricSpace::from_graph::<&str>(&["u", "v"], &[], 1.0).unwrap();
        assert_eq!(apart.distance(0, 1), f64::INFINITY);
        assert!(matches!(
            FiniteMetricSpace::from_graph(&["u", "v"], &[("u", "v", Some(0.0))], 1.0),
            Err(Error::NonpositiveLength(_))
        ));
    }

    pub(crate) fn complete_bipartite(n: usize, m: usize, t: f64) -> FiniteMetricSpace {
        let vs: Vec<String> = (0..n).map(|i| format!("a{i}")).chain((0..m).map(|j| format!("b{j}"))).collect();
        let mut es = Vec::new();
        for i in 0..n {
            for j in 0..m {
                es.push((format!("a{i}"), format!("b{j}"), None));
            }
        }
        FiniteMetricSpace::from_graph(&vs, &es, t).unwrap()
    }

    #[test]
    fn posets() {
        let anti = FiniteMetricSpace::from_poset::<&str>(&["x", "y", "z"], &[]).unwrap();
        assert!(anti.is_symmetric());
        assert!((0..3).all(|i| (0..3).all(|j| i == j || anti.distance(i, j) == f64::INFINITY)));
        let chain = FiniteMetricSpace::from_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!((chain.distance(0, 1), chain.distance(1, 0)), (0.0, f64::INFINITY));
        assert!(!chain.is_symmetric() && chain.is_generalized());
        let diamond =
            FiniteMetricSpace::from_poset(&["0", "x", "y", "1"], &[("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")]).unwrap();
        assert_eq!(diamond.distance(0, 3), 0.0);
        assert_eq!(diamond.distance(1, 2), f64::INFINITY);
        assert!(matches!(
            FiniteMetricSpace::from_poset(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::CycleDetected(_))
        ));
    }

    #[test]
    fn scaling() {
        let s = FiniteMetricSpace::from_points(&pts(&[0.0, 0.3, 1.7]), Norm::L2).unwrap();
        assert_eq!(s.scale(1.0).unwrap(), s);
        assert_eq!(s.scale(2.0).unwrap().scale(3.0).unwrap(), s.scale(6.0).unwrap());
        assert!(matches!(s.scale(0.0), Err(Error::NonpositiveScale(_))));
        let chain = FiniteMetricSpace::from_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(chain.scale(5.0).unwrap(), chain);
    }

    #[test]
    fn products_unions_and_gluing() {
        let a = FiniteMetricSpace::from_points(&pts(&[0.0, 1.0, 2.5]), Norm::L2).unwrap();
        let pt = FiniteMetricSpace::from_distance_matrix(&[vec![0.0]], false).unwrap();
        let ap = a.tensor_product(&pt, ProductMetric::Sum);
        assert_eq!(ap.distance_rows(), a.distance_rows());
        let grid = a.tensor_product(&a, ProductMetric::Sum);
        let coords: Vec<Vec<f64>> =
            [0.0, 1.0, 2.5].iter().flat_map(|&x| [0.0, 1.0, 2.5].iter().map(move |&y| vec![x, y])).collect();
        let direct = FiniteMetricSpace::from_points(&coords, Norm::L1).unwrap();
        assert_eq!(grid.distance_rows(), direct.distance_rows());

        let empty = FiniteMetricSpace::empty();
        assert_eq!(empty.distant_union(&a).distance_rows(), a.distance_rows());
        let two = pt.distant_union(&pt);
        assert_eq!(two.distance(0, 1), f64::INFINITY);

        let g = pt.constant_distance_glue(&pt, 1.5).unwrap();
        assert_eq!(g.distance(0, 1), 1.5);
        assert!(matches!(a.constant_distance_glue(&pt, 1.0), Err(Error::GlueDistanceTooSmall { .. })));
    }

    #[test]
    fn gluing_discrete_spaces_gives_bipartite_graph() {
        let t = 0.9;
        let disc = |n: usize| {
            FiniteMetricSpace::from_distance_matrix(
                &(0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 2.0 * t }).collect()).collect::<Vec<_>>(),
                false,
            )
            .unwrap()
        };
        let glued = disc(3).constant_distance_glue(&disc(2), t).unwrap();
        assert_eq!(glued.distance_rows(), complete_bipartite(3, 2, t).distance_rows());
    }

    #[test]
    fn projections() {
        let x = FiniteMetricSpace::from_points(&pts(&[0.0, 0.5, 1.0, 2.0, 3.5]), Norm::L2).unwrap();
        let (a, b) = ([0, 1, 2], [2, 3, 4]);
        let p = x.check_projection(&a, &b);
        assert!(p.holds);
        assert!(p.projector.iter().all(|(_, g)| *g == Some(2)));
        let same = x.check_projection(&a, &a);
        assert!(same.holds && same.projector.iter().all(|(i, g)| *g == Some(*i)));

        // Four points in the plane split in two overlapping halves: the
        // only intersection point is not a gate.
        let cloud = FiniteMetricSpace::from_points(
            &[vec![0.0, 0.0], vec![1.0, 0.2], vec![2.0, -0.1], vec![0.9, 1.3]],
            Norm::L2,
        )
        .unwrap();
        assert!(!cloud.check_projection(&[0, 1], &[1, 2, 3]).holds);
    }

    #[test]
    fn fibrations() {
        let base = FiniteMetricSpace::from_points(&pts(&[0.0, 1.0, 3.0]), Norm::L2).unwrap();
        let fibre = FiniteMetricSpace::from_points(&pts(&[0.0, 0.2]), Norm::L2).unwrap();
        let total = base.tensor_product(&fibre, ProductMetric::Sum);
        let proj: Vec<usize> = (0..total.len()).map(|i| i / fibre.len()).collect();
        assert!(total.check_fibration(&base, &proj));
        let id: Vec<usize> = (0..base.len()).collect();
        assert!(base.check_fibration(&base, &id));

        let k3 = FiniteMetricSpace::from_graph(&["a", "b", "c"], &[("a", "b", None), ("b", "c", None), ("a", "c", None)], 1.0)
            .unwrap();
        let two = FiniteMetricSpace::from_points(&pts(&[0.0, 1.0]), Norm::L2).unwrap();
        assert!(!k3.check_fibration(&two, &[0, 0, 1]));
    }

    #[test]
    fn metric_classes() {
        let uniform = |n: usize, t: f64| {
            FiniteMetricSpace::from_distance_matrix(
                &(0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { t }).collect()).collect::<Vec<_>>(),
                false,
            )
            .unwrap()
        };
        let u = uniform(4, 1.0);
        assert!(u.is_ultrametric() && u.is_homogeneous());
        assert!(!u.is_scattered()); // 1 < ln 3
        assert!(uniform(4, 1.2).is_scattered());
        assert!(!complete_bipartite(3, 2, 1.0).is_homogeneous());
        assert!(complete_bipartite(3, 3, 1.0).is_homogeneous());
        // Dendrogram {{0,1},{2}} with merge heights 1 and 3.
        let dendro =
            FiniteMetricSpace::from_distance_matrix(&[vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 3.0], vec![3.0, 3.0, 0.0]], false)
                .unwrap();
        assert!(dendro.is_ultrametric());
        let line = FiniteMetricSpace::from_points(&pts(&[0.0, 1.0, 2.0]), Norm::L2).unwrap();
        assert!(!line.is_ultrametric());
        assert!(!line.is_homogeneous());
    }
}
