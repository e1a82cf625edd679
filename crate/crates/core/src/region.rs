//! Compact regions of ℝᴺ that the approximation routines know how to grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::Norm;

const INSIDE_TOL: f64 = 1e-12;

/// Shape of a compact region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Sorted, disjoint closed intervals `[a, b]` of ℝ; `a == b` is an
    /// isolated point.
    IntervalUnion { components: Vec<[f64; 2]> },
    /// `[0, ℓ₁] × … × [0, ℓ_N]`.
    Cuboid { sides: Vec<f64> },
    /// Euclidean ball of the given radius in ℝ^dim, centred at the origin.
    Ball { radius: f64, dim: usize },
    /// Simple polygon in the plane, vertices in order.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Cartesian product of shapes.
    Product { factors: Vec<Shape> },
}

/// A shape together with the norm (`p = 1` or `p = 2`) metrizing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default = "default_p")]
    pub p: u8,
}

fn default_p() -> u8 {
    2
}

impl RegionSpec {
    pub fn new(shape: Shape, p: u8) -> Result<Self> {
        let r = RegionSpec { shape, p };
        r.validate()?;
        Ok(r)
    }

    pub fn interval(length: f64, p: u8) -> Result<Self> {
        if length < 0.0 {
            return Err(Error::NegativeLength(length));
        }
        Self::new(Shape::IntervalUnion { components: vec![[0.0, length]] }, p)
    }

    pub fn cuboid(sides: &[f64], p: u8) -> Result<Self> {
        Self::new(Shape::Cuboid { sides: sides.to_vec() }, p)
    }

    pub fn ball(radius: f64, dim: usize, p: u8) -> Result<Self> {
        Self::new(Shape::Ball { radius, dim }, p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: RegionSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("regions serialize")
    }

    pub fn norm(&self) -> Norm {
        if self.p == 1 {
            Norm::L1
        } else {
            Norm::L2
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p != 1 && self.p != 2 {
            return Err(Error::MalformedRegion(format!("p must be 1 or 2, got {}", self.p)));
        }
        self.shape.validate()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn volume(&self) -> f64 {
        self.shape.volume()
    }
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn on_segment(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    cross.abs() <= INSIDE_TOL * len.max(1.0)
        && x[0] >= a[0].min(b[0]) - INSIDE_TOL
        && x[0] <= a[0].max(b[0]) + INSIDE_TOL
        && x[1] >= a[1].min(b[1]) - INSIDE_TOL
        && x[1] <= a[1].max(b[1]) + INSIDE_TOL
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::IntervalUnion { components } => {
                for c in components {
                    if !(c[0] <= c[1]) || !c[0].is_finite() || !c[1].is_finite() {
                        return Err(Error::MalformedRegion(format!("bad interval [{}, {}]", c[0], c[1])));
                    }
                }
                if components.windows(2).any(|w| !(w[1][0] > w[0][1])) {
                    return Err(Error::MalformedRegion("intervals must be sorted and disjoint".into()));
                }
            }
            Shape::Cuboid { sides } => {
                if let Some(s) = sides.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
                    return Err(Error::MalformedRegion(format!("cuboid side {s} is negative")));
                }
            }
            Shape::Ball { radius, dim } => {
                if !(*radius >= 0.0) || !radius.is_finite() || *dim == 0 {
                    return Err(Error::MalformedRegion("ball needs radius ≥ 0 and dim ≥ 1".into()));
                }
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::MalformedRegion("polygon needs at least 3 vertices".into()));
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if !adjacent
                            && segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n])
                        {
                            return Err(Error::MalformedRegion("polygon is not simple".into()));
                        }
                    }
                }
                if polygon_area(vertices) == 0.0 {
                    return Err(Error::MalformedRegion("polygon is degenerate".into()));
                }
            }
            Shape::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::MalformedRegion("product of no factors".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::IntervalUnion { .. } => 1,
            Shape::Cuboid { sides } => sides.len(),
            Shape::Ball { dim, .. } => *dim,
            Shape::Polygon { .. } => 2,
            Shape::Product { factors } => factors.iter().map(Shape::dim).sum(),
        }
    }

    /// Lebesgue measure in ℝ^dim.
    pub fn volume(&self) -> f64 {
        match self {
            Shape::IntervalUnion { components } => components.iter().map(|c| c[1] - c[0]).sum(),
            Shape::Cuboid { sides } => sides.iter().product(),
            Shape::Ball { radius, dim } => unit_ball_volume(*dim) * radius.powi(*dim as i32),
            Shape::Polygon { vertices } => polygon_area(vertices),
            Shape::Product { factors } => factors.iter().map(Shape::volume).product(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Shape::IntervalUnion { components } => components.is_empty(),
            Shape::Product { factors } => factors.iter().any(Shape::is_empty),
            _ => false,
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Shape::IntervalUnion { components } => (
                vec![components.first().map_or(0.0, |c| c[0])],
                vec![components.last().map_or(0.0, |c| c[1])],
            ),
            Shape::Cuboid { sides } => (vec![0.0; sides.len()], sides.clone()),
            Shape::Ball { radius, dim } => (vec![-radius; *dim], vec![*radius; *dim]),
            Shape::Polygon { vertices } => {
                let lo = [0, 1].map(|k| vertices.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min));
                let hi = [0, 1].map(|k| vertices.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max));
                (lo.to_vec(), hi.to_vec())
            }
            Shape::Product { factors } => {
                let (mut lo, mut hi) = (Vec::new(), Vec::new());
                for f in factors {
                    let (l, h) = f.bounding_box();
                    lo.extend(l);
                    hi.extend(h);
                }
                (lo, hi)
            }
        }
    }

    /// Closed-set membership, with boundary points counted as inside.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Shape::IntervalUnion { components } => {
                components.iter().any(|c| x[0] >= c[0] - INSIDE_TOL && x[0] <= c[1] + INSIDE_TOL)
            }
            Shape::Cuboid { sides } => {
                x.iter().zip(sides).all(|(xi, s)| *xi >= -INSIDE_TOL && *xi <= s + INSIDE_TOL)
            }
            Shape::Ball { radius, .. } => {
                x.iter().map(|v| v * v).sum::<f64>().sqrt() <= radius * (1.0 + INSIDE_TOL) + INSIDE_TOL
            }
            Shape::Polygon { vertices } => {
                let p = [x[0], x[1]];
                let n = vertices.len();
                if (0..n).any(|i| on_segment(p, vertices[i], vertices[(i + 1) % n])) {
                    return true;
                }
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let xc = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                        if p[0] < xc {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            Shape::Product { factors } => {
                let mut offset = 0;
                factors.iter().all(|f| {
                    let d = f.dim();
                    let ok = f.contains(&x[offset..offset + d]);
                    offset += d;
                    ok
                })
            }
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Shape::IntervalUnion { components } => components.len() <= 1,
            Shape::Cuboid { .. } | Shape::Ball { .. } => true,
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut sign = 0.0;
                for i in 0..n {
                    let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
                    let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                    if cross != 0.0 {
                        if sign != 0.0 && cross.signum() != sign {
                            return false;
                        }
                        sign = cross.signum();
                    }
                }
                true
            }
            Shape::Product { factors } => factors.iter().all(Shape::is_convex),
        }
    }
}

/// `ω_N`, the volume of the unit Euclidean `N`-ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    // ω_0 = 1, ω_1 = 2, ω_N = 2π/N · ω_{N−2}.
    let mut w = [1.0, 2.0];
    if n < 2 {
        return w[n];
    }
    for k in 2..=n {
        w[k % 2] *= 2.0 * std::f64::consts::PI / k as f64;
    }
    w[n % 2]
}

pub(crate) fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    twice.abs() / 2.0
}

pub(crate) fn polygon_perimeter(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
        })
        .sum()
}
