//! Magnitude of compact regions: closed forms in ℝ and for ℓ₁-cuboids,
//! nested inner-grid approximations, intrinsic volumes and the reference
//! values they predict.

use serde::{Deserialize, Serialize};

use crate::engine::{magnitude_with, SolverOptions, Status};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::quadrature::{integrate_piecewise, Quadrature};
use crate::region::{polygon_area, polygon_perimeter, unit_ball_volume, RegionSpec, Shape};

/// Default cap on grid size.
pub const GRID_CAP: usize = 20_000;

/// Beyond this distance from the set, `sech²` is below `1e-16`.
const SECH2_TAIL: f64 = 19.0;

/// `|[0, t]| = 1 + t/2`.
pub fn interval_magnitude(t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeLength(t));
    }
    Ok(1.0 + t / 2.0)
}

fn interval_components(shape: &Shape) -> Result<&[[f64; 2]]> {
    match shape {
        Shape::IntervalUnion { components } => Ok(components),
        Shape::Cuboid { .. } | Shape::Ball { .. } | Shape::Polygon { .. } | Shape::Product { .. } => {
            Err(Error::MalformedRegion("expected an interval union".into()))
        }
    }
}

/// Magnitude of a finite union of closed intervals and points of ℝ:
/// `1 + (total length)/2 + Σ_gaps tanh(gap/2)`.
pub fn real_subset_magnitude(shape: &Shape) -> Result<f64> {
    shape.validate()?;
    let c = interval_components(shape)?;
    if c.is_empty() {
        return Ok(0.0);
    }
    let length: f64 = c.iter().map(|x| x[1] - x[0]).sum();
    let gaps: f64 = c.windows(2).map(|w| ((w[1][0] - w[0][1]) / 2.0).tanh()).sum();
    Ok(1.0 + length / 2.0 + gaps)
}

/// `½ ∫ sech²(d(x, A)) dx` by adaptive quadrature.
pub fn real_subset_quadrature(shape: &Shape, tol: f64) -> Result<Quadrature> {
    shape.validate()?;
    let c = interval_components(shape)?;
    if c.is_empty() {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let dist = |x: f64| {
        c.iter().map(|iv| if x < iv[0] { iv[0] - x } else if x > iv[1] { x - iv[1] } else { 0.0 }).fold(f64::INFINITY, f64::min)
    };
    let mut breaks = vec![c[0][0] - SECH2_TAIL];
    for (i, iv) in c.iter().enumerate() {
        if i > 0 {
            let prev = c[i - 1][1];
            breaks.push((prev + iv[0]) / 2.0);
        }
        breaks.push(iv[0]);
        if iv[1] > iv[0] {
            breaks.push(iv[1]);
        }
    }
    breaks.push(c[c.len() - 1][1] + SECH2_TAIL);
    let q = integrate_piecewise(|x| 0.5 / dist(x).cosh().powi(2), &breaks, tol);
    Ok(q)
}

/// Elementary symmetric polynomials `e_0..e_N` of `xs`.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for &x in xs {
        e.push(0.0);
        for i in (1..e.len()).rev() {
            e[i] += x * e[i - 1];
        }
    }
    e
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuboidMagnitude {
    pub magnitude: f64,
    /// `V′_0..V′_N`, the ℓ₁-intrinsic volumes.
    pub intrinsic_volumes: Vec<f64>,
}

/// Magnitude of the ℓ₁-cuboid with the given sides: `Π (1 + ℓ_r/2)`.
pub fn cuboid_magnitude(sides: &[f64]) -> Result<CuboidMagnitude> {
    if let Some(s) = sides.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::NegativeSide(*s));
    }
    Ok(CuboidMagnitude {
        magnitude: sides.iter().map(|l| 1.0 + l / 2.0).product(),
        intrinsic_volumes: elementary_symmetric(sides),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeKind {
    Euclidean,
    L1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeVector {
    pub kind: VolumeKind,
    pub values: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn shape_intrinsic_volumes(shape: &Shape, kind: VolumeKind) -> Result<Vec<f64>> {
    let unsupported = |what: &str| Err(Error::UnsupportedShape(what.into()));
    match shape {
        Shape::IntervalUnion { components } => match components.as_slice() {
            [] => Ok(vec![0.0, 0.0]),
            [iv] => Ok(vec![1.0, iv[1] - iv[0]]),
            _ => unsupported("union of several intervals is not convex"),
        },
        // Boxes: both families are the elementary symmetric polynomials of the sides.
        Shape::Cuboid { sides } => Ok(elementary_symmetric(sides)),
        Shape::Ball { radius, dim } => {
            let n = *dim;
            Ok((0..=n)
                .map(|i| match kind {
                    VolumeKind::Euclidean => {
                        binomial(n, i) * unit_ball_volume(n) / unit_ball_volume(n - i) * radius.powi(i as i32)
                    }
                    // Every i-dimensional coordinate projection is an i-ball.
                    VolumeKind::L1 => binomial(n, i) * unit_ball_volume(i) * radius.powi(i as i32),
                })
                .collect())
        }
        Shape::Polygon { vertices } => {
            if !shape.is_convex() {
                return unsupported("polygon is not convex");
            }
            let v1 = match kind {
                VolumeKind::Euclidean => polygon_perimeter(vertices) / 2.0,
                VolumeKind::L1 => {
                    let (lo, hi) = shape.bounding_box();
                    (hi[0] - lo[0]) + (hi[1] - lo[1])
                }
            };
            Ok(vec![1.0, v1, polygon_area(vertices)])
        }
        Shape::Product { factors } => {
            let mut acc = vec![1.0];
            for f in factors {
                acc = convolve(&acc, &shape_intrinsic_volumes(f, kind)?);
            }
            Ok(acc)
        }
    }
}

/// Euclidean intrinsic volumes for `p = 2`, ℓ₁-intrinsic volumes for `p = 1`.
pub fn intrinsic_volumes(region: &RegionSpec) -> Result<IntrinsicVolumeVector> {
    region.validate()?;
    let kind = if region.p == 1 { VolumeKind::L1 } else { VolumeKind::Euclidean };
    Ok(IntrinsicVolumeVector { kind, values: shape_intrinsic_volumes(&region.shape, kind)? })
}

/// Conjectured magnitude of `tA` for convex `A`: `Σ V_i tⁱ / (i! ω_i)` for
/// `p = 2`, `Σ 2^{−i} V′_i tⁱ` for `p = 1`.
pub fn conjecture_rhs(region: &RegionSpec, t: f64) -> Result<f64> {
    let iv = intrinsic_volumes(region)?;
    let mut factorial = 1.0;
    let mut total = 0.0;
    for (i, v) in iv.values.iter().enumerate() {
        if i > 0 {
            factorial *= i as f64;
        }
        let c = match iv.kind {
            VolumeKind::Euclidean => 1.0 / (factorial * unit_ball_volume(i)),
            VolumeKind::L1 => 0.5f64.powi(i as i32),
        };
        total += c * v * t.powi(i as i32);
    }
    Ok(total)
}

/// Volume lower bound on `|tA|`: `tᴺ Vol / (N! ω_N)` for `p = 2`,
/// `tᴺ 2^{−N} Vol` for `p = 1`.
pub fn volume_lower_bound(region: &RegionSpec, t: f64) -> Result<f64> {
    region.validate()?;
    if region.shape.is_empty() {
        return Ok(0.0);
    }
    let n = region.dim();
    let vol = region.volume() * t.powi(n as i32);
    Ok(match region.p {
        1 => vol * 0.5f64.powi(n as i32),
        _ => vol / ((1..=n).map(|k| k as f64).product::<f64>() * unit_ball_volume(n)),
    })
}

fn scale_shape(shape: &Shape, t: f64) -> Shape {
    match shape {
        Shape::IntervalUnion { components } => {
            Shape::IntervalUnion { components: components.iter().map(|c| [c[0] * t, c[1] * t]).collect() }
        }
        Shape::Cuboid { sides } => Shape::Cuboid { sides: sides.iter().map(|s| s * t).collect() },
        Shape::Ball { radius, dim } => Shape::Ball { radius: radius * t, dim: *dim },
        Shape::Polygon { vertices } => Shape::Polygon { vertices: vertices.iter().map(|v| [v[0] * t, v[1] * t]).collect() },
        Shape::Product { factors } => Shape::Product { factors: factors.iter().map(|f| scale_shape(f, t)).collect() },
    }
}

fn shape_closed_form(shape: &Shape, p: u8) -> Option<f64> {
    match shape {
        Shape::IntervalUnion { .. } => real_subset_magnitude(shape).ok(),
        Shape::Cuboid { sides } if p == 1 || sides.len() <= 1 => cuboid_magnitude(sides).ok().map(|c| c.magnitude),
        Shape::Ball { radius, dim: 1 } => Some(1.0 + radius),
        Shape::Product { factors } if p == 1 || factors.iter().filter(|f| f.dim() > 0).count() <= 1 => {
            factors.iter().map(|f| shape_closed_form(f, p)).product()
        }
        _ => None,
    }
}

/// Exact magnitude of `tA` when a closed form exists: subsets of ℝ and
/// ℓ₁ products of them.
pub fn closed_form(region: &RegionSpec, t: f64) -> Option<f64> {
    region.validate().ok()?;
    shape_closed_form(&scale_shape(&region.shape, t), region.p)
}

/// Inclusion–exclusion `|A ∪ B| = |A| + |B| − |A ∩ B|` for interval unions
/// of ℝ, after checking that `A` projects to `B` and `B` to `A`.
pub fn compact_union_magnitude(a: &Shape, b: &Shape) -> Result<f64> {
    let ca = interval_components(a).map_err(|_| Error::UnsupportedRegion("union needs interval unions".into()))?;
    let cb = interval_components(b).map_err(|_| Error::UnsupportedRegion("union needs interval unions".into()))?;
    a.validate()?;
    b.validate()?;
    let inter = intersect(ca, cb);
    if !(projects(ca, cb, &inter) && projects(cb, ca, &inter)) {
        return Err(Error::ProjectionFails);
    }
    let m = |c: Vec<[f64; 2]>| real_subset_magnitude(&Shape::IntervalUnion { components: c });
    Ok(m(ca.to_vec())? + m(cb.to_vec())? - m(inter)?)
}

/// Union of two interval unions, merging touching components.
pub fn union_components(a: &[[f64; 2]], b: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut all: Vec<[f64; 2]> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x[0].total_cmp(&y[0]));
    let mut out: Vec<[f64; 2]> = Vec::new();
    for iv in all {
        match out.last_mut() {
            Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
            _ => out.push(iv),
        }
    }
    out
}

fn intersect(a: &[[f64; 2]], b: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let (lo, hi) = (x[0].max(y[0]), x[1].min(y[1]));
            if lo <= hi {
                out.push([lo, hi]);
            }
        }
    }
    out.sort_by(|x, y| x[0].total_cmp(&y[0]));
    out
}

fn contains_point(c: &[[f64; 2]], x: f64) -> bool {
    c.iter().any(|iv| iv[0] <= x && x <= iv[1])
}

/// In ℝ, `A` projects to `B` when the part of `A` inside the hull of `B`
/// lies in `B` and the hull endpoints of `B` facing `A ∖ B` belong to `A`.
fn projects(a: &[[f64; 2]], b: &[[f64; 2]], inter: &[[f64; 2]]) -> bool {
    let (Some(first), Some(last)) = (b.first(), b.last()) else {
        return false;
    };
    let (lo, hi) = (first[0], last[1]);
    let clipped = intersect(a, &[[lo, hi]]);
    let inside_ok = clipped.iter().all(|iv| inter.iter().any(|j| j[0] <= iv[0] && iv[1] <= j[1]));
    let left_ok = !a.iter().any(|iv| iv[0] < lo) || contains_point(a, lo);
    let right_ok = !a.iter().any(|iv| iv[1] > hi) || contains_point(a, hi);
    inside_ok && left_ok && right_ok
}

/// Grid of `[a, b]` with spacing `delta` anchored at `a`, plus `b`.
fn interval_grid(a: f64, b: f64, delta: f64) -> Vec<f64> {
    let steps = ((b - a) / delta + 1e-9).floor() as usize;
    let mut xs: Vec<f64> = (0..=steps).map(|k| a + k as f64 * delta).filter(|x| *x <= b).collect();
    let gap_tol = 1e-9 * delta;
    if xs.last().map_or(true, |x| b - x > gap_tol) {
        xs.push(b);
    } else if let Some(x) = xs.last_mut() {
        *x = b;
    }
    xs
}

fn cartesian(parts: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(out.len() * part.len());
        for prefix in &out {
            for p in part {
                let mut x = prefix.clone();
                x.extend_from_slice(p);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

fn count_or_cap(n: usize, cap: usize) -> Result<usize> {
    if n > cap {
        Err(Error::GridTooLarge { points: n, cap })
    } else {
        Ok(n)
    }
}

/// Inner grid points of `shape` at spacing `delta`. Grids at `delta/2ᵏ`
/// contain the grid at `delta`.
pub fn grid_points(shape: &Shape, delta: f64, cap: usize) -> Result<Vec<Vec<f64>>> {
    if !(delta > 0.0) {
        return Err(Error::NonNestedResolutions);
    }
    match shape {
        Shape::IntervalUnion { components } => {
            let mut pts = Vec::new();
            for c in components {
                let anchor = components[0][0];
                let start = ((c[0] - anchor) / delta - 1e-9).ceil().max(0.0);
                let mut xs = vec![c[0]];
                let mut k = start;
                loop {
                    let x = anchor + k * delta;
                    if x > c[1] + 1e-9 * delta {
                        break;
                    }
                    if x - c[0] > 1e-9 * delta && c[1] - x > 1e-9 * delta {
                        xs.push(x);
                    }
                    k += 1.0;
                    count_or_cap(pts.len() + xs.len(), cap)?;
                }
                if c[1] > c[0] {
                    xs.push(c[1]);
                }
                pts.extend(xs.into_iter().map(|x| vec![x]));
            }
            Ok(pts)
        }
        Shape::Cuboid { sides } => {
            let axes: Vec<Vec<Vec<f64>>> =
                sides.iter().map(|s| interval_grid(0.0, *s, delta).into_iter().map(|x| vec![x]).collect()).collect();
            count_or_cap(axes.iter().map(Vec::len).product(), cap)?;
            Ok(cartesian(&axes))
        }
        Shape::Product { factors } => {
            let parts = factors.iter().map(|f| grid_points(f, delta, cap)).collect::<Result<Vec<_>>>()?;
            count_or_cap(parts.iter().map(Vec::len).product(), cap)?;
            Ok(cartesian(&parts))
        }
        Shape::Ball { .. } | Shape::Polygon { .. } => {
            let (lo, hi) = shape.bounding_box();
            // Anchored at a point of the region so no grid is empty.
            let anchor = match shape {
                Shape::Polygon { vertices } => vertices[0].to_vec(),
                _ => vec![0.0; lo.len()],
            };
            let first: Vec<f64> =
                lo.iter().zip(&anchor).map(|(l, a)| a + ((l - a) / delta - 1e-9).ceil() * delta).collect();
            let counts: Vec<usize> =
                first.iter().zip(&hi).map(|(f, h)| ((h - f) / delta + 1e-9).floor() as usize + 1).collect();
            let boxed: usize = counts.iter().product();
            // The region fills at least a few percent of its bounding box.
            count_or_cap(boxed, cap.saturating_mul(64))?;
            let mut pts = Vec::new();
            let mut idx = vec![0usize; counts.len()];
            loop {
                let x: Vec<f64> = idx.iter().zip(&first).map(|(k, f)| f + *k as f64 * delta).collect();
                if shape.contains(&x) {
                    pts.push(x);
                    count_or_cap(pts.len(), cap)?;
                }
                let mut i = 0;
                loop {
                    if i == idx.len() {
                        return Ok(pts);
                    }
                    idx[i] += 1;
                    if idx[i] < counts[i] {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub cap: usize,
    pub solver: SolverOptions,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { cap: GRID_CAP, solver: SolverOptions { eigenvalues: false, ..SolverOptions::default() } }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationRow {
    pub delta: f64,
    pub n_points: usize,
    pub magnitude: Option<f64>,
    pub status: Status,
}

/// Lower estimates of `|tA|` from nested inner grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub region: RegionSpec,
    pub t: f64,
    pub rows: Vec<ApproximationRow>,
    /// Richardson estimate assuming error `∝ δ`; an estimate, not a bound.
    pub extrapolated: Option<f64>,
    pub closed_form: Option<f64>,
    pub conjecture_rhs: Option<f64>,
    pub lower_bound_vol: f64,
}

impl ApproximationReport {
    pub fn resolutions(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.delta).collect()
    }

    pub fn magnitudes(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.magnitude).collect()
    }

    /// Non-decreasing up to a relative slack of `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let ms: Vec<f64> = self.rows.iter().filter_map(|r| r.magnitude).collect();
        ms.len() == self.rows.len() && ms.windows(2).all(|w| w[1] >= w[0] - tol * w[0].abs().max(1.0))
    }
}

/// Check that resolutions are positive, strictly descending and each an
/// integer fraction of the previous one.
pub fn check_resolutions(resolutions: &[f64]) -> Result<()> {
    if resolutions.is_empty() || resolutions.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
        return Err(Error::NonNestedResolutions);
    }
    for w in resolutions.windows(2) {
        let ratio = w[0] / w[1];
        if ratio < 1.5 || (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(Error::NonNestedResolutions);
        }
    }
    Ok(())
}

/// `resolutions` halving from `delta0`, `levels` of them.
pub fn halving(delta0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| delta0 / 2f64.powi(k as i32)).collect()
}

/// Magnitude of the inner grid of `tA` at spacing `delta`.
pub fn grid_magnitude(region: &RegionSpec, t: f64, delta: f64, opts: &GridOptions) -> Result<ApproximationRow> {
    region.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonpositiveScale(t));
    }
    let pts = grid_points(&region.shape, delta, opts.cap)?;
    let scaled: Vec<Vec<f64>> = pts.into_iter().map(|x| x.into_iter().map(|v| v * t).collect()).collect();
    let space = FiniteMetricSpace::from_points(&scaled, region.norm())?;
    let r = magnitude_with(&space, &opts.solver);
    Ok(ApproximationRow { delta, n_points: space.len(), magnitude: r.magnitude, status: r.status })
}

pub fn grid_approximate(region: &RegionSpec, t: f64, resolutions: &[f64]) -> Result<ApproximationReport> {
    grid_approximate_with(region, t, resolutions, &GridOptions::default())
}

pub fn grid_approximate_with(
    region: &RegionSpec,
    t: f64,
    resolutions: &[f64],
    opts: &GridOptions,
) -> Result<ApproximationReport> {
    region.validate()?;
    check_resolutions(resolutions)?;
    if region.shape.is_empty() {
        return Err(Error::UnsupportedRegion("empty region".into()));
    }
    // Fail on the finest grid before spending time on coarse ones.
    let finest = resolutions[resolutions.len() - 1];
    grid_points(&region.shape, finest, opts.cap)?;
    let rows = resolutions.iter().map(|d| grid_magnitude(region, t, *d, opts)).collect::<Result<Vec<_>>>()?;
    let extrapolated = match rows.as_slice() {
        [.., a, b] => match (a.magnitude, b.magnitude) {
            (Some(ma), Some(mb)) => Some(mb + (mb - ma) * b.delta / (a.delta - b.delta)),
            _ => None,
        },
        _ => None,
    };
    Ok(ApproximationReport {
        region: region.clone(),
        t,
        rows,
        extrapolated,
        closed_form: closed_form(region, t),
        conjecture_rhs: conjecture_rhs(region, t).ok(),
        lower_bound_vol: volume_lower_bound(region, t)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::formulas;
    use std::f64::consts::PI;

    fn union(components: Vec<[f64; 2]>) -> Shape {
        Shape::IntervalUnion { components }
    }

    #[test]
    fn interval() {
        assert_eq!(interval_magnitude(0.0).unwrap(), 1.0);
        assert_eq!(interval_magnitude(2.0).unwrap(), 2.0);
        assert!(matches!(interval_magnitude(-1.0), Err(Error::NegativeLength(_))));
    }

    #[test]
    fn real_subsets() {
        let s = union(vec![[0.0, 0.0], [1.0, 2.0]]);
        let m = real_subset_magnitude(&s).unwrap();
        assert!((m - (1.5 + 0.5f64.tanh())).abs() < 1e-15);
        assert!((m - 1.962_117_16).abs() < 1e-8);
        let q = real_subset_quadrature(&s, 1e-10).unwrap();
        assert!((q.value - m).abs() < 1e-9, "{} vs {m}", q.value);
        let pts = [0.0, 0.4, 1.7, 3.0];
        let finite = union(pts.iter().map(|x| [*x, *x]).collect());
        assert!((real_subset_magnitude(&finite).unwrap() - formulas::real_line(&pts)).abs() < 1e-15);
        assert_eq!(real_subset_magnitude(&union(vec![[5.0, 5.0]])).unwrap(), 1.0);
        assert!(real_subset_magnitude(&Shape::Cuboid { sides: vec![1.0] }).is_err());
    }

    #[test]
    fn cuboids() {
        let c = cuboid_magnitude(&[2.0, 2.0]).unwrap();
        assert_eq!(c.magnitude, 4.0);
        assert_eq!(c.intrinsic_volumes, vec![1.0, 4.0, 4.0]);
        assert_eq!(cuboid_magnitude(&[]).unwrap().magnitude, 1.0);
        assert!(matches!(cuboid_magnitude(&[1.0, -1.0]), Err(Error::NegativeSide(_))));
    }

    #[test]
    fn conjecture_values() {
        let disk = RegionSpec::ball(1.0, 2, 2).unwrap();
        assert_eq!(intrinsic_volumes(&disk).unwrap().values, vec![1.0, PI, PI]);
        assert!((conjecture_rhs(&disk, 1.0).unwrap() - (1.0 + PI / 2.0 + 0.5)).abs() < 1e-14);
        let l = 3.0;
        let square = RegionSpec::cuboid(&[l, l], 2).unwrap();
        assert!((conjecture_rhs(&square, 1.0).unwrap() - (1.0 + l + l * l / (2.0 * PI))).abs() < 1e-13);
        let square1 = RegionSpec::cuboid(&[l, 2.0], 1).unwrap();
        assert_eq!(conjecture_rhs(&square1, 1.0).unwrap(), cuboid_magnitude(&[l, 2.0]).unwrap().magnitude);
        let seg = RegionSpec::interval(3.0, 2).unwrap();
        assert_eq!(conjecture_rhs(&seg, 1.0).unwrap(), 2.5);
        let ball3 = RegionSpec::ball(2.0, 3, 2).unwrap();
        let v = intrinsic_volumes(&ball3).unwrap().values;
        // V₁ = 4r, V₂ = 2πr² (half the surface area), V₃ = 4πr³/3.
        assert!((v[1] - 8.0).abs() < 1e-13 && (v[2] - 8.0 * PI).abs() < 1e-12);
        assert!((v[3] - 32.0 * PI / 3.0).abs() < 1e-12);
        let tri = RegionSpec::new(Shape::Polygon { vertices: vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]] }, 2).unwrap();
        assert_eq!(intrinsic_volumes(&tri).unwrap().values, vec![1.0, 6.0, 6.0]);
        let gapped = RegionSpec::new(union(vec![[0.0, 1.0], [2.0, 3.0]]), 2).unwrap();
        assert!(matches!(conjecture_rhs(&gapped, 1.0), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn volume_bounds() {
        let sq2 = RegionSpec::cuboid(&[1.0, 1.0], 2).unwrap();
        assert!((volume_lower_bound(&sq2, 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let sq1 = RegionSpec::cuboid(&[1.0, 1.0], 1).unwrap();
        assert_eq!(volume_lower_bound(&sq1, 1.0).unwrap(), 0.25);
        let empty = RegionSpec::new(union(vec![]), 2).unwrap();
        assert_eq!(volume_lower_bound(&empty, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn unions() {
        let v = compact_union_magnitude(&union(vec![[0.0, 1.0]]), &union(vec![[1.0, 3.0]])).unwrap();
        assert!((v - 2.5).abs() < 1e-15);
        let a = union(vec![[0.0, 1.0], [4.0, 5.0]]);
        assert!((compact_union_magnitude(&a, &a).unwrap() - real_subset_magnitude(&a).unwrap()).abs() < 1e-15);
        assert!(matches!(
            compact_union_magnitude(&union(vec![[0.0, 1.0]]), &union(vec![[2.0, 3.0]])),
            Err(Error::ProjectionFails)
        ));
        // B straddles a point of A ∖ B.
        assert!(matches!(
            compact_union_magnitude(&union(vec![[0.0, 2.0]]), &union(vec![[-1.0, 0.5], [1.5, 3.0]])),
            Err(Error::ProjectionFails)
        ));
        assert_eq!(union_components(&[[0.0, 1.0]], &[[1.0, 3.0]]), vec![[0.0, 3.0]]);
    }

    #[test]
    fn grids_are_nested() {
        let shapes = [
            union(vec![[0.0, 0.3], [0.9, 0.9], [1.25, 2.0]]),
            Shape::Cuboid { sides: vec![1.0, 0.7] },
            Shape::Ball { radius: 1.0, dim: 2 },
            Shape::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] },
        ];
        for s in &shapes {
            let coarse = grid_points(s, 0.25, GRID_CAP).unwrap();
            let fine = grid_points(s, 0.125, GRID_CAP).unwrap();
            for x in &coarse {
                assert!(s.contains(x));
                assert!(fine.iter().any(|y| y.iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-12)), "{s:?} {x:?}");
            }
            assert!(fine.len() > coarse.len());
        }
        assert_eq!(grid_points(&union(vec![[0.0, 2.0]]), 0.002, GRID_CAP).unwrap().len(), 1001);
        assert!(matches!(
            grid_points(&Shape::Cuboid { sides: vec![1.0, 1.0] }, 1.0 / 256.0, GRID_CAP),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn resolutions_must_nest() {
        assert!(check_resolutions(&[0.5, 0.25, 0.125]).is_ok());
        assert!(check_resolutions(&[0.5, 0.3]).is_err());
        assert!(check_resolutions(&[0.25, 0.5]).is_err());
        assert!(check_resolutions(&[]).is_err());
    }

    #[test]
    fn interval_grids_increase_toward_closed_form() {
        let r = RegionSpec::interval(2.0, 2).unwrap();
        let rep = grid_approximate(&r, 1.0, &halving(0.5, 5)).unwrap();
        assert!(rep.is_monotone(1e-12));
        let last = rep.rows.last().unwrap().magnitude.unwrap();
        assert!(last < 2.0 && 2.0 - last < 1e-3);
        assert!(rep.extrapolated.unwrap() >= last);
        assert_eq!(rep.closed_form, Some(2.0));
    }

    #[test]
    fn l1_square_grid_is_product_of_factors() {
        let sq = RegionSpec::cuboid(&[1.0, 1.0], 1).unwrap();
        let seg = RegionSpec::interval(1.0, 1).unwrap();
        let opts = GridOptions::default();
        for delta in [0.5, 0.25, 0.125] {
            let two = grid_magnitude(&sq, 1.3, delta, &opts).unwrap().magnitude.unwrap();
            let one = grid_magnitude(&seg, 1.3, delta, &opts).unwrap().magnitude.unwrap();
            assert!((two - one * one).abs() < 1e-10);
        }
        assert_eq!(closed_form(&sq, 1.0), Some(2.25));
    }
}
