//! The magnitude function `t ↦ |tA|`: sampling, singularities, asymptotics
//! and growth.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{similarity_at_scale, zeta_matrix, SolverOptions, Status};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::FiniteMetricSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// `steps` scales from `t0` to `t1` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl ScaleGrid {
    pub fn linear(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        Self::new(t0, t1, steps, Spacing::Linear)
    }

    pub fn log(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        Self::new(t0, t1, steps, Spacing::Log)
    }

    pub fn new(t0: f64, t1: f64, steps: usize, spacing: Spacing) -> Result<Self> {
        if steps == 0 || !(t0 > 0.0) || !(t1 >= t0) || !t1.is_finite() || (steps == 1 && t1 != t0) {
            return Err(Error::EmptyGrid);
        }
        Ok(ScaleGrid { t0, t1, steps, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t0];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.t0 + s * (self.t1 - self.t0),
                    Spacing::Log => (self.t0.ln() + s * (self.t1.ln() - self.t0.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for ScaleGrid {
    type Err = Error;

    /// `t0:t1:steps` or `t0:t1:steps:log`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("grid `{s}` is not t0:t1:steps[:log]"));
        if parts.len() != 3 && parts.len() != 4 {
            return Err(bad());
        }
        let t0: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let t1: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad()),
        };
        ScaleGrid::new(t0, t1, steps, spacing)
    }
}

impl fmt::Display for ScaleGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.t0, self.t1, self.steps)?;
        if self.spacing == Spacing::Log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub t: f64,
    pub magnitude: Option<f64>,
    pub status: Status,
    pub min_eigenvalue: Option<f64>,
    pub det_sign: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    /// `det ζ` changes sign.
    Root,
    /// `det ζ` has a near-zero local minimum without a sign change.
    Suspect,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub t: f64,
    /// Width of the final bracketing interval.
    pub width: f64,
    pub kind: SingularityKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeFunctionProfile {
    pub grid: Option<ScaleGrid>,
    pub samples: Vec<ProfileSample>,
    pub singularities: Vec<Singularity>,
}

impl MagnitudeFunctionProfile {
    pub fn ts(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// `(t, |tA|)` over defined samples.
    pub fn defined(&self) -> Vec<(f64, f64)> {
        self.samples.iter().filter_map(|s| s.magnitude.map(|m| (s.t, m))).collect()
    }
}

fn sample_one(space: &FiniteMetricSpace, t: f64, opts: &SolverOptions) -> ProfileSample {
    let sys = similarity_at_scale(space, t, opts);
    let r = sys.magnitude(opts);
    ProfileSample { t, magnitude: r.magnitude, status: r.status, min_eigenvalue: sys.min_eigenvalue(), det_sign: sys.det_sign() }
}

/// `|tA|` at each scale, in order; undefined points are kept and flagged.
pub fn sample_at(space: &FiniteMetricSpace, ts: &[f64], opts: &SolverOptions) -> Result<Vec<ProfileSample>> {
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::EmptyGrid);
    }
    let mut sorted = ts.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted.par_iter().map(|t| sample_one(space, *t, opts)).collect())
}

pub fn sample_function(space: &FiniteMetricSpace, grid: &ScaleGrid) -> Result<MagnitudeFunctionProfile> {
    sample_function_with(space, grid, &SolverOptions::default())
}

pub fn sample_function_with(
    space: &FiniteMetricSpace,
    grid: &ScaleGrid,
    opts: &SolverOptions,
) -> Result<MagnitudeFunctionProfile> {
    let samples = sample_at(space, &grid.points(), opts)?;
    Ok(MagnitudeFunctionProfile { grid: Some(*grid), samples, singularities: Vec::new() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub per_decade: usize,
    /// Bisection stops once the bracket is this narrow.
    pub width: f64,
    /// A local minimum of `|det ζ|` refined to at or below this is a suspect.
    pub suspect_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { per_decade: 2048, width: 1e-9, suspect_tol: 1e-8 }
    }
}

/// `(sign, ln |det ζ_{tA}|)`.
pub fn det_zeta(space: &FiniteMetricSpace, t: f64) -> (f64, f64) {
    linalg::det_sign_log(&zeta_matrix(space, t))
}

pub fn find_singularities(space: &FiniteMetricSpace, t_lo: f64, t_hi: f64) -> Vec<Singularity> {
    find_singularities_with(space, t_lo, t_hi, &ScanOptions::default())
}

/// Roots of `t ↦ det ζ_{tA}` on `[t_lo, t_hi]`, bracketed on a log grid and
/// refined by bisection, plus near-zero minima without a sign change.
pub fn find_singularities_with(space: &FiniteMetricSpace, t_lo: f64, t_hi: f64, opts: &ScanOptions) -> Vec<Singularity> {
    if space.len() < 2 || !(t_lo > 0.0) || !(t_hi > t_lo) || !t_hi.is_finite() {
        return Vec::new();
    }
    let decades = (t_hi / t_lo).log10();
    let count = ((decades * opts.per_decade as f64).ceil() as usize).max(2) + 1;
    let ts: Vec<f64> = (0..count)
        .map(|i| (t_lo.ln() + (t_hi.ln() - t_lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect();
    let dets: Vec<(f64, f64)> = ts.par_iter().map(|t| det_zeta(space, *t)).collect();
    let sign = |t: f64| det_zeta(space, t).0;
    let mut out = Vec::new();
    for i in 0..count - 1 {
        let (s0, s1) = (dets[i].0, dets[i + 1].0);
        if s0 == 0.0 {
            out.push(Singularity { t: ts[i], width: 0.0, kind: SingularityKind::Root });
            continue;
        }
        if s1 != 0.0 && s0 != s1 {
            let (mut a, mut b) = (ts[i], ts[i + 1]);
            while b - a > opts.width {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let sm = sign(m);
                if sm == 0.0 {
                    a = m;
                    b = m;
                } else if sm == s0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(Singularity { t: 0.5 * (a + b), width: b - a, kind: SingularityKind::Root });
        }
    }
    if dets[count - 1].0 == 0.0 {
        out.push(Singularity { t: ts[count - 1], width: 0.0, kind: SingularityKind::Root });
    }
    let log_tol = opts.suspect_tol.ln();
    for i in 1..count - 1 {
        let (l, c, r) = (dets[i - 1], dets[i], dets[i + 1]);
        if l.0 == c.0 && c.0 == r.0 && c.0 != 0.0 && c.1 < l.1 && c.1 <= r.1 {
            let (t, logdet) = golden_min(|t| det_zeta(space, t).1, ts[i - 1], ts[i + 1], opts.width);
            if logdet <= log_tol {
                out.push(Singularity { t, width: opts.width, kind: SingularityKind::Suspect });
            }
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Sample the function and attach the singularities inside the grid range.
pub fn profile_with_singularities(
    space: &FiniteMetricSpace,
    grid: &ScaleGrid,
    opts: &SolverOptions,
    scan: &ScanOptions,
) -> Result<MagnitudeFunctionProfile> {
    let mut p = sample_function_with(space, grid, opts)?;
    p.singularities = find_singularities_with(space, grid.t0, grid.t1, scan);
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub t_max: f64,
    pub limit_estimate: Option<f64>,
    pub n: usize,
    /// `|#A − |t_max A||`.
    pub gap: Option<f64>,
    pub weights_positive: bool,
    pub status: Status,
}

/// `|t_max A|` against `#A`, with the sign of the weighting there.
pub fn asymptote_check(space: &FiniteMetricSpace, t_max: f64) -> AsymptoteReport {
    let opts = SolverOptions { eigenvalues: false, ..SolverOptions::default() };
    let r = similarity_at_scale(space, t_max, &opts).magnitude(&opts);
    let n = space.len();
    AsymptoteReport {
        t_max,
        limit_estimate: r.magnitude,
        n,
        gap: r.magnitude.map(|m| (n as f64 - m).abs()),
        weights_positive: r.weighting.as_ref().is_some_and(|w| w.iter().all(|x| *x > 0.0)),
        status: r.status,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub t: f64,
    pub pd: bool,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityScan {
    pub rows: Vec<StabilityRow>,
    pub last_singularity: Option<f64>,
    /// Every scanned `t` beyond the last singularity is positive definite.
    pub pd_beyond_last_singularity: bool,
}

pub fn stability_scan(space: &FiniteMetricSpace, ts: &[f64]) -> Result<StabilityScan> {
    stability_scan_with(space, ts, &ScanOptions::default())
}

/// Smallest eigenvalue of `ζ_{tA}` along `ts`.
pub fn stability_scan_with(space: &FiniteMetricSpace, ts: &[f64], scan: &ScanOptions) -> Result<StabilityScan> {
    if !space.is_symmetric() {
        return Err(Error::AsymmetricSpace);
    }
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::EmptyGrid);
    }
    let mut sorted = ts.to_vec();
    sorted.sort_by(f64::total_cmp);
    let opts = SolverOptions::default();
    let rows: Vec<StabilityRow> = sorted
        .par_iter()
        .map(|t| {
            let sys = similarity_at_scale(space, *t, &opts);
            let min_eigenvalue = sys.min_eigenvalue().unwrap_or(f64::NAN);
            StabilityRow { t: *t, pd: sys.cholesky_succeeded() && min_eigenvalue > 0.0, min_eigenvalue }
        })
        .collect();
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let last_singularity = find_singularities_with(space, lo, hi, scan).last().map(|s| s.t);
    let beyond = last_singularity.unwrap_or(f64::NEG_INFINITY);
    let pd_beyond_last_singularity = rows.iter().filter(|r| r.t > beyond).all(|r| r.pd);
    Ok(StabilityScan { rows, last_singularity, pd_beyond_last_singularity })
}

/// Least-squares fit of `log|tA| = θ log t + c₀ + Σ_k c_k t^{−k}` over a
/// window of scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// `θ`, with inverse-power corrections absorbed.
    pub exponent: f64,
    pub window: [f64; 2],
    /// RMS residual of the fit in `log|tA|`.
    pub residual: f64,
    /// Slope of the plain log–log regression on the same window.
    pub raw_slope: f64,
    pub samples: usize,
    pub corrections: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// `[t_lo, t_hi]`; defaults to the top decade of the samples.
    pub window: Option<[f64; 2]>,
    /// Number of inverse-power terms `t^{−1}, …, t^{−k}`.
    pub corrections: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { window: None, corrections: 3 }
    }
}

pub const MIN_FIT_SAMPLES: usize = 8;

pub fn dimension_estimate(profile: &MagnitudeFunctionProfile) -> Result<GrowthFit> {
    growth_fit(&profile.defined(), &FitOptions::default())
}

/// Growth exponent of `(t, f(t))` pairs. Non-positive values are skipped
/// along with undefined ones.
pub fn growth_fit(points: &[(f64, f64)], opts: &FitOptions) -> Result<GrowthFit> {
    let mut pts: Vec<(f64, f64)> =
        points.iter().copied().filter(|(t, m)| *t > 0.0 && t.is_finite() && *m > 0.0 && m.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let insufficient = |found| Error::InsufficientSamples { needed: MIN_FIT_SAMPLES, found };
    let (Some(first), Some(last)) = (pts.first(), pts.last()) else {
        return Err(insufficient(0));
    };
    if pts.len() < MIN_FIT_SAMPLES || last.0 < 10.0 * first.0 * (1.0 - 1e-12) {
        return Err(insufficient(pts.len()));
    }
    let [lo, hi] = opts.window.unwrap_or([last.0 / 10.0, last.0]);
    let lo = lo * (1.0 - 1e-12);
    let hi = hi * (1.0 + 1e-12);
    let win: Vec<(f64, f64)> = pts.into_iter().filter(|(t, _)| *t >= lo && *t <= hi).collect();
    if win.len() < MIN_FIT_SAMPLES {
        return Err(insufficient(win.len()));
    }
    let window = [win[0].0, win[win.len() - 1].0];
    let corrections = opts.corrections.min(win.len() - 3);
    let x: Vec<f64> = win.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = win.iter().map(|p| p.1.ln()).collect();

    let xm = x.iter().sum::<f64>() / x.len() as f64;
    let ym = y.iter().sum::<f64>() / y.len() as f64;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let sxx: f64 = x.iter().map(|a| (a - xm) * (a - xm)).sum();
    let raw_slope = sxy / sxx;

    // Columns: log t centred, 1, (t_lo/t)^k.
    let cols = 2 + corrections;
    let a = DMatrix::from_fn(win.len(), cols, |i, j| match j {
        0 => x[i] - xm,
        1 => 1.0,
        k => (window[0] / win[i].0).powi(k as i32 - 1),
    });
    let b = DVector::from_column_slice(&y);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let coef = svd.solve(&b, 1e-13 * smax).map_err(|e| Error::Config(e.to_string()))?;
    let resid = &a * &coef - b;
    let residual = (resid.norm_squared() / win.len() as f64).sqrt();
    Ok(GrowthFit { exponent: coef[0], window, residual, raw_slope, samples: win.len(), corrections })
}
