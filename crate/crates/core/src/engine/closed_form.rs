//! Magnitude through structure: series, symmetry and the constructions
//! (unions, gluing, fibrations, products) that determine the magnitude of a
//! space from the magnitudes of its pieces. Each routine cross-checks its
//! closed form against a direct solve when the space is small enough.

use serde::{Deserialize, Serialize};

use super::{
    magnitude_with, pd_certificate, similarity_with, MagnitudeResult, Method, SolverOptions, CROSS_CHECK_MAX,
};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::metric::FiniteMetricSpace;

fn quiet() -> SolverOptions {
    SolverOptions { eigenvalues: false, ..SolverOptions::default() }
}

/// Fills in `diagnostics.discrepancy` from a direct solve on `space`.
fn cross_check(mut result: MagnitudeResult, space: &FiniteMetricSpace) -> MagnitudeResult {
    if space.len() <= CROSS_CHECK_MAX {
        let direct = magnitude_with(space, &quiet());
        if let (Some(a), Some(b)) = (result.magnitude, direct.magnitude) {
            result.diagnostics.discrepancy = Some((a - b).abs());
        }
        result.diagnostics.rcond = direct.diagnostics.rcond;
    }
    result
}

fn defined_magnitude(space: &FiniteMetricSpace) -> Result<MagnitudeResult> {
    let r = magnitude_with(space, &quiet());
    if r.magnitude.is_some() && r.weighting.is_some() {
        Ok(r)
    } else {
        Err(Error::SubmagnitudeUndefined)
    }
}

/// Magnitude of a scattered space from the alternating path series
/// `μ = Σ_k (−1)^k (ζ − I)^k`, applied to `𝟙`.
pub fn magnitude_scattered_series(space: &FiniteMetricSpace, max_terms: usize, tol: f64) -> Result<MagnitudeResult> {
    if !space.is_scattered() {
        return Err(Error::NotScattered);
    }
    let n = space.len();
    let off = |a: usize, b: usize| if a == b { 0.0 } else { super::similarity_entry(space.distance(a, b), 1.0) };
    let series = |transpose: bool| -> Result<Vec<f64>> {
        let mut total = vec![1.0; n];
        let mut term = vec![1.0; n];
        for k in 1..=max_terms {
            let next: Vec<f64> = (0..n)
                .map(|a| (0..n).map(|b| if transpose { off(b, a) } else { off(a, b) } * term[b]).sum::<f64>())
                .collect();
            term = next;
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            for (t, v) in total.iter_mut().zip(&term) {
                *t += sign * v;
            }
            if term.iter().fold(0.0f64, |m, v| m.max(v.abs())) < tol {
                return Ok(total);
            }
        }
        if n <= 1 {
            return Ok(total);
        }
        Err(Error::SeriesNotConverged(max_terms))
    };
    let w = series(false)?;
    let v = if space.is_symmetric() { w.clone() } else { series(true)? };
    let mut r = MagnitudeResult::closed_form(w.iter().sum(), Some(w), Method::ScatteredSeries);
    r.coweighting = Some(v);
    Ok(cross_check(r, space))
}

/// Speyer's formula `n² / Σ_{a,b} e^{-d(a,b)}` for homogeneous spaces.
pub fn magnitude_homogeneous(space: &FiniteMetricSpace) -> Result<MagnitudeResult> {
    if !space.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = space.len();
    if n == 0 {
        return Ok(MagnitudeResult::closed_form(0.0, Some(Vec::new()), Method::Homogeneous));
    }
    let total: f64 =
        (0..n).map(|a| space.row(a).iter().map(|&d| super::similarity_entry(d, 1.0)).sum::<f64>()).sum();
    let mag = (n * n) as f64 / total;
    let r = MagnitudeResult::closed_form(mag, Some(vec![mag / n as f64; n]), Method::Homogeneous);
    Ok(cross_check(r, space))
}

/// `(Σ v)² / vᵀ ζ v`; bounded above by the magnitude on positive definite
/// spaces, with equality exactly at multiples of the weighting.
pub fn cauchy_schwarz_ratio(space: &FiniteMetricSpace, v: &[f64]) -> Result<f64> {
    if v.len() != space.len() {
        return Err(Error::LengthMismatch { expected: space.len(), found: v.len() });
    }
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroVector);
    }
    if !space.is_symmetric() {
        return Err(Error::NotPositiveDefinite);
    }
    let sys = similarity_with(space, &quiet());
    if !pd_certificate_quick(&sys) {
        return Err(Error::NotPositiveDefinite);
    }
    let s: f64 = v.iter().sum();
    Ok(s * s / dot(v, &sys.zeta().mul_vec(v)))
}

fn pd_certificate_quick(sys: &super::SimilaritySystem) -> bool {
    sys.cholesky_succeeded() && !sys.is_singular()
}

/// Inclusion–exclusion `|A ∪ B| = |A| + |B| − |A ∩ B|` for subsets `a`, `b`
/// of `x` that project to each other. The weighting is indexed by the
/// sorted union of `a` and `b`.
pub fn union_magnitude(x: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Result<MagnitudeResult> {
    if !x.check_projection(a, b).holds || !x.check_projection(b, a).holds {
        return Err(Error::ProjectionFails);
    }
    let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
    union.sort_unstable();
    union.dedup();
    let inter: Vec<usize> = a.iter().copied().filter(|p| b.contains(p)).collect();
    let ra = defined_magnitude(&x.subspace(a))?;
    let rb = defined_magnitude(&x.subspace(b))?;
    let ri = defined_magnitude(&x.subspace(&inter))?;
    let lookup = |set: &[usize], r: &MagnitudeResult, p: usize| {
        set.iter().position(|&q| q == p).map_or(0.0, |i| r.weighting.as_ref().expect("defined")[i])
    };
    let w: Vec<f64> = union
        .iter()
        .map(|&p| lookup(a, &ra, p) + lookup(b, &rb, p) - lookup(&inter, &ri, p))
        .collect();
    let mag = ra.magnitude.unwrap() + rb.magnitude.unwrap() - ri.magnitude.unwrap();
    let r = MagnitudeResult::closed_form(mag, Some(w), Method::Union);
    Ok(cross_check(r, &x.subspace(&union)))
}

/// Magnitude of `A +_D B` from `|A|`, `|B|` and `D`. The weighting lists
/// the points of `A` first, then those of `B`.
pub fn glued_magnitude(a: &FiniteMetricSpace, b: &FiniteMetricSpace, d: f64) -> Result<MagnitudeResult> {
    let glued = a.constant_distance_glue(b, d)?;
    let ra = defined_magnitude(a)?;
    let rb = defined_magnitude(b)?;
    let (ma, mb) = (ra.magnitude.unwrap(), rb.magnitude.unwrap());
    let e = (-d).exp();
    let denom = 1.0 - e * e * ma * mb;
    if denom.abs() <= 1e-12 * (1.0 + (e * e * ma * mb).abs()) {
        return Err(Error::ResonantGlue);
    }
    let sa = (1.0 - e * mb) / denom;
    let sb = (1.0 - e * ma) / denom;
    let w: Vec<f64> = ra
        .weighting
        .unwrap()
        .iter()
        .map(|v| sa * v)
        .chain(rb.weighting.unwrap().iter().map(|v| sb * v))
        .collect();
    let mag = (ma + mb - 2.0 * e * ma * mb) / denom;
    let r = MagnitudeResult::closed_form(mag, Some(w), Method::Glue);
    Ok(cross_check(r, &glued))
}

/// `|A| = |B| |F|` for a metric fibration `pmap: total → base` over a base
/// with finite distances.
pub fn fibration_magnitude(total: &FiniteMetricSpace, base: &FiniteMetricSpace, pmap: &[usize]) -> Result<MagnitudeResult> {
    if base.is_empty() || base.diameter() == f64::INFINITY || !total.check_fibration(base, pmap) {
        return Err(Error::ProjectionFails);
    }
    let rb = defined_magnitude(base)?;
    let wb = rb.weighting.as_ref().unwrap();
    let mut w = vec![0.0; total.len()];
    let mut fibre_mag = None;
    for b in 0..base.len() {
        let fibre: Vec<usize> = (0..total.len()).filter(|&a| pmap[a] == b).collect();
        let rf = defined_magnitude(&total.subspace(&fibre))?;
        fibre_mag.get_or_insert(rf.magnitude.unwrap());
        for (i, &a) in fibre.iter().enumerate() {
            w[a] = rf.weighting.as_ref().unwrap()[i] * wb[b];
        }
    }
    let mag = rb.magnitude.unwrap() * fibre_mag.unwrap_or(0.0);
    let r = MagnitudeResult::closed_form(mag, Some(w), Method::Fibration);
    Ok(cross_check(r, total))
}

/// `|A ⊗ B| = |A| |B|` for the sum-metric tensor product; the weighting is
/// `w_A ⊗ w_B` in the product's point order.
pub fn product_magnitude(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<MagnitudeResult> {
    let ra = defined_magnitude(a)?;
    let rb = defined_magnitude(b)?;
    let wb = rb.weighting.as_ref().unwrap();
    let w: Vec<f64> = ra.weighting.as_ref().unwrap().iter().flat_map(|x| wb.iter().map(move |y| x * y)).collect();
    let r = MagnitudeResult::closed_form(ra.magnitude.unwrap() * rb.magnitude.unwrap(), Some(w), Method::Product);
    Ok(cross_check(r, &a.tensor_product(b, crate::metric::ProductMetric::Sum)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UltrametricBound {
    pub magnitude: f64,
    /// `e^{diam A}`.
    pub bound: f64,
    pub positive_weights: bool,
    pub positive_definite: bool,
}

impl UltrametricBound {
    pub fn holds(&self) -> bool {
        self.positive_weights && self.positive_definite && self.magnitude <= self.bound * (1.0 + 1e-12)
    }
}

pub fn ultrametric_magnitude_bound(space: &FiniteMetricSpace) -> Result<UltrametricBound> {
    if !space.is_ultrametric() {
        return Err(Error::NotUltrametric);
    }
    let sys = similarity_with(space, &SolverOptions::default());
    let r = sys.magnitude(&SolverOptions::default());
    let magnitude = r.magnitude.ok_or(Error::SubmagnitudeUndefined)?;
    let positive_weights = r.weighting.as_ref().is_some_and(|w| w.iter().all(|x| *x > 0.0));
    let positive_definite = !space.is_symmetric() || pd_certificate(&sys).pd;
    Ok(UltrametricBound { magnitude, bound: space.diameter().exp(), positive_weights, positive_definite })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{formulas, magnitude};
    use crate::metric::Norm;

    fn uniform(n: usize, t: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_distance_matrix(
            &(0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { t }).collect()).collect::<Vec<_>>(),
            false,
        )
        .unwrap()
    }

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_points(&xs.iter().map(|x| vec![*x]).collect::<Vec<_>>(), Norm::L2).unwrap()
    }

    #[test]
    fn scattered_series() {
        let one = magnitude_scattered_series(&uniform(1, 1.0), 10, 1e-14).unwrap();
        assert_eq!(one.magnitude, Some(1.0));
        let three = magnitude_scattered_series(&uniform(3, 2.0), 10_000, 1e-15).unwrap();
        let direct = magnitude(&uniform(3, 2.0)).magnitude.unwrap();
        assert!((three.magnitude.unwrap() - direct).abs() < 1e-8);
        assert!(three.diagnostics.discrepancy.unwrap() < 1e-8);
        assert!(matches!(magnitude_scattered_series(&uniform(4, 3f64.ln()), 100, 1e-12), Err(Error::NotScattered)));
        assert!(matches!(
            magnitude_scattered_series(&uniform(3, 0.70), 5, 1e-15),
            Err(Error::SeriesNotConverged(5))
        ));
    }

    #[test]
    fn homogeneous_formula() {
        for (n, t) in [(2, 0.3), (5, 1.0), (7, 2.5)] {
            let r = magnitude_homogeneous(&uniform(n, t)).unwrap();
            assert!((r.magnitude.unwrap() - formulas::complete_graph(n, t)).abs() < 1e-12);
            assert!(r.diagnostics.discrepancy.unwrap() < 1e-12);
        }
        assert!(matches!(magnitude_homogeneous(&line(&[0.0, 1.0, 3.0])), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn homogeneous_formula_survives_singular_zeta() {
        // ζ of tK_{3,3} has eigenvalue 1 + 2e^{-2t} − 3e^{-t}, zero at t = log 2.
        let t = 2f64.ln();
        let k33 = crate::spaces::complete_bipartite(3, 3, t);
        let r = magnitude_homogeneous(&k33).unwrap();
        let x = 0.5;
        assert!((r.magnitude.unwrap() - 36.0 / (6.0 + 18.0 * x + 12.0 * x * x)).abs() < 1e-12);
        let direct = magnitude(&k33);
        assert_eq!(direct.status, crate::engine::Status::SingularConsistent);
        assert!((direct.magnitude.unwrap() - r.magnitude.unwrap()).abs() < 1e-7);
    }

    #[test]
    fn cauchy_schwarz() {
        let s = line(&[0.0, 0.3, 1.1, 2.0]);
        let r = magnitude(&s);
        let w = r.weighting.unwrap();
        let m = r.magnitude.unwrap();
        assert!((cauchy_schwarz_ratio(&s, &w).unwrap() - m).abs() < 1e-12);
        let w2: Vec<f64> = w.iter().map(|x| 2.0 * x).collect();
        assert!((cauchy_schwarz_ratio(&s, &w2).unwrap() - m).abs() < 1e-12);
        assert!(cauchy_schwarz_ratio(&s, &[1.0, -1.0, 0.5, 0.0]).unwrap() <= m);
        assert!(matches!(cauchy_schwarz_ratio(&s, &[0.0; 4]), Err(Error::ZeroVector)));
        let k32 = crate::spaces::complete_bipartite(3, 2, 0.3);
        assert!(matches!(cauchy_schwarz_ratio(&k32, &[1.0; 5]), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn unions() {
        let x = line(&[0.0, 1.0, 2.0]);
        let r = union_magnitude(&x, &[0, 1], &[1, 2]).unwrap();
        let one_edge = magnitude(&line(&[0.0, 1.0])).magnitude.unwrap();
        assert!((r.magnitude.unwrap() - (2.0 * one_edge - 1.0)).abs() < 1e-12);
        assert!(r.diagnostics.discrepancy.unwrap() < 1e-12);
        let same = union_magnitude(&x, &[0, 1, 2], &[0, 1, 2]).unwrap();
        assert!((same.magnitude.unwrap() - magnitude(&x).magnitude.unwrap()).abs() < 1e-12);
        let plane = FiniteMetricSpace::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]], Norm::L2).unwrap();
        assert!(matches!(union_magnitude(&plane, &[0, 1], &[1, 2]), Err(Error::ProjectionFails)));
    }

    #[test]
    fn gluing() {
        for d in [0.2, 1.0, 3.0] {
            let pt = uniform(1, 1.0);
            let r = glued_magnitude(&pt, &pt, d).unwrap();
            assert!((r.magnitude.unwrap() - formulas::two_point(d)).abs() < 1e-12);
        }
        let t = 0.9;
        let r = glued_magnitude(&uniform(3, 2.0 * t), &uniform(2, 2.0 * t), t).unwrap();
        assert!((r.magnitude.unwrap() - formulas::k32(t)).abs() < 1e-12);
        assert!(r.diagnostics.discrepancy.unwrap() < 1e-12);
    }

    #[test]
    fn products_and_fibrations() {
        let a = line(&[0.0, 0.5, 1.7]);
        let b = uniform(3, 0.8);
        let r = product_magnitude(&a, &b).unwrap();
        assert!(r.diagnostics.discrepancy.unwrap() < 1e-12);
        let total = a.tensor_product(&b, crate::metric::ProductMetric::Sum);
        let pmap: Vec<usize> = (0..total.len()).map(|i| i / 3).collect();
        let f = fibration_magnitude(&total, &a, &pmap).unwrap();
        assert!((f.magnitude.unwrap() - r.magnitude.unwrap()).abs() < 1e-12);
        let pt = uniform(1, 1.0);
        let r = product_magnitude(&a, &pt).unwrap();
        assert!((r.magnitude.unwrap() - magnitude(&a).magnitude.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ultrametric_bound() {
        let u = ultrametric_magnitude_bound(&uniform(4, 1.3)).unwrap();
        assert!((u.magnitude - formulas::complete_graph(4, 1.3)).abs() < 1e-12);
        assert!(u.holds());
        let single = ultrametric_magnitude_bound(&uniform(1, 1.0)).unwrap();
        assert_eq!((single.magnitude, single.bound), (1.0, 1.0));
        assert!(matches!(ultrametric_magnitude_bound(&line(&[0.0, 1.0, 2.0])), Err(Error::NotUltrametric)));
    }
}
