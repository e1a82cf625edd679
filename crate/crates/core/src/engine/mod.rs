//! Similarity matrices, weightings and magnitude of finite spaces.
//!
//! `ζ(a, b) = e^{-d(a, b)}` with `e^{-∞} = 0`. A weighting solves `ζ w = 𝟙`,
//! a coweighting `vᵀ ζ = 𝟙ᵀ`; the magnitude is their common total.
//!
//! Solver order: exact substitution when the support of `ζ` is acyclic
//! (posets, discrete spaces), Cholesky for symmetric inputs, LU otherwise.
//! When `ζ` is numerically singular a minimum-norm least-squares solution
//! is accepted if its residual is small, since magnitude only needs *some*
//! weighting and coweighting to exist.

mod closed_form;
mod code;
pub mod formulas;

pub use closed_form::*;
pub use code::{magnitude_code, CodeMagnitude, LinearCode};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Cholesky, Lu, Matrix};
use crate::metric::FiniteMetricSpace;

/// Below this reciprocal condition number `ζ` is treated as singular.
pub const RCOND_SINGULAR: f64 = 1e-12;
/// Results with `rcond` below this (but above the singular threshold) are
/// flagged low-confidence.
pub const RCOND_LOW_CONFIDENCE: f64 = 1e-9;
/// Least-squares residual tolerance, multiplied by `√n`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Closed-form operations cross-check against a direct solve up to this size.
pub const CROSS_CHECK_MAX: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub rcond_threshold: f64,
    pub residual_tol: f64,
    /// Compute the smallest eigenvalue of symmetric `ζ`.
    pub eigenvalues: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rcond_threshold: RCOND_SINGULAR, residual_tol: RESIDUAL_TOL, eigenvalues: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factorization {
    Cholesky,
    Lu,
    Triangular,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ClosedForm,
    Solved,
    SingularNoWeighting,
    SingularConsistent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ClosedForm => "closed_form",
            Status::Solved => "solved",
            Status::SingularNoWeighting => "singular_no_weighting",
            Status::SingularConsistent => "singular_consistent",
        }
    }

    pub fn is_defined(self) -> bool {
        self != Status::SingularNoWeighting
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "closed_form" => Status::ClosedForm,
            "solved" => Status::Solved,
            "singular_no_weighting" => Status::SingularNoWeighting,
            "singular_consistent" => Status::SingularConsistent,
            other => return Err(Error::Parse(format!("unknown status {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Empty,
    Triangular,
    Cholesky,
    Lu,
    LeastSquares,
    ScatteredSeries,
    Homogeneous,
    WeightEnumerator,
    Union,
    Glue,
    Fibration,
    Product,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rcond: Option<f64>,
    /// `‖ζ w − 𝟙‖_∞` (max with the coweighting residual when asymmetric).
    pub residual: Option<f64>,
    pub low_confidence: bool,
    /// `|closed form − direct solve|` for closed-form methods.
    pub discrepancy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeResult {
    pub magnitude: Option<f64>,
    pub weighting: Option<Vec<f64>>,
    pub coweighting: Option<Vec<f64>>,
    pub status: Status,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl MagnitudeResult {
    pub(crate) fn closed_form(magnitude: f64, weighting: Option<Vec<f64>>, method: Method) -> Self {
        MagnitudeResult {
            magnitude: Some(magnitude),
            coweighting: weighting.clone(),
            weighting,
            status: Status::ClosedForm,
            method,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.magnitude
    }
}

#[derive(Clone, Debug)]
enum Factors {
    None,
    Triangular(Vec<usize>),
    Cholesky(Cholesky),
    Lu(Lu),
}

/// `ζ_A` together with its factorization and conditioning.
#[derive(Clone, Debug)]
pub struct SimilaritySystem {
    zeta: Matrix,
    symmetric: bool,
    factorization: Factorization,
    cholesky_ok: bool,
    min_eigenvalue: Option<f64>,
    rcond: f64,
    det_sign: f64,
    factors: Factors,
}

/// `e^{-t d}` for every pair, with `e^{-∞} = 0`.
pub(crate) fn zeta_matrix(space: &FiniteMetricSpace, t: f64) -> Matrix {
    let n = space.len();
    let mut data = Vec::with_capacity(n * n);
    for a in 0..n {
        data.extend(space.row(a).iter().map(|&d| similarity_entry(d, t)));
    }
    Matrix::from_row_major(n, data)
}

#[inline]
pub(crate) fn similarity_entry(d: f64, t: f64) -> f64 {
    if d == 0.0 {
        1.0
    } else if d == f64::INFINITY {
        0.0
    } else {
        (-t * d).exp()
    }
}

impl SimilaritySystem {
    pub fn new(zeta: Matrix, symmetric: bool, opts: &SolverOptions) -> Self {
        let n = zeta.n();
        let mut sys = SimilaritySystem {
            zeta,
            symmetric,
            factorization: Factorization::Singular,
            cholesky_ok: false,
            min_eigenvalue: None,
            rcond: 0.0,
            det_sign: 0.0,
            factors: Factors::None,
        };
        if n == 0 {
            sys.factorization = Factorization::Triangular;
            sys.factors = Factors::Triangular(Vec::new());
            sys.rcond = 1.0;
            sys.det_sign = 1.0;
            return sys;
        }
        let norm1 = sys.zeta.norm1();
        if let Some(order) = linalg::triangular_order(&sys.zeta) {
            let z = &sys.zeta;
            let inv = linalg::inverse_norm1_estimate(
                n,
                |b| linalg::triangular_solve(z, &order, b),
                |b| linalg::triangular_solve_transpose(z, &order, b),
            );
            sys.rcond = 1.0 / (norm1 * inv);
            sys.det_sign = order.iter().map(|&i| z.get(i, i).signum()).product();
            sys.factorization = Factorization::Triangular;
            sys.cholesky_ok = symmetric && order.iter().all(|&i| z.get(i, i) > 0.0);
            sys.factors = Factors::Triangular(order);
        } else {
            let pivot_tol = n as f64 * 1e-14;
            let chol = if symmetric { Cholesky::new_with_pivot_tol(&sys.zeta, pivot_tol).ok() } else { None };
            if let Some(chol) = chol {
                let inv = linalg::inverse_norm1_estimate(n, |b| chol.solve(b), |b| chol.solve(b));
                sys.rcond = 1.0 / (norm1 * inv);
                sys.det_sign = 1.0;
                sys.cholesky_ok = true;
                sys.factorization = Factorization::Cholesky;
                sys.factors = Factors::Cholesky(chol);
            } else {
                let lu = Lu::new(&sys.zeta);
                let (sign, _) = lu.det_sign_log();
                sys.det_sign = sign;
                if lu.is_singular() {
                    sys.rcond = 0.0;
                } else {
                    let inv = linalg::inverse_norm1_estimate(n, |b| lu.solve(b), |b| lu.solve_transpose(b));
                    sys.rcond = 1.0 / (norm1 * inv);
                }
                sys.factorization = Factorization::Lu;
                sys.factors = Factors::Lu(lu);
            }
            if !(sys.rcond >= opts.rcond_threshold) {
                sys.factorization = Factorization::Singular;
            }
        }
        if opts.eigenvalues && symmetric {
            sys.min_eigenvalue = Some(match &sys.factors {
                Factors::Cholesky(c) if n > linalg::DENSE_EIGEN_MAX => linalg::pd_min_eigenvalue(&sys.zeta, c),
                _ => linalg::symmetric_min_eigenvalue(&sys.zeta),
            });
        }
        sys
    }

    pub fn zeta(&self) -> &Matrix {
        &self.zeta
    }

    pub fn len(&self) -> usize {
        self.zeta.n()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.n() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn factorization(&self) -> Factorization {
        self.factorization
    }

    /// Cholesky succeeded with pivots above `n·1e-14`.
    pub fn cholesky_succeeded(&self) -> bool {
        self.cholesky_ok
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.min_eigenvalue
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// Sign of `det ζ` (0 when an exact zero pivot was met).
    pub fn det_sign(&self) -> f64 {
        self.det_sign
    }

    pub fn is_singular(&self) -> bool {
        self.factorization == Factorization::Singular
    }

    /// Solves `ζ x = b` with the stored factors, ignoring the singularity
    /// classification. `None` only if no factorization exists.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        match &self.factors {
            Factors::None => None,
            Factors::Triangular(order) => Some(linalg::triangular_solve(&self.zeta, order, b)),
            Factors::Cholesky(c) => Some(c.solve(b)),
            Factors::Lu(lu) if !lu.is_singular() => Some(lu.solve(b)),
            Factors::Lu(_) => None,
        }
    }

    /// Solves `ζᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Option<Vec<f64>> {
        match &self.factors {
            Factors::None => None,
            Factors::Triangular(order) => Some(linalg::triangular_solve_transpose(&self.zeta, order, b)),
            Factors::Cholesky(c) => Some(c.solve(b)),
            Factors::Lu(lu) if !lu.is_singular() => Some(lu.solve_transpose(b)),
            Factors::Lu(_) => None,
        }
    }

    fn residuals(&self, w: &[f64], v: &[f64]) -> f64 {
        let rw = linalg::norm_inf(&self.zeta.mul_vec(w).iter().map(|x| x - 1.0).collect::<Vec<_>>());
        let rv = if self.symmetric {
            0.0
        } else {
            linalg::norm_inf(&self.zeta.vec_mul(v).iter().map(|x| x - 1.0).collect::<Vec<_>>())
        };
        rw.max(rv)
    }

    /// Weighting, coweighting and magnitude of this system.
    pub fn magnitude(&self, opts: &SolverOptions) -> MagnitudeResult {
        let n = self.len();
        let ones = vec![1.0; n];
        let mut diagnostics = Diagnostics { rcond: Some(self.rcond), ..Diagnostics::default() };
        if n == 0 {
            diagnostics.residual = Some(0.0);
            return MagnitudeResult {
                magnitude: Some(0.0),
                weighting: Some(Vec::new()),
                coweighting: Some(Vec::new()),
                status: Status::Solved,
                method: Method::Empty,
                diagnostics,
            };
        }
        if !self.is_singular() {
            let w = self.solve(&ones).expect("nonsingular system has factors");
            let v = if self.symmetric { w.clone() } else { self.solve_transpose(&ones).expect("factors") };
            diagnostics.residual = Some(self.residuals(&w, &v));
            diagnostics.low_confidence = self.rcond < RCOND_LOW_CONFIDENCE.max(opts.rcond_threshold);
            let method = match self.factorization {
                Factorization::Triangular => Method::Triangular,
                Factorization::Cholesky => Method::Cholesky,
                _ => Method::Lu,
            };
            return MagnitudeResult {
                magnitude: Some(w.iter().sum()),
                weighting: Some(w),
                coweighting: Some(v),
                status: Status::Solved,
                method,
                diagnostics,
            };
        }
        diagnostics.low_confidence = true;
        let cutoff = (10.0 * opts.rcond_threshold).max(1e-14);
        let tol = opts.residual_tol * (n as f64).sqrt();
        let w = linalg::least_squares(&self.zeta, &ones, cutoff);
        let v = if self.symmetric {
            w.clone()
        } else {
            linalg::least_squares(&self.zeta.transpose(), &ones, cutoff)
        };
        if let (Some(w), Some(v)) = (w, v) {
            let r = self.residuals(&w, &v);
            diagnostics.residual = Some(r);
            if r < tol {
                return MagnitudeResult {
                    magnitude: Some(w.iter().sum()),
                    weighting: Some(w),
                    coweighting: Some(v),
                    status: Status::SingularConsistent,
                    method: Method::LeastSquares,
                    diagnostics,
                };
            }
        }
        MagnitudeResult {
            magnitude: None,
            weighting: None,
            coweighting: None,
            status: Status::SingularNoWeighting,
            method: Method::LeastSquares,
            diagnostics,
        }
    }
}

pub fn similarity(space: &FiniteMetricSpace) -> SimilaritySystem {
    similarity_with(space, &SolverOptions::default())
}

pub fn similarity_with(space: &FiniteMetricSpace, opts: &SolverOptions) -> SimilaritySystem {
    SimilaritySystem::new(zeta_matrix(space, 1.0), space.is_symmetric(), opts)
}

/// Similarity system of `tA`, built without materializing the scaled space.
pub fn similarity_at_scale(space: &FiniteMetricSpace, t: f64, opts: &SolverOptions) -> SimilaritySystem {
    SimilaritySystem::new(zeta_matrix(space, t), space.is_symmetric(), opts)
}

pub fn magnitude(space: &FiniteMetricSpace) -> MagnitudeResult {
    magnitude_with(space, &SolverOptions::default())
}

pub fn magnitude_with(space: &FiniteMetricSpace, opts: &SolverOptions) -> MagnitudeResult {
    similarity_with(space, opts).magnitude(opts)
}

/// Magnitude of `tA`.
pub fn magnitude_at_scale(space: &FiniteMetricSpace, t: f64, opts: &SolverOptions) -> MagnitudeResult {
    similarity_at_scale(space, t, opts).magnitude(opts)
}

/// Magnitude as a plain number, `None` when undefined.
pub fn magnitude_value(space: &FiniteMetricSpace) -> Option<f64> {
    let opts = SolverOptions { eigenvalues: false, ..SolverOptions::default() };
    magnitude_with(space, &opts).magnitude
}

/// `μ_A = ζ_A⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusMatrix {
    pub mu: Matrix,
}

impl MobiusMatrix {
    /// Row sums: the weighting.
    pub fn weighting(&self) -> Vec<f64> {
        (0..self.mu.n()).map(|i| self.mu.row(i).iter().sum()).collect()
    }

    /// Column sums: the coweighting.
    pub fn coweighting(&self) -> Vec<f64> {
        self.mu.vec_mul(&vec![1.0; self.mu.n()])
    }

    /// Sum of all entries; the magnitude (the Euler characteristic for posets).
    pub fn total(&self) -> f64 {
        self.mu.sum()
    }
}

pub fn mobius(space: &FiniteMetricSpace) -> Result<MobiusMatrix> {
    let opts = SolverOptions { eigenvalues: false, ..SolverOptions::default() };
    let sys = similarity_with(space, &opts);
    if sys.is_singular() {
        return Err(Error::SingularSimilarity { rcond: sys.rcond() });
    }
    let n = sys.len();
    let mut mu = Matrix::zeros(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = sys.solve(&e).expect("nonsingular system has factors");
        e[j] = 0.0;
        for (i, v) in col.into_iter().enumerate() {
            mu.set(i, j, v);
        }
    }
    Ok(MobiusMatrix { mu })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdCertificate {
    pub pd: bool,
    pub min_eigenvalue: f64,
}

/// Positive definiteness of `ζ_A`: Cholesky with a pivot floor, and a
/// condition number above the singularity threshold.
pub fn is_positive_definite(space: &FiniteMetricSpace) -> Result<PdCertificate> {
    if !space.is_symmetric() {
        return Err(Error::AsymmetricSpace);
    }
    Ok(pd_certificate(&similarity(space)))
}

pub(crate) fn pd_certificate(sys: &SimilaritySystem) -> PdCertificate {
    let min_eigenvalue = sys.min_eigenvalue().unwrap_or_else(|| linalg::symmetric_min_eigenvalue(sys.zeta()));
    PdCertificate { pd: sys.cholesky_succeeded() && !sys.is_singular(), min_eigenvalue }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Norm;

    fn uniform(n: usize, t: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_distance_matrix(
            &(0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { t }).collect()).collect::<Vec<_>>(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn similarity_examples() {
        let disc = uniform(3, f64::INFINITY);
        assert_eq!(similarity(&disc).zeta(), &Matrix::identity(3));
        let d = 0.7f64;
        let two = uniform(2, d);
        let z = similarity(&two);
        assert_eq!(z.zeta().rows(), vec![vec![1.0, (-d).exp()], vec![(-d).exp(), 1.0]]);
        let chain = FiniteMetricSpace::from_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(similarity(&chain).zeta().rows(), vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn small_magnitudes() {
        assert_eq!(magnitude(&FiniteMetricSpace::empty()).magnitude, Some(0.0));
        assert_eq!(magnitude(&uniform(1, 1.0)).magnitude, Some(1.0));
        for d in [0.01, 0.5, 1.0, 3.0, 10.0] {
            let m = magnitude(&uniform(2, d)).magnitude.unwrap();
            assert!((m - (1.0 + (d / 2.0).tanh())).abs() < 1e-13);
        }
        assert_eq!(magnitude(&uniform(4, f64::INFINITY)).magnitude, Some(4.0));
    }

    #[test]
    fn real_line_weights() {
        let xs = [0.0, 0.4, 1.5, 1.6, 4.0];
        let s = FiniteMetricSpace::from_points(&xs.iter().map(|x| vec![*x]).collect::<Vec<_>>(), Norm::L2).unwrap();
        let r = magnitude(&s);
        assert_eq!(r.status, Status::Solved);
        assert_eq!(r.method, Method::Cholesky);
        let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let expect = 1.0 + gaps.iter().map(|g| (g / 2.0).tanh()).sum::<f64>();
        assert!((r.magnitude.unwrap() - expect).abs() < 1e-12);
        let th = |i: usize| if i == 0 || i > gaps.len() { 1.0 } else { (gaps[i - 1] / 2.0).tanh() };
        for (i, w) in r.weighting.unwrap().iter().enumerate() {
            assert!((w - 0.5 * (th(i) + th(i + 1))).abs() < 1e-12);
        }
    }

    #[test]
    fn bipartite_singularity_has_no_weighting() {
        let t = 2f64.sqrt().ln();
        let k32 = crate::metric::FiniteMetricSpace::from_graph(
            &["a0", "a1", "a2", "b0", "b1"],
            &[
                ("a0", "b0", None),
                ("a0", "b1", None),
                ("a1", "b0", None),
                ("a1", "b1", None),
                ("a2", "b0", None),
                ("a2", "b1", None),
            ],
            t,
        )
        .unwrap();
        let r = magnitude(&k32);
        assert_eq!(r.status, Status::SingularNoWeighting);
        assert!(r.magnitude.is_none());
        assert!(!is_positive_definite(&k32).unwrap().pd);
        assert!(matches!(mobius(&k32), Err(Error::SingularSimilarity { .. })));
    }

    #[test]
    fn mobius_examples() {
        let one = uniform(1, 1.0);
        assert_eq!(mobius(&one).unwrap().mu, Matrix::identity(1));
        let chain = FiniteMetricSpace::from_poset(&["a", "b"], &[("a", "b")]).unwrap();
        let mu = mobius(&chain).unwrap();
        assert_eq!(mu.mu.rows(), vec![vec![1.0, -1.0], vec![0.0, 1.0]]);
        assert_eq!(mu.total(), 1.0);
        let s = FiniteMetricSpace::from_points(&[vec![0.0], vec![0.5], vec![2.0]], Norm::L2).unwrap();
        let mu = mobius(&s).unwrap();
        let w = magnitude(&s).weighting.unwrap();
        for (a, b) in mu.weighting().iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn asymmetric_spaces_use_both_solves() {
        // A directed 3-cycle with finite one-way distances.
        let inf = f64::INFINITY;
        let m = vec![vec![0.0, 1.0, 2.0], vec![2.0, 0.0, 1.0], vec![1.0, 2.0, 0.0]];
        let s = FiniteMetricSpace::from_distance_matrix(&m, true).unwrap();
        let r = magnitude(&s);
        let sw: f64 = r.weighting.as_ref().unwrap().iter().sum();
        let sv: f64 = r.coweighting.as_ref().unwrap().iter().sum();
        assert!((sw - sv).abs() < 1e-12);
        let chain = FiniteMetricSpace::from_distance_matrix(&[vec![0.0, 0.5], vec![inf, 0.0]], true).unwrap();
        let r = magnitude(&chain);
        assert_eq!(r.method, Method::Triangular);
        assert!((r.magnitude.unwrap() - (2.0 - (-0.5f64).exp())).abs() < 1e-15);
        assert!(matches!(is_positive_definite(&chain), Err(Error::AsymmetricSpace)));
    }

    #[test]
    fn small_spaces_are_positive_definite() {
        let m = vec![vec![0.0, 1.0, 1.9], vec![1.0, 0.0, 1.0], vec![1.9, 1.0, 0.0]];
        let s = FiniteMetricSpace::from_distance_matrix(&m, false).unwrap();
        let c = is_positive_definite(&s).unwrap();
        assert!(c.pd && c.min_eigenvalue > 0.0);
    }
}
