//! Built-in verification suites: closed forms against direct solves.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compact::{closed_form, conjecture_rhs, grid_magnitude, real_subset_magnitude, real_subset_quadrature, GridOptions};
use crate::engine::{self, formulas, is_positive_definite, magnitude, magnitude_at_scale, SolverOptions};
use crate::error::{Error, Result};
use crate::function::find_singularities;
use crate::metric::{FiniteMetricSpace, Norm, ProductMetric};
use crate::region::{RegionSpec, Shape};
use crate::spaces;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ClosedForms,
    Pathology,
    Products,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "closed-forms" => Suite::ClosedForms,
            "pathology" => Suite::Pathology,
            "products" => Suite::Products,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite `{s}` (closed-forms, pathology, products, all)"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Largest `|a − b|` over pairs, `∞` if any side is missing.
fn worst(pairs: impl IntoIterator<Item = (Option<f64>, f64)>) -> f64 {
    pairs.into_iter().map(|(a, b)| a.map_or(f64::INFINITY, |a| (a - b).abs())).fold(0.0, f64::max)
}

fn within(name: &str, err: f64, tol: f64) -> Check {
    check(name, err <= tol, format!("max error {err:.3e} (tolerance {tol:.0e})"))
}

/// Deterministic points in `[0, 1)`: fractional parts of `k φ`.
fn golden(k: usize) -> f64 {
    (k as f64 * 0.618_033_988_749_894_9).fract()
}

fn closed_forms() -> Vec<Check> {
    let mut out = Vec::new();
    let two = (0..50).map(|k| {
        let d = 0.01 + (10.0 - 0.01) * k as f64 / 49.0;
        (magnitude(&spaces::uniform(2, d)).magnitude, formulas::two_point(d))
    });
    out.push(within("two-point", worst(two), 1e-12));

    let mut err: f64 = 0.0;
    for size in [1, 2, 5, 17, 40] {
        let mut pts: Vec<f64> = (0..size).map(|k| 10.0 * golden(k + 3 * size)).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let r = magnitude(&spaces::real_line(&pts).expect("distinct points"));
        err = err.max(worst([(r.magnitude, formulas::real_line(&pts))]));
        let w = r.weighting.unwrap_or_default();
        err = err.max(worst(w.iter().zip(formulas::real_line_weighting(&pts)).map(|(a, b)| (Some(*a), b))));
    }
    out.push(within("real-line", err, 1e-10));

    let mut err: f64 = 0.0;
    for n in [2, 5, 13, 50] {
        for t in [0.05, 0.5, 1.0, 3.0] {
            err = err.max(worst([(magnitude(&spaces::uniform(n, t)).magnitude, formulas::complete_graph(n, t))]));
        }
    }
    out.push(within("homogeneous", err, 1e-10));

    let mut err: f64 = 0.0;
    for len in 1..=6 {
        let h = spaces::hamming(2, len);
        for t in [0.3, 1.0] {
            err = err.max(worst([(magnitude(&h.scale(t).expect("t > 0")).magnitude, formulas::hamming(2, len, t))]));
        }
    }
    out.push(within("hamming", err, 1e-10));

    let ts = [0.01, 0.1, 1.0, 4.0];
    let err = worst(ts.iter().map(|t| (magnitude(&spaces::k33_plus_triangle(*t)).magnitude, formulas::k33_plus_triangle(*t))));
    out.push(within("k33-plus-triangle", err, 1e-10));

    let s = Shape::IntervalUnion { components: vec![[0.0, 0.0], [1.0, 2.0]] };
    let q = real_subset_quadrature(&s, 1e-10).map(|q| q.value).ok();
    out.push(within("sech2-integral", worst([(q, real_subset_magnitude(&s).unwrap_or(f64::NAN))]), 1e-9));

    let chain = magnitude(&spaces::chain(5)).magnitude;
    let anti = magnitude(&spaces::antichain(4)).magnitude;
    out.push(check("poset-euler", chain == Some(1.0) && anti == Some(4.0), format!("chain {chain:?}, antichain {anti:?}")));
    out
}

fn pathology() -> Vec<Check> {
    let mut out = Vec::new();
    let k = spaces::complete_bipartite(3, 2, 1.0);
    let opts = SolverOptions::default();
    let root = 2f64.sqrt().ln();
    let ts: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).filter(|t| (t - root).abs() > 0.01).collect();
    let err = worst(ts.iter().map(|t| (magnitude_at_scale(&k, *t, &opts).magnitude, formulas::k32(*t))));
    out.push(within("k32-formula", err, 1e-10));

    let roots = find_singularities(&k, 0.05, 4.0);
    let located = roots.len() == 1 && (roots[0].t - root).abs() <= 1e-6;
    out.push(check("k32-singularity", located, format!("roots {:?}", roots.iter().map(|r| r.t).collect::<Vec<_>>())));

    let mid = 0.5 * ((7.0f64 / 5.0).ln() + root);
    let m = magnitude_at_scale(&k, mid, &opts).magnitude;
    out.push(check("k32-negative", m.is_some_and(|m| m < 0.0), format!("|tK32| = {m:?} at t = {mid:.6}")));

    let m = magnitude_at_scale(&k, 0.35, &opts).magnitude;
    out.push(check("k32-overshoot", m.is_some_and(|m| m > 5.0), format!("|0.35 K32| = {m:?}")));

    let below = is_positive_definite(&k.scale(0.34).expect("t > 0")).map(|c| c.pd).unwrap_or(true);
    let above = is_positive_definite(&k.scale(0.35).expect("t > 0")).map(|c| c.pd).unwrap_or(false);
    out.push(check("k32-definiteness", !below && above, format!("pd at 0.34: {below}, at 0.35: {above}")));

    let m = magnitude(&spaces::k33_plus_triangle(1e-4)).magnitude;
    out.push(within("six-fifths-limit", worst([(m, 1.2)]), 1e-3));
    out
}

fn products() -> Vec<Check> {
    let mut out = Vec::new();
    let a = spaces::real_line(&[0.0, 0.4, 1.5]).expect("distinct");
    let b = spaces::complete_bipartite(2, 3, 0.8);
    let c = spaces::y_graph(0.6);
    let mut err: f64 = 0.0;
    for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
        let direct = magnitude(&x.tensor_product(y, ProductMetric::Sum)).magnitude;
        let prod = magnitude(x).magnitude.zip(magnitude(y).magnitude).map(|(p, q)| p * q).unwrap_or(f64::NAN);
        err = err.max(worst([(direct, prod)]));
    }
    out.push(within("tensor-multiplicative", err, 1e-10));

    let r = engine::product_magnitude(&a, &c);
    let disc = r.as_ref().ok().and_then(|r| r.diagnostics.discrepancy).unwrap_or(f64::INFINITY);
    out.push(within("product-closed-form", disc, 1e-9));

    let square = RegionSpec::cuboid(&[1.0, 1.0], 1).expect("valid");
    let seg = RegionSpec::interval(1.0, 1).expect("valid");
    let opts = GridOptions::default();
    let mut err: f64 = 0.0;
    for delta in [0.5, 0.25, 0.125] {
        let two = grid_magnitude(&square, 2.0, delta, &opts).ok().and_then(|r| r.magnitude);
        let one = grid_magnitude(&seg, 2.0, delta, &opts).ok().and_then(|r| r.magnitude).unwrap_or(f64::NAN);
        err = err.max(worst([(two, one * one)]));
    }
    out.push(within("l1-grid-product", err, 1e-10));

    let cuboid = RegionSpec::cuboid(&[1.0, 2.0, 0.5], 1).expect("valid");
    let err = worst([1.0, 2.5, 7.0].iter().map(|t| (closed_form(&cuboid, *t), conjecture_rhs(&cuboid, *t).unwrap_or(f64::NAN))));
    out.push(within("cuboid-polynomial", err, 1e-12));

    let pts: Vec<Vec<f64>> = (0..12).map(|k| vec![3.0 * golden(k), 3.0 * golden(k + 40)]).collect();
    let cloud = FiniteMetricSpace::from_points(&pts, Norm::L1).expect("distinct");
    let cert = is_positive_definite(&cloud).map(|c| c.pd).unwrap_or(false);
    out.push(check("l1-cloud-pd", cert, "ℓ₁ cloud of 12 points".into()));
    out
}

pub fn run_suite(suite: Suite) -> VerifyReport {
    let checks = match suite {
        Suite::ClosedForms => closed_forms(),
        Suite::Pathology => pathology(),
        Suite::Products => products(),
        Suite::All => {
            let mut all = closed_forms();
            all.extend(pathology());
            all.extend(products());
            all
        }
    };
    VerifyReport { suite, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for suite in [Suite::ClosedForms, Suite::Pathology, Suite::Products] {
            let r = run_suite(suite);
            assert!(r.passed(), "{:#?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
