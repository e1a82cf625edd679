use metric_magnitude::compact::{
    closed_form, cuboid_magnitude, grid_approximate, grid_magnitude, halving, real_subset_magnitude, GridOptions,
};
use metric_magnitude::engine::{magnitude, magnitude_at_scale, SolverOptions, Status};
use metric_magnitude::function::{
    growth_fit, profile_with_singularities, sample_function, FitOptions, ScaleGrid, ScanOptions,
};
use metric_magnitude::region::Shape;
use metric_magnitude::{spaces, FiniteMetricSpace, RegionSpec};
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = FiniteMetricSpace> {
    (2usize..=6).prop_flat_map(|n| {
        (Just(n), prop::collection::vec((0usize..6, 0usize..6, 0.5..2.0f64), n..3 * n)).prop_map(|(n, extra)| {
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let mut edges: Vec<(String, String, Option<f64>)> =
                (1..n).map(|i| (names[i - 1].clone(), names[i].clone(), Some(1.0))).collect();
            edges.extend(
                extra.into_iter().filter(|(i, j, _)| i != j && *i < n && *j < n).map(|(i, j, l)| {
                    (names[i].clone(), names[j].clone(), Some(l))
                }),
            );
            FiniteMetricSpace::from_graph(&names, &edges, 1.0).expect("connected graph")
        })
    })
}

fn real_points() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(0u32..1000, 1..20).prop_map(|s| s.into_iter().map(|x| x as f64 / 100.0).collect())
}

fn interval_union() -> impl Strategy<Value = RegionSpec> {
    prop::collection::vec((0.0..1.0f64, 0.1..1.5f64), 1..4).prop_map(|parts| {
        let mut x = 0.0;
        let components = parts
            .into_iter()
            .map(|(len, gap)| {
                let c = [x, x + len];
                x += len + gap;
                c
            })
            .collect();
        RegionSpec::new(Shape::IntervalUnion { components }, 1).expect("disjoint")
    })
}

fn region() -> impl Strategy<Value = RegionSpec> {
    prop_oneof![
        interval_union(),
        (prop::collection::vec(0.0..1.5f64, 1..=2), 1u8..=2).prop_map(|(s, p)| RegionSpec::cuboid(&s, p).unwrap()),
        (0.2..1.0f64, 1usize..=2, 1u8..=2).prop_map(|(r, dim, p)| {
            RegionSpec::new(Shape::Ball { radius: r, dim }, p).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn positive_definite_beyond_last_singularity(space in small_graph()) {
        let grid = ScaleGrid::log(0.02, 8.0, 60).unwrap();
        let scan = ScanOptions { per_decade: 512, ..ScanOptions::default() };
        let p = profile_with_singularities(&space, &grid, &SolverOptions::default(), &scan).unwrap();
        let last = p.singularities.iter().map(|s| s.t).fold(0.0, f64::max);
        for s in p.samples.iter().filter(|s| s.t > last) {
            prop_assert!(s.status.is_defined());
            prop_assert!(s.min_eigenvalue.unwrap() > 0.0, "t = {}", s.t);
        }
    }

    #[test]
    fn magnitude_function_is_locally_analytic(space in small_graph(), t in 0.05..5.0f64) {
        let scan = ScanOptions { per_decade: 512, ..ScanOptions::default() };
        let near = metric_magnitude::function::find_singularities_with(&space, 0.01, 10.0, &scan)
            .iter()
            .any(|s| (s.t - t).abs() < 1e-2 * t);
        prop_assume!(!near);
        let opts = SolverOptions::default();
        let a = magnitude_at_scale(&space, t, &opts);
        prop_assume!(a.status == Status::Solved && !a.diagnostics.low_confidence);
        let b = magnitude_at_scale(&space, t * (1.0 + 1e-9), &opts);
        prop_assert!((a.magnitude.unwrap() - b.magnitude.unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn subsets_of_the_line_grow_with_scale(pts in real_points()) {
        let space = spaces::real_line(&pts).unwrap();
        let p = sample_function(&space, &ScaleGrid::log(0.01, 50.0, 40).unwrap()).unwrap();
        let m: Vec<f64> = p.samples.iter().map(|s| s.magnitude.unwrap()).collect();
        prop_assert!(m.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{m:?}");
    }

    #[test]
    fn polynomial_growth_is_recovered(
        k in 1usize..=4,
        coeffs in prop::collection::vec(0.1..10.0f64, 5),
    ) {
        // Coefficient ratios reach 100, so the top decade must start past t = 100.
        let pts: Vec<(f64, f64)> = ScaleGrid::log(1.0, 1e4, 81)
            .unwrap()
            .points()
            .into_iter()
            .map(|t| (t, (0..=k).map(|i| coeffs[i] * t.powi(i as i32)).sum()))
            .collect();
        let fit = growth_fit(&pts, &FitOptions::default()).unwrap();
        prop_assert!((fit.exponent - k as f64).abs() <= 0.01, "{} vs {k}", fit.exponent);
    }

    #[test]
    fn refinement_is_monotone_and_bounded(r in region(), t in 0.5..3.0f64) {
        let report = grid_approximate(&r, t, &halving(0.5, 3)).unwrap();
        prop_assert!(report.is_monotone(1e-9), "{:?}", report.magnitudes());
        let cap = closed_form(&r, t);
        for m in report.magnitudes() {
            let m = m.unwrap();
            prop_assert!(m >= 1.0 - 1e-12);
            if let Some(c) = cap {
                prop_assert!(m <= c + 1e-9, "{m} > {c}");
            }
        }
    }

    #[test]
    fn l1_grids_factor(sides in prop::collection::vec(0.0..1.5f64, 2..=3), t in 0.5..3.0f64) {
        let delta = 0.25;
        let opts = GridOptions::default();
        let whole = grid_magnitude(&RegionSpec::cuboid(&sides, 1).unwrap(), t, delta, &opts).unwrap();
        let product: f64 = sides
            .iter()
            .map(|s| grid_magnitude(&RegionSpec::interval(*s, 1).unwrap(), t, delta, &opts).unwrap().magnitude.unwrap())
            .product();
        prop_assert!((whole.magnitude.unwrap() - product).abs() <= 1e-10 * product);
    }

    #[test]
    fn finite_subsets_of_the_line_match_the_engine(pts in real_points()) {
        let shape = Shape::IntervalUnion { components: pts.iter().map(|x| [*x, *x]).collect() };
        let direct = magnitude(&spaces::real_line(&pts).unwrap()).magnitude.unwrap();
        prop_assert!((real_subset_magnitude(&shape).unwrap() - direct).abs() <= 1e-10);
    }

    #[test]
    fn cuboid_magnitude_is_its_intrinsic_volume_polynomial(
        sides in prop::collection::vec(0.0..3.0f64, 1..=4),
        t in 0.01..20.0f64,
    ) {
        let c = cuboid_magnitude(&sides).unwrap();
        let poly: f64 = c.intrinsic_volumes.iter().enumerate().map(|(i, v)| v * (t / 2.0).powi(i as i32)).sum();
        let scaled: Vec<f64> = sides.iter().map(|s| s * t).collect();
        let direct = cuboid_magnitude(&scaled).unwrap().magnitude;
        prop_assert!((poly - direct).abs() <= 1e-12 * direct);
    }
}
