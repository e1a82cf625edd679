//! Magnitude, weighting and solver diagnostics of small finite spaces.

use metric_magnitude::engine::{formulas, magnitude, magnitude_at_scale, SolverOptions};
use metric_magnitude::{spaces, FiniteMetricSpace, Norm};

fn main() -> metric_magnitude::Result<()> {
    for d in [0.1, 1.0, 5.0] {
        let two = spaces::uniform(2, d);
        println!("two points at distance {d}: {:.6} (closed form {:.6})", magnitude(&two).magnitude.unwrap(), formulas::two_point(d));
    }

    let cloud = FiniteMetricSpace::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 3.0]], Norm::L2)?;
    let r = magnitude(&cloud);
    println!("planar cloud: |A| = {:.6}, weighting {:?}", r.magnitude.unwrap(), r.weighting.unwrap());
    println!("  solved by {:?}, rcond {:.3e}", r.method, r.diagnostics.rcond.unwrap());

    let k = spaces::complete_bipartite(3, 2, 1.0);
    for t in [0.3, 0.34, 0.35, 1.0] {
        let r = magnitude_at_scale(&k, t, &SolverOptions::default());
        println!("|{t} K32| = {:>12.6} ({})", r.magnitude.unwrap_or(f64::NAN), r.status.as_str());
    }
    Ok(())
}
