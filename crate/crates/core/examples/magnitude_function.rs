//! Sample a magnitude function and locate its singularities.

use metric_magnitude::engine::formulas;
use metric_magnitude::function::{asymptote_check, find_singularities, sample_function, stability_scan, ScaleGrid};
use metric_magnitude::spaces;

fn main() -> metric_magnitude::Result<()> {
    let k = spaces::complete_bipartite(3, 2, 1.0);
    let profile = sample_function(&k, &"0.05:4:16".parse::<ScaleGrid>()?)?;
    println!("{:>8} {:>14} {:>14}", "t", "|tK32|", "formula");
    for s in &profile.samples {
        println!("{:>8.4} {:>14.6} {:>14.6}", s.t, s.magnitude.unwrap_or(f64::NAN), formulas::k32(s.t));
    }

    for s in find_singularities(&k, 0.05, 4.0) {
        println!("singularity at t = {:.12} (ln sqrt 2 = {:.12})", s.t, 2f64.sqrt().ln());
    }

    let scan = stability_scan(&k, &ScaleGrid::linear(0.05, 4.0, 80)?.points())?;
    println!("positive definite beyond the last singularity: {}", scan.pd_beyond_last_singularity);

    let a = asymptote_check(&spaces::k33_plus_triangle(1.0), 40.0);
    println!("|tA| at t = {} is {:.9}, approaching #A = {}", a.t_max, a.limit_estimate.unwrap_or(f64::NAN), a.n);
    Ok(())
}
