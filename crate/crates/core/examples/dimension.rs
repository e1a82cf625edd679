//! Growth exponents of magnitude functions.

use metric_magnitude::compact::{closed_form, grid_magnitude, GridOptions};
use metric_magnitude::function::{dimension_estimate, growth_fit, sample_function, FitOptions, ScaleGrid};
use metric_magnitude::{spaces, RegionSpec};

fn main() -> metric_magnitude::Result<()> {
    let finite = sample_function(&spaces::hamming(2, 3), &"0.1:100:40:log".parse::<ScaleGrid>()?)?;
    println!("finite space: {:.4}", dimension_estimate(&finite)?.exponent);

    let ts = ScaleGrid::log(1.0, 100.0, 41)?.points();
    for n in 1..=3 {
        let cube = RegionSpec::cuboid(&vec![1.0; n], 1)?;
        let pts: Vec<(f64, f64)> = ts.iter().map(|t| (*t, closed_form(&cube, *t).unwrap())).collect();
        println!("l1 cube of dimension {n}: {:.4}", growth_fit(&pts, &FitOptions::default())?.exponent);
    }

    let square = RegionSpec::cuboid(&[1.0, 1.0], 2)?;
    let pts = ScaleGrid::log(1.0, 20.0, 12)?
        .points()
        .into_iter()
        .map(|t| grid_magnitude(&square, t, 1.0 / 16.0, &GridOptions::default()).map(|r| (t, r.magnitude.unwrap())))
        .collect::<metric_magnitude::Result<Vec<_>>>()?;
    let fit = growth_fit(&pts, &FitOptions::default())?;
    println!(
        "unit square, 17x17 grid: {:.4} on [{:.2}, {:.2}], raw slope {:.4}",
        fit.exponent, fit.window[0], fit.window[1], fit.raw_slope
    );
    Ok(())
}
