//! Monotone lower bounds for regions without a closed form, from nested grids.

use metric_magnitude::compact::{grid_approximate, halving};
use metric_magnitude::region::Shape;
use metric_magnitude::RegionSpec;

fn main() -> metric_magnitude::Result<()> {
    let regions = [
        ("disk", RegionSpec::ball(1.0, 2, 2)?),
        ("l1 square", RegionSpec::cuboid(&[1.0, 1.0], 1)?),
        ("triangle", RegionSpec::new(Shape::Polygon { vertices: vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]] }, 2)?),
    ];
    for (name, region) in regions {
        let report = grid_approximate(&region, 1.0, &halving(0.25, 4))?;
        println!("{name}:");
        for row in &report.rows {
            println!("  delta {:<8} {:>5} points  {:.8}", row.delta, row.n_points, row.magnitude.unwrap_or(f64::NAN));
        }
        println!(
            "  extrapolated {:.6}, closed form {:?}, reference {:?}, volume bound {:.4}",
            report.extrapolated.unwrap_or(f64::NAN),
            report.closed_form,
            report.conjecture_rhs,
            report.lower_bound_vol
        );
    }
    Ok(())
}
