//! Exact magnitudes of compact sets with closed forms, and intrinsic volumes.

use metric_magnitude::compact::{
    compact_union_magnitude, conjecture_rhs, cuboid_magnitude, intrinsic_volumes, real_subset_magnitude,
    real_subset_quadrature,
};
use metric_magnitude::region::Shape;
use metric_magnitude::RegionSpec;

fn main() -> metric_magnitude::Result<()> {
    let a = Shape::IntervalUnion { components: vec![[0.0, 0.0], [1.0, 2.0]] };
    let q = real_subset_quadrature(&a, 1e-12)?;
    println!("{{0}} u [1,2]: {:.12} (quadrature {:.12} +- {:.1e})", real_subset_magnitude(&a)?, q.value, q.error);

    let left = Shape::IntervalUnion { components: vec![[0.0, 1.0]] };
    let right = Shape::IntervalUnion { components: vec![[1.0, 3.0]] };
    println!("[0,1] u [1,3] by inclusion-exclusion: {}", compact_union_magnitude(&left, &right)?);

    let c = cuboid_magnitude(&[1.0, 2.0, 3.0])?;
    println!("l1 box 1x2x3: |A| = {}, V' = {:?}", c.magnitude, c.intrinsic_volumes);

    for (name, region) in [
        ("disk", RegionSpec::ball(1.0, 2, 2)?),
        ("square", RegionSpec::cuboid(&[1.0, 1.0], 2)?),
        ("l1 ball", RegionSpec::ball(1.0, 3, 1)?),
    ] {
        let iv = intrinsic_volumes(&region)?;
        println!("{name:>8}: {:?} volumes {:?}, reference at t = 1: {:.6}", iv.kind, iv.values, conjecture_rhs(&region, 1.0)?);
    }
    Ok(())
}
