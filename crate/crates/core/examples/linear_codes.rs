//! Magnitude of a linear code from its weight enumerator.

use metric_magnitude::engine::{magnitude_code, LinearCode};

fn main() -> metric_magnitude::Result<()> {
    // The [7,4] Hamming code.
    let code = LinearCode::new(
        2,
        7,
        vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
    )?;
    for t in [0.1, 0.5, 1.0, 3.0] {
        let m = magnitude_code(&code, t)?;
        println!("t = {t}: |tC| = {:.10}, direct {:.10}", m.magnitude, m.direct.unwrap_or(f64::NAN));
    }
    println!("weight enumerator {:?}", magnitude_code(&code, 1.0)?.weight_enumerator);
    Ok(())
}
