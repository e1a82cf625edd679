//! Euler characteristics of posets as magnitudes of generalized spaces.

use metric_magnitude::engine::{magnitude, mobius};
use metric_magnitude::io::parse_poset;

fn main() -> metric_magnitude::Result<()> {
    let examples = [
        ("chain", "a < b < c < d"),
        ("antichain", "a\nb\nc"),
        ("circle", "n < e\nn < w\ns < e\ns < w"),
        ("bounded", "0 < x < 1\n0 < y < 1"),
    ];
    for (name, text) in examples {
        let p = parse_poset(text)?;
        println!("{name:>9}: chi = {}", magnitude(&p).magnitude.unwrap());
    }

    let diamond = parse_poset("0 < x < 1\n0 < y < 1")?;
    let mu = mobius(&diamond)?;
    println!("Mobius matrix of the diamond ({:?}):", diamond.labels());
    for i in 0..diamond.len() {
        println!("  {:?}", mu.mu.row(i));
    }
    Ok(())
}
