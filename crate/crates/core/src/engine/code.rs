//! Linear codes over prime fields under the Hamming metric.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{magnitude_value, CROSS_CHECK_MAX};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Largest number of generator combinations we are willing to enumerate.
pub const ENUMERATION_CAP: u128 = 1 << 22;

/// A code `C ⊆ F_q^N` spanned by the rows of a generator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    pub q: u64,
    pub length: usize,
    pub generators: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeMagnitude {
    pub cardinality: usize,
    /// `A_i`: number of codewords of Hamming weight `i`, for `i = 0..=N`.
    pub weight_enumerator: Vec<u64>,
    /// `#C / W_C(e^{-t})`.
    pub magnitude: f64,
    /// Direct solve on the Hamming space of the codewords, when small.
    pub direct: Option<f64>,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

impl LinearCode {
    pub fn new(q: u64, length: usize, generators: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::UnsupportedField(q));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.len() != length {
                return Err(Error::DimensionMismatch { index, expected: length, found: g.len() });
            }
        }
        Ok(LinearCode { q, length, generators })
    }

    /// All codewords, deduplicated and sorted.
    pub fn codewords(&self) -> Result<Vec<Vec<u64>>> {
        let k = self.generators.len() as u32;
        let count = (self.q as u128).checked_pow(k).unwrap_or(u128::MAX);
        if count > ENUMERATION_CAP {
            return Err(Error::EnumerationTooLarge(count));
        }
        let mut words = BTreeSet::new();
        let mut coeffs = vec![0u64; k as usize];
        loop {
            let mut word = vec![0u64; self.length];
            for (c, g) in coeffs.iter().zip(&self.generators) {
                for (w, x) in word.iter_mut().zip(g) {
                    *w = (*w + c * (x % self.q)) % self.q;
                }
            }
            words.insert(word);
            // Odometer increment over F_q^k.
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return Ok(words.into_iter().collect());
                }
                coeffs[i] += 1;
                if coeffs[i] < self.q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    pub fn weight_enumerator(&self) -> Result<Vec<u64>> {
        let mut a = vec![0u64; self.length + 1];
        for w in self.codewords()? {
            a[w.iter().filter(|x| **x != 0).count()] += 1;
        }
        Ok(a)
    }
}

/// Hamming-metric space on a list of words.
pub fn hamming_space(words: &[Vec<u64>]) -> FiniteMetricSpace {
    let n = words.len();
    let mut dist = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            dist[a * n + b] = words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count() as f64;
        }
    }
    let labels = words.iter().map(|w| w.iter().map(u64::to_string).collect::<Vec<_>>().join("")).collect();
    FiniteMetricSpace::from_parts(labels, dist, false)
}

/// Magnitude of `tC` through the weight enumerator, cross-checked by a
/// direct solve when `#C` is small.
pub fn magnitude_code(code: &LinearCode, t: f64) -> Result<CodeMagnitude> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonpositiveScale(t));
    }
    let words = code.codewords()?;
    let mut weight_enumerator = vec![0u64; code.length + 1];
    for w in &words {
        weight_enumerator[w.iter().filter(|x| **x != 0).count()] += 1;
    }
    let x = (-t).exp();
    let w_at_x: f64 = weight_enumerator.iter().enumerate().map(|(i, a)| *a as f64 * x.powi(i as i32)).sum();
    let magnitude = words.len() as f64 / w_at_x;
    let direct = if words.len() <= CROSS_CHECK_MAX {
        hamming_space(&words).scale(t).ok().and_then(|s| magnitude_value(&s))
    } else {
        None
    };
    Ok(CodeMagnitude { cardinality: words.len(), weight_enumerator, magnitude, direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::formulas;

    #[test]
    fn trivial_code() {
        let c = LinearCode::new(2, 4, vec![vec![0, 0, 0, 0]]).unwrap();
        let m = magnitude_code(&c, 0.7).unwrap();
        assert_eq!(m.weight_enumerator, vec![1, 0, 0, 0, 0]);
        assert_eq!(m.magnitude, 1.0);
    }

    #[test]
    fn full_binary_code_is_hamming_space() {
        let n = 5;
        let gens: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        let c = LinearCode::new(2, n, gens).unwrap();
        let m = magnitude_code(&c, 0.9).unwrap();
        assert_eq!(m.cardinality, 32);
        assert_eq!(m.weight_enumerator, vec![1, 5, 10, 10, 5, 1]);
        assert!((m.magnitude - formulas::hamming(2, 5, 0.9)).abs() < 1e-12);
        assert!((m.direct.unwrap() - m.magnitude).abs() < 1e-10);
    }

    #[test]
    fn repetition_code() {
        let c = LinearCode::new(2, 3, vec![vec![1, 1, 1]]).unwrap();
        let t = 0.4;
        let m = magnitude_code(&c, t).unwrap();
        assert_eq!(m.weight_enumerator, vec![1, 0, 0, 1]);
        assert!((m.magnitude - 2.0 / (1.0 + (-3.0 * t).exp())).abs() < 1e-14);
        assert!((m.direct.unwrap() - m.magnitude).abs() < 1e-12);
    }

    #[test]
    fn ternary_code_and_limits() {
        let c = LinearCode::new(3, 2, vec![vec![1, 2]]).unwrap();
        assert_eq!(c.weight_enumerator().unwrap(), vec![1, 0, 2]);
        assert!(matches!(LinearCode::new(4, 2, vec![]), Err(Error::UnsupportedField(4))));
        let big = LinearCode::new(2, 30, vec![vec![0; 30]; 30]).unwrap();
        assert!(matches!(big.codewords(), Err(Error::EnumerationTooLarge(_))));
    }
}
