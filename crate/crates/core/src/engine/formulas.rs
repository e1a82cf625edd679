//! Closed-form magnitudes and magnitude functions of standard spaces.

/// Two points at distance `d`: `1 + tanh(d/2)`.
pub fn two_point(d: f64) -> f64 {
    1.0 + (d / 2.0).tanh()
}

/// `tK_n`, the `n`-point space with all distances `t`.
pub fn complete_graph(n: usize, t: f64) -> f64 {
    n as f64 / (1.0 + (n as f64 - 1.0) * (-t).exp())
}

/// `(tF_q)^{⊗N}`, the Hamming space over a `q`-letter alphabet.
pub fn hamming(q: usize, len: u32, t: f64) -> f64 {
    complete_graph(q, t).powi(len as i32)
}

/// `tK_{3,2}`: `(5 − 7e^{−t}) / ((1 + e^{−t})(1 − 2e^{−2t}))`, singular at
/// `t = log √2`.
pub fn k32(t: f64) -> f64 {
    let x = (-t).exp();
    (5.0 - 7.0 * x) / ((1.0 + x) * (1.0 - 2.0 * x * x))
}

/// `K_{3,3}` with the three edges among one side added: `6 / (1 + 4e^{−t})`.
pub fn k33_plus_triangle(t: f64) -> f64 {
    6.0 / (1.0 + 4.0 * (-t).exp())
}

/// Finite subset of ℝ given by its sorted points: `1 + Σ tanh(gap/2)`.
pub fn real_line(sorted: &[f64]) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    1.0 + sorted.windows(2).map(|w| ((w[1] - w[0]) / 2.0).tanh()).sum::<f64>()
}

/// Weighting of a sorted finite subset of ℝ: each point gets half the sum of
/// `tanh(gap/2)` over its two neighbouring gaps, with `tanh ∞ = 1` at the ends.
pub fn real_line_weighting(sorted: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    let half_tanh = |i: usize| {
        if i == 0 || i >= n {
            1.0
        } else {
            ((sorted[i] - sorted[i - 1]) / 2.0).tanh()
        }
    };
    (0..n).map(|i| 0.5 * (half_tanh(i) + half_tanh(i + 1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k32_closed_form_is_the_glued_formula() {
        // Independent route: gluing 2tK_3 and 2tK_2 at distance t.
        for t in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let x = (-t as f64).exp();
            let a = complete_graph(3, 2.0 * t);
            let b = complete_graph(2, 2.0 * t);
            let glued = (a + b - 2.0 * x * a * b) / (1.0 - x * x * a * b);
            assert!((glued - k32(t)).abs() < 1e-12 * glued.abs().max(1.0));
        }
    }

    #[test]
    fn limits() {
        assert!((k33_plus_triangle(1e-9) - 1.2).abs() < 1e-8);
        assert!((complete_graph(5, 60.0) - 5.0).abs() < 1e-12);
        assert_eq!(real_line(&[3.0]), 1.0);
        assert_eq!(real_line_weighting(&[3.0]), vec![1.0]);
    }
}
