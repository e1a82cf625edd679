//! Transitivity of the isometry group, by backtracking.
//!
//! Candidates for the image of a point must share its sorted distance
//! profile (row and column, for asymmetric spaces). Every isometry found is
//! used to grow the known orbit of the base point, so only points outside
//! the current orbit trigger a new search.

use crate::metric::{approx_eq, FiniteMetricSpace};

fn profile(space: &FiniteMetricSpace, a: usize) -> Vec<f64> {
    let n = space.len();
    let mut out: Vec<f64> = space.row(a).to_vec();
    out.sort_by(f64::total_cmp);
    if !space.is_symmetric() {
        let mut col: Vec<f64> = (0..n).map(|b| space.distance(b, a)).collect();
        col.sort_by(f64::total_cmp);
        out.extend(col);
    }
    out
}

fn same_profile(p: &[f64], q: &[f64]) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(x, y)| approx_eq(*x, *y))
}

/// Finds an isometry sending `from` to `to`, as an image table.
pub(crate) fn find_isometry(space: &FiniteMetricSpace, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = space.len();
    let profiles: Vec<Vec<f64>> = (0..n).map(|a| profile(space, a)).collect();
    if !same_profile(&profiles[from], &profiles[to]) {
        return None;
    }
    let compatible: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).filter(|&b| same_profile(&profiles[a], &profiles[b])).collect()).collect();
    // Assign `from` first, then the rest in index order.
    let order: Vec<usize> = std::iter::once(from).chain((0..n).filter(|&a| a != from)).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[from] = to;
    used[to] = true;
    if extend(space, &order, 1, &compatible, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

fn extend(
    space: &FiniteMetricSpace,
    order: &[usize],
    depth: usize,
    compatible: &[Vec<usize>],
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for &y in &compatible[x] {
        if used[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&x2| {
            let y2 = image[x2];
            approx_eq(space.distance(x, x2), space.distance(y, y2))
                && approx_eq(space.distance(x2, x), space.distance(y2, y))
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if extend(space, order, depth + 1, compatible, image, used) {
            return true;
        }
        used[y] = false;
        image[x] = usize::MAX;
    }
    false
}

pub(crate) fn is_homogeneous(space: &FiniteMetricSpace) -> bool {
    let n = space.len();
    if n <= 1 {
        return true;
    }
    let p0 = profile(space, 0);
    if !(1..n).all(|a| same_profile(&p0, &profile(space, a))) {
        return false;
    }
    let mut in_orbit = vec![false; n];
    in_orbit[0] = true;
    let mut orbit = vec![0usize];
    let mut generators: Vec<Vec<usize>> = Vec::new();
    loop {
        // Close the orbit under the generators found so far.
        let mut i = 0;
        while i < orbit.len() {
            let a = orbit[i];
            for g in &generators {
                let b = g[a];
                if !in_orbit[b] {
                    in_orbit[b] = true;
                    orbit.push(b);
                }
            }
            i += 1;
        }
        if orbit.len() == n {
            return true;
        }
        let target = (0..n).find(|&b| !in_orbit[b]).expect("orbit is incomplete");
        match find_isometry(space, 0, target) {
            Some(g) => generators.push(g),
            None => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Norm, ProductMetric};

    #[test]
    fn hamming_cube_is_homogeneous() {
        let f2 = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0]], Norm::L2).unwrap();
        let mut cube = f2.clone();
        for _ in 0..6 {
            cube = cube.tensor_product(&f2, ProductMetric::Sum);
        }
        assert_eq!(cube.len(), 128);
        assert!(is_homogeneous(&cube));
    }

    #[test]
    fn found_isometries_preserve_distances() {
        let c5 = FiniteMetricSpace::from_graph(
            &["0", "1", "2", "3", "4"],
            &[("0", "1", None), ("1", "2", None), ("2", "3", None), ("3", "4", None), ("4", "0", None)],
            1.0,
        )
        .unwrap();
        let g = find_isometry(&c5, 0, 3).unwrap();
        assert_eq!(g[0], 3);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(c5.distance(a, b), c5.distance(g[a], g[b]));
            }
        }
    }

    #[test]
    fn path_is_not_homogeneous_but_has_reflection() {
        let p = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0], vec![2.0]], Norm::L1).unwrap();
        assert!(find_isometry(&p, 0, 2).is_some());
        assert!(find_isometry(&p, 0, 1).is_none());
        assert!(!is_homogeneous(&p));
    }
}
