//! Dense square-matrix kernels used by the magnitude engine.
//!
//! Matrices are stored row-major in a single `Vec<f64>`. The Cholesky
//! factorization is blocked so the trailing update runs through
//! `matrixmultiply`'s GEMM kernels; everything else is a plain loop.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Block size of the right-looking Cholesky.
const CHOLESKY_BLOCK: usize = 64;
/// Row-block height for the trailing GEMM update.
const UPDATE_ROWS: usize = 256;
/// Largest order for which a full symmetric eigensolve is used.
pub(crate) const DENSE_EIGEN_MAX: usize = 600;

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds a matrix from row-major data. Panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data has wrong length");
        Matrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀ A`, returned as a plain vector.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, xi) in x.iter().enumerate() {
            axpy(*xi, self.row(i), &mut out);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0.0 {
                    axpy(a, other.row(k), &mut out.data[i * n..(i + 1) * n]);
                }
            }
        }
        out
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four independent accumulators so the compiler can vectorize.
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Lower Cholesky factor `A = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// Factors a symmetric matrix. Returns the index of the first
    /// non-positive pivot on failure.
    pub fn new(a: &Matrix) -> Result<Self, usize> {
        Self::new_with_pivot_tol(a, 0.0)
    }

    /// As [`Cholesky::new`], failing when a squared pivot is `≤ pivot_tol`.
    pub fn new_with_pivot_tol(a: &Matrix, pivot_tol: f64) -> Result<Self, usize> {
        let mut l = a.clone();
        cholesky_in_place(&mut l.data, l.n, pivot_tol)?;
        Ok(Cholesky { l })
    }

    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.l.row(i);
            y[i] = (y[i] - dot(&row[..i], &y[..i])) / row[i];
        }
        for i in (0..n).rev() {
            let row = self.l.row(i);
            y[i] /= row[i];
            let xi = y[i];
            for j in 0..i {
                y[j] -= row[j] * xi;
            }
        }
        y
    }

    /// `log det A`; the determinant of a factored matrix is positive.
    pub fn log_det(&self) -> f64 {
        (0..self.l.n).map(|i| 2.0 * self.l.get(i, i).ln()).sum()
    }
}

fn cholesky_in_place(a: &mut [f64], n: usize, pivot_tol: f64) -> Result<(), usize> {
    let mut k = 0;
    while k < n {
        let kb = CHOLESKY_BLOCK.min(n - k);
        let end = k + kb;
        for j in k..end {
            let s = {
                let r = &a[j * n + k..j * n + j];
                dot(r, r)
            };
            let d = a[j * n + j] - s;
            if !(d > pivot_tol) || !d.is_finite() {
                return Err(j);
            }
            let ljj = d.sqrt();
            a[j * n + j] = ljj;
            for i in j + 1..end {
                let s = dot(&a[i * n + k..i * n + j], &a[j * n + k..j * n + j]);
                a[i * n + j] = (a[i * n + j] - s) / ljj;
            }
        }
        for i in end..n {
            for j in k..end {
                let s = dot(&a[i * n + k..i * n + j], &a[j * n + k..j * n + j]);
                a[i * n + j] = (a[i * n + j] - s) / a[j * n + j];
            }
        }
        let mut r0 = end;
        while r0 < n {
            let rows = UPDATE_ROWS.min(n - r0);
            let cols = r0 + rows - end;
            let p = a.as_mut_ptr();
            // SAFETY: C = A[r0..r0+rows, end..r0+rows] is read-write while
            // the operands A[r0.., k..end] and A[end.., k..end] live in
            // columns k..end, disjoint from C's columns. All offsets are in
            // bounds of the n×n buffer.
            unsafe {
                matrixmultiply::dgemm(
                    rows,
                    kb,
                    cols,
                    -1.0,
                    p.add(r0 * n + k),
                    n as isize,
                    1,
                    p.add(end * n + k),
                    1,
                    n as isize,
                    1.0,
                    p.add(r0 * n + end),
                    n as isize,
                    1,
                );
            }
            r0 += rows;
        }
        k = end;
    }
    for i in 0..n {
        for v in &mut a[i * n + i + 1..(i + 1) * n] {
            *v = 0.0;
        }
    }
    Ok(())
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    zero_pivot: bool,
}

impl Lu {
    pub fn new(a: &Matrix) -> Self {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut zero_pivot = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            if pmax == 0.0 || !pmax.is_finite() {
                zero_pivot = true;
                continue;
            }
            let pivot = lu.get(k, k);
            let (top, bottom) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &top[k * n + k + 1..(k + 1) * n];
            for i in 0..n - k - 1 {
                let row = &mut bottom[i * n..(i + 1) * n];
                let l = row[k] / pivot;
                row[k] = l;
                if l != 0.0 {
                    axpy(-l, pivot_row, &mut row[k + 1..]);
                }
            }
        }
        Lu { lu, perm, sign, zero_pivot }
    }

    pub fn is_singular(&self) -> bool {
        self.zero_pivot
    }

    /// Sign and log-magnitude of the determinant. A zero pivot gives
    /// sign 0 and `-inf`.
    pub fn det_sign_log(&self) -> (f64, f64) {
        if self.zero_pivot {
            return (0.0, f64::NEG_INFINITY);
        }
        let mut sign = self.sign;
        let mut log = 0.0;
        for i in 0..self.lu.n {
            let d = self.lu.get(i, i);
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
        (sign, log)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            y[i] -= dot(&row[..i], &y[..i]);
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            y[i] = (y[i] - dot(&row[i + 1..], &y[i + 1..])) / row[i];
        }
        y
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        // Uᵀ z = b (forward, column access done as row axpys)
        let mut z = b.to_vec();
        for i in 0..n {
            let row = self.lu.row(i);
            z[i] /= row[i];
            let zi = z[i];
            for j in i + 1..n {
                z[j] -= row[j] * zi;
            }
        }
        // Lᵀ y = z (backward, unit diagonal)
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let zi = z[i];
            for j in 0..i {
                z[j] -= row[j] * zi;
            }
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }
}

/// Determinant sign and `log|det|` via LU.
pub fn det_sign_log(a: &Matrix) -> (f64, f64) {
    Lu::new(a).det_sign_log()
}

/// Topological order of the off-diagonal support of `a`, if that support
/// is acyclic. In that order `a` is upper triangular.
pub(crate) fn triangular_order(a: &Matrix) -> Option<Vec<usize>> {
    let n = a.n;
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && a.get(i, j) != 0.0 {
                indegree[j] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    ready.reverse();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for j in 0..n {
            if i != j && a.get(i, j) != 0.0 {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    (order.len() == n && (0..n).all(|i| a.get(i, i) != 0.0)).then_some(order)
}

/// Solves `A x = b` for `A` upper triangular under `order`.
pub(crate) fn triangular_solve(a: &Matrix, order: &[usize], b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; a.n];
    for (pos, &i) in order.iter().enumerate().rev() {
        let s: f64 = order[pos + 1..].iter().map(|&j| a.get(i, j) * x[j]).sum();
        x[i] = (b[i] - s) / a.get(i, i);
    }
    x
}

/// Solves `Aᵀ x = b` for `A` upper triangular under `order`.
pub(crate) fn triangular_solve_transpose(a: &Matrix, order: &[usize], b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; a.n];
    for (pos, &j) in order.iter().enumerate() {
        let s: f64 = order[..pos].iter().map(|&i| a.get(i, j) * x[i]).sum();
        x[j] = (b[j] - s) / a.get(j, j);
    }
    x
}

/// Hager–Higham estimate of `‖A⁻¹‖₁` from solves with `A` and `Aᵀ`.
pub(crate) fn inverse_norm1_estimate(
    n: usize,
    solve: impl Fn(&[f64]) -> Vec<f64>,
    solve_t: impl Fn(&[f64]) -> Vec<f64>,
) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = solve(&x);
        est = y.iter().map(|v| v.abs()).sum::<f64>();
        if !est.is_finite() {
            return f64::INFINITY;
        }
        let s: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = solve_t(&s);
        let (j, zmax) = z
            .iter()
            .enumerate()
            .fold((0, -1.0), |b, (i, v)| if v.abs() > b.1 { (i, v.abs()) } else { b });
        if zmax <= dot(&z, &x) || j == last_j {
            break;
        }
        x = vec![0.0; n];
        x[j] = 1.0;
        last_j = j;
    }
    // Higham's alternating-sign safeguard.
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let y = solve(&alt);
    let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    est.max(alt_est)
}

/// Smallest eigenvalue of a symmetric matrix via a full eigensolve.
pub fn symmetric_min_eigenvalue(a: &Matrix) -> f64 {
    if a.n == 0 {
        return f64::INFINITY;
    }
    let eig = SymmetricEigen::new(a.to_nalgebra());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalue of a positive definite matrix by inverse iteration
/// on its Cholesky factor, refined with the Rayleigh quotient.
pub(crate) fn pd_min_eigenvalue(a: &Matrix, chol: &Cholesky) -> f64 {
    // Lanczos with full reorthogonalization on A⁻¹; its top Ritz value is 1/λ_min.
    let n = a.n;
    let steps = n.min(120);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha: Vec<f64> = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut q: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i * 7919) % 13) as f64 / 13.0).collect();
    let nrm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|v| *v /= nrm);
    let mut theta = 0.0;
    for k in 0..steps {
        let mut w = chol.solve(&q);
        let ak = dot(&q, &w);
        basis.push(q);
        alpha.push(ak);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let bk = dot(&w, &w).sqrt();
        let m = k + 1;
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (top, &value) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("nonempty");
        theta = value;
        let residual = bk * eig.eigenvectors[(m - 1, top)].abs();
        if residual <= 1e-10 * theta.abs() || bk <= 1e-300 {
            break;
        }
        beta.push(bk);
        q = w.into_iter().map(|v| v / bk).collect();
    }
    1.0 / theta
}

/// Minimum-norm least-squares solution of `A x = b`, dropping singular
/// values below `rel_cutoff · σ_max`.
pub(crate) fn least_squares(a: &Matrix, b: &[f64], rel_cutoff: f64) -> Option<Vec<f64>> {
    let svd = a.to_nalgebra().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd.solve(&DVector::from_column_slice(b), rel_cutoff * smax).ok()?;
    Some(x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd(n: usize) -> Matrix {
        // e^{-|i-j|/3}: positive definite (1-D exponential kernel).
        Matrix::from_fn(n, |i, j| (-(i as f64 - j as f64).abs() / 3.0).exp())
    }

    #[test]
    fn cholesky_reconstructs_across_blocks() {
        for n in [1, 5, 63, 64, 65, 200, 300] {
            let a = spd(n);
            let c = Cholesky::new(&a).unwrap();
            let l = c.factor();
            let llt = l.mul(&l.transpose());
            let err = a
                .as_slice()
                .iter()
                .zip(llt.as_slice())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "n={n} err={err}");
            let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let x = c.solve(&b);
            let r = a.mul_vec(&x);
            assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-10));
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]);
        assert_eq!(Cholesky::new(&a).unwrap_err(), 1);
    }

    #[test]
    fn lu_solves_and_transposes() {
        let a = Matrix::from_row_major(3, vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let lu = Lu::new(&a);
        let b = [1.0, 2.0, 3.0];
        let x = lu.solve(&b);
        let r = a.mul_vec(&x);
        assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-12));
        let y = lu.solve_transpose(&b);
        let r = a.vec_mul(&y);
        assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-12));
        // det = 0*(1) - 2*(1-0) + 1*(0-3) = -5
        let (s, l) = lu.det_sign_log();
        assert_eq!(s, -1.0);
        assert!((l.exp() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn lu_flags_exact_singularity() {
        let a = Matrix::from_row_major(2, vec![1.0, 1.0, 1.0, 1.0]);
        assert!(Lu::new(&a).is_singular());
    }

    #[test]
    fn condition_estimate_matches_exact_for_diagonal() {
        let a = Matrix::from_fn(4, |i, j| if i == j { [1.0, 1e-3, 2.0, 0.5][i] } else { 0.0 });
        let lu = Lu::new(&a);
        let est = inverse_norm1_estimate(4, |b| lu.solve(b), |b| lu.solve_transpose(b));
        assert!((est - 1e3).abs() < 1e-9);
    }

    #[test]
    fn inverse_iteration_agrees_with_eigensolver() {
        let a = spd(80);
        let c = Cholesky::new(&a).unwrap();
        let dense = symmetric_min_eigenvalue(&a);
        let it = pd_min_eigenvalue(&a, &c);
        assert!((dense - it).abs() < 1e-9 * dense.abs().max(1.0), "{dense} vs {it}");
    }

    #[test]
    fn triangular_order_detects_acyclic_support() {
        // ζ of the chain 2 < 0 < 1, given out of order.
        let a = Matrix::from_row_major(3, vec![1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
        let order = triangular_order(&a).unwrap();
        assert_eq!(order, vec![2, 0, 1]);
        let w = triangular_solve(&a, &order, &[1.0; 3]);
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
        let v = triangular_solve_transpose(&a, &order, &[1.0; 3]);
        assert_eq!(v, vec![0.0, 0.0, 1.0]);
        let cyclic = Matrix::from_row_major(2, vec![1.0, 0.5, 0.5, 1.0]);
        assert!(triangular_order(&cyclic).is_none());
    }
}
