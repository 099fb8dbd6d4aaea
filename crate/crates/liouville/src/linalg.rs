//! Dense complex matrices and the factorizations the toolkit needs: Cholesky
//! of Hermitian positive-definite matrices, one-sided Jacobi SVD, and a
//! two-sided Jacobi eigensolver for Hermitian matrices.
//!
//! Everything is column-count-cubed dense work on heap buffers; no BLAS.
//! Jacobi methods were chosen over Householder reductions because they are
//! compact, numerically gentle on clustered singular values, and fast enough
//! for the matrix sizes the pipeline produces.

use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Subtracts the identity in place (square only).
    pub fn sub_identity(&mut self) {
        debug_assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            self[(i, i)] -= C64::new(1.0, 0.0);
        }
    }

    /// Plain product A B.
    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * out.cols..(i + 1) * out.cols];
                for (d, &o) in dst.iter_mut().zip(orow) {
                    *d += a * o;
                }
            }
        }
        out
    }

    /// Product A B^H without forming the adjoint (rows dot rows).
    pub fn mul_adjoint(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows, other.rows, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in self.row(i).iter().zip(other.row(j)) {
                acc += a * b.conj();
            }
            acc
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for (a, x) in self.row(i).iter().zip(v) {
                    acc += a * x;
                }
                acc
            })
            .collect()
    }

    /// Top-left `r x c` submatrix.
    pub fn corner(&self, r: usize, c: usize) -> Mat {
        debug_assert!(r <= self.rows && c <= self.cols);
        Mat::from_fn(r, c, |i, j| self[(i, j)])
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of A - A^T.
    pub fn symmetry_residual(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                acc += (self[(i, j)] - self[(j, i)]).norm_sqr();
            }
        }
        (2.0 * acc).sqrt()
    }

    /// (A + A^T) / 2.
    pub fn symmetrize(&self) -> Mat {
        debug_assert_eq!(self.rows, self.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)]) * 0.5
        })
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Assembles [[a, b], [c, d]] from equally sized square blocks.
pub fn block2x2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let n = a.rows();
    let w = a.cols();
    debug_assert!(b.rows() == n && c.rows() == n && d.rows() == n);
    debug_assert!(b.cols() == w && c.cols() == w && d.cols() == w);
    Mat::from_fn(2 * n, 2 * w, |i, j| match (i < n, j < w) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - w)],
        (false, true) => c[(i - n, j)],
        (false, false) => d[(i - n, j - w)],
    })
}

/// Euclidean norm of a complex vector.
pub fn vnorm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Cholesky factor L (lower triangular, L L^H = H) of a Hermitian
/// positive-definite matrix; `None` when a pivot is not strictly positive.
pub fn cholesky(h: &Mat) -> Option<Mat> {
    let n = h.rows();
    debug_assert_eq!(n, h.cols());
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = C64::new(dj, 0.0);
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

/// log det of a Hermitian positive-definite matrix via its Cholesky factor.
pub fn cholesky_logdet(h: &Mat) -> Option<f64> {
    let l = cholesky(h)?;
    let mut acc = 0.0;
    for i in 0..l.rows() {
        acc += l[(i, i)].re.ln();
    }
    Some(2.0 * acc)
}

/// Solves H x = b given the Cholesky factor L of H (forward then back
/// substitution), overwriting `b` with the solution.
pub fn cholesky_solve(l: &Mat, b: &mut [C64]) {
    let n = l.rows();
    debug_assert_eq!(b.len(), n);
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * b[k];
        }
        b[i] = s / l[(i, i)].re;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * b[k];
        }
        b[i] = s / l[(i, i)].re;
    }
}

/// Singular value decomposition A = U diag(sigma) V^H.
pub struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

/// One-sided Jacobi SVD for `rows >= cols`. Columns of the working copy are
/// rotated until pairwise orthogonal; sigma are the final column norms in
/// descending order, U gets an orthonormal completion on rank-deficient
/// columns so it is always an isometry.
pub fn svd(a: &Mat) -> Svd {
    let m = a.rows();
    let n = a.cols();
    assert!(m >= n, "svd expects rows >= cols");
    let mut b = a.clone();
    let mut v = Mat::identity(n);
    if n > 0 {
        for _sweep in 0..64 {
            let mut rotated = false;
            for p in 0..n.saturating_sub(1) {
                for q in p + 1..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = C64::new(0.0, 0.0);
                    for i in 0..m {
                        let bp = b[(i, p)];
                        let bq = b[(i, q)];
                        app += bp.norm_sqr();
                        aqq += bq.norm_sqr();
                        apq += bp.conj() * bq;
                    }
                    let g = apq.norm();
                    if g <= 1e-15 * (app * aqq).sqrt() + 1e-300 {
                        continue;
                    }
                    rotated = true;
                    let phase = apq / g;
                    let tau = (aqq - app) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let e = phase.conj();
                    for i in 0..m {
                        let bp = b[(i, p)];
                        let bq = b[(i, q)];
                        b[(i, p)] = bp * c - bq * (e * s);
                        b[(i, q)] = bp * s + bq * (e * c);
                    }
                    for i in 0..n {
                        let vp = v[(i, p)];
                        let vq = v[(i, q)];
                        v[(i, p)] = vp * c - vq * (e * s);
                        v[(i, q)] = vp * s + vq * (e * c);
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| vnorm(&b.col(j))).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let mut u = Mat::zeros(m, n);
    let mut vs = Mat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let smax = norms.iter().cloned().fold(0.0, f64::max);
    for (k, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
        if norms[j] > smax * 1e-18 + 1e-300 {
            for i in 0..m {
                u[(i, k)] = b[(i, j)] / norms[j];
            }
        }
    }
    for k in 0..n {
        if sigma[k] > smax * 1e-18 + 1e-300 {
            continue;
        }
        // orthonormal completion for a null column: best standard basis
        // vector orthogonalized against everything already placed
        let mut best: Option<Vec<C64>> = None;
        let mut best_norm = -1.0;
        for cand in 0..m {
            let mut w = vec![C64::new(0.0, 0.0); m];
            w[cand] = C64::new(1.0, 0.0);
            for kk in 0..n {
                if kk == k {
                    continue;
                }
                // unfilled columns are still zero vectors, so projecting on
                // them is a no-op
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..m {
                    proj += u[(i, kk)].conj() * w[i];
                }
                for i in 0..m {
                    w[i] -= proj * u[(i, kk)];
                }
            }
            let nw = vnorm(&w);
            if nw > best_norm {
                best_norm = nw;
                best = Some(w);
            }
            if nw > 0.9 {
                break;
            }
        }
        let w = best.unwrap();
        let nw = vnorm(&w).max(1e-300);
        for i in 0..m {
            u[(i, k)] = w[i] / nw;
        }
    }
    Svd { u, sigma, v: vs }
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.
/// Returns eigenvalues in ascending order with matching eigenvector columns.
pub fn hermitian_eigh(h: &Mat) -> (Vec<f64>, Mat) {
    let n = h.rows();
    debug_assert_eq!(n, h.cols());
    let mut a = Mat::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = Mat::identity(n);
    if n > 1 {
        let scale = a.frobenius().max(1e-300);
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-15 * scale {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let hpq = a[(p, q)];
                    let g = hpq.norm();
                    if g <= 1e-18 * scale {
                        continue;
                    }
                    let phase = hpq / g;
                    let alpha = a[(p, p)].re;
                    let beta = a[(q, q)].re;
                    let tau = (beta - alpha) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let e = phase.conj(); // rotation uses conj of the phase
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c - aiq * (e * s);
                        a[(i, q)] = aip * s + aiq * (e * c);
                    }
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = apj * c - aqj * (e.conj() * s);
                        a[(q, j)] = apj * s + aqj * (e.conj() * c);
                    }
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c - viq * (e * s);
                        v[(i, q)] = vip * s + viq * (e * c);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vecs = Mat::from_fn(n, n, |i, k| v[(i, order[k])]);
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix (convenience wrapper).
pub fn hermitian_min_eig(h: &Mat) -> f64 {
    let (vals, _) = hermitian_eigh(h);
    vals.first().copied().unwrap_or(0.0)
}
