//! Finite sections of the welding operator blocks and the spectral toolbox
//! built on them: unitarity diagnostics, symmetric (Takagi) factorization,
//! the deformation spectrum with its determinant, period Gram matrices, and
//! several independent cross-identities used by the verification driver.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::faber::{grunsky_table, GrunskyTable};
use crate::linalg::{
    block2x2, cholesky_logdet, hermitian_eigh, hermitian_min_eig, svd, vnorm, Mat,
};
use crate::pair::NormalizedPair;
use crate::{C64, Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const PI: f64 = core::f64::consts::PI;

/// Named diagnostic magnitudes keyed by short snake_case labels.
pub type ResidualMap = BTreeMap<String, f64>;

fn put(map: &mut ResidualMap, key: &str, value: f64) {
    map.insert(String::from(key), value);
}

/// The four weighted coefficient blocks of a welding pair, stored both as
/// square sections of size `order` and as row-truncated rectangles reaching
/// the full table width. The rectangles carry the column tails that make
/// finite-section products of the block operator meaningful.
#[derive(Clone, Debug)]
pub struct GrunskyBlocks {
    order: usize,
    width: usize,
    b1: Mat,
    b2: Mat,
    b3: Mat,
    b4: Mat,
    b1w: Mat,
    b2w: Mat,
    b3w: Mat,
    b4w: Mat,
}

impl GrunskyBlocks {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn b1(&self) -> &Mat {
        &self.b1
    }

    pub fn b2(&self) -> &Mat {
        &self.b2
    }

    pub fn b3(&self) -> &Mat {
        &self.b3
    }

    pub fn b4(&self) -> &Mat {
        &self.b4
    }

    pub fn b1_wide(&self) -> &Mat {
        &self.b1w
    }

    pub fn b2_wide(&self) -> &Mat {
        &self.b2w
    }

    pub fn b3_wide(&self) -> &Mat {
        &self.b3w
    }

    pub fn b4_wide(&self) -> &Mat {
        &self.b4w
    }
}

/// Weight the table entries by sqrt(mn) and lay out the four blocks.
pub fn blocks_from_table(t: &GrunskyTable) -> GrunskyBlocks {
    let n = t.order();
    let w = t.width();
    let wt = |i: usize, j: usize| ((i + 1) as f64 * (j + 1) as f64).sqrt();
    let b1w = Mat::from_fn(n, w, |i, j| t.bmm[(i, j)] * wt(i, j));
    let b4w = Mat::from_fn(n, w, |i, j| t.bpp[(i, j)] * wt(i, j));
    // Row m, column n of the upper-right block holds the (-m, n) entry, which
    // equals the (n, -m) entry; the primary mixed read has the first index
    // wide, the cross read has the second index wide.
    let b2w = Mat::from_fn(n, w, |i, j| t.bpm[(j, i)] * wt(i, j));
    let b3w = Mat::from_fn(n, w, |i, j| t.bpm_alt[(i, j)] * wt(i, j));
    GrunskyBlocks {
        order: n,
        width: w,
        b1: b1w.corner(n, n),
        b2: b2w.corner(n, n),
        b3: b3w.corner(n, n),
        b4: b4w.corner(n, n),
        b1w,
        b2w,
        b3w,
        b4w,
    }
}

/// Frobenius defects of the row identities of the block operator times its
/// adjoint, the defects of the full square section from both sides, and the
/// symmetry defects of the diagonal blocks. Row products sum over the full
/// stored width so that truncation tails, not bookkeeping, set the floor.
pub fn unitarity_residuals(b: &GrunskyBlocks) -> ResidualMap {
    let n = b.order;
    let eye = Mat::identity(n);
    let mut map = ResidualMap::new();
    let row_int = b
        .b1w
        .mul_adjoint(&b.b1w)
        .add(&b.b2w.mul_adjoint(&b.b2w))
        .sub(&eye);
    let row_lower = b.b3w.mul_adjoint(&b.b1w).add(&b.b4w.mul_adjoint(&b.b2w));
    let row_upper = b.b1w.mul_adjoint(&b.b3w).add(&b.b2w.mul_adjoint(&b.b4w));
    let row_ext = b
        .b3w
        .mul_adjoint(&b.b3w)
        .add(&b.b4w.mul_adjoint(&b.b4w))
        .sub(&eye);
    put(&mut map, "row_interior", row_int.frobenius());
    put(&mut map, "row_cross_lower", row_lower.frobenius());
    put(&mut map, "row_cross_upper", row_upper.frobenius());
    put(&mut map, "row_exterior", row_ext.frobenius());
    let full = block2x2(&b.b1, &b.b2, &b.b3, &b.b4);
    let eye2 = Mat::identity(2 * n);
    put(
        &mut map,
        "full_right",
        full.mul_adjoint(&full).sub(&eye2).frobenius(),
    );
    put(
        &mut map,
        "full_left",
        full.adjoint().mul(&full).sub(&eye2).frobenius(),
    );
    put(&mut map, "sym_b1", b.b1.symmetry_residual());
    put(&mut map, "sym_b4", b.b4.symmetry_residual());
    map
}

/// Rotate each column by a unit phase so its largest entry is real positive.
/// For eigenvectors of a real symmetric matrix computed in complex arithmetic
/// this pins the column phases to +-1 and makes the basis genuinely real.
fn realize_columns(m: &mut Mat) {
    for c in 0..m.cols() {
        let mut best = 0usize;
        let mut mag = 0.0;
        for r in 0..m.rows() {
            let a = m[(r, c)].norm();
            if a > mag {
                mag = a;
                best = r;
            }
        }
        if mag > 1e-300 {
            let phase = m[(best, c)] / mag;
            let rot = phase.conj();
            for r in 0..m.rows() {
                m[(r, c)] = m[(r, c)] * rot;
            }
        }
    }
}

/// Real orthogonal diagonalizer of a symmetric unitary matrix: its real and
/// imaginary parts are commuting real symmetric matrices, so diagonalize the
/// real part and refine degenerate eigenvalue blocks with the imaginary part.
fn joint_real_diagonalizer(mc: &Mat) -> Mat {
    let c = mc.rows();
    let x = Mat::from_fn(c, c, |r, k| C64::new(mc[(r, k)].re, 0.0));
    let y = Mat::from_fn(c, c, |r, k| C64::new(mc[(r, k)].im, 0.0));
    let (xev, mut o) = hermitian_eigh(&x);
    realize_columns(&mut o);
    let mut p = 0;
    while p < c {
        let mut q = p + 1;
        while q < c && (xev[q] - xev[p]).abs() <= 1e-10 {
            q += 1;
        }
        if q - p > 1 {
            let ob = Mat::from_fn(c, q - p, |r, k| o[(r, p + k)]);
            let yb = ob.transpose().mul(&y).mul(&ob);
            let (_, mut o2) = hermitian_eigh(&yb);
            realize_columns(&mut o2);
            let refined = ob.mul(&o2);
            for k in 0..(q - p) {
                for r in 0..c {
                    o[(r, p + k)] = refined[(r, k)];
                }
            }
        }
        p = q;
    }
    o
}

/// Symmetric factorization a = U diag(d) U^t with U unitary and d the
/// singular values of a in descending order. Built on the SVD, with the
/// column phases recovered clusterwise from the symmetric structure;
/// degenerate singular values are handled by a joint block rotation.
pub fn takagi(a: &Mat) -> Result<(Mat, Vec<f64>)> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "takagi expects a square matrix");
    if a.symmetry_residual() > 1e-6 {
        return Err(Error::NotSymmetric);
    }
    let s = a.symmetrize();
    let dec = svd(&s);
    let w = dec.u;
    let sig = dec.sigma;
    let mut u = Mat::zeros(n, n);
    let gap = 1e-8 * sig.first().copied().unwrap_or(0.0).max(1e-300);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && sig[i] - sig[j] <= gap {
            j += 1;
        }
        if sig[i] <= 1e-300 {
            // Kernel directions need no phase: any orthonormal basis works.
            for col in i..j {
                for row in 0..n {
                    u[(row, col)] = w[(row, col)];
                }
            }
        } else {
            let wc = Mat::from_fn(n, j - i, |r, k| w[(r, i + k)]);
            let mc = wc
                .adjoint()
                .mul(&s)
                .mul(&wc.conj())
                .scale(C64::new(1.0 / sig[i], 0.0))
                .symmetrize();
            let o = joint_real_diagonalizer(&mc);
            let m2 = o.transpose().mul(&mc).mul(&o);
            let wo = wc.mul(&o);
            for k in 0..(j - i) {
                let ph = m2[(k, k)];
                let ph = if ph.norm() <= 1e-300 {
                    ONE
                } else {
                    ph / ph.norm()
                };
                let root = ph.sqrt();
                for row in 0..n {
                    u[(row, i + k)] = wo[(row, k)] * root;
                }
            }
        }
        i = j;
    }
    Ok((u, sig))
}

/// Reference route to the same factorization through the doubled real
/// operator [[X, Y], [Y, -X]] built from the real and imaginary parts of the
/// symmetrized input. Slower than `takagi` and used to cross-validate it.
pub fn takagi_doubled(a: &Mat) -> (Mat, Vec<f64>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "takagi_doubled expects a square matrix");
    let s = a.symmetrize();
    let x = Mat::from_fn(n, n, |r, k| C64::new(s[(r, k)].re, 0.0));
    let y = Mat::from_fn(n, n, |r, k| C64::new(s[(r, k)].im, 0.0));
    let h = block2x2(&x, &y, &y, &x.scale(C64::new(-1.0, 0.0)));
    let (ev, mut v) = hermitian_eigh(&h);
    realize_columns(&mut v);
    let mut u = Mat::zeros(n, n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let src = 2 * n - 1 - k;
        d.push(ev[src].max(0.0));
        for r in 0..n {
            u[(r, k)] = C64::new(v[(r, src)].re, v[(n + r, src)].re);
        }
    }
    (u, d)
}

fn scale_columns(m: &Mat, s: &[f64]) -> Mat {
    Mat::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)] * s[c])
}

/// Residuals of the coupled factorization identities tying all four blocks
/// to one Takagi basis of the interior block: the interior factorization
/// itself, the isometry of the induced exterior basis, and the two relations
/// transporting the basis across the mixed and exterior blocks. Wide variants
/// sum the induced basis over the full stored width.
pub fn schur_relation_residuals(b: &GrunskyBlocks, u: &Mat, d: &[f64]) -> Result<ResidualMap> {
    let n = b.order;
    assert_eq!(u.rows(), n, "basis size must match the block order");
    assert_eq!(d.len(), n, "need one scaling entry per column");
    if let Some(top) = d.first() {
        if 1.0 - top * top < 1e-12 {
            return Err(Error::SingularScaling);
        }
    }
    let s: Vec<f64> = d.iter().map(|l| (1.0 - l * l).sqrt()).collect();
    let sinv: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
    let uc = u.conj();
    let eye = Mat::identity(n);
    let mut map = ResidualMap::new();

    let r1 = b.b1.mul(&uc).sub(&scale_columns(u, d));
    put(&mut map, "takagi_identity", r1.frobenius());

    let v = scale_columns(&b.b2.adjoint().mul(u), &sinv);
    put(
        &mut map,
        "v_isometry",
        v.adjoint().mul(&v).sub(&eye).frobenius(),
    );
    put(
        &mut map,
        "interior_exterior_link",
        b.b3.mul(&uc).sub(&scale_columns(&v.conj(), &s)).frobenius(),
    );
    put(
        &mut map,
        "exterior_takagi",
        b.b4.mul(&v).add(&scale_columns(&v.conj(), d)).frobenius(),
    );

    let vt = scale_columns(&b.b2w.adjoint().mul(u), &sinv);
    let vt_top = vt.corner(n, n);
    put(
        &mut map,
        "v_isometry_wide",
        vt.adjoint().mul(&vt).sub(&eye).frobenius(),
    );
    put(
        &mut map,
        "interior_exterior_link_wide",
        b.b3
            .mul(&uc)
            .sub(&scale_columns(&vt_top.conj(), &s))
            .frobenius(),
    );
    put(
        &mut map,
        "exterior_takagi_wide",
        b.b4w
            .mul(&vt)
            .add(&scale_columns(&vt_top.conj(), d))
            .frobenius(),
    );
    Ok(map)
}

/// Spectrum of the welding deformation at the stored truncation: the
/// descending eigenvalue column, its determinant, and a bundle of
/// cross-route residuals.
#[derive(Clone, Debug)]
pub struct SpectralReport {
    /// lambda_1 >= lambda_2 >= ... >= 0, one entry per truncation row.
    pub lambda: Vec<f64>,
    /// rho_n = sqrt(1 - lambda_n^2).
    pub rho: Vec<f64>,
    /// 1 / lambda_n, with +infinity recorded when lambda_n < 1e-14; the
    /// spectrum is symmetric under sign flip so only the positive branch is
    /// stored.
    pub fredholm_eigs: Vec<f64>,
    /// prod rho_n^2, always in (0, 1].
    pub detf: f64,
    /// log detf, accumulated stably from log1p(-lambda^2).
    pub s2: f64,
    pub residuals: ResidualMap,
}

fn reconstruction_residual(a: &Mat, u: &Mat, d: &[f64]) -> f64 {
    let ud = scale_columns(u, d);
    ud.mul(&u.transpose()).sub(a).frobenius()
}

/// Takagi columns of both diagonal blocks, merged entrywise by maximum.
/// The two columns estimate the same limit spectrum from the interior and
/// exterior sides; the max keeps the report invariant under model inversion
/// and their gap is recorded as a residual.
fn lambda_column(b: &GrunskyBlocks) -> Result<(Mat, Vec<f64>, Mat, Vec<f64>, Vec<f64>)> {
    let (u1, d1) = takagi(&b.b1)?;
    let (u4, d4) = takagi(&b.b4)?;
    let lambda: Vec<f64> = d1
        .iter()
        .zip(d4.iter())
        .map(|(a, c)| a.max(*c))
        .collect();
    Ok((u1, d1, u4, d4, lambda))
}

/// Eigenvalue column, determinant, and cross-route diagnostics. The
/// determinant is evaluated three ways: from the eigenvalue column, and from
/// triangular factorizations of the identity minus each diagonal block times
/// its adjoint; pairwise gaps are recorded in the residual map.
pub fn fredholm_spectrum(b: &GrunskyBlocks) -> Result<SpectralReport> {
    let (u1, d1, u4, d4, lambda) = lambda_column(b)?;
    if lambda.first().map(|l| *l >= 1.0).unwrap_or(false) {
        return Err(Error::NormAtLeastOne);
    }
    let n = b.order;
    let rho: Vec<f64> = lambda.iter().map(|l| (1.0 - l * l).sqrt()).collect();
    let fredholm_eigs: Vec<f64> = lambda
        .iter()
        .map(|l| if *l < 1e-14 { f64::INFINITY } else { 1.0 / l })
        .collect();
    let s2: f64 = lambda.iter().map(|l| (-l * l).ln_1p()).sum();
    let detf = s2.exp();

    let mut map = ResidualMap::new();
    put(&mut map, "takagi_recon_interior", reconstruction_residual(&b.b1, &u1, &d1));
    put(&mut map, "takagi_recon_exterior", reconstruction_residual(&b.b4, &u4, &d4));
    let eye = Mat::identity(n);
    put(
        &mut map,
        "takagi_unitary_interior",
        u1.adjoint().mul(&u1).sub(&eye).frobenius(),
    );
    put(
        &mut map,
        "takagi_unitary_exterior",
        u4.adjoint().mul(&u4).sub(&eye).frobenius(),
    );
    put(&mut map, "symmetry_interior", b.b1.symmetry_residual());
    put(&mut map, "symmetry_exterior", b.b4.symmetry_residual());

    let gram1 = eye.sub(&b.b1.mul_adjoint(&b.b1));
    let gram4 = eye.sub(&b.b4.mul_adjoint(&b.b4));
    let ld1 = cholesky_logdet(&gram1).ok_or(Error::NormAtLeastOne)?;
    let ld4 = cholesky_logdet(&gram4).ok_or(Error::NormAtLeastOne)?;
    let det1 = ld1.exp();
    let det4 = ld4.exp();
    put(&mut map, "det_lambda_vs_interior", (detf - det1).abs());
    put(&mut map, "det_lambda_vs_exterior", (detf - det4).abs());
    put(&mut map, "det_interior_vs_exterior", (det1 - det4).abs());

    let sigma_gap = d1
        .iter()
        .zip(d4.iter())
        .map(|(a, c)| (a - c).abs())
        .fold(0.0, f64::max);
    put(&mut map, "sigma_gap", sigma_gap);
    let min_gap = lambda
        .windows(2)
        .map(|p| p[0] - p[1])
        .fold(f64::INFINITY, f64::min);
    put(
        &mut map,
        "lambda_min_gap",
        if min_gap.is_finite() { min_gap } else { 0.0 },
    );

    Ok(SpectralReport {
        lambda,
        rho,
        fredholm_eigs,
        detf,
        s2,
        residuals: map,
    })
}

/// Squared Hilbert-Schmidt mass of a diagonal block (1 for the interior
/// block, 4 for the exterior one) at the square truncation.
pub fn hs_norm_sq(b: &GrunskyBlocks, which: u8) -> f64 {
    let block = match which {
        1 => &b.b1,
        4 => &b.b4,
        _ => panic!("which must be 1 or 4"),
    };
    let f = block.frobenius();
    f * f
}

/// Gram matrices of the interior and exterior period bases, with their
/// determinants compared against the spectral determinant. Both Grams sum
/// over the full stored width and must be Hermitian positive definite for
/// welding input.
pub fn period_matrices(b: &GrunskyBlocks) -> Result<(Mat, Mat, ResidualMap)> {
    let n_omega = b.b3w.mul_adjoint(&b.b3w);
    let n_omega_star = b.b2w.mul_adjoint(&b.b2w);
    let (_, _, _, _, lambda) = lambda_column(b)?;
    if lambda.first().map(|l| *l >= 1.0).unwrap_or(false) {
        return Err(Error::NormAtLeastOne);
    }
    let s2: f64 = lambda.iter().map(|l| (-l * l).ln_1p()).sum();
    let detf = s2.exp();
    let det_int = cholesky_logdet(&n_omega).map(f64::exp);
    let det_ext = cholesky_logdet(&n_omega_star).map(f64::exp);
    let mut map = ResidualMap::new();
    put(&mut map, "detf", detf);
    put(&mut map, "det_interior", det_int.unwrap_or(f64::NAN));
    put(&mut map, "det_exterior", det_ext.unwrap_or(f64::NAN));
    put(
        &mut map,
        "det_interior_vs_detf",
        det_int.map(|d| (d - detf).abs()).unwrap_or(f64::INFINITY),
    );
    put(
        &mut map,
        "det_exterior_vs_detf",
        det_ext.map(|d| (d - detf).abs()).unwrap_or(f64::INFINITY),
    );
    put(
        &mut map,
        "det_interior_vs_exterior",
        match (det_int, det_ext) {
            (Some(a), Some(c)) => (a - c).abs(),
            _ => f64::INFINITY,
        },
    );
    put(&mut map, "min_eig_interior", hermitian_min_eig(&n_omega));
    put(&mut map, "min_eig_exterior", hermitian_min_eig(&n_omega_star));
    Ok((n_omega, n_omega_star, map))
}

fn weighted_vector(coeffs: &[C64], len: usize) -> Vec<C64> {
    (1..=len)
        .map(|k| {
            let c = coeffs.get(k).copied().unwrap_or(ZERO);
            c * (PI * k as f64).sqrt()
        })
        .collect()
}

fn apply_block_pair(
    top_left: &Mat,
    top_right: &Mat,
    x1: &[C64],
    x2: &[C64],
) -> Vec<C64> {
    let n = top_left.rows();
    let w = top_left.cols();
    let mut out = vec![ZERO; n];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = ZERO;
        for k in 0..w {
            acc += top_left[(r, k)] * x1[k] + top_right[(r, k)] * x2[k];
        }
        *slot = acc;
    }
    out
}

fn conj_vec(v: &[C64]) -> Vec<C64> {
    v.iter().map(|z| z.conj()).collect()
}

fn stacked_norm(a: &[C64], b: &[C64]) -> f64 {
    let na = vnorm(a);
    let nb = vnorm(b);
    (na * na + nb * nb).sqrt()
}

fn stacked_diff_norm(a: &[C64], b: &[C64], ta: &[C64], tb: &[C64], sign: f64) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(ta.iter()) {
        acc += (*x + *y * sign).norm_sqr();
    }
    for (x, y) in b.iter().zip(tb.iter()) {
        acc += (*x + *y * sign).norm_sqr();
    }
    acc.sqrt()
}

/// Residuals of the three vector identities coupling the block operator to
/// the logarithmic derivative data of the pair: with w built from the
/// map-to-model exponent tails, v from the pre-Schwarzian coefficients, and
/// u = v - 2w, the block operator K satisfies K conj(w) = w, K conj(u) = -v,
/// and K conj(v) = -u for welding input. Vectors extend over the full table
/// width; products are compared on the square corner. Both absolute and
/// relative magnitudes are reported.
pub fn remark410_residuals(
    p: &NormalizedPair,
    t: &GrunskyTable,
    b: &GrunskyBlocks,
) -> ResidualMap {
    debug_assert_eq!(t.order(), b.order);
    debug_assert_eq!(t.width(), b.width);
    let n = b.order;
    let w = b.width;
    let w1 = weighted_vector(p.chat(), w);
    let w2 = weighted_vector(p.dhat(), w);
    let v1 = weighted_vector(&p.log_deriv_interior(w), w);
    let v2 = weighted_vector(&p.log_deriv_exterior(w), w);
    let u1: Vec<C64> = v1.iter().zip(w1.iter()).map(|(v, s)| v - s * 2.0).collect();
    let u2: Vec<C64> = v2.iter().zip(w2.iter()).map(|(v, s)| v - s * 2.0).collect();

    let k_top = |x1: &[C64], x2: &[C64]| apply_block_pair(&b.b1w, &b.b2w, x1, x2);
    let k_bot = |x1: &[C64], x2: &[C64]| apply_block_pair(&b.b3w, &b.b4w, x1, x2);

    let mut map = ResidualMap::new();
    let record = |map: &mut ResidualMap,
                      key: &str,
                      x1: &[C64],
                      x2: &[C64],
                      t1: &[C64],
                      t2: &[C64],
                      sign: f64| {
        let kx1 = k_top(&conj_vec(x1), &conj_vec(x2));
        let kx2 = k_bot(&conj_vec(x1), &conj_vec(x2));
        let abs = stacked_diff_norm(&kx1, &kx2, &t1[..n], &t2[..n], sign);
        let denom = stacked_norm(t1, t2);
        put(map, key, abs);
        let mut rel_key = String::from(key);
        rel_key.push_str("_rel");
        map.insert(rel_key, if denom > 1e-300 { abs / denom } else { abs });
    };
    // K conj(w) - w, K conj(u) + v, K conj(v) + u.
    record(&mut map, "w_identity", &w1, &w2, &w1, &w2, -1.0);
    record(&mut map, "u_identity", &u1, &u2, &v1, &v2, 1.0);
    record(&mut map, "v_identity", &v1, &v2, &u1, &u2, 1.0);
    map
}

/// Pointwise distortion comparison of two normalized pairs on a grid in the
/// open disk, via the analytic reduction of the area integral to interior
/// coefficient sums.
#[derive(Clone, Debug)]
pub struct BrazilevicReport {
    /// F(z) per grid point.
    pub f_values: Vec<f64>,
    pub sup_f: f64,
    /// Largest singular value of the interior block difference.
    pub opnorm: f64,
    /// 6 F(z) - (1-|z|^2)^2 |delta S(z)| per grid point; nonnegative.
    pub margins: Vec<f64>,
    /// 6 opnorm - 6 sup_f; nonnegative.
    pub margin_op: f64,
}

/// Evaluate the comparison functional on a grid. The squared value at z is
/// (1-|z|^2)^2 sum_m m |sum_n n (b1 - b2)_{-n,-m} z^(n-1)|^2, the analytic
/// form of the area integral of the squared kernel difference, and the
/// Schwarzian difference delta S(z) = -6 sum nm (b1 - b2)_{-n,-m} z^(n+m-2)
/// reuses the same inner sums.
pub fn brazilevic(
    p1: &NormalizedPair,
    p2: &NormalizedPair,
    grid: &[C64],
) -> Result<BrazilevicReport> {
    for z in grid {
        if !(z.norm() < 1.0) {
            return Err(Error::DomainViolation);
        }
    }
    // Both the pointwise functional and the operator norm truncate to the
    // same square section; mixing a wider section into one of them would
    // break the two margin inequalities at finite order.
    let n = p1.order().min(p2.order());
    let t1 = grunsky_table(p1, n)?;
    let t2 = grunsky_table(p2, n)?;
    let db = Mat::from_fn(n, n, |i, j| t1.bmm[(i, j)] - t2.bmm[(i, j)]);
    let db1 = Mat::from_fn(n, n, |i, j| {
        db[(i, j)] * ((i + 1) as f64 * (j + 1) as f64).sqrt()
    });
    let opnorm = svd(&db1).sigma.first().copied().unwrap_or(0.0);

    let mut f_values = Vec::with_capacity(grid.len());
    let mut margins = Vec::with_capacity(grid.len());
    let mut sup_f = 0.0f64;
    for z in grid {
        let factor = 1.0 - z.norm_sqr();
        // Row sums a_m(z) = sum_n n delta_b[n][m] z^(n-1) shared by both
        // quantities.
        let mut zpow = ONE;
        let mut row = vec![ZERO; n];
        for i in 0..n {
            let scale = zpow * ((i + 1) as f64);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot += db[(i, j)] * scale;
            }
            zpow *= z;
        }
        let mut f2 = 0.0;
        let mut schwarzian = ZERO;
        let mut zp = ONE;
        for (j, a) in row.iter().enumerate() {
            let m = (j + 1) as f64;
            f2 += m * a.norm_sqr();
            schwarzian += *a * zp * m;
            zp *= z;
        }
        let f = factor * f2.sqrt();
        let margin = 6.0 * f - factor * factor * 6.0 * schwarzian.norm();
        sup_f = sup_f.max(f);
        f_values.push(f);
        margins.push(margin);
    }
    let margin_op = 6.0 * (opnorm - sup_f);
    Ok(BrazilevicReport {
        f_values,
        sup_f,
        opnorm,
        margins,
        margin_op,
    })
}

/// Bounded-domain diagnostics for a candidate period-map point.
#[derive(Clone, Debug)]
pub struct SiegelDiagnostics {
    pub symmetry_residual: f64,
    /// Smallest eigenvalue of I - Z conj(Z); membership requires > 0.
    pub min_eig: f64,
    /// Hilbert-Schmidt (Frobenius) norm of Z.
    pub hs_norm: f64,
    pub member: bool,
}

/// Check whether a matrix sits inside the bounded symmetric domain cut out
/// by symmetry and the strict contraction condition I - Z conj(Z) > 0.
pub fn siegel_membership(z: &Mat) -> SiegelDiagnostics {
    assert_eq!(z.rows(), z.cols(), "membership test expects a square matrix");
    let symmetry_residual = z.symmetry_residual();
    let mut m = z.mul(&z.conj());
    m.sub_identity();
    let m = m.scale(C64::new(-1.0, 0.0));
    let min_eig = hermitian_min_eig(&m);
    let hs_norm = z.frobenius();
    let member = min_eig > 0.0 && symmetry_residual <= 1e-8 * hs_norm.max(1.0);
    SiegelDiagnostics {
        symmetry_residual,
        min_eig,
        hs_norm,
        member,
    }
}

fn biconv(a: &[Vec<C64>], b: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut out = vec![vec![ZERO; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let v = a[i][j];
            if v == ZERO {
                continue;
            }
            for (p, brow) in b.iter().enumerate().take(dim - i) {
                for (q, bval) in brow.iter().enumerate().take(dim - j) {
                    if *bval != ZERO {
                        out[i + p][j + q] += v * *bval;
                    }
                }
            }
        }
    }
    out
}

/// Largest coefficient gap, up to the given total degree, between the closed
/// generating series of a symmetric block's first column and the bivariate
/// exponential of its full coefficient grid.
fn bivariate_identity_residual(c: &Mat, win: usize) -> f64 {
    let n = c.rows();
    let dim = win + 1;
    let mut lhs = vec![vec![ZERO; dim]; dim];
    lhs[0][0] = ONE;
    for a in 1..=win.saturating_sub(1) {
        for bb in 1..=(win - a) {
            let m = a + bb - 1;
            lhs[a][bb] = -c[(m - 1, 0)] / (m as f64).sqrt();
        }
    }
    let mut e = vec![vec![ZERO; dim]; dim];
    for m in 1..=win.min(n) {
        for k in 1..=win.min(n) {
            e[m][k] = -c[(m - 1, k - 1)] / ((m * k) as f64).sqrt();
        }
    }
    let mut acc = vec![vec![ZERO; dim]; dim];
    acc[0][0] = ONE;
    let mut term = e.clone();
    for k in 1..=win {
        if k > 1 {
            term = biconv(&term, &e, dim);
            let inv = C64::new(1.0 / k as f64, 0.0);
            for row in term.iter_mut() {
                for v in row.iter_mut() {
                    *v *= inv;
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                acc[i][j] += term[i][j];
            }
        }
    }
    let mut res = 0.0f64;
    for a in 1..dim {
        for bb in 1..dim {
            if a + bb <= win {
                res = res.max((lhs[a][bb] - acc[a][bb]).norm());
            }
        }
    }
    res
}

/// Coefficient residuals of the two generating-series identities satisfied
/// by the diagonal blocks of a welding (checked as truncated bivariate
/// exponentials up to total degree `win`), together with the two matrix
/// complementarity defects linking each diagonal block to the off-diagonal
/// Gram of the other side.
pub fn hirota_residuals(b: &GrunskyBlocks, win: usize) -> ResidualMap {
    assert!(
        win >= 1 && win <= 12 && win <= b.order + 1,
        "window must be between 1 and min(order + 1, 12)"
    );
    let n = b.order;
    let eye = Mat::identity(n);
    let mut map = ResidualMap::new();
    put(&mut map, "s1", bivariate_identity_residual(&b.b1, win));
    put(&mut map, "s3", bivariate_identity_residual(&b.b4, win));
    let lhs_int = eye.sub(&b.b1.mul(&b.b1.conj()));
    put(
        &mut map,
        "s2_interior",
        lhs_int.sub(&b.b2w.mul_adjoint(&b.b2w)).frobenius(),
    );
    let lhs_ext = eye.sub(&b.b4.mul(&b.b4.conj()));
    put(
        &mut map,
        "s2_exterior",
        lhs_ext.sub(&b.b3w.mul_adjoint(&b.b3w)).frobenius(),
    );
    map
}
