//! Faber polynomials of a normalized pair and the Grunsky coefficient table.
//!
//! For a pair (f, g) the n-th Faber polynomial `P_n` is the polynomial part
//! of the n-th power of the inverse of g, and `Q_n` is the principal part of
//! the (-n)-th power of the inverse of f. Composing them back with g and f
//! and reading off coefficients fills the four quadrants of the Grunsky
//! coefficient table: the interior-interior block b_{-m,-n}, the
//! exterior-exterior block b_{m,n}, the mixed block b_{m,-n} (read twice,
//! from two independent composition identities, with the disagreement kept
//! as a consistency residual), the two columns b_{±k,0}, and the scalar
//! b00 = log g'(inf).
//!
//! The engine never forms b-graded arrays: every long series it multiplies
//! is scale-free, and powers of b enter only as explicit bounded factors at
//! the read-off sites. This keeps wide tables (width up to ~14x the order)
//! in safe f64 range regardless of the capacity of the curve.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Mat;
use crate::pair::NormalizedPair;
use crate::series::{uexp, uinv, umul, urevert, TaylorSeries};
use crate::{C64, Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Extra coefficients carried beyond the last one actually read.
const PAD: usize = 8;

/// Working-length cap for the default width policy: order + width + PAD
/// stays at or below this, the range in which wide-table roundoff has been
/// measured to stay at the 1e-11 level.
const LEN_CAP: usize = 736;

/// Tolerance on the two independent reads of the mixed block.
const CROSS_TOL: f64 = 1e-6;

/// Margin by which identity-residual sample points must clear the unit circle.
const SAMPLE_MARGIN: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Faber polynomials

/// Faber polynomials `P_1..P_N` of g (ascending coefficients in w) and
/// principal parts `Q_1..Q_N` of f (coefficients of w^0, w^-1, .., w^-n,
/// the leading entry being the recorded value at infinity).
#[derive(Clone, Debug)]
pub struct FaberSet {
    p: Vec<TaylorSeries>,
    q: Vec<Vec<C64>>,
}

impl FaberSet {
    /// Number of rows held (polynomials 1..=order).
    pub fn order(&self) -> usize {
        self.p.len()
    }

    /// `P_n` as an ascending polynomial in w; degree n, leading coefficient
    /// b^{-n}. 1-based, panics outside 1..=order.
    pub fn p(&self, n: usize) -> &TaylorSeries {
        assert!(n >= 1 && n <= self.p.len(), "Faber index out of range");
        &self.p[n - 1]
    }

    /// `Q_n` coefficients: entry i is the coefficient of w^{-i}; entry 0 is
    /// Q_n at infinity. 1-based, panics outside 1..=order.
    pub fn q(&self, n: usize) -> &[C64] {
        assert!(n >= 1 && n <= self.q.len(), "Faber index out of range");
        &self.q[n - 1]
    }

    /// Recorded value of `Q_n` at infinity.
    pub fn q_at_infinity(&self, n: usize) -> C64 {
        self.q(n)[0]
    }

    /// Evaluate `P_n(w)`.
    pub fn eval_p(&self, n: usize, w: C64) -> C64 {
        self.p(n).eval(w)
    }

    /// Evaluate `Q_n(w)` for w != 0.
    pub fn eval_q(&self, n: usize, w: C64) -> C64 {
        let q = self.q(n);
        let wi = ONE / w;
        let mut acc = ZERO;
        for &c in q.iter().rev() {
            acc = acc * wi + c;
        }
        acc
    }
}

/// Scale-free reversion data shared by the Faber constructors.
///
/// `shat_inv` is the unit series S with (g^{-1}(w))^n = w^n (D_b S)^n b^{-n}
/// where D_b multiplies coefficient j by b^j; `fri` is the unit series F
/// with (f^{-1}(w))^{-n} = w^{-n} F^n. Both are b-free.
struct ReversionData {
    shat_inv: Vec<C64>,
    fri: Vec<C64>,
}

fn reversion_data(p: &NormalizedPair, kl: usize) -> ReversionData {
    let b = p.b();
    let fc = p.f_coeffs(kl - 1);
    let gh = p.ghat_coeffs(kl - 1);
    let ghn: Vec<C64> = gh.iter().map(|&c| c * b).collect();
    let finv = urevert(&fc, kl);
    let ghinv = urevert(&ghn, kl);
    let mut shat = vec![ZERO; kl];
    let mut fr = vec![ZERO; kl];
    for j in 0..kl - 1 {
        shat[j] = ghinv[j + 1];
        fr[j] = finv[j + 1];
    }
    ReversionData {
        shat_inv: uinv(&shat, kl),
        fri: uinv(&fr, kl),
    }
}

/// Rows 0..=n of the cumulative powers of a unit series, each of length k.
fn cumulative_pows(base: &[C64], n: usize, k: usize) -> Vec<Vec<C64>> {
    let mut unit = vec![ZERO; k];
    unit[0] = ONE;
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(unit);
    for i in 1..=n {
        let next = umul(&rows[i - 1], base, k);
        rows.push(next);
    }
    rows
}

/// Build the Faber polynomials of the pair through order `n` by series
/// reversion and power extraction.
///
/// Errors with `DomainViolation` if `n` exceeds the stored order of the pair.
pub fn faber_polys(p: &NormalizedPair, n: usize) -> Result<FaberSet> {
    if n > p.order() {
        return Err(Error::DomainViolation);
    }
    let kl = n + PAD + 1;
    let rd = reversion_data(p, kl);
    let sp = cumulative_pows(&rd.shat_inv, n, kl);
    let qp = cumulative_pows(&rd.fri, n, kl);
    let binv = ONE / p.b();
    let mut prow = Vec::with_capacity(n);
    let mut qrow = Vec::with_capacity(n);
    for m in 1..=n {
        let mut asc = vec![ZERO; m + 1];
        let mut bp = ONE;
        for i in 0..=m {
            asc[i] = bp * sp[m][m - i];
            bp *= binv;
        }
        prow.push(TaylorSeries::raw(asc));
        let mut qc = vec![ZERO; m + 1];
        for (i, qi) in qc.iter_mut().enumerate() {
            *qi = qp[m][m - i];
        }
        qrow.push(qc);
    }
    Ok(FaberSet { p: prow, q: qrow })
}

// ---------------------------------------------------------------------------
// Grunsky coefficient table

/// The Grunsky coefficients of a pair through a given order, with a wider
/// rectangular extent in the second index so downstream truncations of the
/// composition identities keep their tails.
///
/// Storage (all indices 1-based through the accessors):
/// * `bmm(m, n)` = b_{-m,-n}   (interior-interior),
/// * `bpp(m, n)` = b_{m,n}     (exterior-exterior),
/// * `bpm(m, n)` = b_{m,-n}    (mixed; the symmetric convention
///   b_{-n,m} = b_{m,-n} makes this the only mixed quadrant stored),
/// * `col_minus(k)` = b_{-k,0}, `col_plus(k)` = b_{k,0},
/// * `b00()` = log g'(inf).
///
/// The mixed block is read from two different composition identities; the
/// largest disagreement on the square corner is kept in `cross_residual`.
#[derive(Clone, Debug)]
pub struct GrunskyTable {
    order: usize,
    width: usize,
    /// Row n, column m: b_{-n,-m}; n <= order, m <= width.
    pub(crate) bmm: Mat,
    /// Row n, column m: b_{n,m}.
    pub(crate) bpp: Mat,
    /// Row m, column n: b_{m,-n}; m <= width, n <= order (primary read).
    pub(crate) bpm: Mat,
    /// Row n, column m: b_{n,-m}; n <= order, m <= width (cross read).
    pub(crate) bpm_alt: Mat,
    /// Entry k-1: b_{-k,0}.
    pub(crate) col_minus: Vec<C64>,
    /// Entry k-1: b_{k,0}.
    pub(crate) col_plus: Vec<C64>,
    pub(crate) b00: C64,
    cross_residual: f64,
}

impl GrunskyTable {
    /// Truncation order N of the table (first index range).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Rectangular extent of the second index.
    pub fn width(&self) -> usize {
        self.width
    }

    /// b_{-m,-n}; either index may run to the width as long as the other
    /// stays within the order. 1-based.
    pub fn bmm(&self, m: usize, n: usize) -> C64 {
        self.sym_entry(&self.bmm, m, n)
    }

    /// b_{m,n}; same index ranges as `bmm`. 1-based.
    pub fn bpp(&self, m: usize, n: usize) -> C64 {
        self.sym_entry(&self.bpp, m, n)
    }

    /// b_{m,-n} with m <= width, n <= order, or m <= order, n <= width.
    pub fn bpm(&self, m: usize, n: usize) -> C64 {
        assert!(m >= 1 && n >= 1, "Grunsky indices are 1-based");
        if m <= self.width && n <= self.order {
            self.bpm[(m - 1, n - 1)]
        } else if m <= self.order && n <= self.width {
            self.bpm_alt[(m - 1, n - 1)]
        } else {
            panic!("mixed-block index out of range");
        }
    }

    /// b_{-m,n} = b_{n,-m}.
    pub fn bmp(&self, m: usize, n: usize) -> C64 {
        self.bpm(n, m)
    }

    /// b_{-k,0} for k = 1..=order.
    pub fn col_minus(&self, k: usize) -> C64 {
        assert!(k >= 1 && k <= self.order, "column index out of range");
        self.col_minus[k - 1]
    }

    /// b_{k,0} for k = 1..=order.
    pub fn col_plus(&self, k: usize) -> C64 {
        assert!(k >= 1 && k <= self.order, "column index out of range");
        self.col_plus[k - 1]
    }

    /// b00 = log g'(inf) of the pair.
    pub fn b00(&self) -> C64 {
        self.b00
    }

    /// Largest disagreement between the two mixed-block reads on the square
    /// corner (0 for the direct bivariate constructor).
    pub fn cross_residual(&self) -> f64 {
        self.cross_residual
    }

    fn sym_entry(&self, mat: &Mat, m: usize, n: usize) -> C64 {
        assert!(m >= 1 && n >= 1, "Grunsky indices are 1-based");
        if m <= self.order && n <= self.width {
            mat[(m - 1, n - 1)]
        } else if n <= self.order && m <= self.width {
            mat[(n - 1, m - 1)]
        } else {
            panic!("Grunsky index out of range");
        }
    }
}

/// Default rectangular width for a table of order n: fourteen times the
/// order, capped so order + width + padding stays within the measured-safe
/// working length, floored at the order itself (square).
fn default_width(n: usize) -> usize {
    let cap = LEN_CAP.saturating_sub(PAD + n).max(n);
    (14 * n).min(cap)
}

/// Grunsky table at order `n` with the default width policy.
///
/// Errors: `DomainViolation` if `n` is 0 or exceeds the pair order;
/// `InconsistentBlocks` if the two reads of the mixed block disagree by
/// more than 1e-6 on the square corner (non-welding or non-univalent input).
pub fn grunsky_table(p: &NormalizedPair, n: usize) -> Result<GrunskyTable> {
    grunsky_table_with_width(p, n, default_width(n))
}

/// Grunsky table with an explicit rectangular width `w >= n`.
pub fn grunsky_table_with_width(p: &NormalizedPair, n: usize, w: usize) -> Result<GrunskyTable> {
    if n == 0 || n > p.order() || w < n {
        return Err(Error::DomainViolation);
    }
    let kl = n + w + PAD + 1;
    let b = p.b();

    // Faber coefficient rows (short, scale-free).
    let rd = reversion_data(p, n + PAD + 1);
    let sp = cumulative_pows(&rd.shat_inv, n, n + PAD + 1);
    let qp = cumulative_pows(&rd.fri, n, n + PAD + 1);

    // Forward power families (long, scale-free).
    let fc = p.f_coeffs(kl - 1);
    let mut fratio = vec![ZERO; kl];
    for j in 0..kl - 1 {
        fratio[j] = fc[j + 1];
    }
    let dh = p.dhat();
    let mut dt = vec![ZERO; kl];
    for (j, s) in dt.iter_mut().enumerate().take(dh.len().min(kl)).skip(1) {
        *s = dh[j];
    }
    let gt1 = uexp(&dt, kl);
    let fzinv = uinv(&fratio, kl);
    let gtinv = uinv(&gt1, kl);
    let gtail_pows = cumulative_pows(&gt1, n, kl);
    let f_pows = cumulative_pows(&fratio, n, kl);
    let fzneg = cumulative_pows(&fzinv, n, kl);
    let gtneg = cumulative_pows(&gtinv, n, kl);

    let mut bneg = vec![ONE; n + 1];
    for k in 1..=n {
        bneg[k] = bneg[k - 1] / b;
    }

    let mut bmm = Mat::zeros(n, w);
    let mut bpp = Mat::zeros(n, w);
    let mut bpm = Mat::zeros(w, n);
    let mut bpm_alt = Mat::zeros(n, w);
    let mut col_minus = vec![ZERO; n];
    let mut col_plus = vec![ZERO; n];

    for row in 1..=n {
        let pn = &sp[row];
        let qn = &qp[row];
        let inv_row = 1.0 / row as f64;

        // P_row composed with g: coefficient of z^{row-idx} at comp[idx].
        let mut comp = vec![ZERO; kl];
        comp[row] += pn[row];
        for j in 0..row {
            let k = row - j;
            let c = pn[j];
            let gt = &gtail_pows[k];
            for i in 0..kl - j {
                comp[j + i] += c * gt[i];
            }
        }
        for m in 1..=w {
            bpp[(row - 1, m - 1)] = comp[row + m] * inv_row;
        }

        // P_row composed with f: coefficient of z^{idx} at compf[idx].
        let mut compf = vec![ZERO; kl];
        compf[0] += pn[row];
        for j in 0..row {
            let k = row - j;
            let c = pn[j] * bneg[k];
            let fp = &f_pows[k];
            for i in 0..kl - k {
                compf[k + i] += c * fp[i];
            }
        }
        col_plus[row - 1] = compf[0] * inv_row;
        for m in 1..=w {
            bpm_alt[(row - 1, m - 1)] = compf[m] * inv_row;
        }

        // Q_row composed with f: coefficient of z^{idx-row} at compq[idx].
        let mut compq = vec![ZERO; kl];
        compq[row] += qn[row];
        for j in 0..row {
            let k = row - j;
            let c = qn[j];
            let fz = &fzneg[k];
            for i in 0..kl - j {
                compq[j + i] += c * fz[i];
            }
        }
        for m in 1..=w {
            bmm[(row - 1, m - 1)] = compq[row + m] * inv_row;
        }

        // Q_row composed with g: coefficient of z^{-idx} at compqg[idx].
        let mut compqg = vec![ZERO; w + 2];
        compqg[0] += qn[row];
        for j in 0..row {
            let k = row - j;
            let c = qn[j] * bneg[k];
            let gt = &gtneg[k];
            let lim = (w + 2 - k).min(kl);
            for (s, &gts) in gt.iter().enumerate().take(lim) {
                compqg[k + s] += c * gts;
            }
        }
        col_minus[row - 1] = -compqg[0] * inv_row;
        for m in 1..=w {
            bpm[(m - 1, row - 1)] = compqg[m] * inv_row;
        }
    }

    let mut cross = 0.0f64;
    for m in 1..=n {
        for c in 1..=n {
            let d = (bpm[(m - 1, c - 1)] - bpm_alt[(m - 1, c - 1)]).norm();
            if !d.is_finite() {
                return Err(Error::InconsistentBlocks(f64::INFINITY));
            }
            if d > cross {
                cross = d;
            }
        }
    }
    if cross > CROSS_TOL {
        return Err(Error::InconsistentBlocks(cross));
    }

    Ok(GrunskyTable {
        order: n,
        width: w,
        bmm,
        bpp,
        bpm,
        bpm_alt,
        col_minus,
        col_plus,
        b00: p.logb(),
        cross_residual: cross,
    })
}

/// Graded bivariate log table of a normalized series a (a[0] = 0): row m,
/// column j holds the coefficient of z^m Z^j in log((F(z)-F(Z))/(z-Z)) for
/// m = 1..=r, j = 0..=w; row 0 is zero (the constant is not computed).
/// `a` must carry coefficients through index r + w + 1.
pub(crate) fn zgraded_log_table(a: &[C64], r: usize, w: usize) -> Vec<Vec<C64>> {
    let kw = w + 1;
    let at = |i: usize| if i < a.len() { a[i] } else { ZERO };
    let mut dm = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let mut row = vec![ZERO; kw];
        for (j, s) in row.iter_mut().enumerate() {
            *s = at(i + j + 1);
        }
        dm.push(row);
    }
    let inv0 = uinv(&dm[0], kw);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut rhs: Vec<C64> = dm[i + 1].iter().map(|&c| c * (i + 1) as f64).collect();
        for k in 1..=i {
            let t = umul(&dm[k], &q[i - k], kw);
            for (rj, tj) in rhs.iter_mut().zip(t.iter()) {
                *rj -= *tj;
            }
        }
        q.push(umul(&rhs, &inv0, kw));
    }
    let mut l = Vec::with_capacity(r + 1);
    l.push(vec![ZERO; kw]);
    for m in 1..=r {
        let row: Vec<C64> = q[m - 1].iter().map(|&c| c / m as f64).collect();
        l.push(row);
    }
    l
}

/// Independent small-order construction of the Grunsky table from truncated
/// bivariate logs of the generating functions and mixed power sums; used to
/// cross-validate the composition route.
///
/// Errors with `DomainViolation` for order 0, order above the pair order, or
/// order above 8 (the cost of the bivariate route grows fast and it exists
/// only as an oracle).
pub fn grunsky_table_direct(p: &NormalizedPair, n: usize) -> Result<GrunskyTable> {
    if n == 0 || n > 8 || n > p.order() {
        return Err(Error::DomainViolation);
    }
    let deep = 2 * n + 1;
    let fc = p.f_coeffs(deep);
    let gh = p.ghat_coeffs(deep);
    let lf = zgraded_log_table(&fc, n, n);
    let lg = zgraded_log_table(&gh, n, n);

    let mut bmm = Mat::zeros(n, n);
    let mut bpp = Mat::zeros(n, n);
    for m in 1..=n {
        for j in 1..=n {
            bmm[(m - 1, j - 1)] = -lf[m][j];
            bpp[(m - 1, j - 1)] = -lg[m][j];
        }
    }

    // Mixed block from log(1 - f(Z)/g(z)) = -sum_k f(Z)^k ghat(1/z)^k / k.
    let kz = n + 1;
    let mut bpm = Mat::zeros(n, n);
    let mut fpk = vec![ZERO; kz];
    let mut gpk = vec![ZERO; kz];
    fpk[0] = ONE;
    gpk[0] = ONE;
    for k in 1..=n {
        fpk = umul(&fpk, &fc, kz);
        gpk = umul(&gpk, &gh, kz);
        let inv_k = 1.0 / k as f64;
        for m in k..=n {
            for j in k..=n {
                bpm[(m - 1, j - 1)] += gpk[m] * fpk[j] * inv_k;
            }
        }
    }
    let bpm_alt = bpm.clone();

    let chat = p.chat();
    let dhat = p.dhat();
    let pick = |v: &[C64], k: usize| if k < v.len() { v[k] } else { ZERO };
    let mut col_minus = vec![ZERO; n];
    let mut col_plus = vec![ZERO; n];
    for k in 1..=n {
        col_minus[k - 1] = -pick(chat, k);
        col_plus[k - 1] = -pick(dhat, k);
    }

    Ok(GrunskyTable {
        order: n,
        width: n,
        bmm,
        bpp,
        bpm,
        bpm_alt,
        col_minus,
        col_plus,
        b00: p.logb(),
        cross_residual: 0.0,
    })
}

/// Worst-case residual of the composition identity P_n(g(z)) = z^n +
/// n * sum_m b_{n,m} z^{-m} over the sample points and all n up to the table
/// order, with the tail summed through the full table width.
///
/// Errors with `DomainViolation` if any sample point is not strictly outside
/// the unit circle (margin 1e-6).
pub fn faber_identity_residual(
    p: &NormalizedPair,
    table: &GrunskyTable,
    samples: &[C64],
) -> Result<f64> {
    for &z in samples {
        if z.norm() < 1.0 + SAMPLE_MARGIN {
            return Err(Error::DomainViolation);
        }
    }
    let n = table.order();
    let w = table.width();
    let fs = faber_polys(p, n)?;
    let g = p.g();
    let mut worst = 0.0f64;
    for &z in samples {
        let gz = g.eval(z);
        let zi = ONE / z;
        for row in 1..=n {
            let lhs = fs.eval_p(row, gz);
            let mut tail = ZERO;
            let mut zm = ONE;
            for m in 1..=w {
                zm *= zi;
                tail += table.bpp[(row - 1, m - 1)] * zm;
            }
            let rhs = z.powi(row as i32) + tail * row as f64;
            let r = (lhs - rhs).norm();
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}
