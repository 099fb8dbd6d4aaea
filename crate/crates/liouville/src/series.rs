//! Truncated complex power/Laurent series: the substrate every analytic
//! computation in the toolkit is built on.
//!
//! All operations are exact-in-truncation formal-series transforms; the only
//! error sources are f64 roundoff and the truncation order itself. Orders are
//! caller-chosen everywhere (CLI default 32).

use crate::{C64, Error, Result};
use alloc::vec;
use alloc::vec::Vec;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// raw kernels on coefficient slices (index = power), shared by the pair /
// faber / welding pipelines where wrapping every intermediate in a type would
// only add noise

/// Truncated Cauchy product, `k` output coefficients.
pub(crate) fn umul(a: &[C64], b: &[C64], k: usize) -> Vec<C64> {
    let mut out = vec![ZERO; k];
    for (i, &ai) in a.iter().enumerate().take(k) {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(k - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Reciprocal of a series with nonzero constant term.
pub(crate) fn uinv(a: &[C64], k: usize) -> Vec<C64> {
    let mut r = vec![ZERO; k];
    r[0] = ONE / a[0];
    for n in 1..k {
        let mut s = ZERO;
        let m = n.min(a.len() - 1);
        for j in 1..=m {
            s += a[j] * r[n - j];
        }
        r[n] = -s / a[0];
    }
    r
}

/// log of a series with constant term 1 (output constant term 0).
pub(crate) fn ulog(a: &[C64], k: usize) -> Vec<C64> {
    let at = |i: usize| if i < a.len() { a[i] } else { ZERO };
    let mut l = vec![ZERO; k];
    for n in 1..k {
        let mut s = ZERO;
        for j in 1..n {
            s += C64::new(j as f64, 0.0) * l[j] * at(n - j);
        }
        l[n] = at(n) - s / n as f64;
    }
    l
}

/// exp of a series with constant term 0 (output constant term 1).
pub(crate) fn uexp(l: &[C64], k: usize) -> Vec<C64> {
    let at = |i: usize| if i < l.len() { l[i] } else { ZERO };
    let mut e = vec![ZERO; k];
    e[0] = ONE;
    for n in 1..k {
        let mut s = ZERO;
        for j in 1..=n {
            s += C64::new(j as f64, 0.0) * at(j) * e[n - j];
        }
        e[n] = s / n as f64;
    }
    e
}

/// Horner composition (outer o inner), `k` output coefficients; the inner
/// series must have zero constant term for the result to be meaningful.
pub(crate) fn ucompose(outer: &[C64], inner: &[C64], k: usize) -> Vec<C64> {
    let deg = outer.len().min(k);
    if deg == 0 {
        return vec![ZERO; k];
    }
    let mut out = vec![ZERO; k];
    out[0] = outer[deg - 1];
    for j in (0..deg - 1).rev() {
        out = umul(&out, inner, k);
        out[0] += outer[j];
    }
    out
}

/// Compositional inverse of f = z + f2 z^2 + ... by Newton iteration with
/// order doubling; returns h with f(h(w)) = w through k-1 powers.
pub(crate) fn urevert(f: &[C64], k: usize) -> Vec<C64> {
    debug_assert!(f[0] == ZERO && (f[1] - ONE).norm() < 1e-13);
    let mut h = vec![ZERO; 2.min(k)];
    if k > 1 {
        h[1] = ONE;
    }
    let fp: Vec<C64> = (1..f.len())
        .map(|j| C64::new(j as f64, 0.0) * f[j])
        .collect();
    let mut attained = 1usize;
    while attained < k - 1 {
        let m = (2 * attained + 1).min(k);
        h.resize(m, ZERO);
        // residual f(h) - w, correct-to-zero through attained, fixes new range
        let mut comp = ucompose(&f[..f.len().min(m)], &h, m);
        if m > 1 {
            comp[1] -= ONE;
        }
        let dcomp = ucompose(&fp[..fp.len().min(m)], &h, m);
        let corr = umul(&comp, &uinv(&dcomp, m), m);
        for j in 0..m {
            h[j] -= corr[j];
        }
        attained = m - 1;
    }
    h.resize(k, ZERO);
    h
}

fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

// ---------------------------------------------------------------------------

/// Truncated power series c0 + c1 z + ... + cN z^N on the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<C64>,
}

impl TaylorSeries {
    /// Wraps a coefficient vector c0..cN; every entry must be finite.
    pub fn new(coeffs: Vec<C64>) -> Result<TaylorSeries> {
        if coeffs.is_empty() || !all_finite(&coeffs) {
            return Err(Error::DomainViolation);
        }
        Ok(TaylorSeries { coeffs })
    }

    pub(crate) fn raw(coeffs: Vec<C64>) -> TaylorSeries {
        debug_assert!(!coeffs.is_empty());
        TaylorSeries { coeffs }
    }

    /// The zero series at the given order.
    pub fn zero(order: usize) -> TaylorSeries {
        TaylorSeries {
            coeffs: vec![ZERO; order + 1],
        }
    }

    /// The identity series z at the given order (order >= 1).
    pub fn identity(order: usize) -> TaylorSeries {
        let mut s = TaylorSeries::zero(order.max(1));
        s.coeffs[1] = ONE;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of z^k (zero beyond the truncation).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Copy truncated or zero-padded to the given order.
    pub fn truncate(&self, order: usize) -> TaylorSeries {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, ZERO);
        TaylorSeries { coeffs: c }
    }

    pub fn add(&self, other: &TaylorSeries) -> TaylorSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![ZERO; n];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = self.coeff(i) + other.coeff(i);
        }
        TaylorSeries { coeffs: c }
    }

    pub fn sub(&self, other: &TaylorSeries) -> TaylorSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![ZERO; n];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = self.coeff(i) - other.coeff(i);
        }
        TaylorSeries { coeffs: c }
    }

    pub fn scale(&self, s: C64) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &TaylorSeries) -> TaylorSeries {
        let k = self.coeffs.len().min(other.coeffs.len());
        TaylorSeries {
            coeffs: umul(&self.coeffs, &other.coeffs, k),
        }
    }

    /// Recursive quotient truncated at the smaller order.
    pub fn div(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        if other.coeffs[0] == ZERO {
            return Err(Error::DivisionByNonUnit);
        }
        let k = self.coeffs.len().min(other.coeffs.len());
        let inv = uinv(&other.coeffs, k);
        Ok(TaylorSeries {
            coeffs: umul(&self.coeffs, &inv, k),
        })
    }

    /// Termwise derivative; drops the order by one.
    pub fn derivative(&self) -> TaylorSeries {
        if self.coeffs.len() == 1 {
            return TaylorSeries::zero(0);
        }
        TaylorSeries {
            coeffs: (1..self.coeffs.len())
                .map(|j| C64::new(j as f64, 0.0) * self.coeffs[j])
                .collect(),
        }
    }

    /// Termwise antiderivative with constant term 0; raises the order by one.
    pub fn antiderivative(&self) -> TaylorSeries {
        let mut c = vec![ZERO; self.coeffs.len() + 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            c[j + 1] = a / (j + 1) as f64;
        }
        TaylorSeries { coeffs: c }
    }

    /// Formal logarithm; the constant term must be 1.
    pub fn log_unit(&self) -> Result<TaylorSeries> {
        if (self.coeffs[0] - ONE).norm() > 1e-12 {
            return Err(Error::NotUnit);
        }
        Ok(TaylorSeries {
            coeffs: ulog(&self.coeffs, self.coeffs.len()),
        })
    }

    /// Formal exponential exp(c0) * exp(tail).
    pub fn exp(&self) -> TaylorSeries {
        let mut shifted = self.coeffs.clone();
        let c0 = shifted[0];
        shifted[0] = ZERO;
        let mut e = uexp(&shifted, shifted.len());
        let scale = c0.exp();
        for x in e.iter_mut() {
            *x *= scale;
        }
        TaylorSeries { coeffs: e }
    }

    /// Horner composition self(inner); inner must have zero constant term.
    pub fn compose(&self, inner: &TaylorSeries) -> Result<TaylorSeries> {
        if inner.coeffs[0] != ZERO {
            return Err(Error::NotComposable);
        }
        let k = self.coeffs.len().min(inner.coeffs.len());
        Ok(TaylorSeries {
            coeffs: ucompose(&self.coeffs, &inner.coeffs, k),
        })
    }

    /// Compositional inverse; requires c0 = 0 and c1 != 0. The general
    /// leading coefficient is handled by conjugating with dilations around
    /// the monic Newton reversion.
    pub fn revert(&self) -> Result<TaylorSeries> {
        let k = self.coeffs.len();
        if self.coeffs[0] != ZERO || k < 2 || self.coeffs[1] == ZERO {
            return Err(Error::NotInvertible);
        }
        let c1 = self.coeffs[1];
        // normalize to monic: F(z) = f(z)/c1, then f^{-1}(w) = F^{-1}(w/c1)
        let monic: Vec<C64> = self.coeffs.iter().map(|c| c / c1).collect();
        let h = urevert(&monic, k);
        let mut pw = ONE;
        let mut out = vec![ZERO; k];
        for j in 1..k {
            pw /= c1;
            out[j] = h[j] * pw;
        }
        Ok(TaylorSeries { coeffs: out })
    }

    /// Horner evaluation of the truncation (meaningful for |z| <= 1).
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Norm squared in A21 of the disk for a density psi = sum p_k z^k:
    /// pi * sum |p_k|^2 / (k+1).
    pub fn a21_norm_sq(&self) -> f64 {
        let pi = core::f64::consts::PI;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, p)| p.norm_sqr() / (k + 1) as f64)
            .sum::<f64>()
            * pi
    }

    /// Norm squared in the hyperbolic A2 of the disk for phi = sum s_n z^n:
    /// per-mode weight pi / (2 (n+1)(n+2)(n+3)), with the density convention
    /// rho(z) = 4 (1-|z|^2)^{-2} (the weight of z^0 integrates to pi/12).
    pub fn a2_hyperbolic_norm_sq(&self) -> f64 {
        let pi = core::f64::consts::PI;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let n = n as f64;
                s.norm_sqr() * pi / (2.0 * (n + 1.0) * (n + 2.0) * (n + 3.0))
            })
            .sum()
    }
}

/// Norm squared in A21 of the exterior disk for a density written as
/// sum_k q_k z^{-k-2}; the weights match the interior case: pi sum |q_k|^2/(k+1).
pub fn a21_norm_sq_exterior(q: &[C64]) -> f64 {
    let pi = core::f64::consts::PI;
    q.iter()
        .enumerate()
        .map(|(k, v)| v.norm_sqr() / (k + 1) as f64)
        .sum::<f64>()
        * pi
}

/// Truncated expansion at infinity g(z) = b z + b0 + sum_{k>=1} b_k z^{-k};
/// b = g'(inf) is stored separately and stays exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorSeries {
    b: C64,
    b0: C64,
    tail: Vec<C64>,
}

impl ExteriorSeries {
    /// Wraps (b, b0, tail = b1..bN); b must be nonzero, all entries finite.
    pub fn new(b: C64, b0: C64, tail: Vec<C64>) -> Result<ExteriorSeries> {
        if b == ZERO
            || !b.re.is_finite()
            || !b.im.is_finite()
            || !b0.re.is_finite()
            || !b0.im.is_finite()
            || !all_finite(&tail)
        {
            return Err(Error::DomainViolation);
        }
        Ok(ExteriorSeries { b, b0, tail })
    }

    /// The identity map z at the given tail order.
    pub fn identity(order: usize) -> ExteriorSeries {
        ExteriorSeries {
            b: ONE,
            b0: ZERO,
            tail: vec![ZERO; order],
        }
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn b0(&self) -> C64 {
        self.b0
    }

    /// Tail coefficients b1..bN.
    pub fn tail(&self) -> &[C64] {
        &self.tail
    }

    /// Tail truncation order N.
    pub fn order(&self) -> usize {
        self.tail.len()
    }

    /// Coefficient of z^{-k} for k >= 1 (zero beyond the truncation).
    pub fn tail_coeff(&self, k: usize) -> C64 {
        debug_assert!(k >= 1);
        self.tail.get(k - 1).copied().unwrap_or(ZERO)
    }

    /// Horner evaluation (meaningful for |z| >= 1).
    pub fn eval(&self, z: C64) -> C64 {
        let zi = ONE / z;
        let mut acc = ZERO;
        for &c in self.tail.iter().rev() {
            acc = acc * zi + c;
        }
        self.b * z + self.b0 + acc * zi
    }
}
