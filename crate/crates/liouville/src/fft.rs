//! Radix-2 FFT on power-of-two grids, plus the row/column 2D transform used
//! by the bivariate series engine.
//!
//! All grids in the toolkit are powers of two by contract, so a single
//! iterative Cooley-Tukey kernel covers every use. The inverse transform
//! scales by 1/n, so `ifft(fft(x)) == x` up to rounding.

use crate::C64;
use alloc::vec;
use alloc::vec::Vec;

const TAU: f64 = core::f64::consts::TAU;

/// True iff `n` is a nonzero power of two.
pub fn is_pow2(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Smallest power of two that is >= `n`.
pub fn next_pow2(n: usize) -> usize {
    let mut p = 1;
    while p < n {
        p <<= 1;
    }
    p
}

fn fft_dir(a: &mut [C64], inverse: bool) {
    let n = a.len();
    debug_assert!(is_pow2(n), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    let mut tw: Vec<C64> = Vec::with_capacity(n / 2);
    while len <= n {
        let half = len / 2;
        let ang = sign * TAU / len as f64;
        tw.clear();
        for k in 0..half {
            let t = ang * k as f64;
            tw.push(C64::new(libm::cos(t), libm::sin(t)));
        }
        let mut start = 0;
        while start < n {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * tw[k];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
            start += len;
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for x in a.iter_mut() {
            *x *= scale;
        }
    }
}

/// In-place forward transform (unscaled).
pub fn fft(a: &mut [C64]) {
    fft_dir(a, false);
}

/// In-place inverse transform (scaled by 1/n).
pub fn ifft(a: &mut [C64]) {
    fft_dir(a, true);
}

/// Forward transform of real samples; returns the complex spectrum.
pub fn fft_real(samples: &[f64]) -> Vec<C64> {
    let mut a: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    fft(&mut a);
    a
}

/// In-place 2D transform of a row-major `rows x cols` grid.
///
/// Rows first, then columns through a scratch column buffer; both dimensions
/// must be powers of two.
pub fn fft2(a: &mut [C64], rows: usize, cols: usize, inverse: bool) {
    debug_assert_eq!(a.len(), rows * cols);
    for r in 0..rows {
        fft_dir(&mut a[r * cols..(r + 1) * cols], inverse);
    }
    let mut col = vec![C64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = a[r * cols + c];
        }
        fft_dir(&mut col, inverse);
        for r in 0..rows {
            a[r * cols + c] = col[r];
        }
    }
}

/// Quadratic-time reference transform for validating the fast kernel.
pub fn naive_dft(a: &[C64], inverse: bool) -> Vec<C64> {
    let n = a.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &x) in a.iter().enumerate() {
            let t = sign * TAU * (k * j % n) as f64 / n as f64;
            acc += x * C64::new(libm::cos(t), libm::sin(t));
        }
        if inverse {
            acc /= n as f64;
        }
        out.push(acc);
    }
    out
}
