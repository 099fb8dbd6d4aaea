use liouville::fft::{fft, fft2, fft_real, ifft, naive_dft, next_pow2};
use liouville::C64;

// small deterministic generator so the tests need no external RNG
struct Lcg(u64);

impl Lcg {
    fn next_f(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
    }
    fn next_c(&mut self) -> C64 {
        C64::new(self.next_f(), self.next_f())
    }
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn matches_direct_transform() {
    let mut rng = Lcg(7);
    for n in [1usize, 2, 4, 16, 64] {
        let x: Vec<C64> = (0..n).map(|_| rng.next_c()).collect();
        let mut got = x.clone();
        fft(&mut got);
        let want = naive_dft(&x, false);
        assert!(max_dev(&got, &want) < 1e-12, "n={}", n);
        let mut down = x.clone();
        ifft(&mut down);
        let want_inv = naive_dft(&x, true);
        assert!(max_dev(&down, &want_inv) < 1e-12, "inverse n={}", n);
    }
}

#[test]
fn round_trip_is_identity() {
    let mut rng = Lcg(99);
    let x: Vec<C64> = (0..256).map(|_| rng.next_c()).collect();
    let mut work = x.clone();
    fft(&mut work);
    ifft(&mut work);
    assert!(max_dev(&work, &x) < 1e-13);
}

#[test]
fn delta_transforms_to_constant() {
    let mut x = vec![C64::new(0.0, 0.0); 8];
    x[0] = C64::new(1.0, 0.0);
    fft(&mut x);
    for v in x {
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn real_input_helper_agrees() {
    let mut rng = Lcg(3);
    let xr: Vec<f64> = (0..32).map(|_| rng.next_f()).collect();
    let mut xc: Vec<C64> = xr.iter().map(|&v| C64::new(v, 0.0)).collect();
    fft(&mut xc);
    assert!(max_dev(&fft_real(&xr), &xc) == 0.0);
}

#[test]
fn two_dimensional_round_trip() {
    let mut rng = Lcg(21);
    let (rows, cols) = (8usize, 16usize);
    let a: Vec<C64> = (0..rows * cols).map(|_| rng.next_c()).collect();
    let mut work = a.clone();
    fft2(&mut work, rows, cols, false);
    fft2(&mut work, rows, cols, true);
    assert!(max_dev(&work, &a) < 1e-13);
}

#[test]
fn two_dimensional_convolution_theorem() {
    // product of bivariate polynomials via padded grids
    let (r, c) = (4usize, 4usize);
    let (pr, pc) = (next_pow2(2 * r), next_pow2(2 * c));
    let mut rng = Lcg(5);
    let a: Vec<C64> = (0..r * c).map(|_| rng.next_c()).collect();
    let b: Vec<C64> = (0..r * c).map(|_| rng.next_c()).collect();
    let pad = |m: &[C64]| {
        let mut p = vec![C64::new(0.0, 0.0); pr * pc];
        for i in 0..r {
            for j in 0..c {
                p[i * pc + j] = m[i * c + j];
            }
        }
        p
    };
    let mut fa = pad(&a);
    let mut fb = pad(&b);
    fft2(&mut fa, pr, pc, false);
    fft2(&mut fb, pr, pc, false);
    let mut prod: Vec<C64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    fft2(&mut prod, pr, pc, true);
    // direct double convolution
    let mut want = vec![C64::new(0.0, 0.0); pr * pc];
    for i1 in 0..r {
        for j1 in 0..c {
            for i2 in 0..r {
                for j2 in 0..c {
                    want[(i1 + i2) * pc + (j1 + j2)] += a[i1 * c + j1] * b[i2 * c + j2];
                }
            }
        }
    }
    assert!(max_dev(&prod, &want) < 1e-13);
}

#[test]
fn parseval_energy_identity() {
    let mut rng = Lcg(17);
    let x: Vec<C64> = (0..128).map(|_| rng.next_c()).collect();
    let mut f = x.clone();
    fft(&mut f);
    let et: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let ef: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>() / 128.0;
    assert!((et - ef).abs() < 1e-11 * et);
}
