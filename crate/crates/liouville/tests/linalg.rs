use liouville::linalg::{
    block2x2, cholesky, cholesky_logdet, cholesky_solve, hermitian_eigh, hermitian_min_eig, svd,
    Mat,
};
use liouville::C64;

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

fn random_mat(rng: &mut Lcg, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.next_c())
}

#[test]
fn product_against_hand_computation() {
    let a = Mat::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, 0.0));
    let b = Mat::from_fn(2, 2, |i, j| C64::new(0.0, (i + j) as f64));
    let p = a.mul(&b);
    // [[0,1],[2,3]] x i[[0,1],[1,2]] = i[[1,2],[3,8]]
    assert_eq!(p[(0, 0)], C64::new(0.0, 1.0));
    assert_eq!(p[(0, 1)], C64::new(0.0, 2.0));
    assert_eq!(p[(1, 0)], C64::new(0.0, 3.0));
    assert_eq!(p[(1, 1)], C64::new(0.0, 8.0));
}

#[test]
fn adjoint_product_shortcut() {
    let mut rng = Lcg(11);
    let a = random_mat(&mut rng, 5, 7);
    let b = random_mat(&mut rng, 4, 7);
    let direct = a.mul(&b.adjoint());
    let fused = a.mul_adjoint(&b);
    assert!(direct.sub(&fused).max_abs() < 1e-14);
}

#[test]
fn block_assembly_lays_out_quadrants() {
    let n = 3;
    let a = Mat::identity(n);
    let z = Mat::zeros(n, n);
    let m = block2x2(&a, &z, &z, &a);
    assert!(m.sub(&Mat::identity(2 * n)).max_abs() == 0.0);
}

fn random_hpd(rng: &mut Lcg, n: usize) -> Mat {
    let a = random_mat(rng, n, n);
    let mut h = a.mul_adjoint(&a);
    for i in 0..n {
        h[(i, i)] += C64::new(n as f64 * 0.1, 0.0);
    }
    h
}

#[test]
fn cholesky_reconstructs() {
    let mut rng = Lcg(42);
    let h = random_hpd(&mut rng, 12);
    let l = cholesky(&h).unwrap();
    let rec = l.mul(&l.adjoint());
    assert!(rec.sub(&h).max_abs() < 1e-12 * h.max_abs());
}

#[test]
fn cholesky_rejects_indefinite() {
    let mut h = Mat::identity(3);
    h[(1, 1)] = C64::new(-2.0, 0.0);
    assert!(cholesky(&h).is_none());
}

#[test]
fn cholesky_logdet_of_diagonal() {
    let mut h = Mat::identity(4);
    for (i, d) in [2.0, 3.0, 0.5, 7.0].iter().enumerate() {
        h[(i, i)] = C64::new(*d, 0.0);
    }
    let want = (2.0f64 * 3.0 * 0.5 * 7.0).ln();
    assert!((cholesky_logdet(&h).unwrap() - want).abs() < 1e-14);
}

#[test]
fn cholesky_solver_inverts() {
    let mut rng = Lcg(8);
    let n = 9;
    let h = random_hpd(&mut rng, n);
    let l = cholesky(&h).unwrap();
    let x0: Vec<C64> = (0..n).map(|_| rng.next_c()).collect();
    let mut b = h.mul_vec(&x0);
    cholesky_solve(&l, &mut b);
    let dev = b
        .iter()
        .zip(&x0)
        .map(|(a, c)| (a - c).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-11);
}

#[test]
fn svd_reconstructs_and_is_orthogonal() {
    let mut rng = Lcg(1234);
    for (m, n) in [(6usize, 6usize), (10, 6), (8, 1)] {
        let a = random_mat(&mut rng, m, n);
        let f = svd(&a);
        let mut sig = Mat::zeros(n, n);
        for (i, &s) in f.sigma.iter().enumerate() {
            sig[(i, i)] = C64::new(s, 0.0);
        }
        let rec = f.u.mul(&sig).mul(&f.v.adjoint());
        assert!(rec.sub(&a).max_abs() < 1e-12 * (1.0 + a.max_abs()), "{}x{}", m, n);
        let iu = f.u.adjoint().mul(&f.u).sub(&Mat::identity(n)).max_abs();
        let iv = f.v.adjoint().mul(&f.v).sub(&Mat::identity(n)).max_abs();
        assert!(iu < 1e-13 && iv < 1e-13, "{}x{}: {} {}", m, n, iu, iv);
        for w in f.sigma.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}

#[test]
fn svd_of_phase_diagonal_recovers_moduli() {
    let vals = [
        C64::from_polar(3.0, 0.4),
        C64::from_polar(1.0, -2.0),
        C64::from_polar(0.25, 1.1),
    ];
    let a = Mat::from_fn(3, 3, |i, j| if i == j { vals[i] } else { C64::new(0.0, 0.0) });
    let f = svd(&a);
    let want = [3.0, 1.0, 0.25];
    for (s, w) in f.sigma.iter().zip(want) {
        assert!((s - w).abs() < 1e-14);
    }
}

#[test]
fn svd_completes_null_space_columns() {
    // rank-1 matrix: two zero singular values, U must still be an isometry
    let mut rng = Lcg(5);
    let u0: Vec<C64> = (0..4).map(|_| rng.next_c()).collect();
    let v0: Vec<C64> = (0..3).map(|_| rng.next_c()).collect();
    let a = Mat::from_fn(4, 3, |i, j| u0[i] * v0[j].conj());
    let f = svd(&a);
    assert!(f.sigma[1] < 1e-13 && f.sigma[2] < 1e-13);
    let iu = f.u.adjoint().mul(&f.u).sub(&Mat::identity(3)).max_abs();
    assert!(iu < 1e-12, "iu={}", iu);
}

#[test]
fn eigh_known_two_by_two() {
    let h = Mat::from_fn(2, 2, |i, j| {
        C64::new(if i == j { 2.0 } else { 1.0 }, 0.0)
    });
    let (vals, vecs) = hermitian_eigh(&h);
    assert!((vals[0] - 1.0).abs() < 1e-14);
    assert!((vals[1] - 3.0).abs() < 1e-14);
    let rec = vecs
        .mul(&Mat::from_fn(2, 2, |i, j| {
            if i == j {
                C64::new(vals[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .mul(&vecs.adjoint());
    assert!(rec.sub(&h).max_abs() < 1e-14);
}

#[test]
fn eigh_reconstructs_random_hermitian() {
    let mut rng = Lcg(77);
    let n = 14;
    let a = random_mat(&mut rng, n, n);
    let h = a.add(&a.adjoint()).scale(C64::new(0.5, 0.0));
    let (vals, vecs) = hermitian_eigh(&h);
    for w in vals.windows(2) {
        assert!(w[0] <= w[1]);
    }
    let mut d = Mat::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        d[(i, i)] = C64::new(v, 0.0);
    }
    let rec = vecs.mul(&d).mul(&vecs.adjoint());
    assert!(rec.sub(&h).max_abs() < 1e-12);
    let orth = vecs.adjoint().mul(&vecs).sub(&Mat::identity(n)).max_abs();
    assert!(orth < 1e-13);
}

#[test]
fn min_eig_of_shifted_projector() {
    // I - x x^H / (2 x^H x) has smallest eigenvalue 1/2
    let mut rng = Lcg(31);
    let n = 6;
    let x: Vec<C64> = (0..n).map(|_| rng.next_c()).collect();
    let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let mut h = Mat::identity(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= x[i] * x[j].conj() / C64::new(2.0 * nx, 0.0);
        }
    }
    assert!((hermitian_min_eig(&h) - 0.5).abs() < 1e-13);
}
