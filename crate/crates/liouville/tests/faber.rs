use liouville::faber::{
    faber_identity_residual, faber_polys, grunsky_table, grunsky_table_direct,
    grunsky_table_with_width,
};
use liouville::pair::NormalizedPair;
use liouville::{C64, Error};
use proptest::prelude::*;

const ZERO: C64 = C64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn identity_pair(order: usize) -> NormalizedPair {
    NormalizedPair::from_exponents(&[], &[], 1.0, order, "id".into()).unwrap()
}

/// g = z + t/z, f = z: dhat_{2j} = -(-t)^j / j so that
/// exp(sum dhat u^{2j}) = 1 + t u^2.
fn ellipse_g_pair(t: f64, order: usize) -> NormalizedPair {
    let mut dhat = vec![ZERO; order + 1];
    let mut j = 1usize;
    while 2 * j <= order {
        let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
        dhat[2 * j] = c(sign * t.powi(j as i32) / j as f64, 0.0);
        j += 1;
    }
    NormalizedPair::from_exponents(&[], &dhat, 1.0, order, "ellipse-g".into()).unwrap()
}

/// f = z + a z^2, g = z: chat_k = -(-a)^k / k so that exp(sum chat z^k) = 1 + a z.
fn quadratic_f_pair(a: f64, order: usize) -> NormalizedPair {
    let mut chat = vec![ZERO; order + 1];
    for k in 1..=order {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        chat[k] = c(sign * a.powi(k as i32) / k as f64, 0.0);
    }
    NormalizedPair::from_exponents(&chat, &[], 1.0, order, "quad-f".into()).unwrap()
}

fn generic_pair(b: f64, order: usize) -> NormalizedPair {
    let chat = [ZERO, c(0.10, 0.02), c(-0.05, 0.01), c(0.02, -0.015)];
    let dhat = [ZERO, c(0.08, -0.03), c(0.03, 0.02), c(-0.01, 0.005)];
    NormalizedPair::from_exponents(&chat, &dhat, b, order, "generic".into()).unwrap()
}

// ---------------------------------------------------------------------------
// Faber polynomials

#[test]
fn faber_p_of_identity_g_is_monomial() {
    let p = identity_pair(8);
    let fs = faber_polys(&p, 6).unwrap();
    for n in 1..=6 {
        let pn = fs.p(n);
        assert_eq!(pn.order(), n);
        for i in 0..=n {
            let want = if i == n { 1.0 } else { 0.0 };
            assert!((pn.coeff(i) - c(want, 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn faber_q_of_identity_f_is_inverse_monomial() {
    let p = identity_pair(8);
    let fs = faber_polys(&p, 5).unwrap();
    for n in 1..=5 {
        let q = fs.q(n);
        assert_eq!(q.len(), n + 1);
        for (i, &qi) in q.iter().enumerate() {
            let want = if i == n { 1.0 } else { 0.0 };
            assert!((qi - c(want, 0.0)).norm() < 1e-14);
        }
        assert!(fs.q_at_infinity(n).norm() < 1e-14);
    }
}

#[test]
fn faber_p_of_joukowski_tail() {
    // g = z + t/z: P1 = w, P2 = w^2 - 2t.
    let t = 0.35;
    let p = ellipse_g_pair(t, 12);
    let fs = faber_polys(&p, 4).unwrap();
    let p1 = fs.p(1);
    assert!((p1.coeff(1) - c(1.0, 0.0)).norm() < 1e-13);
    assert!(p1.coeff(0).norm() < 1e-13);
    let p2 = fs.p(2);
    assert!((p2.coeff(2) - c(1.0, 0.0)).norm() < 1e-13);
    assert!(p2.coeff(1).norm() < 1e-13);
    assert!((p2.coeff(0) - c(-2.0 * t, 0.0)).norm() < 1e-13);
}

#[test]
fn faber_p_leading_coefficient_is_b_power() {
    let p = generic_pair(1.3, 16);
    let fs = faber_polys(&p, 10).unwrap();
    for n in 1..=10 {
        let lead = fs.p(n).coeff(n);
        let want = c(1.3f64.powi(-(n as i32)), 0.0);
        assert!(
            (lead - want).norm() < 1e-13 * want.norm(),
            "n={n} lead={lead}"
        );
    }
}

#[test]
fn faber_q_constant_of_quadratic() {
    // f = z + a z^2: 1/f^{-1}(w) = 1/w + a + O(w), so Q1(inf) = a.
    let a = 0.21;
    let p = quadratic_f_pair(a, 24);
    let fs = faber_polys(&p, 3).unwrap();
    assert!((fs.q_at_infinity(1) - c(a, 0.0)).norm() < 1e-13);
    assert!((fs.q(1)[1] - c(1.0, 0.0)).norm() < 1e-13);
}

#[test]
fn faber_eval_matches_coefficients() {
    let p = generic_pair(1.1, 12);
    let fs = faber_polys(&p, 6).unwrap();
    let w = c(1.7, 0.4);
    let mut acc = ZERO;
    let p3 = fs.p(3);
    for i in (0..=3).rev() {
        acc = acc * w + p3.coeff(i);
    }
    assert!((fs.eval_p(3, w) - acc).norm() < 1e-13 * acc.norm().max(1.0));
    let q3 = fs.q(3);
    let wi = c(1.0, 0.0) / w;
    let direct: C64 = (0..=3).map(|i| q3[i] * wi.powi(i as i32)).sum();
    assert!((fs.eval_q(3, w) - direct).norm() < 1e-13);
}

#[test]
fn faber_polys_order_guard() {
    let p = identity_pair(4);
    assert!(matches!(faber_polys(&p, 5), Err(Error::DomainViolation)));
}

// ---------------------------------------------------------------------------
// Grunsky table: exact small cases

#[test]
fn table_of_identity_pair() {
    let p = identity_pair(10);
    let t = grunsky_table(&p, 6).unwrap();
    assert_eq!(t.order(), 6);
    assert!(t.width() >= 6);
    assert!(t.b00().norm() < 1e-15);
    assert!(t.cross_residual() < 1e-14);
    for m in 1..=6 {
        assert!(t.col_minus(m).norm() < 1e-14);
        assert!(t.col_plus(m).norm() < 1e-14);
        for n in 1..=t.width() {
            assert!(t.bmm(m, n).norm() < 1e-14);
            assert!(t.bpp(m, n).norm() < 1e-14);
            // mixed block of the identity pair is the universal one:
            // b_{m,-n} = delta_{mn}/m, which is what makes the weighted
            // block matrix unitary.
            let want = if m == n { 1.0 / m as f64 } else { 0.0 };
            assert!(
                (t.bpm(m, n) - c(want, 0.0)).norm() < 1e-14,
                "bpm({m},{n})"
            );
        }
    }
}

#[test]
fn table_of_joukowski_g_is_diagonal() {
    // order 100 keeps the stored log-series truncation of log(1 + t u^2)
    // below 1e-15 across the full table width
    let t = 0.5;
    let p = ellipse_g_pair(t, 100);
    let table = grunsky_table(&p, 8).unwrap();
    for m in 1..=8 {
        for n in 1..=table.width() {
            let want = if m == n {
                c(t.powi(m as i32) / m as f64, 0.0)
            } else {
                ZERO
            };
            assert!(
                (table.bpp(m, n) - want).norm() < 1e-12,
                "bpp({m},{n}) = {}",
                table.bpp(m, n)
            );
        }
    }
}

#[test]
fn table_of_quadratic_f_corner() {
    let a = 0.3;
    let p = quadratic_f_pair(a, 40);
    let table = grunsky_table(&p, 6).unwrap();
    assert!((table.bmm(1, 1) - c(a * a, 0.0)).norm() < 1e-12);
}

#[test]
fn table_columns_recover_exponents() {
    let p = generic_pair(1.25, 24);
    let table = grunsky_table(&p, 8).unwrap();
    // col_minus(k) = -chat_k, col_plus(k) = -dhat_k for the stored exponents
    let chat = [ZERO, c(0.10, 0.02), c(-0.05, 0.01), c(0.02, -0.015)];
    let dhat = [ZERO, c(0.08, -0.03), c(0.03, 0.02), c(-0.01, 0.005)];
    for k in 1..=8 {
        let cm = if k < chat.len() { chat[k] } else { ZERO };
        let cp = if k < dhat.len() { dhat[k] } else { ZERO };
        assert!((table.col_minus(k) + cm).norm() < 1e-12, "col_minus({k})");
        assert!((table.col_plus(k) + cp).norm() < 1e-12, "col_plus({k})");
    }
    assert!((table.b00() - c(1.25f64.ln(), 0.0)).norm() < 1e-15);
}

#[test]
fn table_symmetry_generic() {
    let p = generic_pair(1.25, 24);
    let table = grunsky_table(&p, 10).unwrap();
    for m in 1..=10 {
        for n in 1..=10 {
            assert!((table.bmm(m, n) - table.bmm(n, m)).norm() < 1e-12);
            assert!((table.bpp(m, n) - table.bpp(n, m)).norm() < 1e-12);
            assert!((table.bmp(m, n) - table.bpm(n, m)).norm() < 1e-15);
        }
    }
    assert!(table.cross_residual() < 1e-12);
}

#[test]
fn table_guards() {
    let p = generic_pair(1.1, 12);
    assert!(matches!(grunsky_table(&p, 0), Err(Error::DomainViolation)));
    assert!(matches!(
        grunsky_table(&p, 13),
        Err(Error::DomainViolation)
    ));
    assert!(matches!(
        grunsky_table_with_width(&p, 8, 4),
        Err(Error::DomainViolation)
    ));
    assert!(matches!(
        grunsky_table_direct(&p, 9),
        Err(Error::DomainViolation)
    ));
}

// ---------------------------------------------------------------------------
// Direct bivariate route vs composition route

#[test]
fn direct_matches_composed_on_joukowski() {
    let p = ellipse_g_pair(0.5, 40);
    let direct = grunsky_table_direct(&p, 8).unwrap();
    let composed = grunsky_table(&p, 8).unwrap();
    for m in 1..=8 {
        for n in 1..=8 {
            assert!((direct.bmm(m, n) - composed.bmm(m, n)).norm() < 1e-12);
            assert!((direct.bpp(m, n) - composed.bpp(m, n)).norm() < 1e-12);
            assert!((direct.bpm(m, n) - composed.bpm(m, n)).norm() < 1e-12);
        }
        assert!((direct.col_minus(m) - composed.col_minus(m)).norm() < 1e-12);
        assert!((direct.col_plus(m) - composed.col_plus(m)).norm() < 1e-12);
    }
}

#[test]
fn direct_matches_composed_on_generic_pair() {
    let p = generic_pair(1.25, 24);
    let direct = grunsky_table_direct(&p, 8).unwrap();
    let composed = grunsky_table(&p, 8).unwrap();
    for m in 1..=8 {
        for n in 1..=8 {
            assert!(
                (direct.bmm(m, n) - composed.bmm(m, n)).norm() < 1e-12,
                "bmm({m},{n})"
            );
            assert!(
                (direct.bpp(m, n) - composed.bpp(m, n)).norm() < 1e-12,
                "bpp({m},{n})"
            );
            assert!(
                (direct.bpm(m, n) - composed.bpm(m, n)).norm() < 1e-12,
                "bpm({m},{n})"
            );
        }
    }
}

#[test]
fn direct_quadratic_corner() {
    let a = 0.3;
    let p = quadratic_f_pair(a, 40);
    let direct = grunsky_table_direct(&p, 4).unwrap();
    assert!((direct.bmm(1, 1) - c(a * a, 0.0)).norm() < 1e-14);
    assert!(direct.cross_residual() == 0.0);
}

// ---------------------------------------------------------------------------
// Composition identity residual

#[test]
fn identity_residual_zero_for_identity_pair() {
    let p = identity_pair(12);
    let table = grunsky_table(&p, 8).unwrap();
    let samples: Vec<C64> = (0..8)
        .map(|k| {
            let th = core::f64::consts::TAU * k as f64 / 8.0;
            c(1.5 * th.cos(), 1.5 * th.sin())
        })
        .collect();
    let r = faber_identity_residual(&p, &table, &samples).unwrap();
    assert!(r < 1e-13, "residual {r}");
}

#[test]
fn identity_residual_joukowski_ring() {
    let p = ellipse_g_pair(0.3, 40);
    let table = grunsky_table(&p, 16).unwrap();
    let samples: Vec<C64> = (0..16)
        .map(|k| {
            let th = core::f64::consts::TAU * (k as f64 + 0.3) / 16.0;
            c(1.5 * th.cos(), 1.5 * th.sin())
        })
        .collect();
    let r = faber_identity_residual(&p, &table, &samples).unwrap();
    assert!(r <= 1e-10, "residual {r}");
}

#[test]
fn identity_residual_rejects_interior_samples() {
    let p = identity_pair(8);
    let table = grunsky_table(&p, 4).unwrap();
    let samples = [c(0.9, 0.0)];
    assert!(matches!(
        faber_identity_residual(&p, &table, &samples),
        Err(Error::DomainViolation)
    ));
}

// ---------------------------------------------------------------------------
// Dilation behaviour: scaling g by r > 0 shifts b00 and leaves the
// symmetric blocks and the identity residual untouched.

#[test]
fn dilation_moves_only_b00() {
    let order = 24;
    let chat = [ZERO, c(0.10, 0.02), c(-0.05, 0.01), c(0.02, -0.015)];
    let dhat = [ZERO, c(0.08, -0.03), c(0.03, 0.02), c(-0.01, 0.005)];
    let p1 = NormalizedPair::from_exponents(&chat, &dhat, 1.25, order, "p1".into()).unwrap();
    let r = 1.37;
    let p2 =
        NormalizedPair::from_exponents(&chat, &dhat, 1.25 * r, order, "p2".into()).unwrap();
    let t1 = grunsky_table(&p1, 8).unwrap();
    let t2 = grunsky_table(&p2, 8).unwrap();
    for m in 1..=8 {
        for n in 1..=t1.width() {
            assert!((t1.bmm(m, n) - t2.bmm(m, n)).norm() < 1e-12);
            assert!((t1.bpp(m, n) - t2.bpp(m, n)).norm() < 1e-12);
        }
        assert!((t1.col_minus(m) - t2.col_minus(m)).norm() < 1e-12);
        assert!((t1.col_plus(m) - t2.col_plus(m)).norm() < 1e-12);
    }
    assert!((t2.b00() - t1.b00() - c(r.ln(), 0.0)).norm() < 1e-13);

    let samples: Vec<C64> = (0..8)
        .map(|k| {
            let th = core::f64::consts::TAU * (k as f64 + 0.1) / 8.0;
            c(1.6 * th.cos(), 1.6 * th.sin())
        })
        .collect();
    let r1 = faber_identity_residual(&p1, &t1, &samples).unwrap();
    let r2 = faber_identity_residual(&p2, &t2, &samples).unwrap();
    assert!((r1 - r2).abs() <= 1e-12, "r1={r1} r2={r2}");
}

// ---------------------------------------------------------------------------
// Properties on random small pairs

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_table_blocks_symmetric(
        c1 in -0.12f64..0.12, c2 in -0.08f64..0.08,
        d1 in -0.12f64..0.12, d2 in -0.08f64..0.08,
        bv in 0.8f64..1.5,
    ) {
        let chat = [ZERO, c(c1, -c2 * 0.5), c(c2, c1 * 0.3)];
        let dhat = [ZERO, c(d1, d2 * 0.4), c(d2, -d1 * 0.2)];
        let p = NormalizedPair::from_exponents(&chat, &dhat, bv, 16, "prop".into()).unwrap();
        let t = grunsky_table(&p, 6).unwrap();
        for m in 1..=6 {
            for n in 1..=6 {
                prop_assert!((t.bmm(m, n) - t.bmm(n, m)).norm() < 1e-10);
                prop_assert!((t.bpp(m, n) - t.bpp(n, m)).norm() < 1e-10);
            }
        }
        prop_assert!(t.cross_residual() < 1e-10);
    }

    #[test]
    fn prop_direct_agrees_with_composed(
        c1 in -0.1f64..0.1, d1 in -0.1f64..0.1, bv in 0.9f64..1.4,
    ) {
        let chat = [ZERO, c(c1, 0.3 * d1), c(-0.4 * d1, 0.1)];
        let dhat = [ZERO, c(d1, -0.2 * c1), c(0.05, 0.3 * c1)];
        let p = NormalizedPair::from_exponents(&chat, &dhat, bv, 12, "prop2".into()).unwrap();
        let a = grunsky_table_direct(&p, 5).unwrap();
        let b = grunsky_table(&p, 5).unwrap();
        for m in 1..=5 {
            for n in 1..=5 {
                prop_assert!((a.bmm(m, n) - b.bmm(m, n)).norm() < 1e-11);
                prop_assert!((a.bpp(m, n) - b.bpp(m, n)).norm() < 1e-11);
                prop_assert!((a.bpm(m, n) - b.bpm(m, n)).norm() < 1e-11);
            }
        }
    }
}
