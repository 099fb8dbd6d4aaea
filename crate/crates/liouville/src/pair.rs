//! Normalized disjoint pairs (f, g) and the pointwise analytic objects
//! attached to them: pre-Schwarzian, Schwarzian, the quadratic map psi and
//! its linearization, the four Grunsky kernels, boundary-growth diagnostics,
//! and the model conversions (inverse welding, exterior model).
//!
//! Interior objects are Taylor series in z on the disk; exterior objects are
//! series in u = 1/z, stored lowest-power-first in u.

use crate::series::{a21_norm_sq_exterior, uexp, uinv, ulog, umul, ExteriorSeries, TaylorSeries};
use crate::{C64, Error, Result};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const PI: f64 = core::f64::consts::PI;

/// How close two kernel arguments may get before the removable singularity
/// of K1/K4 is evaluated through the Schwarzian limit instead of the rational
/// form (which loses ~6 digits of cancellation at this separation).
pub const KERNEL_DIAGONAL_SWITCH: f64 = 1e-3;

/// f''/f' of an interior map; the constant term of f' must be nonzero.
pub fn pre_schwarzian(f: &TaylorSeries) -> Result<TaylorSeries> {
    let fp = f.derivative();
    if fp.coeff(0) == ZERO {
        return Err(Error::VanishingDerivative);
    }
    fp.derivative().div(&fp.truncate(fp.order().saturating_sub(1)))
}

/// g''/g' of an exterior map, returned as a series in u = 1/z (the value at
/// z is the series evaluated at 1/z). Starts at u^3.
pub fn pre_schwarzian_exterior(g: &ExteriorSeries) -> Result<TaylorSeries> {
    if g.b() == ZERO {
        return Err(Error::VanishingDerivative);
    }
    let n = g.order();
    let k = n + 3;
    // g'(z) = b - sum k b_k z^{-k-1}; g''(z) = sum k(k+1) b_k z^{-k-2}
    let mut p = vec![ZERO; k];
    p[0] = g.b();
    let mut r = vec![ZERO; k];
    for j in 1..=n {
        let bj = g.tail_coeff(j);
        if j + 1 < k {
            p[j + 1] = -C64::new(j as f64, 0.0) * bj;
        }
        if j < k {
            r[j] = C64::new((j * (j + 1)) as f64, 0.0) * bj;
        }
    }
    let q = umul(&r, &uinv(&p, k), k);
    // multiply by u^2
    let mut out = vec![ZERO; k + 2];
    out[2..].copy_from_slice(&q);
    Ok(TaylorSeries::raw(out))
}

/// The quadratic differential map psi_z - psi^2/2 for interior densities.
pub fn psi_map(psi: &TaylorSeries) -> TaylorSeries {
    let n = psi.order().saturating_sub(1);
    psi.derivative()
        .truncate(n)
        .sub(&psi.mul(psi).scale(C64::new(0.5, 0.0)).truncate(n))
}

/// The same map for an exterior density given as a series in u = 1/z:
/// the z-derivative is -u^2 d/du, so the result is -u^2 psi_u - psi^2 / 2.
pub fn psi_map_exterior(psi_u: &TaylorSeries) -> TaylorSeries {
    let n = psi_u.order() + 1;
    let mut dz = vec![ZERO; n + 1];
    for j in 2..=n {
        dz[j] = -C64::new((j - 1) as f64, 0.0) * psi_u.coeff(j - 1);
    }
    let sq = psi_u.mul(psi_u);
    let mut out = dz;
    for j in 0..=n {
        if j <= sq.order() {
            out[j] -= sq.coeff(j) * 0.5;
        }
    }
    TaylorSeries::raw(out)
}

/// Schwarzian derivative of an interior map.
pub fn schwarzian(f: &TaylorSeries) -> Result<TaylorSeries> {
    Ok(psi_map(&pre_schwarzian(f)?))
}

/// Schwarzian derivative of an exterior map as a series in u = 1/z
/// (vanishes through u^3; decay z^{-4} at infinity).
pub fn schwarzian_exterior(g: &ExteriorSeries) -> Result<TaylorSeries> {
    Ok(psi_map_exterior(&pre_schwarzian_exterior(g)?))
}

/// The pair (psi_z - psi^2/2, psi(0)/2): the quadratic map together with the
/// linear functional that makes it injective on pre-Schwarzians.
pub fn psi_hat(psi: &TaylorSeries) -> (TaylorSeries, C64) {
    (psi_map(psi), psi.coeff(0) * 0.5)
}

/// Solves the linearization of psi_hat at psi for the data (phi, c):
/// returns v = f'(z) (int_0^z phi/f' + 2c) with f' = exp(int psi), so that
/// v_z - psi v = phi and v(0)/2 = c through the truncation order.
pub fn psi_hat_linearized_solve(psi: &TaylorSeries, phi: &TaylorSeries, c: C64) -> TaylorSeries {
    let n = psi.order().max(phi.order()) + 1;
    let fp = psi.truncate(n - 1).antiderivative().exp();
    let integrand = phi.truncate(n).div(&fp.truncate(n)).expect("exp is a unit");
    let mut inner = integrand.antiderivative().truncate(n);
    inner = inner.add(&TaylorSeries::raw(vec![c * 2.0]));
    fp.truncate(n).mul(&inner)
}

/// A normalized disjoint pair: interior map f (f(0)=0, f'(0)=1) and exterior
/// map g (g(inf)=inf, b = g'(inf) != 0) with disjoint ranges, plus the
/// exponent form f = z exp(sum chat_k z^k), g = b z exp(sum dhat_k z^-k)
/// kept alongside for the series pipelines.
#[derive(Clone, Debug)]
pub struct NormalizedPair {
    f: TaylorSeries,
    g: ExteriorSeries,
    label: String,
    chat: Vec<C64>,
    dhat: Vec<C64>,
    logb: C64,
}

impl NormalizedPair {
    /// Validates the normalization (f(0) = 0, f'(0) = 1) and derives the
    /// exponent form from the coefficient data.
    pub fn new(f: TaylorSeries, g: ExteriorSeries, label: String) -> Result<NormalizedPair> {
        if f.order() < 1 || f.coeff(0) != ZERO || (f.coeff(1) - ONE).norm() > 1e-12 {
            return Err(Error::DomainViolation);
        }
        let kf = f.order();
        // chat = log(f/z), index = power (ulog pins the unit constant term)
        let ratio: Vec<C64> = (1..=kf).map(|j| f.coeff(j)).collect();
        let mut chat = ulog(&ratio, kf);
        // g(z)/(bz) = 1 + (b0/b) z^-1 + sum (b_k/b) z^-k-1 = exp(sum dhat_k z^-k)
        let kg = g.order() + 2;
        let mut s = vec![ZERO; kg];
        s[0] = ONE;
        s[1] = g.b0() / g.b();
        for j in 1..=g.order() {
            if j + 1 < kg {
                s[j + 1] = g.tail_coeff(j) / g.b();
            }
        }
        let mut dhat = ulog(&s, kg);
        let width = chat.len().max(dhat.len());
        chat.resize(width, ZERO);
        dhat.resize(width, ZERO);
        let logb = g.b().ln();
        Ok(NormalizedPair {
            f,
            g,
            label,
            chat,
            dhat,
            logb,
        })
    }

    /// Builds the pair from exponent data: chat/dhat indexed by power
    /// (entry 0 ignored), b = g'(inf) > 0, series order for the stored maps.
    pub fn from_exponents(
        chat: &[C64],
        dhat: &[C64],
        b: f64,
        order: usize,
        label: String,
    ) -> Result<NormalizedPair> {
        if b <= 0.0 || !b.is_finite() {
            return Err(Error::DomainViolation);
        }
        let mut ch = vec![ZERO; order + 1];
        for (k, &v) in chat.iter().enumerate().take(order + 1).skip(1) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::DomainViolation);
            }
            ch[k] = v;
        }
        let mut dh = vec![ZERO; order + 1];
        for (k, &v) in dhat.iter().enumerate().take(order + 1).skip(1) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::DomainViolation);
            }
            dh[k] = v;
        }
        // f = z exp(sum chat z^k)
        let ef = uexp(&ch, order + 1);
        let mut fc = vec![ZERO; order + 1];
        fc[1..].copy_from_slice(&ef[..order]);
        // g = b z exp(sum dhat z^-k): tail from the u-expansion
        let eg = uexp(&dh, order + 1);
        let bb = C64::new(b, 0.0);
        let b0 = bb * eg[1];
        let tail: Vec<C64> = (2..=order).map(|j| bb * eg[j]).collect();
        Ok(NormalizedPair {
            f: TaylorSeries::raw(fc),
            g: ExteriorSeries::new(bb, b0, tail)?,
            label,
            chat: ch,
            dhat: dh,
            logb: C64::new(b.ln(), 0.0),
        })
    }

    pub fn f(&self) -> &TaylorSeries {
        &self.f
    }

    pub fn g(&self) -> &ExteriorSeries {
        &self.g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn b(&self) -> C64 {
        self.g.b()
    }

    pub fn logb(&self) -> C64 {
        self.logb
    }

    /// Stored exponent order (chat/dhat run over powers 1..=order).
    pub fn order(&self) -> usize {
        self.chat.len() - 1
    }

    pub(crate) fn chat(&self) -> &[C64] {
        &self.chat
    }

    pub(crate) fn dhat(&self) -> &[C64] {
        &self.dhat
    }

    /// Coefficients of f through power k (index = power), f = z + ...
    pub(crate) fn f_coeffs(&self, k: usize) -> Vec<C64> {
        let e = uexp(&self.chat[..self.chat.len().min(k + 1)], k);
        let mut f = vec![ZERO; k + 1];
        f[1..].copy_from_slice(&e[..k]);
        f
    }

    /// Coefficients of ghat(w) = 1/g(1/w) = (w/b) exp(-sum dhat w^k) through
    /// power k; leading coefficient 1/b.
    pub(crate) fn ghat_coeffs(&self, k: usize) -> Vec<C64> {
        let neg: Vec<C64> = self.dhat[..self.dhat.len().min(k + 1)]
            .iter()
            .map(|v| -v)
            .collect();
        let e = uexp(&neg, k);
        let binv = ONE / self.g.b();
        let mut gh = vec![ZERO; k + 1];
        for j in 1..=k {
            gh[j] = e[j - 1] * binv;
        }
        gh
    }

    /// Coefficients c_n of log f' = sum_{n>=1} c_n z^n (entry 0 is zero).
    pub fn log_deriv_interior(&self, k: usize) -> Vec<C64> {
        let mut t = vec![ZERO; k + 1];
        t[0] = ONE;
        for n in 1..=k.min(self.order()) {
            t[n] += C64::new(n as f64, 0.0) * self.chat[n];
        }
        let l = ulog(&t, k + 1);
        (0..=k)
            .map(|n| if n <= self.order() { self.chat[n] } else { ZERO } + l[n])
            .collect()
    }

    /// Coefficients d_n of log g' = log b + sum_{n>=1} d_n z^-n (entry 0 zero;
    /// the constant log b is reported by `logb`).
    pub fn log_deriv_exterior(&self, k: usize) -> Vec<C64> {
        let mut t = vec![ZERO; k + 1];
        t[0] = ONE;
        for n in 1..=k.min(self.order()) {
            t[n] -= C64::new(n as f64, 0.0) * self.dhat[n];
        }
        let l = ulog(&t, k + 1);
        (0..=k)
            .map(|n| if n <= self.order() { self.dhat[n] } else { ZERO } + l[n])
            .collect()
    }

    /// Coefficients of log gtilde' for the model map gtilde = 1/g(1/z) on the
    /// disk; entry 0 carries -log b.
    pub fn log_deriv_model_interior(&self, k: usize) -> Vec<C64> {
        let mut t = vec![ZERO; k + 1];
        t[0] = ONE;
        for n in 1..=k.min(self.order()) {
            t[n] -= C64::new(n as f64, 0.0) * self.dhat[n];
        }
        let l = ulog(&t, k + 1);
        let mut out: Vec<C64> = (0..=k)
            .map(|n| -(if n <= self.order() { self.dhat[n] } else { ZERO }) + l[n])
            .collect();
        out[0] = -self.logb;
        out
    }

    /// Tail coefficients of log ftilde' for the model map ftilde = 1/f(1/z)
    /// on the exterior (entry 0 is zero: ftilde'(inf) = 1).
    pub fn log_deriv_model_exterior(&self, k: usize) -> Vec<C64> {
        let mut t = vec![ZERO; k + 1];
        t[0] = ONE;
        for n in 1..=k.min(self.order()) {
            t[n] += C64::new(n as f64, 0.0) * self.chat[n];
        }
        let l = ulog(&t, k + 1);
        (0..=k)
            .map(|n| -(if n <= self.order() { self.chat[n] } else { ZERO }) + l[n])
            .collect()
    }

    /// The pair of the inverse welding: reflect both maps through the unit
    /// circle, swap roles, and renormalize with the dilation b. In exponent
    /// form: chat' = -conj(dhat), dhat' = -conj(chat), same b.
    pub fn invert_model(&self) -> NormalizedPair {
        let chat: Vec<C64> = self.dhat.iter().map(|v| -v.conj()).collect();
        let dhat: Vec<C64> = self.chat.iter().map(|v| -v.conj()).collect();
        let mut label = self.label.clone();
        label.push_str("-inverse");
        NormalizedPair::from_exponents(&chat, &dhat, self.g.b().re, self.order(), label)
            .expect("inverse of a valid pair is valid")
    }

    /// The exterior model: ftilde = 1/f(1/z) (expansion at infinity, leading
    /// coefficient exactly 1) and gtilde = 1/g(1/z) (disk map, gtilde'(0) = 1/b).
    pub fn to_d_model(&self) -> DModelPair {
        let k = self.order();
        let negc: Vec<C64> = self.chat.iter().map(|v| -v).collect();
        let ef = uexp(&negc, k + 1);
        let f_star = ExteriorSeries::new(ONE, ef[1], ef[2..=k].to_vec())
            .expect("finite by construction");
        let negd: Vec<C64> = self.dhat.iter().map(|v| -v).collect();
        let eg = uexp(&negd, k + 1);
        let binv = ONE / self.g.b();
        let mut gs = vec![ZERO; k + 1];
        for j in 1..=k {
            gs[j] = eg[j - 1] * binv;
        }
        DModelPair {
            f_star,
            g_star: TaylorSeries::raw(gs),
        }
    }

    /// Pointwise value of the Grunsky kernel l in {1,2,3,4}. Interior
    /// arguments must satisfy |z| <= 1, exterior |z| >= 1 (kernel domains);
    /// K1/K4 switch to the Schwarzian diagonal limit near z = w.
    pub fn kernel_eval(&self, l: u8, z: C64, w: C64) -> Result<C64> {
        kernel_eval(l, &self.f, &self.g, z, w)
    }

    /// Boundary growth diagnostics: per-radius angular suprema of
    /// (1-|z|^2)^2 |S(f)| and (1-|z|^2) |A(f)|, with the four truncated
    /// membership norms (interior/exterior Schwarzian and pre-Schwarzian).
    pub fn boundary_profiles(&self, radii: &[f64]) -> Result<BoundaryProfiles> {
        if radii.iter().any(|&r| !(0.0 < r && r < 1.0)) {
            return Err(Error::DomainViolation);
        }
        let sf = schwarzian(&self.f)?;
        let af = pre_schwarzian(&self.f)?;
        let sg = schwarzian_exterior(&self.g)?;
        let ag = pre_schwarzian_exterior(&self.g)?;
        let m = 256;
        let mut schwarzian_sup = Vec::with_capacity(radii.len());
        let mut pre_schwarzian_sup = Vec::with_capacity(radii.len());
        for &r in radii {
            let wfac = 1.0 - r * r;
            let mut ss: f64 = 0.0;
            let mut aa: f64 = 0.0;
            for j in 0..m {
                let z = C64::from_polar(r, 2.0 * PI * j as f64 / m as f64);
                ss = ss.max(sf.eval(z).norm());
                aa = aa.max(af.eval(z).norm());
            }
            schwarzian_sup.push(wfac * wfac * ss);
            pre_schwarzian_sup.push(wfac * aa);
        }
        // exterior norms: u-series of S(g) starts at u^4, of A(g) at u^3;
        // the mode weights mirror the interior ones after those shifts
        let sg_shift = TaylorSeries::raw(if sg.order() >= 4 {
            sg.coeffs()[4..].to_vec()
        } else {
            vec![ZERO]
        });
        let ag_tail = if ag.order() >= 2 {
            ag.coeffs()[2..].to_vec()
        } else {
            vec![ZERO]
        };
        Ok(BoundaryProfiles {
            radii: radii.to_vec(),
            schwarzian_sup,
            pre_schwarzian_sup,
            norm_schwarzian_interior: sf.a2_hyperbolic_norm_sq(),
            norm_pre_schwarzian_interior: af.a21_norm_sq(),
            norm_schwarzian_exterior: sg_shift.a2_hyperbolic_norm_sq(),
            norm_pre_schwarzian_exterior: a21_norm_sq_exterior(&ag_tail),
        })
    }
}

/// The exterior model of a pair: both maps conjugated by the inversion 1/z.
#[derive(Clone, Debug)]
pub struct DModelPair {
    /// 1/f(1/z): expansion at infinity with leading coefficient 1.
    pub f_star: ExteriorSeries,
    /// 1/g(1/z): disk map vanishing at 0 with derivative 1/b.
    pub g_star: TaylorSeries,
}

/// Boundary growth table; radii pair with the two suprema columns.
#[derive(Clone, Debug)]
pub struct BoundaryProfiles {
    pub radii: Vec<f64>,
    pub schwarzian_sup: Vec<f64>,
    pub pre_schwarzian_sup: Vec<f64>,
    pub norm_schwarzian_interior: f64,
    pub norm_pre_schwarzian_interior: f64,
    pub norm_schwarzian_exterior: f64,
    pub norm_pre_schwarzian_exterior: f64,
}

fn ext_eval_deriv(g: &ExteriorSeries, z: C64) -> C64 {
    let u = ONE / z;
    let mut acc = ZERO;
    // g'(z) = b - sum k b_k z^{-k-1}
    for k in (1..=g.order()).rev() {
        acc = (acc - C64::new(k as f64, 0.0) * g.tail_coeff(k)) * u;
    }
    g.b() + acc * u
}

fn check_interior(z: C64) -> Result<()> {
    if z.norm() <= 1.0 + 1e-12 {
        Ok(())
    } else {
        Err(Error::DomainViolation)
    }
}

fn check_exterior(z: C64) -> Result<()> {
    if z.norm() >= 1.0 - 1e-12 {
        Ok(())
    } else {
        Err(Error::DomainViolation)
    }
}

/// Pointwise Grunsky kernel of the maps (f, g); see the methods on
/// `NormalizedPair` for the domain conventions. Exposed at the map level so
/// invariance checks can feed unnormalized inputs.
pub fn kernel_eval(l: u8, f: &TaylorSeries, g: &ExteriorSeries, z: C64, w: C64) -> Result<C64> {
    let inv_pi = 1.0 / PI;
    match l {
        1 => {
            check_interior(z)?;
            check_interior(w)?;
            if (z - w).norm() < KERNEL_DIAGONAL_SWITCH {
                let mid = (z + w) * 0.5;
                return Ok(-schwarzian(f)?.eval(mid) / (6.0 * PI));
            }
            let fp = f.derivative();
            let df = f.eval(z) - f.eval(w);
            let dz = z - w;
            Ok((ONE / (dz * dz) - fp.eval(z) * fp.eval(w) / (df * df)) * inv_pi)
        }
        2 => {
            check_interior(z)?;
            check_exterior(w)?;
            let d = f.eval(z) - g.eval(w);
            Ok(f.derivative().eval(z) * ext_eval_deriv(g, w) / (d * d) * inv_pi)
        }
        3 => {
            check_exterior(z)?;
            check_interior(w)?;
            let d = g.eval(z) - f.eval(w);
            Ok(ext_eval_deriv(g, z) * f.derivative().eval(w) / (d * d) * inv_pi)
        }
        4 => {
            check_exterior(z)?;
            check_exterior(w)?;
            if (ONE / z - ONE / w).norm() < KERNEL_DIAGONAL_SWITCH {
                let mid = (z + w) * 0.5;
                let su = schwarzian_exterior(g)?;
                return Ok(-su.eval(ONE / mid) / (6.0 * PI));
            }
            let dg = g.eval(z) - g.eval(w);
            let dz = z - w;
            Ok((ONE / (dz * dz) - ext_eval_deriv(g, z) * ext_eval_deriv(g, w) / (dg * dg)) * inv_pi)
        }
        _ => Err(Error::DomainViolation),
    }
}
