//! Precision-parameterized special functions: `e(z)`, q-Pochhammer symbols,
//! the Dedekind eta function, theta functions with characteristics, the double
//! sine function and the cyclic quantum dilogarithm.
//!
//! Every public function takes a target precision in bits, works internally
//! with a few guard bits and rounds its result to the target.

pub mod complex;
pub mod dsine;
pub mod quad;

pub use complex::{fmt_float, pi, pow2, print_digits, Cx};
pub use dsine::dsine;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::modgroup::CharVec;

const GUARD: u32 = 16;

/// `e(z) = exp(2 pi i z)`.
pub fn e_exp(z: &Cx, prec: u32) -> Cx {
    z.with_prec(prec + GUARD).e().with_prec(prec)
}

/// Whether a factor `1 - x` is zero up to rounding at `wp` bits.
fn vanishes(f: &Cx, wp: u32) -> bool {
    f.abs() < pow2(64, 8 - wp as i32)
}

/// Finite q-Pochhammer symbol `(w; q)_n` for any integer `n`.
pub fn qpoch_finite(w: &Cx, q: &Cx, n: i64, prec: u32) -> Result<Cx> {
    let wp = prec + GUARD;
    let w = w.with_prec(wp);
    let q = q.with_prec(wp);
    let one = Cx::one(wp);
    let mut acc = Cx::one(wp);
    if n >= 0 {
        let mut x = w;
        for _ in 0..n {
            acc = acc.mul(&one.sub(&x));
            x = x.mul(&q);
        }
    } else {
        let qi = q.recip();
        let mut x = w.mul(&qi);
        for _ in 0..(-n) {
            let f = one.sub(&x);
            if vanishes(&f, wp) {
                return Err(Error::Pole("vanishing factor in (w;q)_n".into()));
            }
            acc = acc.div(&f);
            x = x.mul(&qi);
        }
    }
    Ok(acc.with_prec(prec))
}

/// Number of factors needed so that `|w| |q|^K / (1 - |q|) < 2^(-prec-8)`.
fn qpoch_terms(w_abs: f64, q_abs: f64, prec: u32) -> Result<u64> {
    if q_abs >= 1.0 {
        return Err(Error::Domain("|q| must be below 1".into()));
    }
    if w_abs == 0.0 {
        return Ok(0);
    }
    let lq = q_abs.ln();
    if lq == 0.0 || !lq.is_finite() {
        return Err(Error::Domain("|q| too close to 1".into()));
    }
    let need = w_abs.ln() + (prec as f64 + 8.0) * std::f64::consts::LN_2 - (-lq.exp_m1()).ln();
    let k = (need / -lq).ceil().max(1.0) + 1.0;
    if k > 5e8 {
        return Err(Error::Numeric(
            "q-Pochhammer product too long; |q| is too close to 1".into(),
        ));
    }
    Ok(k as u64)
}

/// Infinite q-Pochhammer symbol `(w; q)_inf` for `|q| < 1`.
pub fn qpoch_inf(w: &Cx, q: &Cx, prec: u32) -> Result<Cx> {
    let wp = prec + GUARD + 8;
    let k = qpoch_terms(w.abs().to_f64(), q.abs().to_f64(), wp)?;
    let w = w.with_prec(wp);
    let q = q.with_prec(wp);
    let one = Cx::one(wp);
    let mut acc = Cx::one(wp);
    let mut x = w;
    for _ in 0..k {
        acc = acc.mul(&one.sub(&x));
        x = x.mul(&q);
    }
    Ok(acc.with_prec(prec))
}

/// `varpi(z, tau) = (e(z); e(tau))_inf`.
pub fn varpi(z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    if tau.im <= 0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let wp = prec + GUARD;
    qpoch_inf(&e_exp(z, wp), &e_exp(tau, wp), prec)
}

/// `varpi_r(tau) = varpi(r2 tau - r1, tau)`.
pub fn varpi_r(r: &CharVec, tau: &Cx, prec: u32) -> Result<Cx> {
    let t = tau.with_prec(prec + GUARD);
    varpi(&r.linear_form_cx(&t), &t, prec)
}

/// `varpi_r(z, tau) = varpi(z + r2 tau - r1, tau)`.
pub fn varpi_rz(r: &CharVec, z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    let t = tau.with_prec(prec + GUARD);
    varpi(
        &z.with_prec(prec + GUARD).add(&r.linear_form_cx(&t)),
        &t,
        prec,
    )
}

/// Dedekind eta `e(tau/24) prod (1 - e(k tau))`, summed with Euler's pentagonal series.
pub fn eta(tau: &Cx, prec: u32) -> Result<Cx> {
    if tau.im <= 0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    let q = tau.e();
    let lq = -(2.0 * std::f64::consts::PI * tau.im.to_f64());
    let stop = -((wp + 8) as f64) * std::f64::consts::LN_2;
    let mut sum = Cx::one(wp);
    let mut n: i64 = 1;
    loop {
        let e_plus = n * (3 * n - 1) / 2;
        if (e_plus as f64) * lq < stop {
            break;
        }
        let e_minus = n * (3 * n + 1) / 2;
        let term = q.powi(e_plus).add(&q.powi(e_minus));
        sum = if n % 2 == 0 {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        n += 1;
    }
    let pre = tau.div_real(&Float::with_val(wp, 24)).e();
    Ok(sum.mul(&pre).with_prec(prec))
}

/// Dedekind eta through its product formula, used as an independent check.
pub fn eta_product(tau: &Cx, prec: u32) -> Result<Cx> {
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    let q = tau.e();
    let pre = tau.div_real(&Float::with_val(wp, 24)).e();
    Ok(qpoch_inf(&q, &q, wp)?.mul(&pre).with_prec(prec))
}

/// Theta function with characteristics
/// `sum_n e((n + r2 + 1/2)^2 tau / 2 + (n + r2 + 1/2)(z - r1 + 1/2))`.
pub fn theta_rz(r: &CharVec, z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    if tau.im <= 0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let wp = prec + GUARD + 8;
    let tau = tau.with_prec(wp);
    let z = z.with_prec(wp);
    let half = Rational::from((1, 2));
    let shift = Rational::from(&r.r2 + &half);
    let lin = z
        .sub(&Cx::from_rational(&r.r1, wp))
        .add(&Cx::from_rational(&half, wp));
    let y = tau.im.to_f64();
    let centre = (-z.im.to_f64() / y - shift.to_f64()).round() as i64;
    let log_mag = |m: f64| -> f64 {
        -std::f64::consts::PI * m * m * y - 2.0 * std::f64::consts::PI * m * z.im.to_f64()
    };
    let term = |n: i64| -> Cx {
        let m = Rational::from(&shift + Integer::from(n));
        let mc = Cx::from_rational(&m, wp);
        let arg = mc
            .sqr()
            .mul(&tau)
            .div_real(&Float::with_val(wp, 2))
            .add(&mc.mul(&lin));
        arg.e()
    };
    let peak = log_mag(centre as f64 + shift.to_f64());
    let stop = peak - ((wp + 10) as f64) * std::f64::consts::LN_2;
    let mut sum = term(centre);
    for dir in [1i64, -1] {
        let mut n = centre + dir;
        loop {
            let m = n as f64 + shift.to_f64();
            if log_mag(m) < stop && (m * y + z.im.to_f64()) * dir as f64 > 0.0 {
                break;
            }
            sum = sum.add(&term(n));
            n += dir;
        }
    }
    Ok(sum.with_prec(prec))
}

/// `theta_r(tau) = theta_r(0, tau)`.
pub fn theta_r(r: &CharVec, tau: &Cx, prec: u32) -> Result<Cx> {
    theta_rz(r, &Cx::zero(prec), tau, prec)
}

/// Jacobi `theta_1(z, tau) = -theta_(0,0)(z, tau)`.
pub fn theta1(z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    Ok(theta_rz(&CharVec::zero(), z, tau, prec)?.neg())
}

/// Cyclic quantum dilogarithm `D_zeta(w) = prod_{k=1}^{n-1} (1 - zeta^k w)^k` with `zeta = e(m/n)`.
pub fn cyclic_qdl(n: u64, m: i64, w: &Cx, prec: u32) -> Result<Cx> {
    cyclic_qdl_root(n, m, w, &Rational::from(1), prec)
}

/// `prod_{k=1}^{n-1} ((1 - zeta^k w)^x)^k`, each power taken on the principal branch factor by factor.
pub fn cyclic_qdl_root(n: u64, m: i64, w: &Cx, x: &Rational, prec: u32) -> Result<Cx> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if Integer::from(m).gcd(&Integer::from(n)) != 1 {
        return Err(Error::Domain("gcd(m, n) must be 1".into()));
    }
    let wp = prec + GUARD;
    let w = w.with_prec(wp);
    let xc = Cx::from_rational(x, wp);
    let mut acc = Cx::one(wp);
    for k in 1..n {
        let zeta_k = Cx::e_rat(&Rational::from((m * k as i64, n)), wp);
        let f = Cx::one(wp).sub(&zeta_k.mul(&w));
        if vanishes(&f, wp) {
            return Err(Error::Pole(
                "vanishing factor in cyclic quantum dilogarithm".into(),
            ));
        }
        let root = if *x == 1 { f } else { f.pow(&xc) };
        acc = acc.mul(&root.powi(k as i64));
    }
    Ok(acc.with_prec(prec))
}

/// Dilogarithm `Li_2(x) = sum_{k>=1} x^k / k^2` for `|x| < 1`.
pub fn dilog(x: &Cx, prec: u32) -> Result<Cx> {
    let ax = x.abs().to_f64();
    if ax >= 1.0 {
        return Err(Error::Domain("dilogarithm series needs |x| < 1".into()));
    }
    let wp = prec + GUARD;
    let x = x.with_prec(wp);
    let mut sum = Cx::zero(wp);
    if ax == 0.0 {
        return Ok(sum.with_prec(prec));
    }
    let k_max = (((wp + 8) as f64) * std::f64::consts::LN_2 / -ax.ln()).ceil() as u64 + 2;
    if k_max > 50_000_000 {
        return Err(Error::Numeric(
            "dilogarithm series too long; |x| is too close to 1".into(),
        ));
    }
    let mut p = x.clone();
    for k in 1..=k_max {
        let k2 = Float::with_val(wp, k) * k;
        sum = sum.add(&p.div_real(&k2));
        p = p.mul(&x);
    }
    Ok(sum.with_prec(prec))
}
