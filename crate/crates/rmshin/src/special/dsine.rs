//! The double sine function `S_2(z; w1, w2) = Gamma_2(w1 + w2 - z) / Gamma_2(z)`.
//!
//! Evaluation rotates and scales the periods so that both are in the right
//! half-plane with the larger real part equal to one, moves `z` towards the
//! middle of the strip `0 < Re z < Re(w1 + w2)` with the quasiperiodicity laws,
//! and then evaluates the subtracted sinh integral
//!
//! `log S_2(z) = -int_0^inf ( sinh(a t) / (2 sinh(w1 t/2) sinh(w2 t/2)) - 2a/(w1 w2 t) ) dt/t`
//!
//! with `a = (w1 + w2)/2 - z`. The piece over `[0, t0]` is integrated term by
//! term from the power series of the integrand; the rest uses exp-sinh quadrature.

use rug::Float;

use super::complex::{pi, Cx};
use super::quad::exp_sinh;
use crate::error::{Error, Result};

/// Largest number of quasiperiodic shifts accepted before giving up.
const MAX_SHIFTS: u64 = 2_000_000;

/// `S_2(z; w1, w2)` at `prec` bits.
pub fn dsine(z: &Cx, w1: &Cx, w2: &Cx, prec: u32) -> Result<Cx> {
    let ratio_bits = {
        let a = w1.abs().to_f64();
        let b = w2.abs().to_f64();
        (a.max(b) / a.min(b)).log2().max(0.0).ceil() as u32
    };
    let wp = prec + 24 + ratio_bits;
    let z = z.with_prec(wp);
    let mut w1 = w1.with_prec(wp);
    let mut w2 = w2.with_prec(wp);
    if w1.is_zero() || w2.is_zero() {
        return Err(Error::Domain("double sine periods must be nonzero".into()));
    }
    let mut z = z;

    // Rotate so that arg w1 = -arg w2.
    let both_real = w1.im.is_zero() && w2.im.is_zero() && w1.re > 0 && w2.re > 0;
    if !both_real {
        let theta = w1.div(&w2).arg();
        if theta.clone().abs() >= pi(wp) {
            return Err(Error::Domain("w1/w2 is a negative real".into()));
        }
        let phi = Float::with_val(wp, w2.arg() + Float::with_val(wp, &theta / 2u32));
        let rot = Cx::new(Float::new(wp), -phi).exp();
        z = z.mul(&rot);
        w1 = w1.mul(&rot);
        w2 = w2.mul(&rot);
    }
    if w1.re <= 0 || w2.re <= 0 {
        return Err(Error::Domain(
            "double sine periods must lie in a common half-plane".into(),
        ));
    }

    // Scale so that the larger real part is one.
    let lam = if w1.re > w2.re {
        w1.re.clone()
    } else {
        w2.re.clone()
    };
    z = z.div_real(&lam);
    w1 = w1.div_real(&lam);
    w2 = w2.div_real(&lam);

    let (big, small) = if w1.re >= w2.re {
        (w1.clone(), w2.clone())
    } else {
        (w2.clone(), w1.clone())
    };
    let omega = w1.add(&w2);
    let centre = Float::with_val(wp, &omega.re / 2u32);
    let mut factor = Cx::one(wp);

    // Coarse shift by the period with the larger real part.
    let n_big = {
        let x = Float::with_val(wp, &z.re - &centre) / &big.re;
        x.round().to_f64() as i64
    };
    shift(&mut z, &mut factor, &big, &small, n_big)?;

    // Fine shift by the other period until the margin to the strip edges is at least 1/4.
    let quarter = Float::with_val(wp, 0.25).min(&Float::with_val(wp, &omega.re / 4u32));
    let upper = Float::with_val(wp, &omega.re - &quarter);
    if z.re < quarter {
        let k = (Float::with_val(wp, &quarter - &z.re) / &small.re)
            .ceil()
            .to_f64();
        shift(&mut z, &mut factor, &small, &big, -(k as i64))?;
    } else if z.re > upper {
        let k = (Float::with_val(wp, &z.re - &upper) / &small.re)
            .ceil()
            .to_f64();
        shift(&mut z, &mut factor, &small, &big, k as i64)?;
    }

    let integral = sinh_integral(&z, &w1, &w2, wp)?;
    Ok(integral.neg().exp().mul(&factor).with_prec(prec))
}

/// Replaces `z` by `z - n w` and updates `factor` so that
/// `S_2(z_old) = S_2(z_new) * factor`, using `S_2(x + w) = S_2(x) / (2 sin(pi x / w_other))`.
fn shift(z: &mut Cx, factor: &mut Cx, w: &Cx, w_other: &Cx, n: i64) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    if n.unsigned_abs() > MAX_SHIFTS {
        return Err(Error::Numeric("too many quasiperiodic shifts".into()));
    }
    let wp = z.prec();
    let pi = pi(wp);
    let new_z = z.sub(&w.mul_int(&n.into()));
    let two_sin = |x: &Cx| -> Result<Cx> {
        let v = x.div(w_other).mul_real(&pi).sin().scale_f64(2.0);
        if v.is_zero() {
            return Err(Error::Pole("pole/zero of S2".into()));
        }
        Ok(v)
    };
    let mut prod = Cx::one(wp);
    if n > 0 {
        // S_2(new + n w) = S_2(new) prod_{j<n} 1/(2 sin(pi (new + j w)/w_other))
        let mut x = new_z.clone();
        for _ in 0..n {
            prod = prod.mul(&two_sin(&x)?);
            x = x.add(w);
        }
        *factor = factor.div(&prod);
    } else {
        // S_2(new - m w) = S_2(new) prod_{j=1..m} 2 sin(pi (new - j w)/w_other)
        let mut x = new_z.sub(w);
        for _ in 0..(-n) {
            prod = prod.mul(&two_sin(&x)?);
            x = x.sub(w);
        }
        *factor = factor.mul(&prod);
    }
    *z = new_z;
    Ok(())
}

/// Taylor coefficients of `sinh(c t)/(c t)` in `x = t^2`, up to `x^(n-1)`.
fn sinhc_series(c: &Cx, n: usize) -> Vec<Cx> {
    let wp = c.prec();
    let c2 = c.sqr();
    let mut out = Vec::with_capacity(n);
    let mut cur = Cx::one(wp);
    for j in 0..n {
        out.push(cur.clone());
        let den = Float::with_val(wp, ((2 * j + 2) * (2 * j + 3)) as f64);
        cur = cur.mul(&c2).div_real(&den);
    }
    out
}

fn series_mul(a: &[Cx], b: &[Cx]) -> Vec<Cx> {
    let n = a.len().min(b.len());
    let wp = a[0].prec();
    (0..n)
        .map(|k| (0..=k).fold(Cx::zero(wp), |acc, i| acc.add(&a[i].mul(&b[k - i]))))
        .collect()
}

fn series_div(a: &[Cx], b: &[Cx]) -> Vec<Cx> {
    let n = a.len().min(b.len());
    let mut q: Vec<Cx> = Vec::with_capacity(n);
    let b0 = b[0].clone();
    for k in 0..n {
        let mut v = a[k].clone();
        for i in 0..k {
            v = v.sub(&q[i].mul(&b[k - i]));
        }
        q.push(v.div(&b0));
    }
    q
}

/// `int_0^inf f(t) dt` for the subtracted integrand, with `w1, w2` in the right half-plane.
fn sinh_integral(z: &Cx, w1: &Cx, w2: &Cx, wp: u32) -> Result<Cx> {
    let ip = wp + 16;
    let z = z.with_prec(ip);
    let w1 = w1.with_prec(ip);
    let w2 = w2.with_prec(ip);
    let a = w1.add(&w2).div_real(&Float::with_val(ip, 2)).sub(&z);
    if a.is_zero() {
        return Ok(Cx::zero(wp));
    }
    let c = a.scale_f64(2.0).div(&w1.mul(&w2));
    let wmax = {
        let x = w1.abs();
        let y = w2.abs();
        if x > y {
            x
        } else {
            y
        }
    };
    let t0 = Float::with_val(ip, 0.25) / &wmax;

    // Series part: f = c (R(x) - 1)/x with R = S_a/(S_1 S_2) and x = t^2.
    let nterms = (ip as usize) / 9 + 4;
    let half = Float::with_val(ip, 0.5);
    let sa = sinhc_series(&a, nterms + 1);
    let s1 = sinhc_series(&w1.mul_real(&half), nterms + 1);
    let s2 = sinhc_series(&w2.mul_real(&half), nterms + 1);
    let r = series_div(&sa, &series_mul(&s1, &s2));
    let mut head = Cx::zero(ip);
    let x0 = Float::with_val(ip, t0.clone().square());
    let mut tp = t0.clone();
    for (k, rk) in r.iter().enumerate().skip(1) {
        let term = rk
            .mul_real(&tp)
            .div_real(&Float::with_val(ip, (2 * k - 1) as f64));
        head = head.add(&term);
        tp *= &x0;
    }
    head = head.mul(&c);

    // sinh(a t)/(2 sinh(w1 t/2) sinh(w2 t/2)) is rewritten with decaying exponentials
    // (e^{(a-h)t} - e^{-(a+h)t}) / ((1 - e^{-w1 t})(1 - e^{-w2 t})), h = (w1 + w2)/2,
    // so that nothing overflows for large t.
    let hsum = w1.add(&w2).mul_real(&half);
    let real = z.im.is_zero() && w1.im.is_zero() && w2.im.is_zero();
    let tail = if real {
        let (ar, w1r, w2r, cr, hr) = (
            a.re.clone(),
            w1.re.clone(),
            w2.re.clone(),
            c.re.clone(),
            hsum.re.clone(),
        );
        exp_sinh(&t0, ip, |t| {
            let e1 = Float::with_val(ip, Float::with_val(ip, &ar - &hr) * t).exp();
            let e2 = Float::with_val(ip, -Float::with_val(ip, &ar + &hr) * t).exp();
            let d1 = -Float::with_val(ip, -Float::with_val(ip, &w1r * t)).exp_m1();
            let d2 = -Float::with_val(ip, -Float::with_val(ip, &w2r * t)).exp_m1();
            let v = (Float::with_val(ip, &e1 - &e2) / (d1 * d2) - Float::with_val(ip, &cr / t)) / t;
            Cx::from_real(&v)
        })?
    } else {
        let one = Cx::one(ip);
        let am = a.sub(&hsum);
        let ap = a.add(&hsum).neg();
        exp_sinh(&t0, ip, |t| {
            let num = am.mul_real(t).exp().sub(&ap.mul_real(t).exp());
            let d1 = one.sub(&w1.mul_real(t).neg().exp());
            let d2 = one.sub(&w2.mul_real(t).neg().exp());
            num.div(&d1.mul(&d2)).sub(&c.div_real(t)).div_real(t)
        })?
    };
    Ok(head.add(&tail).with_prec(wp))
}
