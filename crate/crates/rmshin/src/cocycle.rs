//! The Shintani-Faddeev Jacobi cocycle `sigma_{m,A}(z, tau)` and modular cocycle
//! `shin^r_A(tau)`, their continuation to real `tau`, and their values at real
//! multiplication points.
//!
//! On the upper half-plane both cocycles are ratios of q-Pochhammer symbols.
//! Near the real line they are evaluated through the factorization `A = T^k S B`,
//! with `sigma_S` expressed through the double sine function. At a real quadratic
//! fixed point `beta` the value `shin^r[beta]` is also available as a finite product
//! of double sine values over the Hirzebruch-Jung cycle of a reduced pair.

use rand::Rng;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

use crate::characters::{chi_r, psi_eta, psi_squared, RootOfUnity};
use crate::error::{Error, Result};
use crate::modgroup::{
    cycle_data, frac_vec, reduce_pair, sign_j, stabilizer_generator, CharVec, CycleData, Mat2,
};
use crate::qfield::{lower_conductor, QuadVal};
use crate::special::{cyclic_qdl_root, dilog, dsine, eta, pi, qpoch_finite, qpoch_inf, Cx};
use crate::verify::{IdentityReport, Tracker};

const GUARD: u32 = 24;

/// Smallest imaginary part at which q-Pochhammer products are evaluated directly.
const DIRECT_IM: f64 = 0.01;

/// Longest finite q-Pochhammer product accepted in the `shin`/`sigma` relations.
const MAX_POCHHAMMER: i64 = 10_000_000;

/// Bound on the stabilizer entries of random instances.
const RANDOM_MAX_ENTRY: u32 = 5000;

fn cx_quad(x: &QuadVal, prec: u32) -> Cx {
    Cx::from_real(&x.to_float(prec))
}

fn half_plane(tau: &Cx) -> Result<()> {
    if tau.im <= 0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    Ok(())
}

fn check_sl2(a: &Mat2) -> Result<()> {
    if a.det() != 1 {
        return Err(Error::Domain("matrix must have determinant 1".into()));
    }
    Ok(())
}

/// `(w; q)_inf` by direct product.
fn varpi_direct(z: &Cx, tau: &Cx, wp: u32) -> Result<Cx> {
    qpoch_inf(&z.with_prec(wp).e(), &tau.with_prec(wp).e(), wp)
}

/// `sigma_{m,A}(z, tau) = varpi(z/j_A(tau) + <m, A tau>, A tau) / varpi(z, tau)` for `tau` in the upper half-plane.
pub fn sigma(m: &CharVec, a: &Mat2, z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    half_plane(tau)?;
    if !m.is_integral() {
        return Err(Error::Domain("m must be an integral vector".into()));
    }
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    let z = z.with_prec(wp);
    let at = a.act_cx(&tau)?;
    let j = a.j_cx(&tau);
    let num = varpi_direct(&z.div(&j).add(&m.linear_form_cx(&at)), &at, wp)?;
    let den = varpi_direct(&z, &tau, wp)?;
    if den.is_zero() {
        return Err(Error::Pole("sigma denominator vanishes".into()));
    }
    Ok(num.div(&den).with_prec(prec))
}

/// `sigma_S(z, tau) = e((tau - 3 + 1/tau)/24 + (tau - z)(1 - z)/(4 tau)) (1 - e(z/tau)) / S_2(z; tau, 1)`,
/// valid for `tau` off the ray `(-inf, 0]`.
pub fn sigma_s(z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    if tau.im.is_zero() && tau.re <= 0 {
        return Err(Error::OutsideDomain);
    }
    let wp = prec + GUARD;
    let z = z.with_prec(wp);
    let tau = tau.with_prec(wp);
    let one = Cx::one(wp);
    let tinv = tau.recip();
    let g = tau
        .add(&tinv)
        .add_int(&Integer::from(-3))
        .div_real(&Float::with_val(wp, 24));
    let l = tau.sub(&z).mul(&one.sub(&z)).div(&tau.scale_f64(4.0));
    let pre = g.add(&l).e().mul(&one.sub(&z.mul(&tinv).e()));
    let s2 = dsine(&z, &tau, &one, wp)?;
    if s2.is_zero() {
        return Err(Error::Pole("pole/zero of S2".into()));
    }
    Ok(pre.div(&s2).with_prec(prec))
}

/// Whether `tau` lies in the continuation domain of `sigma_A`.
pub fn in_domain(a: &Mat2, tau: &Cx) -> bool {
    if !tau.im.is_zero() {
        return !(a.c == 0 && a.d < 0 && tau.im < 0);
    }
    let x = Float::with_val(tau.re.prec(), &tau.re);
    match a.c.cmp0() {
        std::cmp::Ordering::Equal => a.d > 0,
        std::cmp::Ordering::Greater => Float::with_val(x.prec(), &x * &a.c) + &a.d > 0,
        std::cmp::Ordering::Less => Float::with_val(x.prec(), &x * &a.c) + &a.d > 0,
    }
}

fn sigma_rec(a: &Mat2, z: &Cx, tau: &Cx, wp: u32, depth: usize) -> Result<Cx> {
    assert!(depth < 100_000, "continuation recursion did not terminate");
    match a.c.cmp0() {
        std::cmp::Ordering::Equal => {
            if a.d > 0 {
                Ok(Cx::one(wp))
            } else if tau.im > 0 {
                sigma(&CharVec::zero(), a, z, tau, wp)
            } else {
                Err(Error::OutsideDomain)
            }
        }
        std::cmp::Ordering::Less => {
            // 1 = sigma_{A^{-1}}(z/j_A(tau), A tau) sigma_A(z, tau)
            let j = a.j_cx(tau);
            let at = a.act_cx(tau)?;
            Ok(sigma_rec(&a.inv(), &z.div(&j), &at, wp, depth + 1)?.recip())
        }
        std::cmp::Ordering::Greater => {
            // a = c k - c' with 0 <= c' < c and A = T^k S B.
            let k = a.a.div_rem_ceil_ref(&a.c).complete().0;
            let b = Mat2::new(
                a.c.clone(),
                a.d.clone(),
                (&a.c * &k).complete() - &a.a,
                (&a.d * &k).complete() - &a.b,
            );
            let jb = b.j_cx(tau);
            let bt = b.act_cx(tau)?;
            let head = sigma_s(&z.div(&jb), &bt, wp)?;
            Ok(head.mul(&sigma_rec(&b, z, tau, wp, depth + 1)?))
        }
    }
}

/// Meromorphic continuation of `sigma_A(z, tau)` to `tau` in the domain `D_A`,
/// through the factorization `A = T^k S B` with `c(B) < c(A)`.
pub fn sigma_continued(a: &Mat2, z: &Cx, tau: &Cx, prec: u32) -> Result<Cx> {
    check_sl2(a)?;
    if !in_domain(a, tau) {
        return Err(Error::OutsideDomain);
    }
    let wp = prec + GUARD;
    Ok(sigma_rec(a, &z.with_prec(wp), &tau.with_prec(wp), wp, 0)?.with_prec(prec))
}

/// `(I - A) r`.
fn defect(a: &Mat2, r: &CharVec) -> CharVec {
    r - &a.apply(r)
}

fn as_i64(x: &Rational, what: &str) -> Result<i64> {
    if *x.denom() != 1 {
        return Err(Error::NotInGammaR);
    }
    x.numer()
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("{what} does not fit in 64 bits")))
}

fn poch_len(x: &Rational) -> Result<i64> {
    let m = as_i64(x, "pochhammer index")?;
    if m.abs() > MAX_POCHHAMMER {
        return Err(Error::Numeric(format!(
            "finite q-Pochhammer product of length {m} is too long"
        )));
    }
    Ok(m)
}

/// `shin^r_A(tau)` for integral `r`, from `varpi_(0,1)(tau) = e(-tau/24) eta(tau)`.
///
/// When `r2 <= 0` the product has a vanishing factor; the value is the limit
/// `j_A(tau)^{-1}` times the ratio with that factor removed.
fn shin_integral(r: &CharVec, a: &Mat2, tau: &Cx, wp: u32) -> Result<Cx> {
    let at = a.act_cx(tau)?;
    let t24 = Float::with_val(wp, 24);
    let base = eta(&at, wp)?
        .mul(&at.div_real(&t24).neg().e())
        .div(&eta(tau, wp)?.mul(&tau.div_real(&t24).neg().e()));
    let r2 = as_i64(&r.r2, "r2")?;
    let q = tau.e();
    let qa = at.e();
    let one = Cx::one(wp);
    let mut v = base;
    if r2 >= 1 {
        for j in 1..r2 {
            v = v.mul(&one.sub(&q.powi(j))).div(&one.sub(&qa.powi(j)));
        }
    } else {
        for j in 1..=(-r2) {
            v = v.mul(&one.sub(&qa.powi(-j))).div(&one.sub(&q.powi(-j)));
        }
        v = v.div(&a.j_cx(tau));
    }
    Ok(v)
}

/// `shin^r_A(tau) = varpi_r(A tau) / varpi_r(tau)` for `tau` in the upper half-plane.
///
/// Points close to the real line are handled through
/// `shin^r_A(tau) = (e(<r,tau>/j_A(tau)), e(A tau))_M^{-1} sigma_A(<r,tau>, tau)` with
/// `M = ((I - A) r)_2` and the continued `sigma_A`.
pub fn shin_tau(r: &CharVec, a: &Mat2, tau: &Cx, prec: u32) -> Result<Cx> {
    half_plane(tau)?;
    check_sl2(a)?;
    if !a.fixes_mod_z2(r) {
        return Err(Error::NotInGammaR);
    }
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    if r.is_integral() {
        return Ok(shin_integral(r, a, &tau, wp)?.with_prec(prec));
    }
    let at = a.act_cx(&tau)?;
    let direct = tau.im.to_f64().min(at.im.to_f64()) >= DIRECT_IM;
    let v = if direct {
        let num = varpi_direct(&r.linear_form_cx(&at), &at, wp)?;
        let den = varpi_direct(&r.linear_form_cx(&tau), &tau, wp)?;
        num.div(&den)
    } else {
        shin_goose_first(r, a, &tau, wp)?
    };
    Ok(v.with_prec(prec))
}

/// First relation between `shin` and `sigma`:
/// `shin^r_A(tau) = (e(<r,tau>/j_A(tau)), e(A tau))_M^{-1} sigma_A(<r,tau>, tau)`, `M = ((I - A) r)_2`.
fn shin_goose_first(r: &CharVec, a: &Mat2, tau: &Cx, wp: u32) -> Result<Cx> {
    let m = poch_len(&defect(a, r).r2)?;
    let z = r.linear_form_cx(tau);
    let j = a.j_cx(tau);
    let at = a.act_cx(tau)?;
    let poch = qpoch_finite(&z.div(&j).e(), &at.e(), m, wp)?;
    let s = sigma_rec(a, &z, tau, wp, 0)?;
    Ok(s.div(&poch))
}

/// Right-hand side of the first relation between `shin` and `sigma`, with `sigma_A` taken from
/// its q-Pochhammer definition.
pub fn goose_first(r: &CharVec, a: &Mat2, tau: &Cx, prec: u32) -> Result<Cx> {
    half_plane(tau)?;
    if !a.fixes_mod_z2(r) {
        return Err(Error::NotInGammaR);
    }
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    let m = poch_len(&defect(a, r).r2)?;
    let z = r.linear_form_cx(&tau);
    let j = a.j_cx(&tau);
    let at = a.act_cx(&tau)?;
    let poch = qpoch_finite(&z.div(&j).e(), &at.e(), m, wp)?;
    Ok(sigma(&CharVec::zero(), a, &z, &tau, wp)?
        .div(&poch)
        .with_prec(prec))
}

/// Right-hand side of the second relation between `shin` and `sigma`:
/// `(e(<A^{-1} r, tau>), e(tau))_M sigma_A(<A^{-1} r, tau>, tau)` with `M = <r, (I - A) e_1>`.
pub fn goose_second(r: &CharVec, a: &Mat2, tau: &Cx, prec: u32) -> Result<Cx> {
    half_plane(tau)?;
    if !a.fixes_mod_z2(r) {
        return Err(Error::NotInGammaR);
    }
    let wp = prec + GUARD;
    let tau = tau.with_prec(wp);
    let col = CharVec::new(Integer::from(1) - &a.a, (-&a.c).complete());
    let m = poch_len(&r.pairing(&col))?;
    let z = a.inv().apply(r).linear_form_cx(&tau);
    let poch = qpoch_finite(&z.e(), &tau.e(), m, wp)?;
    Ok(sigma(&CharVec::zero(), a, &z, &tau, wp)?
        .mul(&poch)
        .with_prec(prec))
}

/// The value `shin^r[beta]` at a real quadratic point with its cycle invariants.
#[derive(Clone, Debug)]
pub struct RMValue {
    pub shin: Cx,
    /// `psi^{-2} chi_r^{-1} shin^2`, equal to `u1^{-2}`.
    pub samech: Float,
    /// Product of double sine values over the cycle; `1/|shin|` for integral `r`.
    pub u1: Float,
    /// `(sum b_n - 3 k ell)/24`.
    pub gamma24: Rational,
    /// `(1/4) sum (beta_n - w_n)(1 - w_n)/beta_n`; absent for integral `r`.
    pub lambda4: Option<Rational>,
    /// The stabilizer power `A = P^k` fixing `beta` and `r` modulo `Z^2`.
    pub a: Mat2,
    pub k: u64,
    pub cycle: Option<CycleData>,
    pub r: CharVec,
    pub beta: QuadVal,
}

impl RMValue {
    /// Exact exponent of the phase `e(gamma24 + lambda4)` reduced into `(-1/2, 1/2]`.
    pub fn phase_exponent(&self) -> Option<Rational> {
        let x = Rational::from(&self.gamma24 + self.lambda4.as_ref()?);
        let mut x = RootOfUnity::new(x).exponent().clone();
        if x > (1, 2) {
            x -= 1;
        }
        Some(x)
    }

    /// Numeric `samech = psi^{-2}(A) chi_r^{-1}(A) shin^2` as a complex number.
    pub fn samech_numeric(&self, prec: u32) -> Result<Cx> {
        let ch = psi_squared(&self.a)?.mul(&chi_r(&self.r, &self.a)?).inv();
        Ok(ch
            .to_cx(prec + 8)
            .mul(&self.shin.with_prec(prec + 8).sqr())
            .with_prec(prec))
    }
}

/// `sum_n (beta_n - 3 + 1/beta_n)` over the cycle, exactly.
pub fn gamma_exact(cd: &CycleData) -> Result<Rational> {
    let d = cd.beta.d().clone();
    let mut acc = QuadVal::from_int(0, &d);
    for b in &cd.beta_n {
        acc = &(&acc + b) + &b.recip();
        acc = acc.add_rational(&Rational::from(-3));
    }
    acc.to_rational()
        .ok_or_else(|| Error::Numeric("gamma(A) is not rational".into()))
}

/// `sum_n (beta_n - w_n)(1 - w_n)/beta_n` over the cycle as an exact quadratic value.
pub fn lambda_sum(cd: &CycleData) -> QuadVal {
    let d = cd.beta.d().clone();
    let one = QuadVal::from_int(1, &d);
    let mut acc = QuadVal::from_int(0, &d);
    for (b, w) in cd.beta_n.iter().zip(&cd.w_n) {
        acc = &acc + &(&(&(b - w) * &(&one - w)) / b);
    }
    acc
}

/// `shin^r[beta]` for a reduced pair with non-integral `r` or `r = (-1, 0)`, from the cycle product.
pub fn shin_rm_cycle(
    r: &CharVec,
    beta: &QuadVal,
    prec: u32,
) -> Result<(CycleData, Float, Rational, Rational)> {
    let cd = cycle_data(r, beta)?;
    let wp = prec + GUARD;
    let one = Cx::one(wp);
    let mut u1 = Float::with_val(wp, 1);
    for (b, w) in cd.beta_n.iter().zip(&cd.w_n) {
        let v = dsine(&cx_quad(w, wp), &cx_quad(b, wp), &one, wp)?;
        u1 *= &v.re;
    }
    let sum_b: Integer = cd.b.iter().sum();
    let gamma24 = Rational::from((
        (sum_b - Integer::from(3 * cd.ell)) * Integer::from(cd.k),
        Integer::from(24),
    ));
    let lam = lambda_sum(&cd);
    let lam = lam
        .to_rational()
        .ok_or_else(|| Error::Numeric("lambda_r(A) has a nonzero sqrt part".into()))?;
    let lambda4 = lam / Integer::from(4);
    Ok((cd, u1, gamma24, lambda4))
}

/// Checks that `beta` is hyperbolic, meaning irrational real quadratic.
fn check_rm_input(beta: &QuadVal) -> Result<()> {
    if beta.is_rational() {
        return Err(Error::Domain(
            "beta must be an irrational real quadratic number".into(),
        ));
    }
    Ok(())
}

/// `shin^r[beta] = shin^r_A(beta)` for `A = A_beta^+` made to fix `r` modulo `Z^2`.
///
/// Non-integral `r` goes through a reduced pair and the double sine cycle product
/// `shin = e(gamma24 + lambda4) / U1`; integral `r` uses `psi(A) sqrt(eps)^{+-1}`.
pub fn shin_rm(r: &CharVec, beta: &QuadVal, prec: u32) -> Result<RMValue> {
    check_rm_input(beta)?;
    let wp = prec + GUARD;
    let (a, _, k) = stabilizer_generator(r, beta)?;
    let (r_red, beta_red, _) = reduce_pair(r, beta)?;
    let red_hj = crate::modgroup::hj_expand(&beta_red)?;
    let ell = red_hj.period.len();
    let sum_b: Integer = red_hj.period.iter().sum();
    if r.is_integral() {
        let eps = a.j(beta);
        let se = Float::with_val(wp, eps.to_float(wp).sqrt());
        let root = if r.r2 > 0 { se } else { se.recip() };
        let shin = psi_eta(&a)?.to_cx(wp).mul_real(&root);
        let chi = chi_r(r, &a)?;
        let samech = Float::with_val(wp, chi.inv().to_cx(wp).re.clone())
            * Float::with_val(wp, root.clone().square());
        let u1 = root.recip();
        let gamma24 = Rational::from((
            (sum_b - Integer::from(3 * ell)) * Integer::from(k),
            Integer::from(24),
        ));
        return Ok(RMValue {
            shin: shin.with_prec(prec),
            samech: Float::with_val(prec, samech),
            u1: Float::with_val(prec, u1),
            gamma24,
            lambda4: None,
            a,
            k,
            cycle: None,
            r: r.clone(),
            beta: beta.clone(),
        });
    }
    let (cd, u1, gamma24, lambda4) = shin_rm_cycle(&r_red, &beta_red, prec)?;
    debug_assert_eq!(cd.k, k);
    let phase = Cx::e_rat(&Rational::from(&gamma24 + &lambda4), wp);
    let shin = phase.div_real(&u1);
    let samech = Float::with_val(wp, u1.clone().square()).recip();
    Ok(RMValue {
        shin: shin.with_prec(prec),
        samech: Float::with_val(prec, samech),
        u1: Float::with_val(prec, u1),
        gamma24,
        lambda4: Some(lambda4),
        a,
        k,
        cycle: Some(cd),
        r: r.clone(),
        beta: beta.clone(),
    })
}

/// `shin^r[beta]` through the first `shin`/`sigma` relation at the real point `tau = beta`,
/// with `sigma_A` continued by the `T^k S B` factorization.
pub fn shin_rm_via_sigma(r: &CharVec, beta: &QuadVal, prec: u32) -> Result<Cx> {
    check_rm_input(beta)?;
    if r.is_integral() {
        return Err(Error::Domain(
            "integral characteristics sit on a zero of sigma".into(),
        ));
    }
    let (a, _, _) = stabilizer_generator(r, beta)?;
    let wp = prec + GUARD;
    let tau = cx_quad(beta, wp);
    Ok(shin_goose_first(r, &a, &tau, wp)?.with_prec(prec))
}

/// `shin^r_A(beta + i y)` with `A = A_beta^+`, which tends to `shin^r[beta]` as `y -> 0+`.
pub fn shin_rm_via_limit(r: &CharVec, beta: &QuadVal, y: &Float, prec: u32) -> Result<Cx> {
    check_rm_input(beta)?;
    if *y <= 0 {
        return Err(Error::Domain("y must be positive".into()));
    }
    let (a, _, _) = stabilizer_generator(r, beta)?;
    let wp = prec + GUARD;
    let tau = Cx::new(beta.to_float(wp), Float::with_val(wp, y));
    shin_tau(r, &a, &tau, prec)
}

/// `varpi_r(tau)` for `tau` close to a real quadratic fixed point of `A`, using
/// `varpi_r(tau) = shin^r_A(A^{-1} tau) varpi_r(A^{-1} tau)` until the imaginary part is large.
pub fn varpi_r_near(r: &CharVec, a: &Mat2, tau: &Cx, prec: u32) -> Result<Cx> {
    half_plane(tau)?;
    if !a.fixes_mod_z2(r) {
        return Err(Error::NotInGammaR);
    }
    let wp = prec + GUARD;
    let ainv = a.inv();
    let mut t = tau.with_prec(wp);
    let mut acc = Cx::one(wp);
    let mut steps = 0;
    while t.im.to_f64() < 0.25 {
        let prev = ainv.act_cx(&t)?;
        if prev.im <= t.im {
            if t.im.to_f64() < 1e-3 {
                return Err(Error::Domain(
                    "A^{-1} does not move tau away from the real line".into(),
                ));
            }
            break;
        }
        acc = acc.mul(&shin_tau(r, a, &prev, wp)?);
        t = prev;
        steps += 1;
        if steps > 10_000 {
            return Err(Error::Numeric("too many orbit steps".into()));
        }
    }
    let base = varpi_direct(&r.linear_form_cx(&t), &t, wp)?;
    Ok(acc.mul(&base).with_prec(prec))
}

/// `D_{e(m'/n')}(e(n z/n'))^{-1/n'} / D_{e(m/n)}(e(z))^{-1/n}` with `m' = a m + b n`, `n' = c m + d n`,
/// each root taken factor by factor on the principal branch.
pub fn qcdid_ratio(a: &Mat2, z: &Cx, m: i64, n: i64, prec: u32) -> Result<Cx> {
    let (mt, nt) = rational_image(a, z, m, n)?;
    let wp = prec + GUARD;
    let z = z.with_prec(wp);
    let ntu = nt
        .to_u64()
        .ok_or_else(|| Error::Domain("entries too large".into()))?;
    let w_top = z
        .mul_int(&Integer::from(n))
        .div_real(&Float::with_val(wp, &nt))
        .e();
    let top = cyclic_qdl_root(ntu, mt, &w_top, &Rational::from((-1, nt.clone())), wp)?;
    let bottom = cyclic_qdl_root(n as u64, m, &z.e(), &Rational::from((-1, n)), wp)?;
    Ok(top.div(&bottom).with_prec(prec))
}

/// `(m', n') = (a m + b n, c m + d n)` after checking the hypotheses of the rational-`tau` evaluation.
fn rational_image(a: &Mat2, z: &Cx, m: i64, n: i64) -> Result<(i64, Integer)> {
    check_sl2(a)?;
    if n <= 0 || Integer::from(m).gcd(&Integer::from(n)) != 1 {
        return Err(Error::Domain("need n > 0 and gcd(m, n) = 1".into()));
    }
    if z.im <= 0 {
        return Err(Error::Domain("need Im(z) > 0".into()));
    }
    let mt = Integer::from(&a.a * m) + Integer::from(&a.b * n);
    let nt = Integer::from(&a.c * m) + Integer::from(&a.d * n);
    if nt <= 0 {
        return Err(Error::Domain("need j_A(m/n) > 0".into()));
    }
    let mt = mt
        .to_i64()
        .ok_or_else(|| Error::Domain("entries too large".into()))?;
    Ok((mt, nt))
}

/// The factor `(1 - x)^{c z/n'} exp(c Li_2(x) / (2 pi i n n'))`, `x = e(n z)`, by which `sigma_A(z, m/n)`
/// differs from [`qcdid_ratio`]. It comes from the first-order dependence of `z/j_A(tau)` and of
/// `A tau - A(m/n)` on `tau - m/n`, which survives the `1/t` in the Li_2 asymptotics.
pub fn qcdid_correction(a: &Mat2, z: &Cx, m: i64, n: i64, prec: u32) -> Result<Cx> {
    let (_, nt) = rational_image(a, z, m, n)?;
    let wp = prec + GUARD;
    let z = z.with_prec(wp);
    let x = z.mul_int(&Integer::from(n)).e();
    let one = Cx::one(wp);
    let cf = Float::with_val(wp, &a.c);
    let ntf = Float::with_val(wp, &nt);
    let first = one.sub(&x).ln().mul(&z).mul_real(&cf).div_real(&ntf);
    let two_pi_i = Cx::new(Float::new(wp), pi(wp) * 2u32);
    let den = two_pi_i.mul_real(&Float::with_val(wp, &ntf * n));
    let second = dilog(&x, wp)?.mul_real(&cf).div(&den);
    Ok(first.add(&second).exp().with_prec(prec))
}

/// `sigma_A(z, m/n)` for `Im z > 0` and `j_A(m/n) > 0`, as [`qcdid_correction`] times [`qcdid_ratio`].
pub fn shin_rational_tau(a: &Mat2, z: &Cx, m: i64, n: i64, prec: u32) -> Result<Cx> {
    let wp = prec + GUARD;
    let r = qcdid_ratio(a, z, m, n, wp)?;
    Ok(r.mul(&qcdid_correction(a, z, m, n, wp)?).with_prec(prec))
}

/// A random irrational real quadratic number `root(a, b, c, +)` with `0 < b^2 - 4ac < max_disc`.
pub fn random_quadratic<R: Rng>(rng: &mut R, max_disc: i64) -> QuadVal {
    let b_max = ((max_disc as f64).sqrt() as i64).max(2);
    loop {
        let a: i64 = rng.gen_range(1..=4);
        let c_max = (max_disc / (4 * a)).max(2);
        let b: i64 = rng.gen_range(-b_max..=b_max);
        let c: i64 = rng.gen_range(-c_max..=c_max);
        let disc = b * b - 4 * a * c;
        if disc <= 0 || disc >= max_disc {
            continue;
        }
        let s = (disc as f64).sqrt().round() as i64;
        if s * s == disc
            || Integer::from(a)
                .gcd(&Integer::from(b))
                .gcd(&Integer::from(c))
                != 1
        {
            continue;
        }
        let root = crate::qfield::QuadPolyRoot {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            larger: rng.gen(),
        };
        if let Ok(v) = root.to_quad() {
            return v;
        }
    }
}

/// A random non-integral characteristic with denominator at most `max_den`.
pub fn random_charvec<R: Rng>(rng: &mut R, max_den: i64) -> CharVec {
    loop {
        let n: i64 = rng.gen_range(2..=max_den);
        let r = CharVec::new(
            Rational::from((rng.gen_range(-2 * n..=2 * n), n)),
            Rational::from((rng.gen_range(-2 * n..=2 * n), n)),
        );
        if !r.is_integral() {
            return r;
        }
    }
}

/// A random pair `(r, beta)` whose cycle has at most `max_len` terms and whose
/// stabilizer has entries of modest size.
pub fn random_rm_pair<R: Rng>(
    rng: &mut R,
    max_disc: i64,
    max_den: i64,
    max_len: usize,
) -> (CharVec, QuadVal) {
    loop {
        let beta = random_quadratic(rng, max_disc);
        let r = random_charvec(rng, max_den);
        let Ok((rr, br, _)) = reduce_pair(&r, &beta) else {
            continue;
        };
        let Ok(cd) = cycle_data(&rr, &br) else {
            continue;
        };
        let Ok((a, _, _)) = stabilizer_generator(&r, &beta) else {
            continue;
        };
        let small = [&a.a, &a.b, &a.c, &a.d]
            .iter()
            .all(|x| x.significant_bits() <= RANDOM_MAX_ENTRY.ilog2() + 1);
        if cd.len() <= max_len && small {
            return (r, beta);
        }
    }
}

/// A random element of `GL_2(Z)` as a product of a few generators.
pub fn random_gl2<R: Rng>(rng: &mut R) -> Mat2 {
    let mut m = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let step = match rng.gen_range(0..3) {
            0 => Mat2::t(rng.gen_range(-3i64..=3)),
            1 => Mat2::s(),
            _ => Mat2::new(-1, 0, 0, 1),
        };
        m = &m * &step;
    }
    m
}

/// `{s in Q^2/Z^2 : B s - r in Z^2}` for an integral matrix `B` of positive determinant.
pub fn cllr_cosets(b: &Mat2, r: &CharVec) -> Vec<CharVec> {
    let f = b.det();
    let fi = f.to_i64().expect("determinant fits in 64 bits");
    let adj = b.adjugate();
    let inv_f = Rational::from((1, f));
    let mut out: Vec<CharVec> = Vec::new();
    for j1 in 0..fi {
        for j2 in 0..fi {
            let v = &CharVec::new(j1, j2) + r;
            let s = frac_vec(&adj.apply(&v).scale(&inv_f));
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Smallest `e >= 1` with `base^e = target`.
fn power_index(base: &Mat2, target: &Mat2) -> Result<i64> {
    let mut m = base.clone();
    for e in 1..=10_000 {
        if m == *target {
            return Ok(e);
        }
        m = &m * base;
    }
    Err(Error::Numeric(
        "matrix is not a positive power of the stabilizer generator".into(),
    ))
}

/// Both sides of the conductor-lowering relation
/// `shin^r_{B A B^{-1}}(B alpha) = prod_s shin^s_A(alpha)` with `beta = B alpha` and `alpha` of conductor one.
pub fn cllr_sides(r: &CharVec, beta: &QuadVal, prec: u32) -> Result<(Cx, Cx)> {
    check_rm_input(beta)?;
    let (b, alpha) = lower_conductor(beta)?;
    let f = b.det();
    let cosets = cllr_cosets(&b, r);
    let (p_alpha, _, _) = {
        let (_, p, _) = stabilizer_generator(&CharVec::zero(), &alpha)?;
        (p.clone(), p, 0)
    };
    // Smallest power of the stabilizer of alpha that is congruent to I mod f and fixes every coset.
    let mut a = p_alpha.clone();
    let conj = |m: &Mat2| -> Option<Mat2> {
        let adj = b.adjugate();
        let prod = &(&b * m) * &adj;
        let ok = [&prod.a, &prod.b, &prod.c, &prod.d]
            .iter()
            .all(|x| x.is_divisible(&f));
        ok.then(|| Mat2::new(prod.a / &f, prod.b / &f, prod.c / &f, prod.d / &f))
    };
    let big = loop {
        if cosets.iter().all(|s| a.fixes_mod_z2(s)) {
            if let Some(m) = conj(&a) {
                if m.fixes_mod_z2(r) {
                    break m;
                }
            }
        }
        a = &a * &p_alpha;
    };
    let wp = prec + GUARD;
    let lhs_rm = shin_rm(r, beta, wp)?;
    let e = power_index(&lhs_rm.a, &big)?;
    let lhs = lhs_rm.shin.powi(e);
    let mut rhs = Cx::one(wp);
    for s in &cosets {
        let v = shin_rm(s, &alpha, wp)?;
        let e = power_index(&v.a, &a)?;
        rhs = rhs.mul(&v.shin.powi(e));
    }
    Ok((lhs.with_prec(prec), rhs.with_prec(prec)))
}

fn rel(a: &Cx, b: &Cx) -> Float {
    a.rel_diff(b)
}

/// Checks the functional equations of real multiplication values at `count` random instances.
///
/// The identities are the `r`/`-r` product rule, `GL_2(Z)` transport, integer shifts of `r`
/// (evaluated through the continued `sigma`), and the samech properties: inverse pairing,
/// shift invariance, `GL_2(Z)` invariance and positivity.
pub fn verify_rm_identities(seed: u64, count: usize, prec: u32) -> Result<IdentityReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tol = 16 - prec as i32;
    let mut t_char = Tracker::new("shin r times shin -r equals psi^2 chi_r");
    let mut t_conj = Tracker::new("GL2 transport of shin");
    let mut t_inv = Tracker::new("integer shift invariance of shin");
    let mut t_route = Tracker::new("cycle product equals continued sigma");
    let mut t_s1 = Tracker::new("samech r times samech -r equals 1");
    let mut t_s2 = Tracker::new("samech shift invariance");
    let mut t_s3 = Tracker::new("samech GL2 invariance");
    let mut t_s4 = Tracker::new("samech is positive real");
    for _ in 0..count {
        let (r, beta) = random_rm_pair(&mut rng, 500, 6, 16);
        let v = shin_rm(&r, &beta, prec)?;
        let vm = shin_rm(&r.neg(), &beta, prec)?;
        let ch = psi_squared(&v.a)?.mul(&chi_r(&r, &v.a)?).to_cx(prec);
        t_char.push(rel(&v.shin.mul(&vm.shin), &ch));

        let sv = v.samech_numeric(prec)?;
        let svm = vm.samech_numeric(prec)?;
        t_s1.push(sv.mul(&svm).sub(&Cx::one(prec)).abs());
        let pos = if sv.re > 0 {
            Float::with_val(64, sv.im.clone().abs() / sv.abs())
        } else {
            Float::with_val(64, 1)
        };
        t_s4.push(pos);

        let rm = random_gl2(&mut rng);
        let s = sign_j(&rm, &beta);
        let r2 = rm.apply(&r).scale(&Rational::from(s));
        let beta2 = rm.act(&beta)?;
        let v2 = shin_rm(&r2, &beta2, prec)?;
        let expect_a = &(&rm * &v.a) * &rm.inv();
        let target = if rm.det() == 1 {
            v.shin.clone()
        } else {
            v.shin.conj()
        };
        let mut dev = rel(&v2.shin, &target);
        if v2.a != expect_a {
            dev = Float::with_val(64, 1);
        }
        t_conj.push(dev);
        let sv2 = v2.samech_numeric(prec)?;
        t_s3.push(rel(&sv2, &sv));

        let n = CharVec::new(rng.gen_range(-2i64..=2), rng.gen_range(-2i64..=2));
        let shifted = &r + &n;
        let via = shin_rm_via_sigma(&shifted, &beta, prec)?;
        t_inv.push(rel(&via, &v.shin));
        let sv_shift = psi_squared(&v.a)?
            .mul(&chi_r(&shifted, &v.a)?)
            .inv()
            .to_cx(prec)
            .mul(&via.sqr());
        t_s2.push(rel(&sv_shift, &sv));

        let direct = shin_rm_via_sigma(&r, &beta, prec)?;
        t_route.push(rel(&direct, &v.shin));
    }
    let checks = vec![
        t_char.finish(tol),
        t_conj.finish(tol),
        t_inv.finish(tol),
        t_route.finish(tol),
        t_s1.finish(tol),
        t_s2.finish(tol),
        t_s3.finish(tol),
        t_s4.finish(tol),
    ];
    Ok(IdentityReport {
        seed,
        prec,
        instances: count,
        checks,
    })
}

/// `pi` at `prec` bits, re-exported for phase comparisons.
pub fn pi_at(prec: u32) -> Float {
    pi(prec)
}

/// `2^e` helper for tolerances.
pub fn two_pow(e: i32) -> Float {
    Float::with_val(64, 2).pow(e)
}
