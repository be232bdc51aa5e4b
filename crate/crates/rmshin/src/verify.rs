//! Seeded randomized identity suites shared by the command line and the tests.
//!
//! Each suite draws its instances from a ChaCha stream seeded by the caller, so a
//! seed always reproduces the same report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::characters::{
    chi_r, chi_r_expanded, kappa, phi_rademacher, psi_eta, psi_squared, RootOfUnity,
};
use crate::cocycle::{gamma_exact, lambda_sum, random_charvec, random_quadratic};
use crate::error::Result;
use crate::modgroup::{cycle_data, hj_expand, reduce_pair, stabilizer_generator, CharVec, Mat2};
use crate::qfield::{fundamental_tp_unit, QuadVal};
use crate::special::{dsine, eta, eta_product, pi, theta1, theta_r, theta_rz, varpi, varpi_rz, Cx};

/// One identity check: its name, the number of instances and the largest deviation.
///
/// Exact checks report the number of failures as `max_dev` and carry no tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub count: usize,
    pub max_dev: f64,
    pub log2_max_dev: Option<f64>,
    pub tolerance_log2: Option<f64>,
    pub pass: bool,
}

/// A named collection of identity checks. `prec` is zero for exact suites.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub prec: u32,
    pub instances: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub(crate) struct Tracker {
    name: &'static str,
    count: usize,
    max: Float,
    failures: usize,
}

impl Tracker {
    pub(crate) fn new(name: &'static str) -> Tracker {
        Tracker {
            name,
            count: 0,
            max: Float::new(64),
            failures: 0,
        }
    }

    pub(crate) fn push(&mut self, dev: Float) {
        self.count += 1;
        if dev > self.max || dev.is_nan() {
            self.max = Float::with_val(64, &dev);
        }
    }

    pub(crate) fn push_exact(&mut self, ok: bool) {
        self.count += 1;
        if !ok {
            self.failures += 1;
        }
    }

    pub(crate) fn finish(self, tol_log2: i32) -> IdentityCheck {
        let max = self.max.to_f64();
        let l = (max != 0.0).then(|| self.max.clone().log2().to_f64());
        IdentityCheck {
            name: self.name.to_string(),
            count: self.count,
            max_dev: max,
            log2_max_dev: l,
            tolerance_log2: Some(tol_log2 as f64),
            pass: !max.is_nan() && l.is_none_or(|l| l < tol_log2 as f64),
        }
    }

    pub(crate) fn finish_exact(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name.to_string(),
            count: self.count,
            max_dev: self.failures as f64,
            log2_max_dev: None,
            tolerance_log2: None,
            pass: self.failures == 0,
        }
    }
}

/// A random element of `SL_2(Z)` with entries bounded by about `bound`, either sign of `c`.
pub fn random_sl2<R: Rng>(rng: &mut R, bound: i64) -> Mat2 {
    loop {
        let c: i64 = rng.gen_range(0..=bound);
        let d: i64 = rng.gen_range(-bound..=bound);
        let (g, s, t) = Integer::from(d).gcd_cofactors(Integer::from(c), Integer::new());
        if g != 1 {
            continue;
        }
        // d s + c t = 1, so (s, -t; c, d) has determinant one.
        let m = Mat2::new(s, -t, c, d);
        return if rng.gen_bool(0.5) { m.neg() } else { m };
    }
}

/// A random element of `Gamma_r`: either the stabilizer of a random quadratic number fixing `r`,
/// or a conjugate of `T^N` or its transpose by a small matrix, where `N` is the denominator of `r`.
pub fn random_gamma_r<R: Rng>(rng: &mut R, r: &CharVec, small: bool) -> Mat2 {
    if !small && rng.gen_bool(0.5) {
        let beta = random_quadratic(rng, 200);
        if let Ok((a, _, _)) = stabilizer_generator(r, &beta) {
            return a;
        }
    }
    let w = random_sl2(rng, 3);
    let n = r.denominator();
    let t = if rng.gen_bool(0.5) {
        Mat2::t(n)
    } else {
        Mat2::new(1, 0, n, 1)
    };
    &(&w * &t) * &w.inv()
}

fn random_tau<R: Rng>(rng: &mut R, prec: u32) -> Cx {
    Cx::from_f64(prec, rng.gen_range(-0.5..0.5), rng.gen_range(0.5..1.5))
}

fn random_z<R: Rng>(rng: &mut R, prec: u32) -> Cx {
    Cx::from_f64(prec, rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))
}

fn sum_digits(v: &[Integer]) -> Integer {
    v.iter().sum()
}

/// Exact identities over `count` random quadratic numbers of discriminant below `10^4`.
///
/// Checks the product formula for `j_{A_{m,n}}(beta_n)`, the period product equal to the
/// fundamental totally positive unit, the global phase identities, the homomorphism
/// properties of `chi_r` and `psi^2`, the two formulas for `chi_r`, the `kappa` cocycle law,
/// rationality of `lambda`, and `e(lambda4)^2 = chi_r`, `e(gamma24)^2 = psi^2`.
pub fn verify_exact_identities(seed: u64, count: usize) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t_js = Tracker::new("j_A(m,n)(beta_n) is a product of beta's");
    let mut t_unit = Tracker::new("beta_0 ... beta_(l-1) is the fundamental unit");
    let mut t_phase = Tracker::new("sum b - 3l = l' - l = Phi(P) - 3 = sum(beta - 3 + 1/beta)");
    let mut t_chi_hom = Tracker::new("chi_r is a homomorphism on Gamma_r");
    let mut t_chi_two = Tracker::new("chi_r closed form equals expanded form");
    let mut t_psi_hom = Tracker::new("psi^2 is a homomorphism on SL2(Z)");
    let mut t_kappa = Tracker::new("kappa cocycle law on Gamma_r");
    let mut t_lam = Tracker::new("lambda has vanishing sqrt(D) part");
    let mut t_lam_chi = Tracker::new("e(lambda4)^2 equals chi_r");
    let mut t_gam_psi = Tracker::new("e(gamma24)^2 equals psi^2");
    for _ in 0..count {
        let beta = random_quadratic(&mut rng, 10_000);
        let r = random_charvec(&mut rng, 6);
        let (rr, br, _) = reduce_pair(&r, &beta)?;
        let cd = cycle_data(&rr, &br)?;
        let len = cd.len();
        let ell = cd.ell;

        let beta_at = |n: usize| &cd.beta_n[n % len];
        let lim = len.min(12);
        let mut ok = true;
        for m in 0..=lim {
            for n in 0..=lim {
                let j = cd.segment(m, n).j(beta_at(n));
                let one = QuadVal::from_int(1, br.d());
                let expect = if m < n {
                    (m + 1..=n).fold(one, |acc, i| &acc * beta_at(i))
                } else if m == n {
                    one
                } else {
                    (n + 1..=m).fold(one, |acc, i| &acc * beta_at(i)).recip()
                };
                ok &= j == expect;
            }
        }
        t_js.push_exact(ok);

        let prod = (0..ell).fold(QuadVal::from_int(1, br.d()), |acc, i| &acc * &cd.beta_n[i]);
        t_unit.push_exact(prod == fundamental_tp_unit(&br)?);

        let sb = sum_digits(&cd.b) - Integer::from(3 * ell);
        let ell_conj = hj_expand(&br.conj())?.period.len();
        let p = &cd.a_prefix[ell];
        let phi = phi_rademacher(p)? - Integer::from(3);
        let mut direct = QuadVal::from_int(0, br.d());
        for b in &cd.beta_n[..ell] {
            direct = &(&direct + b) + &b.recip();
            direct = direct.add_rational(&Rational::from(-3));
        }
        let sb_q = Rational::from(sb.clone());
        t_phase.push_exact(
            ell_conj as i64 - ell as i64 == sb_q
                && phi == sb_q
                && direct.to_rational() == Some(sb_q.clone()),
        );

        let a = random_gamma_r(&mut rng, &r, false);
        let b = random_gamma_r(&mut rng, &r, false);
        let ab = &a * &b;
        t_chi_hom.push_exact(chi_r(&r, &ab)? == chi_r(&r, &a)?.mul(&chi_r(&r, &b)?));
        t_chi_two.push_exact(chi_r(&r, &a)? == chi_r_expanded(&r, &a)?);
        t_kappa.push_exact(kappa(&ab, &r)? == kappa(&a, &b.apply(&r))?.mul(&kappa(&b, &r)?));

        let x = random_sl2(&mut rng, 40);
        let y = random_sl2(&mut rng, 40);
        t_psi_hom.push_exact(psi_squared(&(&x * &y))? == psi_squared(&x)?.mul(&psi_squared(&y)?));

        let lam = lambda_sum(&cd);
        t_lam.push_exact(lam.sqrt_part() == 0);
        let lambda4 = lam.rational_part() / Integer::from(4);
        t_lam_chi.push_exact(RootOfUnity::new(lambda4 * Integer::from(2)) == chi_r(&rr, &cd.a)?);
        let gamma24 = gamma_exact(&cd)? / Integer::from(24);
        t_gam_psi.push_exact(RootOfUnity::new(gamma24 * Integer::from(2)) == psi_squared(&cd.a)?);
    }
    let checks = [
        t_js, t_unit, t_phase, t_chi_hom, t_chi_two, t_psi_hom, t_kappa, t_lam, t_lam_chi,
        t_gam_psi,
    ]
    .into_iter()
    .map(Tracker::finish_exact)
    .collect();
    Ok(IdentityReport {
        seed,
        prec: 0,
        instances: count,
        checks,
    })
}

/// Transformation laws of `eta`, `theta_1` and `theta_r` and both Jacobi triple products at
/// `count` random points each, with tolerance `2^(12 - prec)`.
pub fn verify_transformation_laws(seed: u64, count: usize, prec: u32) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wp = prec + 16;
    let tol = 12 - prec as i32;
    let mut t_eta = Tracker::new("eta(A tau) = psi(A) sqrt(c tau + d) eta(tau)");
    let mut t_eta_prod = Tracker::new("eta pentagonal series equals product");
    let mut t_th1 = Tracker::new("theta_1 modular law");
    let mut t_thr = Tracker::new("theta_r(z, tau) modular law with kappa");
    let mut t_thmod = Tracker::new("theta_r(A tau) = psi^3 chi_r sqrt(j) theta_r(tau)");
    let mut t_jp2 = Tracker::new("triple product for varpi(z) varpi(-z)");
    let mut t_jp3 = Tracker::new("triple product with characteristics");
    let half = Float::with_val(wp, 0.5);
    for _ in 0..count {
        let tau = random_tau(&mut rng, wp);
        let z = random_z(&mut rng, wp);

        let a = random_sl2(&mut rng, 50);
        let j = a.j_cx(&tau);
        let lhs = eta(&a.act_cx(&tau)?, wp)?;
        let rhs = psi_eta(&a)?.to_cx(wp).mul(&j.sqrt()).mul(&eta(&tau, wp)?);
        t_eta.push(lhs.rel_diff(&rhs));
        t_eta_prod.push(eta(&tau, wp)?.rel_diff(&eta_product(&tau, wp)?));

        let a = random_sl2(&mut rng, 12);
        let j = a.j_cx(&tau);
        let at = a.act_cx(&tau)?;
        let zj = z.div(&j);
        let gauss = z.sqr().div(&j).mul_int(&a.c).mul_real(&half).e();
        let psi3 = psi_eta(&a)?.pow(3).to_cx(wp);
        let lhs = theta1(&zj, &at, wp)?;
        let rhs = psi3.mul(&gauss).mul(&j.sqrt()).mul(&theta1(&z, &tau, wp)?);
        t_th1.push(lhs.rel_diff(&rhs));

        let r = random_charvec(&mut rng, 7);
        let lhs = theta_rz(&a.apply(&r), &zj, &at, wp)?;
        let rhs = psi3
            .mul(&kappa(&a, &r)?.to_cx(wp))
            .mul(&gauss)
            .mul(&j.sqrt())
            .mul(&theta_rz(&r, &z, &tau, wp)?);
        t_thr.push(lhs.rel_diff(&rhs));

        let g = random_gamma_r(&mut rng, &r, true);
        let jg = g.j_cx(&tau);
        let lhs = theta_r(&r, &g.act_cx(&tau)?, wp)?;
        let rhs = psi_eta(&g)?
            .pow(3)
            .mul(&chi_r(&r, &g)?)
            .to_cx(wp)
            .mul(&jg.sqrt())
            .mul(&theta_r(&r, &tau, wp)?);
        t_thmod.push(lhs.rel_diff(&rhs));

        let i = Cx::i(wp);
        let twelfth = Float::with_val(wp, 12);
        let lhs = varpi(&z, &tau, wp)?.mul(&varpi(&z.neg(), &tau, wp)?);
        let zh = z.mul_real(&half);
        let rhs = i
            .neg()
            .mul(&tau.div_real(&twelfth).neg().e())
            .mul(&zh.e().sub(&zh.neg().e()))
            .mul(&theta1(&z, &tau, wp)?)
            .div(&eta(&tau, wp)?);
        t_jp2.push(lhs.rel_diff(&rhs));

        let lhs = varpi_rz(&r, &z, &tau, wp)?.mul(&varpi_rz(&r.neg(), &z.neg(), &tau, wp)?);
        let r1 = Cx::from_rational(&r.r1, wp);
        let r2 = Cx::from_rational(&r.r2, wp);
        let shift = z.add(&r.linear_form_cx(&tau));
        let coef = r2
            .sqr()
            .mul_real(&half)
            .add(&Cx::one(wp).div_real(&twelfth));
        let expo = coef
            .mul(&tau)
            .add(&r2.mul(&z.sub(&r1).add_real(&half)))
            .neg();
        let sh = shift.mul_real(&half);
        let rhs = i
            .mul(&expo.e())
            .mul(&sh.e().sub(&sh.neg().e()))
            .mul(&theta_rz(&r, &z, &tau, wp)?)
            .div(&eta(&tau, wp)?);
        t_jp3.push(lhs.rel_diff(&rhs));
    }
    let checks = [t_eta, t_eta_prod, t_th1, t_thr, t_thmod, t_jp2, t_jp3]
        .into_iter()
        .map(|t| t.finish(tol))
        .collect();
    Ok(IdentityReport {
        seed,
        prec,
        instances: count,
        checks,
    })
}

/// Double sine identities at `count` random points: both quasiperiodicity laws, reflection,
/// scaling, `S_2(1/2; 1, 1) = sqrt 2` and agreement between `prec` and `prec + 64` bits.
/// Tolerance `2^(10 - prec)`.
pub fn verify_double_sine(seed: u64, count: usize, prec: u32) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wp = prec + 16;
    let tol = 10 - prec as i32;
    let mut t_q1 = Tracker::new("S2(z + w1) = S2(z) / (2 sin(pi z / w2))");
    let mut t_q2 = Tracker::new("S2(z + w2) = S2(z) / (2 sin(pi z / w1))");
    let mut t_refl = Tracker::new("S2(w1 + w2 - z) S2(z) = 1");
    let mut t_scale = Tracker::new("S2(a z; a w1, a w2) = S2(z; w1, w2)");
    let mut t_sqrt2 = Tracker::new("S2(1/2; 1, 1) = sqrt 2");
    let mut t_ladder = Tracker::new("value at prec agrees with prec + 64");
    let pi = pi(wp);
    let s = dsine(&Cx::from_f64(wp, 0.5, 0.0), &Cx::one(wp), &Cx::one(wp), wp)?;
    t_sqrt2.push(s.rel_diff(&Cx::from_real(&Float::with_val(wp, 2).sqrt())));
    for _ in 0..count {
        let w1 = Cx::from_f64(wp, rng.gen_range(0.4..2.0), rng.gen_range(-0.4..0.4));
        let w2 = if rng.gen_bool(0.5) {
            Cx::one(wp)
        } else {
            Cx::from_f64(wp, rng.gen_range(0.4..2.0), rng.gen_range(-0.4..0.4))
        };
        let sum = w1.add(&w2);
        let fx: f64 = rng.gen_range(0.15..0.85);
        let z = sum
            .scale_f64(fx)
            .add(&Cx::from_f64(wp, 0.0, rng.gen_range(-0.2..0.2)));
        let base = dsine(&z, &w1, &w2, wp)?;

        let two_sin = |x: &Cx| x.mul_real(&pi).sin().scale_f64(2.0);
        let lhs = dsine(&z.add(&w1), &w1, &w2, wp)?;
        t_q1.push(lhs.rel_diff(&base.div(&two_sin(&z.div(&w2)))));
        let lhs = dsine(&z.add(&w2), &w1, &w2, wp)?;
        t_q2.push(lhs.rel_diff(&base.div(&two_sin(&z.div(&w1)))));

        let refl = dsine(&sum.sub(&z), &w1, &w2, wp)?;
        t_refl.push(refl.mul(&base).rel_diff(&Cx::one(wp)));

        let alpha: f64 = rng.gen_range(0.5..2.0);
        let scaled = dsine(
            &z.scale_f64(alpha),
            &w1.scale_f64(alpha),
            &w2.scale_f64(alpha),
            wp,
        )?;
        t_scale.push(scaled.rel_diff(&base));

        let lo = dsine(
            &z.with_prec(prec),
            &w1.with_prec(prec),
            &w2.with_prec(prec),
            prec,
        )?;
        let hi = dsine(&z, &w1, &w2, prec + 64)?;
        t_ladder.push(lo.rel_diff(&hi.with_prec(prec)));
    }
    let checks = [t_q1, t_q2, t_refl, t_scale, t_sqrt2, t_ladder]
        .into_iter()
        .map(|t| t.finish(tol))
        .collect();
    Ok(IdentityReport {
        seed,
        prec,
        instances: count,
        checks,
    })
}
