use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmshin::characters::{
    chi_r, chi_r_expanded, dedekind_sum, jacobi_symbol, kappa, kappa_linear_variant,
    phi_rademacher, psi_eta, psi_squared, RootOfUnity,
};
use rmshin::cocycle::random_charvec;
use rmshin::modgroup::{CharVec, Mat2};
use rmshin::special::{eta_product, theta_r, theta_rz, Cx};
use rmshin::verify::{random_gamma_r, random_sl2};
use rmshin::Error;
use rug::{Float, Integer, Rational};

fn int(x: i64) -> Integer {
    Integer::from(x)
}

fn root(n: i64, d: i64) -> RootOfUnity {
    RootOfUnity::new(Rational::from((n, d)))
}

fn rv(text: &str) -> CharVec {
    CharVec::parse(text).unwrap()
}

/// The sawtooth `((x))`.
fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::new();
    }
    let fl = x.numer().clone().div_rem_floor(x.denom().clone()).0;
    Rational::from(x - fl) - Rational::from((1, 2))
}

/// `s(h, k)` from its defining sum.
fn dedekind_sum_direct(h: i64, k: i64) -> Rational {
    let k = k.abs();
    (1..k).fold(Rational::new(), |acc, j| {
        acc + sawtooth(&Rational::from((j, k))) * sawtooth(&Rational::from((h * j, k)))
    })
}

/// Jacobi symbol from Euler's criterion on the prime factorization of `n`.
fn jacobi_direct(a: i64, n: i64) -> i32 {
    let mut n = n;
    let mut out = 1i32;
    let mut p = 3;
    while n > 1 {
        while n % p == 0 {
            let e = Integer::from(a.rem_euclid(p))
                .pow_mod(&int((p - 1) / 2), &int(p))
                .unwrap();
            out *= if e == 0 {
                0
            } else if e == 1 {
                1
            } else {
                -1
            };
            n /= p;
        }
        p += 2;
    }
    out
}

#[test]
fn dedekind_sum_values() {
    assert_eq!(dedekind_sum(&int(1), &int(2)).unwrap(), 0);
    assert_eq!(
        dedekind_sum(&int(1), &int(3)).unwrap(),
        Rational::from((1, 18))
    );
    for h in [-7, 0, 1, 5, 100] {
        assert_eq!(dedekind_sum(&int(h), &int(1)).unwrap(), 0);
    }
    assert!(matches!(
        dedekind_sum(&int(1), &int(0)),
        Err(Error::Domain(_))
    ));
}

#[test]
fn jacobi_values() {
    assert_eq!(jacobi_symbol(&int(2), &int(3)).unwrap(), -1);
    for n in [1, 3, 5, 9, 15, 21] {
        assert_eq!(jacobi_symbol(&int(1), &int(n)).unwrap(), 1);
    }
    assert_eq!(jacobi_symbol(&int(0), &int(3)).unwrap(), 0);
}

#[test]
fn rademacher_phi_values() {
    assert_eq!(phi_rademacher(&Mat2::t(1)).unwrap(), 1);
    assert_eq!(phi_rademacher(&Mat2::new(2, 3, 1, 2)).unwrap(), 4);
    let a = Mat2::new(26, 45, 15, 26);
    let oracle = Rational::from((52, 15)) - dedekind_sum_direct(26, 15) * Integer::from(12);
    assert_eq!(phi_rademacher(&a).unwrap(), oracle);
    assert_eq!(oracle, 6);
}

#[test]
fn eta_multiplier_values() {
    assert_eq!(psi_eta(&Mat2::t(1)).unwrap(), root(1, 24));
    assert_eq!(psi_squared(&Mat2::t(1)).unwrap(), root(1, 12));
    assert!(psi_squared(&Mat2::identity()).unwrap().is_one());

    // eta(-1/tau) = sqrt(-i tau) eta(tau) with sqrt(-i tau) = e(-1/8) sqrt(tau).
    assert_eq!(psi_eta(&Mat2::s()).unwrap(), root(-1, 8));

    let prec = 128;
    let a = Mat2::new(26, 45, 15, 26);
    let tau = Cx::from_f64(prec, 0.0, 0.5);
    let lhs = eta_product(&a.act_cx(&tau).unwrap(), prec).unwrap();
    let rhs = eta_product(&tau, prec).unwrap().mul(&a.j_cx(&tau).sqrt());
    let ratio = lhs.div(&rhs);
    assert!(ratio.rel_diff(&psi_eta(&a).unwrap().to_cx(prec)) < 1e-20);
}

#[test]
fn theta_character_example_matches_theta_series() {
    let prec = 128;
    let r = rv("0,4/5");
    let a = Mat2::new(26, 45, 15, 26);
    let chi = chi_r(&r, &a).unwrap();
    assert_eq!(chi, root(2, 5));

    let tau = Cx::i(prec);
    let lhs = theta_r(&r, &a.act_cx(&tau).unwrap(), prec).unwrap();
    let base = psi_eta(&a)
        .unwrap()
        .pow(3)
        .to_cx(prec)
        .mul(&a.j_cx(&tau).sqrt())
        .mul(&theta_r(&r, &tau, prec).unwrap());
    let numeric = lhs.div(&base);
    assert!(numeric.rel_diff(&root(2, 5).to_cx(prec)) < 1e-25);
    assert!(numeric.rel_diff(&root(3, 5).to_cx(prec)) > 0.5);
}

#[test]
fn theta_character_basics() {
    for r in ["0,4/5", "1/3,1/7", "-1/2,1/2"] {
        assert!(chi_r(&rv(r), &Mat2::identity()).unwrap().is_one());
    }
    assert!(matches!(
        chi_r(&rv("0,4/5"), &Mat2::t(1)),
        Err(Error::NotInGammaR)
    ));
    assert!(matches!(
        chi_r_expanded(&rv("0,4/5"), &Mat2::t(1)),
        Err(Error::NotInGammaR)
    ));
}

#[test]
fn kappa_values() {
    for r in ["0,4/5", "1/3,1/7"] {
        assert!(kappa(&Mat2::identity(), &rv(r)).unwrap().is_one());
    }
}

/// `theta_r(z/j, A tau)` against `psi^3 kappa e(c z^2 / 2j) sqrt(j) theta_r(z, tau)` at `tau = 2i`, `z = 0.3 + 0.1i`.
fn kappa_law_ratio(a: &Mat2, r: &CharVec, prec: u32) -> Cx {
    let tau = Cx::from_f64(prec, 0.0, 2.0);
    let z = Cx::from_f64(prec, 0.3, 0.1);
    let j = a.j_cx(&tau);
    let zj = z.div(&j);
    let half = Float::with_val(prec, 0.5);
    let gauss = z.sqr().div(&j).mul_int(&a.c).mul_real(&half).e();
    let lhs = theta_rz(&a.apply(r), &zj, &a.act_cx(&tau).unwrap(), prec).unwrap();
    let rest = psi_eta(a)
        .unwrap()
        .pow(3)
        .to_cx(prec)
        .mul(&gauss)
        .mul(&j.sqrt())
        .mul(&theta_rz(r, &z, &tau, prec).unwrap());
    lhs.div(&rest)
}

#[test]
fn kappa_squared_form_matches_theta_and_linear_form_does_not() {
    let prec = 128;
    let a = Mat2::new(1, 1, 1, 2);
    let r = rv("1/3,1/5");
    let numeric = kappa_law_ratio(&a, &r, prec);
    assert!(numeric.rel_diff(&kappa(&a, &r).unwrap().to_cx(prec)) < 1e-20);
    assert!(numeric.rel_diff(&kappa_linear_variant(&a, &r).unwrap().to_cx(prec)) > 1e-3);
}

#[test]
fn kappa_inverse_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let a = random_sl2(&mut rng, 30);
        let r = random_charvec(&mut rng, 9);
        let ainv = a.inv();
        let prod = kappa(&a, &ainv.apply(&r))
            .unwrap()
            .mul(&kappa(&ainv, &r).unwrap());
        assert!(prod.is_one(), "A = {a}, r = {r}");
    }
}

#[test]
fn kappa_numeric_law_on_random_matrices() {
    let prec = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..8 {
        let a = random_sl2(&mut rng, 4);
        let r = random_charvec(&mut rng, 6);
        let numeric = kappa_law_ratio(&a, &r, prec);
        assert!(
            numeric.rel_diff(&kappa(&a, &r).unwrap().to_cx(prec)) < 1e-20,
            "A = {a}, r = {r}"
        );
    }
}

proptest! {
    #[test]
    fn dedekind_reciprocity_matches_defining_sum(h in -60i64..60, k in 1i64..60) {
        prop_assert_eq!(dedekind_sum(&int(h), &int(k)).unwrap(), dedekind_sum_direct(h, k));
        prop_assert_eq!(dedekind_sum(&int(h), &int(-k)).unwrap(), dedekind_sum_direct(h, k));
    }

    #[test]
    fn jacobi_matches_euler_criterion(a in -200i64..200, half_n in 0i64..100) {
        let n = 2 * half_n + 1;
        prop_assert_eq!(jacobi_symbol(&int(a), &int(n)).unwrap(), jacobi_direct(a, n));
    }

    #[test]
    fn psi_matches_rademacher_phi(seed in any::<u64>()) {
        // For c > 0, log eta(A tau) - log eta(tau) = log sqrt((c tau + d)/i) + pi i Phi(A)/12.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_sl2(&mut rng, 500);
        if a.c < 0 {
            a = a.neg();
        }
        prop_assume!(a.c > 0);
        let phi = phi_rademacher(&a).unwrap();
        let oracle = RootOfUnity::new(phi / Integer::from(24) - Rational::from((1, 8)));
        prop_assert_eq!(psi_eta(&a).unwrap(), oracle);
        prop_assert_eq!(psi_eta(&a.neg()).unwrap(), psi_eta(&a).unwrap().mul(&root(1, 4)));
    }

    #[test]
    fn psi_squared_is_a_character(s1 in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s1);
        let a = random_sl2(&mut rng, 200);
        let b = random_sl2(&mut rng, 200);
        let ab = &a * &b;
        prop_assert_eq!(psi_squared(&ab).unwrap(), psi_squared(&a).unwrap().mul(&psi_squared(&b).unwrap()));
        prop_assert_eq!(psi_squared(&a).unwrap().pow(12), RootOfUnity::one());
    }

    #[test]
    fn chi_r_character_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_charvec(&mut rng, 9);
        let a = random_gamma_r(&mut rng, &r, false);
        let b = random_gamma_r(&mut rng, &r, false);
        let ca = chi_r(&r, &a).unwrap();
        prop_assert_eq!(&ca, &chi_r_expanded(&r, &a).unwrap());
        prop_assert_eq!(chi_r(&r, &(&a * &b)).unwrap(), ca.mul(&chi_r(&r, &b).unwrap()));

        let m = CharVec::new(rand::Rng::gen_range(&mut rng, -3i64..=3), rand::Rng::gen_range(&mut rng, -3i64..=3));
        prop_assert_eq!(chi_r(&(&r + &m), &a).unwrap(), ca.clone());

        let n = r.denominator();
        let n_prime = if n.is_odd() { n } else { n * 2u32 };
        prop_assert!(n_prime.is_divisible(&ca.order()), "order {} vs N' {}", ca.order(), n_prime);
    }

    #[test]
    fn kappa_is_a_cocycle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sl2(&mut rng, 40);
        let b = random_sl2(&mut rng, 40);
        let r = random_charvec(&mut rng, 9);
        let lhs = kappa(&(&a * &b), &r).unwrap();
        let rhs = kappa(&a, &b.apply(&r)).unwrap().mul(&kappa(&b, &r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
