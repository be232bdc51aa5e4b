use proptest::prelude::*;
use rmshin::special::{
    cyclic_qdl, dilog, dsine, e_exp, eta, eta_product, pi, qpoch_finite, qpoch_inf, theta1, varpi,
    Cx,
};
use rmshin::Error;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 128;

fn c(re: f64, im: f64) -> Cx {
    Cx::from_f64(P, re, im)
}

#[test]
fn exponential_values() {
    assert!(e_exp(&c(0.0, 0.0), P).rel_diff(&Cx::one(P)) < 1e-36);
    assert!(e_exp(&c(0.5, 0.0), P).rel_diff(&Cx::one(P).neg()) < 1e-36);
    let s = Float::with_val(P, 2).sqrt().recip();
    let expect = Cx::new(s.clone(), s);
    assert!(e_exp(&c(0.125, 0.0), P).rel_diff(&expect) < 1e-36);
}

#[test]
fn finite_pochhammer() {
    let w = c(0.3, 0.2);
    let q = c(0.1, 0.4);
    assert!(qpoch_finite(&w, &q, 0, P).unwrap().rel_diff(&Cx::one(P)) < 1e-36);
    assert!(
        qpoch_finite(&w, &q, 1, P)
            .unwrap()
            .rel_diff(&Cx::one(P).sub(&w))
            < 1e-36
    );
    let inv = Cx::one(P).sub(&w.div(&q)).recip();
    assert!(qpoch_finite(&w, &q, -1, P).unwrap().rel_diff(&inv) < 1e-36);
    assert!(matches!(qpoch_finite(&q, &q, -1, P), Err(Error::Pole(_))));
}

#[test]
fn infinite_pochhammer() {
    let q = c(0.1, 0.0);
    assert!(
        qpoch_inf(&c(0.0, 0.0), &q, P)
            .unwrap()
            .rel_diff(&Cx::one(P))
            < 1e-36
    );
    let brute = (0..200).fold(1.0f64, |acc, k| acc * (1.0 - 0.1 * 0.1f64.powi(k)));
    let v = qpoch_inf(&c(0.1, 0.0), &q, P).unwrap();
    assert!((v.re.to_f64() - brute).abs() < 1e-15);
    assert!(v.re.to_f64() > 0.89 && v.re.to_f64() < 0.8901);
    assert!(qpoch_inf(&c(0.1, 0.0), &c(1.0, 0.0), P).is_err());
}

#[test]
fn double_sine_values() {
    let one = Cx::one(P);
    let w1 = c(3f64.sqrt(), 0.0);
    let mid = w1.add(&one).scale_f64(0.5);
    assert!(dsine(&mid, &w1, &one, P).unwrap().rel_diff(&one) < 1e-35);
    assert!(dsine(&c(0.0, 0.0), &one, &one, P).is_err());
    let half = c(0.5, 0.0);
    let sqrt2 = Cx::from_real(&Float::with_val(P, 2).sqrt());
    assert!(dsine(&half, &one, &one, P).unwrap().rel_diff(&sqrt2) < 1e-35);
}

/// `-int_0^x pi t cot(pi t) dt` by composite Simpson in `f64`.
fn log_dsine_unit_periods(x: f64) -> f64 {
    let f = |t: f64| {
        if t == 0.0 {
            1.0
        } else {
            std::f64::consts::PI * t / (std::f64::consts::PI * t).tan()
        }
    };
    let n = 2000;
    let h = x / n as f64;
    let mut s = f(0.0) + f(x);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    -s * h / 3.0
}

#[test]
fn double_sine_with_unit_periods_matches_cotangent_integral() {
    let one = Cx::one(P);
    for x in [-0.8, -0.45, -0.1, 0.2, 0.55, 0.9] {
        let v = dsine(&c(1.0 + x, 0.0), &one, &one, P).unwrap();
        let oracle = log_dsine_unit_periods(x).exp();
        assert!(
            (v.re.to_f64() - oracle).abs() < 1e-9 * oracle,
            "x = {x}: {} vs {oracle}",
            v.re.to_f64()
        );
        assert!(v.im.to_f64().abs() < 1e-30);
    }
}

#[test]
fn cyclic_dilogarithm() {
    let w = c(0.3, -0.2);
    assert!(cyclic_qdl(1, 0, &w, P).unwrap().rel_diff(&Cx::one(P)) < 1e-36);
    assert!(
        cyclic_qdl(2, 1, &w, P)
            .unwrap()
            .rel_diff(&Cx::one(P).add(&w))
            < 1e-36
    );
    assert!(
        cyclic_qdl(3, 1, &c(0.0, 0.0), P)
            .unwrap()
            .rel_diff(&Cx::one(P))
            < 1e-36
    );
    assert!(matches!(
        cyclic_qdl(2, 1, &c(-1.0, 0.0), P),
        Err(Error::Pole(_))
    ));
}

#[test]
fn dilogarithm_at_one_half() {
    let ln2 = Float::with_val(P, 2).ln();
    let expect =
        Float::with_val(P, pi(P).square() / 12u32) - Float::with_val(P, ln2.square() / 2u32);
    let v = dilog(&c(0.5, 0.0), P).unwrap();
    assert!(v.rel_diff(&Cx::from_real(&expect)) < 1e-35);
}

#[test]
fn eta_at_i() {
    // eta(i) = Gamma(1/4) / (2 pi^(3/4)).
    let g = Float::with_val(P, 0.25).gamma();
    let expect = g / (Float::with_val(P, pi(P).pow(0.75f64)) * 2u32);
    assert!(eta(&Cx::i(P), P).unwrap().rel_diff(&Cx::from_real(&expect)) < 1e-35);
}

fn upper() -> impl Strategy<Value = Cx> {
    (-0.5f64..0.5, 0.3f64..2.0).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eta_series_matches_product(tau in upper()) {
        prop_assert!(eta(&tau, P).unwrap().rel_diff(&eta_product(&tau, P).unwrap()) < 1e-33);
    }

    #[test]
    fn eta_s_transformation(tau in upper()) {
        let lhs = eta(&Cx::one(P).neg().div(&tau), P).unwrap();
        let rhs = tau.mul_i().neg().sqrt().mul(&eta(&tau, P).unwrap());
        prop_assert!(lhs.rel_diff(&rhs) < 1e-32);
    }

    #[test]
    fn theta1_is_odd_and_quasi_periodic(tau in upper(), zr in -0.4f64..0.4, zi in -0.2f64..0.2) {
        let z = c(zr, zi);
        let t = theta1(&z, &tau, P).unwrap();
        prop_assert!(theta1(&z.neg(), &tau, P).unwrap().rel_diff(&t.neg()) < 1e-30);
        prop_assert!(theta1(&z.add_int(&1.into()), &tau, P).unwrap().rel_diff(&t.neg()) < 1e-30);
    }

    #[test]
    fn varpi_shift_relation(tau in upper(), zr in -0.4f64..0.4, zi in -0.2f64..0.2) {
        // (w; q)_inf = (1 - w) (w q; q)_inf
        let z = c(zr, zi);
        let lhs = varpi(&z, &tau, P).unwrap();
        let rhs = Cx::one(P).sub(&e_exp(&z, P)).mul(&varpi(&z.add(&tau), &tau, P).unwrap());
        prop_assert!(lhs.rel_diff(&rhs) < 1e-32);
    }

    #[test]
    fn double_sine_reflection_and_scaling(x in 0.05f64..1.6, y in -0.3f64..0.3, w in 0.4f64..2.5, s in 0.3f64..3.0) {
        let one = Cx::one(P);
        let w1 = c(w, 0.0);
        let z = c(x, y);
        let v = dsine(&z, &w1, &one, P).unwrap();
        let refl = dsine(&w1.add(&one).sub(&z), &w1, &one, P).unwrap();
        prop_assert!(v.mul(&refl).rel_diff(&one) < 1e-30);
        let scaled = dsine(&z.scale_f64(s), &w1.scale_f64(s), &c(s, 0.0), P).unwrap();
        prop_assert!(scaled.rel_diff(&v) < 1e-30);
    }
}
