use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmshin::cocycle::{random_rm_pair, shin_rm};
use rmshin::modgroup::{reduce_pair, CharVec};
use rmshin::qfield::{parse_quad, QuadVal};
use rmshin::zeta::{
    determine_t, multiplication_matrix, negative_norm_unit, reduced_representatives,
    samech_consistency, tangedal_u, z_prime, Embedding,
};
use rmshin::Error;
use rug::Float;

const P: u32 = 128;

fn q(text: &str) -> QuadVal {
    parse_quad(text).unwrap()
}

fn rv(text: &str) -> CharVec {
    CharVec::parse(text).unwrap()
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(P, a - b).abs() < Float::with_val(P, b.abs_ref()) * tol
}

#[test]
fn first_invariant_is_inverse_root_of_nu() {
    let u1 = tangedal_u(&rv("0,4/5"), &q("sqrt(3)"), Embedding::First, P).unwrap();
    let v = shin_rm(&rv("0,4/5"), &q("sqrt(3)"), P).unwrap();
    let oracle = Float::with_val(P, v.samech.sqrt().recip());
    assert!(close(&u1, &oracle, 1e-35));
    assert!((u1.to_f64() - 0.424835937731915).abs() < 1e-14);
}

#[test]
fn worked_example_zeta() {
    let z = z_prime(&rv("0,4/5"), &q("sqrt(3)"), None, P).unwrap();
    assert_eq!((z.t, z.n), (2, 1));
    let nu = Float::with_val(P, Float::parse("5.54060902431686855379").unwrap());
    assert!(Float::with_val(P, z.exp_n_zprime() - &nu).abs() < 1e-18);
    let both = Float::with_val(P, &z.u1 * &z.u2).ln();
    assert!(Float::with_val(P, &z.zprime_both + &both).abs() < 1e-35);
    let w = determine_t(&rv("0,4/5"), &q("sqrt(3)")).unwrap();
    assert_eq!(w.t, 2);
    assert!(negative_norm_unit(&q("sqrt(3)")).unwrap().is_none());
}

#[test]
fn golden_field_has_negative_norm_witness() {
    let beta = q("(3+sqrt(5))/2");
    let u = negative_norm_unit(&beta).unwrap().unwrap();
    assert_eq!(u, q("(1+sqrt(5))/2"));
    let b0 = multiplication_matrix(&u, &beta).unwrap();
    assert_eq!(b0.det(), -1);
    let w = determine_t(&rv("-1,0"), &beta).unwrap();
    assert_eq!(w.t, 1);
    let u2 = tangedal_u(&rv("-1,0"), &beta, Embedding::Second, P).unwrap();
    assert!(u2.to_f64() > 0.0);
}

#[test]
fn t_one_pair_has_trivial_second_invariant() {
    let z = z_prime(&rv("0,1/3"), &q("(1+sqrt(13))/2"), None, P).unwrap();
    assert_eq!((z.t, z.n), (1, 2));
    assert!(z.u2_check);
    assert!(Float::with_val(P, &z.u2 - 1u32).abs() < 1e-35);
}

#[test]
fn integral_characteristics_are_rejected() {
    assert!(matches!(
        z_prime(&rv("1,0"), &q("sqrt(3)"), None, P),
        Err(Error::Domain(_))
    ));
    assert!(z_prime(&rv("0,1/3"), &q("sqrt(3)"), Some(3), P).is_err());
    assert!(tangedal_u(
        &rv("0,1/3"),
        &QuadVal::from_int(2, &3.into()),
        Embedding::First,
        P
    )
    .is_err());
}

#[test]
fn negating_r_negates_the_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..6 {
        let (r, beta) = random_rm_pair(&mut rng, 300, 6, 10);
        let a = z_prime(&r, &beta, None, P).unwrap();
        let b = z_prime(&r.neg(), &beta, None, P).unwrap();
        assert_eq!(a.t, b.t);
        let sum = Float::with_val(P, &a.zprime_inf2 + &b.zprime_inf2);
        assert!(sum.abs() < 1e-30, "r = {r}, beta = {beta}");
        let prod = Float::with_val(P, &a.u1 * &b.u1);
        assert!(Float::with_val(P, prod - 1u32).abs() < 1e-30);
    }
}

#[test]
fn t_one_always_has_unit_second_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut seen = 0;
    for _ in 0..60 {
        let (r, beta) = random_rm_pair(&mut rng, 400, 6, 10);
        let z = z_prime(&r, &beta, None, P).unwrap();
        if z.t == 1 {
            seen += 1;
            assert!(z.u2_check, "r = {r}, beta = {beta}, U2 = {}", z.u2);
        }
    }
    assert!(seen > 0);
}

#[test]
fn derivative_is_independent_of_reduced_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..5 {
        let (r, beta) = random_rm_pair(&mut rng, 300, 5, 10);
        let base = z_prime(&r, &beta, None, P).unwrap();
        for (rr, br) in reduced_representatives(&r, &beta).unwrap() {
            let z = z_prime(&rr, &br, None, P).unwrap();
            let d = Float::with_val(P, &z.zprime_both - &base.zprime_both).abs();
            assert!(d < 1e-30);
            assert!(close(&z.u1, &base.u1, 1e-30));
        }
        let (rr, br, _) = reduce_pair(&r, &beta).unwrap();
        assert!(reduced_representatives(&r, &beta)
            .unwrap()
            .contains(&(rr, br)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn exp_of_derivative_is_samech(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, beta) = random_rm_pair(&mut rng, 400, 6, 12);
        let dev = samech_consistency(&r, &beta, P).unwrap();
        prop_assert!(dev < Float::with_val(P, Float::i_exp(1, 16 - P as i32)), "r = {}, beta = {}", r, beta);
    }
}
