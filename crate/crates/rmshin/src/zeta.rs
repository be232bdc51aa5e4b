//! Tangedal's double sine invariants `U^(1)`, `U^(2)` and the differenced partial
//! zeta derivative `Z'(0)` attached to a pair `(r, beta)`.
//!
//! Ideal classes are never built; every quantity is keyed by a pair `(r, beta)`,
//! which is first moved to a reduced pair.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::cocycle::shin_rm;
use crate::error::{Error, Result};
use crate::modgroup::{cycle_data, reduce_pair, stabilizer_generator, CharVec, CycleData, Mat2};
use crate::qfield::{fundamental_tp_unit, QuadVal};
use crate::special::{dsine, fmt_float, print_digits, Cx};

const GUARD: u32 = 24;

/// The two real embeddings of the quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Embedding {
    /// The identity embedding, in which `beta > 1`.
    First,
    /// The conjugate embedding, in which `0 < beta' < 1` for reduced `beta`.
    Second,
}

impl Embedding {
    pub fn from_index(j: u8) -> Result<Embedding> {
        match j {
            1 => Ok(Embedding::First),
            2 => Ok(Embedding::Second),
            _ => Err(Error::Domain("embedding index must be 1 or 2".into())),
        }
    }

    fn apply(self, x: &QuadVal) -> QuadVal {
        match self {
            Embedding::First => x.clone(),
            Embedding::Second => x.conj(),
        }
    }
}

/// Cycle data of the reduced pair equivalent to `(r, beta)`.
pub fn reduced_cycle(r: &CharVec, beta: &QuadVal) -> Result<CycleData> {
    if beta.is_rational() {
        return Err(Error::Domain(
            "beta must be an irrational real quadratic number".into(),
        ));
    }
    let (rr, br, _) = reduce_pair(r, beta)?;
    cycle_data(&rr, &br)
}

/// `U^(j) = prod_n Sin_2(rho_j(w_n), rho_j(beta_n))` over the `k ell` terms of the cycle.
pub fn tangedal_u(r: &CharVec, beta: &QuadVal, embedding: Embedding, prec: u32) -> Result<Float> {
    let cd = reduced_cycle(r, beta)?;
    Ok(tangedal_u_cycle(&cd, embedding, prec)?.0)
}

/// `U^(j)` of a cycle together with its individual factors.
pub fn tangedal_u_cycle(
    cd: &CycleData,
    embedding: Embedding,
    prec: u32,
) -> Result<(Float, Vec<Float>)> {
    let wp = prec + GUARD;
    let one = Cx::one(wp);
    let mut acc = Float::with_val(wp, 1);
    let mut factors = Vec::with_capacity(cd.len());
    for (b, w) in cd.beta_n.iter().zip(&cd.w_n) {
        let bj = embedding.apply(b).to_float(wp);
        let wj = embedding.apply(w).to_float(wp);
        let v = dsine(&Cx::from_real(&wj), &Cx::from_real(&bj), &one, wp)?;
        acc *= &v.re;
        factors.push(Float::with_val(prec, &v.re));
    }
    Ok((Float::with_val(prec, acc), factors))
}

/// The positive unit of negative norm generating the units of the multiplier ring of
/// `beta Z + Z`, when one exists.
pub fn negative_norm_unit(beta: &QuadVal) -> Result<Option<QuadVal>> {
    let eps = fundamental_tp_unit(beta)?;
    // A unit u with N(u) = -1 and u^2 = eps = a + b sqrt(D) has p^2 = (a-1)/2 and D q^2 = (a+1)/2.
    let a = eps.rational_part();
    let b = eps.sqrt_part();
    let d = Rational::from(beta.d());
    let p2 = Rational::from(&a - 1u32) / 2u32;
    let q2 = Rational::from(&a + 1u32) / 2u32 / d;
    let (Some(p), Some(_)) = (rational_sqrt(&p2), rational_sqrt(&q2)) else {
        return Ok(None);
    };
    if p == 0 {
        return Ok(None);
    }
    let q = b / Rational::from(&p * 2u32);
    let den = p.denom().clone().lcm(q.denom());
    let pn = Rational::from(&p * &den).numer().clone();
    let qn = Rational::from(&q * &den).numer().clone();
    let u = QuadVal::new(pn, qn, beta.d().clone(), den)?;
    let u = if u.is_positive() { u } else { -u };
    if u.norm() != -1 || multiplication_matrix(&u, beta).is_none() {
        return Ok(None);
    }
    Ok(Some(u))
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if *x < 0 {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// The integral matrix `M` with `u (beta, 1)^T = M (beta, 1)^T`, if `u` multiplies `beta Z + Z` into itself.
pub fn multiplication_matrix(u: &QuadVal, beta: &QuadVal) -> Option<Mat2> {
    let coords = |x: &QuadVal| -> Option<(Integer, Integer)> {
        let c = x.sqrt_part() / beta.sqrt_part();
        let dd = x.rational_part() - Rational::from(&c * &beta.rational_part());
        if *c.denom() != 1 || *dd.denom() != 1 {
            return None;
        }
        Some((c.numer().clone(), dd.numer().clone()))
    };
    let (a, b) = coords(&(u * beta))?;
    let (c, d) = coords(u)?;
    Some(Mat2::new(a, b, c, d))
}

/// How `t` was decided.
#[derive(Clone, Debug, Serialize)]
pub struct TWitness {
    pub t: u8,
    pub method: String,
    /// For `t = 1`, the matrix `B0 P^j` of determinant `-1` that fixes `(r, beta)`.
    pub matrix: Option<Mat2>,
    pub unit: Option<String>,
}

/// Decides `t` in `{1, 2}` with `n = 2/t`: `t = 1` exactly when some unit `v = 1 (mod m)`
/// has `rho_1(v) < 0 < rho_2(v)`. Such units are `-u eps^j` with `u` the positive unit of
/// negative norm, and `v` fixes the class of `(r, beta)` exactly when `B0 P^j` fixes `r` modulo
/// `Z^2`, where `B0` is the matrix of `u` and `P` the primitive stabilizer of `beta`.
pub fn determine_t(r: &CharVec, beta: &QuadVal) -> Result<TWitness> {
    if beta.is_rational() {
        return Err(Error::Domain(
            "beta must be an irrational real quadratic number".into(),
        ));
    }
    let Some(u) = negative_norm_unit(beta)? else {
        return Ok(TWitness {
            t: 2,
            method: "fundamental unit has norm +1".into(),
            matrix: None,
            unit: Some(fundamental_tp_unit(beta)?.to_string()),
        });
    };
    let b0 = multiplication_matrix(&u, beta).expect("unit preserves the lattice");
    let (_, p, k) = stabilizer_generator(r, beta)?;
    let mut m = b0;
    for j in 0..k {
        if m.fixes_mod_z2(r) {
            return Ok(TWitness {
                t: 1,
                method: format!("negative norm unit matrix B0 P^{j} fixes r"),
                matrix: Some(m),
                unit: Some(u.to_string()),
            });
        }
        m = &m * &p;
    }
    Ok(TWitness {
        t: 2,
        method: "negative norm unit exists but no B0 P^j fixes r".into(),
        matrix: None,
        unit: Some(u.to_string()),
    })
}

/// `Z'(0)` for the class of `(r, beta)` with the invariants that produce it.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    #[serde(serialize_with = "ser_float")]
    pub u1: Float,
    #[serde(serialize_with = "ser_float")]
    pub u2: Float,
    /// `-log(U1 U2)`, the derivative differenced at both infinite places.
    #[serde(serialize_with = "ser_float")]
    pub zprime_both: Float,
    /// `-t log U1`, the derivative with the second infinite place in the modulus.
    #[serde(serialize_with = "ser_float")]
    pub zprime_inf2: Float,
    pub t: u8,
    pub n: u8,
    pub method_t: String,
    /// Whether `U2` is one within tolerance whenever `t = 1`.
    pub u2_check: bool,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_float(x, print_digits(x.prec())))
}

impl ZetaReport {
    /// `exp(n Z')`, which equals `samech^r[beta]`.
    pub fn exp_n_zprime(&self) -> Float {
        Float::with_val(self.u1.prec(), &self.zprime_inf2 * self.n as u32).exp()
    }
}

/// The full zeta report of `(r, beta)`. `t_override` replaces the automatic choice of `t`.
pub fn z_prime(
    r: &CharVec,
    beta: &QuadVal,
    t_override: Option<u8>,
    prec: u32,
) -> Result<ZetaReport> {
    if r.is_integral() {
        return Err(Error::Domain("r must not be integral".into()));
    }
    let wp = prec + GUARD;
    let cd = reduced_cycle(r, beta)?;
    let (u1, _) = tangedal_u_cycle(&cd, Embedding::First, wp)?;
    let (u2, _) = tangedal_u_cycle(&cd, Embedding::Second, wp)?;
    let (t, method) = match t_override {
        Some(t @ (1 | 2)) => (t, "override".to_string()),
        Some(_) => return Err(Error::Domain("t must be 1 or 2".into())),
        None => {
            let w = determine_t(r, beta)?;
            (w.t, w.method)
        }
    };
    let tol = Float::with_val(wp, Float::i_exp(1, 16 - prec as i32));
    let u2_check = t == 2 || Float::with_val(wp, &u2 - 1u32).abs() < tol;
    let zprime_both = -Float::with_val(wp, &u1 * &u2).ln();
    let zprime_inf2 = -Float::with_val(wp, u1.clone().ln() * t as u32);
    Ok(ZetaReport {
        u1: Float::with_val(prec, u1),
        u2: Float::with_val(prec, u2),
        zprime_both: Float::with_val(prec, zprime_both),
        zprime_inf2: Float::with_val(prec, zprime_inf2),
        t,
        n: 2 / t,
        method_t: method,
        u2_check,
    })
}

/// The distinct reduced pairs in the cycle of `(r, beta)`.
pub fn reduced_representatives(r: &CharVec, beta: &QuadVal) -> Result<Vec<(CharVec, QuadVal)>> {
    let cd = reduced_cycle(r, beta)?;
    let mut out: Vec<(CharVec, QuadVal)> = Vec::new();
    for (rn, bn) in cd.r_n.iter().zip(&cd.beta_n) {
        let pair = (rn.clone(), bn.clone());
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    Ok(out)
}

/// Relative deviation between `exp(n Z')` and the samech value from the cocycle module.
pub fn samech_consistency(r: &CharVec, beta: &QuadVal, prec: u32) -> Result<Float> {
    let z = z_prime(r, beta, None, prec)?;
    let v = shin_rm(r, beta, prec)?;
    let e = z.exp_n_zprime();
    Ok(Float::with_val(prec, (e - &v.samech) / &v.samech).abs())
}
