//! Exact multiplier systems: Dedekind sums, Rademacher's `Phi`, the eta
//! multiplier `psi`, the theta character `chi_r` and the cocycle `kappa`.
//!
//! Every value is a root of unity `e(x)` with `x` an exact rational kept in `[0, 1)`.

use std::fmt;

use rug::ops::DivRounding;
use rug::{Complete, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modgroup::{CharVec, Mat2};
use crate::special::Cx;

/// The root of unity `e(exponent)` with `0 <= exponent < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    exponent: Rational,
}

impl RootOfUnity {
    pub fn new(x: Rational) -> RootOfUnity {
        let fl = x.numer().clone().div_floor(x.denom());
        RootOfUnity { exponent: x - fl }
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity {
            exponent: Rational::new(),
        }
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        RootOfUnity::new((&self.exponent + &o.exponent).complete())
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new((-&self.exponent).complete())
    }

    pub fn pow(&self, n: i64) -> RootOfUnity {
        RootOfUnity::new((&self.exponent * Integer::from(n)).complete())
    }

    /// Multiplicative order, the denominator of the exponent.
    pub fn order(&self) -> Integer {
        self.exponent.denom().clone()
    }

    pub fn to_cx(&self, prec: u32) -> Cx {
        Cx::e_rat(&self.exponent, prec)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.exponent)
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.exponent.to_string().serialize(s)
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`, by quadratic reciprocity.
pub fn jacobi_symbol(a: &Integer, n: &Integer) -> Result<i32> {
    if *n <= 0 || n.is_even() {
        return Err(Error::Domain(
            "Jacobi symbol needs an odd positive modulus".into(),
        ));
    }
    let mut a = a.clone().div_rem_euc(n.clone()).1;
    let mut n = n.clone();
    let mut t = 1;
    while a != 0 {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_u(8);
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_u(4) == 3 && n.mod_u(4) == 3 {
            t = -t;
        }
        a = a.div_rem_euc(n.clone()).1;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Dedekind sum `s(h, k) = sum_{j=1}^{|k|-1} ((j/k)) ((h j/k))`, computed by reciprocity.
pub fn dedekind_sum(h: &Integer, k: &Integer) -> Result<Rational> {
    if *k == 0 {
        return Err(Error::Domain("Dedekind sum needs a nonzero modulus".into()));
    }
    let k = k.clone().abs();
    let g = h.clone().gcd(&k);
    let mut k = k / &g;
    let mut h = (h / &g).complete().div_rem_euc(k.clone()).1;
    let mut acc = Rational::new();
    let mut sign = 1i32;
    // s(h,k) + s(k,h) = (h/k + k/h + 1/(hk))/12 - 1/4 for coprime h, k > 0.
    while h != 0 {
        let hk = (&h * &k).complete();
        let recip = Rational::from((h.clone().square() + k.clone().square() + 1u32, hk * 12u32))
            - Rational::from((1, 4));
        if sign > 0 {
            acc += recip;
        } else {
            acc -= recip;
        }
        sign = -sign;
        let next_h = k.div_rem_euc(h.clone()).1;
        k = h;
        h = next_h;
    }
    Ok(acc)
}

fn sgn(x: &Integer) -> i32 {
    match x.cmp0() {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn check_sl2(a: &Mat2) -> Result<()> {
    if a.det() != 1 {
        return Err(Error::Domain("matrix must have determinant 1".into()));
    }
    Ok(())
}

/// Rademacher's `Phi(A)`.
pub fn phi_rademacher(a: &Mat2) -> Result<Rational> {
    check_sl2(a)?;
    if a.c == 0 {
        return Ok(Rational::from((a.b.clone(), a.d.clone())));
    }
    let s = dedekind_sum(&a.d, &a.c.clone().abs())?;
    let head = Rational::from(((&a.a + &a.d).complete(), a.c.clone()));
    Ok(head - s * Integer::from(12 * sgn(&a.c)))
}

fn rat(n: Integer, d: i64) -> Rational {
    Rational::from((n, Integer::from(d)))
}

/// Eta multiplier `psi(A, sqrt(j_A))` with the principal square root:
/// `eta(A tau) = psi * sqrt(c tau + d) * eta(tau)`.
pub fn psi_eta(a: &Mat2) -> Result<RootOfUnity> {
    check_sl2(a)?;
    if a.c < 0 {
        // psi(A, eps) = i psi(-A, i eps), and i sqrt(j_A) is the principal root of j_{-A}.
        return Ok(psi_eta(&a.neg())?.mul(&RootOfUnity::new(Rational::from((1, 4)))));
    }
    if a.c == 0 {
        // psi sqrt(d) = e(sgn(d) b / 24), with sqrt(-1) = i.
        let x = rat((&a.b * sgn(&a.d)).complete(), 24);
        return Ok(if a.d > 0 {
            RootOfUnity::new(x)
        } else {
            RootOfUnity::new(x - Rational::from((1, 4)))
        });
    }
    // c > 0: psi sqrt(c tau + d) / sqrt(-i (c tau + d)) = X, and
    // sqrt(-i (c tau + d)) = e(-1/8) sqrt(c tau + d).
    let (sym, x) = if a.c.is_odd() {
        let sym = jacobi_symbol(&a.d, &a.c)?;
        let one_m_c2 = Integer::from(1) - a.c.clone().square();
        let num = (&a.b * &a.d).complete() * one_m_c2 + &a.c * (&a.a + &a.d).complete();
        let x = rat(Integer::from(1) - &a.c, 8) + rat(num, 24);
        (sym, x)
    } else {
        let sym = jacobi_symbol(&a.c, &a.d.clone().abs())?;
        let one_m_d2 = Integer::from(1) - a.d.clone().square();
        let num = (&a.a * &a.c).complete() * one_m_d2 + &a.d * (&a.b - &a.c).complete();
        let x = rat(a.d.clone(), 8) + rat(num, 24);
        (sym, x)
    };
    let mut x = x - Rational::from((1, 8));
    if sym == -1 {
        x += Rational::from((1, 2));
    } else if sym == 0 {
        return Err(Error::Domain("degenerate Jacobi symbol".into()));
    }
    Ok(RootOfUnity::new(x))
}

/// `psi^2`, a character of `SL_2(Z)`.
pub fn psi_squared(a: &Mat2) -> Result<RootOfUnity> {
    Ok(psi_eta(a)?.pow(2))
}

/// `chi_r(A) = -(-1)^{delta_2(A r - r)} e(<r, A r>/2)` for `A` in `Gamma_r`.
pub fn chi_r(r: &CharVec, a: &Mat2) -> Result<RootOfUnity> {
    check_sl2(a)?;
    let ar = a.apply(r);
    let diff = &ar - r;
    if !diff.is_integral() {
        return Err(Error::NotInGammaR);
    }
    let even = diff.r1.numer().is_even() && diff.r2.numer().is_even();
    let mut x = r.pairing(&ar) / Integer::from(2);
    if !even {
        // -(-1)^0 = -1
        x += Rational::from((1, 2));
    }
    Ok(RootOfUnity::new(x))
}

/// `chi_r(A)` through the expanded polynomial exponent
/// `((c-d+1) r1 + (-a+b+1) r2 - c d r1^2 + 2(a-1) d r1 r2 - (a-2) b r2^2)/2`.
pub fn chi_r_expanded(r: &CharVec, a: &Mat2) -> Result<RootOfUnity> {
    check_sl2(a)?;
    if !a.fixes_mod_z2(r) {
        return Err(Error::NotInGammaR);
    }
    let (r1, r2) = (&r.r1, &r.r2);
    let one = Integer::from(1);
    let t1 = (&a.c - &a.d).complete() + &one;
    let t2 = (&a.b - &a.a).complete() + &one;
    let x = Rational::from(r1 * &t1) + Rational::from(r2 * &t2)
        - (r1.clone().square() * (&a.c * &a.d).complete())
        + ((r1 * r2).complete() * ((&a.a - &one).complete() * &a.d * 2u32))
        - (r2.clone().square() * ((&a.a - Integer::from(2)) * &a.b));
    Ok(RootOfUnity::new(x / Integer::from(2)))
}

/// `kappa(A, r) = e((c r1 + (d-1) r2 - a c r1^2 - 2 b c r1 r2 - b d r2^2)/2)`.
pub fn kappa(a: &Mat2, r: &CharVec) -> Result<RootOfUnity> {
    check_sl2(a)?;
    let (r1, r2) = (&r.r1, &r.r2);
    let x = Rational::from(r1 * &a.c) + Rational::from(r2 * (&a.d - Integer::from(1)))
        - (r1.clone().square() * (&a.a * &a.c).complete())
        - ((r1 * r2).complete() * (&a.b * &a.c).complete() * Integer::from(2))
        - (r2.clone().square() * (&a.b * &a.d).complete());
    Ok(RootOfUnity::new(x / Integer::from(2)))
}

/// The variant of `kappa` whose last term is linear in `r2`.
pub fn kappa_linear_variant(a: &Mat2, r: &CharVec) -> Result<RootOfUnity> {
    check_sl2(a)?;
    let (r1, r2) = (&r.r1, &r.r2);
    let x = Rational::from(r1 * &a.c) + Rational::from(r2 * (&a.d - Integer::from(1)))
        - (r1.clone().square() * (&a.a * &a.c).complete())
        - ((r1 * r2).complete() * (&a.b * &a.c).complete() * Integer::from(2))
        - Rational::from(r2 * (&a.b * &a.d).complete());
    Ok(RootOfUnity::new(x / Integer::from(2)))
}
