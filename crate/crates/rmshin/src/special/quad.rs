//! Double exponential quadrature on half-lines.

use rug::Float;

use super::complex::{pi, pow2, Cx};
use crate::error::{Error, Result};

/// Integrates `f` over `[t0, inf)` with the exp-sinh substitution
/// `t = t0 + exp(pi/2 sinh u)`, halving the step until successive levels agree.
///
/// `f` must decay at infinity at least like `1/t^2` and be smooth on the
/// closed half-line. The result is accurate to roughly `2^-prec` in absolute terms.
pub fn exp_sinh<F>(t0: &Float, prec: u32, mut f: F) -> Result<Cx>
where
    F: FnMut(&Float) -> Cx,
{
    let half_pi = pi(prec) / 2u32;
    let negligible = pow2(prec, -(prec as i32) - 8);
    let target = pow2(prec, -((prec as i32) * 3 / 5) - 4);
    let u_cap = 8.0f64;

    // Contribution w(u) f(t(u)) without the step factor.
    let mut term = |u: &Float| -> Option<Cx> {
        let (sh, ch) = u.clone().sinh_cosh(Float::new(prec));
        let e = Float::with_val(prec, &sh * &half_pi).exp();
        if !e.is_finite() {
            return None;
        }
        let t = Float::with_val(prec, t0 + &e);
        let w = Float::with_val(prec, &half_pi * &ch) * &e;
        let v = f(&t).mul_real(&w);
        v.is_finite().then_some(v)
    };

    // Sum over u = (2j + 1) h or u = j h outward in both directions.
    let mut sweep = |h: &Float, offset: bool| -> Result<Cx> {
        let mut acc = Cx::zero(prec);
        if !offset {
            acc = term(&Float::new(prec))
                .ok_or_else(|| Error::Numeric("quadrature overflow".into()))?;
        }
        for sign in [1i32, -1] {
            let mut quiet = 0;
            let mut j: u64 = 0;
            loop {
                let m = if offset { 2 * j + 1 } else { j + 1 };
                let u = Float::with_val(prec, h * m) * sign;
                if u.to_f64().abs() > u_cap {
                    break;
                }
                match term(&u) {
                    Some(v) => {
                        if v.abs() < negligible {
                            quiet += 1;
                            if quiet >= 3 {
                                break;
                            }
                        } else {
                            quiet = 0;
                        }
                        acc = acc.add(&v);
                    }
                    None => break,
                }
                j += 1;
            }
        }
        Ok(acc)
    };

    let mut h = Float::with_val(prec, 0.5);
    let mut sum = sweep(&h, false)?;
    let mut est = sum.mul_real(&h);
    for level in 1..=16 {
        h /= 2u32;
        let extra = sweep(&h, true)?;
        sum = sum.add(&extra);
        let next = sum.mul_real(&h);
        let diff = next.sub(&est).abs();
        est = next;
        if level >= 3 && diff < target {
            return Ok(est);
        }
    }
    Err(Error::Numeric(
        "exp-sinh quadrature did not converge".into(),
    ))
}
