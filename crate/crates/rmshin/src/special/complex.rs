//! Arbitrary precision complex numbers built on MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::{DivRounding, Pow};
use rug::{Float, Integer, Rational};

/// A complex number with real and imaginary parts at a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

/// `pi` at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Cx {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Cx {
        Cx::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Cx {
        Cx::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Cx {
        Cx::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Cx {
        Cx::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(x: &Float) -> Cx {
        Cx::new(x.clone(), Float::new(x.prec()))
    }

    pub fn from_real_prec(x: &Float, prec: u32) -> Cx {
        Cx::new(Float::with_val(prec, x), Float::new(prec))
    }

    pub fn from_int(x: &Integer, prec: u32) -> Cx {
        Cx::new(Float::with_val(prec, x), Float::new(prec))
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Cx {
        Cx::new(Float::with_val(prec, x), Float::new(prec))
    }

    /// Parses `"x"`, `"x+yi"`, `"x-yi"` or `"yi"` with decimal parts.
    pub fn parse(text: &str, prec: u32) -> Option<Cx> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let real = |s: &str| -> Option<Float> {
            let v = Float::parse(s).ok()?;
            Some(Float::with_val(prec, v))
        };
        if let Some(body) = t.strip_suffix('i') {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(&body[i - 1..i], "e" | "E"))
                .map(|(i, _)| i)
                .last();
            let (re, im) = match split {
                Some(i) => (real(&body[..i])?, &body[i..]),
                None => (Float::new(prec), body),
            };
            let im = match im {
                "" | "+" => Float::with_val(prec, 1),
                "-" => Float::with_val(prec, -1),
                s => real(s.strip_prefix('+').unwrap_or(s))?,
            };
            Some(Cx::new(re, im))
        } else {
            Some(Cx::new(real(&t)?, Float::new(prec)))
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Rounds both parts to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Cx {
        Cx::new(
            Float::with_val(prec, &self.re),
            Float::with_val(prec, &self.im),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn add(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx::new(re, im)
    }

    pub fn sqr(&self) -> Cx {
        self.mul(self)
    }

    pub fn div(&self, o: &Cx) -> Cx {
        let p = self.prec();
        if o.im.is_zero() {
            return Cx::new(
                Float::with_val(p, &self.re / &o.re),
                Float::with_val(p, &self.im / &o.re),
            );
        }
        let den =
            Float::with_val(p, o.re.clone().square()) + Float::with_val(p, o.im.clone().square());
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        Cx::new(re / &den, im / &den)
    }

    pub fn recip(&self) -> Cx {
        Cx::one(self.prec()).div(self)
    }

    pub fn neg(&self) -> Cx {
        Cx::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }

    pub fn mul_real(&self, x: &Float) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re * x),
            Float::with_val(p, &self.im * x),
        )
    }

    pub fn div_real(&self, x: &Float) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re / x),
            Float::with_val(p, &self.im / x),
        )
    }

    pub fn add_real(&self, x: &Float) -> Cx {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re + x), self.im.clone())
    }

    pub fn mul_int(&self, n: &Integer) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re * n),
            Float::with_val(p, &self.im * n),
        )
    }

    pub fn add_int(&self, n: &Integer) -> Cx {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re + n), self.im.clone())
    }

    pub fn mul_rat(&self, x: &Rational) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re * x),
            Float::with_val(p, &self.im * x),
        )
    }

    pub fn mul_i(&self) -> Cx {
        Cx::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone())
    }

    pub fn scale_f64(&self, x: f64) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re * x),
            Float::with_val(p, &self.im * x),
        )
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn exp(&self) -> Cx {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        Cx::new(c * &m, s * &m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Cx {
        Cx::new(self.abs().ln(), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.prec();
        if self.is_zero() {
            return Cx::zero(p);
        }
        let r = self.abs();
        if self.re >= 0 {
            let t = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / &t) / 2u32;
            Cx::new(t, im)
        } else {
            let t = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / &t / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            Cx::new(re, im)
        }
    }

    /// Principal power `exp(w log z)`.
    pub fn pow(&self, w: &Cx) -> Cx {
        self.ln().mul(w).exp()
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Cx {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Cx::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    pub fn sinh(&self) -> Cx {
        let p = self.prec();
        let (sh, ch) = Float::with_val(p, &self.re).sinh_cosh(Float::new(p));
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        Cx::new(sh * c, ch * s)
    }

    pub fn sin(&self) -> Cx {
        let p = self.prec();
        let (sh, ch) = Float::with_val(p, &self.im).sinh_cosh(Float::new(p));
        let (s, c) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        Cx::new(s * ch, c * sh)
    }

    /// `e(z) = exp(2 pi i z)`.
    pub fn e(&self) -> Cx {
        let p = self.prec();
        let tp = pi(p) * 2u32;
        self.mul_real(&tp).mul_i().exp()
    }

    /// `e(x)` for a rational `x`, reduced modulo one first.
    pub fn e_rat(x: &Rational, prec: u32) -> Cx {
        let fl = x.numer().clone().div_floor(x.denom());
        let frac = Rational::from(x - fl);
        Cx::from_rational(&frac, prec).e()
    }

    /// Rounds to nearest with the given number of decimal digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = fmt_float(&self.re, digits);
        let im = fmt_float(&self.im, digits);
        match im.strip_prefix('-') {
            Some(abs) => format!("{re} - {abs}i"),
            None => format!("{re} + {im}i"),
        }
    }

    /// `|self - o| / |o|`, or the absolute difference when `o` is zero.
    pub fn rel_diff(&self, o: &Cx) -> Float {
        let d = self.sub(o).abs();
        let n = o.abs();
        if n.is_zero() {
            d
        } else {
            d / n
        }
    }

    /// `self^x` for real `x` through the principal branch.
    pub fn powf(&self, x: &Float) -> Cx {
        self.pow(&Cx::from_real(x))
    }
}

/// Decimal string with `digits` significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Number of printed digits at precision `prec`: `ceil(prec log10 2) - 2`.
pub fn print_digits(prec: u32) -> usize {
    let d = (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize;
    d.saturating_sub(2).max(1)
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(print_digits(self.prec())))
    }
}

macro_rules! cx_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Cx> for &'a Cx {
            type Output = Cx;
            fn $m(self, o: &Cx) -> Cx {
                Cx::$m(self, o)
            }
        }
        impl $tr<Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: Cx) -> Cx {
                Cx::$m(&self, &o)
            }
        }
        impl<'a> $tr<&'a Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: &Cx) -> Cx {
                Cx::$m(&self, o)
            }
        }
    };
}
cx_binop!(Add, add);
cx_binop!(Sub, sub);
cx_binop!(Mul, mul);
cx_binop!(Div, div);

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::neg(self)
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::neg(&self)
    }
}

/// `2^e` as a float, used for tolerances.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 2).pow(e)
}
