//! Exact arithmetic in real quadratic fields.
//!
//! Elements are stored as `(p + q*sqrt(D))/s` with `D` squarefree and
//! `gcd(p, q, s) = 1`. Comparisons, floors and ceilings are decided with
//! integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::{DivRounding, Pow};
use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};

/// An element `(p + q*sqrt(d))/s` of the real quadratic field `Q(sqrt(d))`.
///
/// Rational values carry `q = 0`; their `d` is kept so that they can mix with
/// irrational elements of the same field. Arithmetic between two irrational
/// values from different fields panics.
#[derive(Clone, Debug)]
pub struct QuadVal {
    d: Integer,
    p: Integer,
    q: Integer,
    s: Integer,
}

/// A real root of a primitive integral quadratic `a x^2 + b x + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPolyRoot {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    /// `true` selects the larger real root.
    pub larger: bool,
}

/// Splits `n > 0` as `f^2 * m` with `m` squarefree, returning `(f, m)`.
pub fn squarefree_split(n: &Integer) -> (Integer, Integer) {
    assert!(*n > 0, "squarefree_split needs a positive integer");
    let mut rest = n.clone();
    let mut f = Integer::from(1);
    let mut core = Integer::from(1);
    let mut p = Integer::from(2);
    while (&p * &p).complete() <= rest {
        let mut e = 0u32;
        while rest.is_divisible(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            f *= p.clone().pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += 1;
    }
    core *= rest;
    (f, core)
}

impl QuadVal {
    /// Builds `(p + q*sqrt(d))/s`, normalizing `d` to be squarefree.
    pub fn new(p: Integer, q: Integer, d: Integer, s: Integer) -> Result<QuadVal> {
        if s == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        if d <= 0 {
            return Err(Error::Domain("not real quadratic".into()));
        }
        let (f, d0) = squarefree_split(&d);
        if d0 == 1 {
            return Err(Error::Domain("not real quadratic".into()));
        }
        Ok(QuadVal::raw(p, q * f, d0, s))
    }

    /// Builds a value whose `d` is already squarefree and greater than one.
    fn raw(p: Integer, q: Integer, d: Integer, s: Integer) -> QuadVal {
        let mut v = QuadVal { d, p, q, s };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.s < 0 {
            self.p = -std::mem::take(&mut self.p);
            self.q = -std::mem::take(&mut self.q);
            self.s = -std::mem::take(&mut self.s);
        }
        let g = self.p.clone().gcd(&self.q).gcd(&self.s);
        if g > 1 {
            self.p /= &g;
            self.q /= &g;
            self.s /= &g;
        }
    }

    /// The rational number `x` viewed inside `Q(sqrt(d))`.
    pub fn from_rational(x: &Rational, d: &Integer) -> QuadVal {
        QuadVal::raw(
            x.numer().clone(),
            Integer::new(),
            d.clone(),
            x.denom().clone(),
        )
    }

    pub fn from_int(x: impl Into<Integer>, d: &Integer) -> QuadVal {
        QuadVal::raw(x.into(), Integer::new(), d.clone(), Integer::from(1))
    }

    /// `sqrt(d)` for squarefree `d > 1`.
    pub fn sqrt_of(d: i64) -> Result<QuadVal> {
        QuadVal::new(
            Integer::new(),
            Integer::from(1),
            Integer::from(d),
            Integer::from(1),
        )
    }

    pub fn d(&self) -> &Integer {
        &self.d
    }
    pub fn p(&self) -> &Integer {
        &self.p
    }
    pub fn q(&self) -> &Integer {
        &self.q
    }
    pub fn s(&self) -> &Integer {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    /// Rational part `p/s`.
    pub fn rational_part(&self) -> Rational {
        Rational::from((self.p.clone(), self.s.clone()))
    }

    /// Coefficient of `sqrt(d)`, namely `q/s`.
    pub fn sqrt_part(&self) -> Rational {
        Rational::from((self.q.clone(), self.s.clone()))
    }

    /// Returns the value as a rational, or `None` when irrational.
    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational_part())
    }

    /// The nontrivial Galois conjugate.
    pub fn conj(&self) -> QuadVal {
        QuadVal {
            d: self.d.clone(),
            p: self.p.clone(),
            q: (-&self.q).complete(),
            s: self.s.clone(),
        }
    }

    pub fn norm(&self) -> Rational {
        let num = self.p.clone().square() - self.q.clone().square() * &self.d;
        Rational::from((num, self.s.clone().square()))
    }

    pub fn trace(&self) -> Rational {
        Rational::from((self.p.clone() * 2u32, self.s.clone()))
    }

    /// `(norm, trace)`.
    pub fn norm_trace(&self) -> (Rational, Rational) {
        (self.norm(), self.trace())
    }

    fn field_with(&self, other: &QuadVal) -> Integer {
        if self.q == 0 {
            other.d.clone()
        } else if other.q == 0 || self.d == other.d {
            self.d.clone()
        } else {
            panic!(
                "quadratic values from different fields: sqrt({}) and sqrt({})",
                self.d, other.d
            )
        }
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp0();
        let sq = self.q.cmp0();
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        let p2 = self.p.clone().square();
        let q2d = self.q.clone().square() * &self.d;
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => unreachable!("d is not a square"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    /// `floor(q*sqrt(d))`, exact.
    fn floor_q_sqrt_d(&self) -> Integer {
        let n = self.q.clone().square() * &self.d;
        let r = n.sqrt();
        if self.q >= 0 {
            r
        } else {
            // q*sqrt(d) is irrational, so its ceiling in absolute value is isqrt + 1.
            -(r + 1u32)
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Integer {
        if self.q == 0 {
            return self.p.clone().div_floor(&self.s);
        }
        let m = self.floor_q_sqrt_d();
        (m + &self.p).div_floor(&self.s)
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> Integer {
        if self.q == 0 {
            return self.p.clone().div_ceil(&self.s);
        }
        self.floor() + 1u32
    }

    pub fn recip(&self) -> QuadVal {
        assert!(!self.is_zero(), "reciprocal of zero");
        // s/(p + q sqrt d) = s (p - q sqrt d)/(p^2 - q^2 d)
        let den = self.p.clone().square() - self.q.clone().square() * &self.d;
        QuadVal::raw(
            (&self.s * &self.p).complete(),
            -(&self.s * &self.q).complete(),
            self.d.clone(),
            den,
        )
    }

    pub fn pow(&self, n: i64) -> QuadVal {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = QuadVal::from_int(1, &self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn add_rational(&self, x: &Rational) -> QuadVal {
        self + &QuadVal::from_rational(x, &self.d)
    }

    pub fn mul_rational(&self, x: &Rational) -> QuadVal {
        self * &QuadVal::from_rational(x, &self.d)
    }

    /// The image under the real embedding, at `prec` bits.
    pub fn to_float(&self, prec: u32) -> rug::Float {
        let wp = prec + 16 + self.magnitude_bits();
        let mut r = rug::Float::with_val(wp, &self.d);
        r.sqrt_mut();
        r *= &self.q;
        r += &self.p;
        r /= &self.s;
        rug::Float::with_val(prec, r)
    }

    /// Rough count of bits lost to cancellation in `p + q*sqrt(d)`.
    fn magnitude_bits(&self) -> u32 {
        self.p.significant_bits() + self.q.significant_bits() + 2
    }

    /// Primitive integral polynomial `(a, b, c)` with `a > 0` vanishing at the value.
    pub fn min_poly(&self) -> Result<(Integer, Integer, Integer)> {
        if self.is_rational() {
            return Err(Error::Domain(
                "rational input has no quadratic minimal polynomial".into(),
            ));
        }
        let a = self.s.clone().square();
        let b = (&self.p * &self.s).complete() * -2i32;
        let c = self.p.clone().square() - self.q.clone().square() * &self.d;
        let g = a.clone().gcd(&b).gcd(&c);
        Ok((a / &g, b / &g, c / &g))
    }

    /// Discriminant of the primitive minimal polynomial.
    pub fn discriminant(&self) -> Result<Integer> {
        let (a, b, c) = self.min_poly()?;
        Ok(b.square() - a * c * 4u32)
    }

    pub fn parse(text: &str) -> Result<QuadVal> {
        parse_quad(text)
    }
}

impl PartialEq for QuadVal {
    fn eq(&self, other: &Self) -> bool {
        if self.q == 0 && other.q == 0 {
            return self.p == other.p && self.s == other.s;
        }
        self.d == other.d && self.p == other.p && self.q == other.q && self.s == other.s
    }
}
impl Eq for QuadVal {}

impl PartialOrd for QuadVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QuadVal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for QuadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            if self.s == 1 {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.s)
            }
        } else {
            let sign = if self.q < 0 { '-' } else { '+' };
            write!(
                f,
                "({} {sign} {}*sqrt({}))/{}",
                self.p,
                self.q.clone().abs(),
                self.d,
                self.s
            )
        }
    }
}

impl<'a> Add<&'a QuadVal> for &'a QuadVal {
    type Output = QuadVal;
    fn add(self, o: &QuadVal) -> QuadVal {
        let d = self.field_with(o);
        QuadVal::raw(
            (&self.p * &o.s).complete() + (&o.p * &self.s).complete(),
            (&self.q * &o.s).complete() + (&o.q * &self.s).complete(),
            d,
            (&self.s * &o.s).complete(),
        )
    }
}

impl<'a> Sub<&'a QuadVal> for &'a QuadVal {
    type Output = QuadVal;
    fn sub(self, o: &QuadVal) -> QuadVal {
        self + &(-o)
    }
}

impl<'a> Mul<&'a QuadVal> for &'a QuadVal {
    type Output = QuadVal;
    fn mul(self, o: &QuadVal) -> QuadVal {
        let d = self.field_with(o);
        let p = (&self.p * &o.p).complete() + (&self.q * &o.q).complete() * &d;
        let q = (&self.p * &o.q).complete() + (&self.q * &o.p).complete();
        QuadVal::raw(p, q, d, (&self.s * &o.s).complete())
    }
}

impl<'a> Div<&'a QuadVal> for &'a QuadVal {
    type Output = QuadVal;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &QuadVal) -> QuadVal {
        self * &o.recip()
    }
}

impl Neg for &QuadVal {
    type Output = QuadVal;
    fn neg(self) -> QuadVal {
        QuadVal {
            d: self.d.clone(),
            p: (-&self.p).complete(),
            q: (-&self.q).complete(),
            s: self.s.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadVal> for QuadVal {
            type Output = QuadVal;
            fn $m(self, o: QuadVal) -> QuadVal {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QuadVal> for QuadVal {
            type Output = QuadVal;
            fn $m(self, o: &QuadVal) -> QuadVal {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadVal {
    type Output = QuadVal;
    fn neg(self) -> QuadVal {
        -&self
    }
}

impl QuadPolyRoot {
    pub fn to_quad(&self) -> Result<QuadVal> {
        if self.a == 0 {
            return Err(Error::Domain("leading coefficient is zero".into()));
        }
        let disc = self.b.clone().square() - (&self.a * &self.c).complete() * 4u32;
        if disc <= 0 || disc.is_perfect_square() {
            return Err(Error::Domain("not real quadratic".into()));
        }
        // Larger root is (-b + sgn(a) sqrt(disc)) / (2a).
        let sign = if (self.a > 0) == self.larger { 1 } else { -1 };
        QuadVal::new(
            (-&self.b).complete(),
            Integer::from(sign),
            disc,
            (&self.a * 2u32).complete(),
        )
    }
}

/// Parses a rational literal `n` or `n/m`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad rational literal {t:?}"));
    if let Some((n, m)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| bad())?;
        let m: Integer = m.trim().parse().map_err(|_| bad())?;
        if m == 0 {
            return Err(bad());
        }
        Ok(Rational::from((n, m)))
    } else {
        let n: Integer = t.parse().map_err(|_| bad())?;
        Ok(Rational::from(n))
    }
}

/// Parses `<rat>`, `<rat> + <rat>*sqrt(<int>)`, `<rat>*sqrt(<int>)`,
/// `(<int> + <int>*sqrt(<int>))/<int>` or `root(a,b,c,+|-)`.
pub fn parse_quad(text: &str) -> Result<QuadVal> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad quadratic literal {text:?}"));
    if let Some(inner) = t.strip_prefix("root(").and_then(|x| x.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<Integer>().map_err(|_| bad());
        let larger = match parts[3] {
            "+" => true,
            "-" => false,
            _ => return Err(bad()),
        };
        return QuadPolyRoot {
            a: num(parts[0])?,
            b: num(parts[1])?,
            c: num(parts[2])?,
            larger,
        }
        .to_quad();
    }
    if t.starts_with('(') {
        if let Some(close) = t.rfind(")/") {
            let inner = parse_quad(&t[1..close])?;
            let s = parse_rational(&t[close + 2..])?;
            if s == 0 {
                return Err(bad());
            }
            return Ok(inner.mul_rational(&s.recip()));
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            return parse_quad(inner);
        }
    }
    let Some(sq) = t.find("sqrt(") else {
        return Ok(QuadVal::from_rational(
            &parse_rational(&t)?,
            &Integer::from(2),
        ));
    };
    let close = t[sq..].find(')').map(|i| i + sq).ok_or_else(bad)?;
    if close + 1 != t.len() {
        return Err(bad());
    }
    let d: Integer = t[sq + 5..close].parse().map_err(|_| bad())?;
    let head = &t[..sq];
    // head is "", "<rat>*", "<rat>+<rat>*", "<rat>-<rat>*", "<rat>+", "-" ...
    let head = head.strip_suffix('*').unwrap_or(head);
    let split = head
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !head[..i].ends_with(['/', '+', '-']))
        .map(|(i, _)| i)
        .last();
    let (a_str, b_str) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let a = parse_rational(a_str)?;
    let b = match b_str {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        s => parse_rational(s.strip_prefix('+').unwrap_or(s))?,
    };
    let den = (a.denom() * b.denom()).complete();
    let p = (a.numer() * b.denom()).complete();
    let q = (b.numer() * a.denom()).complete();
    QuadVal::new(p, q, d, den)
}

/// Fundamental discriminant of `Q(sqrt(d))` for squarefree `d`.
pub fn fundamental_discriminant(d: &Integer) -> Integer {
    if d.mod_u(4) == 1 {
        d.clone()
    } else {
        (d * 4u32).complete()
    }
}

/// Conductor `f` and fundamental discriminant `Delta0` with `disc = f^2 Delta0`.
pub fn conductor(beta: &QuadVal) -> Result<(Integer, Integer)> {
    let disc = beta.discriminant()?;
    let d0 = fundamental_discriminant(beta.d());
    let (f2, rem) = disc.div_rem_ref(&d0).complete();
    debug_assert_eq!(rem, 0);
    let f = f2.sqrt();
    Ok((f, d0))
}

/// Smallest totally positive unit `eps > 1` of the multiplier ring of `beta Z + Z`.
pub fn fundamental_tp_unit(beta: &QuadVal) -> Result<QuadVal> {
    let (_, red, _) = crate::modgroup::reduce_pair(&crate::modgroup::CharVec::zero(), beta)?;
    let hj = crate::modgroup::hj_expand(&red)?;
    let mut eps = QuadVal::from_int(1, red.d());
    let mut x = red;
    for b in &hj.period {
        eps = &eps * &x;
        x = (&QuadVal::from_int(b.clone(), x.d()) - &x).recip();
    }
    Ok(eps)
}

/// Rational coordinates `(u, v)` of `x = u + v sqrt(d)`.
pub fn coords(x: &QuadVal) -> (Rational, Rational) {
    (x.rational_part(), x.sqrt_part())
}

/// Writes `beta = B . alpha` with `det B = f` equal to the conductor of `beta`
/// and `alpha` of conductor one. Returns `(B, alpha)`.
pub fn lower_conductor(beta: &QuadVal) -> Result<(crate::modgroup::Mat2, QuadVal)> {
    let d = beta.d().clone();
    let d0 = fundamental_discriminant(&d);
    let one = QuadVal::from_int(1, &d);
    // (Delta0 + sqrt(Delta0))/2 generates the maximal order over Z.
    let omega = QuadVal::new(d0.clone(), Integer::from(1), d0.clone(), Integer::from(2))?;
    let gens = [beta.clone(), one.clone(), beta * &omega, omega.clone()];
    let basis = lattice_basis(&gens);
    let (mut a1, mut a2) = (basis.0, basis.1);
    let mut m = express(beta, &one, &a1, &a2)?;
    if m.det() < 0 {
        std::mem::swap(&mut a1, &mut a2);
        m = crate::modgroup::Mat2::new(m.b.clone(), m.a.clone(), m.d.clone(), m.c.clone());
    }
    Ok((m, &a1 / &a2))
}

/// Integral matrix `B` with `(x, y)^T = B (a1, a2)^T`.
fn express(x: &QuadVal, y: &QuadVal, a1: &QuadVal, a2: &QuadVal) -> Result<crate::modgroup::Mat2> {
    let (u1, v1) = coords(a1);
    let (u2, v2) = coords(a2);
    let det = (&u1 * &v2).complete() - (&u2 * &v1).complete();
    let solve = |z: &QuadVal| -> Result<(Integer, Integer)> {
        let (u, v) = coords(z);
        let c1 = ((&u * &v2).complete() - (&u2 * &v).complete()) / &det;
        let c2 = ((&u1 * &v).complete() - (&u * &v1).complete()) / &det;
        if *c1.denom() != 1 || *c2.denom() != 1 {
            return Err(Error::Domain("element outside lattice".into()));
        }
        Ok((c1.numer().clone(), c2.numer().clone()))
    };
    let (a, b) = solve(x)?;
    let (c, d) = solve(y)?;
    Ok(crate::modgroup::Mat2::new(a, b, c, d))
}

/// A Z-basis of the lattice spanned by `gens` inside `Q + Q sqrt(d)`.
fn lattice_basis(gens: &[QuadVal]) -> (QuadVal, QuadVal) {
    let d = gens[0].d().clone();
    let mut den = Integer::from(1);
    for g in gens {
        den.lcm_mut(g.s());
    }
    let mut rows: Vec<(Integer, Integer)> = gens
        .iter()
        .map(|g| {
            let k = (&den / g.s()).complete();
            ((g.p() * &k).complete(), (g.q() * &k).complete())
        })
        .collect();
    // Hermite reduction on the sqrt(d) column, then the rational column.
    let mut basis = Vec::new();
    for col in 0..2 {
        loop {
            rows.retain(|r| !(r.0 == 0 && r.1 == 0));
            let key = |r: &(Integer, Integer)| if col == 0 { r.1.clone() } else { r.0.clone() };
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| key(&rows[i]) != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    basis.push(rows.remove(i));
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| key(&rows[i]).abs()).unwrap();
            let pk = key(&rows[piv]);
            for &i in &nz {
                if i == piv {
                    continue;
                }
                let t = key(&rows[i]).div_floor(&pk);
                let (p0, p1) = rows[piv].clone();
                rows[i].0 -= (&t * &p0).complete();
                rows[i].1 -= &t * &p1;
            }
        }
    }
    assert_eq!(basis.len(), 2, "lattice has rank two");
    let mk =
        |r: &(Integer, Integer)| QuadVal::raw(r.0.clone(), r.1.clone(), d.clone(), den.clone());
    (mk(&basis[0]), mk(&basis[1]))
}
