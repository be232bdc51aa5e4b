//! Integral 2x2 matrices, characteristic vectors, Hirzebruch-Jung continued
//! fractions and the cycle data attached to a reduced pair.

use std::fmt;
use std::ops::Mul;

use rug::ops::DivRounding;
use rug::{Complete, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{parse_rational, QuadVal};
use crate::special::Cx;

/// Integral matrix `(a b; c d)` with determinant `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl Mat2 {
    /// Builds a matrix without checking the determinant.
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
    ) -> Mat2 {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    /// Builds a matrix and checks that its determinant is a unit.
    pub fn unimodular(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
    ) -> Result<Mat2> {
        let m = Mat2::new(a, b, c, d);
        let det = m.det();
        if det != 1 && det != -1 {
            return Err(Error::Domain(format!("determinant {det} is not +1 or -1")));
        }
        Ok(m)
    }

    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    /// `T^n = (1 n; 0 1)`.
    pub fn t(n: impl Into<Integer>) -> Mat2 {
        Mat2::new(1, n, 0, 1)
    }

    /// `S = (0 -1; 1 0)`.
    pub fn s() -> Mat2 {
        Mat2::new(0, -1, 1, 0)
    }

    pub fn det(&self) -> Integer {
        (&self.a * &self.d).complete() - (&self.b * &self.c).complete()
    }

    pub fn trace(&self) -> Integer {
        (&self.a + &self.d).complete()
    }

    /// Inverse of a matrix with determinant `+1` or `-1`.
    pub fn inv(&self) -> Mat2 {
        let det = self.det();
        debug_assert!(det == 1 || det == -1);
        Mat2::new(
            (&self.d * &det).complete(),
            -(&self.b * &det).complete(),
            -(&self.c * &det).complete(),
            (&self.a * &det).complete(),
        )
    }

    /// Adjugate `(d -b; -c a)`, the inverse up to the determinant.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(
            self.d.clone(),
            (-&self.b).complete(),
            (-&self.c).complete(),
            self.a.clone(),
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(
            (-&self.a).complete(),
            (-&self.b).complete(),
            (-&self.c).complete(),
            (-&self.d).complete(),
        )
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    /// Entries as `i64`, when they fit.
    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    /// Fractional linear action on an exact quadratic value.
    pub fn act(&self, tau: &QuadVal) -> Result<QuadVal> {
        let den = self.j(tau);
        if den.is_zero() {
            return Err(Error::ParabolicPole);
        }
        let num = &tau.mul_rational(&Rational::from(&self.a))
            + &QuadVal::from_int(self.b.clone(), tau.d());
        Ok(&num / &den)
    }

    /// `j_A(tau) = c tau + d`.
    pub fn j(&self, tau: &QuadVal) -> QuadVal {
        &tau.mul_rational(&Rational::from(&self.c)) + &QuadVal::from_int(self.d.clone(), tau.d())
    }

    /// Fractional linear action on a complex number.
    pub fn act_cx(&self, tau: &Cx) -> Result<Cx> {
        let den = self.j_cx(tau);
        if den.is_zero() {
            return Err(Error::ParabolicPole);
        }
        let num = tau.mul_int(&self.a).add_int(&self.b);
        Ok(num.div(&den))
    }

    /// `j_A(tau) = c tau + d` for complex `tau`.
    pub fn j_cx(&self, tau: &Cx) -> Cx {
        tau.mul_int(&self.c).add_int(&self.d)
    }

    /// Matrix-vector product `A r` on characteristics.
    pub fn apply(&self, r: &CharVec) -> CharVec {
        let x = (&self.a * &r.r1).complete() + (&self.b * &r.r2).complete();
        let y = (&self.c * &r.r1).complete() + (&self.d * &r.r2).complete();
        CharVec::new(x, y)
    }

    /// Whether `A r = r` modulo `Z^2`.
    pub fn fixes_mod_z2(&self, r: &CharVec) -> bool {
        (&self.apply(r) - r).is_integral()
    }

    /// Parses `"a,b,c,d"`.
    pub fn parse(text: &str) -> Result<Mat2> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four comma-separated integers, got {text:?}"
            )));
        }
        let mut v = Vec::with_capacity(4);
        for p in parts {
            v.push(
                p.parse::<Integer>()
                    .map_err(|_| Error::Parse(format!("bad integer {p:?}")))?,
            );
        }
        let [a, b, c, d]: [Integer; 4] = v.try_into().unwrap();
        Mat2::unimodular(a, b, c, d)
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            (&self.a * &o.a).complete() + (&self.b * &o.c).complete(),
            (&self.a * &o.b).complete() + (&self.b * &o.d).complete(),
            (&self.c * &o.a).complete() + (&self.d * &o.c).complete(),
            (&self.c * &o.b).complete() + (&self.d * &o.d).complete(),
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [
            self.a.to_string(),
            self.b.to_string(),
            self.c.to_string(),
            self.d.to_string(),
        ]
        .serialize(s)
    }
}

/// A characteristic vector `r = (r1, r2)` of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharVec {
    pub r1: Rational,
    pub r2: Rational,
}

impl CharVec {
    pub fn new(r1: impl Into<Rational>, r2: impl Into<Rational>) -> CharVec {
        CharVec {
            r1: r1.into(),
            r2: r2.into(),
        }
    }

    pub fn zero() -> CharVec {
        CharVec::new(0, 0)
    }

    /// Parses `"r1,r2"` with rational entries such as `"0,4/5"`.
    pub fn parse(text: &str) -> Result<CharVec> {
        let (a, b) = text
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected r1,r2 got {text:?}")))?;
        Ok(CharVec::new(parse_rational(a)?, parse_rational(b)?))
    }

    pub fn is_integral(&self) -> bool {
        *self.r1.denom() == 1 && *self.r2.denom() == 1
    }

    /// Whether `2r` is integral.
    pub fn is_half_integral(&self) -> bool {
        self.scale(&Rational::from(2)).is_integral()
    }

    /// Least common denominator of the entries.
    pub fn denominator(&self) -> Integer {
        self.r1.denom().clone().lcm(self.r2.denom())
    }

    pub fn neg(&self) -> CharVec {
        CharVec::new((-&self.r1).complete(), (-&self.r2).complete())
    }

    pub fn scale(&self, x: &Rational) -> CharVec {
        CharVec::new((&self.r1 * x).complete(), (&self.r2 * x).complete())
    }

    /// Pairing `<v, w> = v2 w1 - v1 w2`.
    pub fn pairing(&self, w: &CharVec) -> Rational {
        (&self.r2 * &w.r1).complete() - (&self.r1 * &w.r2).complete()
    }

    /// `<r, tau> = r2 tau - r1` on an exact quadratic value.
    pub fn linear_form(&self, tau: &QuadVal) -> QuadVal {
        tau.mul_rational(&self.r2)
            .add_rational(&(-&self.r1).complete())
    }

    /// `<r, tau> = r2 tau - r1` on a complex number.
    pub fn linear_form_cx(&self, tau: &Cx) -> Cx {
        tau.mul_rat(&self.r2)
            .sub(&Cx::from_rational(&self.r1, tau.prec()))
    }
}

impl std::ops::Add for &CharVec {
    type Output = CharVec;
    fn add(self, o: &CharVec) -> CharVec {
        CharVec::new((&self.r1 + &o.r1).complete(), (&self.r2 + &o.r2).complete())
    }
}

impl std::ops::Sub for &CharVec {
    type Output = CharVec;
    fn sub(self, o: &CharVec) -> CharVec {
        CharVec::new((&self.r1 - &o.r1).complete(), (&self.r2 - &o.r2).complete())
    }
}

impl fmt::Display for CharVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}

impl Serialize for CharVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.r1.to_string(), self.r2.to_string()].serialize(s)
    }
}

fn floor_rat(x: &Rational) -> Integer {
    x.numer().clone().div_floor(x.denom())
}

/// The fractional normal form `{r} = (r1 - floor(r1) - 1, r2 - floor(r2))`.
pub fn frac_vec(r: &CharVec) -> CharVec {
    let r1 = (&r.r1 - floor_rat(&r.r1)).complete() - 1u32;
    let r2 = (&r.r2 - floor_rat(&r.r2)).complete();
    CharVec::new(r1, r2)
}

/// A Hirzebruch-Jung ("minus") continued fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HJExpansion {
    #[serde(serialize_with = "ser_ints")]
    pub preperiod: Vec<Integer>,
    #[serde(serialize_with = "ser_ints")]
    pub period: Vec<Integer>,
}

fn ser_ints<S: serde::Serializer>(v: &[Integer], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl HJExpansion {
    /// Rewrites the expansion with the shortest preperiod and a primitive period.
    pub fn canonical(mut self) -> HJExpansion {
        let l = self.period.len();
        for div in 1..=l {
            if l.is_multiple_of(div) && (0..l).all(|i| self.period[i] == self.period[i % div]) {
                self.period.truncate(div);
                break;
            }
        }
        while let Some(last) = self.preperiod.last() {
            if *last == *self.period.last().unwrap() {
                self.preperiod.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
        self
    }
}

/// `T^{a_0} S T^{a_1} S ... T^{a_{n-1}} S`.
pub fn hj_word_matrix(digits: &[Integer]) -> Mat2 {
    let mut m = Mat2::identity();
    for a in digits {
        m = &(&m * &Mat2::t(a.clone())) * &Mat2::s();
    }
    m
}

/// One HJ step: returns `(ceil(x), 1/(ceil(x) - x))`.
fn hj_step(x: &QuadVal) -> (Integer, QuadVal) {
    let a = x.ceil();
    let next = (&QuadVal::from_int(a.clone(), x.d()) - x).recip();
    (a, next)
}

/// HJ expansion of an irrational quadratic `beta`, with exact period detection.
pub fn hj_expand(beta: &QuadVal) -> Result<HJExpansion> {
    if beta.is_rational() {
        return Err(Error::Domain(
            "HJ expansion needs an irrational input".into(),
        ));
    }
    let mut seen: Vec<QuadVal> = Vec::new();
    let mut digits: Vec<Integer> = Vec::new();
    let mut x = beta.clone();
    loop {
        if let Some(pos) = seen.iter().position(|y| *y == x) {
            let period = digits.split_off(pos);
            return Ok(HJExpansion {
                preperiod: digits,
                period,
            });
        }
        let (a, next) = hj_step(&x);
        seen.push(x);
        digits.push(a);
        x = next;
    }
}

/// Whether `0 < conj(beta) < 1 < beta`, the purely periodic domain.
pub fn is_hj_reduced(beta: &QuadVal) -> bool {
    if beta.is_rational() {
        return false;
    }
    let one = QuadVal::from_int(1, beta.d());
    let c = beta.conj();
    *beta > one && c.is_positive() && c < one
}

/// HJ expansion of the conjugate of a purely periodic value with the given period.
///
/// The period is split cyclically into runs `{2}^{n_0}, m_1 + 3, {2}^{n_1}, ..., m_k + 3, {2}^{n_k}`.
pub fn hj_conjugate_expansion(period: &[Integer]) -> Result<HJExpansion> {
    if period.is_empty() || period.iter().any(|b| *b < 2) {
        return Err(Error::Domain("period digits must be at least 2".into()));
    }
    let mut ns: Vec<u64> = vec![0];
    let mut ms: Vec<u64> = Vec::new();
    for b in period {
        if *b == 2 {
            *ns.last_mut().unwrap() += 1;
        } else {
            let m = (b.clone() - 3u32)
                .to_u64()
                .ok_or_else(|| Error::Domain("digit too large".into()))?;
            ms.push(m);
            ns.push(0);
        }
    }
    let k = ms.len();
    if k == 0 {
        return Err(Error::Domain(
            "malformed block decomposition: no digit exceeds 2".into(),
        ));
    }
    // ns = [n_0, ..., n_k], ms = [m_1, ..., m_k].
    let twos = |n: u64| std::iter::repeat_n(Integer::from(2), n as usize);
    let preperiod = vec![Integer::from(1), Integer::from(ns[k] + 2)];
    let mut per: Vec<Integer> = Vec::new();
    for i in (1..=k).rev() {
        per.extend(twos(ms[i - 1]));
        if i > 1 {
            per.push(Integer::from(ns[i - 1] + 3));
        }
    }
    per.push(Integer::from(ns[0] + ns[k] + 3));
    Ok(HJExpansion {
        preperiod,
        period: per,
    }
    .canonical())
}

/// A generator token in a word in `T` and `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    T(Integer),
    S,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::T(n) => write!(f, "T^{n}"),
            Token::S => write!(f, "S"),
        }
    }
}

/// Product of a token word.
pub fn word_product(word: &[Token]) -> Mat2 {
    word.iter().fold(Mat2::identity(), |m, t| match t {
        Token::T(n) => &m * &Mat2::t(n.clone()),
        Token::S => &m * &Mat2::s(),
    })
}

/// Writes `A` in `SL_2(Z)` as a word in `T^n` and `S`, by division with negative remainder.
pub fn word_ts(a: &Mat2) -> Result<Vec<Token>> {
    if a.det() != 1 {
        return Err(Error::Domain("word_ts needs determinant 1".into()));
    }
    let mut word = Vec::new();
    let mut m = a.clone();
    loop {
        if m.c == 0 {
            if m.a == 1 {
                if m.b != 0 {
                    word.push(Token::T(m.b.clone()));
                }
            } else {
                // -T^{-b} = S^2 T^{-b}
                word.push(Token::S);
                word.push(Token::S);
                if m.b != 0 {
                    word.push(Token::T(-m.b.clone()));
                }
            }
            return Ok(word);
        }
        if m.c < 0 {
            word.push(Token::S);
            word.push(Token::S);
            m = m.neg();
            continue;
        }
        // a = c k - c' with 0 <= c' < c, so A = T^k S B with B = S^{-1} T^{-k} A.
        let k = m.a.clone().div_ceil(&m.c);
        if k != 0 {
            word.push(Token::T(k.clone()));
        }
        word.push(Token::S);
        m = &(&Mat2::s().inv() * &Mat2::t(-k)) * &m;
    }
}

/// Preperiod matrix `M` with `beta = M . beta_red`, and the reduced value.
fn preperiod_split(beta: &QuadVal) -> Result<(Mat2, QuadVal, HJExpansion)> {
    let hj = hj_expand(beta)?;
    let m = hj_word_matrix(&hj.preperiod);
    let red = m.inv().act(beta)?;
    Ok((m, red, hj))
}

/// The sign of `j_R(beta)`.
pub fn sign_j(r: &Mat2, beta: &QuadVal) -> i32 {
    match r.j(beta).signum() {
        std::cmp::Ordering::Less => -1,
        _ => 1,
    }
}

/// Reduces `(r, beta)` to a reduced pair using the HJ preperiod.
///
/// Returns `(r_red, beta_red, R)` with `beta_red = R . beta` purely periodic and
/// `r_red = {s_R(beta) R r}`.
pub fn reduce_pair(r: &CharVec, beta: &QuadVal) -> Result<(CharVec, QuadVal, Mat2)> {
    let (m, red, _) = preperiod_split(beta)?;
    let rr = m.inv();
    let s = sign_j(&rr, beta);
    let v = rr.apply(r).scale(&Rational::from(s));
    Ok((frac_vec(&v), red, rr))
}

/// Stabilizer data `(A, P, k)`: `P` generates the stabilizer of `beta` modulo
/// `+-I` with eigenvalue `eps > 1`, and `A = P^k` with `k` minimal in `Gamma_r`.
pub fn stabilizer_generator(r: &CharVec, beta: &QuadVal) -> Result<(Mat2, Mat2, u64)> {
    let (m, _, hj) = preperiod_split(beta)?;
    let p_red = hj_word_matrix(&hj.period);
    let p = &(&m * &p_red) * &m.inv();
    let n = r.denominator();
    let bound = (n.clone().square() * 8u32).to_u64().unwrap_or(u64::MAX);
    let mut a = p.clone();
    let mut k = 1u64;
    while !a.fixes_mod_z2(r) {
        k += 1;
        assert!(k <= bound, "stabilizer power exceeds 8 N^2");
        a = &a * &p;
    }
    Ok((a, p, k))
}

/// HJ cycle data of a reduced pair.
#[derive(Clone, Debug)]
pub struct CycleData {
    pub k: u64,
    pub ell: usize,
    /// Period digits `b_0, ..., b_{ell-1}`.
    pub b: Vec<Integer>,
    /// `beta_n` for `0 <= n < k ell`.
    pub beta_n: Vec<QuadVal>,
    /// Prefix products `A_{0,n}` for `0 <= n <= k ell`.
    pub a_prefix: Vec<Mat2>,
    /// `r_n = {A_{n,0} r}` for `0 <= n <= k ell`.
    pub r_n: Vec<CharVec>,
    /// `w_n = r_{n,2} beta_n - r_{n,1}` for `0 <= n < k ell`.
    pub w_n: Vec<QuadVal>,
    pub p: Mat2,
    pub a: Mat2,
    pub r: CharVec,
    pub beta: QuadVal,
}

impl CycleData {
    /// `A_{m,n} = T^{b_m} S ... T^{b_{n-1}} S` for `m <= n <= k ell`.
    pub fn segment(&self, m: usize, n: usize) -> Mat2 {
        &self.a_prefix[m].inv() * &self.a_prefix[n]
    }

    /// Number of cycle terms `k ell`.
    pub fn len(&self) -> usize {
        self.beta_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta_n.is_empty()
    }
}

/// Whether `(r, beta)` is a reduced pair.
pub fn is_reduced_pair(r: &CharVec, beta: &QuadVal) -> bool {
    frac_vec(r) == *r && is_hj_reduced(beta)
}

/// Builds the HJ cycle data of a reduced pair `(r, beta)`.
pub fn cycle_data(r: &CharVec, beta: &QuadVal) -> Result<CycleData> {
    if !is_reduced_pair(r, beta) {
        return Err(Error::NotReduced);
    }
    if r.is_integral() && *r != CharVec::new(-1, 0) {
        return Err(Error::NotReduced);
    }
    let hj = hj_expand(beta)?;
    debug_assert!(hj.preperiod.is_empty());
    let b = hj.period;
    let ell = b.len();
    let p = hj_word_matrix(&b);
    let mut k = 1u64;
    let mut a = p.clone();
    while !a.fixes_mod_z2(r) {
        k += 1;
        a = &a * &p;
    }
    let total = ell * k as usize;
    let mut beta_n = Vec::with_capacity(total);
    let mut a_prefix = vec![Mat2::identity()];
    let mut r_n = vec![r.clone()];
    let mut w_n = Vec::with_capacity(total);
    let mut x = beta.clone();
    for n in 0..total {
        let bn = &b[n % ell];
        let rn = &r_n[n];
        w_n.push(rn.linear_form(&x));
        beta_n.push(x.clone());
        let step = &Mat2::t(bn.clone()) * &Mat2::s();
        a_prefix.push(&a_prefix[n] * &step);
        r_n.push(frac_vec(&step.inv().apply(rn)));
        x = (&QuadVal::from_int(bn.clone(), x.d()) - &x).recip();
    }
    debug_assert_eq!(x, *beta);
    Ok(CycleData {
        k,
        ell,
        b,
        beta_n,
        a_prefix,
        r_n,
        w_n,
        p,
        a,
        r: r.clone(),
        beta: beta.clone(),
    })
}
