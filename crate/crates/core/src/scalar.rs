//! The exact coefficient algebra.
//!
//! A [`SymScalar`] is a finite sum of monomials
//! `gamma^a * zeta(3)^b3 * zeta(5)^b5 * ... * pi^c * sqrt(2*pi)^s`
//! with Gaussian-rational coefficients, `c` any integer and `s` in `{0,1}`.
//! Even zeta values never appear: they are reduced to rational multiples of
//! `pi^{2m}` at construction through Bernoulli numbers, so printed forms made
//! of `gamma`, `pi` and odd zeta values are matched verbatim. The half power
//! of `2*pi` is a dedicated slot rather than a square-root extension; two of
//! them collapse into `2*pi`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigfloat::{consts, ApproxComplex, BigFloat};
use crate::{Error, Result};

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat { re: BigRational::new(num.into(), den.into()), im: BigRational::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussRat { re: r, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }

    pub fn inv(&self) -> Option<GaussRat> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussRat { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Render as `a/b+c/d*i` (the serialization format).
    pub fn render(&self) -> String {
        fn rat(r: &BigRational) -> String {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.im.is_zero() {
            rat(&self.re)
        } else if self.re.is_zero() {
            format!("{}*i", rat(&self.im))
        } else if self.im.is_negative() {
            format!("{}{}*i", rat(&self.re), rat(&self.im))
        } else {
            format!("{}+{}*i", rat(&self.re), rat(&self.im))
        }
    }

    pub fn parse(s: &str) -> Result<GaussRat> {
        fn rat(s: &str) -> Result<BigRational> {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(s.into()))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(s.into()))?;
                Ok(BigRational::new(n, d))
            } else {
                let n: BigInt = s.parse().map_err(|_| Error::Parse(s.into()))?;
                Ok(BigRational::from_integer(n))
            }
        }
        let s = s.trim();
        if let Some(body) = s.strip_suffix("*i") {
            // forms: "c/d*i" or "a/b+c/d*i" or "a/b-c/d*i"
            // split at the last +/- that is not the leading sign
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                if (bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'/' {
                    // don't split inside a fraction's sign: only numerator heads carry signs
                    split = Some(idx);
                    break;
                }
            }
            match split {
                Some(idx) => {
                    let re = rat(&body[..idx])?;
                    let im_str = &body[idx..];
                    let im = if let Some(pos) = im_str.strip_prefix('+') {
                        rat(pos)?
                    } else {
                        rat(im_str)?
                    };
                    Ok(GaussRat { re, im })
                }
                None => Ok(GaussRat { re: BigRational::zero(), im: rat(body)? }),
            }
        } else {
            Ok(GaussRat { re: rat(s)?, im: BigRational::zero() })
        }
    }

    pub fn eval(&self, bits: u32) -> ApproxComplex {
        ApproxComplex::new(BigFloat::from_ratio(&self.re, bits), BigFloat::from_ratio(&self.im, bits))
    }
}

/// A monomial in the formal constants.
///
/// `pi_exp` is a signed exponent; `sqrt_two_pi` marks one factor of
/// `(2*pi)^{1/2}`. `zeta` maps odd arguments `>= 3` to positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct Monomial {
    pub gamma: u32,
    pub zeta: BTreeMap<u32, u32>,
    pub pi_exp: i64,
    pub sqrt_two_pi: bool,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn is_unit(&self) -> bool {
        self == &Monomial::default()
    }
}

/// Exact element of the constant algebra.
///
/// Invariant: no zero coefficients and no even zeta arguments are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymScalar {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl SymScalar {
    pub fn zero() -> Self {
        SymScalar::default()
    }

    pub fn one() -> Self {
        SymScalar::from_coeff(GaussRat::one())
    }

    pub fn i() -> Self {
        SymScalar::from_coeff(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Self {
        SymScalar::from_coeff(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        SymScalar::from_coeff(GaussRat::from_ratio(num, den))
    }

    pub fn from_rational(r: BigRational) -> Self {
        SymScalar::from_coeff(GaussRat::from_rational(r))
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        SymScalar::from_coeff(c)
    }

    fn from_coeff(c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(Monomial::unit(), c);
        }
        SymScalar { terms: t }
    }

    pub fn monomial(m: Monomial, c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        SymScalar { terms: t }
    }

    pub fn gamma() -> Self {
        SymScalar::monomial(Monomial { gamma: 1, ..Default::default() }, GaussRat::one())
    }

    pub fn pi_pow(e: i64) -> Self {
        SymScalar::monomial(Monomial { pi_exp: e, ..Default::default() }, GaussRat::one())
    }

    /// `zeta(n)`, reducing even arguments to rational multiples of `pi^n`.
    pub fn zeta(n: u32) -> Self {
        assert!(n >= 2, "zeta argument must be >= 2");
        if n % 2 == 0 {
            let q = zeta_even_reduce(n).expect("n is even and >= 2");
            SymScalar::monomial(
                Monomial { pi_exp: n as i64, ..Default::default() },
                GaussRat::from_rational(q),
            )
        } else {
            let mut z = BTreeMap::new();
            z.insert(n, 1);
            SymScalar::monomial(Monomial { zeta: z, ..Default::default() }, GaussRat::one())
        }
    }

    /// One factor `(2*pi)^{1/2}`.
    pub fn sqrt_two_pi() -> Self {
        SymScalar::monomial(Monomial { sqrt_two_pi: true, ..Default::default() }, GaussRat::one())
    }

    /// `(2*pi)^{e/2}` for a signed half-integer exponent numerator `e`.
    pub fn two_pi_half_pow(e: i64) -> Self {
        let whole = e.div_euclid(2);
        let half = e.rem_euclid(2) == 1;
        let two_pow = if whole >= 0 {
            BigRational::from_integer(BigInt::one() << (whole as usize))
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << ((-whole) as usize))
        };
        let m = Monomial { pi_exp: whole, sqrt_two_pi: half, ..Default::default() };
        SymScalar::monomial(m, GaussRat::from_rational(two_pow))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient when the element is a pure Gaussian rational.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            return Some(GaussRat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    /// The value as an exact integer, when it is one.
    pub fn as_int(&self) -> Option<BigInt> {
        let g = self.as_gauss()?;
        if g.im.is_zero() && g.re.denom().is_one() {
            Some(g.re.numer().clone())
        } else {
            None
        }
    }

    fn insert(acc: &mut BTreeMap<Monomial, GaussRat>, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match acc.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn mul_monomials(a: &Monomial, b: &Monomial) -> (Monomial, GaussRat) {
        let mut zeta = a.zeta.clone();
        for (&n, &e) in &b.zeta {
            *zeta.entry(n).or_insert(0) += e;
        }
        let mut pi_exp = a.pi_exp + b.pi_exp;
        let mut coeff = GaussRat::one();
        let sqrt_two_pi = match (a.sqrt_two_pi, b.sqrt_two_pi) {
            (true, true) => {
                // sqrt(2 pi)^2 = 2 pi
                pi_exp += 1;
                coeff = GaussRat::from_int(2);
                false
            }
            (x, y) => x || y,
        };
        (Monomial { gamma: a.gamma + b.gamma, zeta, pi_exp, sqrt_two_pi }, coeff)
    }

    pub fn mul_gauss(&self, c: &GaussRat) -> SymScalar {
        if c.is_zero() {
            return SymScalar::zero();
        }
        let mut t = BTreeMap::new();
        for (m, a) in &self.terms {
            t.insert(m.clone(), a.mul(c));
        }
        SymScalar { terms: t }
    }

    pub fn scale(&self, num: i64, den: i64) -> SymScalar {
        self.mul_gauss(&GaussRat::from_ratio(num, den))
    }

    /// Multiplicative inverse for single-monomial elements whose monomial has
    /// no `gamma`/`zeta` part (these are the only units we ever need).
    pub fn inv(&self) -> Result<SymScalar> {
        if self.terms.len() != 1 {
            return Err(Error::invalid("inverse of a non-monomial scalar"));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if m.gamma != 0 || !m.zeta.is_empty() {
            return Err(Error::invalid("inverse would leave the algebra"));
        }
        let ci = c.inv().ok_or_else(|| Error::invalid("inverse of zero"))?;
        if m.sqrt_two_pi {
            // 1/sqrt(2 pi) = sqrt(2 pi) / (2 pi)
            let mi = Monomial { pi_exp: -m.pi_exp - 1, sqrt_two_pi: true, ..Default::default() };
            Ok(SymScalar::monomial(mi, ci.mul(&GaussRat::from_ratio(1, 2))))
        } else {
            let mi = Monomial { pi_exp: -m.pi_exp, ..Default::default() };
            Ok(SymScalar::monomial(mi, ci))
        }
    }

    /// `i^e` for a signed exponent.
    pub fn i_pow(e: i64) -> SymScalar {
        match e.rem_euclid(4) {
            0 => SymScalar::one(),
            1 => SymScalar::i(),
            2 => SymScalar::from_int(-1),
            _ => SymScalar::from_gauss(GaussRat { re: BigRational::zero(), im: -BigRational::one() }),
        }
    }

    /// `exp(i*pi*q)` for half-integer `q = num/2`; exact in the algebra.
    pub fn exp_i_pi_half(num: i64) -> SymScalar {
        SymScalar::i_pow(num)
    }

    /// Numeric evaluation, substituting constants at `bits` precision.
    pub fn eval(&self, bits: u32) -> ApproxComplex {
        let work = bits + 32;
        let mut acc = ApproxComplex::zero(work);
        for (m, c) in &self.terms {
            let mut v = c.eval(work);
            if m.gamma > 0 {
                let g = ApproxComplex::from_real(consts::gamma(work));
                v = &v * &g.powi(m.gamma);
            }
            for (&n, &e) in &m.zeta {
                let z = ApproxComplex::from_real(consts::zeta(n, work));
                v = &v * &z.powi(e);
            }
            if m.pi_exp != 0 {
                let p = ApproxComplex::from_real(consts::pi(work));
                let pw = p.powi(m.pi_exp.unsigned_abs() as u32);
                v = if m.pi_exp > 0 { &v * &pw } else { &v / &pw };
            }
            if m.sqrt_two_pi {
                v = &v * &ApproxComplex::from_real(consts::sqrt_two_pi(work));
            }
            acc = &acc + &v;
        }
        acc.with_precision(bits)
    }
}

impl Add for &SymScalar {
    type Output = SymScalar;
    fn add(self, rhs: &SymScalar) -> SymScalar {
        let mut t = self.terms.clone();
        for (m, c) in &rhs.terms {
            SymScalar::insert(&mut t, m.clone(), c.clone());
        }
        SymScalar { terms: t }
    }
}

impl Sub for &SymScalar {
    type Output = SymScalar;
    fn sub(self, rhs: &SymScalar) -> SymScalar {
        let mut t = self.terms.clone();
        for (m, c) in &rhs.terms {
            SymScalar::insert(&mut t, m.clone(), c.neg());
        }
        SymScalar { terms: t }
    }
}

impl Mul for &SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: &SymScalar) -> SymScalar {
        let mut t = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (m, extra) = SymScalar::mul_monomials(ma, mb);
                SymScalar::insert(&mut t, m, ca.mul(cb).mul(&extra));
            }
        }
        SymScalar { terms: t }
    }
}

impl Neg for &SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        let mut t = BTreeMap::new();
        for (m, c) in &self.terms {
            t.insert(m.clone(), c.neg());
        }
        SymScalar { terms: t }
    }
}

impl Add for SymScalar {
    type Output = SymScalar;
    fn add(self, rhs: SymScalar) -> SymScalar {
        &self + &rhs
    }
}

impl Sub for SymScalar {
    type Output = SymScalar;
    fn sub(self, rhs: SymScalar) -> SymScalar {
        &self - &rhs
    }
}

impl Mul for SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: SymScalar) -> SymScalar {
        &self * &rhs
    }
}

impl Neg for SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        -&self
    }
}

impl Zero for SymScalar {
    fn zero() -> Self {
        SymScalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SymScalar {
    fn one() -> Self {
        SymScalar::one()
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            let coeff = c.render();
            if coeff != "1" || m.is_unit() {
                parts.push(if c.im.is_zero() || c.re.is_zero() {
                    coeff
                } else {
                    format!("({coeff})")
                });
            }
            if m.gamma == 1 {
                parts.push("gamma".into());
            } else if m.gamma > 1 {
                parts.push(format!("gamma^{}", m.gamma));
            }
            for (&n, &e) in &m.zeta {
                if e == 1 {
                    parts.push(format!("zeta({n})"));
                } else {
                    parts.push(format!("zeta({n})^{e}"));
                }
            }
            if m.pi_exp == 1 {
                parts.push("pi".into());
            } else if m.pi_exp != 0 {
                parts.push(format!("pi^{}", m.pi_exp));
            }
            if m.sqrt_two_pi {
                parts.push("sqrt(2*pi)".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Serialized form of one term, per the external interface.
#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: BTreeMap<String, i64>,
}

impl SymScalar {
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut mono = BTreeMap::new();
                if m.gamma > 0 {
                    mono.insert("gamma".to_string(), m.gamma as i64);
                }
                for (&n, &e) in &m.zeta {
                    mono.insert(format!("zeta{n}"), e as i64);
                }
                if m.pi_exp != 0 {
                    mono.insert("pi".to_string(), m.pi_exp);
                }
                if m.sqrt_two_pi {
                    mono.insert("sqrt2pi".to_string(), 1);
                }
                TermJson { coeff: c.render(), monomial: mono }
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<SymScalar> {
        let mut acc = SymScalar::zero();
        for t in terms {
            let c = GaussRat::parse(&t.coeff)?;
            let mut m = Monomial::unit();
            for (k, &v) in &t.monomial {
                match k.as_str() {
                    "gamma" => m.gamma = v as u32,
                    "pi" => m.pi_exp = v,
                    "sqrt2pi" => m.sqrt_two_pi = v != 0,
                    other => {
                        if let Some(n) = other.strip_prefix("zeta") {
                            let n: u32 =
                                n.parse().map_err(|_| Error::Parse(other.to_string()))?;
                            if n % 2 == 0 {
                                return Err(Error::invalid("even zeta in serialized scalar"));
                            }
                            m.zeta.insert(n, v as u32);
                        } else {
                            return Err(Error::Parse(other.to_string()));
                        }
                    }
                }
            }
            acc = &acc + &SymScalar::monomial(m, c);
        }
        Ok(acc)
    }
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`), by the defining
/// recursion `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m as i64 + 1 - j as i64) / BigInt::from(j as i64 + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m as i64 + 1)));
    }
    b
}

/// The rational `q` with `zeta(n) = q * pi^n` for even `n >= 2`:
/// `q = (-1)^{n/2+1} B_n 2^{n-1} / n!`.
pub fn zeta_even_reduce(n: u32) -> Result<BigRational> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid(format!("zeta_even_reduce requires even n >= 2, got {n}")));
    }
    let b = bernoulli_numbers(n as usize);
    let bn = &b[n as usize];
    let mut fact = BigInt::one();
    for j in 1..=(n as i64) {
        fact *= j;
    }
    let sign = if (n / 2) % 2 == 0 { -BigInt::one() } else { BigInt::one() };
    Ok(bn * BigRational::new(sign * (BigInt::one() << (n as usize - 1)), fact))
}
