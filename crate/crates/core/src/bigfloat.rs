//! Fixed-point arbitrary-precision real and complex arithmetic.
//!
//! A [`BigFloat`] stores an integer mantissa `m` and a precision `bits`, and
//! represents the value `m / 2^bits`. All rounding is truncation toward zero,
//! so a single arithmetic operation is exact to one unit in the last place of
//! the lower-precision operand. Precision propagates as the minimum of the
//! operands, as mixed-precision arithmetic would otherwise silently promote
//! garbage bits.
//!
//! The constant providers ([`consts`]) compute `pi` by the Gauss–Legendre
//! AGM scheme, the Euler–Mascheroni constant by the Brent–McMillan algorithm
//! and `zeta` at odd integers by Borwein's accelerated alternating series.
//! Results are cached per precision.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision fixed-point real number: `mant / 2^bits`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    bits: u32,
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({} @{})", self.to_decimal_string(30), self.bits)
    }
}

impl BigFloat {
    pub fn zero(bits: u32) -> Self {
        BigFloat { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        BigFloat { mant: BigInt::one() << bits, bits }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        BigFloat { mant: BigInt::from(v) << bits, bits }
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> Self {
        BigFloat { mant: v.clone() << bits, bits }
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> Self {
        BigFloat { mant: (r.numer() << bits).div_floor(r.denom()), bits }
    }

    pub fn precision(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Re-scale to a different precision (truncating when lowering).
    pub fn with_precision(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => BigFloat { mant: &self.mant << (bits - self.bits), bits },
            Ordering::Less => BigFloat { mant: &self.mant >> (self.bits - bits), bits },
        }
    }

    fn align(a: &BigFloat, b: &BigFloat) -> (BigInt, BigInt, u32) {
        let bits = a.bits.min(b.bits);
        (
            a.with_precision(bits).mant,
            b.with_precision(bits).mant,
            bits,
        )
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), bits: self.bits }
    }

    /// Truncated square root; panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "sqrt of negative BigFloat");
        BigFloat { mant: (&self.mant << self.bits).sqrt(), bits: self.bits }
    }

    /// Multiply by `2^e`.
    pub fn ldexp(&self, e: i64) -> Self {
        if e >= 0 {
            BigFloat { mant: &self.mant << (e as usize), bits: self.bits }
        } else {
            BigFloat { mant: &self.mant >> ((-e) as usize), bits: self.bits }
        }
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        let half = BigInt::one() << (self.bits - 1);
        if self.mant.is_negative() {
            -((-&self.mant + half) >> self.bits)
        } else {
            (&self.mant + half) >> self.bits
        }
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(&self) -> BigFloat {
        let r = self.round();
        (self - &BigFloat::from_bigint(&r, self.bits)).abs()
    }

    pub fn to_f64(&self) -> f64 {
        // display/debug helper only; saturates for very large mantissas
        self.mant.to_f64().unwrap_or(f64::NAN) * (2f64).powi(-(self.bits as i32))
    }

    /// Decimal rendering with `digits` fractional digits, truncated.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.mant.is_negative();
        let m = self.mant.abs();
        let int = &m >> self.bits;
        let mut frac = m - (&int << self.bits);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int.to_string());
        s.push('.');
        for _ in 0..digits {
            frac *= 10;
            let d = &frac >> self.bits;
            s.push_str(&d.to_string());
            frac -= d << self.bits;
        }
        s
    }

    /// Parse a plain decimal string like `-12.0625`.
    pub fn parse_decimal(s: &str, bits: u32) -> Option<Self> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let ten = BigInt::from(10);
        let mut num = int_part.parse::<BigInt>().ok()?;
        let mut den = BigInt::one();
        for c in frac_part.chars() {
            let d = c.to_digit(10)? as i64;
            num = &num * &ten + d;
            den *= &ten;
        }
        let mant = (num << bits).div_floor(&den);
        Some(BigFloat { mant: if neg { -mant } else { mant }, bits })
    }

    pub fn cmp_abs(&self, other: &BigFloat) -> Ordering {
        let (a, b, _) = BigFloat::align(self, other);
        a.abs().cmp(&b.abs())
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b, _) = BigFloat::align(self, other);
        Some(a.cmp(&b))
    }
}

macro_rules! bigfloat_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                let f: fn(BigInt, BigInt, u32) -> BigFloat = $body;
                let (a, b, bits) = BigFloat::align(self, rhs);
                f(a, b, bits)
            }
        }
        impl $trait for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
    };
}

bigfloat_binop!(Add, add, |a, b, bits| BigFloat { mant: a + b, bits });
bigfloat_binop!(Sub, sub, |a, b, bits| BigFloat { mant: a - b, bits });
bigfloat_binop!(Mul, mul, |a, b, bits| BigFloat { mant: (a * b) >> bits, bits });
bigfloat_binop!(Div, div, |a, b, bits| {
    assert!(!b.is_zero(), "division by zero BigFloat");
    BigFloat { mant: (a << bits) / b, bits }
});

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -&self.mant, bits: self.bits }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, bits: self.bits }
    }
}

/// Complex number over [`BigFloat`], both parts at the same precision.
#[derive(Clone, PartialEq)]
pub struct ApproxComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl fmt::Debug for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i)",
            self.re.to_decimal_string(20),
            self.im.to_decimal_string(20)
        )
    }
}

impl ApproxComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        let bits = re.precision().min(im.precision());
        ApproxComplex { re: re.with_precision(bits), im: im.with_precision(bits) }
    }

    pub fn zero(bits: u32) -> Self {
        ApproxComplex { re: BigFloat::zero(bits), im: BigFloat::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        ApproxComplex { re: BigFloat::one(bits), im: BigFloat::zero(bits) }
    }

    pub fn i(bits: u32) -> Self {
        ApproxComplex { re: BigFloat::zero(bits), im: BigFloat::one(bits) }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let bits = re.precision();
        ApproxComplex { re, im: BigFloat::zero(bits) }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        ApproxComplex::from_real(BigFloat::from_i64(v, bits))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ApproxComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        ApproxComplex { re: &self.re / &n, im: &(-&self.im) / &n }
    }

    pub fn with_precision(&self, bits: u32) -> Self {
        ApproxComplex {
            re: self.re.with_precision(bits),
            im: self.im.with_precision(bits),
        }
    }

    /// `exp(self) = exp(re) * (cos(im) + i sin(im))`.
    pub fn exp(&self) -> Self {
        let bits = self.precision();
        let guard = bits + 32;
        let radial = exp_real(&self.re.with_precision(guard));
        let angular = exp_imag(&self.im.with_precision(guard));
        (&ApproxComplex::from_real(radial) * &angular).with_precision(bits)
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut acc = ApproxComplex::one(self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let f = BigFloat::from_i64(k, self.precision());
        ApproxComplex { re: &self.re * &f, im: &self.im * &f }
    }
}

impl Add for &ApproxComplex {
    type Output = ApproxComplex;
    fn add(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ApproxComplex {
    type Output = ApproxComplex;
    fn sub(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ApproxComplex {
    type Output = ApproxComplex;
    fn mul(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div for &ApproxComplex {
    type Output = ApproxComplex;
    #[allow(clippy::suspicious_arithmetic_impl)] // z/w = z * conj(w)/|w|^2
    fn div(self, rhs: &ApproxComplex) -> ApproxComplex {
        self * &rhs.inv()
    }
}

impl Neg for &ApproxComplex {
    type Output = ApproxComplex;
    fn neg(self) -> ApproxComplex {
        ApproxComplex { re: -&self.re, im: -&self.im }
    }
}

/// `exp` of a real argument, by argument halving plus Taylor series.
pub fn exp_real(x: &BigFloat) -> BigFloat {
    let bits = x.precision();
    let work = bits + 32;
    let x = x.with_precision(work);
    let ln2 = consts::ln2(work);
    // x = n*ln2 + r with |r| <= ln2
    let n_int = (&x / &ln2).round();
    let n = n_int.to_i64().expect("exp argument out of range");
    let r = &x - &(&ln2 * &BigFloat::from_bigint(&n_int, work));
    // halve the residual h times, run the series, square back
    let h = 8u32;
    let small = r.ldexp(-(h as i64));
    let mut term = BigFloat::one(work);
    let mut sum = BigFloat::one(work);
    let mut k: i64 = 1;
    loop {
        term = &(&term * &small) / &BigFloat::from_i64(k, work);
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
        if term.abs().mant < BigInt::one() << 4 {
            break;
        }
        k += 1;
    }
    for _ in 0..h {
        sum = &sum * &sum;
    }
    sum.ldexp(n).with_precision(bits)
}

/// `exp(i*theta)` for a real `theta`, reduced modulo `2*pi`.
pub fn exp_imag(theta: &BigFloat) -> ApproxComplex {
    let bits = theta.precision();
    let work = bits + 32;
    let theta = theta.with_precision(work);
    let two_pi = consts::pi(work).ldexp(1);
    let n = (&theta / &two_pi).round();
    let red = &theta - &(&two_pi * &BigFloat::from_bigint(&n, work));
    let h = 8u32;
    let small = ApproxComplex::new(BigFloat::zero(work), red.ldexp(-(h as i64)));
    let mut term = ApproxComplex::one(work);
    let mut sum = ApproxComplex::one(work);
    let mut k: i64 = 1;
    loop {
        term = &term * &small;
        term = ApproxComplex::new(
            &term.re / &BigFloat::from_i64(k, work),
            &term.im / &BigFloat::from_i64(k, work),
        );
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
        if term.re.abs().mant < BigInt::one() << 4 && term.im.abs().mant < BigInt::one() << 4 {
            break;
        }
        k += 1;
    }
    for _ in 0..h {
        sum = &sum * &sum;
    }
    sum.with_precision(bits)
}

/// High-precision constant providers with per-precision caching.
pub mod consts {
    use super::*;

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Kind {
        Pi,
        Ln2,
        Gamma,
        Zeta(u32),
    }

    fn cache() -> &'static Mutex<HashMap<(Kind, u32), BigFloat>> {
        static CACHE: std::sync::OnceLock<Mutex<HashMap<(Kind, u32), BigFloat>>> =
            std::sync::OnceLock::new();
        CACHE.get_or_init(|| Mutex::new(HashMap::new()))
    }

    fn cached(kind: Kind, bits: u32, f: impl FnOnce(u32) -> BigFloat) -> BigFloat {
        if let Some(v) = cache().lock().unwrap().get(&(kind, bits)) {
            return v.clone();
        }
        let v = f(bits);
        cache().lock().unwrap().insert((kind, bits), v.clone());
        v
    }

    fn preload(kind: Kind, value: BigFloat) {
        let bits = value.precision();
        cache().lock().unwrap().insert((kind, bits), value);
    }

    /// Substitute a tabulated value for `pi` at the value's precision; the
    /// built-in scheme is bypassed for that precision from then on.
    pub fn preload_pi(value: BigFloat) {
        preload(Kind::Pi, value);
    }

    /// Substitute a tabulated value for the Euler–Mascheroni constant.
    pub fn preload_gamma(value: BigFloat) {
        preload(Kind::Gamma, value);
    }

    /// Substitute a tabulated value for `zeta(s)`.
    pub fn preload_zeta(s: u32, value: BigFloat) {
        preload(Kind::Zeta(s), value);
    }

    /// `pi` by the Gauss–Legendre (AGM) iteration.
    pub fn pi(bits: u32) -> BigFloat {
        cached(Kind::Pi, bits, |bits| {
            let work = bits + 64;
            let one = BigFloat::one(work);
            let two = BigFloat::from_i64(2, work);
            let mut a = one.clone();
            let mut b = &one / &two.sqrt();
            let mut t = BigFloat::from_ratio(&BigRational::new(1.into(), 4.into()), work);
            let mut p = one.clone();
            // quadratic convergence: each step doubles the correct bits
            let iters = 32 - (work.leading_zeros()) + 4;
            for _ in 0..iters {
                let an = (&a + &b).ldexp(-1);
                let bn = (&a * &b).sqrt();
                let d = &a - &an;
                t = &t - &(&(&p * &d) * &d);
                p = p.ldexp(1);
                a = an;
                b = bn;
            }
            let s = &a + &b;
            (&(&s * &s) / &t.ldexp(2)).with_precision(bits)
        })
    }

    /// `ln 2 = 2 atanh(1/3)`.
    pub fn ln2(bits: u32) -> BigFloat {
        cached(Kind::Ln2, bits, |bits| {
            let work = bits + 32;
            let nine = BigInt::from(9);
            let mut acc = BigInt::zero();
            // 2 * sum_{j>=0} (1/3)^(2j+1) / (2j+1), accumulated in fixed point
            let mut pow: BigInt = (BigInt::one() << work) / 3;
            let mut j: u64 = 0;
            while !pow.is_zero() {
                acc += &pow / BigInt::from(2 * j + 1);
                pow /= &nine;
                j += 1;
            }
            BigFloat { mant: acc << 1, bits: work }.with_precision(bits)
        })
    }

    /// Euler–Mascheroni constant by the Brent–McMillan `B0` scheme:
    /// `gamma = A(n)/B(n) - ln n + O(e^{-4n})` with
    /// `A = sum (n^j/j!)^2 H_j`, `B = sum (n^j/j!)^2` and `n` a power of two.
    pub fn gamma(bits: u32) -> BigFloat {
        cached(Kind::Gamma, bits, |bits| {
            let work = bits + 64;
            // need 4n > work*ln2, pick n as a power of two for an exact ln n
            let mut log2n = 1u32;
            while ((1u64 << log2n) as f64) * 4.0 < (work as f64) * std::f64::consts::LN_2 + 16.0 {
                log2n += 1;
            }
            let n = 1u64 << log2n;
            let n_sq = BigInt::from(n) * BigInt::from(n);
            let mut term = BigFloat::one(work); // (n^j/j!)^2 at j=0
            let mut harmonic = BigFloat::zero(work);
            let mut a = BigFloat::zero(work);
            let mut b = BigFloat::one(work);
            let mut j: u64 = 1;
            loop {
                let jj = BigInt::from(j) * BigInt::from(j);
                term = BigFloat {
                    mant: (&term.mant * &n_sq) / jj,
                    bits: work,
                };
                harmonic = &harmonic + &(&BigFloat::one(work) / &BigFloat::from_i64(j as i64, work));
                if term.is_zero() {
                    break;
                }
                a = &a + &(&term * &harmonic);
                b = &b + &term;
                // terms rise to ~e^{2n} then fall; stop once they have decayed away
                if j > 2 * n && term.mant < BigInt::one() << 4 {
                    break;
                }
                j += 1;
            }
            let lnn = &ln2(work) * &BigFloat::from_i64(log2n as i64, work);
            (&(&a / &b) - &lnn).with_precision(bits)
        })
    }

    /// `zeta(s)` for integer `s >= 2` via Borwein's alternating-series
    /// acceleration of `eta(s)`.
    pub fn zeta(s: u32, bits: u32) -> BigFloat {
        assert!(s >= 2);
        cached(Kind::Zeta(s), bits, |bits| {
            let work = bits + 64;
            let n = ((work as f64) / 2.54).ceil() as u64 + 8;
            // d_k = n * sum_{i=0..k} (n+i-1)! 4^i / ((n-i)! (2i)!)
            let mut d = Vec::with_capacity(n as usize + 1);
            let mut summand = BigRational::new(BigInt::one(), BigInt::from(n)); // i = 0
            let mut partial = summand.clone();
            let n_rat = BigRational::from_integer(BigInt::from(n));
            d.push(&partial * &n_rat);
            for i in 1..=n {
                let num = BigInt::from(n + i - 1) * BigInt::from(4) * BigInt::from(n - i + 1);
                let den = BigInt::from(2 * i) * BigInt::from(2 * i - 1);
                summand *= BigRational::new(num, den);
                partial += &summand;
                d.push(&partial * &n_rat);
            }
            let dn = BigFloat::from_ratio(&d[n as usize], work);
            let mut acc = BigFloat::zero(work);
            for k in 0..n {
                let dk = BigFloat::from_ratio(&d[k as usize], work);
                let num = &dn - &dk;
                let den = num_traits::pow(BigInt::from(k + 1), s as usize);
                let term = BigFloat { mant: num.mant / den, bits: work };
                if k % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            // eta(s) = acc / d_n ; zeta(s) = eta(s) / (1 - 2^{1-s})
            let eta = &acc / &dn;
            let factor = BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::one() << (s - 1) as usize);
            (&eta / &BigFloat::from_ratio(&factor, work)).with_precision(bits)
        })
    }

    /// `sqrt(2*pi)`.
    pub fn sqrt_two_pi(bits: u32) -> BigFloat {
        pi(bits + 32).ldexp(1).sqrt().with_precision(bits)
    }
}
