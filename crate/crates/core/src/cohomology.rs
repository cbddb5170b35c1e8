//! The truncated cohomology ring `H^*(P^{k-1}) = C[s]/(s^k)` and its
//! characteristic-class toolbox: Gamma-classes, graded and classical Chern
//! characters, the morphisms `D^{+/-}`, Euler pairings (exact and via the
//! Grothendieck–Hirzebruch–Riemann–Roch integral), K-theory classes of
//! exterior powers of the tangent bundle, and Bott's dimension formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigfloat::ApproxComplex;
use crate::matrix::{binomial, IntMatrix, Matrix, RatMatrix, ScalarMatrix};
use crate::scalar::SymScalar;
use crate::{Error, Result};

/// Sign selector for the Gamma-classes and `D`-morphisms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassSign {
    Plus,
    Minus,
}

/// Element of `C[s]/(s^k)`; `coeffs[p]` is the coefficient of `s^p`.
#[derive(Clone, PartialEq, Debug)]
pub struct CohClass {
    pub k: usize,
    pub coeffs: Vec<SymScalar>,
}

impl CohClass {
    pub fn zero(k: usize) -> Self {
        CohClass { k, coeffs: vec![SymScalar::zero(); k] }
    }

    pub fn one(k: usize) -> Self {
        let mut c = CohClass::zero(k);
        c.coeffs[0] = SymScalar::one();
        c
    }

    /// `s^p`, zero when `p >= k`.
    pub fn sigma_pow(k: usize, p: usize) -> Self {
        let mut c = CohClass::zero(k);
        if p < k {
            c.coeffs[p] = SymScalar::one();
        }
        c
    }

    pub fn from_coeffs(k: usize, coeffs: Vec<SymScalar>) -> Self {
        assert_eq!(coeffs.len(), k);
        CohClass { k, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.k, other.k);
        CohClass {
            k: self.k,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.k, other.k);
        CohClass {
            k: self.k,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &SymScalar) -> CohClass {
        CohClass { k: self.k, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Cup product: truncated polynomial convolution.
    pub fn cup(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.k, other.k);
        let mut out = CohClass::zero(self.k);
        for i in 0..self.k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..self.k - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        out
    }

    /// `exp` of a class with zero constant term (finite sum).
    pub fn exp(&self) -> Result<CohClass> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid("exp needs a class with zero constant term"));
        }
        let mut acc = CohClass::one(self.k);
        let mut pow = CohClass::one(self.k);
        let mut fact = BigRational::one();
        for p in 1..self.k {
            pow = pow.cup(self);
            fact *= BigRational::from_integer(BigInt::from(p as i64));
            acc = acc.add(&pow.scale(&SymScalar::from_rational(fact.recip())));
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a class with unit constant term.
    pub fn inv_unit(&self) -> Result<CohClass> {
        if self.coeffs[0] != SymScalar::one() {
            return Err(Error::invalid("series inverse needs unit constant term"));
        }
        let mut inv = CohClass::zero(self.k);
        inv.coeffs[0] = SymScalar::one();
        for p in 1..self.k {
            let mut acc = SymScalar::zero();
            for j in 1..=p {
                acc = &acc + &(&self.coeffs[j] * &inv.coeffs[p - j]);
            }
            inv.coeffs[p] = -&acc;
        }
        Ok(inv)
    }

    /// Coefficient of `s^{k-1}` (integration over the fundamental class).
    pub fn integrate(&self) -> SymScalar {
        self.coeffs[self.k - 1].clone()
    }

    /// `exp(-i pi mu)` applied to the class on a `d`-dimensional variety:
    /// component `phi_p` picks up `i^d (-1)^p`. The `Plus` variant applies
    /// `exp(+i pi mu)`, i.e. `i^{-d} (-1)^p`.
    pub fn apply_exp_mu(&self, d: usize, sign: ClassSign) -> CohClass {
        let pref = match sign {
            ClassSign::Minus => SymScalar::i_pow(d as i64),
            ClassSign::Plus => SymScalar::i_pow(-(d as i64)),
        };
        let mut out = CohClass::zero(self.k);
        for p in 0..self.k {
            let s = if p % 2 == 0 { pref.clone() } else { -&pref };
            out.coeffs[p] = &self.coeffs[p] * &s;
        }
        out
    }

    pub fn eval(&self, bits: u32) -> Vec<ApproxComplex> {
        self.coeffs.iter().map(|c| c.eval(bits)).collect()
    }
}

/// K-theory class in the basis `[O], [O(1)], ..., [O(k-1)]` of `K_0(P^{k-1})`.
#[derive(Clone, PartialEq, Debug)]
pub struct KClass {
    pub k: usize,
    pub coords: Vec<BigRational>,
}

impl KClass {
    pub fn zero(k: usize) -> Self {
        KClass { k, coords: vec![BigRational::zero(); k] }
    }

    /// `[O(j)]` for `0 <= j <= k-1`.
    pub fn line_bundle(k: usize, j: usize) -> Self {
        assert!(j < k);
        let mut c = KClass::zero(k);
        c.coords[j] = BigRational::one();
        c
    }

    /// `[O(m)]` for any integer `m`, re-expanded into the Beilinson range via
    /// the Koszul relation `sum_j (-1)^j C(k,j) [O(t+j)] = 0`.
    pub fn line_bundle_any(k: usize, m: i64) -> Self {
        let mut acc = KClass::zero(k);
        acc.add_line_bundle(m, &BigRational::one());
        acc
    }

    fn add_line_bundle(&mut self, m: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let k = self.k as i64;
        if (0..k).contains(&m) {
            self.coords[m as usize] += c;
        } else if m >= k {
            // [O(m)] = sum_{j=0}^{k-1} (-1)^{k+1+j} C(k,j) [O(m-k+j)]
            for j in 0..k {
                let sign = if (k + 1 + j) % 2 == 0 { 1 } else { -1 };
                let coeff = BigRational::from_integer(binomial(k, j) * BigInt::from(sign)) * c;
                self.add_line_bundle(m - k + j, &coeff);
            }
        } else {
            // [O(m)] = sum_{j=1}^{k} (-1)^{j+1} C(k,j) [O(m+j)]
            for j in 1..=k {
                let sign = if (j + 1) % 2 == 0 { 1 } else { -1 };
                let coeff = BigRational::from_integer(binomial(k, j) * BigInt::from(sign)) * c;
                self.add_line_bundle(m + j, &coeff);
            }
        }
    }

    pub fn add(&self, other: &KClass) -> KClass {
        assert_eq!(self.k, other.k);
        KClass {
            k: self.k,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        assert_eq!(self.k, other.k);
        KClass {
            k: self.k,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> KClass {
        KClass { k: self.k, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn scale_int(&self, c: i64) -> KClass {
        self.scale_rat(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Tensor by `O(q)`: shift every twist by `q`, re-expanding as needed.
    pub fn twist(&self, q: i64) -> KClass {
        let mut out = KClass::zero(self.k);
        for (j, c) in self.coords.iter().enumerate() {
            out.add_line_bundle(j as i64 + q, c);
        }
        out
    }

    /// The dual class `E^*` (each `[O(j)]` becomes `[O(-j)]`).
    pub fn dual(&self) -> KClass {
        let mut out = KClass::zero(self.k);
        for (j, c) in self.coords.iter().enumerate() {
            out.add_line_bundle(-(j as i64), c);
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }
}

/// One factor `Gamma(1 +/- s)` truncated at `s^k`, from the Taylor expansion
/// `Gamma(1 - t) = exp(gamma t + sum_{n>=2} zeta(n)/n t^n)`; even zeta values
/// reduce to powers of `pi`.
pub fn gamma_root_class(k: usize, sign: ClassSign) -> CohClass {
    let mut logw = CohClass::zero(k);
    for p in 1..k {
        let term = if p == 1 {
            SymScalar::gamma()
        } else {
            SymScalar::zeta(p as u32).scale(1, p as i64)
        };
        logw.coeffs[p] = match (sign, p % 2) {
            (ClassSign::Minus, _) => term,
            (ClassSign::Plus, 0) => term,
            (ClassSign::Plus, _) => -&term,
        };
    }
    logw.exp().expect("zero constant term")
}

/// `Gamma(1 +/- s)^k`: the Gamma-class of `P^{k-1}` (all `k` Chern roots of
/// the tangent bundle equal the hyperplane class).
pub fn gamma_class(k: usize, sign: ClassSign) -> CohClass {
    let mut logw = CohClass::zero(k);
    for p in 1..k {
        let term = if p == 1 {
            SymScalar::gamma()
        } else {
            SymScalar::zeta(p as u32).scale(1, p as i64)
        };
        let term = match (sign, p % 2) {
            (ClassSign::Minus, _) => term,
            (ClassSign::Plus, 0) => term,
            (ClassSign::Plus, _) => -&term,
        };
        logw.coeffs[p] = term.scale(k as i64, 1);
    }
    logw.exp().expect("zero constant term")
}

/// Graded Chern character `Ch(O(j)) = exp(2 pi i j s)`, extended linearly.
pub fn graded_chern(e: &KClass) -> CohClass {
    let k = e.k;
    let mut out = CohClass::zero(k);
    for (j, c) in e.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = SymScalar::from_rational(c.clone());
        let mut f = BigRational::one();
        for p in 0..k {
            if p > 0 {
                f = f * BigRational::from_integer(BigInt::from(2 * j as i64))
                    / BigRational::from_integer(BigInt::from(p as i64));
            }
            let coeff =
                &(&SymScalar::from_rational(f.clone()) * &SymScalar::i_pow(p as i64))
                    * &SymScalar::pi_pow(p as i64);
            out.coeffs[p] = &out.coeffs[p] + &(&coeff * &c);
        }
    }
    out
}

/// Classical (non-graded) Chern character `ch(O(j)) = exp(j s)`, extended to
/// arbitrary integer twists.
pub fn classical_chern_twists(k: usize, twists: &[(i64, BigRational)]) -> CohClass {
    let mut out = CohClass::zero(k);
    for (j, c) in twists {
        if c.is_zero() {
            continue;
        }
        let mut f = BigRational::one();
        for p in 0..k {
            if p > 0 {
                f = f * BigRational::from_integer(BigInt::from(*j))
                    / BigRational::from_integer(BigInt::from(p as i64));
            }
            out.coeffs[p] = &out.coeffs[p] + &SymScalar::from_rational(&f * c);
        }
    }
    out
}

pub fn classical_chern(e: &KClass) -> CohClass {
    let twists: Vec<(i64, BigRational)> =
        e.coords.iter().enumerate().map(|(j, c)| (j as i64, c.clone())).collect();
    classical_chern_twists(e.k, &twists)
}

/// Classical Todd class `td(P^{k-1}) = (s / (1 - e^{-s}))^k`.
pub fn todd_class(k: usize) -> CohClass {
    // one factor: 1 / sum_{p>=0} (-1)^p s^p/(p+1)!
    let mut den = CohClass::zero(k);
    let mut f = BigRational::one();
    for p in 0..k {
        f /= BigRational::from_integer(BigInt::from(p as i64 + 1));
        let sign = BigRational::from_integer(if p % 2 == 0 { 1 } else { -1 }.into());
        den.coeffs[p] = SymScalar::from_rational(&f * sign);
    }
    let base = den.inv_unit().expect("unit constant term");
    let mut acc = CohClass::one(k);
    for _ in 0..k {
        acc = acc.cup(&base);
    }
    acc
}

/// Graded Todd class of `P^{k-1}`: `prod 2 pi i s / (1 - e^{-2 pi i s})` over
/// the `k` Chern roots.
pub fn graded_todd(k: usize) -> CohClass {
    let mut den = CohClass::zero(k);
    let mut f = BigRational::one();
    for p in 0..k {
        f /= BigRational::from_integer(BigInt::from(p as i64 + 1));
        let sign = BigRational::from_integer(if p % 2 == 0 { 1 } else { -1 }.into());
        let two_pow = BigRational::from_integer(BigInt::one() << p);
        let coeff = SymScalar::from_rational(&f * sign * two_pow);
        den.coeffs[p] =
            &(&coeff * &SymScalar::i_pow(p as i64)) * &SymScalar::pi_pow(p as i64);
    }
    let base = den.inv_unit().expect("unit constant term");
    let mut acc = CohClass::one(k);
    for _ in 0..k {
        acc = acc.cup(&base);
    }
    acc
}

/// `c_1(P^{k-1}) = k s` as a class.
pub fn c1_class(k: usize) -> CohClass {
    let mut c = CohClass::zero(k);
    if k > 1 {
        c.coeffs[1] = SymScalar::from_int(k as i64);
    }
    c
}

/// The morphism `D^{+/-}(E) = i^{d mod 2} (2 pi)^{-d/2} gamma U
/// exp(+/- pi i c1) U Ch(E)`; `gamma` and `c1` are the Gamma-class and first
/// Chern class of the ambient variety, `d` its complex dimension.
pub fn d_morphism(
    e: &KClass,
    gamma: &CohClass,
    c1: &CohClass,
    d: usize,
    sign: ClassSign,
) -> Result<CohClass> {
    if gamma.k != e.k || c1.k != e.k {
        return Err(Error::DimensionMismatch("d_morphism class ranks differ".into()));
    }
    let s = match sign {
        ClassSign::Plus => 1,
        ClassSign::Minus => -1,
    };
    let phase = c1.scale(&(&SymScalar::i_pow(s) * &SymScalar::pi_pow(1)));
    let pref = &SymScalar::i_pow((d % 2) as i64) * &SymScalar::two_pi_half_pow(-(d as i64));
    Ok(gamma.cup(&phase.exp()?).cup(&graded_chern(e)).scale(&pref))
}

/// Exact Euler pairing on twists: `chi(O(a), O(b)) = C(k-1+b-a, b-a)`.
pub fn euler_pairing_int(a: i64, b: i64, k: usize) -> BigInt {
    binomial(k as i64 - 1 + b - a, b - a)
}

/// Euler pairing extended bilinearly to K-classes.
pub fn euler_pairing(e: &KClass, f: &KClass) -> BigRational {
    assert_eq!(e.k, f.k);
    let mut acc = BigRational::zero();
    for (m, a) in e.coords.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (n, b) in f.coords.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += a * b * BigRational::from_integer(euler_pairing_int(m as i64, n as i64, e.k));
        }
    }
    acc
}

/// Euler pairing via the Grothendieck–Hirzebruch–Riemann–Roch integral
/// `chi(E, F) = int ch(E^*) ch(F) td(X)`, returned numerically.
pub fn ghrr_pairing(e: &KClass, f: &KClass, bits: u32) -> ApproxComplex {
    // ch(E^*) directly on negated twists; no basis re-expansion needed
    let dual_twists: Vec<(i64, BigRational)> =
        e.coords.iter().enumerate().map(|(j, c)| (-(j as i64), c.clone())).collect();
    let integrand = classical_chern_twists(e.k, &dual_twists)
        .cup(&classical_chern(f))
        .cup(&todd_class(e.k));
    integrand.integrate().eval(bits)
}

/// Gram matrix of a collection of K-classes under the Euler pairing;
/// requires all pairings to be integral.
pub fn collection_gram(labels: &[KClass]) -> Result<IntMatrix> {
    let n = labels.len();
    let mut out = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let chi = euler_pairing(&labels[i], &labels[j]);
            if !chi.denom().is_one() {
                return Err(Error::invalid("non-integral Euler pairing in collection"));
            }
            out.set(i, j, chi.numer().clone());
        }
    }
    Ok(out)
}

/// `[Lambda^p T(q)]`, by the Euler-sequence recursion
/// `[Lambda^h T] = C(k, h) [O(h)] - [Lambda^{h-1} T]` and twisting.
pub fn lambda_tangent_kclass(p: usize, q: i64, k: usize) -> Result<KClass> {
    if p > k - 1 {
        return Err(Error::invalid(format!("exterior power {p} out of range for rank {k}")));
    }
    let mut acc = KClass::line_bundle(k, 0);
    for h in 1..=p {
        let lead = KClass::line_bundle_any(k, h as i64)
            .scale_rat(&BigRational::from_integer(binomial(k as i64, h as i64)));
        acc = lead.sub(&acc);
    }
    Ok(acc.twist(q))
}

/// `[Lambda^p Omega(q)]`: the dual of `Lambda^p T`, twisted.
pub fn lambda_cotangent_kclass(p: usize, q: i64, k: usize) -> Result<KClass> {
    Ok(lambda_tangent_kclass(p, 0, k)?.dual().twist(q))
}

/// Variant selector for [`bott_dim`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BottBundle {
    Tangent,
    Cotangent,
}

/// Bott's formulas: `dim H^q(P^n, Lambda^p T(t))` and
/// `dim H^q(P^n, Lambda^p Omega(t))`.
pub fn bott_dim(n: i64, p: i64, twist: i64, q: i64, variant: BottBundle) -> BigInt {
    if p < 0 || p > n || q < 0 || q > n {
        return BigInt::zero();
    }
    let t = twist;
    match variant {
        BottBundle::Tangent => {
            if q == 0 && t > -p - 1 {
                binomial(t + n + p + 1, p) * binomial(t + n, n - p)
            } else if q == n - p && t == -n - 1 {
                BigInt::one()
            } else if q == n && t < -n - p - 1 {
                binomial(-t - p - 1, -t - n - 1) * binomial(-t - n - 2, p)
            } else {
                BigInt::zero()
            }
        }
        BottBundle::Cotangent => {
            if q == 0 && t > p {
                binomial(t + n - p, t) * binomial(t - 1, p)
            } else if t == 0 && q == p {
                BigInt::one()
            } else if q == n && t < p - n {
                binomial(-t + p, -t) * binomial(-t - 1, n - p)
            } else {
                BigInt::zero()
            }
        }
    }
}

/// Grading operator of `P^{k-1}`: `mu = diag(p - (k-1)/2)`.
pub fn mu_matrix(k: usize) -> RatMatrix {
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            BigRational::new(BigInt::from(2 * i as i64 - (k as i64 - 1)), BigInt::from(2))
        } else {
            BigRational::zero()
        }
    })
}

/// `R = c_1(P) U (-) = k J_1` in the basis `(1, s, ..., s^{k-1})`.
pub fn r_matrix(k: usize) -> IntMatrix {
    Matrix::from_fn(
        k,
        k,
        |i, j| if i == j + 1 { BigInt::from(k as i64) } else { BigInt::zero() },
    )
}

/// Poincaré pairing `eta_{ab} = delta_{a+b-2, k-1}` (antidiagonal ones).
pub fn eta_matrix(k: usize) -> IntMatrix {
    Matrix::from_fn(k, k, |i, j| if i + j == k - 1 { BigInt::one() } else { BigInt::zero() })
}

/// `exp(i pi num mu)` for `P^{k-1}` — exact because the `mu` eigenvalues are
/// half-integers: the diagonal entry is `i^{num (2p - k + 1)}`.
pub fn exp_i_pi_mu(k: usize, num: i64) -> ScalarMatrix {
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            SymScalar::exp_i_pi_half(num * (2 * i as i64 - k as i64 + 1))
        } else {
            SymScalar::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::exp_nilpotent_scalar;

    #[test]
    fn gamma_class_small_cases() {
        let g = gamma_class(2, ClassSign::Minus);
        assert_eq!(g.coeffs[0], SymScalar::one());
        assert_eq!(g.coeffs[1], SymScalar::gamma().scale(2, 1));
        for k in 2..=8 {
            let g = gamma_class(k, ClassSign::Minus);
            assert_eq!(g.coeffs[1], SymScalar::gamma().scale(k as i64, 1));
            let gp = gamma_class(k, ClassSign::Plus);
            assert_eq!(gp.coeffs[1], SymScalar::gamma().scale(-(k as i64), 1));
        }
    }

    #[test]
    fn gamma_reflection_identity_single_root() {
        // Gamma(1+s) U Gamma(1-s) U e^{i pi s} U (1 - e^{-2 pi i s})/(2 pi i s) = 1
        for k in 2..=8usize {
            let gp = gamma_root_class(k, ClassSign::Plus);
            let gm = gamma_root_class(k, ClassSign::Minus);
            let phase = CohClass::sigma_pow(k, 1)
                .scale(&(&SymScalar::i() * &SymScalar::pi_pow(1)))
                .exp()
                .unwrap();
            // (1 - e^{-2 pi i s})/(2 pi i s): coefficient of s^m is
            // -(-2 pi i)^m/(m+1)!
            let mut quot = CohClass::zero(k);
            let mut f = BigRational::one();
            for m in 0..k {
                f /= BigRational::from_integer(BigInt::from(m as i64 + 1));
                let sign = BigRational::from_integer(if m % 2 == 0 { 1 } else { -1 }.into());
                let two_pow = BigRational::from_integer(BigInt::one() << m);
                quot.coeffs[m] = &(&SymScalar::from_rational(&f * sign * two_pow)
                    * &SymScalar::i_pow(m as i64))
                    * &SymScalar::pi_pow(m as i64);
            }
            let lhs = gp.cup(&gm).cup(&phase).cup(&quot);
            assert_eq!(lhs, CohClass::one(k), "k = {k}");
        }
    }

    #[test]
    fn gamma_product_is_graded_todd_times_phase() {
        for k in 2..=6usize {
            let gp = gamma_class(k, ClassSign::Plus);
            let gm = gamma_class(k, ClassSign::Minus);
            let phase = c1_class(k)
                .scale(&(&SymScalar::i_pow(-1) * &SymScalar::pi_pow(1)))
                .exp()
                .unwrap();
            assert_eq!(gp.cup(&gm), graded_todd(k).cup(&phase), "k = {k}");
        }
    }

    #[test]
    fn graded_chern_basics() {
        let k = 3;
        let e = KClass::line_bundle(k, 0);
        assert_eq!(graded_chern(&e), CohClass::one(k));
        let e1 = KClass::line_bundle(k, 1);
        let ch = graded_chern(&e1);
        assert_eq!(ch.coeffs[0], SymScalar::one());
        assert_eq!(ch.coeffs[1], (&SymScalar::i() * &SymScalar::pi_pow(1)).scale(2, 1));
        assert_eq!(ch.coeffs[2], SymScalar::pi_pow(2).scale(-2, 1));
        let sum = graded_chern(&e.add(&e1));
        assert_eq!(sum, graded_chern(&e).add(&graded_chern(&e1)));
    }

    #[test]
    fn euler_pairing_examples() {
        assert_eq!(euler_pairing_int(0, 1, 4), BigInt::from(4));
        assert_eq!(euler_pairing_int(2, 2, 4), BigInt::one());
        assert_eq!(euler_pairing_int(0, 3, 5), BigInt::from(35));
        assert_eq!(euler_pairing_int(1, 0, 4), BigInt::zero());
    }

    #[test]
    fn ghrr_matches_binomial() {
        let bits = 256;
        let tol = {
            let mut t = crate::bigfloat::BigFloat::one(bits);
            for _ in 0..40 {
                t = &t / &crate::bigfloat::BigFloat::from_i64(10, bits);
            }
            t
        };
        for k in 2..=10 {
            for a in 0..k {
                for b in 0..k {
                    let e = KClass::line_bundle(k, a);
                    let f = KClass::line_bundle(k, b);
                    let got = ghrr_pairing(&e, &f, bits);
                    let want = crate::bigfloat::BigFloat::from_bigint(
                        &euler_pairing_int(a as i64, b as i64, k),
                        bits,
                    );
                    assert!((&got.re - &want).abs() < tol, "k={k} a={a} b={b}");
                    assert!(got.im.abs() < tol);
                }
            }
        }
    }

    #[test]
    fn lambda_tangent_examples() {
        assert_eq!(lambda_tangent_kclass(0, 0, 3).unwrap(), KClass::line_bundle(3, 0));
        let t = lambda_tangent_kclass(1, 0, 3).unwrap();
        assert_eq!(
            t,
            KClass::line_bundle(3, 1).scale_int(3).sub(&KClass::line_bundle(3, 0))
        );
        // k=3: [Lambda^2 T] is the anticanonical class [O(3)]
        let top = lambda_tangent_kclass(2, 0, 3).unwrap();
        let o3 = KClass::line_bundle_any(3, 3);
        assert_eq!(top, o3);
        assert_eq!(graded_chern(&top), graded_chern(&o3));
        assert!(lambda_tangent_kclass(3, 0, 3).is_err());
    }

    #[test]
    fn twist_reexpansion_consistency() {
        for k in 2..=6 {
            for a in 0..k as i64 {
                for b in 0..k as i64 {
                    let e = KClass::line_bundle_any(k as usize, a - 2).twist(1);
                    let f = KClass::line_bundle_any(k as usize, b - 2).twist(1);
                    let direct = euler_pairing_int(a - 1, b - 1, k as usize);
                    assert_eq!(euler_pairing(&e, &f), BigRational::from_integer(direct));
                }
            }
        }
    }

    #[test]
    fn dual_is_an_involution() {
        for k in 2..=6usize {
            for j in 0..k {
                let e = KClass::line_bundle(k, j);
                assert_eq!(e.dual().dual(), e);
            }
        }
    }

    #[test]
    fn bott_examples() {
        for k in 2i64..=6 {
            let n = k - 1;
            for h in 0..=n {
                assert_eq!(
                    bott_dim(n, h, -h, 0, BottBundle::Tangent),
                    binomial(k, h),
                    "k={k} h={h}"
                );
                for q in 1..=n {
                    assert_eq!(bott_dim(n, h, -h, q, BottBundle::Tangent), BigInt::zero());
                }
            }
        }
        assert_eq!(bott_dim(2, 1, -3, 1, BottBundle::Tangent), BigInt::one());
        assert_eq!(bott_dim(2, 0, 0, 0, BottBundle::Tangent), BigInt::one());
        for n in 1i64..=4 {
            for p in 0..=n {
                for q in 0..=n {
                    let want = if p == q { BigInt::one() } else { BigInt::zero() };
                    assert_eq!(bott_dim(n, p, 0, q, BottBundle::Cotangent), want);
                }
            }
        }
    }

    #[test]
    fn beilinson_gram_is_unipotent() {
        for k in 2..=8usize {
            let labels: Vec<KClass> = (0..k).map(|j| KClass::line_bundle(k, j)).collect();
            let g = collection_gram(&labels).unwrap();
            assert!(g.is_upper_unitriangular());
            assert_eq!(g.at(0, 1), &BigInt::from(k as i64));
        }
    }

    #[test]
    fn d_morphism_p1_example() {
        // P^1 (d=1): D^-([O]) = (i/sqrt(2 pi)) (1 + (2 gamma - 2 pi i) s)
        let k = 2;
        let e = KClass::line_bundle(k, 0);
        let dm = d_morphism(
            &e,
            &gamma_class(k, ClassSign::Minus),
            &c1_class(k),
            k - 1,
            ClassSign::Minus,
        )
        .unwrap();
        let pref = &SymScalar::i() * &SymScalar::two_pi_half_pow(-1);
        assert_eq!(dm.coeffs[0], pref);
        let lin = &SymScalar::gamma().scale(2, 1)
            - &(&SymScalar::i() * &SymScalar::pi_pow(1)).scale(2, 1);
        assert_eq!(dm.coeffs[1], &pref * &lin);
        let z = d_morphism(
            &KClass::zero(k),
            &gamma_class(k, ClassSign::Minus),
            &c1_class(k),
            1,
            ClassSign::Minus,
        )
        .unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn d_morphism_pairing_recovers_chi() {
        // int e^{-i pi mu}(D^-(E)) U e^{i pi c1} U D^-(F) = chi(E, F)
        for k in 2..=6usize {
            let d = k - 1;
            let gam = gamma_class(k, ClassSign::Minus);
            let c1 = c1_class(k);
            let phase = c1.scale(&(&SymScalar::i() * &SymScalar::pi_pow(1))).exp().unwrap();
            for a in 0..k {
                for b in 0..k {
                    let e = KClass::line_bundle(k, a);
                    let f = KClass::line_bundle(k, b);
                    let de = d_morphism(&e, &gam, &c1, d, ClassSign::Minus).unwrap();
                    let df = d_morphism(&f, &gam, &c1, d, ClassSign::Minus).unwrap();
                    let lhs =
                        de.apply_exp_mu(d, ClassSign::Minus).cup(&phase).cup(&df).integrate();
                    let want = SymScalar::from_rational(BigRational::from_integer(
                        euler_pairing_int(a as i64, b as i64, k),
                    ));
                    assert_eq!(lhs, want, "k={k} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn euler_pairing_twisted_by_canonical_operator() {
        // chi(E, F) = chi(F, kappa E): the canonical operator plays the
        // Serre-functor role at the lattice level
        let bits = 192;
        let tol = {
            let mut t = crate::bigfloat::BigFloat::one(bits);
            for _ in 0..35 {
                t = &t / &crate::bigfloat::BigFloat::from_i64(10, bits);
            }
            t
        };
        for k in [3usize, 4] {
            let gram = crate::mukai::beilinson_gram(k);
            let kappa = crate::mukai::canonical_operator(&gram).unwrap();
            for a in 0..k {
                for b in 0..k {
                    let e = KClass::line_bundle(k, a);
                    let f = KClass::line_bundle(k, b);
                    // kappa E in the Beilinson basis
                    let mut ke = KClass::zero(k);
                    for (j, c) in ke.coords.iter_mut().enumerate() {
                        *c = BigRational::from_integer(kappa.at(j, a).clone());
                    }
                    assert_eq!(euler_pairing(&e, &f), euler_pairing(&f, &ke), "k={k} {a}{b}");
                    // and through the Riemann-Roch route
                    let lhs = ghrr_pairing(&e, &f, bits);
                    let rhs = ghrr_pairing(&f, &ke, bits);
                    assert!((&lhs.re - &rhs.re).abs() < tol);
                }
            }
        }
    }

    #[test]
    fn mu_eta_compatibility() {
        for k in 2..=10usize {
            let mu = mu_matrix(k);
            let eta = eta_matrix(k).to_rational();
            let lhs = &(&mu.transpose() * &eta) + &(&eta * &mu);
            assert!(lhs == Matrix::zero(k, k));
            // {Rx,y} + {x,Ry} = 0 with {a,b} = eta(e^{i pi mu} a, b), i.e.
            // R^T B + B R = 0 for the twisted pairing B = e^{i pi mu} eta
            let e_mu = exp_i_pi_mu(k, 1);
            let r = r_matrix(k).to_scalar();
            let eta_s = eta_matrix(k).to_scalar();
            let b = &e_mu * &eta_s;
            let lhs = &(&r.transpose() * &b) + &(&b * &r);
            assert!(lhs == Matrix::zero(k, k), "k={k}");
        }
    }

    #[test]
    fn exp_nilpotent_r_matrix() {
        // e^{2 pi i R} for k=2: R = 2 J_1 gives I + 4 pi i J_1
        let r = r_matrix(2).to_scalar();
        let c = &SymScalar::i() * &SymScalar::pi_pow(1).scale(2, 1);
        let m = exp_nilpotent_scalar(&r, &c).unwrap();
        assert_eq!(m.at(1, 0), &(&SymScalar::i() * &SymScalar::pi_pow(1)).scale(4, 1));
    }
}
