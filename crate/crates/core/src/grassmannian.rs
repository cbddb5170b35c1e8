//! The wedge (quantum Satake) model of `G(r, k)`: Schubert classes as
//! wedges of hyperplane powers, classical and quantum Pieri products,
//! spectrum and coalescence of the quantum multiplication, the monodromy
//! data transferred from `P^{k-1}` by exterior powers, the Gamma-class
//! identity, the twisted Kapranov Gram matrix and quasi-periodicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{consts, ApproxComplex, BigFloat};
use crate::cohomology::{gamma_root_class, ClassSign, CohClass};
use crate::matrix::{
    binomial, sign_conjugate_witness, subsets_lex, CxMatrix, IntMatrix, Matrix, RatMatrix,
    ScalarMatrix,
};
use crate::monodromy::{CMatrix, DataMeta, MonodromyData};
use crate::mukai::beilinson_gram;
use crate::projective::{canonical_coords, chamber0_data, chamber0_stokes, Backend};
use crate::scalar::SymScalar;
use crate::{Error, Result};

/// A partition fitting in the `r x (k-r)` box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    pub parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn part(&self, j: usize) -> usize {
        self.parts.get(j).copied().unwrap_or(0)
    }

    pub fn fits(&self, r: usize, cols: usize) -> bool {
        self.parts.len() <= r
            && self.parts.first().copied().unwrap_or(0) <= cols
            && self.parts.windows(2).all(|w| w[0] >= w[1])
    }
}

/// The strictly decreasing exponents `lambda_j + r - j` (j = 1..r) of the
/// wedge monomial attached to a Schubert class, returned ascending.
pub fn satake_index(lambda: &Partition, r: usize, k: usize) -> Result<Vec<usize>> {
    if !lambda.fits(r, k - r) {
        return Err(Error::invalid("partition does not fit the box"));
    }
    let mut subset: Vec<usize> = (1..=r).map(|j| lambda.part(j - 1) + r - j).collect();
    subset.reverse();
    Ok(subset)
}

/// Inverse of [`satake_index`]: the partition attached to an ascending
/// exponent subset.
pub fn partition_of_subset(subset: &[usize], r: usize) -> Partition {
    let mut parts: Vec<usize> = subset
        .iter()
        .rev()
        .enumerate()
        .map(|(j0, &a)| a - (r - (j0 + 1)))
        .collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    Partition { parts }
}

/// All partitions in the box, ordered compatibly with the lexicographic
/// subset order of the wedge basis.
pub fn partitions_lex(r: usize, k: usize) -> Vec<Partition> {
    subsets_lex(k, r)
        .into_iter()
        .map(|s| partition_of_subset(&s, r))
        .collect()
}

/// Element of the wedge model: coefficients over the lexicographically
/// ordered `r`-subset basis, with polynomial dependence on the quantum
/// parameter kept as a power-of-`q` index.
#[derive(Clone, PartialEq, Debug)]
pub struct WedgeClass {
    pub r: usize,
    pub k: usize,
    /// `coeffs[pos]` lists `(q_power, coefficient)` pairs
    pub coeffs: Vec<Vec<(usize, BigRational)>>,
}

impl WedgeClass {
    pub fn zero(r: usize, k: usize) -> Self {
        let n = binomial(k as i64, r as i64).to_usize().unwrap();
        WedgeClass { r, k, coeffs: vec![Vec::new(); n] }
    }

    fn add_term(&mut self, pos: usize, q_pow: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = &mut self.coeffs[pos];
        if let Some(e) = slot.iter_mut().find(|(p, _)| *p == q_pow) {
            e.1 += c;
            if e.1.is_zero() {
                slot.retain(|(_, v)| !v.is_zero());
            }
        } else {
            slot.push((q_pow, c));
            slot.sort_by_key(|(p, _)| *p);
        }
    }

    /// The purely classical part (`q^0` coefficients).
    pub fn classical_coeffs(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|slot| {
                slot.iter()
                    .find(|(p, _)| *p == 0)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(BigRational::zero)
            })
            .collect()
    }

    pub fn is_classical(&self) -> bool {
        self.coeffs.iter().all(|slot| slot.iter().all(|(p, _)| *p == 0))
    }
}

/// Insert a signed wedge monomial with (possibly unsorted, possibly
/// colliding) exponents into a class. Coefficients are taken against the
/// Schubert basis, i.e. against descending-exponent wedge monomials, so the
/// sign counts inversions relative to the descending order.
fn push_wedge_monomial(
    out: &mut WedgeClass,
    exps: &[usize],
    q_pow: usize,
    coeff: &BigRational,
    subset_pos: &dyn Fn(&[usize]) -> Option<usize>,
) {
    let r = exps.len();
    let mut sign = 1i64;
    for i in 0..r {
        for j in i + 1..r {
            if exps[i] == exps[j] {
                return; // repeated factor: wedge vanishes
            }
            if exps[i] < exps[j] {
                sign = -sign;
            }
        }
    }
    let mut subset: Vec<usize> = exps.to_vec();
    subset.sort_unstable();
    if let Some(pos) = subset_pos(&subset) {
        out.add_term(pos, q_pow, coeff * BigRational::from_integer(sign.into()));
    }
}

fn subset_position(k: usize, r: usize) -> impl Fn(&[usize]) -> Option<usize> {
    let table = subsets_lex(k, r);
    move |s: &[usize]| table.iter().position(|t| t == s)
}

/// Classical Pieri product `sigma_l U sigma_lambda` in the wedge model:
/// sum over compositions `i_1 + ... + i_r = l` of the slotwise shifts.
pub fn classical_pieri_wedge(
    l: usize,
    lambda: &Partition,
    r: usize,
    k: usize,
) -> Result<WedgeClass> {
    let base = satake_index(lambda, r, k)?; // ascending
    let desc: Vec<usize> = base.iter().rev().copied().collect();
    let mut out = WedgeClass::zero(r, k);
    let pos = subset_position(k, r);
    // enumerate compositions of l into r nonnegative parts
    fn rec(
        slot: usize,
        remaining: usize,
        r: usize,
        k: usize,
        desc: &[usize],
        exps: &mut Vec<usize>,
        out: &mut WedgeClass,
        pos: &dyn Fn(&[usize]) -> Option<usize>,
    ) {
        if slot == r {
            if remaining == 0 {
                push_wedge_monomial(out, exps, 0, &BigRational::one(), pos);
            }
            return;
        }
        for add in 0..=remaining {
            let e = desc[slot] + add;
            if e >= k {
                continue; // sigma^e = 0 classically
            }
            exps.push(e);
            rec(slot + 1, remaining - add, r, k, desc, exps, out, pos);
            exps.pop();
        }
    }
    let mut exps = Vec::new();
    rec(0, l, r, k, &desc, &mut exps, &mut out, &pos);
    Ok(out)
}

/// The standard partition-level Pieri rule: add `l` boxes, at most one per
/// column (horizontal strip), inside the box.
pub fn pieri_rule_oracle(l: usize, lambda: &Partition, r: usize, k: usize) -> Vec<Partition> {
    let cols = k - r;
    let mut out = Vec::new();
    // enumerate nu with nu_1 >= lambda_1 >= nu_2 >= lambda_2 >= ...,
    // |nu| = |lambda| + l, nu_1 <= cols
    fn rec(
        j: usize,
        r: usize,
        cols: usize,
        lambda: &Partition,
        remaining: usize,
        prev: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if j == r {
            if remaining == 0 {
                out.push(Partition::new(acc.clone()));
            }
            return;
        }
        let lo = lambda.part(j);
        let hi = if j == 0 { cols } else { lambda.part(j - 1).min(prev) };
        for nu_j in lo..=hi {
            let add = nu_j - lo;
            if add > remaining {
                break;
            }
            acc.push(nu_j);
            rec(j + 1, r, cols, lambda, remaining - add, nu_j, acc, out);
            acc.pop();
        }
    }
    let mut acc = Vec::new();
    rec(0, r, cols, lambda, l, usize::MAX, &mut acc, &mut out);
    out
}

/// Multiplication by the power-sum class `p_l` in the (quantum) wedge model:
/// `sum_i (... ^ sigma_l *_q sigma^{a_i} ^ ...)` with the small quantum
/// product of the projective space at `q -> (-1)^{r-1} q`.
pub fn p_class_mult(l: usize, lambda: &Partition, r: usize, k: usize) -> Result<WedgeClass> {
    if l > k - 1 {
        return Err(Error::invalid("power-sum degree out of range"));
    }
    let base = satake_index(lambda, r, k)?;
    let desc: Vec<usize> = base.iter().rev().copied().collect();
    let mut out = WedgeClass::zero(r, k);
    let pos = subset_position(k, r);
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    for slot in 0..r {
        let e = desc[slot] + l;
        let mut exps: Vec<usize> = desc.clone();
        if e <= k - 1 {
            exps[slot] = e;
            push_wedge_monomial(&mut out, &exps, 0, &BigRational::one(), &pos);
        } else {
            // sigma^a * sigma^b = q sigma^{a+b-k} for k <= a+b <= 2k-2,
            // with q -> (-1)^{r-1} q
            exps[slot] = e - k;
            let c = if (r - 1) % 2 == 0 { BigRational::one() } else { minus_one.clone() };
            push_wedge_monomial(&mut out, &exps, 1, &c, &pos);
        }
    }
    Ok(out)
}

/// Matrix of `p_l *_q` on the wedge basis at a numeric `q`.
pub fn p_operator_matrix(l: usize, r: usize, k: usize, q: &ApproxComplex) -> Result<CxMatrix> {
    let bits = q.precision();
    let parts = partitions_lex(r, k);
    let n = parts.len();
    let mut m = CxMatrix::zero(n, n);
    for (col, lambda) in parts.iter().enumerate() {
        let w = p_class_mult(l, lambda, r, k)?;
        for (row, slot) in w.coeffs.iter().enumerate() {
            let mut acc = ApproxComplex::zero(bits);
            for (q_pow, c) in slot {
                let mut term = ApproxComplex::new(
                    BigFloat::from_ratio(c, bits),
                    BigFloat::zero(bits),
                );
                for _ in 0..*q_pow {
                    term = &term * q;
                }
                acc = &acc + &term;
            }
            m.set(row, col, acc);
        }
    }
    Ok(m)
}

/// Eigenvalues of the quantum multiplication on `G(r, k)` at the point `t`:
/// sums of `r`-subsets of the `P^{k-1}` canonical coordinates at the
/// shifted point `t + (r-1) pi i`.
pub fn grass_spectrum(r: usize, k: usize, t: &ApproxComplex) -> Vec<ApproxComplex> {
    let bits = t.precision();
    let shifted = ApproxComplex::new(
        t.re.clone(),
        &t.im + &(&consts::pi(bits) * &BigFloat::from_i64(r as i64 - 1, bits)),
    );
    let us = canonical_coords(k, &shifted);
    subsets_lex(k, r)
        .into_iter()
        .map(|s| {
            let mut acc = ApproxComplex::zero(bits);
            for i in s {
                acc = &acc + &us[i];
            }
            acc
        })
        .collect()
}

/// Coalescence criterion: the spectrum is non-simple exactly when
/// `P1(k) <= r <= k - P1(k)` with `P1` the smallest prime factor.
pub fn coalescence(r: usize, k: usize) -> bool {
    let p1 = (2..=k).find(|d| k % d == 0).unwrap_or(k);
    p1 <= r && r <= k - p1
}

/// Coefficients of the `k`-th cyclotomic polynomial.
pub fn cyclotomic_poly(k: usize) -> Vec<BigInt> {
    // x^k - 1 divided by the product of all proper cyclotomic factors
    fn poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        let mut rem = num.to_vec();
        let dn = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dn];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dn].clone() / den[dn].clone();
            quot[i] = c.clone();
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        quot
    }
    let mut acc = vec![BigInt::one()]; // product of proper divisors' cyclotomics
    for d in 1..k {
        if k % d == 0 {
            let phi_d = cyclotomic_poly(d);
            // multiply acc by phi_d
            let mut next = vec![BigInt::zero(); acc.len() + phi_d.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in phi_d.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
    }
    let mut xk1 = vec![BigInt::zero(); k + 1];
    xk1[0] = -BigInt::one();
    xk1[k] = BigInt::one();
    poly_div(&xk1, &acc)
}

/// Exact detection of spectrum collisions via cyclotomic arithmetic: two
/// subset sums of `k`-th roots of unity coincide iff their difference is a
/// multiple of the cyclotomic polynomial.
pub fn spectrum_has_collision(r: usize, k: usize) -> bool {
    let phi = cyclotomic_poly(k);
    let deg = phi.len() - 1;
    let reduce = |subset: &[usize]| -> Vec<BigInt> {
        let mut p = vec![BigInt::zero(); k];
        for &h in subset {
            p[h] += 1;
        }
        // reduce modulo the cyclotomic polynomial
        for i in (deg..k).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = p[i].clone();
            for (j, f) in phi.iter().enumerate() {
                p[i - deg + j] -= &c * f;
            }
        }
        p.truncate(deg);
        p
    };
    let mut seen = std::collections::HashSet::new();
    for s in subsets_lex(k, r) {
        let key: Vec<String> = reduce(&s).iter().map(|c| c.to_string()).collect();
        if !seen.insert(key) {
            return true;
        }
    }
    false
}

/// The wedge-derivation matrix of `sigma U` on the lexicographic subset
/// basis: bump one exponent by one wherever the result stays a subset.
pub fn wedge_derivation_matrix(r: usize, k: usize) -> IntMatrix {
    let subsets = subsets_lex(k, r);
    let n = subsets.len();
    let pos = subset_position(k, r);
    let mut d = IntMatrix::zero(n, n);
    for (col, s) in subsets.iter().enumerate() {
        for j in 0..r {
            let mut t = s.clone();
            t[j] += 1;
            if t[j] >= k || (j + 1 < r && t[j] == t[j + 1]) {
                continue;
            }
            if let Some(row) = pos(&t) {
                let v = d.at(row, col) + BigInt::one();
                d.set(row, col, v);
            }
        }
    }
    d
}

/// `mu` of `G(r, k)` on the wedge basis: diagonal with entries the subset
/// sums of the `P^{k-1}` grading.
pub fn grass_mu(r: usize, k: usize) -> RatMatrix {
    let subsets = subsets_lex(k, r);
    let n = subsets.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let s: i64 = subsets[i].iter().map(|&a| 2 * a as i64 - (k as i64 - 1)).sum();
            BigRational::new(BigInt::from(s), BigInt::from(2))
        } else {
            BigRational::zero()
        }
    })
}

/// `eta` of `G(r, k)` on the wedge basis: `(-1)^{C(r,2)}` times the `r`-th
/// compound of the `P^{k-1}` pairing.
pub fn grass_eta(r: usize, k: usize) -> Result<IntMatrix> {
    let eta_p = crate::cohomology::eta_matrix(k);
    let w = eta_p.compound(r)?;
    if (r * (r - 1) / 2) % 2 == 1 {
        Ok(-&w)
    } else {
        Ok(w)
    }
}

/// `R = c_1(G) U = k *` wedge derivation.
pub fn grass_r(r: usize, k: usize) -> IntMatrix {
    wedge_derivation_matrix(r, k).scale(&BigInt::from(k as i64))
}

/// `exp(pi i (r-1) sigma_1 U)` on the wedge basis (exact).
pub fn grass_phase_matrix(r: usize, k: usize) -> Result<ScalarMatrix> {
    let d = wedge_derivation_matrix(r, k).to_scalar();
    let c = (&SymScalar::i() * &SymScalar::pi_pow(1)).scale(r as i64 - 1, 1);
    crate::matrix::exp_nilpotent_scalar(&d, &c)
}

/// Monodromy data of `G(r, k)` at chamber `m` of the small quantum locus,
/// transferred from the `P^{k-1}` data at chamber `m + r - 1` by the
/// exterior-power identification.
pub fn grass_monodromy(r: usize, k: usize, chamber: usize, backend: Backend) -> Result<MonodromyData> {
    if r == 0 || r >= k {
        return Err(Error::invalid("need 0 < r < k"));
    }
    let (p0, _) = chamber0_data(k, Backend::Symbolic)?;
    let walk = crate::projective::chamber_walk(k, &p0, chamber + r - 1)?;
    let p_data = &walk[chamber + r - 1];
    let s_g = p_data.stokes.compound(r)?;
    let c_p = match &p_data.c_mat {
        CMatrix::Symbolic(m) => m.clone(),
        CMatrix::Numeric(_) => unreachable!("built symbolically above"),
    };
    let wedge_c = c_p.compound(r)?;
    // C_G = i^{-C(r,2)} exp(pi i (r-1) sigma_1) (wedge C)
    let pref = SymScalar::i_pow(-((r * (r - 1) / 2) as i64));
    let c_g = (&grass_phase_matrix(r, k)? * &wedge_c).scale(&pref);
    Ok(MonodromyData {
        mu: grass_mu(r, k),
        r_mat: grass_r(r, k),
        eta: grass_eta(r, k)?,
        stokes: s_g,
        c_mat: match backend {
            Backend::Symbolic => CMatrix::Symbolic(c_g),
            Backend::Numeric(bits) => CMatrix::Numeric(c_g.eval(bits)),
        },
        meta: DataMeta {
            space: format!("G({r},{k})"),
            dim: r * (k - r),
            chamber: Some(chamber as i64),
        },
    })
}

/// Stokes matrix of `G(r, k)` at chamber `m` (fast path).
pub fn grass_stokes(r: usize, k: usize, chamber: usize) -> Result<IntMatrix> {
    let s0 = chamber0_stokes(k)?;
    let walk = crate::projective::stokes_walk(k, &s0, chamber + r - 1)?;
    walk[chamber + r - 1].compound(r)
}

/// `Psi_G = i^{C(r,2)} wedge(Psi_P at the shifted point)`.
pub fn grass_psi(r: usize, k: usize, t: &ApproxComplex) -> Result<CxMatrix> {
    let bits = t.precision();
    let shifted = ApproxComplex::new(
        t.re.clone(),
        &t.im + &(&consts::pi(bits) * &BigFloat::from_i64(r as i64 - 1, bits)),
    );
    let psi_p = crate::projective::psi_matrix(k, &shifted)?;
    let wedge = psi_p.compound(r)?;
    let pref = SymScalar::i_pow((r * (r - 1) / 2) as i64).eval(bits);
    Ok(wedge.map(|z| z * &pref))
}

/// Truncated polynomial ring `C[x_1..x_r]/(x_i^k)` over the symbolic
/// scalars, used for the Chern-root route to the Gamma-class of `G`.
#[derive(Clone, PartialEq, Debug)]
struct MultiPoly {
    r: usize,
    k: usize,
    /// dense coefficients, index = sum exps[i] * k^i
    c: Vec<SymScalar>,
}

impl MultiPoly {
    fn zero(r: usize, k: usize) -> Self {
        MultiPoly { r, k, c: vec![SymScalar::zero(); k.pow(r as u32)] }
    }

    fn one(r: usize, k: usize) -> Self {
        let mut p = MultiPoly::zero(r, k);
        p.c[0] = SymScalar::one();
        p
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.r).map(|i| self.k.pow(i as u32)).collect()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly::zero(self.r, self.k);
        let idx_exps: Vec<Vec<usize>> = (0..self.c.len())
            .map(|mut idx| {
                let mut e = Vec::with_capacity(self.r);
                for _ in 0..self.r {
                    e.push(idx % self.k);
                    idx /= self.k;
                }
                e
            })
            .collect();
        for (ia, ca) in self.c.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, cb) in other.c.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let ea = &idx_exps[ia];
                let eb = &idx_exps[ib];
                if (0..self.r).any(|i| ea[i] + eb[i] >= self.k) {
                    continue;
                }
                let idx: usize = (0..self.r).map(|i| (ea[i] + eb[i]) * self.k.pow(i as u32)).sum();
                out.c[idx] = &out.c[idx] + &(ca * cb);
            }
        }
        out
    }

    /// Insert a univariate series in variable `var`.
    fn from_univariate(r: usize, k: usize, var: usize, coeffs: &[SymScalar]) -> Self {
        let mut p = MultiPoly::zero(r, k);
        let stride = k.pow(var as u32);
        for (e, c) in coeffs.iter().enumerate().take(k) {
            p.c[e * stride] = c.clone();
        }
        p
    }

    fn scale(&self, s: &SymScalar) -> Self {
        MultiPoly { r: self.r, k: self.k, c: self.c.iter().map(|x| x * s).collect() }
    }

    fn add(&self, o: &Self) -> Self {
        MultiPoly {
            r: self.r,
            k: self.k,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        MultiPoly {
            r: self.r,
            k: self.k,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    /// Read off the wedge-class coefficients of an antisymmetric polynomial:
    /// coefficient of the ascending-slot monomial `x_1^{i_1} ... x_r^{i_r}`.
    fn antisym_to_wedge(&self) -> Vec<SymScalar> {
        let strides = self.strides();
        subsets_lex(self.k, self.r)
            .into_iter()
            .map(|s| {
                let idx: usize = s.iter().enumerate().map(|(v, &e)| e * strides[v]).sum();
                self.c[idx].clone()
            })
            .collect()
    }
}

/// univariate `exp(2 pi i a x)` truncated at `x^k`
fn exp_two_pi_i_ax(k: usize, a: i64) -> Vec<SymScalar> {
    let mut out = Vec::with_capacity(k);
    let mut f = BigRational::one();
    for p in 0..k {
        if p > 0 {
            f = f * BigRational::from_integer(BigInt::from(2 * a))
                / BigRational::from_integer(BigInt::from(p as i64));
        }
        out.push(
            &(&SymScalar::from_rational(f.clone()) * &SymScalar::i_pow(p as i64))
                * &SymScalar::pi_pow(p as i64),
        );
    }
    out
}

/// Both sides of the Gamma-class identity for `G(r, k)` and a partition
/// `mu`; returns the wedge coefficients `(chern_root_route, wedge_route)`.
pub fn gamma_class_g_both_sides(
    r: usize,
    k: usize,
    mu: &Partition,
    sign: ClassSign,
) -> Result<(Vec<SymScalar>, Vec<SymScalar>)> {
    if !mu.fits(r, k - r) {
        return Err(Error::invalid("partition does not fit the box"));
    }
    // ---- Chern-root route:
    // (2 pi i)^{-C(r,2)} e^{-pi i (r-1) (x_1+..+x_r)}
    //   det(e^{2 pi i x_i (mu_h + r - h)})_{i,h} prod_i Gamma(1 +/- x_i)^k
    let c2 = (r * (r - 1) / 2) as i64;
    let pref = &SymScalar::i_pow(-c2)
        * &(&SymScalar::pi_pow(-c2)
            * &SymScalar::from_rational(BigRational::new(
                BigInt::one(),
                BigInt::one() << (c2 as usize),
            )));
    // e^{-pi i (r-1) x} as univariate
    let phase_coeffs: Vec<SymScalar> = {
        let mut out = Vec::with_capacity(k);
        let mut f = BigRational::one();
        for p in 0..k {
            if p > 0 {
                f = f * BigRational::from_integer(BigInt::from(-(r as i64 - 1)))
                    / BigRational::from_integer(BigInt::from(p as i64));
            }
            out.push(
                &(&SymScalar::from_rational(f.clone()) * &SymScalar::i_pow(p as i64))
                    * &SymScalar::pi_pow(p as i64),
            );
        }
        out
    };
    let gamma_pow = {
        // Gamma(1 +/- x)^k as univariate coefficients
        let root = gamma_root_class(k, sign);
        let mut acc = CohClass::one(k);
        for _ in 0..k {
            acc = acc.cup(&root);
        }
        acc.coeffs
    };
    let mut lhs = MultiPoly::one(r, k);
    for v in 0..r {
        lhs = lhs.mul(&MultiPoly::from_univariate(r, k, v, &phase_coeffs));
        lhs = lhs.mul(&MultiPoly::from_univariate(r, k, v, &gamma_pow));
    }
    // determinant of the r x r matrix with entries e^{2 pi i x_i a_h},
    // a_h = mu_h + r - h (h = 1..r)
    let a: Vec<i64> = (1..=r).map(|h| mu.part(h - 1) as i64 + r as i64 - h as i64).collect();
    let mut det = MultiPoly::zero(r, k);
    let perms = permutations(r);
    for (perm, psign) in perms {
        let mut term = MultiPoly::one(r, k);
        for (i, &h) in perm.iter().enumerate() {
            term = term.mul(&MultiPoly::from_univariate(
                r,
                k,
                i,
                &exp_two_pi_i_ax(k, a[h]),
            ));
        }
        det = if psign > 0 { det.add(&term) } else { det.sub(&term) };
    }
    let lhs = lhs.mul(&det).scale(&pref);
    let lhs_wedge = lhs.antisym_to_wedge();

    // ---- wedge route:
    // (2 pi i)^{-C(r,2)} exp(-pi i (r-1) D) applied to the wedge of
    // Gamma(1 +/- s)^k U Ch(O(a_h))
    let classes: Vec<CohClass> = a
        .iter()
        .map(|&ah| {
            let mut acc = CohClass::from_coeffs(k, gamma_pow.clone());
            let ch = CohClass::from_coeffs(k, exp_two_pi_i_ax(k, ah));
            acc = acc.cup(&ch);
            acc
        })
        .collect();
    // wedge of r classes: expand into the subset basis with sort signs
    let n = binomial(k as i64, r as i64).to_usize().unwrap();
    let mut wedge = vec![SymScalar::zero(); n];
    let pos = subset_position(k, r);
    fn expand(
        slot: usize,
        r: usize,
        k: usize,
        classes: &[CohClass],
        exps: &mut Vec<usize>,
        coeff: SymScalar,
        wedge: &mut [SymScalar],
        pos: &dyn Fn(&[usize]) -> Option<usize>,
    ) {
        if coeff.is_zero() {
            return;
        }
        if slot == r {
            // signed sort
            let mut sorted: Vec<usize> = exps.clone();
            let mut sign = 1i64;
            for i in 0..r {
                for j in i + 1..r {
                    if exps[i] == exps[j] {
                        return;
                    }
                    if exps[i] > exps[j] {
                        sign = -sign;
                    }
                }
            }
            sorted.sort_unstable();
            if let Some(p) = pos(&sorted) {
                let add = if sign > 0 { coeff } else { -&coeff };
                wedge[p] = &wedge[p] + &add;
            }
            return;
        }
        for e in 0..k {
            if classes[slot].coeffs[e].is_zero() {
                continue;
            }
            exps.push(e);
            expand(
                slot + 1,
                r,
                k,
                classes,
                exps,
                &coeff * &classes[slot].coeffs[e],
                wedge,
                pos,
            );
            exps.pop();
        }
    }
    let mut exps = Vec::new();
    expand(0, r, k, &classes, &mut exps, SymScalar::one(), &mut wedge, &pos);
    // apply exp(-pi i (r-1) D) and the prefactor
    let d_mat = wedge_derivation_matrix(r, k).to_scalar();
    let c = (&SymScalar::i() * &SymScalar::pi_pow(1)).scale(-(r as i64 - 1), 1);
    let phase = crate::matrix::exp_nilpotent_scalar(&d_mat, &c)?;
    let rotated = phase.mul_vec(&wedge);
    let rhs_wedge: Vec<SymScalar> = rotated.iter().map(|x| x * &pref).collect();
    Ok((lhs_wedge, rhs_wedge))
}

fn permutations(r: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    fn heap(n: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i8)>) {
        if n <= 1 {
            let mut sign = 1i8;
            for i in 0..cur.len() {
                for j in i + 1..cur.len() {
                    if cur[i] > cur[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((cur.clone(), sign));
            return;
        }
        for i in 0..n {
            heap(n - 1, cur, out);
            if n % 2 == 0 {
                cur.swap(i, n - 1);
            } else {
                cur.swap(0, n - 1);
            }
        }
    }
    heap(r, &mut cur, &mut out);
    out
}

/// The twisted Kapranov Gram matrix: the `r`-th compound of the
/// Beilinson-type Gram under the subset/partition bijection.
pub fn kapranov_gram(r: usize, k: usize) -> Result<IntMatrix> {
    beilinson_gram(k).compound(r)
}

/// Quasi-periodicity report for the Grassmannian Stokes matrices.
#[derive(Clone, Debug)]
pub struct GrassQuasiReport {
    pub r: usize,
    pub k: usize,
    pub rotation_sign_equivalent: bool,
    pub superdiagonal_stable: bool,
    pub superdiagonal_in_binomial_set: bool,
}

/// Check quasi-periodicity over a full rotation of the line.
pub fn grass_quasi_periodicity(r: usize, k: usize) -> Result<GrassQuasiReport> {
    let s0 = chamber0_stokes(k)?;
    let p_walk = crate::projective::stokes_walk(k, &s0, 2 * k + r + 1)?;
    let walk: Vec<IntMatrix> = p_walk[r - 1..]
        .iter()
        .map(|s| s.compound(r))
        .collect::<Result<_>>()?;
    let allowed: Vec<BigInt> = (1..k).map(|j| binomial(k as i64, j as i64)).collect();
    let n = walk[0].rows();
    let mut rotation = true;
    let mut stable = true;
    let mut in_set = true;
    for m in 0..walk.len() {
        let s = &walk[m];
        for j in 0..n - 1 {
            let v = s.at(j, j + 1).abs();
            if !v.is_zero() && !allowed.contains(&v) {
                in_set = false;
            }
        }
        if m + 1 < walk.len() {
            for j in 0..n - 1 {
                if s.at(j, j + 1).abs() != walk[m + 1].at(j, j + 1).abs() {
                    stable = false;
                }
            }
        }
        if m + 2 < walk.len() && sign_conjugate_witness(s, &walk[m + 2]).is_none() {
            rotation = false;
        }
    }
    Ok(GrassQuasiReport {
        r,
        k,
        rotation_sign_equivalent: rotation,
        superdiagonal_stable: stable,
        superdiagonal_in_binomial_set: in_set,
    })
}

/// Whether the (twisted) Kapranov collection shows up at some point of the
/// small quantum locus: search one full rotation of chambers for a Stokes
/// matrix whose inverse is sign-equivalent to the Kapranov Gram.
pub fn kapranov_at_small_locus(r: usize, k: usize) -> Result<bool> {
    let target = kapranov_gram(r, k)?;
    let s0 = chamber0_stokes(k)?;
    let p_walk = crate::projective::stokes_walk(k, &s0, 2 * k + r)?;
    for s_p in &p_walk[r - 1..] {
        let s_g = s_p.compound(r)?;
        let s_inv = s_g.inv_unimodular()?;
        if sign_conjugate_witness(&s_inv, &target).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}
