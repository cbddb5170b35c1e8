//! Everything specific to the small quantum cohomology of `P^{k-1}`:
//! canonical coordinates, the `Psi`-matrix, Stokes rays and the
//! lexicographical order, the canonical monodromy data, the chamber-0 data
//! and its exceptional collection, the reduction braid and the two
//! wall-crossing braids, chamber walks, the Stokes-factor factorization,
//! the coefficients of the topological solution, and quasi-periodicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{consts, exp_imag, ApproxComplex, BigFloat};
use crate::braid::{BraidLetter, BraidWord};
use crate::cohomology::{
    c1_class, d_morphism, eta_matrix, gamma_class, lambda_cotangent_kclass,
    lambda_tangent_kclass, mu_matrix, r_matrix, ClassSign, KClass,
};
use crate::matrix::{
    binomial, permutation_matrix, sign_conjugate_witness, CxMatrix, IntMatrix, Matrix,
    ScalarMatrix,
};
use crate::monodromy::{braid_act, sign_act, CMatrix, DataMeta, MonodromyData};
use crate::{Error, Result};

/// Coefficient backend selector for produced data.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    Symbolic,
    Numeric(u32),
}

/// Canonical coordinates `u_h = k e^{2 pi i (h-1)/k} e^{t/k}` of the small
/// quantum cohomology point `t`.
pub fn canonical_coords(k: usize, t: &ApproxComplex) -> Vec<ApproxComplex> {
    let bits = t.precision();
    let root = {
        let inv_k = &ApproxComplex::one(bits) / &ApproxComplex::from_i64(k as i64, bits);
        (t * &inv_k).exp()
    };
    let two_pi = consts::pi(bits).ldexp(1);
    (0..k)
        .map(|h| {
            let angle =
                &(&two_pi * &BigFloat::from_i64(h as i64, bits)) / &BigFloat::from_i64(k as i64, bits);
            let phase = exp_imag(&angle);
            (&phase * &root).scale_i64(k as i64)
        })
        .collect()
}

/// The matrix of quantum multiplication by the hyperplane class times `k`
/// (companion form) at `q = e^t`.
pub fn u_companion(k: usize, t: &ApproxComplex) -> CxMatrix {
    let bits = t.precision();
    let q = t.exp();
    Matrix::from_fn(k, k, |i, j| {
        if i == 0 && j == k - 1 {
            q.scale_i64(k as i64)
        } else if i == j + 1 {
            ApproxComplex::from_i64(k as i64, bits)
        } else {
            ApproxComplex::zero(bits)
        }
    })
}

/// The normalized idempotent frame: `Psi` is the inverse of the matrix whose
/// column `h` is `f_h^l = k^{-1/2} q^{(k+1-2l)/(2k)} e^{(1-2l) i pi (h-1)/k}`.
pub fn psi_matrix(k: usize, t: &ApproxComplex) -> Result<CxMatrix> {
    let bits = t.precision();
    let sqrt_k = BigFloat::from_i64(k as i64, bits).sqrt();
    let pi = consts::pi(bits);
    let frame = CxMatrix::from_fn(k, k, |l0, h0| {
        let l = (l0 + 1) as i64;
        let h = h0 as i64;
        // q^{(k+1-2l)/(2k)} = exp(t (k+1-2l)/(2k))
        let expo = {
            let num = ApproxComplex::from_i64(k as i64 + 1 - 2 * l, bits);
            let den = ApproxComplex::from_i64(2 * k as i64, bits);
            (&(t * &num) / &den).exp()
        };
        let angle = &(&pi * &BigFloat::from_i64((1 - 2 * l) * h, bits))
            / &BigFloat::from_i64(k as i64, bits);
        let phase = exp_imag(&angle);
        let v = &expo * &phase;
        ApproxComplex::new(&v.re / &sqrt_k, &v.im / &sqrt_k)
    });
    frame.inv()
}

/// Chamber index `m` with `m pi < Im t + k phi < (m+1) pi`.
pub fn chamber_index(k: usize, t: &ApproxComplex, phi: &BigFloat) -> i64 {
    let bits = phi.precision().min(t.precision());
    let v = &t.im.with_precision(bits) + &(phi * &BigFloat::from_i64(k as i64, bits));
    let q = &v / &consts::pi(bits);
    // floor
    let r = q.round();
    let rf = BigFloat::from_bigint(&r, bits);
    let m = if rf > q { &r - &BigInt::one() } else { r.clone() };
    num_traits::ToPrimitive::to_i64(&m).unwrap_or(0)
}

/// The lexicographical order of the canonical coordinates with respect to an
/// admissible line of slope `phi`: the permutation `tau` (0-based) sorting
/// `Re(u e^{i phi})` in ascending order. Fails naming the crossing pair when
/// the line contains a Stokes ray.
pub fn lex_order(k: usize, t: &ApproxComplex, phi: &BigFloat) -> Result<Vec<usize>> {
    let bits = t.precision();
    let us = canonical_coords(k, t);
    let rot = exp_imag(&phi.with_precision(bits));
    let keys: Vec<BigFloat> = us.iter().map(|u| (u * &rot).re.clone()).collect();
    // admissibility: no two projections may collide
    let scale = keys
        .iter()
        .map(|x| x.abs())
        .max_by(|a, b| a.partial_cmp(b).unwrap())
        .unwrap_or_else(|| BigFloat::one(bits));
    let eps = {
        let mut e = &scale + &BigFloat::one(bits);
        for _ in 0..(bits / 8).max(8) {
            e = &e / &BigFloat::from_i64(2, bits);
        }
        e
    };
    for i in 0..k {
        for j in i + 1..k {
            if (&keys[i] - &keys[j]).abs() < eps {
                return Err(Error::NonAdmissible(i + 1, j + 1));
            }
        }
    }
    let mut tau: Vec<usize> = (0..k).collect();
    tau.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).unwrap());
    Ok(tau)
}

/// Canonical Stokes matrix: `s_{ij} = (-1)^{j-i} C(k, j-i)` above the
/// diagonal; its inverse is the Beilinson-type Gram matrix.
pub fn canonical_stokes(k: usize) -> IntMatrix {
    Matrix::from_fn(k, k, |i, j| {
        if i <= j {
            let d = (j - i) as i64;
            let sign = if d % 2 == 0 { 1 } else { -1 };
            binomial(k as i64, d) * BigInt::from(sign)
        } else {
            BigInt::zero()
        }
    })
}

/// Columns of the canonical central connection matrix: the image of the
/// Beilinson basis under the `D^-` morphism.
pub fn canonical_connection(k: usize) -> ScalarMatrix {
    let gamma = gamma_class(k, ClassSign::Minus);
    let c1 = c1_class(k);
    let d = k - 1;
    let mut c = ScalarMatrix::zero(k, k);
    for j in 0..k {
        let col = d_morphism(&KClass::line_bundle(k, j), &gamma, &c1, d, ClassSign::Minus)
            .expect("ranks agree");
        for p in 0..k {
            c.set(p, j, col.coeffs[p].clone());
        }
    }
    c
}

fn make_c(backend: Backend, sym: ScalarMatrix) -> CMatrix {
    match backend {
        Backend::Symbolic => CMatrix::Symbolic(sym),
        Backend::Numeric(bits) => CMatrix::Numeric(sym.eval(bits)),
    }
}

/// The canonical monodromy data of `P^{k-1}` (all-plus column form).
pub fn canonical_data(k: usize, backend: Backend) -> MonodromyData {
    MonodromyData {
        mu: mu_matrix(k),
        r_mat: r_matrix(k),
        eta: eta_matrix(k),
        stokes: canonical_stokes(k),
        c_mat: make_c(backend, canonical_connection(k)),
        meta: DataMeta { space: format!("P({k})"), dim: k - 1, chamber: None },
    }
}

/// The sign vector of the canonical-form conjugation: entries
/// `(-1)^{k/2-1} (-1)^p` for `k` even and `(-1)^{(k-1)/2} (-1)^p` for `k`
/// odd (global scalar folded into the vector).
pub fn canonical_sign_vector(k: usize) -> Vec<i8> {
    let global: i64 = if k % 2 == 0 {
        if (k / 2 + 1) % 2 == 0 {
            1
        } else {
            -1
        }
    } else if ((k - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    };
    (0..k)
        .map(|p| {
            let v = global * if p % 2 == 0 { 1 } else { -1 };
            v as i8
        })
        .collect()
}

/// The reduction braid: acting with it on the chamber-0 data produces the
/// canonical form. Product of descending blocks
/// `(b_{m,m+1} b_{m-1,m} ... b_{12})` over odd (even `k`) or even (odd `k`)
/// block tops `m`.
pub fn beilinson_braid(k: usize) -> BraidWord {
    let mut w = BraidWord::identity(k);
    let start = if k % 2 == 0 { 1 } else { 2 };
    let mut m = start;
    while m <= k - 1 {
        for i in (1..=m).rev() {
            w.push(BraidLetter::pos(i));
        }
        m += 2;
    }
    w
}

/// The two wall-crossing braids acting alternately along the small quantum
/// locus.
pub fn omega_braids(k: usize) -> (BraidWord, BraidWord) {
    let mut w1 = BraidWord::identity(k);
    let mut w2 = BraidWord::identity(k);
    if k % 2 == 0 {
        let mut i = 2;
        while i <= k {
            w1.push(BraidLetter::pos(i - 1));
            i += 2;
        }
        let mut i = 3;
        while i <= k - 1 {
            w2.push(BraidLetter::pos(i - 1));
            i += 2;
        }
    } else {
        let mut i = 3;
        while i <= k {
            w1.push(BraidLetter::pos(i - 1));
            i += 2;
        }
        let mut i = 2;
        while i <= k - 1 {
            w2.push(BraidLetter::pos(i - 1));
            i += 2;
        }
    }
    (w1, w2)
}

/// One object of the chamber-0 exceptional collection.
#[derive(Clone, Debug, PartialEq)]
pub struct CollectionObject {
    pub label: String,
    pub class: KClass,
}

impl CollectionObject {
    pub fn line(k: usize, j: i64) -> Self {
        CollectionObject {
            label: format!("O({j})"),
            class: KClass::line_bundle_any(k, j),
        }
    }

    pub fn lambda_t(k: usize, p: usize, q: i64) -> Result<Self> {
        Ok(CollectionObject {
            label: if q == 0 {
                format!("L{p}T")
            } else {
                format!("L{p}T({q})")
            },
            class: lambda_tangent_kclass(p, q, k)?,
        })
    }

    pub fn lambda_omega(k: usize, p: usize, q: i64) -> Result<Self> {
        Ok(CollectionObject {
            label: if q == 0 {
                format!("L{p}Om")
            } else {
                format!("L{p}Om({q})")
            },
            class: lambda_cotangent_kclass(p, q, k)?,
        })
    }
}

/// The exceptional collection attached to the chamber-0 data.
pub fn chamber0_collection(k: usize) -> Result<Vec<CollectionObject>> {
    let mut out = Vec::with_capacity(k);
    if k % 2 == 0 {
        let half = (k / 2) as i64;
        for j in 0..(k as i64) / 2 {
            out.push(CollectionObject::line(k, half + j));
            out.push(CollectionObject::lambda_t(k, (2 * j + 1) as usize, half - 1 - j)?);
        }
    } else {
        let half = ((k - 1) / 2) as i64;
        out.push(CollectionObject::line(k, half));
        for j in 0..(k as i64 - 1) / 2 {
            out.push(CollectionObject::line(k, half + 1 + j));
            out.push(CollectionObject::lambda_t(k, (2 * j + 2) as usize, half - 1 - j)?);
        }
    }
    Ok(out)
}

/// Monodromy data at `0` in the small quantum cohomology, for a line of
/// slope in `]0; pi/k[`: the inverse of the reduction braid applied to the
/// pre-conjugation canonical form, together with the attached collection.
pub fn chamber0_data(k: usize, backend: Backend) -> Result<(MonodromyData, Vec<CollectionObject>)> {
    let canonical = canonical_data(k, backend);
    // undo the sign conjugation, then walk back through the reduction braid
    let alt = sign_act(&canonical, &canonical_sign_vector(k))?;
    let word = beilinson_braid(k).inverse();
    let mut data = braid_act(&alt, &word)?;
    data.meta.chamber = Some(0);
    Ok((data, chamber0_collection(k)?))
}

/// Walk `crossings` chamber walls upward from the given chamber-0-form data,
/// alternating the two wall-crossing braids; returns the data of chambers
/// `0..=crossings`.
pub fn chamber_walk(k: usize, data: &MonodromyData, crossings: usize) -> Result<Vec<MonodromyData>> {
    let (w1, w2) = omega_braids(k);
    let mut out = Vec::with_capacity(crossings + 1);
    out.push(data.clone());
    let mut cur = data.clone();
    for c in 0..crossings {
        let w = if c % 2 == 0 { &w1 } else { &w2 };
        cur = braid_act(&cur, w)?;
        cur.meta.chamber = data.meta.chamber.map(|m| m + c as i64 + 1);
        out.push(cur.clone());
    }
    Ok(out)
}

/// Monodromy data at an arbitrary chamber index, negative ones included:
/// the index is reduced modulo one full rotation (`2k` walls) and the
/// leftover rotations act on `C` through powers of `M_0`.
pub fn chamber_data_any(k: usize, chamber: i64, backend: Backend) -> Result<MonodromyData> {
    let period = 2 * k as i64;
    let q = chamber.div_euclid(period);
    let rem = chamber.rem_euclid(period) as usize;
    let (d0, _) = chamber0_data(k, backend)?;
    let walk = chamber_walk(k, &d0, rem)?;
    let mut data = walk[rem].clone();
    if q != 0 {
        // a full counter-clockwise rotation sends C to M_0^{-1} C
        data = crate::monodromy::rotate_shift(&data, q)?;
    }
    data.meta.chamber = Some(chamber);
    Ok(data)
}

/// Stokes matrix at an arbitrary chamber index (fast path); `S` is exactly
/// periodic over full rotations.
pub fn chamber_stokes_any(k: usize, chamber: i64) -> Result<IntMatrix> {
    let rem = chamber.rem_euclid(2 * k as i64) as usize;
    let s0 = chamber0_stokes(k)?;
    Ok(stokes_walk(k, &s0, rem)?[rem].clone())
}

/// The Stokes factors generating the factorization of `S`, plus the signed
/// cyclic matrix conjugating consecutive factors.
#[derive(Clone, Debug)]
pub struct StokesFactors {
    pub k_m2: IntMatrix,
    pub k_m1: IntMatrix,
    pub t_f: IntMatrix,
    /// `S` in the original cyclic labeling (product of all `k` factors).
    pub assembled: IntMatrix,
}

/// The factors `K_{k-2}` and `K_{k-1}` and the assembled Stokes matrix
/// `S = K_0 K_1 ... K_{k-1}`, the earlier factors obtained from the shift
/// identity `K_{m+2q} = T_F^{-q} K_m T_F^q`.
pub fn stokes_factors(k: usize) -> Result<StokesFactors> {
    if k < 2 {
        return Err(Error::invalid("need k >= 2"));
    }
    let n = k;
    let kk = k as i64;
    let mut k_m2 = IntMatrix::identity(n);
    k_m2.set(1, 0, -BigInt::from(kk));
    let top = if k % 2 == 0 { k / 2 + 1 } else { (k + 1) / 2 };
    for j in 3..=top {
        // entry (j, k-j+3) = C(k, 2j-3), 1-based
        let col = k as i64 - j as i64 + 3;
        if col >= 1 && col <= k as i64 {
            k_m2.set(j - 1, (col - 1) as usize, binomial(kk, 2 * j as i64 - 3));
        }
    }
    let mut k_m1 = IntMatrix::identity(n);
    let top = if k % 2 == 0 { k / 2 } else { (k + 1) / 2 };
    for j in 2..=top {
        let col = k as i64 - j as i64 + 2;
        if col >= 1 && col <= k as i64 {
            k_m1.set(j - 1, (col - 1) as usize, binomial(kk, 2 * (j as i64 - 1)));
        }
    }
    let t_f = IntMatrix::from_fn(n, n, |i, j| {
        if i == 0 && j == n - 1 {
            BigInt::one()
        } else if i == j + 1 {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let t_f_inv = t_f.inv_unimodular()?;
    // K_j for j = 0..k-1 by shifting K_{k-2} (same parity) or K_{k-1}
    let mut assembled = IntMatrix::identity(n);
    for j in 0..k {
        let (base, steps) = if (k - 2) % 2 == j % 2 {
            (&k_m2, (k - 2 - j) / 2)
        } else {
            (&k_m1, (k - 1 - j) / 2)
        };
        let mut f = base.clone();
        for _ in 0..steps {
            f = &(&t_f * &f) * &t_f_inv;
        }
        assembled = &assembled * &f;
    }
    Ok(StokesFactors { k_m2, k_m1, t_f, assembled })
}

/// Conjugate the assembled (cyclic-labeled) Stokes matrix into the
/// lexicographical order of a line with slope in `]0; pi/k[` at `t = 0`.
pub fn stokes_factors_lex(k: usize) -> Result<IntMatrix> {
    let f = stokes_factors(k)?;
    let bits = 192;
    let t = ApproxComplex::zero(bits);
    let phi = {
        let p = consts::pi(bits);
        &p / &BigFloat::from_i64(2 * k as i64, bits)
    };
    let tau = lex_order(k, &t, &phi)?;
    let p: IntMatrix = permutation_matrix(&tau);
    Ok(&(&p * &f.assembled) * &p.transpose())
}

/// Closed-form coefficients `alpha_{n,l}` of the topological solution:
/// sums over compositions `h_1 + ... + h_n = l` of products
/// `prod_j (-1)^{h_j} C(k-1+h_j, h_j) / j^{k+h_j}`.
pub fn top_solution_coeffs(k: usize, n_max: usize) -> Vec<Vec<BigRational>> {
    let mut table = Vec::with_capacity(n_max + 1);
    // alpha_{0,l} = delta_{0,l}
    let mut first = vec![BigRational::zero(); k];
    first[0] = BigRational::one();
    table.push(first);
    // enumerate compositions recursively with running product
    for n in 1..=n_max {
        let mut row = vec![BigRational::zero(); k];
        // iterate over all (h_1, ..., h_n) with entries in 0..k and sum < k
        fn rec(
            j: usize,
            n: usize,
            k: usize,
            sum: usize,
            prod: BigRational,
            row: &mut [BigRational],
        ) {
            if j > n {
                row[sum] += prod;
                return;
            }
            for h in 0..k - sum {
                let sign = if h % 2 == 0 { 1 } else { -1 };
                let num = binomial(k as i64 - 1 + h as i64, h as i64) * BigInt::from(sign);
                let den = num_traits::pow(BigInt::from(j as i64), k + h);
                let f = BigRational::new(num, den);
                rec(j + 1, n, k, sum + h, &prod * f, row);
            }
        }
        rec(1, n, k, 0, BigRational::one(), &mut row);
        table.push(row);
    }
    table
}

/// Recursion oracle: `f(n) = (sigma + n)^{-k} f(n-1)` in `C[s]/(s^k)`.
pub fn top_solution_coeffs_by_recursion(k: usize, n_max: usize) -> Vec<Vec<BigRational>> {
    let mut table = Vec::with_capacity(n_max + 1);
    let mut cur = vec![BigRational::zero(); k];
    cur[0] = BigRational::one();
    table.push(cur.clone());
    for n in 1..=n_max {
        // (n + s)^{-k} = sum_h (-1)^h C(k-1+h, h) / n^{k+h} s^h
        let mut factor = vec![BigRational::zero(); k];
        for (h, slot) in factor.iter_mut().enumerate() {
            let sign = if h % 2 == 0 { 1 } else { -1 };
            let num = binomial(k as i64 - 1 + h as i64, h as i64) * BigInt::from(sign);
            let den = num_traits::pow(BigInt::from(n as i64), k + h);
            *slot = BigRational::new(num, den);
        }
        let mut next = vec![BigRational::zero(); k];
        for l in 0..k {
            for h in 0..=l {
                next[l] += &factor[h] * &cur[l - h];
            }
        }
        table.push(next.clone());
        cur = next;
    }
    table
}

/// Exact check that the truncation of the formal solution annihilates the
/// hypergeometric operator up to the truncation order: the coefficient
/// recursion `(sigma + n)^k f(n) = f(n-1)` holds for all `n <= n_max`.
pub fn top_solution_annihilation_check(k: usize, n_max: usize) -> bool {
    let table = top_solution_coeffs(k, n_max);
    // (n + s)^k = sum_h C(k, h) n^{k-h} s^h
    for n in 1..=n_max {
        let mut lhs = vec![BigRational::zero(); k];
        for l in 0..k {
            for h in 0..=l {
                let c = BigRational::from_integer(
                    binomial(k as i64, h as i64)
                        * num_traits::pow(BigInt::from(n as i64), k - h),
                );
                lhs[l] += c * &table[n][l - h];
            }
        }
        if lhs != table[n - 1] {
            return false;
        }
    }
    true
}

/// Report of the quasi-periodicity properties over one full rotation.
#[derive(Clone, Debug)]
pub struct QuasiPeriodicityReport {
    pub k: usize,
    /// chamber `m` vs chamber `m+2`: sign-equivalence witnesses found
    pub rotation_sign_equivalent: bool,
    /// superdiagonal absolute values match between adjacent chambers
    pub superdiagonal_stable: bool,
    /// `|S_{j,j+1}| = C(k, j)` in every chamber
    pub superdiagonal_binomial: bool,
}

/// Stokes matrices of chambers `0..=crossings`, tracking `S` only.
pub fn stokes_walk(k: usize, s0: &IntMatrix, crossings: usize) -> Result<Vec<IntMatrix>> {
    let (w1, w2) = omega_braids(k);
    let mut out = Vec::with_capacity(crossings + 1);
    out.push(s0.clone());
    let mut cur = s0.clone();
    for c in 0..crossings {
        let w = if c % 2 == 0 { &w1 } else { &w2 };
        cur = crate::monodromy::stokes_act(&cur, w)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// The chamber-0 Stokes matrix alone (fast path without the connection
/// matrix).
pub fn chamber0_stokes(k: usize) -> Result<IntMatrix> {
    let alt = {
        let eps = canonical_sign_vector(k);
        let i_mat: IntMatrix = crate::matrix::sign_matrix(&eps);
        &(&i_mat * &canonical_stokes(k)) * &i_mat
    };
    crate::monodromy::stokes_act(&alt, &beilinson_braid(k).inverse())
}

/// Verify the quasi-periodicity of the Stokes matrices along one full
/// rotation of the line.
pub fn quasi_periodicity_check(k: usize) -> Result<QuasiPeriodicityReport> {
    let s0 = chamber0_stokes(k)?;
    let walk = stokes_walk(k, &s0, 2 * k + 1)?;
    let mut rotation = true;
    let mut stable = true;
    let mut binom_ok = true;
    for m in 0..walk.len() {
        let s = &walk[m];
        for j in 0..k - 1 {
            if s.at(j, j + 1).abs() != binomial(k as i64, j as i64 + 1) {
                binom_ok = false;
            }
        }
        if m + 1 < walk.len() {
            let s2 = &walk[m + 1];
            for j in 0..k - 1 {
                if s.at(j, j + 1).abs() != s2.at(j, j + 1).abs() {
                    stable = false;
                }
            }
        }
        if m + 2 < walk.len() && sign_conjugate_witness(s, &walk[m + 2]).is_none() {
            rotation = false;
        }
    }
    Ok(QuasiPeriodicityReport {
        k,
        rotation_sign_equivalent: rotation,
        superdiagonal_stable: stable,
        superdiagonal_binomial: binom_ok,
    })
}
