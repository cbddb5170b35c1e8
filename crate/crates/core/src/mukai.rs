//! Mukai lattices and exceptional bases: mutations, the braid-group action on
//! Gram matrices, dual bases, the canonical operator, exterior-power lattices
//! and the constructive lift of braids to the wedge.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::braid::{BraidLetter, BraidWord};
use crate::matrix::{antidiagonal, sign_conjugate_witness, subsets_lex, IntMatrix, Matrix};
use crate::{Error, Result};

pub use crate::braid::central_braid;

/// Mutation direction acting on an adjacent pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MutationDir {
    Left,
    Right,
}

/// An exceptional basis: unipotent upper-triangular integer Gram matrix with
/// ordered object labels, a sign vector, and the braid history that produced
/// the state.
#[derive(Clone, Debug)]
pub struct ExceptionalBasisState {
    pub gram: IntMatrix,
    pub labels: Vec<String>,
    pub signs: Vec<i8>,
    pub history: BraidWord,
}

impl ExceptionalBasisState {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if !gram.is_upper_unitriangular() {
            return Err(Error::invalid("Gram matrix is not unipotent upper-triangular"));
        }
        let n = gram.rows();
        if labels.len() != n {
            return Err(Error::DimensionMismatch("labels vs Gram size".into()));
        }
        Ok(ExceptionalBasisState {
            gram,
            labels,
            signs: vec![1; n],
            history: BraidWord::identity(n),
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }
}

/// The left-mutation matrix `H^i` (corner `-G[i-1][i]` at `(i-1, i-1)`,
/// 1-based pair index `i`).
fn left_matrix(g: &IntMatrix, i: usize) -> IntMatrix {
    let n = g.rows();
    let a = i - 1;
    let mut h = IntMatrix::identity(n);
    h.set(a, a, -g.at(a, a + 1).clone());
    h.set(a, a + 1, BigInt::one());
    h.set(a + 1, a, BigInt::one());
    h.set(a + 1, a + 1, BigInt::zero());
    h
}

/// The right-mutation matrix `K^i` (corner `-G[i-1][i]` at `(i, i)`).
fn right_matrix(g: &IntMatrix, i: usize) -> IntMatrix {
    let n = g.rows();
    let a = i - 1;
    let mut k = IntMatrix::identity(n);
    k.set(a, a, BigInt::zero());
    k.set(a, a + 1, BigInt::one());
    k.set(a + 1, a, BigInt::one());
    k.set(a + 1, a + 1, -g.at(a, a + 1).clone());
    k
}

/// Mutate the adjacent pair `(i, i+1)` (1-based, `1 <= i <= n-1`).
pub fn mutate(
    state: &ExceptionalBasisState,
    i: usize,
    dir: MutationDir,
) -> Result<ExceptionalBasisState> {
    let n = state.rank();
    if i == 0 || i >= n {
        return Err(Error::invalid(format!("mutation index {i} out of range for rank {n}")));
    }
    let a = i - 1;
    let (m, letter) = match dir {
        MutationDir::Left => (left_matrix(&state.gram, i), BraidLetter::pos(i)),
        MutationDir::Right => (right_matrix(&state.gram, i), BraidLetter::neg(i)),
    };
    let gram = &(&m * &state.gram) * &m;
    let mut labels = state.labels.clone();
    match dir {
        MutationDir::Left => {
            let moved = format!("L[{}]({})", labels[a], labels[a + 1]);
            labels[a + 1] = labels[a].clone();
            labels[a] = moved;
        }
        MutationDir::Right => {
            let moved = format!("R[{}]({})", labels[a + 1], labels[a]);
            labels[a] = labels[a + 1].clone();
            labels[a + 1] = moved;
        }
    }
    let mut signs = state.signs.clone();
    signs.swap(a, a + 1);
    let mut history = state.history.clone();
    history.push(letter);
    Ok(ExceptionalBasisState { gram, labels, signs, history })
}

/// Apply a braid word to a Gram matrix: positive letters act as left
/// mutations, inverse letters as right mutations, leftmost letter first.
pub fn gram_braid_act(gram: &IntMatrix, word: &BraidWord) -> Result<IntMatrix> {
    let n = gram.rows();
    if word.strands != n {
        return Err(Error::DimensionMismatch("braid word strand count vs Gram size".into()));
    }
    let mut g = gram.clone();
    for l in &word.letters {
        let m = if l.inverse { right_matrix(&g, l.index) } else { left_matrix(&g, l.index) };
        g = &(&m * &g) * &m;
    }
    Ok(g)
}

/// Dual-basis kind for [`dual_basis_gram`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DualKind {
    Left,
    Right,
    Geometric,
}

/// Gram matrix of the left/right dual basis `J G^{-T} J`, or of the
/// geometric dual `J G^T J`.
pub fn dual_basis_gram(g: &IntMatrix, kind: DualKind) -> Result<IntMatrix> {
    let n = g.rows();
    let j: IntMatrix = antidiagonal(n);
    match kind {
        DualKind::Geometric => Ok(&(&j * &g.transpose()) * &j),
        DualKind::Left | DualKind::Right => {
            let gt_inv = g.transpose().inv_unimodular()?;
            Ok(&(&j * &gt_inv) * &j)
        }
    }
}

/// The canonical operator `kappa = G^{-1} G^T`; integral whenever the
/// pairing makes `(Z^n, G)` a Mukai lattice on which duals exist.
pub fn canonical_operator(g: &IntMatrix) -> Result<IntMatrix> {
    let kappa = &g.to_rational().inv()? * &g.transpose().to_rational();
    let mut out = IntMatrix::zero(g.rows(), g.cols());
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let e = kappa.at(i, j);
            if !e.denom().is_one() {
                return Err(Error::invalid("canonical operator is not integral"));
            }
            out.set(i, j, e.numer().clone());
        }
    }
    Ok(out)
}

/// Gram matrix on the `r`-th exterior power: determinant pairing over
/// lexicographically ordered `r`-subsets, i.e. the `r`-th compound.
pub fn wedge_lattice(g: &IntMatrix, r: usize) -> Result<IntMatrix> {
    g.compound(r)
}

/// Result of lifting an elementary braid letter through the `r`-th wedge.
#[derive(Clone, Debug)]
pub struct WedgeLift {
    /// The word produced by the mutation procedure itself.
    pub core: BraidWord,
    /// Zero-pairing transpositions restoring full lexicographic order.
    pub restore: BraidWord,
    /// Sign vector (`-1` at subsets containing the mutated adjacent pair).
    pub signs: Vec<i8>,
}

impl WedgeLift {
    /// Complete word: `core` then `restore`.
    pub fn word(&self) -> BraidWord {
        self.core.concat(&self.restore).expect("same strand count")
    }
}

#[derive(Clone, PartialEq, Debug)]
enum WEntry {
    Orig(Vec<usize>),
    NegOrig(Vec<usize>),
    /// `Orig(primary) - <.,.> * Orig(partner)`
    Mixed { primary: Vec<usize>, partner: Vec<usize> },
}

impl WEntry {
    fn label(&self) -> &Vec<usize> {
        match self {
            WEntry::Orig(t) | WEntry::NegOrig(t) => t,
            WEntry::Mixed { primary, .. } => primary,
        }
    }
}

/// Lift one elementary braid letter on `k` strands to a braid word plus sign
/// vector on `C(k, r)` strands, following the left-shift procedure on the
/// lexicographically ordered wedge basis.
///
/// The returned data satisfy: acting with `word()` on the wedge of the
/// mutated Gram recovers the wedge of the original Gram up to `signs`.
pub fn wedge_braid_lift(letter: BraidLetter, r: usize, k: usize) -> Result<WedgeLift> {
    if letter.index == 0 || letter.index >= k {
        return Err(Error::invalid("letter index out of range"));
    }
    if r == 0 || r > k {
        return Err(Error::invalid("wedge order out of range"));
    }
    if letter.inverse {
        wedge_lift_negative(letter.index, r, k)
    } else {
        // lift of a positive letter: inverse word of the negative-letter
        // lift, signs carried through the word's strand permutation
        let neg = wedge_lift_negative(letter.index, r, k)?;
        let full = neg.word();
        let inv = full.inverse();
        let perm = inv.permutation();
        let mut signs = vec![1i8; neg.signs.len()];
        for (pos, &img) in perm.iter().enumerate() {
            signs[pos] = neg.signs[img];
        }
        Ok(WedgeLift { core: inv, restore: BraidWord::identity(full.strands), signs })
    }
}

fn wedge_lift_negative(i: usize, r: usize, k: usize) -> Result<WedgeLift> {
    // mutated sequence at positions 1..=k: position i holds old i+1,
    // position i+1 holds the right-mutated object "(i)-tilde"
    let subsets = subsets_lex(k, r); // 0-based position subsets
    let strands = subsets.len();
    let i0 = i - 1;
    let mut tuple: Vec<WEntry> = Vec::with_capacity(strands);
    for pos_set in &subsets {
        let has_i = pos_set.contains(&i0);
        let has_i1 = pos_set.contains(&(i0 + 1));
        let base: Vec<usize> =
            pos_set.iter().copied().filter(|&p| p != i0 && p != i0 + 1).collect();
        let entry = if has_i && has_i1 {
            let mut t = base.clone();
            t.push(i0);
            t.push(i0 + 1);
            t.sort_unstable();
            WEntry::NegOrig(t)
        } else if has_i1 {
            // contains the mutated object: Orig(base U {i}) - c Orig(base U {i+1})
            let mut primary = base.clone();
            primary.push(i0);
            primary.sort_unstable();
            let mut partner = base;
            partner.push(i0 + 1);
            partner.sort_unstable();
            WEntry::Mixed { primary, partner }
        } else if has_i {
            // the untouched old object i+1 moved into position i
            let mut t = base.clone();
            t.push(i0 + 1);
            t.sort_unstable();
            WEntry::Orig(t)
        } else {
            WEntry::Orig(base)
        };
        tuple.push(entry);
    }

    let mut core = BraidWord::identity(strands);
    loop {
        let Some(p) = tuple.iter().position(|e| matches!(e, WEntry::Mixed { .. })) else {
            break;
        };
        let partner = match &tuple[p] {
            WEntry::Mixed { partner, .. } => partner.clone(),
            _ => unreachable!(),
        };
        let q = tuple
            .iter()
            .position(|e| matches!(e, WEntry::Orig(t) if *t == partner))
            .ok_or_else(|| Error::invalid("wedge lift: partner element not found"))?;
        debug_assert!(q < p);
        // shift the mixed element left to q+1, one pure transposition per step
        let mut pos = p;
        while pos > q + 1 {
            core.push(BraidLetter::pos(pos)); // swaps 0-based (pos-1, pos)
            tuple.swap(pos - 1, pos);
            pos -= 1;
        }
        // merge: left mutation of the adjacent pair (partner, mixed)
        core.push(BraidLetter::pos(q + 1));
        let primary = match &tuple[q + 1] {
            WEntry::Mixed { primary, .. } => primary.clone(),
            _ => unreachable!(),
        };
        tuple[q + 1] = WEntry::Orig(partner);
        tuple[q] = WEntry::Orig(primary);
    }

    // restore full lexicographic order by zero-pairing transpositions
    let mut restore = BraidWord::identity(strands);
    loop {
        let mut swapped = false;
        for pos in 0..strands - 1 {
            if tuple[pos].label() > tuple[pos + 1].label() {
                restore.push(BraidLetter::pos(pos + 1));
                tuple.swap(pos, pos + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    let mut signs = vec![1i8; strands];
    for (pos, e) in tuple.iter().enumerate() {
        debug_assert_eq!(e.label(), &subsets[pos]);
        if matches!(e, WEntry::NegOrig(_)) {
            signs[pos] = -1;
        }
    }
    Ok(WedgeLift { core, restore, signs })
}

/// Check the defining property of a lift against a concrete Gram matrix:
/// `wedge(G^letter)` acted by the lifted word equals `signs . wedge(G)`.
pub fn verify_wedge_lift(g: &IntMatrix, letter: BraidLetter, r: usize) -> Result<bool> {
    let k = g.rows();
    let lift = wedge_braid_lift(letter, r, k)?;
    let mutated = gram_braid_act(g, &BraidWord::from_letters(k, vec![letter])?)?;
    let lhs = gram_braid_act(&wedge_lattice(&mutated, r)?, &lift.word())?;
    let rhs = wedge_lattice(g, r)?;
    let sm = crate::matrix::sign_matrix::<BigInt>(&lift.signs);
    Ok(lhs == &(&sm * &rhs) * &sm)
}

/// Beilinson-type Gram matrix `chi(O(a), O(b)) = C(k-1+b-a, b-a)`.
pub fn beilinson_gram(k: usize) -> IntMatrix {
    Matrix::from_fn(k, k, |i, j| {
        crate::matrix::binomial(k as i64 - 1 + j as i64 - i as i64, j as i64 - i as i64)
    })
}

/// Test whether two Gram matrices are equal modulo the sign action.
pub fn gram_sign_equivalent(a: &IntMatrix, b: &IntMatrix) -> bool {
    sign_conjugate_witness(a, b).is_some()
}
