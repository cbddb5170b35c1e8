//! Exact and arbitrary-precision computation of the monodromy data
//! (Stokes matrix `S`, central connection matrix `C`) of the small quantum
//! cohomology of complex projective spaces and Grassmannians, together with
//! the mutation calculus of exceptional bases in Mukai lattices that the
//! data pair with.
//!
//! The crate is organised bottom-up:
//!
//! * [`bigfloat`] — fixed-point arbitrary-precision reals and complex numbers,
//!   with high-precision constants (`pi`, Euler–Mascheroni `gamma`, odd zeta
//!   values).
//! * [`scalar`] — the exact coefficient algebra generated over the Gaussian
//!   rationals by `gamma`, `zeta(3), zeta(5), …` and `pi` (with its inverse
//!   and a dedicated `sqrt(2*pi)` slot).
//! * [`matrix`] — dense matrices over exact and numeric scalars, compound
//!   (exterior-power) matrices, nilpotent exponentials.
//! * [`braid`] — words in the braid group.
//! * [`cohomology`] — the truncated ring `H^*(P^{k-1}) = C[s]/(s^k)`,
//!   Gamma-classes, graded Chern characters, Euler pairings, Bott formulas.
//! * [`mukai`] — exceptional bases, mutations, duals, canonical operator,
//!   exterior-power lattices and the constructive braid lift.
//! * [`monodromy`] — monodromy data records, constraint validators, the four
//!   group actions, Diophantine invariants.
//! * [`projective`] — everything specific to `P^{k-1}`: canonical data,
//!   chamber walks, Stokes factors, quasi-periodicity.
//! * [`grassmannian`] — the wedge (quantum Satake) transfer to `G(r,k)`.

pub mod bigfloat;
pub mod braid;
pub mod cohomology;
pub mod grassmannian;
pub mod io;
pub mod matrix;
pub mod monodromy;
pub mod mukai;
pub mod projective;
pub mod scalar;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix in {0}")]
    Singular(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-admissible direction: line contains the Stokes ray of the pair ({0}, {1})")]
    NonAdmissible(usize, usize),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
