//! Exact computations around Lyndon words, Magnus expansions and
//! `p`-Zassenhaus filtrations.
//!
//! The algebraic core is generic over a coefficient ring ([`CoeffRing`]);
//! the aliases below fix the rings used in practice. Everything is exact:
//! residues modulo `p^K`, machine integers, or big integers.

pub mod error;
pub mod lie;
pub mod linalg;
pub mod magnus;
pub mod ncpoly;
pub mod report;
pub mod ring;
pub mod shuffle;
pub mod unitriangular;
pub mod words;
pub mod zassenhaus;

pub use error::{Error, Result};
pub use magnus::GroupWord;
pub use ncpoly::NcSeries;
pub use report::Report;
pub use ring::{CoeffRing, Integers, ModRing};
pub use unitriangular::{FiniteUTGroup, SubgroupSet, UnitriMatrix};
pub use words::{Alphabet, BracketedWord, Word};
pub use zassenhaus::{FundamentalMatrix, LevelParams};

/// Truncated series over `Z/p^K`.
pub type ModSeries = NcSeries<ModRing>;
/// Integer polynomials with `i64` coefficients.
pub type IntPoly = NcSeries<Integers<i64>>;
/// Integer polynomials with `i128` coefficients.
pub type WideIntPoly = NcSeries<Integers<i128>>;
/// Integer polynomials with arbitrary-precision coefficients.
pub type BigIntPoly = NcSeries<Integers<num_bigint::BigInt>>;
