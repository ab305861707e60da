//! Exact and high-precision calculus for multiple zeta values organized
//! around 2-labeled posets.
//!
//! The crate implements, with exact rational arithmetic wherever a statement
//! is exact:
//!
//! * composition indices, their transpose, and the word encoding of
//!   iterated integrals ([`index`], [`word`]);
//! * finite multiple harmonic sums `s_k(N)`, their binomial duality, and
//!   their zig-zag integral representation ([`finite`]);
//! * 2-labeled posets, the associated integrals `I(X)`, and their calculus:
//!   direct sums, refinements, transpose, linear extensions ([`poset`]);
//! * decomposition of poset integrals into formal sums of multiple zeta
//!   values, shuffle products, and star-value expansions ([`symbolic`]);
//! * high-precision numeric evaluation (double-double, ≈31 significant
//!   digits) with rigorous tail bounds ([`numeric`]);
//! * the structured families behind Ohno-type, Mordell–Tornheim, and
//!   Komori–Matsumoto–Tsumura relations ([`families`]).
//!
//! Everything is driven from either the library API or the `mzv` binary in
//! the companion CLI crate.

pub mod error;
pub mod families;
pub mod finite;
pub mod index;
pub mod numeric;
pub mod poset;
pub mod random;
mod rat;
pub mod symbolic;
pub mod word;

pub use error::{Error, Result};
pub use index::{Index, PartialSumSet};
pub use word::Word;
