//! Finite algebras, congruence lattices, finitely based varieties, and
//! Mal'tsev products.
//!
//! The crate is organized in layers:
//!
//! * [`term`] — signatures, terms, identities, substitution, matching and
//!   bounded term enumeration.
//! * [`algebra`] — finite algebras as dense operation tables, with
//!   evaluation, identity checking, subalgebras, quotients and products,
//!   and the `.alg` text format.
//! * [`congruence`] — partitions of a finite universe, congruence
//!   generation and the congruence lattice.
//! * [`variety`] — finitely based varieties with a three-valued identity
//!   decision service: exact catalog procedures, asserted rewrite systems,
//!   and bounded countermodel search, plus the `.var` text format.
//! * [`replica`] — replica congruences and the bounded ϱ⁰ relation.
//! * [`maltsev`] — Mal'tsev product membership, H-closure probing, the Σ^W
//!   identity generator, witness-term hypothesis checking and search, chain
//!   terms, and polarization analysis.
//!
//! The companion guide in `book/` walks through the same material with
//! runnable examples; its code blocks are compiled as doc-tests via the
//! [`guide`] module.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod congruence;
pub mod guide;
pub mod maltsev;
pub mod replica;
pub mod term;
pub mod variety;
