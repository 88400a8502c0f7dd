//! The book chapters, included here so `cargo test --doc` compiles and runs
//! every code block in the guide. Each module below mirrors one chapter of
//! `book/src/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}

#[doc = include_str!("../../../book/src/algebras.md")]
pub mod algebras {}

#[doc = include_str!("../../../book/src/congruences.md")]
pub mod congruences {}

#[doc = include_str!("../../../book/src/varieties.md")]
pub mod varieties {}

#[doc = include_str!("../../../book/src/replicas.md")]
pub mod replicas {}

#[doc = include_str!("../../../book/src/products.md")]
pub mod products {}

#[doc = include_str!("../../../book/src/witnesses.md")]
pub mod witnesses {}

#[doc = include_str!("../../../book/src/polarization.md")]
pub mod polarization {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
