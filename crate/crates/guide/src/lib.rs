//! The guide's chapters as doctests, so `cargo test` runs every listing in
//! `book/src`.

include!("../../../book/snippets/sample.rs");

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/getting-started.md")]
pub mod getting_started {}
#[doc = include_str!("../../../book/src/corpus.md")]
pub mod corpus {}
#[doc = include_str!("../../../book/src/analyses.md")]
pub mod analyses {}
#[doc = include_str!("../../../book/src/heavy-tails.md")]
pub mod heavy_tails {}
#[doc = include_str!("../../../book/src/api.md")]
pub mod api {}
