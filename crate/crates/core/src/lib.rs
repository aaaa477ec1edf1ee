//! Endomorphisms of finite semidirect products `H ⋊ K` represented as 2x2
//! matrices of maps, with determinant-based invertibility tests, explicit
//! inverses, and a factorization of automorphism matrices.
//!
//! Groups are Cayley tables over `0..n`; an element `(h, k)` of the product
//! is encoded as `h * |K| + k`. Everything is exhaustive, so sizes are kept
//! small (see [`matrix::DEFAULT_BOUND`]).

pub mod action;
pub mod catalog;
pub mod det;
pub mod factor;
pub mod group;
pub mod io;
pub mod maps;
pub mod matrix;
pub mod oracle;
pub mod verify;

pub use action::{enumerate_actions, GroupAction, SdProduct};
pub use catalog::{default_catalog, extended_catalog, instance, CatalogEntry, Instance};
pub use det::{det_h, det_k, invert_combined, invert_via_det_h, invert_via_det_k, is_invertible};
pub use factor::{classify, factor_abcd, AbcdFactors, SubsetTag};
pub use group::{FiniteGroup, Subset};
pub use maps::FMap;
pub use matrix::{enumerate_m, Endo, EndoMatrix, DEFAULT_BOUND};
pub use oracle::{enumerate_end_direct, EndCensus};
pub use verify::{run_verification, CheckName, VerifyReport};
