//! Exact-arithmetic engine for equivariant sheaves on finite sets with
//! Frobenius, over finite and local base fields: traces, pushforwards,
//! base change, torsor descent, and compatibility checking of systems
//! of coefficients indexed by cyclotomic embeddings.

pub mod arith;
pub mod cli;
pub mod compat;
pub mod cyclotomic;
pub mod descent;
pub mod groups;
pub mod harness;
pub mod manifest;
pub mod sheaves;

pub use cli::run_cli;
