//! Hypergeometric building blocks of heat coefficients for conformally
//! perturbed Laplacians on noncommutative tori.
//!
//! The crate is organized bottom-up:
//!
//! * [`special_fn`]: Gamma, `₂F₁` and its transformation algebra;
//! * [`multivar_hyper`]: Appell `F₁`, `F₂` and Lauricella `F_D`;
//! * [`divided_diff`]: divided differences with confluent nodes;
//! * [`h_family`]: the functions `H_α` and `G_α` by several routes;
//! * [`symbol`]: the noncommutative symbol calculus producing `b₂`;
//! * [`spectral`]: rearrangement, `K`, `H`, closed forms and functional relations;
//! * [`verify`]: grid suites and report types shared with the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod divided_diff;
pub mod error;
pub mod h_family;
pub mod multivar_hyper;
pub mod quadrature;
pub mod special_fn;
pub mod spectral;
pub mod symbol;
pub mod verify;

pub use divided_diff::NodeList;
pub use error::{Error, Result};
pub use h_family::{HFamilyArgs, HRoute, MultiIndex};
pub use multivar_hyper::LauricellaParams;
pub use special_fn::GaussParams;
pub use spectral::{H1Kind, SpectralRoute};
pub use symbol::{RatFunc, SymbolPoly};
pub use verify::{Identity, Report};
