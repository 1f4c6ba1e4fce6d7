//! Weighted Orlicz-Sobolev embeddings, numerically: Young functions,
//! Sobolev conjugates, rearrangements, weight norms, admissibility reports,
//! inequality checks on radial test functions and radial eigenvalues.
//!
//! The guide in `book/` walks through each module.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod admit;
pub mod conjugate;
pub mod eigen;
pub mod error;
pub mod norms;
pub mod numeric;
pub mod profile;
pub mod rearrange;
pub mod regress;
pub mod spec;
pub mod verify;
pub mod young;

pub use error::{Error, ParseError, Result};
pub use profile::RadialProfile;
pub use rearrange::WeightProfile;
pub use young::YoungFunction;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/young.md")]
    mod young {}
    #[doc = include_str!("../../../book/src/conjugate.md")]
    mod conjugate {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/admissibility.md")]
    mod admissibility {}
    #[doc = include_str!("../../../book/src/verify.md")]
    mod verify {}
    #[doc = include_str!("../../../book/src/eigen.md")]
    mod eigen {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
