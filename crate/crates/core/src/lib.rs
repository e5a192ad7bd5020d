//! Exact tropical homology of weighted rational polyhedral fans.
//!
//! The crate builds fans (directly or as Bergman fans of matroids), the
//! multi-tangent cosheaves `F_p` and their dual sheaves `F^p`, the associated
//! Borel-Moore and compactly supported complexes, and certifies Poincaré
//! duality of the cap product with the fundamental class over `Z`, `Q` and
//! prime fields. All arithmetic is exact.

pub mod cli;
pub mod complex;
pub mod duality;
pub mod error;
pub mod fan;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod sheaf;

#[cfg(test)]
mod samples;

pub use error::{Error, Result};
