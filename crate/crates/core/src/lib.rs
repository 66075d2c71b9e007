//! Exact arithmetic in the free Lie algebra on two generators, the
//! Campbell-Hausdorff series, the Kashiwara-Vergne couple `(F⁰, G⁰)` and the
//! checks of the two Kashiwara-Vergne equations, together with numeric
//! cross-validation on concrete Lie algebras and a small universal enveloping
//! algebra toolkit (PBW normal form, symmetrization, Gutt star product, Duflo
//! map).
//!
//! All symbolic work uses arbitrary precision rationals. Only
//! [`concrete_lie`] touches floating point.

pub mod bch;
pub mod concrete_lie;
pub mod enveloping;
pub mod error;
pub mod free_algebra;
pub mod free_lie;
pub mod kv_equations;
pub mod kv_solution;
pub mod rational;
pub mod series;

/// Library version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use free_algebra::{Alphabet, AssocSeries, CyclicSeries, Necklace, Word};
pub use free_lie::{LieSeries, LyndonWord};
pub use rational::Q;
