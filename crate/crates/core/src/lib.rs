//! Exact computation of the stable Sp-invariant chain complex of the
//! positive-degree symplectic derivation Lie algebra, its per-weight Euler
//! characteristics, and the integral Euler characteristics `e(Out F_n)`
//! extracted from them.
//!
//! Symmetric functions are stored in the power-sum basis with exact
//! rational coefficients. Stable Sp-invariant dimensions are Hall pairings
//! with the Littlewood series; a Murnaghan–Nakayama Schur expansion provides
//! an independent check.

pub mod cache;
pub mod chain;
pub mod characters;
pub mod error;
pub mod euler;
pub mod lie;
pub mod modular;
pub mod numtheory;
pub mod partition;
pub mod serial;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{partitions_of, Partition};
pub use symfunc::{exterior_plethysm, hall_inner, sf_mul, SymmetricFunction};
