//! Numerical toolkit for Poisson-Lie group structures on K = SU(n).
//!
//! The crate realizes su(n), sl(n,C) and the dual algebra an inside the
//! matrix algebra, together with the group-level machinery built on top of
//! them: Iwasawa decompositions of SL(n,C), dressing actions, the family of
//! diffeomorphisms `E_s : k* -> AN`, Poisson bivectors of K and AN, the
//! canonical symplectic structure on T*K in its left trivialization, and the
//! delinearized 2-form on T*SU(2) with its inverse Poisson structure.
//!
//! Everything is plain `f64`/`Complex64` linear algebra on small dense
//! matrices. All public operations are pure functions of their inputs and
//! safe to call concurrently.

pub mod cotangent;
pub mod delin;
pub mod error;
pub mod grp;
pub mod liealg;
pub mod linalg;
pub mod poisson;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
