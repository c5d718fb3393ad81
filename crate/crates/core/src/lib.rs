//! Relative entropy, exponential perturbations, and Orlicz geometry for
//! block-diagonal density matrices.
//!
//! The crate realizes, in finite dimension, the exponential-family
//! geometry of faithful states on a direct sum of full matrix algebras:
//!
//! * [`algebra`]: block shapes, hermitian elements, spectral calculus,
//!   and the typed wrappers (observables, faithful states, positive and
//!   traceless functionals) the rest of the crate runs on.
//! * [`entropy`]: relative entropy of positive functionals with exact
//!   support handling, and Donald's identity.
//! * [`perturbation`]: the cumulant `c_phi(h) = log Tr exp(log rho + h)`,
//!   the perturbed state `[phi^h]`, its Gateaux derivative, and a
//!   superoperator oracle for the perturbed modular vector.
//! * [`orlicz`]: the Young functions built from the cumulant, their
//!   Luxemburg norms, and the norm equivalence between the centered and
//!   uncentered gauges.
//! * [`duality`]: Fenchel conjugates by gradient ascent, the dual
//!   decomposition functional on traceless functionals via an interior
//!   point solver, dual norms, and the Young and Hoelder inequalities.
//! * [`manifold`]: charts centered at faithful states, transition maps,
//!   and the exponential and mixture transports.
//! * [`verify`]: the randomized check registry behind the command line
//!   verification suite, with every tolerance named and documented in
//!   [`verify::tolerances`].
//!
//! All randomness is seeded; every check derives an independent ChaCha12
//! stream from `(seed, check label)`, so reports are reproducible.

#![forbid(unsafe_code)]
#![deny(missing_docs)]

pub mod algebra;
pub mod duality;
pub mod entropy;
pub mod error;
pub mod io;
pub mod manifold;
pub mod orlicz;
pub mod perturbation;
pub mod verify;

pub use algebra::{
    BlockMat, BlockShape, DualFunctional, FaithfulState, HermitianObservable, PositiveFunctional,
};
pub use error::{Error, Result};
