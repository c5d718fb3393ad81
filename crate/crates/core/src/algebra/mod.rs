//! Block-diagonal hermitian matrix algebra: shapes, elements, spectral
//! calculus, typed functionals, and deterministic samplers.

pub mod block;
pub mod sample;
pub mod spectral;
pub mod types;

pub use block::{BlockMat, BlockShape, HERMITICITY_TOL};
pub use sample::{rng_for, sample_dual, sample_observable, sample_positive, sample_state};
pub use spectral::{func_calc, spectral, BlockSpectrum, Spectral};
pub use types::{
    pair, DualFunctional, FaithfulState, HermitianObservable, Positive, PositiveFunctional,
    CENTERED_TOL, FAITHFULNESS_FLOOR, POSITIVITY_TOL, TRACELESS_TOL, UNIT_TRACE_TOL,
};
