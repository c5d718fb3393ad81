//! Typed wrappers: observables, faithful states, positive and traceless
//! functionals.
//!
//! The trace pairing identifies functionals with hermitian matrices, so
//! all four types wrap a [`BlockMat`]; constructors differ in what they
//! validate.

use std::sync::OnceLock;

use crate::algebra::block::{BlockMat, BlockShape};
use crate::algebra::spectral::{spectral, Spectral};
use crate::error::{Error, Result};

/// Eigenvalue floor for faithful states. Construction rejects states
/// with smaller eigenvalues; log stays well scaled above it.
pub const FAITHFULNESS_FLOOR: f64 = 1e-9;

/// Allowed deviation of a state's total trace from 1.
pub const UNIT_TRACE_TOL: f64 = 1e-12;

/// Eigenvalues below this (in magnitude) count as zero for positivity
/// checks on functionals.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Bound on |total trace| for dual functionals, relative to
/// `1 + frobenius`.
pub const TRACELESS_TOL: f64 = 1e-12;

/// |phi(h)| below this counts as centered for the state phi.
pub const CENTERED_TOL: f64 = 1e-10;

/// Hermitian observable; any hermitian block-diagonal element.
#[derive(Clone, Debug)]
pub struct HermitianObservable {
    mat: BlockMat,
}

impl HermitianObservable {
    /// Wraps an already-hermitian element.
    pub fn new(mat: BlockMat) -> Self {
        Self { mat }
    }

    /// Builds and validates from raw blocks.
    pub fn from_blocks(
        shape: BlockShape,
        blocks: Vec<nalgebra::DMatrix<num_complex::Complex64>>,
    ) -> Result<Self> {
        Ok(Self::new(BlockMat::from_blocks(shape, blocks)?))
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &BlockMat {
        &self.mat
    }

    /// Consumes the wrapper.
    pub fn into_mat(self) -> BlockMat {
        self.mat
    }
}

impl std::ops::Deref for HermitianObservable {
    type Target = BlockMat;
    fn deref(&self) -> &BlockMat {
        &self.mat
    }
}

/// Faithful state: positive definite density matrix with unit trace and
/// every eigenvalue at or above [`FAITHFULNESS_FLOOR`].
///
/// The spectral decomposition and the logarithm of the density are
/// computed once and cached; both are consumed by nearly every
/// operation downstream.
#[derive(Debug)]
pub struct FaithfulState {
    mat: BlockMat,
    spec: OnceLock<Spectral>,
    log: OnceLock<BlockMat>,
}

impl Clone for FaithfulState {
    fn clone(&self) -> Self {
        Self {
            mat: self.mat.clone(),
            spec: OnceLock::new(),
            log: OnceLock::new(),
        }
    }
}

impl FaithfulState {
    /// Validates trace and eigenvalue floor.
    pub fn new(mat: BlockMat) -> Result<Self> {
        let trace = mat.trace();
        if (trace - 1.0).abs() > UNIT_TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace,
                tol: UNIT_TRACE_TOL,
            });
        }
        let spec = spectral(&mat);
        let min = spec.min_eigenvalue();
        if min < FAITHFULNESS_FLOOR {
            return Err(Error::NotFaithful {
                eigenvalue: min,
                floor: FAITHFULNESS_FLOOR,
            });
        }
        let cell = OnceLock::new();
        let _ = cell.set(spec);
        Ok(Self {
            mat,
            spec: cell,
            log: OnceLock::new(),
        })
    }

    /// Divides by the trace first, then validates. Used where the
    /// construction guarantees positivity but rounding nudges the trace.
    pub fn new_renormalized(mat: BlockMat) -> Result<Self> {
        let trace = mat.trace();
        if trace <= 0.0 {
            return Err(Error::NotPositive { eigenvalue: trace });
        }
        Self::new(mat.scale(1.0 / trace))
    }

    /// Uniform (maximally mixed) state on `shape`.
    pub fn maximally_mixed(shape: &BlockShape) -> Self {
        let n = shape.total_dim() as f64;
        Self::new(BlockMat::identity(shape).scale(1.0 / n)).expect("uniform state is faithful")
    }

    /// Diagonal state from probabilities (must be positive, sum 1).
    pub fn from_probabilities(shape: &BlockShape, p: &[f64]) -> Result<Self> {
        Self::new(BlockMat::from_real_diagonal(shape, p)?)
    }

    /// Density matrix.
    pub fn density(&self) -> &BlockMat {
        &self.mat
    }

    /// Shape of the state.
    pub fn shape(&self) -> &BlockShape {
        self.mat.shape()
    }

    /// Cached spectral decomposition of the density.
    pub fn spectral(&self) -> &Spectral {
        self.spec.get_or_init(|| spectral(&self.mat))
    }

    /// Cached logarithm of the density.
    pub fn log_density(&self) -> &BlockMat {
        self.log.get_or_init(|| self.spectral().apply(f64::ln))
    }

    /// Expectation Re Tr(rho h).
    pub fn expectation(&self, h: &BlockMat) -> Result<f64> {
        self.mat.pair(h)
    }

    /// Centers an observable: `h - phi(h) 1`.
    pub fn center(&self, h: &BlockMat) -> Result<BlockMat> {
        let mean = self.expectation(h)?;
        Ok(h.add_scaled_identity(-mean))
    }

    /// True when |phi(h)| is below [`CENTERED_TOL`].
    pub fn is_centered(&self, h: &BlockMat) -> Result<bool> {
        Ok(self.expectation(h)?.abs() <= CENTERED_TOL)
    }
}

/// Positive functional: positive semidefinite matrix, any mass.
#[derive(Clone, Debug)]
pub struct PositiveFunctional {
    mat: BlockMat,
}

impl PositiveFunctional {
    /// Validates positive semidefiniteness (floor `-1e-12`).
    pub fn new(mat: BlockMat) -> Result<Self> {
        let min = spectral(&mat).min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix positive by construction.
    pub(crate) fn new_unchecked(mat: BlockMat) -> Self {
        Self { mat }
    }

    /// A state viewed as a positive functional of mass 1.
    pub fn from_state(state: &FaithfulState) -> Self {
        Self {
            mat: state.density().clone(),
        }
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &BlockMat {
        &self.mat
    }

    /// Mass, the value on the identity.
    pub fn mass(&self) -> f64 {
        self.mat.trace()
    }

    /// Value on an observable.
    pub fn apply(&self, h: &BlockMat) -> Result<f64> {
        self.mat.pair(h)
    }

    /// Scales by a nonnegative factor.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if s < 0.0 {
            return Err(Error::NotPositive { eigenvalue: s });
        }
        Ok(Self {
            mat: self.mat.scale(s),
        })
    }
}

/// Traceless hermitian functional: a difference of equal-mass positive
/// functionals, paired with observables through Re Tr(V h).
#[derive(Clone, Debug)]
pub struct DualFunctional {
    mat: BlockMat,
}

impl DualFunctional {
    /// Validates tracelessness within `1e-12 * (1 + frobenius)`.
    pub fn new(mat: BlockMat) -> Result<Self> {
        let trace = mat.trace();
        let tol = TRACELESS_TOL * (1.0 + mat.frobenius_norm());
        if trace.abs() > tol {
            return Err(Error::NotTraceless { trace, tol });
        }
        Ok(Self { mat })
    }

    /// Difference of two states, always traceless.
    pub fn difference(a: &FaithfulState, b: &FaithfulState) -> Result<Self> {
        Ok(Self {
            mat: a.density().sub(b.density())?,
        })
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &BlockMat {
        &self.mat
    }

    /// Pairing v(h) = Re Tr(V h).
    pub fn pairing(&self, h: &BlockMat) -> Result<f64> {
        self.mat.pair(h)
    }

    /// Scales by a real factor.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: self.mat.scale(s),
        }
    }
}

/// Common access for the two positive operand kinds accepted by the
/// entropy functions.
pub trait Positive {
    /// Matrix of the functional.
    fn density_mat(&self) -> &BlockMat;
}

impl Positive for FaithfulState {
    fn density_mat(&self) -> &BlockMat {
        self.density()
    }
}

impl Positive for PositiveFunctional {
    fn density_mat(&self) -> &BlockMat {
        self.mat()
    }
}

/// Trace pairing between a dual functional and an observable.
pub fn pair(v: &DualFunctional, h: &HermitianObservable) -> Result<f64> {
    v.pairing(h.mat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::block::BlockShape;

    #[test]
    fn state_requires_unit_trace() {
        let shape = BlockShape::full(2).unwrap();
        let m = BlockMat::from_real_diagonal(&shape, &[0.6, 0.6]).unwrap();
        assert!(matches!(
            FaithfulState::new(m),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn state_requires_floor() {
        let shape = BlockShape::full(2).unwrap();
        let m = BlockMat::from_real_diagonal(&shape, &[1.0 - 1e-12, 1e-12]).unwrap();
        assert!(matches!(
            FaithfulState::new(m),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn log_density_of_uniform_state() {
        let shape = BlockShape::full(2).unwrap();
        let phi = FaithfulState::maximally_mixed(&shape);
        let lg = phi.log_density();
        assert!((lg.block(0)[(0, 0)].re + 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dual_functional_must_be_traceless() {
        let shape = BlockShape::full(2).unwrap();
        let m = BlockMat::from_real_diagonal(&shape, &[0.5, -0.4]).unwrap();
        assert!(DualFunctional::new(m).is_err());
        let m = BlockMat::from_real_diagonal(&shape, &[0.5, -0.5]).unwrap();
        assert!(DualFunctional::new(m).is_ok());
    }

    #[test]
    fn centering_kills_the_expectation() {
        let shape = BlockShape::full(2).unwrap();
        let phi = FaithfulState::from_probabilities(&shape, &[0.75, 0.25]).unwrap();
        let h = BlockMat::from_real_diagonal(&shape, &[1.0, -1.0]).unwrap();
        let h0 = phi.center(&h).unwrap();
        assert!(phi.expectation(&h0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn positive_functional_rejects_negative_eigenvalue() {
        let shape = BlockShape::full(2).unwrap();
        let m = BlockMat::from_real_diagonal(&shape, &[0.5, -0.1]).unwrap();
        assert!(PositiveFunctional::new(m).is_err());
    }
}
