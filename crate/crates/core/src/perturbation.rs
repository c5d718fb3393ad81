//! Exponential perturbation of faithful states: the cumulant, the
//! perturbed state, its Gateaux derivative, and an independent
//! superoperator oracle for the perturbed modular vector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::block::BlockMat;
use crate::algebra::spectral::spectral;
use crate::algebra::types::{DualFunctional, FaithfulState, HermitianObservable};
use crate::error::{Error, Result};

/// Largest total dimension for which the n^2 x n^2 superoperator of the
/// modular oracle is built.
pub const ORACLE_DIM_CAP: usize = 16;

/// Cumulant, perturbed state, and its mass, computed together.
#[derive(Clone, Debug)]
pub struct PerturbationResult {
    /// c_phi(h) = log Tr exp(log rho_phi + h).
    pub cumulant: f64,
    /// The perturbed state with density exp(log rho_phi + h - c).
    pub state: FaithfulState,
    /// Mass of the unnormalized perturbation, exp(c).
    pub mass: f64,
}

/// Max-shifted log-sum-exp; exact for empty-safe nonempty input.
pub fn log_sum_exp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let sum: f64 = vals.iter().map(|v| (v - m).exp()).sum();
    m + sum.ln()
}

fn exponent_matrix(phi: &FaithfulState, h: &BlockMat) -> Result<BlockMat> {
    phi.log_density().add(h)
}

/// The cumulant c_phi(h) = log Tr exp(log rho_phi + h), in nats.
///
/// Evaluated as a log-sum-exp over the eigenvalues of the exponent, so
/// it stays finite for perturbations with norm up to about 700.
pub fn cumulant(phi: &FaithfulState, h: &HermitianObservable) -> Result<f64> {
    cumulant_raw(phi, h.mat())
}

pub(crate) fn cumulant_raw(phi: &FaithfulState, h: &BlockMat) -> Result<f64> {
    let a = exponent_matrix(phi, h)?;
    let spec = spectral(&a);
    let eigs: Vec<f64> = spec
        .blocks
        .iter()
        .flat_map(|b| b.eigenvalues.iter().cloned())
        .collect();
    Ok(log_sum_exp(&eigs))
}

/// Cumulant and normalized perturbed density rho_{[phi^h]} from one
/// spectral decomposition; the gradient kernels of the Young functions
/// are built from this pair. The density stays finite for any h; only
/// reconstructing exp(log rho + h) = e^c rho can overflow.
pub(crate) fn cumulant_and_density(phi: &FaithfulState, h: &BlockMat) -> Result<(f64, BlockMat)> {
    let a = exponent_matrix(phi, h)?;
    let spec = spectral(&a);
    let eigs: Vec<f64> = spec
        .blocks
        .iter()
        .flat_map(|b| b.eigenvalues.iter().cloned())
        .collect();
    let c = log_sum_exp(&eigs);
    Ok((c, spec.apply(|x| (x - c).exp())))
}

/// The perturbed state [phi^h] with density exp(log rho_phi + h - c),
/// together with c_phi(h) and the mass exp(c).
///
/// This is the unique maximizer of omega(h) - S(omega, phi) over
/// states, with maximum value c_phi(h).
pub fn perturb(phi: &FaithfulState, h: &HermitianObservable) -> Result<PerturbationResult> {
    let a = exponent_matrix(phi, h.mat())?;
    let spec = spectral(&a);
    let eigs: Vec<f64> = spec
        .blocks
        .iter()
        .flat_map(|b| b.eigenvalues.iter().cloned())
        .collect();
    let c = log_sum_exp(&eigs);
    let density = spec.apply(|x| (x - c).exp());
    let state = FaithfulState::new_renormalized(density)?;
    Ok(PerturbationResult {
        cumulant: c,
        state,
        mass: c.exp(),
    })
}

/// Gateaux derivative of the centered cumulant at h: the traceless
/// functional [phi^h] - phi.
///
/// For non-centered h the same functional is returned; centering shifts
/// the cumulant by a constant and leaves the derivative unchanged.
pub fn gateaux_derivative(phi: &FaithfulState, h: &HermitianObservable) -> Result<DualFunctional> {
    let p = perturb(phi, h)?;
    DualFunctional::difference(&p.state, phi)
}

/// The perturbed modular vector and its mass, from the superoperator
/// oracle.
#[derive(Clone, Debug)]
pub struct ModularVector {
    /// The vector xi, an element of the algebra in the Hilbert-Schmidt
    /// representation.
    pub xi: BlockMat,
    /// Squared norm <xi, xi>.
    pub mass: f64,
}

impl ModularVector {
    /// Density of the functional a -> <xi, a xi>, namely xi xi*.
    pub fn induced_density(&self) -> BlockMat {
        let blocks = self.xi.blocks().iter().map(|b| b * b.adjoint()).collect();
        BlockMat::symmetrized(self.xi.shape().clone(), blocks)
    }
}

fn vec_col(m: &DMatrix<Complex64>) -> DVector<Complex64> {
    DVector::from_iterator(m.nrows() * m.ncols(), m.iter().cloned())
}

fn unvec_col(v: &DVector<Complex64>, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_iterator(n, n, v.iter().cloned())
}

/// Perturbed modular vector xi = exp((log Delta_phi + L_h) / 2) xi_phi
/// in the Hilbert-Schmidt representation, with xi_phi = rho_phi^{1/2}.
///
/// Builds the n^2 x n^2 superoperator per block by column-stacking:
/// left multiplication by F is I kron F, right multiplication by B is
/// B^T kron I, and log Delta_phi = L_{log rho} - R_{log rho}. The
/// exponential is applied through the superoperator's own hermitian
/// eigendecomposition, independent of the density-matrix shortcut used
/// by [`perturb`].
pub fn perturbed_vector_oracle(
    phi: &FaithfulState,
    h: &HermitianObservable,
) -> Result<ModularVector> {
    let shape = phi.shape();
    let total = shape.total_dim();
    if total > ORACLE_DIM_CAP {
        return Err(Error::DimensionCap {
            dim: total,
            cap: ORACLE_DIM_CAP,
        });
    }
    let log_rho = phi.log_density();
    let sqrt_rho = phi.spectral().apply(f64::sqrt);

    let mut xi_blocks = Vec::with_capacity(shape.block_count());
    for (i, &n) in shape.dims().iter().enumerate() {
        let f = log_rho.block(i) + h.mat().block(i);
        let b = log_rho.block(i);
        let eye = DMatrix::<Complex64>::identity(n, n);
        let m = (eye.kronecker(&f) - b.transpose().kronecker(&eye)).scale(0.5);

        let eig = m.symmetric_eigen();
        let xi0 = vec_col(sqrt_rho.block(i));
        let coeffs = eig.eigenvectors.adjoint() * xi0;
        let scaled = DVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(eig.eigenvalues.iter())
                .map(|(c, lam)| c * Complex64::new(lam.exp(), 0.0)),
        );
        let xi_vec = &eig.eigenvectors * scaled;
        xi_blocks.push(unvec_col(&xi_vec, n));
    }

    let xi = BlockMat::from_blocks_unchecked(shape.clone(), xi_blocks);
    let mass: f64 = xi
        .blocks()
        .iter()
        .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    Ok(ModularVector { xi, mass })
}

/// Shape-preserving helper for tests and checks: exp((log rho + h)/2),
/// the closed form the oracle must reproduce.
pub fn half_exponent_closed_form(phi: &FaithfulState, h: &HermitianObservable) -> Result<BlockMat> {
    let a = exponent_matrix(phi, h.mat())?;
    Ok(spectral(&a).apply(|x| (0.5 * x).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::block::BlockShape;
    use crate::algebra::sample::{rng_for, sample_observable, sample_state};
    use crate::entropy::relative_entropy;

    fn qubit_uniform() -> FaithfulState {
        FaithfulState::maximally_mixed(&BlockShape::full(2).unwrap())
    }

    fn diag_obs(vals: &[f64]) -> HermitianObservable {
        let shape = BlockShape::full(vals.len()).unwrap();
        HermitianObservable::new(BlockMat::from_real_diagonal(&shape, vals).unwrap())
    }

    #[test]
    fn cumulant_of_zero_vanishes() {
        let phi = qubit_uniform();
        let h = HermitianObservable::new(BlockMat::zeros(phi.shape()));
        assert!(cumulant(&phi, &h).unwrap().abs() < 1e-14);
    }

    #[test]
    fn qubit_cumulant_closed_form() {
        let phi = qubit_uniform();
        let h = diag_obs(&[1.0, -1.0]);
        let c = cumulant(&phi, &h).unwrap();
        let expected = 1.0f64.cosh().ln();
        assert!((c - expected).abs() < 1e-14, "got {c}, want {expected}");
    }

    #[test]
    fn scalar_shift_moves_cumulant_linearly() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("perturbation-test-shift", 1);
        let phi = sample_state(&shape, 0.9, &mut rng);
        let h = sample_observable(&shape, 0.9, &mut rng);
        let c0 = cumulant(&phi, &h).unwrap();
        let shifted = HermitianObservable::new(h.mat().add_scaled_identity(0.3));
        let c1 = cumulant(&phi, &shifted).unwrap();
        assert!((c1 - c0 - 0.3).abs() < 1e-12);
        // Scalar perturbation leaves the state fixed.
        let p = perturb(
            &phi,
            &HermitianObservable::new(BlockMat::identity(&shape).scale(0.3)),
        )
        .unwrap();
        let d = p
            .state
            .density()
            .sub(phi.density())
            .unwrap()
            .frobenius_norm();
        assert!(d < 1e-13);
        assert!((p.cumulant - 0.3).abs() < 1e-13);
    }

    #[test]
    fn qubit_perturbed_state_closed_form() {
        let phi = qubit_uniform();
        let h = diag_obs(&[1.0, -1.0]);
        let p = perturb(&phi, &h).unwrap();
        let top = 1.0 / (1.0 + (-2.0f64).exp());
        let got = p.state.density().block(0)[(0, 0)].re;
        assert!((got - top).abs() < 1e-14, "got {got}, want {top}");
        assert!((p.mass - 1.0f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn variational_identity_at_the_maximizer() {
        let shape = BlockShape::full(3).unwrap();
        let mut rng = rng_for("perturbation-test-variational", 2);
        let phi = sample_state(&shape, 0.8, &mut rng);
        let h = sample_observable(&shape, 0.8, &mut rng);
        let p = perturb(&phi, &h).unwrap();
        let s = relative_entropy(&p.state, &phi).unwrap().value();
        let val = p.state.expectation(h.mat()).unwrap() - s;
        assert!((val - p.cumulant).abs() < 1e-11, "gap {}", val - p.cumulant);
    }

    #[test]
    fn chain_rule_and_inversion() {
        let shape = BlockShape::new(vec![2, 2]).unwrap();
        let mut rng = rng_for("perturbation-test-chain", 3);
        let phi = sample_state(&shape, 0.8, &mut rng);
        let h = sample_observable(&shape, 0.8, &mut rng);
        let k = sample_observable(&shape, 0.8, &mut rng);

        let ph = perturb(&phi, &h).unwrap();
        let sum = HermitianObservable::new(h.mat().add(k.mat()).unwrap());
        let c_sum = cumulant(&phi, &sum).unwrap();
        let c_nested = cumulant(&ph.state, &k).unwrap() + ph.cumulant;
        assert!((c_sum - c_nested).abs() < 1e-12);

        let neg = HermitianObservable::new(h.mat().scale(-1.0));
        let back = perturb(&ph.state, &neg).unwrap();
        let d = back
            .state
            .density()
            .sub(phi.density())
            .unwrap()
            .frobenius_norm();
        assert!(d < 1e-12, "inversion residual {d}");
    }

    #[test]
    fn oracle_with_zero_perturbation_returns_sqrt_density() {
        let shape = BlockShape::full(2).unwrap();
        let mut rng = rng_for("perturbation-test-oracle-zero", 4);
        let phi = sample_state(&shape, 0.7, &mut rng);
        let h = HermitianObservable::new(BlockMat::zeros(&shape));
        let mv = perturbed_vector_oracle(&phi, &h).unwrap();
        let sqrt_rho = phi.spectral().apply(f64::sqrt);
        let d = mv.xi.sub(&sqrt_rho).unwrap().frobenius_norm();
        assert!(d < 1e-12);
        assert!((mv.mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_mass_matches_qubit_closed_form() {
        let phi = qubit_uniform();
        let h = diag_obs(&[1.0, -1.0]);
        let mv = perturbed_vector_oracle(&phi, &h).unwrap();
        assert!((mv.mass - 1.0f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_density_shortcut() {
        let shape = BlockShape::new(vec![2, 2]).unwrap();
        let mut rng = rng_for("perturbation-test-oracle", 5);
        for _ in 0..5 {
            let phi = sample_state(&shape, 0.8, &mut rng);
            let h = sample_observable(&shape, 0.8, &mut rng);
            let mv = perturbed_vector_oracle(&phi, &h).unwrap();
            let p = perturb(&phi, &h).unwrap();
            assert!(
                ((mv.mass - p.mass) / p.mass).abs() < 1e-11,
                "mass mismatch {} vs {}",
                mv.mass,
                p.mass
            );
            let induced = mv.induced_density();
            let target = p.state.density().scale(mv.mass);
            let d = induced.sub(&target).unwrap().frobenius_norm();
            assert!(d < 1e-10 * (1.0 + mv.mass), "density mismatch {d}");
            // The closed form the superoperator must reproduce.
            let closed = half_exponent_closed_form(&phi, &h).unwrap();
            let dxi = mv.xi.sub(&closed).unwrap().frobenius_norm();
            assert!(dxi < 1e-10, "vector mismatch {dxi}");
        }
    }

    #[test]
    fn oracle_rejects_large_dimensions() {
        let shape = BlockShape::full(17).unwrap();
        let phi = FaithfulState::maximally_mixed(&shape);
        let h = HermitianObservable::new(BlockMat::zeros(&shape));
        assert!(matches!(
            perturbed_vector_oracle(&phi, &h),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn gateaux_derivative_qubit_closed_form() {
        let phi = qubit_uniform();
        let h = diag_obs(&[1.0, -1.0]);
        let v = gateaux_derivative(&phi, &h).unwrap();
        let expected = 1.0f64.tanh() / 2.0;
        let got = v.mat().block(0)[(0, 0)].re;
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn gateaux_matches_central_differences() {
        let shape = BlockShape::full(3).unwrap();
        let mut rng = rng_for("perturbation-test-gateaux", 6);
        let phi = sample_state(&shape, 0.6, &mut rng);
        let h = sample_observable(&shape, 0.6, &mut rng);
        let v = gateaux_derivative(&phi, &h).unwrap();
        let t = 1e-5;
        for _ in 0..5 {
            let k = sample_observable(&shape, 1.0, &mut rng);
            let plus = HermitianObservable::new(h.mat().axpy(t, k.mat()).unwrap());
            let minus = HermitianObservable::new(h.mat().axpy(-t, k.mat()).unwrap());
            let fd = (cumulant(&phi, &plus).unwrap() - cumulant(&phi, &minus).unwrap()) / (2.0 * t);
            // d/dt c_phi(h + t k) = [phi^h](k) = pair(v, k) + phi(k).
            let analytic = v.pairing(k.mat()).unwrap() + phi.expectation(k.mat()).unwrap();
            let scale = 1.0 + k.mat().frobenius_norm();
            assert!(
                (fd - analytic).abs() <= 1e-6 * scale,
                "fd {fd} vs analytic {analytic}"
            );
        }
    }
}
