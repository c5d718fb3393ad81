//! Relative entropy of positive functionals and Donald's identity.

use crate::algebra::block::BlockMat;
use crate::algebra::spectral::spectral;
use crate::algebra::types::{FaithfulState, Positive, PositiveFunctional};
use crate::error::{Error, Result};

/// Support tolerance: eigenvalues at or below this count as kernel
/// directions in the +infinity test. Faithful states sit three orders
/// of magnitude above it, so only genuinely rank-deficient inputs
/// trigger the infinite branch.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Relative entropy value in nats, with an explicit infinite marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyValue {
    /// Finite entropy.
    Finite(f64),
    /// Support condition failed: supp(omega) is not inside supp(phi).
    Infinite,
}

impl EntropyValue {
    /// Value as a float, `f64::INFINITY` for the infinite marker.
    pub fn value(&self) -> f64 {
        match self {
            EntropyValue::Finite(v) => *v,
            EntropyValue::Infinite => f64::INFINITY,
        }
    }

    /// True for the finite branch.
    pub fn is_finite(&self) -> bool {
        matches!(self, EntropyValue::Finite(_))
    }

    /// Finite value or an error for downstream code that requires
    /// finiteness.
    pub fn finite(&self) -> Result<f64> {
        match self {
            EntropyValue::Finite(v) => Ok(*v),
            EntropyValue::Infinite => Err(Error::SupportViolation),
        }
    }
}

impl std::fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntropyValue::Finite(v) => write!(f, "{v}"),
            EntropyValue::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Relative entropy S(omega, phi) = Tr rho_omega (log rho_omega - log
/// rho_phi), in nats.
///
/// Both arguments may be unnormalized positive functionals; the same
/// trace formula applies without mass corrections. Returns the infinite
/// marker exactly when some kernel direction of phi carries omega-mass
/// above [`SUPPORT_TOL`].
pub fn relative_entropy(omega: &impl Positive, phi: &impl Positive) -> Result<EntropyValue> {
    relative_entropy_mats(omega.density_mat(), phi.density_mat())
}

fn relative_entropy_mats(rho_w: &BlockMat, rho_f: &BlockMat) -> Result<EntropyValue> {
    if rho_w.shape() != rho_f.shape() {
        return Err(Error::ShapeMismatch);
    }
    let spec_w = spectral(rho_w);
    let spec_f = spectral(rho_f);

    let mut entropy_term = 0.0;
    for block in &spec_w.blocks {
        for &lam in &block.eigenvalues {
            entropy_term += xlnx(lam);
        }
    }

    // Cross term Tr rho_omega log rho_phi in phi's eigenbasis. The
    // weight on a kernel eigenvector of phi decides the +infinity
    // branch; weights below SUPPORT_TOL on kernel directions contribute
    // nothing (0 * log 0 = 0 by convention).
    let mut cross_term = 0.0;
    for (i, fb) in spec_f.blocks.iter().enumerate() {
        let rb = rho_w.block(i);
        let in_basis = fb.vectors.adjoint() * rb * &fb.vectors;
        for (j, &mu) in fb.eigenvalues.iter().enumerate() {
            let weight = in_basis[(j, j)].re;
            if mu <= SUPPORT_TOL {
                if weight > SUPPORT_TOL {
                    return Ok(EntropyValue::Infinite);
                }
            } else {
                cross_term += weight * mu.ln();
            }
        }
    }
    Ok(EntropyValue::Finite(entropy_term - cross_term))
}

/// Residual of Donald's identity,
/// `|S(psi,phi) + sum_i S(psi_i, psi) - sum_i S(psi_i, phi)|`
/// with `psi = sum_i psi_i`.
///
/// The identity is an algebraic cancellation, so the residual is pure
/// floating-point noise for valid inputs. Any infinite term is rejected:
/// the identity's finite form requires psi with full support.
pub fn donald_residual(parts: &[PositiveFunctional], phi: &FaithfulState) -> Result<f64> {
    if parts.is_empty() {
        return Err(Error::InvalidShape);
    }
    let mut sum = parts[0].mat().clone();
    for p in &parts[1..] {
        sum = sum.add(p.mat())?;
    }
    let psi = PositiveFunctional::new_unchecked(sum);

    let s_psi_phi = relative_entropy(&psi, phi)?.finite()?;
    let mut lhs_parts = 0.0;
    let mut rhs_parts = 0.0;
    for p in parts {
        lhs_parts += relative_entropy(p, &psi)?.finite()?;
        rhs_parts += relative_entropy(p, phi)?.finite()?;
    }
    Ok((s_psi_phi + lhs_parts - rhs_parts).abs())
}

/// Membership in the entropy ball: S(omega, phi) <= c.
pub fn entropy_ball_member(omega: &FaithfulState, phi: &FaithfulState, c: f64) -> Result<bool> {
    if c <= 0.0 {
        return Err(Error::NotPositive { eigenvalue: c });
    }
    Ok(relative_entropy(omega, phi)?.value() <= c)
}
