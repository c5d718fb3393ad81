//! Young functions built from the cumulant and their Luxemburg norms.
//!
//! Four gauge functions share one handle type. Two are closed forms in
//! the cumulant; the other two are numeric (an optimal entropy
//! decomposition and a Fenchel conjugate) and delegate to [`crate::duality`].

use crate::algebra::block::BlockMat;
use crate::algebra::spectral::spectral;
use crate::algebra::types::{DualFunctional, FaithfulState, HermitianObservable};
use crate::error::{Error, Result};
use crate::perturbation::cumulant_raw;

/// Relative bracket width at which the Luxemburg bisection stops.
pub const LUXEMBURG_BRACKET_REL: f64 = 1e-12;

/// Target for the reported residual |Phi(x/value) - 1| after polishing.
/// Met by the closed-form Young functions; the numeric kinds carry the
/// accuracy of their inner optimizers (about 1e-6) instead.
pub const LUXEMBURG_RESIDUAL_TOL: f64 = 1e-10;

/// Which Young function a handle evaluates.
#[derive(Clone, Debug)]
pub enum YoungKind {
    /// Phi_phi(h) = (exp c_phi(h) + exp c_phi(-h))/2 - 1, on observables.
    PhiPhi,
    /// Phi_{phi,0}(h) = (c_phi(h) + c_phi(-h))/2, on observables modulo
    /// scalars (the formula is invariant under h -> h + t 1).
    PhiPhi0,
    /// Psi_{phi,0}(v): minimal S(omega1,phi) + S(omega2,phi) over
    /// decompositions omega1 - omega2 = v, on traceless functionals.
    Psi0,
    /// Numeric Fenchel conjugate of the inner handle, on traceless
    /// functionals.
    NumericConjugateOf(Box<YoungFunctionHandle>),
}

/// A Young function anchored at a reference faithful state.
#[derive(Clone, Debug)]
pub struct YoungFunctionHandle {
    kind: YoungKind,
    phi: FaithfulState,
}

impl YoungFunctionHandle {
    /// The uncentered gauge Phi_phi.
    pub fn phi_phi(phi: FaithfulState) -> Self {
        Self {
            kind: YoungKind::PhiPhi,
            phi,
        }
    }

    /// The centered gauge Phi_{phi,0}.
    pub fn phi_phi0(phi: FaithfulState) -> Self {
        Self {
            kind: YoungKind::PhiPhi0,
            phi,
        }
    }

    /// The decomposition gauge Psi_{phi,0} on traceless functionals.
    pub fn psi0(phi: FaithfulState) -> Self {
        Self {
            kind: YoungKind::Psi0,
            phi,
        }
    }

    /// The numeric Fenchel conjugate of `inner`.
    pub fn numeric_conjugate(inner: YoungFunctionHandle) -> Self {
        Self {
            phi: inner.phi.clone(),
            kind: YoungKind::NumericConjugateOf(Box::new(inner)),
        }
    }

    /// Kind tag.
    pub fn kind(&self) -> &YoungKind {
        &self.kind
    }

    /// Reference state.
    pub fn reference(&self) -> &FaithfulState {
        &self.phi
    }

    /// True when the handle's domain is traceless functionals rather
    /// than observables.
    pub fn takes_duals(&self) -> bool {
        matches!(
            self.kind,
            YoungKind::Psi0 | YoungKind::NumericConjugateOf(_)
        )
    }
}

/// Argument to a Young function: an observable or a traceless
/// functional, matching the handle's domain.
#[derive(Clone, Copy, Debug)]
pub enum YoungArg<'a> {
    /// Primal side: a hermitian observable.
    Observable(&'a HermitianObservable),
    /// Dual side: a traceless functional.
    Dual(&'a DualFunctional),
}

impl<'a> YoungArg<'a> {
    fn mat(&self) -> &'a BlockMat {
        match self {
            YoungArg::Observable(h) => h.mat(),
            YoungArg::Dual(v) => v.mat(),
        }
    }

    fn is_dual(&self) -> bool {
        matches!(self, YoungArg::Dual(_))
    }
}

impl<'a> From<&'a HermitianObservable> for YoungArg<'a> {
    fn from(h: &'a HermitianObservable) -> Self {
        YoungArg::Observable(h)
    }
}

impl<'a> From<&'a DualFunctional> for YoungArg<'a> {
    fn from(v: &'a DualFunctional) -> Self {
        YoungArg::Dual(v)
    }
}

fn check_domain(handle: &YoungFunctionHandle, x: &YoungArg<'_>) -> Result<()> {
    if x.mat().shape() != handle.phi.shape() {
        return Err(Error::ShapeMismatch);
    }
    if handle.takes_duals() != x.is_dual() {
        return Err(Error::UnsupportedHandle {
            reason: "argument kind does not match the handle's domain",
        });
    }
    Ok(())
}

/// Evaluates the Young function; `f64::INFINITY` marks the infinite
/// branch of Psi.
pub fn young_eval(handle: &YoungFunctionHandle, x: YoungArg<'_>) -> Result<f64> {
    check_domain(handle, &x)?;
    eval_mat_warm(handle, x.mat(), &mut None, None)
}

/// Raw evaluation on a matrix. `warm` threads the inner maximizer
/// across calls for the numeric-conjugate kind; `stop_above` lets that
/// kind return early once the value provably exceeds the threshold
/// (used by the norm bisection, which only compares against 1).
pub(crate) fn eval_mat_warm(
    handle: &YoungFunctionHandle,
    mat: &BlockMat,
    warm: &mut Option<BlockMat>,
    stop_above: Option<f64>,
) -> Result<f64> {
    match &handle.kind {
        YoungKind::PhiPhi => {
            let cp = cumulant_raw(&handle.phi, mat)?;
            let cm = cumulant_raw(&handle.phi, &mat.scale(-1.0))?;
            Ok(0.5 * (cp.exp_m1() + cm.exp_m1()))
        }
        YoungKind::PhiPhi0 => {
            let cp = cumulant_raw(&handle.phi, mat)?;
            let cm = cumulant_raw(&handle.phi, &mat.scale(-1.0))?;
            Ok(0.5 * (cp + cm))
        }
        YoungKind::Psi0 => match crate::duality::psi_decompose_mat(&handle.phi, mat)? {
            crate::duality::PsiValue::Finite(d) => Ok(d.psi_value),
            crate::duality::PsiValue::Infinite => Ok(f64::INFINITY),
        },
        YoungKind::NumericConjugateOf(inner) => {
            let out = crate::duality::conjugate_mat(inner, mat, warm.as_ref(), stop_above)?;
            // Divergence certificates make useless warm starts.
            if out.maximizer.mat().frobenius_norm() <= crate::duality::WARM_NORM_CAP {
                *warm = Some(out.maximizer.mat().clone());
            }
            Ok(out.value)
        }
    }
}

/// Luxemburg norm with its final root bracket and residual.
#[derive(Clone, Debug)]
pub struct NormValue {
    /// The norm inf{t > 0 : Phi(x/t) <= 1}.
    pub value: f64,
    /// Final bisection bracket (lo, hi) around the root.
    pub bracket: (f64, f64),
    /// |Phi(x/value) - 1|; meets [`LUXEMBURG_RESIDUAL_TOL`] for the
    /// closed-form kinds, optimizer-limited for the numeric ones.
    pub residual: f64,
}

/// Luxemburg norm of `x` under the handle's Young function.
///
/// The root of Phi(x/t) = 1 is bracketed from a spectral-norm seed,
/// bisected to relative width [`LUXEMBURG_BRACKET_REL`], then polished
/// by secant steps. Monotonicity of t -> Phi(x/t) makes the bracket
/// unconditionally safe; infinite evaluations sort to the small-t side.
pub fn luxemburg_norm(handle: &YoungFunctionHandle, x: YoungArg<'_>) -> Result<NormValue> {
    check_domain(handle, &x)?;
    norm_of_mat(handle, x.mat())
}

pub(crate) fn norm_of_mat(handle: &YoungFunctionHandle, mat: &BlockMat) -> Result<NormValue> {
    if mat.frobenius_norm() == 0.0 {
        return Ok(NormValue {
            value: 0.0,
            bracket: (0.0, 0.0),
            residual: 0.0,
        });
    }
    let mut warm: Option<BlockMat> = None;
    // Phi(x / t), with early exit once provably above 1.
    let eval_quick = |t: f64, warm: &mut Option<BlockMat>| -> Result<f64> {
        eval_mat_warm(handle, &mat.scale(1.0 / t), warm, Some(1.0))
    };

    let spec_norm = spectral(mat).max_abs_eigenvalue();
    let mut hi = (spec_norm / 2.0f64.acosh()).max(1.0);
    let mut grow = 0usize;
    while eval_quick(hi, &mut warm)? > 1.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 600 {
            return Err(Error::NormUndefined);
        }
    }
    let mut lo = hi / 2.0;
    while eval_quick(lo, &mut warm)? <= 1.0 {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-280 {
            return Err(Error::NormUndefined);
        }
    }

    while hi - lo > LUXEMBURG_BRACKET_REL * hi {
        let mid = 0.5 * (lo + hi);
        if eval_quick(mid, &mut warm)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bracket = (lo, hi);

    // Secant polish on g(t) = Phi(x/t) - 1, full-accuracy evaluations.
    let eval_full = |t: f64, warm: &mut Option<BlockMat>| -> Result<f64> {
        eval_mat_warm(handle, &mat.scale(1.0 / t), warm, None)
    };
    let mut t1 = hi;
    let mut g1 = eval_full(t1, &mut warm)? - 1.0;
    let mut t0 = lo;
    let mut g0 = eval_full(t0, &mut warm)? - 1.0;
    if g0.is_finite() {
        for _ in 0..8 {
            if g1.abs() <= 1e-14 {
                break;
            }
            let denom = g1 - g0;
            if denom.abs() < 1e-300 {
                break;
            }
            let t2 = t1 - g1 * (t1 - t0) / denom;
            if !t2.is_finite() || t2 < 0.5 * lo || t2 > 2.0 * hi {
                break;
            }
            let g2 = eval_full(t2, &mut warm)? - 1.0;
            if !g2.is_finite() {
                break;
            }
            t0 = t1;
            g0 = g1;
            t1 = t2;
            g1 = g2;
        }
    }
    Ok(NormValue {
        value: t1,
        bracket,
        residual: g1.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::block::{BlockMat, BlockShape};
    use crate::algebra::sample::{rng_for, sample_observable, sample_state};

    fn qubit_handles() -> (
        YoungFunctionHandle,
        YoungFunctionHandle,
        HermitianObservable,
    ) {
        let shape = BlockShape::full(2).unwrap();
        let phi = FaithfulState::maximally_mixed(&shape);
        let h =
            HermitianObservable::new(BlockMat::from_real_diagonal(&shape, &[1.0, -1.0]).unwrap());
        (
            YoungFunctionHandle::phi_phi(phi.clone()),
            YoungFunctionHandle::phi_phi0(phi),
            h,
        )
    }

    #[test]
    fn zero_maps_to_zero() {
        let (pp, pp0, _) = qubit_handles();
        let zero = HermitianObservable::new(BlockMat::zeros(pp.reference().shape()));
        assert!(young_eval(&pp, (&zero).into()).unwrap().abs() < 1e-15);
        assert!(young_eval(&pp0, (&zero).into()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn qubit_closed_forms() {
        let (pp, pp0, h) = qubit_handles();
        let v = young_eval(&pp, (&h).into()).unwrap();
        assert!((v - (1.0f64.cosh() - 1.0)).abs() < 1e-14);
        let v0 = young_eval(&pp0, (&h).into()).unwrap();
        assert!((v0 - 1.0f64.cosh().ln()).abs() < 1e-14);
    }

    #[test]
    fn phi_phi0_is_scalar_shift_invariant() {
        let (_, pp0, h) = qubit_handles();
        let shifted = HermitianObservable::new(h.mat().add_scaled_identity(0.7));
        let a = young_eval(&pp0, (&h).into()).unwrap();
        let b = young_eval(&pp0, (&shifted).into()).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn qubit_luxemburg_closed_forms() {
        let (pp, pp0, h) = qubit_handles();
        let n = luxemburg_norm(&pp, (&h).into()).unwrap();
        let expected = 1.0 / 2.0f64.acosh();
        assert!((n.value - expected).abs() < 1e-12, "got {}", n.value);
        assert!(n.residual < LUXEMBURG_RESIDUAL_TOL);
        assert!(n.bracket.0 <= n.value && n.value <= n.bracket.1 * (1.0 + 1e-9));

        let n0 = luxemburg_norm(&pp0, (&h).into()).unwrap();
        let expected0 = 1.0 / std::f64::consts::E.acosh();
        assert!((n0.value - expected0).abs() < 1e-12, "got {}", n0.value);
        assert!(n0.residual < LUXEMBURG_RESIDUAL_TOL);
    }

    #[test]
    fn norm_of_zero_is_zero() {
        let (pp, _, _) = qubit_handles();
        let zero = HermitianObservable::new(BlockMat::zeros(pp.reference().shape()));
        let n = luxemburg_norm(&pp, (&zero).into()).unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn norm_level_lemma_on_the_qubit_example() {
        // Phi(x) <= 1 iff norm <= 1, checked at scalings straddling the
        // unit boundary at acosh(2) ~ 1.317.
        let (pp, _, h) = qubit_handles();
        let inside = HermitianObservable::new(h.mat().scale(1.2));
        let outside = HermitianObservable::new(h.mat().scale(1.5));
        let pi = young_eval(&pp, (&inside).into()).unwrap();
        let ni = luxemburg_norm(&pp, (&inside).into()).unwrap().value;
        let po = young_eval(&pp, (&outside).into()).unwrap();
        let no = luxemburg_norm(&pp, (&outside).into()).unwrap().value;
        assert!(pi <= 1.0 && ni <= 1.0 + 1e-12);
        assert!(po > 1.0 && no > 1.0);
        // norm <= 1 implies Phi <= norm; norm > 1 implies Phi >= norm.
        assert!(pi <= ni + 1e-12);
        assert!(po >= no - 1e-12);
    }

    #[test]
    fn homogeneity_and_triangle_on_samples() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("orlicz-test-axioms", 9);
        let phi = sample_state(&shape, 0.6, &mut rng);
        let handle = YoungFunctionHandle::phi_phi(phi);
        for _ in 0..5 {
            let x = sample_observable(&shape, 1.0, &mut rng);
            let y = sample_observable(&shape, 1.0, &mut rng);
            let nx = luxemburg_norm(&handle, (&x).into()).unwrap().value;
            let ny = luxemburg_norm(&handle, (&y).into()).unwrap().value;
            let sx = HermitianObservable::new(x.mat().scale(-2.5));
            let nsx = luxemburg_norm(&handle, (&sx).into()).unwrap().value;
            assert!((nsx - 2.5 * nx).abs() < 1e-9 * (1.0 + nx), "homogeneity");
            let sum = HermitianObservable::new(x.mat().add(y.mat()).unwrap());
            let nsum = luxemburg_norm(&handle, (&sum).into()).unwrap().value;
            assert!(nsum <= nx + ny + 1e-9, "triangle: {nsum} vs {}", nx + ny);
        }
    }

    #[test]
    fn sandwich_and_norm_equivalence_on_samples() {
        let shape = BlockShape::full(3).unwrap();
        let mut rng = rng_for("orlicz-test-equivalence", 10);
        let phi = sample_state(&shape, 0.6, &mut rng);
        let pp = YoungFunctionHandle::phi_phi(phi.clone());
        let pp0 = YoungFunctionHandle::phi_phi0(phi.clone());
        let ratio_cap = 2.0 / 2.0f64.ln();
        for _ in 0..5 {
            let raw = sample_observable(&shape, 1.0, &mut rng);
            let x = HermitianObservable::new(phi.center(raw.mat()).unwrap());
            let f = young_eval(&pp, (&x).into()).unwrap();
            let f0 = young_eval(&pp0, (&x).into()).unwrap();
            assert!(f0 <= f + 1e-12, "lower sandwich");
            assert!(f <= (2.0 * f0).exp_m1() + 1e-10, "upper sandwich");
            let n = luxemburg_norm(&pp, (&x).into()).unwrap().value;
            let n0 = luxemburg_norm(&pp0, (&x).into()).unwrap().value;
            assert!(n0 <= n + 1e-9, "centered norm below uncentered");
            assert!(n <= ratio_cap * n0 + 1e-9, "equivalence constant");
        }
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let (pp, _, _) = qubit_handles();
        let shape = BlockShape::full(2).unwrap();
        let v = DualFunctional::new(BlockMat::from_real_diagonal(&shape, &[0.5, -0.5]).unwrap())
            .unwrap();
        assert!(young_eval(&pp, (&v).into()).is_err());
    }
}
