//! Charts, transition maps, and parallel transports on the manifold of
//! faithful states.
//!
//! A chart centered at a faithful state sends a centered observable `h`
//! inside the open unit ball of the centered Luxemburg norm to the
//! perturbed state `[phi^h]`. Inversion is the closed form
//! log-difference-then-center, which makes round trips exact up to
//! spectral accuracy and doubles as an oracle for the perturbation
//! path. Transition maps between charts are affine, and the two
//! transports realize the exponential and mixture connections, dual to
//! each other under the trace pairing.

use crate::algebra::block::BlockMat;
use crate::algebra::types::{DualFunctional, FaithfulState, HermitianObservable, CENTERED_TOL};
use crate::error::{Error, Result};
use crate::orlicz::{luxemburg_norm, YoungArg, YoungFunctionHandle};
use crate::perturbation::perturb;

/// Chart centered at a faithful state: the open unit ball of the
/// centered Luxemburg norm, mapped to states by `h -> [phi^h]`.
#[derive(Clone, Debug)]
pub struct Chart {
    base: FaithfulState,
    gauge: YoungFunctionHandle,
}

impl Chart {
    /// Chart centered at `base`, with radius 1 in the centered gauge.
    pub fn new(base: FaithfulState) -> Self {
        let gauge = YoungFunctionHandle::phi_phi0(base.clone());
        Self { base, gauge }
    }

    /// Center of the chart.
    pub fn base(&self) -> &FaithfulState {
        &self.base
    }

    /// Luxemburg norm of `h` in the chart's centered gauge.
    pub fn norm(&self, h: &HermitianObservable) -> Result<f64> {
        Ok(luxemburg_norm(&self.gauge, YoungArg::Observable(h))?.value)
    }

    /// True when `h` is centered for the base and lies strictly inside
    /// the unit ball.
    pub fn contains(&self, h: &HermitianObservable) -> Result<bool> {
        Ok(self.base.is_centered(h.mat())? && self.norm(h)? < 1.0)
    }
}

/// The centered log difference `e_phi(psi)`, shared by chart inversion
/// and transition maps. Centering removes the one gauge degree of
/// freedom, so this is the unique centered h with [phi^h] = psi.
fn centered_log_difference(base: &FaithfulState, psi: &FaithfulState) -> Result<BlockMat> {
    let raw = psi.log_density().sub(base.log_density())?;
    base.center(&raw)
}

/// Image of a chart element: the perturbed state `[phi^h]`.
pub fn chart_forward(chart: &Chart, h: &HermitianObservable) -> Result<FaithfulState> {
    if h.mat().shape() != chart.base().shape() {
        return Err(Error::ShapeMismatch);
    }
    let mean = chart.base().expectation(h.mat())?;
    if mean.abs() > CENTERED_TOL {
        return Err(Error::NotCentered {
            value: mean.abs(),
            tol: CENTERED_TOL,
        });
    }
    let norm = chart.norm(h)?;
    if norm >= 1.0 {
        return Err(Error::OutOfChart { norm });
    }
    Ok(perturb(chart.base(), h)?.state)
}

/// A chart inverse together with its norm certificate.
#[derive(Clone, Debug)]
pub struct ChartInverse {
    /// The centered observable with `[phi^h] = psi`.
    pub h: HermitianObservable,
    /// Luxemburg norm of `h` in the chart's centered gauge.
    pub norm: f64,
    /// True when `h` lies strictly inside the chart ball; the value is
    /// valid either way, the ball is where chart semantics apply.
    pub in_ball: bool,
}

/// Inverts the chart at `psi` by the closed form
/// `h = (log rho_psi - log rho_phi) - phi(log rho_psi - log rho_phi) 1`.
///
/// Defined for every faithful `psi` on the chart's shape; in finite
/// dimension all faithful states sit in one connected component, so
/// only the ball membership varies.
pub fn chart_inverse(chart: &Chart, psi: &FaithfulState) -> Result<ChartInverse> {
    if psi.shape() != chart.base().shape() {
        return Err(Error::ShapeMismatch);
    }
    let h = HermitianObservable::new(centered_log_difference(chart.base(), psi)?);
    let norm = chart.norm(&h)?;
    Ok(ChartInverse {
        h,
        norm,
        in_ball: norm < 1.0,
    })
}

/// Transition map between charts: `h -> k + h - phi2(h) 1`, where
/// `k = e_{phi2}(phi1)` inverts the second chart at the first center.
///
/// The map is affine, and the underlying states agree exactly:
/// `[phi2^(transition h)] = [phi1^h]`, because scalar multiples of the
/// identity drop out of the normalized perturbation. The formula
/// extends to every hermitian `h`; whether the image lies in the unit
/// ball of the second chart is checked by the caller where chart
/// semantics are needed.
pub fn transition(
    phi1: &FaithfulState,
    phi2: &FaithfulState,
    h: &HermitianObservable,
) -> Result<HermitianObservable> {
    if phi1.shape() != phi2.shape() || h.mat().shape() != phi1.shape() {
        return Err(Error::ShapeMismatch);
    }
    let k = centered_log_difference(phi2, phi1)?;
    Ok(HermitianObservable::new(k.add(&phi2.center(h.mat())?)?))
}

/// Which connection a transport realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportKind {
    /// Exponential connection: recentering of tangent observables.
    Exponential,
    /// Mixture connection: the identity on traceless functionals.
    Mixture,
}

/// Parallel transport between the tangent or cotangent spaces at two
/// faithful states, for one of the two dual connections.
#[derive(Clone, Debug)]
pub struct TransportMap {
    kind: TransportKind,
    source: FaithfulState,
    target: FaithfulState,
}

impl TransportMap {
    /// Exponential transport from `source` to `target`.
    pub fn exponential(source: FaithfulState, target: FaithfulState) -> Result<Self> {
        Self::new(TransportKind::Exponential, source, target)
    }

    /// Mixture transport from `source` to `target`.
    pub fn mixture(source: FaithfulState, target: FaithfulState) -> Result<Self> {
        Self::new(TransportKind::Mixture, source, target)
    }

    fn new(kind: TransportKind, source: FaithfulState, target: FaithfulState) -> Result<Self> {
        if source.shape() != target.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self {
            kind,
            source,
            target,
        })
    }

    /// The connection this map transports along.
    pub fn kind(&self) -> TransportKind {
        self.kind
    }

    /// Source point of the transport.
    pub fn source(&self) -> &FaithfulState {
        &self.source
    }

    /// Target point of the transport.
    pub fn target(&self) -> &FaithfulState {
        &self.target
    }

    /// Transports a source-centered observable along the exponential
    /// connection: `h -> h - target(h) 1`.
    ///
    /// Affine-linear, and composites telescope exactly: only the last
    /// target's recentering survives, which is the cocycle identity.
    pub fn apply_observable(&self, h: &HermitianObservable) -> Result<HermitianObservable> {
        if self.kind != TransportKind::Exponential {
            return Err(Error::TransportMismatch {
                reason: "mixture transport acts on traceless functionals, not observables",
            });
        }
        if h.mat().shape() != self.source.shape() {
            return Err(Error::ShapeMismatch);
        }
        let mean = self.source.expectation(h.mat())?;
        if mean.abs() > CENTERED_TOL {
            return Err(Error::NotCentered {
                value: mean.abs(),
                tol: CENTERED_TOL,
            });
        }
        Ok(HermitianObservable::new(self.target.center(h.mat())?))
    }

    /// Transports a traceless functional along the mixture connection:
    /// the identity map.
    ///
    /// This is the pairing dual of the exponential transport: traceless
    /// functionals annihilate the identity, so recentering on the other
    /// side of the pairing is invisible to them.
    pub fn apply_dual(&self, v: &DualFunctional) -> Result<DualFunctional> {
        if self.kind != TransportKind::Mixture {
            return Err(Error::TransportMismatch {
                reason: "exponential transport acts on centered observables, not functionals",
            });
        }
        if v.mat().shape() != self.source.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::block::{BlockMat, BlockShape};
    use crate::algebra::sample::{rng_for, sample_dual, sample_observable, sample_state};
    use crate::algebra::types::pair;

    fn qubit() -> (FaithfulState, BlockShape) {
        let shape = BlockShape::full(2).unwrap();
        (FaithfulState::maximally_mixed(&shape), shape)
    }

    fn diag_obs(shape: &BlockShape, entries: &[f64]) -> HermitianObservable {
        HermitianObservable::new(BlockMat::from_real_diagonal(shape, entries).unwrap())
    }

    fn diag_entry(state: &FaithfulState, i: usize) -> f64 {
        state.density().block(0)[(i, i)].re
    }

    /// A centered observable rescaled to the given chart norm.
    fn in_ball_sample(
        chart: &Chart,
        scale: f64,
        target_norm: f64,
        rng: &mut impl rand::Rng,
    ) -> HermitianObservable {
        let raw = sample_observable(chart.base().shape(), scale, rng);
        let centered = chart.base().center(raw.mat()).unwrap();
        let h = HermitianObservable::new(centered);
        let norm = chart.norm(&h).unwrap();
        HermitianObservable::new(h.mat().scale(target_norm / norm))
    }

    #[test]
    fn chart_forward_matches_the_qubit_sigmoid() {
        let (phi, shape) = qubit();
        let chart = Chart::new(phi.clone());

        let zero = HermitianObservable::new(BlockMat::zeros(&shape));
        let at_zero = chart_forward(&chart, &zero).unwrap();
        assert!(
            at_zero
                .density()
                .sub(phi.density())
                .unwrap()
                .frobenius_norm()
                <= 1e-14
        );

        // Scalar reduction: the diagonal exponent gives the softmax of
        // (0.5, -0.5), i.e. the logistic value at 1.
        let h = diag_obs(&shape, &[0.5, -0.5]);
        let q = 1.0 / (1.0 + (-1.0f64).exp());
        let state = chart_forward(&chart, &h).unwrap();
        assert!((diag_entry(&state, 0) - q).abs() < 1e-12);
        assert!((diag_entry(&state, 1) - (1.0 - q)).abs() < 1e-12);

        // The centered gauge of the maximally mixed qubit is
        // log cosh on diag(a, -a), so the norm is a / arccosh(e).
        let norm = chart.norm(&h).unwrap();
        assert!((norm - 0.5 / std::f64::consts::E.acosh()).abs() < 1e-9);
        assert!(chart.contains(&h).unwrap());
    }

    #[test]
    fn chart_forward_rejects_off_center_and_out_of_ball() {
        let (phi, shape) = qubit();
        let chart = Chart::new(phi);

        let off = diag_obs(&shape, &[1.0, 0.0]);
        assert!(matches!(
            chart_forward(&chart, &off),
            Err(Error::NotCentered { .. })
        ));

        let big = diag_obs(&shape, &[2.0, -2.0]);
        let expected = 2.0 / std::f64::consts::E.acosh();
        match chart_forward(&chart, &big) {
            Err(Error::OutOfChart { norm }) => {
                assert!((norm - expected).abs() < 1e-9, "norm {norm} vs {expected}")
            }
            other => panic!("expected out-of-chart, got {other:?}"),
        }
        assert!(!chart.contains(&big).unwrap());
    }

    #[test]
    fn chart_inverse_recovers_the_logit() {
        let (phi, shape) = qubit();
        let chart = Chart::new(phi.clone());

        let at_base = chart_inverse(&chart, &phi).unwrap();
        assert!(at_base.h.mat().frobenius_norm() <= 1e-12);
        assert!(at_base.in_ball);

        // rho = diag(sigma(2), sigma(-2)) has centered log difference
        // diag(1, -1): the log ratio is 2 and centering at the
        // maximally mixed state splits it evenly.
        let q = 1.0 / (1.0 + (-2.0f64).exp());
        let psi = FaithfulState::from_probabilities(&shape, &[q, 1.0 - q]).unwrap();
        let inv = chart_inverse(&chart, &psi).unwrap();
        let expected = diag_obs(&shape, &[1.0, -1.0]);
        assert!(inv.h.mat().sub(expected.mat()).unwrap().frobenius_norm() < 1e-9);
        assert!((inv.norm - 1.0 / std::f64::consts::E.acosh()).abs() < 1e-9);
        assert!(inv.in_ball);
    }

    #[test]
    fn chart_round_trips_on_random_pairs() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("manifold round trip", 7);
        for _ in 0..3 {
            let chart = Chart::new(sample_state(&shape, 1.0, &mut rng));
            let h = in_ball_sample(&chart, 0.6, 0.7, &mut rng);

            let psi = chart_forward(&chart, &h).unwrap();
            let back = chart_inverse(&chart, &psi).unwrap();
            assert!(back.in_ball);
            assert!(back.h.mat().sub(h.mat()).unwrap().frobenius_norm() <= 1e-9);

            // Inverse then perturb recovers any faithful state, in or
            // out of the ball.
            let target = sample_state(&shape, 1.2, &mut rng);
            let inv = chart_inverse(&chart, &target).unwrap();
            let rebuilt = perturb(chart.base(), &inv.h).unwrap().state;
            assert!(
                rebuilt
                    .density()
                    .sub(target.density())
                    .unwrap()
                    .frobenius_norm()
                    <= 1e-9
            );
        }
    }

    #[test]
    fn transition_freezes_the_qubit_chart_change() {
        let (phi1, shape) = qubit();
        let phi2 = FaithfulState::from_probabilities(&shape, &[0.75, 0.25]).unwrap();

        // Scalar reduction: k = center_{phi2} diag(ln(2/3), ln 2).
        let l23 = (2.0f64 / 3.0).ln();
        let l2 = std::f64::consts::LN_2;
        let mean = 0.75 * l23 + 0.25 * l2;
        let expected = diag_obs(&shape, &[l23 - mean, l2 - mean]);
        let zero = HermitianObservable::new(BlockMat::zeros(&shape));
        let k = transition(&phi1, &phi2, &zero).unwrap();
        assert!(k.mat().sub(expected.mat()).unwrap().frobenius_norm() < 1e-10);
        assert!(phi2.is_centered(k.mat()).unwrap());

        // Identical charts leave centered observables fixed.
        let h = diag_obs(&shape, &[0.3, -0.3]);
        let same = transition(&phi1, &phi1, &h).unwrap();
        assert!(same.mat().sub(h.mat()).unwrap().frobenius_norm() <= 1e-14);
    }

    #[test]
    fn transition_preserves_the_underlying_state_and_is_affine() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("manifold transition", 11);
        for _ in 0..3 {
            let phi1 = sample_state(&shape, 1.0, &mut rng);
            let phi2 = sample_state(&shape, 1.0, &mut rng);
            let chart1 = Chart::new(phi1.clone());
            let h = in_ball_sample(&chart1, 0.5, 0.6, &mut rng);
            let g = in_ball_sample(&chart1, 0.5, 0.4, &mut rng);

            let ht = transition(&phi1, &phi2, &h).unwrap();
            let direct = perturb(&phi1, &h).unwrap().state;
            let via = perturb(&phi2, &ht).unwrap().state;
            assert!(
                via.density()
                    .sub(direct.density())
                    .unwrap()
                    .frobenius_norm()
                    <= 1e-9
            );

            let lambda = 0.3;
            let mix = HermitianObservable::new(
                h.mat().scale(lambda).axpy(1.0 - lambda, g.mat()).unwrap(),
            );
            let left = transition(&phi1, &phi2, &mix).unwrap();
            let gt = transition(&phi1, &phi2, &g).unwrap();
            let right = ht.mat().scale(lambda).axpy(1.0 - lambda, gt.mat()).unwrap();
            assert!(left.mat().sub(&right).unwrap().frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn transition_cocycle_on_random_triples() {
        let shape = BlockShape::full(3).unwrap();
        let mut rng = rng_for("manifold cocycle", 13);
        for _ in 0..3 {
            let phi1 = sample_state(&shape, 1.0, &mut rng);
            let phi2 = sample_state(&shape, 1.0, &mut rng);
            let phi3 = sample_state(&shape, 1.0, &mut rng);
            let h = in_ball_sample(&Chart::new(phi1.clone()), 0.5, 0.5, &mut rng);

            let two_step =
                transition(&phi2, &phi3, &transition(&phi1, &phi2, &h).unwrap()).unwrap();
            let direct = transition(&phi1, &phi3, &h).unwrap();
            assert!(two_step.mat().sub(direct.mat()).unwrap().frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn exponential_transport_recenters_and_telescopes() {
        let (phi1, shape) = qubit();
        let phi2 = FaithfulState::from_probabilities(&shape, &[0.75, 0.25]).unwrap();

        // Target expectation of diag(1, -1) is 1/2.
        let h = diag_obs(&shape, &[1.0, -1.0]);
        let moved = TransportMap::exponential(phi1.clone(), phi2.clone())
            .unwrap()
            .apply_observable(&h)
            .unwrap();
        let expected = diag_obs(&shape, &[0.5, -1.5]);
        assert!(moved.mat().sub(expected.mat()).unwrap().frobenius_norm() <= 1e-12);

        let stay = TransportMap::exponential(phi1.clone(), phi1.clone())
            .unwrap()
            .apply_observable(&h)
            .unwrap();
        assert!(stay.mat().sub(h.mat()).unwrap().frobenius_norm() <= 1e-14);

        // Cocycle and pairing duality on a mixed shape.
        let shape = BlockShape::new(vec![2, 2]).unwrap();
        let mut rng = rng_for("manifold transport", 17);
        let a = sample_state(&shape, 1.0, &mut rng);
        let b = sample_state(&shape, 1.0, &mut rng);
        let c = sample_state(&shape, 1.0, &mut rng);
        let h = HermitianObservable::new(
            a.center(sample_observable(&shape, 1.0, &mut rng).mat())
                .unwrap(),
        );

        let ab = TransportMap::exponential(a.clone(), b.clone()).unwrap();
        let bc = TransportMap::exponential(b.clone(), c.clone()).unwrap();
        let ac = TransportMap::exponential(a.clone(), c.clone()).unwrap();
        let chained = bc
            .apply_observable(&ab.apply_observable(&h).unwrap())
            .unwrap();
        let direct = ac.apply_observable(&h).unwrap();
        assert!(chained.mat().sub(direct.mat()).unwrap().frobenius_norm() <= 1e-12);

        // Traceless functionals cannot see the recentering.
        let v = sample_dual(&shape, 1.0, &mut rng);
        let before = pair(&v, &h).unwrap();
        let after = pair(&v, &ab.apply_observable(&h).unwrap()).unwrap();
        assert!((before - after).abs() <= 1e-12);
    }

    #[test]
    fn mixture_transport_is_the_identity_and_sides_are_enforced() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("manifold mixture", 19);
        let a = sample_state(&shape, 1.0, &mut rng);
        let b = sample_state(&shape, 1.0, &mut rng);
        let v = sample_dual(&shape, 1.0, &mut rng);
        let h = HermitianObservable::new(
            a.center(sample_observable(&shape, 1.0, &mut rng).mat())
                .unwrap(),
        );

        let mixture = TransportMap::mixture(a.clone(), b.clone()).unwrap();
        let moved = mixture.apply_dual(&v).unwrap();
        assert!(moved.mat().sub(v.mat()).unwrap().frobenius_norm() == 0.0);
        assert!(matches!(
            mixture.apply_observable(&h),
            Err(Error::TransportMismatch { .. })
        ));

        let exponential = TransportMap::exponential(a, b).unwrap();
        assert!(matches!(
            exponential.apply_dual(&v),
            Err(Error::TransportMismatch { .. })
        ));

        let off = diag_obs(&shape, &[1.0, 0.0, 0.0]);
        assert!(matches!(
            exponential.apply_observable(&off),
            Err(Error::NotCentered { .. })
        ));
    }
}
