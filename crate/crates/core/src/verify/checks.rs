//! The check registry: every invariant the suite verifies, as a named
//! function from a seeded context to a worst-case violation.
//!
//! Each check draws its own ChaCha12 stream from `(seed, check name)`,
//! so the registry can run in any order, in parallel, and still
//! reproduce the same report. A check returns its maximum violation in
//! the units of its named tolerance; checks that aggregate parts with
//! different bounds divide each part by its bound and report against
//! tolerance 1. Counting checks (dichotomies, injectivity) return the
//! number of wrong branches against tolerance 0.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::block::{BlockMat, BlockShape};
use crate::algebra::sample::{
    rng_for, sample_dual, sample_observable, sample_positive, sample_state, standard_normal,
};
use crate::algebra::spectral::spectral;
use crate::algebra::types::{
    pair, DualFunctional, FaithfulState, HermitianObservable, PositiveFunctional,
};
use crate::duality::{
    amemiya_norm, conjugate, cumulant_conjugate, dual_norm, jordan_split, psi_decompose, PsiValue,
};
use crate::entropy::{donald_residual, relative_entropy};
use crate::error::{Error, Result};
use crate::manifold::{chart_forward, chart_inverse, transition, Chart, TransportMap};
use crate::orlicz::{luxemburg_norm, young_eval, YoungFunctionHandle};
use crate::perturbation::{cumulant, gateaux_derivative, perturb, perturbed_vector_oracle};
use crate::verify::scalar_oracle as oracle;
use crate::verify::tolerances::TolProfile;

/// Shared inputs for one check run.
pub(crate) struct CheckCtx<'a> {
    /// Block shapes the suite iterates over.
    pub dims: &'a [BlockShape],
    /// Baseline sample count per shape for cheap checks.
    pub samples: usize,
    /// Master seed; each check derives its own stream.
    pub seed: u64,
    /// The active tolerance profile.
    pub tol: &'a TolProfile,
}

impl CheckCtx<'_> {
    fn rng(&self, label: &str) -> ChaCha12Rng {
        rng_for(label, self.seed)
    }

    /// Full budget: one or two spectral decompositions per sample.
    fn n_cheap(&self) -> usize {
        self.samples.max(1)
    }

    /// Reduced budget for one gradient ascent or barrier solve per
    /// sample.
    fn n_moderate(&self) -> usize {
        (self.samples / 5).max(4)
    }

    /// Smallest budget for several solver runs per sample.
    fn n_heavy(&self) -> usize {
        (self.samples / 10).max(2)
    }
}

/// One registry entry.
pub(crate) struct CheckDef {
    /// Stable name; also the RNG label and the report key.
    pub name: &'static str,
    /// Standard mathematical name of the fact being checked.
    pub anchor: &'static str,
    /// Which profile entry bounds the violation.
    pub tolerance: fn(&TolProfile) -> f64,
    /// The check body; returns the worst violation observed.
    pub run: fn(&CheckCtx) -> Result<f64>,
}

fn clip(x: f64) -> f64 {
    x.max(0.0)
}

fn shape_worst(
    ctx: &CheckCtx,
    name: &str,
    f: impl Fn(&BlockShape, &mut ChaCha12Rng) -> Result<f64>,
) -> Result<f64> {
    let mut rng = ctx.rng(name);
    let mut worst: f64 = 0.0;
    for shape in ctx.dims {
        worst = worst.max(f(shape, &mut rng)?);
    }
    Ok(worst)
}

/// Centered observable sampled at the given scale.
fn centered_obs(
    phi: &FaithfulState,
    shape: &BlockShape,
    scale: f64,
    rng: &mut ChaCha12Rng,
) -> Result<HermitianObservable> {
    let h = sample_observable(shape, scale, rng);
    Ok(HermitianObservable::new(phi.center(h.mat())?))
}

/// Dual functional rescaled to the given spectral radius.
fn dual_with_radius(v: &DualFunctional, radius: f64, fallback_scale: f64) -> DualFunctional {
    let r = spectral(v.mat()).max_abs_eigenvalue();
    if r <= 0.0 {
        v.scale(fallback_scale)
    } else {
        v.scale(radius / r)
    }
}

/// Dual functional rescaled to the given trace norm. The centered
/// gauge's conjugate is finite exactly on the trace-norm unit ball,
/// so checks that feed it control this norm, not the spectral radius.
fn dual_with_trace_norm(v: &DualFunctional, target: f64, fallback_scale: f64) -> DualFunctional {
    let t: f64 = spectral(v.mat())
        .eigenvalues_ascending()
        .iter()
        .map(|l| l.abs())
        .sum();
    if t <= 0.0 {
        v.scale(fallback_scale)
    } else {
        v.scale(target / t)
    }
}

/// Probability vector bounded away from the simplex boundary.
fn sample_probs(n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n)
        .map(|_| (0.8 * standard_normal(rng)).exp() + 0.02)
        .collect();
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    p
}

/// Mean-zero real vector.
fn traceless_vec(n: usize, scale: f64, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| scale * standard_normal(rng)).collect();
    let m = v.iter().sum::<f64>() / n as f64;
    for x in &mut v {
        *x -= m;
    }
    v
}

/// Real diagonal of a block matrix, concatenated across blocks.
fn diag_entries(m: &BlockMat) -> Vec<f64> {
    m.blocks()
        .iter()
        .flat_map(|b| (0..b.nrows()).map(move |i| b[(i, i)].re))
        .collect()
}

fn vec_inf_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------- entropy

/// Donald's identity on random 2 and 3 part splits, including the
/// two-state convex-combination special case.
fn check_donald(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "donald identity", |shape, rng| {
        let mut worst: f64 = 0.0;
        for i in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let parts: Vec<PositiveFunctional> = if i % 2 == 0 {
                let lam = rng.random_range(0.05..0.95);
                let a = sample_state(shape, 1.0, rng);
                let b = sample_state(shape, 1.0, rng);
                vec![
                    PositiveFunctional::from_state(&a).scale(lam)?,
                    PositiveFunctional::from_state(&b).scale(1.0 - lam)?,
                ]
            } else {
                let k = rng.random_range(2..=3);
                (0..k).map(|_| sample_positive(shape, 1.0, rng)).collect()
            };
            worst = worst.max(donald_residual(&parts, &phi)?);
        }
        Ok(worst)
    })
}

/// Joint convexity of relative entropy in both arguments.
fn check_joint_convexity(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "entropy joint convexity", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let lam = rng.random_range(0.0..=1.0);
            let (w1, w2) = (sample_state(shape, 1.0, rng), sample_state(shape, 1.0, rng));
            let (f1, f2) = (sample_state(shape, 1.0, rng), sample_state(shape, 1.0, rng));
            let mix = |a: &FaithfulState, b: &FaithfulState| -> Result<FaithfulState> {
                FaithfulState::new(a.density().scale(lam).axpy(1.0 - lam, b.density())?)
            };
            let lhs = relative_entropy(&mix(&w1, &w2)?, &mix(&f1, &f2)?)?.finite()?;
            let rhs = lam * relative_entropy(&w1, &f1)?.finite()?
                + (1.0 - lam) * relative_entropy(&w2, &f2)?.finite()?;
            worst = worst.max(clip(lhs - rhs));
        }
        Ok(worst)
    })
}

/// Entropy below 2.5e-13 forces Frobenius distance below 1e-6; the
/// quadratic local behavior of S makes one rescale of the offset
/// sufficient. The implication is the finite-dimensional form of
/// Pinsker's inequality, which turns the entropy budget into the
/// distance bound sqrt(2 * 2.5e-13) < 1e-6.
fn check_strict_positivity(ctx: &CheckCtx) -> Result<f64> {
    const ENTROPY_BUDGET: f64 = 2.5e-13;
    shape_worst(ctx, "entropy strict positivity", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let d0 = sample_dual(shape, 1.0, rng);
            let fro = d0.mat().frobenius_norm();
            if fro == 0.0 {
                continue;
            }
            let mut delta = d0.mat().scale(1e-7 / fro);
            let mut done = false;
            for _ in 0..6 {
                let omega = FaithfulState::new(phi.density().add(&delta)?)?;
                let s = relative_entropy(&omega, &phi)?.finite()?;
                if s <= ENTROPY_BUDGET {
                    worst = worst.max(delta.frobenius_norm());
                    done = true;
                    break;
                }
                delta = delta.scale(0.9 * (ENTROPY_BUDGET / s).sqrt());
            }
            if !done {
                return Ok(f64::MAX);
            }
        }
        Ok(worst)
    })
}

/// Finite for faithful references, infinite exactly on support
/// escape; counts wrong branches. Rank-deficient inputs are rotated
/// into a random eigenbasis so the kernel test runs off-diagonal.
fn check_support_dichotomy(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "entropy support dichotomy", |shape, rng| {
        let mut wrong = 0u32;
        let n = shape.total_dim();
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let omega = sample_state(shape, 1.0, rng);
            if !relative_entropy(&omega, &phi)?.is_finite() {
                wrong += 1;
            }

            // Diagonal masks in the eigenbasis of a sampled state.
            let basis = spectral(sample_state(shape, 1.0, rng).density());
            let masked = |keep: &dyn Fn(usize) -> bool| -> PositiveFunctional {
                let mut idx = 0usize;
                let blocks = basis
                    .blocks
                    .iter()
                    .map(|b| {
                        let dim = b.eigenvalues.len();
                        let d = nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
                            let on = i == j && keep(idx + i);
                            nalgebra::Complex::new(if on { 1.0 } else { 0.0 }, 0.0)
                        });
                        idx += dim;
                        &b.vectors * d * b.vectors.adjoint()
                    })
                    .collect();
                PositiveFunctional::new_unchecked(BlockMat::symmetrized(shape.clone(), blocks))
            };
            let cut = rng.random_range(1..n.max(2));
            let low = masked(&|i| i < cut);
            let high = masked(&|i| i >= cut);
            // Faithful reference keeps every projection finite.
            if !relative_entropy(&low, &phi)?.is_finite() {
                wrong += 1;
            }
            // Disjoint supports are the infinite branch.
            if relative_entropy(&low, &high)?.is_finite() {
                wrong += 1;
            }
            if relative_entropy(&phi, &high)?.is_finite() {
                wrong += 1;
            }
        }
        Ok(f64::from(wrong))
    })
}

// ----------------------------------------------------------- perturbation

/// Chain rule of the cumulant: scalar and state forms.
fn check_chain_rule(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "cumulant chain rule", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let k = sample_observable(shape, 1.0, rng);
            let hk = HermitianObservable::new(h.mat().add(k.mat())?);
            let step = perturb(&phi, &h)?;
            let scalar = (cumulant(&phi, &hk)? - step.cumulant - cumulant(&step.state, &k)?).abs();
            let two_step = perturb(&step.state, &k)?.state;
            let direct = perturb(&phi, &hk)?.state;
            let state = two_step.density().sub(direct.density())?.frobenius_norm();
            worst = worst.max(scalar).max(state);
        }
        Ok(worst)
    })
}

/// Perturbing by h and then by -h returns to the base state.
fn check_inversion(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "perturbation inversion", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let minus = HermitianObservable::new(h.mat().scale(-1.0));
            let fwd = perturb(&phi, &h)?;
            let back = perturb(&fwd.state, &minus)?;
            let state = back.state.density().sub(phi.density())?.frobenius_norm();
            // The cumulants of the round trip cancel exactly.
            let scalar = (fwd.cumulant + back.cumulant).abs();
            worst = worst.max(state).max(scalar);
        }
        Ok(worst)
    })
}

/// Exponents differing by a scalar give the same state, and the
/// centered representative recovered from the state is unique.
/// Parts: state invariance over 1e-12, recovered exponent over 1e-9.
fn check_gauge_uniqueness(ctx: &CheckCtx) -> Result<f64> {
    const STATE_TOL: f64 = 1e-12;
    const RECOVERY_TOL: f64 = 1e-9;
    shape_worst(ctx, "perturbation gauge uniqueness", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let lam = rng.random_range(-1.0..1.0);
            let shifted = HermitianObservable::new(h.mat().add_scaled_identity(lam));
            let s1 = perturb(&phi, &h)?.state;
            let s2 = perturb(&phi, &shifted)?.state;
            let state = s1.density().sub(s2.density())?.frobenius_norm();
            let rec = |s: &FaithfulState| -> Result<BlockMat> {
                phi.center(&s.log_density().sub(phi.log_density())?)
            };
            let recovery = rec(&s1)?.sub(&rec(&s2)?)?.frobenius_norm();
            worst = worst.max(state / STATE_TOL).max(recovery / RECOVERY_TOL);
        }
        Ok(worst)
    })
}

/// Continuity of the cumulant along h + 2^-n k: the step-40 value and
/// entropy differences sit below 1e-8, the cumulant at vanishing
/// exponents returns to 0, and the differences decrease monotonically
/// once the step is inside the linear regime.
fn check_continuity(ctx: &CheckCtx) -> Result<f64> {
    const LIMIT_TOL: f64 = 1e-8;
    const MONOTONE_TOL: f64 = 1e-13;
    // Directions nearly critical for the cumulant put the monotone
    // tail at the floating-point noise floor; the limit parts still
    // run there.
    const DERIVATIVE_SCREEN: f64 = 1e-4;
    shape_worst(ctx, "cumulant continuity", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..2 {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let k = sample_observable(shape, 1.0, rng);
            let base = cumulant(&phi, &h)?;
            let at = |n: i32| -> Result<f64> {
                let step = h.mat().axpy(2f64.powi(-n), k.mat())?;
                cumulant(&phi, &HermitianObservable::new(step))
            };
            let d: Vec<f64> = (0..=40)
                .map(|n| at(n).map(|c| (c - base).abs()))
                .collect::<Result<_>>()?;
            worst = worst.max(d[40] / LIMIT_TOL);

            let tail = perturb(
                &phi,
                &HermitianObservable::new(h.mat().axpy(2f64.powi(-40), k.mat())?),
            )?
            .state;
            let s = relative_entropy(&tail, &perturb(&phi, &h)?.state)?.finite()?;
            worst = worst.max(s / LIMIT_TOL);

            let small = HermitianObservable::new(k.mat().scale(2f64.powi(-40)));
            worst = worst.max(cumulant(&phi, &small)?.abs() / LIMIT_TOL);

            let slope = perturb(&phi, &h)?.state.expectation(k.mat())?;
            if slope.abs() >= DERIVATIVE_SCREEN {
                for n in 10..40 {
                    worst = worst.max(clip(d[n + 1] - d[n] - 1e-15) / MONOTONE_TOL);
                }
            }
        }
        Ok(worst)
    })
}

/// Gibbs variational principle: omega(h) - S(omega, phi) is dominated
/// by the cumulant and attains it exactly at the perturbed state.
fn check_variational(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "gibbs variational principle", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let p = perturb(&phi, &h)?;
            for _ in 0..10 {
                let omega = sample_state(shape, 1.0, rng);
                let lhs = omega.expectation(h.mat())? - relative_entropy(&omega, &phi)?.finite()?;
                worst = worst.max(clip(lhs - p.cumulant));
            }
            let at_max =
                p.state.expectation(h.mat())? - relative_entropy(&p.state, &phi)?.finite()?;
            worst = worst.max((at_max - p.cumulant).abs());
        }
        Ok(worst)
    })
}

/// Mean and log-moment bounds on the cumulant. The lower bound is
/// Peierls-Bogoliubov, the upper is Golden-Thompson.
fn check_cumulant_bounds(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "cumulant bounds", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let c = cumulant(&phi, &h)?;
            let mean = phi.expectation(h.mat())?;
            let exp_h = spectral(h.mat()).apply(f64::exp);
            let log_moment = phi.expectation(&exp_h)?.ln();
            worst = worst.max(clip(mean - c)).max(clip(c - log_moment));
        }
        Ok(worst)
    })
}

/// Free-energy shift identity S(omega, [phi^h]) = S(omega, phi) -
/// omega(h) + c_phi(h).
fn check_shift_identity(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "free energy shift identity", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let omega = sample_state(shape, 1.0, rng);
            let p = perturb(&phi, &h)?;
            let lhs = relative_entropy(&omega, &p.state)?.finite()?;
            let rhs = relative_entropy(&omega, &phi)?.finite()? - omega.expectation(h.mat())?
                + p.cumulant;
            worst = worst.max((lhs - rhs).abs());
        }
        Ok(worst)
    })
}

/// Scalar shifts move the cumulant affinely and leave the state
/// unchanged. Parts: value over 1e-10, state over 1e-12.
fn check_scalar_shift(ctx: &CheckCtx) -> Result<f64> {
    const VALUE_TOL: f64 = 1e-10;
    const STATE_TOL: f64 = 1e-12;
    shape_worst(ctx, "cumulant scalar shift", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let lam = rng.random_range(-2.0..2.0);
            let shifted = HermitianObservable::new(h.mat().add_scaled_identity(lam));
            let a = perturb(&phi, &h)?;
            let b = perturb(&phi, &shifted)?;
            worst = worst.max((b.cumulant - a.cumulant - lam).abs() / VALUE_TOL);
            let state = a.state.density().sub(b.state.density())?.frobenius_norm();
            worst = worst.max(state / STATE_TOL);
        }
        Ok(worst)
    })
}

/// The superoperator modular vector reproduces the density shortcut:
/// mass, induced density, and expectations, all relative.
fn check_modular_oracle(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "modular vector oracle", |shape, rng| {
        if shape.total_dim() > crate::perturbation::ORACLE_DIM_CAP {
            // The oracle is defined up to the dimension cap; larger
            // shapes are covered by the algebraic checks.
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let or = perturbed_vector_oracle(&phi, &h)?;
            let pr = perturb(&phi, &h)?;
            worst = worst.max((or.mass - pr.mass).abs() / pr.mass);
            let induced = or.induced_density().scale(1.0 / or.mass);
            worst = worst.max(induced.sub(pr.state.density())?.frobenius_norm());
            let a = sample_observable(shape, 1.0, rng);
            let through_xi = induced.pair(a.mat())?;
            worst = worst.max((through_xi - pr.state.expectation(a.mat())?).abs());
        }
        Ok(worst)
    })
}

/// Central finite differences of the centered cumulant match the
/// Gateaux derivative functional, relative with an absolute floor.
fn check_gateaux(ctx: &CheckCtx) -> Result<f64> {
    const STEP: f64 = 1e-5;
    shape_worst(ctx, "gateaux derivative", |shape, rng| {
        let mut worst: f64 = 0.0;
        let bases = (ctx.samples / 25).max(1);
        for _ in 0..bases {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let m = gateaux_derivative(&phi, &h)?;
            for _ in 0..ctx.n_moderate() {
                let k = sample_observable(shape, 1.0, rng);
                let at = |t: f64| -> Result<f64> {
                    cumulant(&phi, &HermitianObservable::new(h.mat().axpy(t, k.mat())?))
                };
                let cd = (at(STEP)? - at(-STEP)?) / (2.0 * STEP) - phi.expectation(k.mat())?;
                let mk = m.pairing(k.mat())?;
                worst = worst.max((cd - mk).abs() / (1.0 + mk.abs()));
            }
        }
        Ok(worst)
    })
}

// ----------------------------------------------------------------- orlicz

fn primal_handles(phi: &FaithfulState) -> [YoungFunctionHandle; 2] {
    [
        YoungFunctionHandle::phi_phi(phi.clone()),
        YoungFunctionHandle::phi_phi0(phi.clone()),
    ]
}

/// Young-function axioms on sampled sections for all three kinds:
/// zero at zero, evenness, nonnegativity, convexity, and the
/// unbounded-ray surrogate (exceeds 1e3 at some t <= 1e6).
fn check_young_axioms(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "young function axioms", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        let zero_obs = HermitianObservable::new(BlockMat::zeros(shape));

        for handle in primal_handles(&phi) {
            worst = worst.max(young_eval(&handle, (&zero_obs).into())?.abs());
            for _ in 0..ctx.n_moderate() {
                let x = sample_observable(shape, 1.0, rng);
                let y = sample_observable(shape, 1.0, rng);
                let fx = young_eval(&handle, (&x).into())?;
                let fy = young_eval(&handle, (&y).into())?;
                let minus = HermitianObservable::new(x.mat().scale(-1.0));
                worst = worst.max((fx - young_eval(&handle, (&minus).into())?).abs());
                worst = worst.max(clip(-fx));
                for lam in [0.3, 0.7] {
                    let mid =
                        HermitianObservable::new(x.mat().scale(lam).axpy(1.0 - lam, y.mat())?);
                    let fmid = young_eval(&handle, (&mid).into())?;
                    worst = worst.max(clip(fmid - lam * fx - (1.0 - lam) * fy));
                }
                // Unbounded along every nonzero ray.
                let r = spectral(x.mat()).max_abs_eigenvalue();
                if r > 0.0 {
                    let mut t = 8.0 / r;
                    let mut cleared = false;
                    while t <= 1e6 {
                        let big = HermitianObservable::new(x.mat().scale(t));
                        if young_eval(&handle, (&big).into())? > 1e3 {
                            cleared = true;
                            break;
                        }
                        t *= 4.0;
                    }
                    if !cleared {
                        worst = worst.max(1.0);
                    }
                }
            }
        }

        // Psi sections stay inside the decomposable cone (spectral
        // radius 0.4), where both signs evaluate finite.
        let psi = YoungFunctionHandle::psi0(phi.clone());
        let zero_dual = DualFunctional::new(BlockMat::zeros(shape))?;
        worst = worst.max(young_eval(&psi, (&zero_dual).into())?.abs());
        for _ in 0..2 {
            let v = dual_with_radius(&sample_dual(shape, 1.0, rng), 0.4, 0.0);
            let w = dual_with_radius(&sample_dual(shape, 1.0, rng), 0.4, 0.0);
            let fv = young_eval(&psi, (&v).into())?;
            let fw = young_eval(&psi, (&w).into())?;
            let minus = v.scale(-1.0);
            worst = worst.max((fv - young_eval(&psi, (&minus).into())?).abs());
            worst = worst.max(clip(-fv));
            let lam = 0.5;
            let mid = DualFunctional::new(v.mat().scale(lam).axpy(1.0 - lam, w.mat())?)?;
            let fmid = young_eval(&psi, (&mid).into())?;
            worst = worst.max(clip(fmid - lam * fv - (1.0 - lam) * fw));
            // Any ray exits the decomposable cone, so the surrogate
            // bound is the infinite branch itself.
            let r = spectral(v.mat()).max_abs_eigenvalue();
            if r > 0.0 {
                let out = v.scale(1.2 / r);
                if young_eval(&psi, (&out).into())?.is_finite() {
                    worst = worst.max(1.0);
                }
            }
        }
        Ok(worst)
    })
}

/// Norm axioms of the Luxemburg gauges: absolute homogeneity
/// (relative slack), triangle inequality, definiteness, and the
/// residual certificate of the root.
fn check_norm_axioms(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "luxemburg norm axioms", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        let zero = HermitianObservable::new(BlockMat::zeros(shape));
        for handle in primal_handles(&phi) {
            if luxemburg_norm(&handle, (&zero).into())?.value != 0.0 {
                worst = worst.max(1.0);
            }
            for _ in 0..ctx.n_moderate() {
                // Centered samples make the centered gauge definite.
                let x = centered_obs(&phi, shape, 1.0, rng)?;
                let y = centered_obs(&phi, shape, 1.0, rng)?;
                let nx = luxemburg_norm(&handle, (&x).into())?;
                let ny = luxemburg_norm(&handle, (&y).into())?;
                if nx.value <= 0.0 {
                    worst = worst.max(1.0);
                    continue;
                }
                worst = worst.max(nx.residual);
                for lam in [0.37, 2.5] {
                    let scaled = HermitianObservable::new(x.mat().scale(lam));
                    let ns = luxemburg_norm(&handle, (&scaled).into())?.value;
                    worst = worst.max((ns - lam * nx.value).abs() / nx.value);
                }
                let sum = HermitianObservable::new(x.mat().add(y.mat())?);
                let nsum = luxemburg_norm(&handle, (&sum).into())?.value;
                worst = worst.max(clip(nsum - nx.value - ny.value));
            }
        }
        Ok(worst)
    })
}

/// Centered and uncentered Luxemburg norms are equivalent with the
/// explicit constant 2 / log 2 on centered arguments.
fn check_norm_equivalence(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "norm equivalence", |shape, rng| {
        let mut worst: f64 = 0.0;
        let ratio = 2.0 / 2.0f64.ln();
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let x = centered_obs(&phi, shape, 1.0, rng)?;
            let n = luxemburg_norm(&YoungFunctionHandle::phi_phi(phi.clone()), (&x).into())?.value;
            let n0 =
                luxemburg_norm(&YoungFunctionHandle::phi_phi0(phi.clone()), (&x).into())?.value;
            worst = worst.max(clip(n0 - n)).max(clip(n - ratio * n0));
        }
        Ok(worst)
    })
}

/// Pointwise sandwich between the gauges: Phi_0 <= Phi everywhere,
/// and Phi <= e^(2 Phi_0) - 1 on phi-centered observables, where both
/// one-sided cumulants are nonnegative.
fn check_young_sandwich(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "young sandwich", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let [h, h0] = primal_handles(&phi);
            let raw = sample_observable(shape, 1.0, rng);
            worst = worst.max(clip(
                young_eval(&h0, (&raw).into())? - young_eval(&h, (&raw).into())?,
            ));
            let x = centered_obs(&phi, shape, 1.0, rng)?;
            let f = young_eval(&h, (&x).into())?;
            let f0 = young_eval(&h0, (&x).into())?;
            worst = worst.max(clip(f0 - f));
            worst = worst.max(clip(f - ((2.0 * f0).exp() - 1.0)));
        }
        Ok(worst)
    })
}

/// The two displayed cosh lower bounds on the uncentered gauge.
/// Parts: sampled-state form over 1e-9, mean form over 1e-10.
fn check_cosh_entropy_bounds(ctx: &CheckCtx) -> Result<f64> {
    const STATE_TOL: f64 = 1e-9;
    const MEAN_TOL: f64 = 1e-10;
    shape_worst(ctx, "cosh entropy bounds", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let handle = YoungFunctionHandle::phi_phi(phi.clone());
            let x = sample_observable(shape, 1.0, rng);
            let f = young_eval(&handle, (&x).into())?;
            let omega = sample_state(shape, 1.0, rng);
            let s = relative_entropy(&omega, &phi)?.finite()?;
            let lhs = omega.expectation(x.mat())?.cosh() * (-s).exp() - 1.0;
            worst = worst.max(clip(lhs - f) / STATE_TOL);
            let mean_form = phi.expectation(x.mat())?.cosh() - 1.0;
            worst = worst.max(clip(mean_form - f) / MEAN_TOL);
        }
        Ok(worst)
    })
}

/// Normalized cosh domination: cosh(omega(x) / ||x||) <= 2 e^S.
fn check_cosh_domination(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "cosh domination of expectations", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let handle = YoungFunctionHandle::phi_phi(phi.clone());
            let x = sample_observable(shape, 1.0, rng);
            let n = luxemburg_norm(&handle, (&x).into())?.value;
            if n <= 0.0 {
                continue;
            }
            let omega = sample_state(shape, 1.0, rng);
            let s = relative_entropy(&omega, &phi)?.finite()?;
            let lhs = (omega.expectation(x.mat())? / n).cosh();
            worst = worst.max(clip(lhs - 2.0 * s.exp()));
        }
        Ok(worst)
    })
}

/// Norm-level lemmas: the unit ball is the sublevel set of the gauge,
/// with the small-ball and large-ball comparisons, plus the frozen
/// qubit norms 1/arccosh(2) and 1/arccosh(e).
fn check_luxemburg_lemmas(ctx: &CheckCtx) -> Result<f64> {
    let mut worst = shape_worst(ctx, "luxemburg norm lemmas", |shape, rng| {
        let mut worst: f64 = 0.0;
        for i in 0..ctx.n_cheap() {
            let phi = sample_state(shape, 1.0, rng);
            let handle = &primal_handles(&phi)[i % 2];
            let scale = [0.4, 1.0, 2.4][i % 3];
            let x = sample_observable(shape, scale, rng);
            let f = young_eval(handle, (&x).into())?;
            let n = luxemburg_norm(handle, (&x).into())?.value;
            if f <= 1.0 {
                worst = worst.max(clip(n - 1.0));
            }
            if n <= 1.0 {
                worst = worst.max(clip(f - 1.0));
                worst = worst.max(clip(f - n));
            } else {
                worst = worst.max(clip(n - f));
            }
        }
        Ok(worst)
    })?;

    // Frozen qubit closed forms at the maximally mixed state.
    let shape = BlockShape::full(2)?;
    let phi = FaithfulState::maximally_mixed(&shape);
    let x = HermitianObservable::new(BlockMat::from_real_diagonal(&shape, &[1.0, -1.0])?);
    let [h, h0] = primal_handles(&phi);
    let n = luxemburg_norm(&h, (&x).into())?.value;
    worst = worst.max((n - 1.0 / 2.0f64.acosh()).abs());
    let n0 = luxemburg_norm(&h0, (&x).into())?.value;
    worst = worst.max((n0 - 1.0 / std::f64::consts::E.acosh()).abs());
    Ok(worst)
}

// ---------------------------------------------------------------- duality

/// Numeric conjugate of the centered gauge family against the
/// relative-entropy closed form, including the frozen qubit instance
/// v = diag(tanh(1)/2, -tanh(1)/2) with value tanh(1) - log cosh(1).
fn check_cumulant_conjugate(ctx: &CheckCtx) -> Result<f64> {
    let mut worst = shape_worst(ctx, "cumulant conjugate oracle", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            // Keep v + phi a faithful state: spectral radius strictly
            // below the smallest eigenvalue of the base density.
            let radius = 0.8 * phi.spectral().min_eigenvalue();
            let v = dual_with_radius(&sample_dual(shape, 1.0, rng), radius, 0.0);
            let omega = FaithfulState::new(phi.density().add(v.mat())?)?;
            let closed = relative_entropy(&omega, &phi)?.finite()?;
            let numeric = cumulant_conjugate(&phi, &v)?.value;
            worst = worst.max((numeric - closed).abs());
        }
        Ok(worst)
    })?;

    let shape = BlockShape::full(2)?;
    let phi = FaithfulState::maximally_mixed(&shape);
    let d = 0.5 * 1.0f64.tanh();
    let v = DualFunctional::new(BlockMat::from_real_diagonal(&shape, &[d, -d])?)?;
    let frozen = 1.0f64.tanh() - 1.0f64.cosh().ln();
    worst = worst.max((cumulant_conjugate(&phi, &v)?.value - frozen).abs());
    Ok(worst)
}

/// Unnormalized free-energy conjugacy: over positive functionals,
/// omega(h) - S(omega, phi) + omega(1) is dominated by e^c and
/// attained at e^c [phi^h].
fn check_unnormalized_conjugacy(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "unnormalized free energy conjugacy", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let h = sample_observable(shape, 1.0, rng);
            let p = perturb(&phi, &h)?;
            let value = |w: &PositiveFunctional| -> Result<f64> {
                Ok(w.apply(h.mat())? - relative_entropy(w, &phi)?.finite()? + w.mass())
            };
            for _ in 0..6 {
                let w = sample_positive(shape, 1.0, rng);
                worst = worst.max(clip(value(&w)? - p.mass));
            }
            let attained = PositiveFunctional::from_state(&p.state).scale(p.mass)?;
            worst = worst.max((value(&attained)? - p.mass).abs());
        }
        Ok(worst)
    })
}

/// The decomposition functional agrees with twice the centered
/// conjugate at half the argument: two independent optimizers.
fn check_psi_conjugacy(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "psi phi conjugacy", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_heavy() {
            let phi = sample_state(shape, 1.0, rng);
            // Half of v must land inside the conjugate's trace-norm
            // unit ball, or both sides are infinite and uninformative.
            let v = dual_with_trace_norm(&sample_dual(shape, 1.0, rng), 1.1, 0.0);
            let psi = match psi_decompose(&phi, &v)? {
                PsiValue::Finite(d) => d.psi_value,
                PsiValue::Infinite => return Ok(f64::MAX),
            };
            let handle = YoungFunctionHandle::phi_phi0(phi.clone());
            let twice = 2.0 * conjugate(&handle, &v.scale(0.5))?.value;
            worst = worst.max((psi - twice).abs());
        }
        Ok(worst)
    })
}

/// Luxemburg versus Amemiya norm sandwich. With the biconjugate
/// identity Phi** = Phi, exact in finite dimension, the dual norm of
/// the conjugate gauge reduces to the Amemiya infimum of the primal
/// gauge itself, which keeps the check free of nested optimizers.
fn check_dual_norm_equivalence(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "dual norm equivalence", |shape, rng| {
        let mut worst: f64 = 0.0;
        for i in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let handle = &primal_handles(&phi)[i % 2];
            let x = centered_obs(&phi, shape, 1.0, rng)?;
            let lux = luxemburg_norm(handle, (&x).into())?.value;
            let am = amemiya_norm(handle, (&x).into())?;
            worst = worst.max(clip(lux - am)).max(clip(am - 2.0 * lux));
        }
        Ok(worst)
    })
}

/// Inner polar inclusion: v with conjugate value at most 1, paired at
/// half scale against x with centered cumulant at most 1, stays
/// below 1.
fn check_polar_sandwich(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "polar set sandwich", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        let cbar = |h: &HermitianObservable| -> Result<f64> {
            Ok(cumulant(&phi, h)? - phi.expectation(h.mat())?)
        };
        // Pool of x inside D = { cbar <= 1 }, pushed near the
        // boundary so the inclusion is tested where it binds.
        let mut pool = Vec::new();
        for _ in 0..ctx.n_moderate() {
            let mut x = sample_observable(shape, 1.0, rng);
            for _ in 0..40 {
                let c = cbar(&x)?;
                if c > 1.0 {
                    x = HermitianObservable::new(x.mat().scale(0.8));
                } else if c < 0.3 {
                    x = HermitianObservable::new(x.mat().scale(1.3));
                } else {
                    break;
                }
            }
            if cbar(&x)? <= 1.0 {
                pool.push(x);
            }
        }
        for _ in 0..ctx.n_heavy() {
            // Start inside the conjugate's domain: v + phi in the cone.
            let radius = 0.8 * phi.spectral().min_eigenvalue();
            let mut v = dual_with_radius(&sample_dual(shape, 1.0, rng), radius, 0.0);
            for _ in 0..25 {
                if cumulant_conjugate(&phi, &v)?.value <= 1.0 {
                    break;
                }
                v = v.scale(0.7);
            }
            if cumulant_conjugate(&phi, &v)?.value > 1.0 {
                continue;
            }
            let half = v.scale(0.5);
            for x in &pool {
                worst = worst.max(clip(pair(&half, x)? - 1.0));
            }
        }
        Ok(worst)
    })
}

/// Dual unit-ball decomposition: dual norm at most 1 forces a
/// decomposition with value at most 1; conversely values at most 1
/// keep the dual norm below the conservative factor 8. The converse
/// scale found along each ray is the reported violation base.
fn check_unit_ball(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "dual unit ball decomposition", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        let handle = YoungFunctionHandle::phi_phi0(phi.clone());
        for _ in 0..ctx.n_heavy() {
            // The dual norm is homogeneous, so a moderate starting
            // radius only conditions the inner solves.
            let v0 = dual_with_radius(&sample_dual(shape, 1.0, rng), 0.4, 0.0);
            let dn = dual_norm(&handle, &v0)?.value;
            if dn <= 1e-12 {
                continue;
            }
            let v = v0.scale(1.0 / dn);
            // Forward: on the dual unit sphere the decomposition
            // value stays at or below 1.
            let at = |s: f64| -> Result<f64> {
                match psi_decompose(&phi, &v.scale(s)) {
                    Ok(p) => Ok(p.value()),
                    // The barrier failing near the feasibility
                    // boundary reads as the infinite branch here.
                    Err(Error::NoConvergence { .. }) => Ok(f64::INFINITY),
                    Err(e) => Err(e),
                }
            };
            worst = worst.max(clip(at(1.0)? - 1.0));
            // Converse: push s up while the value stays at most 1;
            // the dual norm at that scale is s by homogeneity.
            let mut s_ok = 1.0f64;
            let mut s_hi = 1.0f64;
            while s_hi < 16.0 && at(s_hi * 1.5)? <= 1.0 {
                s_hi *= 1.5;
                s_ok = s_hi;
            }
            let mut bad = (s_hi * 1.5).min(24.0);
            for _ in 0..8 {
                let mid = 0.5 * (s_ok + bad);
                if at(mid)? <= 1.0 {
                    s_ok = mid;
                } else {
                    bad = mid;
                }
            }
            worst = worst.max(clip(s_ok - 8.0));
        }
        Ok(worst)
    })
}

/// Young inequality from conjugate certificates: the pairing never
/// exceeds gauge plus conjugate.
fn check_young_inequality(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "young inequality", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        for (i, handle) in primal_handles(&phi).iter().enumerate() {
            for _ in 0..2 {
                // The centered gauge's conjugate needs v inside the
                // trace-norm unit ball; the uncentered one is finite
                // everywhere.
                let v0 = sample_dual(shape, 1.0, rng);
                let v = if i == 0 {
                    dual_with_radius(&v0, 0.3, 0.0)
                } else {
                    dual_with_trace_norm(&v0, 0.6, 0.0)
                };
                let conj = conjugate(handle, &v)?.value;
                for _ in 0..ctx.n_moderate() {
                    let x = sample_observable(shape, 1.0, rng);
                    let f = young_eval(handle, (&x).into())?;
                    worst = worst.max(clip(pair(&v, &x)?.abs() - f - conj));
                }
            }
        }
        Ok(worst)
    })
}

/// Duality-gap certificates of the ascent stay below the profile
/// ceiling.
fn check_conjugate_gap(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "conjugate gap certificate", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        for (i, handle) in primal_handles(&phi).iter().enumerate() {
            for _ in 0..2 {
                let v0 = sample_dual(shape, 1.0, rng);
                let v = if i == 0 {
                    dual_with_radius(&v0, 0.4, 0.0)
                } else {
                    dual_with_trace_norm(&v0, 0.6, 0.0)
                };
                worst = worst.max(conjugate(handle, &v)?.gap);
            }
        }
        Ok(worst)
    })
}

/// Hoelder inequality with the factor-2 constant, the dual side
/// measured through the numeric-conjugate Luxemburg norm.
fn check_hoelder(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "hoelder inequality", |shape, rng| {
        let mut worst: f64 = 0.0;
        let phi = sample_state(shape, 1.0, rng);
        let primal = YoungFunctionHandle::phi_phi(phi.clone());
        let dual_handle =
            YoungFunctionHandle::numeric_conjugate(YoungFunctionHandle::phi_phi(phi.clone()));
        let v_count = (ctx.samples / 25).max(2);
        let x_count = (ctx.samples / 20).max(2);
        for _ in 0..v_count {
            let v = dual_with_radius(&sample_dual(shape, 1.0, rng), 0.5, 0.0);
            let nv = luxemburg_norm(&dual_handle, (&v).into())?.value;
            for _ in 0..x_count {
                let x = sample_observable(shape, 1.0, rng);
                let nx = luxemburg_norm(&primal, (&x).into())?.value;
                worst = worst.max(clip(pair(&v, &x)?.abs() - 2.0 * nx * nv));
            }
        }
        Ok(worst)
    })
}

/// Diagonal decomposition instances against the classical 1-D
/// multiplier oracle, including the frozen qubit value
/// 2 (log 2 - H(3/4)) and the infinite-branch agreement.
fn check_psi_oracle(ctx: &CheckCtx) -> Result<f64> {
    let mut worst = shape_worst(ctx, "psi classical oracle", |shape, rng| {
        let mut worst: f64 = 0.0;
        let n = shape.total_dim();
        for _ in 0..ctx.n_heavy() {
            let q = sample_probs(n, rng);
            let phi = FaithfulState::from_probabilities(shape, &q)?;
            let mut vv = traceless_vec(n, 1.0, rng);
            let mass: f64 = vv.iter().map(|&x| x.max(0.0)).sum();
            if mass > 0.0 {
                let target = rng.random_range(0.2..0.7);
                for x in &mut vv {
                    *x *= target / mass;
                }
            }
            let v = DualFunctional::new(BlockMat::from_real_diagonal(shape, &vv)?)?;
            let crate_value = psi_decompose(&phi, &v)?.value();
            let oracle_value = oracle::psi(&q, &vv);
            if crate_value.is_finite() != oracle_value.is_finite() {
                worst = worst.max(1.0);
            } else if crate_value.is_finite() {
                worst = worst.max((crate_value - oracle_value).abs());
            }
        }
        // Infinite branch: positive mass beyond any state.
        let mut vv = traceless_vec(n, 1.0, rng);
        let mass: f64 = vv.iter().map(|&x| x.max(0.0)).sum();
        if mass > 0.0 {
            for x in &mut vv {
                *x *= 1.3 / mass;
            }
            let v = DualFunctional::new(BlockMat::from_real_diagonal(shape, &vv)?)?;
            let phi = FaithfulState::maximally_mixed(shape);
            if psi_decompose(&phi, &v)?.is_finite()
                || oracle::psi(&vec![1.0 / n as f64; n], &vv).is_finite()
            {
                worst = worst.max(1.0);
            }
        }
        Ok(worst)
    })?;

    let shape = BlockShape::full(2)?;
    let phi = FaithfulState::maximally_mixed(&shape);
    let v = DualFunctional::new(BlockMat::from_real_diagonal(&shape, &[0.5, -0.5])?)?;
    let h34 = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
    let frozen = 2.0 * (2.0f64.ln() - h34);
    worst = worst.max((psi_decompose(&phi, &v)?.value() - frozen).abs());
    Ok(worst)
}

// --------------------------------------------------------------- manifold

/// Chart round trips in both directions at in-ball radii.
fn check_chart_round_trip(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "chart round trip", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let chart = Chart::new(sample_state(shape, 1.0, rng));
            // Inverse then forward at an arbitrary faithful target.
            let psi = sample_state(shape, 1.0, rng);
            let inv = chart_inverse(&chart, &psi)?;
            let back = perturb(chart.base(), &inv.h)?.state;
            worst = worst.max(back.density().sub(psi.density())?.frobenius_norm());
            // Forward then inverse at a controlled radius.
            let h0 = centered_obs(chart.base(), shape, 1.0, rng)?;
            let n0 = chart.norm(&h0)?;
            if n0 <= 0.0 {
                continue;
            }
            let h = HermitianObservable::new(h0.mat().scale(0.6 / n0));
            let image = chart_forward(&chart, &h)?;
            let rec = chart_inverse(&chart, &image)?;
            worst = worst.max(rec.h.mat().sub(h.mat())?.frobenius_norm());
            if !rec.in_ball {
                worst = worst.max(1.0);
            }
        }
        Ok(worst)
    })
}

/// Transition maps: state consistency (1e-9), affinity (1e-10), and
/// the cocycle over chart triples (1e-9), reported normalized.
fn check_transition(ctx: &CheckCtx) -> Result<f64> {
    const STATE_TOL: f64 = 1e-9;
    const AFFINE_TOL: f64 = 1e-10;
    const COCYCLE_TOL: f64 = 1e-9;
    shape_worst(ctx, "chart transition consistency", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let p1 = sample_state(shape, 1.0, rng);
            let p2 = sample_state(shape, 1.0, rng);
            let p3 = sample_state(shape, 1.0, rng);
            let h = centered_obs(&p1, shape, 0.6, rng)?;
            let t12 = transition(&p1, &p2, &h)?;
            let s1 = perturb(&p1, &h)?.state;
            let s2 = perturb(&p2, &t12)?.state;
            worst = worst.max(s1.density().sub(s2.density())?.frobenius_norm() / STATE_TOL);

            let k = centered_obs(&p1, shape, 0.6, rng)?;
            let lam = 0.3;
            let mixed = HermitianObservable::new(h.mat().scale(lam).axpy(1.0 - lam, k.mat())?);
            let lhs = transition(&p1, &p2, &mixed)?;
            let rhs = transition(&p1, &p2, &h)?
                .mat()
                .scale(lam)
                .axpy(1.0 - lam, transition(&p1, &p2, &k)?.mat())?;
            worst = worst.max(lhs.mat().sub(&rhs)?.frobenius_norm() / AFFINE_TOL);

            let via = transition(&p2, &p3, &t12)?;
            let direct = transition(&p1, &p3, &h)?;
            worst = worst.max(via.mat().sub(direct.mat())?.frobenius_norm() / COCYCLE_TOL);
        }
        Ok(worst)
    })
}

/// Transport maps: exponential cocycle, invariance of the pairing
/// under recentering, and the mixture transport acting as identity.
fn check_transport(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "transport duality", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let p1 = sample_state(shape, 1.0, rng);
            let p2 = sample_state(shape, 1.0, rng);
            let p3 = sample_state(shape, 1.0, rng);
            let h = centered_obs(&p1, shape, 1.0, rng)?;
            let u12 = TransportMap::exponential(p1.clone(), p2.clone())?;
            let u23 = TransportMap::exponential(p2.clone(), p3.clone())?;
            let u13 = TransportMap::exponential(p1.clone(), p3.clone())?;
            let via = u23.apply_observable(&u12.apply_observable(&h)?)?;
            let direct = u13.apply_observable(&h)?;
            worst = worst.max(via.mat().sub(direct.mat())?.frobenius_norm());

            let v = sample_dual(shape, 1.0, rng);
            let moved = u12.apply_observable(&h)?;
            worst = worst.max((pair(&v, &moved)? - pair(&v, &h)?).abs());

            let m12 = TransportMap::mixture(p1.clone(), p2.clone())?;
            let w = m12.apply_dual(&v)?;
            worst = worst.max(w.mat().sub(v.mat())?.frobenius_norm());
        }
        Ok(worst)
    })
}

/// Distinct centered exponents produce distinct states: counts pairs
/// separated by 1e-6 whose images collapse below 1e-12.
fn check_injectivity(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "chart injectivity", |shape, rng| {
        let mut wrong = 0u32;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let h = centered_obs(&phi, shape, 1.0, rng)?;
            let k = centered_obs(&phi, shape, 1.0, rng)?;
            if h.mat().sub(k.mat())?.frobenius_norm() < 1e-6 {
                continue;
            }
            let sh = perturb(&phi, &h)?.state;
            let sk = perturb(&phi, &k)?.state;
            if sh.density().sub(sk.density())?.frobenius_norm() < 1e-12 {
                wrong += 1;
            }
        }
        Ok(f64::from(wrong))
    })
}

/// Base-change boundedness: the centered norms at a base and at a
/// perturbed base stay within a finite ratio. The measured worst
/// ratio is the reported violation; the tolerance is a sanity
/// ceiling, not a theorem constant.
fn check_base_change(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "manifold base change bounds", |shape, rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.n_moderate() {
            let phi = sample_state(shape, 1.0, rng);
            let chart = Chart::new(phi.clone());
            let h0 = centered_obs(&phi, shape, 1.0, rng)?;
            let n0 = chart.norm(&h0)?;
            if n0 <= 0.0 {
                continue;
            }
            let h = HermitianObservable::new(h0.mat().scale(0.7 / n0));
            let moved = Chart::new(chart_forward(&chart, &h)?);
            let k = sample_observable(shape, 1.0, rng);
            let at_base =
                luxemburg_norm(&YoungFunctionHandle::phi_phi0(phi.clone()), (&k).into())?.value;
            let at_moved = luxemburg_norm(
                &YoungFunctionHandle::phi_phi0(moved.base().clone()),
                (&k).into(),
            )?
            .value;
            if at_base <= 0.0 || at_moved <= 0.0 {
                continue;
            }
            let r = at_moved / at_base;
            worst = worst.max(r).max(1.0 / r);
        }
        Ok(worst)
    })
}

/// Every pair of faithful states is connected through one chart:
/// inversion succeeds even from near the state-space boundary.
fn check_connected_component(ctx: &CheckCtx) -> Result<f64> {
    shape_worst(ctx, "manifold connected component", |shape, rng| {
        let mut wrong = 0u32;
        let n = shape.total_dim();
        for i in 0..ctx.n_moderate() {
            let chart = Chart::new(sample_state(shape, 1.0, rng));
            let target = if i % 2 == 0 {
                sample_state(shape, 2.5, rng)
            } else {
                // A state hugging the boundary of the simplex.
                let mut p = sample_probs(n, rng);
                let j = rng.random_range(0..n);
                p[j] = 1e-8;
                let s: f64 = p.iter().sum();
                for x in &mut p {
                    *x /= s;
                }
                FaithfulState::from_probabilities(shape, &p)?
            };
            match chart_inverse(&chart, &target) {
                Ok(inv) => {
                    let back = perturb(chart.base(), &inv.h)?.state;
                    if back.density().sub(target.density())?.frobenius_norm() > 1e-8 {
                        wrong += 1;
                    }
                }
                Err(_) => wrong += 1,
            }
        }
        Ok(f64::from(wrong))
    })
}

// ----------------------------------------------------- scalar reduction

/// Every closed-form quantity, evaluated on diagonal instances over
/// the commutative four-point shape, against the independent scalar
/// oracle. Optimizer outputs are covered by their own oracle checks
/// at their stated tolerances.
fn check_commutative_reduction(ctx: &CheckCtx) -> Result<f64> {
    let shape = BlockShape::commutative(4)?;
    let n = shape.total_dim();
    let mut rng = ctx.rng("commutative scalar reduction");
    let mut worst: f64 = 0.0;

    for _ in 0..ctx.n_moderate() {
        let q = sample_probs(n, &mut rng);
        let phi = FaithfulState::from_probabilities(&shape, &q)?;
        let p = sample_probs(n, &mut rng);
        let omega = FaithfulState::from_probabilities(&shape, &p)?;
        let x: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let h = HermitianObservable::new(BlockMat::from_real_diagonal(&shape, &x)?);

        // Relative entropy, also unnormalized.
        let s = relative_entropy(&omega, &phi)?.finite()?;
        worst = worst.max((s - oracle::kl(&p, &q)).abs());
        let half = PositiveFunctional::from_state(&omega).scale(0.4)?;
        let w: Vec<f64> = p.iter().map(|&x| 0.4 * x).collect();
        let s_half = relative_entropy(&half, &phi)?.finite()?;
        worst = worst.max((s_half - oracle::kl(&w, &q)).abs());

        // Cumulant, perturbed state, mass, derivative.
        let c = cumulant(&phi, &h)?;
        worst = worst.max((c - oracle::cumulant(&q, &x)).abs());
        let pt = perturb(&phi, &h)?;
        let tilted = oracle::perturbed(&q, &x);
        worst = worst.max(vec_inf_diff(&diag_entries(pt.state.density()), &tilted));
        worst = worst.max((pt.mass - oracle::cumulant(&q, &x).exp()).abs());
        let g = gateaux_derivative(&phi, &h)?;
        let slope: Vec<f64> = tilted.iter().zip(&q).map(|(&a, &b)| a - b).collect();
        worst = worst.max(vec_inf_diff(&diag_entries(g.mat()), &slope));

        // Young functions and their Luxemburg norms.
        let [hh, hh0] = primal_handles(&phi);
        worst = worst.max((young_eval(&hh, (&h).into())? - oracle::phi_phi(&q, &x)).abs());
        worst = worst.max((young_eval(&hh0, (&h).into())? - oracle::phi_phi0(&q, &x)).abs());
        let nx = luxemburg_norm(&hh, (&h).into())?.value;
        worst = worst.max((nx - oracle::luxemburg(|y| oracle::phi_phi(&q, y), &x)).abs());
        let nx0 = luxemburg_norm(&hh0, (&h).into())?.value;
        worst = worst.max((nx0 - oracle::luxemburg(|y| oracle::phi_phi0(&q, y), &x)).abs());

        // Jordan split.
        let vv = traceless_vec(n, 1.0, &mut rng);
        let v = DualFunctional::new(BlockMat::from_real_diagonal(&shape, &vv)?)?;
        let (plus, minus) = jordan_split(&v);
        let (op, om) = oracle::jordan(&vv);
        worst = worst.max(vec_inf_diff(&diag_entries(plus.mat()), &op));
        worst = worst.max(vec_inf_diff(&diag_entries(minus.mat()), &om));

        // Chart forward and inverse.
        let centered = oracle::center(&q, &x);
        let n0 = oracle::luxemburg(|y| oracle::phi_phi0(&q, y), &centered);
        if n0 > 0.0 {
            let hc: Vec<f64> = centered.iter().map(|&t| 0.5 * t / n0).collect();
            let chart = Chart::new(phi.clone());
            let hobs = HermitianObservable::new(BlockMat::from_real_diagonal(&shape, &hc)?);
            let image = chart_forward(&chart, &hobs)?;
            // The softmax route: tilt q by the centered exponent.
            let direct = oracle::perturbed(&q, &hc);
            worst = worst.max(vec_inf_diff(&diag_entries(image.density()), &direct));
            let inv = chart_inverse(&chart, &omega)?;
            let logdiff: Vec<f64> = p.iter().zip(&q).map(|(&a, &b)| a.ln() - b.ln()).collect();
            let want = oracle::center(&q, &logdiff);
            worst = worst.max(vec_inf_diff(&diag_entries(inv.h.mat()), &want));
        }

        // Transition and exponential transport.
        let hc = HermitianObservable::new(BlockMat::from_real_diagonal(
            &shape,
            &oracle::center(&q, &x),
        )?);
        let t = transition(&phi, &omega, &hc)?;
        let logdiff: Vec<f64> = q.iter().zip(&p).map(|(&a, &b)| a.ln() - b.ln()).collect();
        let k_vec = oracle::center(&p, &logdiff);
        let ct = oracle::center(&p, &oracle::center(&q, &x));
        let want: Vec<f64> = k_vec.iter().zip(&ct).map(|(&a, &b)| a + b).collect();
        worst = worst.max(vec_inf_diff(&diag_entries(t.mat()), &want));

        let u = TransportMap::exponential(phi.clone(), omega.clone())?;
        let moved = u.apply_observable(&hc)?;
        let want = oracle::center(&p, &oracle::center(&q, &x));
        worst = worst.max(vec_inf_diff(&diag_entries(moved.mat()), &want));
    }
    Ok(worst)
}

// --------------------------------------------------------------- registry

/// All suite checks. Sorted output comes from the report, not from
/// this order.
pub(crate) static REGISTRY: &[CheckDef] = &[
    CheckDef {
        name: "donald identity",
        anchor: "Donald's identity",
        tolerance: |t| t.donald,
        run: check_donald,
    },
    CheckDef {
        name: "entropy joint convexity",
        anchor: "joint convexity of relative entropy",
        tolerance: |t| t.joint_convexity,
        run: check_joint_convexity,
    },
    CheckDef {
        name: "entropy strict positivity",
        anchor: "Pinsker's inequality",
        tolerance: |t| t.strict_positivity,
        run: check_strict_positivity,
    },
    CheckDef {
        name: "entropy support dichotomy",
        anchor: "support condition for finiteness",
        tolerance: |t| t.support_dichotomy,
        run: check_support_dichotomy,
    },
    CheckDef {
        name: "cumulant chain rule",
        anchor: "chain rule of the cumulant",
        tolerance: |t| t.chain_rule,
        run: check_chain_rule,
    },
    CheckDef {
        name: "perturbation inversion",
        anchor: "involution of exponential perturbations",
        tolerance: |t| t.inversion,
        run: check_inversion,
    },
    CheckDef {
        name: "perturbation gauge uniqueness",
        anchor: "gauge freedom of the exponent",
        tolerance: |t| t.gauge_uniqueness,
        run: check_gauge_uniqueness,
    },
    CheckDef {
        name: "cumulant continuity",
        anchor: "continuity of the cumulant",
        tolerance: |t| t.continuity,
        run: check_continuity,
    },
    CheckDef {
        name: "gibbs variational principle",
        anchor: "Gibbs variational principle",
        tolerance: |t| t.variational,
        run: check_variational,
    },
    CheckDef {
        name: "cumulant bounds",
        anchor: "Peierls-Bogoliubov and Golden-Thompson",
        tolerance: |t| t.cumulant_bounds,
        run: check_cumulant_bounds,
    },
    CheckDef {
        name: "free energy shift identity",
        anchor: "free-energy shift under perturbation",
        tolerance: |t| t.shift_identity,
        run: check_shift_identity,
    },
    CheckDef {
        name: "cumulant scalar shift",
        anchor: "scalar covariance of the cumulant",
        tolerance: |t| t.scalar_shift,
        run: check_scalar_shift,
    },
    CheckDef {
        name: "modular vector oracle",
        anchor: "modular operator representation",
        tolerance: |t| t.modular_oracle,
        run: check_modular_oracle,
    },
    CheckDef {
        name: "gateaux derivative",
        anchor: "Gateaux derivative of the cumulant",
        tolerance: |t| t.gateaux,
        run: check_gateaux,
    },
    CheckDef {
        name: "young function axioms",
        anchor: "Young function axioms",
        tolerance: |t| t.young_axioms,
        run: check_young_axioms,
    },
    CheckDef {
        name: "luxemburg norm axioms",
        anchor: "norm axioms of the Luxemburg gauge",
        tolerance: |t| t.norm_axioms,
        run: check_norm_axioms,
    },
    CheckDef {
        name: "norm equivalence",
        anchor: "equivalence of the centered and uncentered gauges",
        tolerance: |t| t.norm_equivalence,
        run: check_norm_equivalence,
    },
    CheckDef {
        name: "young sandwich",
        anchor: "pointwise gauge sandwich",
        tolerance: |t| t.young_sandwich,
        run: check_young_sandwich,
    },
    CheckDef {
        name: "cosh entropy bounds",
        anchor: "cosh lower bounds on the gauge",
        tolerance: |t| t.cosh_entropy_bound,
        run: check_cosh_entropy_bounds,
    },
    CheckDef {
        name: "cosh domination of expectations",
        anchor: "continuity of states on the gauge ball",
        tolerance: |t| t.cosh_domination,
        run: check_cosh_domination,
    },
    CheckDef {
        name: "luxemburg norm lemmas",
        anchor: "Minkowski gauge of the unit ball",
        tolerance: |t| t.luxemburg_lemmas,
        run: check_luxemburg_lemmas,
    },
    CheckDef {
        name: "commutative scalar reduction",
        anchor: "classical reduction on commutative algebras",
        tolerance: |t| t.commutative_reduction,
        run: check_commutative_reduction,
    },
    CheckDef {
        name: "cumulant conjugate oracle",
        anchor: "Fenchel conjugate of the centered cumulant",
        tolerance: |t| t.cumulant_conjugate,
        run: check_cumulant_conjugate,
    },
    CheckDef {
        name: "unnormalized free energy conjugacy",
        anchor: "free-energy conjugacy on positive functionals",
        tolerance: |t| t.unnormalized_conjugacy,
        run: check_unnormalized_conjugacy,
    },
    CheckDef {
        name: "psi phi conjugacy",
        anchor: "conjugacy of the decomposition functional",
        tolerance: |t| t.psi_conjugacy,
        run: check_psi_conjugacy,
    },
    CheckDef {
        name: "dual norm equivalence",
        anchor: "Luxemburg-Amemiya norm equivalence",
        tolerance: |t| t.dual_norm_equivalence,
        run: check_dual_norm_equivalence,
    },
    CheckDef {
        name: "polar set sandwich",
        anchor: "polar of the free-energy ball",
        tolerance: |t| t.polar_sandwich,
        run: check_polar_sandwich,
    },
    CheckDef {
        name: "dual unit ball decomposition",
        anchor: "decomposition of the dual unit ball",
        tolerance: |t| t.unit_ball,
        run: check_unit_ball,
    },
    CheckDef {
        name: "young inequality",
        anchor: "Young's inequality",
        tolerance: |t| t.young_inequality,
        run: check_young_inequality,
    },
    CheckDef {
        name: "conjugate gap certificate",
        anchor: "duality gap of the ascent",
        tolerance: |t| t.conjugate_gap,
        run: check_conjugate_gap,
    },
    CheckDef {
        name: "hoelder inequality",
        anchor: "Hoelder's inequality",
        tolerance: |t| t.hoelder,
        run: check_hoelder,
    },
    CheckDef {
        name: "psi classical oracle",
        anchor: "classical decomposition oracle",
        tolerance: |t| t.psi_oracle,
        run: check_psi_oracle,
    },
    CheckDef {
        name: "chart round trip",
        anchor: "chart bijectivity on the ball",
        tolerance: |t| t.chart_round_trip,
        run: check_chart_round_trip,
    },
    CheckDef {
        name: "chart transition consistency",
        anchor: "affine transition maps",
        tolerance: |t| t.transition,
        run: check_transition,
    },
    CheckDef {
        name: "transport duality",
        anchor: "dual affine connections",
        tolerance: |t| t.transport,
        run: check_transport,
    },
    CheckDef {
        name: "chart injectivity",
        anchor: "injectivity of the exponential chart",
        tolerance: |t| t.injectivity,
        run: check_injectivity,
    },
    CheckDef {
        name: "manifold base change bounds",
        anchor: "equivalence of norms across chart centers",
        tolerance: |t| t.base_change_ceiling,
        run: check_base_change,
    },
    CheckDef {
        name: "manifold connected component",
        anchor: "single exponential component",
        tolerance: |t| t.connected_component,
        run: check_connected_component,
    },
];
