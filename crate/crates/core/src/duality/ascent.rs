//! First-order maximizer for pairing-minus-convex objectives.
//!
//! Every Fenchel conjugate in this crate is a maximization of
//! f(x) = pair(v, x) - N(x) with N smooth convex and an analytic
//! gradient, so one Barzilai-Borwein ascent with an Armijo safeguard
//! serves them all. Deterministic: fixed start, fixed schedules.

use crate::algebra::block::BlockMat;
use crate::algebra::types::FaithfulState;
use crate::error::{Error, Result};
use crate::perturbation::cumulant_and_density;

/// Gradient-norm threshold at which an ascent counts as converged,
/// scaled by (1 + Frobenius norm of v).
pub const ASCENT_GRAD_TOL: f64 = 1e-8;

/// Hard cap on ascent iterations; exceeding it is an error carrying the
/// best iterate, never a silent wrong answer.
pub const ASCENT_MAX_ITER: usize = 10_000;

/// Armijo sufficient-increase parameter.
const ARMIJO_SLOPE: f64 = 1e-4;

/// Length of the nonmonotone acceptance window. Ill-conditioned
/// cumulant Hessians make strictly monotone ascent oscillate near the
/// maximizer; comparing against the window minimum instead lets BB
/// steps through while still forcing long-run increase.
const WINDOW: usize = 8;

/// Duality-gap level at which a line-search collapse still counts as
/// success: gn * (1 + |x|_F) bounds the distance to the supremum for
/// these 1-smooth objectives, so below this the iterate certifies the
/// value to well under any tolerance the callers check.
const STALL_GAP: f64 = 1e-6;

/// Objective values beyond this certify divergence; a conjugate this
/// large is +infinity for every caller, so the ascent stops burning
/// iterations on it.
const VALUE_CAP: f64 = 1e9;

/// Smooth convex gauges with analytic gradients.
pub(crate) enum SmoothConvex<'a> {
    /// Phi_phi; gradient (exp(log rho + x) - exp(log rho - x))/2.
    PhiPhi(&'a FaithfulState),
    /// Phi_{phi,0}; gradient (rho_{[phi^x]} - rho_{[phi^{-x}]})/2.
    PhiPhi0(&'a FaithfulState),
    /// Centered cumulant c_phi(x) - phi(x); gradient rho_{[phi^x]} - rho_phi.
    CumulantBar(&'a FaithfulState),
}

impl SmoothConvex<'_> {
    pub(crate) fn value_grad(&self, x: &BlockMat) -> Result<(f64, BlockMat)> {
        match self {
            SmoothConvex::PhiPhi(phi) => {
                let (cp, dp) = cumulant_and_density(phi, x)?;
                let (cm, dm) = cumulant_and_density(phi, &x.scale(-1.0))?;
                let value = 0.5 * (cp.exp_m1() + cm.exp_m1());
                let grad = dp.scale(0.5 * cp.exp()).sub(&dm.scale(0.5 * cm.exp()))?;
                Ok((value, grad))
            }
            SmoothConvex::PhiPhi0(phi) => {
                let (cp, dp) = cumulant_and_density(phi, x)?;
                let (cm, dm) = cumulant_and_density(phi, &x.scale(-1.0))?;
                Ok((0.5 * (cp + cm), dp.sub(&dm)?.scale(0.5)))
            }
            SmoothConvex::CumulantBar(phi) => {
                let (c, d) = cumulant_and_density(phi, x)?;
                let value = c - phi.expectation(x)?;
                Ok((value, d.sub(phi.density())?))
            }
        }
    }
}

/// Outcome of one ascent run.
pub(crate) struct AscentResult {
    /// Final (or best) iterate.
    pub x: BlockMat,
    /// Objective value there.
    pub value: f64,
    /// Gradient norm there.
    pub grad_norm: f64,
}

/// Maximizes f(x) = pair(v, x) - n(x) from `x0` (default 0).
///
/// `stop_above` turns the run into a threshold certificate: any iterate
/// value is a valid lower bound on the supremum, so crossing the
/// threshold ends the run early.
pub(crate) fn maximize(
    n: &SmoothConvex<'_>,
    v: &BlockMat,
    x0: Option<&BlockMat>,
    grad_tol: f64,
    stop_above: Option<f64>,
) -> Result<AscentResult> {
    let mut x = match x0 {
        Some(m) => m.clone(),
        None => BlockMat::zeros(v.shape()),
    };
    let (nval, ngrad) = n.value_grad(&x)?;
    let mut f = v.pair(&x)? - nval;
    let mut g = v.sub(&ngrad)?;
    let tol = grad_tol * (1.0 + v.frobenius_norm());
    let mut prev: Option<(BlockMat, BlockMat)> = None;
    let mut recent = [f; WINDOW];
    let mut head = 0usize;

    for it in 0..ASCENT_MAX_ITER {
        let gn = g.frobenius_norm();
        if gn <= tol {
            return Ok(AscentResult {
                x,
                value: f,
                grad_norm: gn,
            });
        }
        if let Some(bound) = stop_above {
            if f > bound {
                return Ok(AscentResult {
                    x,
                    value: f,
                    grad_norm: gn,
                });
            }
        } else if f > VALUE_CAP {
            // Unbounded ray: without a threshold to certify against,
            // chasing a divergent supremum wastes the whole budget.
            return Err(Error::NoConvergence {
                iterations: it,
                best: f,
                gap: gn * (1.0 + x.frobenius_norm()),
            });
        }

        let mut alpha = 1.0;
        if let Some((px, pg)) = &prev {
            let s = x.sub(px)?;
            let y = pg.sub(&g)?;
            let sy = s.pair(&y)?;
            if sy > 1e-300 {
                alpha = (s.pair(&s)? / sy).clamp(1e-12, 1e12);
            }
        }
        // A stagnant gradient pair (saturated cumulants) makes the raw
        // quotient explode; a scale-aware step cap keeps the line
        // search out of the overshoot-and-halve cycle without slowing
        // the endgame, where gn is tiny and the cap is loose.
        alpha = alpha.min(10.0 * (1.0 + x.frobenius_norm()) / gn);

        // Nonmonotone reference: worst value in the recent window.
        let reference = recent.iter().copied().fold(f64::INFINITY, f64::min);
        let mut accepted = None;
        for _ in 0..60 {
            let xc = x.axpy(alpha, &g)?;
            let (nv2, ng2) = n.value_grad(&xc)?;
            let f2 = v.pair(&xc)? - nv2;
            if f2.is_finite() && f2 >= reference + ARMIJO_SLOPE * alpha * gn * gn {
                accepted = Some((xc, f2, ng2));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((xc, f2, ng2)) => {
                let g2 = v.sub(&ng2)?;
                prev = Some((x, g));
                x = xc;
                f = f2;
                g = g2;
                recent[head] = f;
                head = (head + 1) % WINDOW;
            }
            None => {
                // Step collapsed below floating-point resolution. The
                // objectives here are smooth and concave, so this only
                // happens at gradient-precision level; if the duality
                // gap is already negligible the iterate certifies the
                // value, otherwise report rather than loop.
                let gap = gn * (1.0 + x.frobenius_norm());
                if gap <= STALL_GAP {
                    return Ok(AscentResult {
                        x,
                        value: f,
                        grad_norm: gn,
                    });
                }
                return Err(Error::NoConvergence {
                    iterations: it,
                    best: f,
                    gap,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: ASCENT_MAX_ITER,
        best: f,
        gap: g.frobenius_norm() * (1.0 + x.frobenius_norm()),
    })
}
