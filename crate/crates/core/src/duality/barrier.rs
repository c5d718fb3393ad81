//! Log-barrier interior-point solver for the optimal entropy
//! decomposition behind Psi_{phi,0}.
//!
//! Minimizes S(X, phi) + S(X - V, phi) over the spectrahedron
//! {X > 0, X - V > 0, Tr X = 1}. The trace constraint is handled by
//! projecting gradients onto the traceless subspace; the semidefinite
//! constraints by the barrier -mu (log det X + log det(X - V)) with a
//! decreasing mu schedule, then a final polish on the pure objective,
//! whose own entropy gradient blows up at the boundary and keeps the
//! iterate interior. Steps are Barzilai-Borwein with a nonmonotone
//! acceptance window; near-boundary minimizers make the Hessian badly
//! conditioned and a monotone line search oscillates there instead of
//! converging. Intermediate stages only guide the path, so exhausting
//! a stage budget moves on with the current iterate; only the final
//! polish must reach its gradient target.

use crate::algebra::block::BlockMat;
use crate::algebra::spectral::{spectral, Spectral};
use crate::algebra::types::FaithfulState;
use crate::entropy::xlnx;
use crate::error::{Error, Result};

use super::{PSI_FEASIBILITY_MARGIN, PSI_STATIONARITY_TOL};

/// Initial barrier weight.
const MU_START: f64 = 1.0;
/// Multiplicative decrease per outer stage.
const MU_FACTOR: f64 = 0.2;
/// Barrier stages stop once mu drops below this; the polish stage on
/// the pure objective runs after.
const MU_MIN: f64 = 1e-6;
/// Armijo sufficient-decrease parameter.
const ARMIJO_SLOPE: f64 = 1e-4;
/// Iteration budget per intermediate stage.
const STAGE_ITER_CAP: usize = 1_500;
/// Iteration budget for the final polish.
const FINAL_ITER_CAP: usize = 6_000;
/// Nonmonotone window: acceptance compares against the worst of this
/// many recent values.
const WINDOW: usize = 8;

fn eigen_sum(spec: &Spectral, f: impl Fn(f64) -> f64) -> f64 {
    spec.blocks
        .iter()
        .flat_map(|b| b.eigenvalues.iter())
        .map(|&l| f(l))
        .sum()
}

/// Barrier objective and projected gradient at X, or None when X or
/// X - V has left the strictly feasible cone.
fn eval(
    x: &BlockMat,
    v: &BlockMat,
    log_rho: &BlockMat,
    mu: f64,
) -> Result<Option<(f64, BlockMat)>> {
    let y = x.sub(v)?;
    let sx = spectral(x);
    let sy = spectral(&y);
    if sx.min_eigenvalue() <= 0.0 || sy.min_eigenvalue() <= 0.0 {
        return Ok(None);
    }
    let f = eigen_sum(&sx, xlnx) - x.pair(log_rho)? + eigen_sum(&sy, xlnx) - y.pair(log_rho)?;
    let mut value = f;
    let mut grad = sx
        .apply(f64::ln)
        .add(&sy.apply(f64::ln))?
        .axpy(-2.0, log_rho)?
        .add_scaled_identity(2.0);
    if mu > 0.0 {
        value -= mu * (eigen_sum(&sx, f64::ln) + eigen_sum(&sy, f64::ln));
        let inv = sx.apply(|l| 1.0 / l).add(&sy.apply(|l| 1.0 / l))?;
        grad = grad.axpy(-mu, &inv)?;
    }
    let n = x.shape().total_dim() as f64;
    let projected = grad.add_scaled_identity(-grad.trace() / n);
    Ok(Some((value, projected)))
}

/// Runs the barrier schedule. Returns None for infeasible V (the
/// +infinity branch of Psi), otherwise the minimizer X and the final
/// projected gradient norm of the pure objective.
pub(crate) fn solve(phi: &FaithfulState, v: &BlockMat) -> Result<Option<(BlockMat, f64)>> {
    let v_plus = spectral(v).apply(|l| l.max(0.0));
    let tr_plus = v_plus.trace();
    // X >= 0, X - V >= 0, Tr X = 1 force Tr v_plus <= 1; the margin
    // keeps a strictly feasible barrier start.
    if tr_plus > 1.0 - PSI_FEASIBILITY_MARGIN {
        return Ok(None);
    }
    let mut x = v_plus.add(&phi.density().scale(1.0 - tr_plus))?;
    let log_rho = phi.log_density().clone();

    let mut stages: Vec<(f64, f64)> = Vec::new();
    let mut mu = MU_START;
    while mu >= MU_MIN {
        stages.push((mu, (0.05 * mu).max(1e-6)));
        mu *= MU_FACTOR;
    }
    stages.push((0.0, PSI_STATIONARITY_TOL));

    let mut last_gn = f64::INFINITY;
    for &(mu, tol) in &stages {
        let final_stage = mu == 0.0;
        let cap = if final_stage {
            FINAL_ITER_CAP
        } else {
            STAGE_ITER_CAP
        };
        let (mut value, mut grad) = match eval(&x, v, &log_rho, mu)? {
            Some(p) => p,
            None => {
                return Err(Error::NoConvergence {
                    iterations: 0,
                    best: f64::NAN,
                    gap: f64::INFINITY,
                })
            }
        };
        let mut recent = [value; WINDOW];
        let mut head = 0usize;
        let mut prev: Option<(BlockMat, BlockMat)> = None;
        let mut iters = 0usize;
        loop {
            let gn = grad.frobenius_norm();
            last_gn = gn;
            if gn <= tol {
                break;
            }
            iters += 1;
            if iters > cap {
                if final_stage {
                    return Err(Error::NoConvergence {
                        iterations: iters,
                        best: value,
                        gap: gn,
                    });
                }
                // Carry the iterate into the next stage.
                break;
            }

            let mut alpha = 1.0;
            if let Some((px, pg)) = &prev {
                let s = x.sub(px)?;
                let yv = grad.sub(pg)?;
                let sy = s.pair(&yv)?;
                if sy > 1e-300 {
                    alpha = (s.pair(&s)? / sy).clamp(1e-14, 1e10);
                }
            }

            let reference = recent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut accepted = None;
            for _ in 0..60 {
                let xc = x.axpy(-alpha, &grad)?;
                if let Some((v2, g2)) = eval(&xc, v, &log_rho, mu)? {
                    if v2.is_finite() && v2 <= reference - ARMIJO_SLOPE * alpha * gn * gn {
                        accepted = Some((xc, v2, g2));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((xc, v2, g2)) => {
                    prev = Some((x, grad));
                    x = xc;
                    value = v2;
                    grad = g2;
                    recent[head] = value;
                    head = (head + 1) % WINDOW;
                }
                None => {
                    // Progress below floating-point resolution; accept
                    // if the hard stationarity contract already holds,
                    // otherwise move to the next stage (fatal only at
                    // the polish).
                    if final_stage && gn > PSI_STATIONARITY_TOL {
                        return Err(Error::NoConvergence {
                            iterations: iters,
                            best: value,
                            gap: gn,
                        });
                    }
                    break;
                }
            }
        }
    }
    Ok(Some((x, last_gn)))
}
