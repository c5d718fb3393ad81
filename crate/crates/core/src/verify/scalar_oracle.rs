//! Independent scalar implementations used as oracles on diagonal
//! instances.
//!
//! Everything here works on plain probability vectors and real
//! diagonals, shares no code with the operator paths, and prefers the
//! most direct formula over the numerically fanciest one. Tolerances
//! against these oracles live in the check registry, not here.

/// x log x with the 0 log 0 = 0 convention.
fn xlx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Classical relative entropy sum p_i log(p_i / q_i); infinite when p
/// puts weight where q has none.
pub(crate) fn kl(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return f64::INFINITY;
        }
        s += pi * (pi.ln() - qi.ln());
    }
    s
}

fn lse(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + vals.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Classical cumulant log sum q_i e^{x_i}.
pub(crate) fn cumulant(q: &[f64], x: &[f64]) -> f64 {
    let vals: Vec<f64> = q.iter().zip(x).map(|(&qi, &xi)| qi.ln() + xi).collect();
    lse(&vals)
}

/// The tilted distribution q_i e^{x_i - c}.
pub(crate) fn perturbed(q: &[f64], x: &[f64]) -> Vec<f64> {
    let c = cumulant(q, x);
    q.iter()
        .zip(x)
        .map(|(&qi, &xi)| (qi.ln() + xi - c).exp())
        .collect()
}

/// Mean sum q_i x_i.
pub(crate) fn mean(q: &[f64], x: &[f64]) -> f64 {
    q.iter().zip(x).map(|(&qi, &xi)| qi * xi).sum()
}

/// The uncentered gauge: half-sum of the exponentiated cumulants at
/// +/- x, minus one.
pub(crate) fn phi_phi(q: &[f64], x: &[f64]) -> f64 {
    let xm: Vec<f64> = x.iter().map(|v| -v).collect();
    0.5 * (cumulant(q, x).exp() + cumulant(q, &xm).exp()) - 1.0
}

/// The centered gauge: half-sum of the cumulants at +/- x.
pub(crate) fn phi_phi0(q: &[f64], x: &[f64]) -> f64 {
    let xm: Vec<f64> = x.iter().map(|v| -v).collect();
    0.5 * (cumulant(q, x) + cumulant(q, &xm))
}

/// Scalar Luxemburg norm inf{t > 0 : f(x/t) <= 1} by plain bisection
/// on a doubling bracket. Deliberately method-independent of the
/// operator path: no spectral seed, no secant polish.
pub(crate) fn luxemburg(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
    if x.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let at = |t: f64| {
        let scaled: Vec<f64> = x.iter().map(|v| v / t).collect();
        f(&scaled)
    };
    let mut hi = 1.0;
    while at(hi) > 1.0 {
        hi *= 2.0;
        assert!(hi < 1e100, "scalar luxemburg bracket diverged");
    }
    let mut lo = hi;
    while at(lo) <= 1.0 {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-300 {
            return 0.0;
        }
    }
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Total mass of the positive part of v.
fn positive_mass(v: &[f64]) -> f64 {
    v.iter().map(|&vi| vi.max(0.0)).sum()
}

/// Entropy sum of the stationary pair (p(mu), r(mu)) at multiplier mu.
///
/// Stationarity of the decomposition problem forces p_i r_i =
/// q_i^2 e^mu with p_i - r_i = v_i, so both halves follow from the
/// quadratic's positive root; the expressions below pick the
/// subtraction-free branch on each sign of v_i.
fn psi_pair(q: &[f64], v: &[f64], mu: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = Vec::with_capacity(q.len());
    let mut r = Vec::with_capacity(q.len());
    for (&qi, &vi) in q.iter().zip(v) {
        let disc = (vi * vi + 4.0 * qi * qi * mu.exp()).sqrt();
        let (pi, ri) = if vi >= 0.0 {
            let pi = 0.5 * (vi + disc);
            (pi, 2.0 * qi * qi * mu.exp() / (disc + vi))
        } else {
            let ri = 0.5 * (disc - vi);
            (2.0 * qi * qi * mu.exp() / (disc - vi), ri)
        };
        p.push(pi);
        r.push(ri);
    }
    (p, r)
}

/// Classical decomposition functional: the minimum of
/// KL(p, q) + KL(r, q) over p - r = v with p a probability vector,
/// found by bisecting the single multiplier mu in sum p_i(mu) = 1.
/// Returns infinity when the positive part of v already outweighs a
/// probability vector.
pub(crate) fn psi(q: &[f64], v: &[f64]) -> f64 {
    if positive_mass(v) >= 1.0 {
        return f64::INFINITY;
    }
    let total = |mu: f64| psi_pair(q, v, mu).0.iter().sum::<f64>();
    let mut lo = -1.0;
    while total(lo) >= 1.0 {
        lo -= 60.0;
        assert!(lo > -1e5, "psi oracle lower bracket diverged");
    }
    let mut hi = 1.0;
    while total(hi) <= 1.0 {
        hi += 60.0;
        assert!(hi < 1e5, "psi oracle upper bracket diverged");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if total(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (p, r) = psi_pair(q, v, 0.5 * (lo + hi));
    let ent = |w: &[f64]| {
        w.iter()
            .zip(q)
            .map(|(&wi, &qi)| xlx(wi) - wi * qi.ln())
            .sum::<f64>()
    };
    ent(&p) + ent(&r)
}

/// Componentwise Jordan split v = v_+ - v_-.
pub(crate) fn jordan(v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let plus: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    let minus: Vec<f64> = v.iter().map(|&x| (-x).max(0.0)).collect();
    (plus, minus)
}

/// Centering x - mean_q(x).
pub(crate) fn center(q: &[f64], x: &[f64]) -> Vec<f64> {
    let m = mean(q, x);
    x.iter().map(|&v| v - m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kl_and_cumulant_match_closed_forms() {
        let q = [0.25, 0.75];
        let p = [0.5, 0.5];
        let direct = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        assert!((kl(&p, &q) - direct).abs() < 1e-15);
        assert_eq!(kl(&[1.0, 0.0], &[0.0, 1.0]), f64::INFINITY);

        let x = [1.0, -1.0];
        let direct = (0.25 * 1.0f64.exp() + 0.75 * (-1.0f64).exp()).ln();
        assert!((cumulant(&q, &x) - direct).abs() < 1e-15);
        let p = perturbed(&q, &x);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauges_reduce_to_cosh_on_the_uniform_qubit() {
        let q = [0.5, 0.5];
        let x = [1.0, -1.0];
        // Even section: omega(cosh x) - 1 = cosh(1) - 1 and the
        // centered gauge is log cosh(1).
        assert!((phi_phi(&q, &x) - (1.0f64.cosh() - 1.0)).abs() < 1e-14);
        assert!((phi_phi0(&q, &x) - 1.0f64.cosh().ln()).abs() < 1e-14);
        // Frozen norms: 1/acosh(2) uncentered, 1/acosh(e) centered.
        let n = luxemburg(|y| phi_phi(&q, y), &x);
        assert!((n - 1.0 / 2.0f64.acosh()).abs() < 1e-12);
        let n0 = luxemburg(|y| phi_phi0(&q, y), &x);
        assert!((n0 - 1.0 / std::f64::consts::E.acosh()).abs() < 1e-12);
    }

    #[test]
    fn psi_oracle_hits_the_qubit_closed_form() {
        // For q uniform and v = (1/2, -1/2) the minimizer is p =
        // (3/4, 1/4), r = (1/4, 3/4), giving 2(log 2 - H(3/4)) with
        // H the natural-log binary entropy.
        let q = [0.5, 0.5];
        let v = [0.5, -0.5];
        let h34 = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        let expected = 2.0 * (2.0f64.ln() - h34);
        assert!((psi(&q, &v) - expected).abs() < 1e-12);
        assert_eq!(psi(&q, &[1.5, -1.5]), f64::INFINITY);
    }

    #[test]
    fn psi_oracle_matches_brute_force_on_a_grid() {
        // Three-point instance, brute force over the 2-simplex with
        // the objective rebuilt inline to stay independent.
        let q = [0.2, 0.3, 0.5];
        let v = [0.1, -0.25, 0.15];
        let n = 400;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let p0 = i as f64 / n as f64;
                let p1 = j as f64 / n as f64;
                let p = [p0, p1, 1.0 - p0 - p1];
                let r = [p[0] - v[0], p[1] - v[1], p[2] - v[2]];
                if r.iter().any(|&x| x < -1e-12) {
                    continue;
                }
                let ent = |w: &[f64]| {
                    w.iter()
                        .zip(q.iter())
                        .map(|(&wi, &qi): (&f64, &f64)| xlx(wi.max(0.0)) - wi.max(0.0) * qi.ln())
                        .sum::<f64>()
                };
                best = best.min(ent(&p) + ent(&r));
            }
        }
        let exact = psi(&q, &v);
        // Grid resolution limits the brute force, not the oracle.
        assert!((exact - best).abs() < 5e-4, "oracle {exact} vs grid {best}");
        assert!(
            exact <= best + 5e-6,
            "oracle must not exceed the grid minimum by more than noise"
        );
    }

    #[test]
    fn luxemburg_bisection_is_tight() {
        // f(x/t) = (|x|/t)^2 has unit root at t = |x|.
        let n = luxemburg(|y| y[0] * y[0], &[3.0]);
        assert!((n - 3.0).abs() < 1e-12);
    }
}
