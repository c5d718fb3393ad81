//! Deterministic random generators for test inputs.
//!
//! Every sampler takes an explicit RNG. The verification suite derives
//! one ChaCha12 stream per (seed, check label) through [`rng_for`], so
//! adding or reordering checks never shifts the draws of the others.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::block::{BlockMat, BlockShape};
use crate::algebra::spectral::func_calc;
use crate::algebra::types::{
    DualFunctional, FaithfulState, HermitianObservable, PositiveFunctional,
};

/// Mixing weight with the uniform state that keeps sampled states away
/// from the faithfulness floor.
const STATE_MIX: f64 = 1e-6;

/// FNV-1a over the label, then splitmix64 expansion of (hash, seed)
/// into a 256-bit ChaCha key.
pub fn rng_for(label: &str, seed: u64) -> ChaCha12Rng {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    let mut key = [0u8; 32];
    let mut x = h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for chunk in key.chunks_exact_mut(8) {
        x = splitmix64(&mut x);
        chunk.copy_from_slice(&x.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard normal via Box-Muller on two uniform draws.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_hermitian_block(n: usize, scale: f64, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let mut b = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = Complex64::new(scale * standard_normal(rng), 0.0);
        for j in (i + 1)..n {
            let re = scale * std::f64::consts::FRAC_1_SQRT_2 * standard_normal(rng);
            let im = scale * std::f64::consts::FRAC_1_SQRT_2 * standard_normal(rng);
            b[(i, j)] = Complex64::new(re, im);
            b[(j, i)] = Complex64::new(re, -im);
        }
    }
    b
}

/// Random hermitian observable with independent Gaussian entries of
/// standard deviation `scale`.
pub fn sample_observable(
    shape: &BlockShape,
    scale: f64,
    rng: &mut impl Rng,
) -> HermitianObservable {
    let blocks = shape
        .dims()
        .iter()
        .map(|&n| random_hermitian_block(n, scale, rng))
        .collect();
    HermitianObservable::new(BlockMat::symmetrized(shape.clone(), blocks))
}

/// Random faithful state `exp(scale H) / Z`, mixed with the uniform
/// state at weight `1e-6` so the eigenvalue floor always holds.
pub fn sample_state(shape: &BlockShape, scale: f64, rng: &mut impl Rng) -> FaithfulState {
    let h = sample_observable(shape, scale, rng);
    let gibbs = func_calc(h.mat(), f64::exp);
    let z = gibbs.trace();
    let n = shape.total_dim() as f64;
    let mixed = gibbs
        .scale((1.0 - STATE_MIX) / z)
        .add(&BlockMat::identity(shape).scale(STATE_MIX / n))
        .expect("same shape");
    FaithfulState::new_renormalized(mixed).expect("gibbs mixture is faithful")
}

/// Random traceless hermitian functional.
pub fn sample_dual(shape: &BlockShape, scale: f64, rng: &mut impl Rng) -> DualFunctional {
    let h = sample_observable(shape, scale, rng);
    let n = shape.total_dim() as f64;
    let centered = h.mat().add_scaled_identity(-h.mat().trace() / n);
    DualFunctional::new(centered).expect("centered by construction")
}

/// Random positive functional `exp(scale H)`, mass left free.
pub fn sample_positive(shape: &BlockShape, scale: f64, rng: &mut impl Rng) -> PositiveFunctional {
    let h = sample_observable(shape, scale, rng);
    PositiveFunctional::new_unchecked(func_calc(h.mat(), f64::exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_streams_are_label_separated() {
        let mut a = rng_for("alpha", 7);
        let mut b = rng_for("beta", 7);
        let mut a2 = rng_for("alpha", 7);
        let xa: u64 = a.random();
        let xb: u64 = b.random();
        let xa2: u64 = a2.random();
        assert_eq!(xa, xa2);
        assert_ne!(xa, xb);
    }

    #[test]
    fn sampled_state_is_faithful_and_normalized() {
        let shape = BlockShape::new(vec![2, 2]).unwrap();
        let mut rng = rng_for("state-sample-test", 3);
        for _ in 0..10 {
            let s = sample_state(&shape, 0.8, &mut rng);
            assert!((s.density().trace() - 1.0).abs() < 1e-12);
            assert!(s.spectral().min_eigenvalue() > 1e-8);
        }
    }

    #[test]
    fn sampled_dual_is_traceless() {
        let shape = BlockShape::full(3).unwrap();
        let mut rng = rng_for("dual-sample-test", 5);
        for _ in 0..10 {
            let v = sample_dual(&shape, 1.0, &mut rng);
            assert!(v.mat().trace().abs() < 1e-13);
        }
    }

    #[test]
    fn normal_moments_are_plausible() {
        let mut rng = rng_for("normal-moments", 11);
        let n = 20_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let x = standard_normal(&mut rng);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
