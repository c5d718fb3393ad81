//! Blockwise spectral decomposition and functional calculus.
//!
//! Every matrix function in this crate (exp, log, sqrt, inverse, powers)
//! goes through this one primitive: a hermitian eigendecomposition per
//! block, eigenvalues sorted ascending, followed by reconstruction
//! `sum f(lambda) u u*`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::block::{BlockMat, BlockShape};

/// Eigendecomposition of one block. Eigenvalues ascend; `vectors`
/// columns form the matching orthonormal frame.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column k belonging to eigenvalue k.
    pub vectors: DMatrix<Complex64>,
}

/// Blockwise spectral decomposition of a hermitian element.
#[derive(Clone, Debug)]
pub struct Spectral {
    shape: BlockShape,
    /// One spectrum per block, in shape order.
    pub blocks: Vec<BlockSpectrum>,
}

impl Spectral {
    /// Shape the decomposition lives on.
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    /// All eigenvalues across blocks, ascending.
    pub fn eigenvalues_ascending(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.eigenvalues.iter().copied())
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        all
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| b.eigenvalues.first())
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Largest eigenvalue magnitude (operator norm of the element).
    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.eigenvalues.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Reconstructs `sum f(lambda) u u*` blockwise. The result is
    /// symmetrized to keep stored data exactly hermitian.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> BlockMat {
        let blocks = self
            .blocks
            .iter()
            .map(|spec| {
                let d = spec.vectors.nrows();
                let mut scaled = spec.vectors.clone();
                for (k, col) in scaled.column_iter_mut().enumerate() {
                    let fv = Complex64::new(f(spec.eigenvalues[k]), 0.0);
                    let mut col = col;
                    col *= fv;
                }
                let out = &scaled * spec.vectors.adjoint();
                debug_assert_eq!(out.nrows(), d);
                out
            })
            .collect();
        BlockMat::symmetrized(self.shape.clone(), blocks)
    }
}

/// Hermitian eigendecomposition of one dense block, ascending.
fn eigh_block(block: &DMatrix<Complex64>) -> BlockSpectrum {
    let d = block.nrows();
    if d == 1 {
        return BlockSpectrum {
            eigenvalues: vec![block[(0, 0)].re],
            vectors: DMatrix::identity(1, 1),
        };
    }
    let se = block.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[i]
            .partial_cmp(&se.eigenvalues[j])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(d, d);
    for (k, &i) in order.iter().enumerate() {
        vectors.column_mut(k).copy_from(&se.eigenvectors.column(i));
    }
    BlockSpectrum {
        eigenvalues,
        vectors,
    }
}

/// Spectral decomposition of a hermitian block-diagonal element.
pub fn spectral(m: &BlockMat) -> Spectral {
    let blocks = m.blocks().iter().map(eigh_block).collect();
    Spectral {
        shape: m.shape().clone(),
        blocks,
    }
}

/// Functional calculus `f(m)` through the spectral primitive.
pub fn func_calc(m: &BlockMat, f: impl Fn(f64) -> f64) -> BlockMat {
    spectral(m).apply(f)
}
