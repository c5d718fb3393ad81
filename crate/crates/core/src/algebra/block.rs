//! Block shapes and hermitian block-diagonal matrices.
//!
//! A shape `[d1, ..., dk]` describes the direct sum of full complex
//! matrix algebras of those dimensions. Every element handled by this
//! crate is hermitian and block diagonal; blocks are stored densely and
//! never mix under any operation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise bound on |B - B*| accepted at construction. Blocks are
/// symmetrized afterwards so stored data is exactly hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Direct-sum shape: one entry per full matrix block. All-ones shapes
/// describe commutative (classical) systems.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockShape {
    dims: Vec<usize>,
}

impl BlockShape {
    /// Builds a shape from block dimensions. At least one block, every
    /// dimension positive.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidShape);
        }
        Ok(Self { dims })
    }

    /// Single full block of dimension `n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `n` one-dimensional blocks: the commutative system on `n` points.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Block dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension of the underlying space.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// True when every block is one-dimensional.
    pub fn is_commutative(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }
}

impl std::fmt::Display for BlockShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Hermitian element of a block-diagonal algebra.
#[derive(Clone, Debug)]
pub struct BlockMat {
    shape: BlockShape,
    blocks: Vec<DMatrix<Complex64>>,
}

impl BlockMat {
    /// Validates dimensions and hermiticity (entrywise 1e-12), then
    /// stores the symmetrized blocks (B + B*)/2.
    pub fn from_blocks(shape: BlockShape, blocks: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::BlockCountMismatch {
                expected: shape.block_count(),
                got: blocks.len(),
            });
        }
        for (index, (block, &dim)) in blocks.iter().zip(shape.dims()).enumerate() {
            if block.nrows() != dim || block.ncols() != dim {
                return Err(Error::BlockDimMismatch {
                    index,
                    rows: block.nrows(),
                    cols: block.ncols(),
                    dim,
                });
            }
            let mut deviation = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    let d = (block[(i, j)] - block[(j, i)].conj()).norm();
                    deviation = deviation.max(d);
                }
            }
            if deviation > HERMITICITY_TOL {
                return Err(Error::NotHermitian {
                    index,
                    deviation,
                    tol: HERMITICITY_TOL,
                });
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|b| {
                let adj = b.adjoint();
                (b + adj) * Complex64::new(0.5, 0.0)
            })
            .collect();
        Ok(Self { shape, blocks })
    }

    /// Wraps blocks that are hermitian by construction.
    pub(crate) fn from_blocks_unchecked(
        shape: BlockShape,
        blocks: Vec<DMatrix<Complex64>>,
    ) -> Self {
        Self { shape, blocks }
    }

    /// Symmetrizes and wraps blocks whose anti-hermitian part is pure
    /// rounding noise (reconstructions, gradients, sums of products).
    pub(crate) fn symmetrized(shape: BlockShape, blocks: Vec<DMatrix<Complex64>>) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|b| {
                let adj = b.adjoint();
                (b + adj) * Complex64::new(0.5, 0.0)
            })
            .collect();
        Self { shape, blocks }
    }

    /// Zero element on `shape`.
    pub fn zeros(shape: &BlockShape) -> Self {
        let blocks = shape
            .dims()
            .iter()
            .map(|&d| DMatrix::<Complex64>::zeros(d, d))
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Identity element on `shape`.
    pub fn identity(shape: &BlockShape) -> Self {
        let blocks = shape
            .dims()
            .iter()
            .map(|&d| DMatrix::<Complex64>::identity(d, d))
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Diagonal element with the given real entries (length = total
    /// dimension, split across blocks in order).
    pub fn from_real_diagonal(shape: &BlockShape, entries: &[f64]) -> Result<Self> {
        if entries.len() != shape.total_dim() {
            return Err(Error::ShapeMismatch);
        }
        let mut blocks = Vec::with_capacity(shape.block_count());
        let mut offset = 0;
        for &d in shape.dims() {
            let mut b = DMatrix::<Complex64>::zeros(d, d);
            for i in 0..d {
                b[(i, i)] = Complex64::new(entries[offset + i], 0.0);
            }
            offset += d;
            blocks.push(b);
        }
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Shape of the element.
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    /// All blocks, in shape order.
    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    /// A single block.
    pub fn block(&self, index: usize) -> &DMatrix<Complex64> {
        &self.blocks[index]
    }

    /// Total trace. Real because the element is hermitian.
    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.trace().re).sum()
    }

    /// Frobenius norm over all blocks.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.norm();
                n * n
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Assembles the dense block-diagonal matrix.
    pub fn full_matrix(&self) -> DMatrix<Complex64> {
        let n = self.shape.total_dim();
        let mut full = DMatrix::<Complex64>::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.nrows();
            full.view_mut((offset, offset), (d, d)).copy_from(b);
            offset += d;
        }
        full
    }

    /// `self * s` for a real scalar.
    pub fn scale(&self, s: f64) -> Self {
        let c = Complex64::new(s, 0.0);
        let blocks = self.blocks.iter().map(|b| b * c).collect();
        Self {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        let c = Complex64::new(s, 0.0);
        self.zip(other, |a, b| a + b * c)
    }

    /// `self + s * identity`.
    pub fn add_scaled_identity(&self, s: f64) -> Self {
        let c = Complex64::new(s, 0.0);
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut out = b.clone();
                for i in 0..out.nrows() {
                    out[(i, i)] += c;
                }
                out
            })
            .collect();
        Self {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// Trace pairing Re Tr(self * other), blockwise.
    pub fn pair(&self, other: &Self) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        let mut acc = 0.0;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            // Re tr(AB) = sum_ij Re(A_ij * B_ji); both hermitian, so this
            // equals the real Hilbert-Schmidt pairing.
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    acc += (a[(i, j)] * b[(j, i)]).re;
                }
            }
        }
        Ok(acc)
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shape_rejects_empty_and_zero() {
        assert!(BlockShape::new(vec![]).is_err());
        assert!(BlockShape::new(vec![2, 0]).is_err());
        assert_eq!(BlockShape::new(vec![2, 3]).unwrap().total_dim(), 5);
    }

    #[test]
    fn commutative_detection() {
        assert!(BlockShape::commutative(4).unwrap().is_commutative());
        assert!(!BlockShape::new(vec![1, 2]).unwrap().is_commutative());
    }

    #[test]
    fn rejects_non_hermitian_block() {
        let shape = BlockShape::full(2).unwrap();
        let b =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let err = BlockMat::from_blocks(shape, vec![b]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn symmetrization_is_exact() {
        let shape = BlockShape::full(2).unwrap();
        let eps = 1e-13;
        let b = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.5, 0.25 + eps), c(0.5, -0.25), c(2.0, 0.0)],
        );
        let m = BlockMat::from_blocks(shape, vec![b]).unwrap();
        let blk = m.block(0);
        assert_eq!(blk[(0, 1)], blk[(1, 0)].conj());
    }

    #[test]
    fn trace_and_pair_are_real_and_blockwise() {
        let shape = BlockShape::new(vec![1, 2]).unwrap();
        let a = BlockMat::from_real_diagonal(&shape, &[1.0, 2.0, 3.0]).unwrap();
        let b = BlockMat::from_real_diagonal(&shape, &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.trace(), 6.0);
        assert_eq!(a.pair(&b).unwrap(), 4.0 + 10.0 + 18.0);
    }

    #[test]
    fn full_matrix_places_blocks_on_the_diagonal() {
        let shape = BlockShape::new(vec![1, 2]).unwrap();
        let a = BlockMat::from_real_diagonal(&shape, &[1.0, 2.0, 3.0]).unwrap();
        let f = a.full_matrix();
        assert_eq!(f[(0, 0)].re, 1.0);
        assert_eq!(f[(1, 1)].re, 2.0);
        assert_eq!(f[(2, 2)].re, 3.0);
        assert_eq!(f[(0, 1)].norm(), 0.0);
    }
}
