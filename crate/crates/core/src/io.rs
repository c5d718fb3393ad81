//! Reading and writing block matrices as structured text documents.
//!
//! A document is JSON with two fields: `shape`, the list of block
//! dimensions, and `blocks`, one complex matrix per block stored as
//! rows of `[re, im]` pairs. Writing emits 17 significant digits, so
//! every finite f64 survives a round trip bit for bit; parse failures
//! name the offending field by its path.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::block::{BlockMat, BlockShape};
use crate::error::{Error, Result};

/// Serialized form of a block matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    /// Block dimensions, smallest unit of validation.
    pub shape: Vec<usize>,
    /// One matrix per block: rows of `[re, im]` entries.
    pub blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl MatrixDoc {
    /// Captures a block matrix.
    pub fn from_mat(mat: &BlockMat) -> Self {
        let blocks = mat
            .blocks()
            .iter()
            .map(|b| {
                (0..b.nrows())
                    .map(|i| {
                        (0..b.ncols())
                            .map(|j| {
                                let z = b[(i, j)];
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            shape: mat.shape().dims().to_vec(),
            blocks,
        }
    }

    /// Rebuilds the block matrix, validating dimensions and
    /// hermiticity.
    pub fn to_mat(&self) -> Result<BlockMat> {
        let shape = BlockShape::new(self.shape.clone())?;
        if self.blocks.len() != shape.block_count() {
            return Err(Error::BlockCountMismatch {
                expected: shape.block_count(),
                got: self.blocks.len(),
            });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (index, (rows, &dim)) in self.blocks.iter().zip(shape.dims()).enumerate() {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::BlockDimMismatch {
                    index,
                    rows: rows.len(),
                    cols: rows.iter().map(Vec::len).max().unwrap_or(0),
                    dim,
                });
            }
            blocks.push(DMatrix::from_fn(dim, dim, |i, j| {
                Complex64::new(rows[i][j][0], rows[i][j][1])
            }));
        }
        BlockMat::from_blocks(shape, blocks)
    }

    /// Renders the document as JSON with 17 significant digits per
    /// component, one matrix row per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"shape\": [");
        for (i, d) in self.shape.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{d}");
        }
        out.push_str("],\n  \"blocks\": [");
        for (bi, rows) in self.blocks.iter().enumerate() {
            if bi > 0 {
                out.push(',');
            }
            out.push_str("\n    [");
            for (ri, row) in rows.iter().enumerate() {
                if ri > 0 {
                    out.push(',');
                }
                out.push_str("\n      [");
                for (ci, entry) in row.iter().enumerate() {
                    if ci > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "[{:.16e}, {:.16e}]", entry[0], entry[1]);
                }
                out.push(']');
            }
            out.push_str("\n    ]");
        }
        out.push_str("\n  ]\n}\n");
        out
    }
}

/// Parses and validates a matrix document.
pub fn parse_matrix(text: &str) -> Result<BlockMat> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: MatrixDoc =
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Document {
            context: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    doc.to_mat()
}

/// Reads a matrix document from disk.
pub fn read_matrix(path: &Path) -> Result<BlockMat> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document {
        context: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix(&text)
}

/// Writes a matrix document with full-precision numbers.
pub fn write_matrix(path: &Path, mat: &BlockMat) -> Result<()> {
    std::fs::write(path, MatrixDoc::from_mat(mat).render()).map_err(|e| Error::Document {
        context: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sample::{rng_for, sample_observable, sample_state};

    #[test]
    fn round_trip_is_bit_exact() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = rng_for("io round trip", 3);
        for _ in 0..3 {
            let h = sample_observable(&shape, 1.0, &mut rng);
            let text = MatrixDoc::from_mat(h.mat()).render();
            let back = parse_matrix(&text).unwrap();
            assert!(back.sub(h.mat()).unwrap().frobenius_norm() == 0.0);
        }
        let rho = sample_state(&shape, 1.0, &mut rng);
        let text = MatrixDoc::from_mat(rho.density()).render();
        let back = parse_matrix(&text).unwrap();
        assert!(back.sub(rho.density()).unwrap().frobenius_norm() == 0.0);
    }

    #[test]
    fn file_round_trip() {
        let shape = BlockShape::full(2).unwrap();
        let mut rng = rng_for("io file", 5);
        let h = sample_observable(&shape, 1.0, &mut rng);
        let dir = std::env::temp_dir().join("statgeom-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h.mat");
        write_matrix(&path, h.mat()).unwrap();
        let back = read_matrix(&path).unwrap();
        assert!(back.sub(h.mat()).unwrap().frobenius_norm() == 0.0);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn parse_errors_name_the_field() {
        let bad_type = r#"{"shape": [1], "blocks": [[[["x", 0.0]]]]}"#;
        match parse_matrix(bad_type) {
            Err(Error::Document { context, .. }) => {
                assert!(context.contains("blocks[0][0][0]"), "context was {context}")
            }
            other => panic!("expected document error, got {other:?}"),
        }

        let missing = r#"{"shape": [1]}"#;
        assert!(matches!(parse_matrix(missing), Err(Error::Document { .. })));
    }

    #[test]
    fn validation_rejects_bad_blocks() {
        let wrong_dim = r#"{"shape": [2], "blocks": [[[[1.0, 0.0]]]]}"#;
        assert!(matches!(
            parse_matrix(wrong_dim),
            Err(Error::BlockDimMismatch { .. })
        ));

        let wrong_count = r#"{"shape": [1, 1], "blocks": [[[[1.0, 0.0]]]]}"#;
        assert!(matches!(
            parse_matrix(wrong_count),
            Err(Error::BlockCountMismatch { .. })
        ));

        let not_hermitian =
            r#"{"shape": [2], "blocks": [[[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]]}"#;
        assert!(matches!(
            parse_matrix(not_hermitian),
            Err(Error::NotHermitian { .. })
        ));

        let zero_dim = r#"{"shape": [], "blocks": []}"#;
        assert!(matches!(parse_matrix(zero_dim), Err(Error::InvalidShape)));
    }
}
