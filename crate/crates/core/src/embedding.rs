//! Block masa structure: conditional expectations onto the diagonal and
//! onto block-averaged diagonals, and the matrix-unit embedding of a small
//! algebra into a larger one along a block decomposition.
//!
//! With N = k·m, the embedding π sends a k×k matrix A to the N×N matrix
//! acting as A on each of the m "interleaved" copies: π(A) carries entry
//! A[i,j] at positions (i·m + r, j·m + r) for r < m. Diagonal k×k matrices
//! land exactly on block-constant diagonal N×N matrices, matrix units map
//! to partial isometries between the corresponding blocks, and the block
//! conditional expectation intertwines: E_blocks(π(A)) = π(E_diag(A)).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tracial::{CMatrix, HermitianOperator};

/// A partition of {0,…,N−1} into k contiguous blocks of equal size m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    dim: usize,
    blocks: usize,
}

impl BlockStructure {
    /// Partition an N-dimensional algebra into `blocks` equal blocks;
    /// `blocks` must divide N.
    pub fn new(dim: usize, blocks: usize) -> Result<Self> {
        if dim == 0 || blocks == 0 {
            return Err(Error::EmptyInput("block structure needs positive sizes"));
        }
        if dim % blocks != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: blocks,
            });
        }
        Ok(BlockStructure { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Size m of each block.
    pub fn block_size(&self) -> usize {
        self.dim / self.blocks
    }

    /// Index range of block i.
    pub fn range(&self, i: usize) -> Result<std::ops::Range<usize>> {
        if i >= self.blocks {
            return Err(Error::DimensionMismatch {
                expected: self.blocks,
                got: i,
            });
        }
        let m = self.block_size();
        Ok(i * m..(i + 1) * m)
    }

    /// Diagonal projection p_i onto block i (τ(p_i) = 1/k).
    pub fn projection(&self, i: usize) -> Result<CMatrix> {
        let range = self.range(i)?;
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for idx in range {
            p[(idx, idx)] = Complex64::new(1.0, 0.0);
        }
        Ok(p)
    }
}

/// Conditional expectation onto the diagonal masa: zero out all
/// off-diagonal entries (a trace-preserving, unital, positive projection;
/// on Hermitian inputs it is the composition with a doubly stochastic map
/// of the spectrum).
pub fn expect_diagonal(x: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::trusted(x.ctx().clone(), pinch_matrix(x.matrix()))
}

/// Diagonal pinch of an arbitrary (not necessarily Hermitian) matrix.
pub fn pinch_matrix(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, m.ncols());
    for i in 0..n.min(m.ncols()) {
        out[(i, i)] = m[(i, i)];
    }
    out
}

/// Conditional expectation onto the block-constant diagonal algebra: the
/// diagonal pinch followed by averaging the diagonal over each block.
pub fn expect_blocks(x: &HermitianOperator, bs: &BlockStructure) -> Result<HermitianOperator> {
    if x.dim() != bs.dim() {
        return Err(Error::DimensionMismatch {
            expected: bs.dim(),
            got: x.dim(),
        });
    }
    Ok(HermitianOperator::trusted(
        x.ctx().clone(),
        block_average_matrix(x.matrix(), bs),
    ))
}

/// Block-averaged diagonal of an arbitrary matrix (general form of
/// [`expect_blocks`] used on intermediate non-Hermitian products).
pub fn block_average_matrix(m: &CMatrix, bs: &BlockStructure) -> CMatrix {
    let n = bs.dim();
    let mm = bs.block_size();
    let mut out = CMatrix::zeros(n, n);
    for b in 0..bs.blocks() {
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in b * mm..(b + 1) * mm {
            acc += m[(idx, idx)];
        }
        acc /= mm as f64;
        for idx in b * mm..(b + 1) * mm {
            out[(idx, idx)] = acc;
        }
    }
    out
}

/// Matrix-unit embedding π of a k×k matrix into the N×N algebra along the
/// block structure: π(A)[i·m + r, j·m + r] = A[i,j].
///
/// π is a unital trace-preserving *-homomorphism; in particular
/// π(diag(d)) is the diagonal matrix constant equal to dᵢ on block i, and
/// π(unitary) is unitary.
pub fn pi_embed(a: &CMatrix, bs: &BlockStructure) -> Result<CMatrix> {
    let k = bs.blocks();
    if a.nrows() != k || a.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: if a.nrows() != k { a.nrows() } else { a.ncols() },
        });
    }
    let m = bs.block_size();
    let n = bs.dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            let v = a[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                for r in 0..m {
                    out[(i * m + r, j * m + r)] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Unitary intertwining two complete flags on the same algebra: maps the
/// k-th basis vector of `from` to the k-th basis vector of `to`, hence
/// carries the level-n blocks of `from` onto those of `to` for every n
/// dividing the grid. Built as basis(to)·basis(from)*.
pub fn flag_matching_unitary(
    to: &crate::dyadic::CompleteFlag,
    from: &crate::dyadic::CompleteFlag,
) -> Result<CMatrix> {
    to.ctx().require_same_dim(from.ctx())?;
    let w = to.basis() * from.basis().adjoint();
    let n = to.dim();
    let defect = crate::tracial::max_modulus(&(&w.adjoint() * &w - CMatrix::identity(n, n)));
    if defect > 10.0 * to.ctx().tolerances().eig {
        return Err(Error::NumericalBreakdown(format!(
            "flag-matching unitary defect {defect:.3e}"
        )));
    }
    Ok(w)
}
