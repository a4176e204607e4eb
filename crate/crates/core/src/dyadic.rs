//! Dyadic averaging of step functions and complete flags of projections.
//!
//! A step function on [0,1) with M equal cells is averaged at level n by
//! replacing it with its mean on each of the 2ⁿ dyadic intervals
//! [i/2ⁿ, (i+1)/2ⁿ) — the conditional expectation onto the dyadic grid. It
//! is a linear idempotent contraction in both the L¹ and sup norms and
//! preserves monotonicity, which is what makes spectral scales (decreasing
//! by construction) behave well under it.
//!
//! A complete flag materializes a Hermitian operator's spectral projections:
//! an orthonormal basis whose first k vectors span the range of the spectral
//! projection with trace k/N. Flags are the geometric carrier used to move
//! discretized spectral data back into the algebra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tracial::{
    eigen_decompose, is_exactly_hermitian, trace_norm, CMatrix, HermitianOperator, SpectralScale,
    TracialContext,
};

/// A real step function on [0,1) with equally sized cells.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("step function needs at least one cell"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("step function values"));
        }
        Ok(StepFunction { values })
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, t: f64) -> f64 {
        assert!((0.0..1.0).contains(&t), "step function evaluated outside [0,1)");
        let idx = ((t * self.cells() as f64).floor() as usize).min(self.cells() - 1);
        self.values[idx]
    }

    /// L¹ norm ∫₀¹ |f|.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.cells() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Represent the same function on a finer grid whose cell count is a
    /// multiple of the current one.
    pub fn refine_to(&self, cells: usize) -> Result<StepFunction> {
        if cells == 0 || cells % self.cells() != 0 {
            return Err(Error::GridMismatch {
                cells,
                level: self.cells().trailing_zeros(),
            });
        }
        let m = cells / self.cells();
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat(v).take(m))
            .collect();
        Ok(StepFunction { values })
    }

    /// ∫₀¹ |f − g| for two step functions on compatible grids (one cell
    /// count must divide the other).
    pub fn l1_distance(&self, other: &StepFunction) -> Result<f64> {
        let (f, g) = if self.cells() == other.cells() {
            (self.clone(), other.clone())
        } else if self.cells() % other.cells() == 0 {
            (self.clone(), other.refine_to(self.cells())?)
        } else if other.cells() % self.cells() == 0 {
            (self.refine_to(other.cells())?, other.clone())
        } else {
            return Err(Error::GridMismatch {
                cells: other.cells(),
                level: self.cells().trailing_zeros(),
            });
        };
        let n = f.cells() as f64;
        Ok(f.values
            .iter()
            .zip(g.values.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / n)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

impl SpectralScale {
    /// View the scale as a step function with one cell per dimension.
    pub fn to_step(&self) -> StepFunction {
        StepFunction {
            values: self.values().to_vec(),
        }
    }
}

/// Conditional expectation of a step function onto the level-n dyadic grid:
/// the mean of `f` on each interval [i/2ⁿ, (i+1)/2ⁿ).
///
/// Requires 2ⁿ to divide the cell count. The result is a contraction in
/// both norms, idempotent, and monotone-preserving; composing two levels
/// gives the coarser one.
pub fn dyadic_average(f: &StepFunction, level: u32) -> Result<StepFunction> {
    let cells = 1usize
        .checked_shl(level)
        .ok_or(Error::GridMismatch { cells: f.cells(), level })?;
    if f.cells() % cells != 0 {
        return Err(Error::GridMismatch {
            cells: f.cells(),
            level,
        });
    }
    let m = f.cells() / cells;
    let values: Vec<f64> = (0..cells)
        .map(|i| f.values[i * m..(i + 1) * m].iter().sum::<f64>() / m as f64)
        .collect();
    let out = StepFunction { values };
    debug_assert!(
        out.l1_norm() <= f.l1_norm() * (1.0 + 1e-12) + f64::MIN_POSITIVE,
        "dyadic average must contract the L¹ norm"
    );
    debug_assert!(
        out.sup_norm() <= f.sup_norm() * (1.0 + 1e-12),
        "dyadic average must contract the sup norm"
    );
    debug_assert!(
        !f.is_nonincreasing() || out.is_nonincreasing(),
        "dyadic average must preserve monotonicity"
    );
    Ok(out)
}

/// Discretization error ‖λ − E_n λ‖_L¹ of a spectral scale at level n.
pub fn discretization_error(scale: &SpectralScale, level: u32) -> Result<f64> {
    let f = scale.to_step();
    let averaged = dyadic_average(&f, level)?;
    f.l1_distance(&averaged)
}

/// A complete flag: orthonormal basis columns such that the first k span
/// the "top" spectral subspace of trace k/N, together with the spectral
/// scale it was built from.
#[derive(Clone, Debug)]
pub struct CompleteFlag {
    ctx: TracialContext,
    basis: CMatrix,
    scale: SpectralScale,
}

impl CompleteFlag {
    pub fn ctx(&self) -> &TracialContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn scale(&self) -> &SpectralScale {
        &self.scale
    }

    /// Projection e(k/N) onto the span of the first k basis columns.
    /// τ(e(k/N)) = k/N.
    pub fn projection(&self, k: usize) -> Result<CMatrix> {
        let n = self.dim();
        if k > n {
            return Err(Error::DimensionMismatch { expected: n, got: k });
        }
        let mut p = CMatrix::zeros(n, n);
        for c in 0..k {
            let col = self.basis.column(c);
            for i in 0..n {
                let vi = col[i];
                for j in 0..n {
                    p[(i, j)] += vi * col[j].conj();
                }
            }
        }
        Ok(p)
    }

    /// Block projection e((i+1)/2ⁿ) − e(i/2ⁿ) for the i-th dyadic cell at
    /// level n (requires 2ⁿ | N).
    pub fn block_projection(&self, level: u32, i: usize) -> Result<CMatrix> {
        let n = self.dim();
        let cells = 1usize << level;
        if n % cells != 0 {
            return Err(Error::GridMismatch { cells: n, level });
        }
        if i >= cells {
            return Err(Error::DimensionMismatch { expected: cells, got: i });
        }
        let m = n / cells;
        Ok(self.projection((i + 1) * m)? - self.projection(i * m)?)
    }

    /// Rebuild the operator the flag was derived from:
    /// Σᵢ λᵢ·(column i rank-one projection) = B·diag(λ)·B*.
    pub fn reconstruct(&self) -> HermitianOperator {
        let a = basis_conjugate_diagonal(&self.basis, self.scale.values());
        HermitianOperator::trusted(self.ctx.clone(), a)
    }
}

/// Build the complete flag of a Hermitian operator from its deterministic
/// eigensystem.
pub fn build_flag(a: &HermitianOperator) -> Result<CompleteFlag> {
    let sys = eigen_decompose(a)?;
    Ok(CompleteFlag {
        ctx: a.ctx().clone(),
        basis: sys.vectors,
        scale: SpectralScale::from_sorted(sys.values),
    })
}

/// Build the flag of a diagonal-masa element by sorting its diagonal; the
/// basis is then a permutation matrix, exactly.
pub fn build_flag_diagonal(a: &HermitianOperator) -> Result<CompleteFlag> {
    a.require_diagonal()?;
    let n = a.dim();
    let d = a.diagonal();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap().then(i.cmp(&j)));
    let mut basis = CMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        basis[(i, col)] = Complex64::new(1.0, 0.0);
    }
    let values: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    Ok(CompleteFlag {
        ctx: a.ctx().clone(),
        basis,
        scale: SpectralScale::from_sorted(values),
    })
}

/// Discretize `a` along its flag at dyadic level n: replace the spectral
/// scale by its level-n average and rebuild along the same flag.
///
/// Returns the discretized operator a_n = Σᵢ αᵢ·qᵢ (qᵢ the flag's level-n
/// block projections, αᵢ the block means) together with the averaged scale.
/// The trace-norm identity ‖a − a_n‖₁ = ‖λ − E_n λ‖_L¹ is verified
/// internally; a violation beyond eigensolver slack is a breakdown.
pub fn discretize_along_flag(
    a: &HermitianOperator,
    flag: &CompleteFlag,
    level: u32,
) -> Result<(HermitianOperator, StepFunction)> {
    a.ctx().require_same_dim(flag.ctx())?;
    let n = a.dim();
    let cells = 1usize << level;
    if n % cells != 0 {
        return Err(Error::GridMismatch { cells: n, level });
    }
    let averaged = dyadic_average(&flag.scale().to_step(), level)?;
    let replicated = averaged.refine_to(n)?;
    let mat = basis_conjugate_diagonal(flag.basis(), replicated.values());
    let a_n = HermitianOperator::trusted(a.ctx().clone(), mat);

    let l1_err = flag.scale().to_step().l1_distance(&averaged)?;
    let diff = a.sub(&a_n)?;
    let tn = trace_norm(&diff)?;
    let slack = 10.0 * a.ctx().tolerances().eig * a.max_entry().max(1.0);
    if (tn - l1_err).abs() > slack {
        return Err(Error::NumericalBreakdown(format!(
            "trace-norm identity violated: ‖a−a_n‖₁ = {tn:.6e} vs scale error {l1_err:.6e}"
        )));
    }
    Ok((a_n, averaged))
}

/// B · diag(values) · B* with an exactly Hermitian result.
pub(crate) fn basis_conjugate_diagonal(basis: &CMatrix, values: &[f64]) -> CMatrix {
    let n = basis.nrows();
    debug_assert_eq!(values.len(), n);
    let mut scaled = basis.clone();
    for c in 0..n {
        let lam = Complex64::new(values[c], 0.0);
        for i in 0..n {
            scaled[(i, c)] *= lam;
        }
    }
    let mut out = &scaled * basis.adjoint();
    // Real spectrum ⇒ Hermitian result; enforce the representation exactly.
    for i in 0..n {
        out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    debug_assert!(is_exactly_hermitian(&out));
    out
}
