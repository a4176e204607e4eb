//! Numerical tolerance policy.
//!
//! Every comparison in the crate goes through one of these derived
//! tolerances; nothing compares floats against ad-hoc constants. The
//! defaults are scaled to the data so behaviour is stable across input
//! magnitudes, and the whole bundle can be overridden at once (the CLI
//! exposes this through the `MJ_TOL_OVERRIDE` environment variable).

use crate::error::{Error, Result};

/// Base constants from which all effective tolerances are derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Eigensolver acceptance: residual and orthogonality defect limit,
    /// relative to the largest entry modulus. Default `1e-10`.
    pub eig: f64,
    /// Hermitian-ingestion scale: the symmetrization defect limit is
    /// `herm * max(1, ‖A‖_max)` (inputs an order `1e3` beyond it are
    /// rejected). Default `1e-12`.
    pub herm: f64,
    /// Absolute floor of the majorization margin tolerance. Default `1e-10`.
    pub maj_floor: f64,
    /// Relative part of the majorization tolerance:
    /// `maj_tol = max(maj_floor, maj_rel · n · ‖β‖_∞)`. Default `1e-12`.
    pub maj_rel: f64,
    /// Horn residual scale: `horn_tol = horn · max(1, ‖β‖_∞) · n`.
    /// Default `1e-10`.
    pub horn: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig: 1e-10,
            herm: 1e-12,
            maj_floor: 1e-10,
            maj_rel: 1e-12,
            horn: 1e-10,
        }
    }
}

impl Tolerances {
    /// Hermitian defect limit for a matrix with largest entry modulus `amax`.
    pub fn herm_tol(&self, amax: f64) -> f64 {
        self.herm * amax.max(1.0)
    }

    /// Margin tolerance for length-`n` spectra with sup-norm `sup_beta`.
    pub fn maj_tol(&self, n: usize, sup_beta: f64) -> f64 {
        self.maj_floor.max(self.maj_rel * n as f64 * sup_beta)
    }

    /// Diagonal-residual tolerance for a Horn construction of size `n`.
    pub fn horn_tol(&self, n: usize, sup_beta: f64) -> f64 {
        self.horn * sup_beta.max(1.0) * n as f64
    }

    /// Apply a comma-separated override string of the form
    /// `maj=1e-8,eig=1e-9,horn=1e-8` (any subset of the three keys).
    ///
    /// `maj` replaces the absolute floor [`Tolerances::maj_floor`], `eig`
    /// replaces [`Tolerances::eig`], `horn` replaces [`Tolerances::horn`].
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("tolerance override `{part}` is not key=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("tolerance override `{part}` has a non-numeric value")))?;
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "tolerance override `{part}` must be a positive finite number"
                )));
            }
            match key.trim() {
                "maj" => self.maj_floor = value,
                "eig" => self.eig = value,
                "horn" => self.horn = value,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown tolerance key `{other}` (expected maj, eig, or horn)"
                    )))
                }
            }
        }
        Ok(self)
    }
}
