//! JSON interchange formats.
//!
//! Operators travel as `{"dim": N, "entries": [[re, im], …]}` with entries
//! in row-major order; step functions as `{"n": level, "values": […]}`;
//! certificates as a flat object with the unitary included on request.
//! Numbers are written in full precision (shortest round-trip f64), so a
//! file read back reproduces the object bitwise.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::ReconstructionCertificate;
use crate::tracial::{CMatrix, HermitianOperator, TracialContext};

/// Raw matrix payload: row-major [re, im] pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson { dim, entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::EmptyInput("matrix dim must be at least 1"));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::InvalidInput(format!(
                "matrix payload claims dim {} but carries {} entries (need {})",
                self.dim,
                self.entries.len(),
                self.dim * self.dim
            )));
        }
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let [re, im] = self.entries[i * self.dim + j];
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }

    /// Validate the payload as a Hermitian operator in a fresh context.
    pub fn to_hermitian(&self, tol: crate::tol::Tolerances) -> Result<HermitianOperator> {
        let ctx = TracialContext::with_tolerances(self.dim, tol)?;
        HermitianOperator::new(ctx, self.to_matrix()?)
    }
}

/// Step function payload.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StepFunctionJson {
    /// Dyadic level (the value count is 2ⁿ) or, for raw scales, the cell
    /// count's log is not required to be exact — `values` is authoritative.
    pub n: u32,
    pub values: Vec<f64>,
}

/// Serialized reconstruction certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub epsilon: f64,
    pub n: u32,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub err_a: f64,
    pub err_b: f64,
    pub horn_residual: f64,
    pub achieved: f64,
    pub bound: f64,
    pub unitarity_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixJson>,
}

impl CertificateJson {
    pub fn from_certificate(cert: &ReconstructionCertificate, emit_u: bool) -> Self {
        CertificateJson {
            epsilon: cert.epsilon,
            n: cert.level,
            alpha: cert.alpha.clone(),
            beta: cert.beta.clone(),
            err_a: cert.err_a,
            err_b: cert.err_b,
            horn_residual: cert.horn_residual,
            achieved: cert.achieved,
            bound: cert.bound,
            unitarity_defect: cert.unitarity_defect,
            u: emit_u.then(|| MatrixJson::from_matrix(&cert.unitary)),
        }
    }
}

/// Read and validate a Hermitian operator from a JSON file.
pub fn read_operator(path: &Path, tol: crate::tol::Tolerances) -> Result<HermitianOperator> {
    let text = std::fs::read_to_string(path)?;
    let payload: MatrixJson = serde_json::from_str(&text)?;
    payload.to_hermitian(tol)
}

/// Write any serializable payload as pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::Tolerances;

    #[test]
    fn matrix_round_trip_is_bitwise() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0 / 3.0, 0.0);
        m[(0, 1)] = Complex64::new(0.1, -0.2);
        m[(1, 0)] = Complex64::new(0.1, 0.2);
        m[(1, 1)] = Complex64::new(-7.0, 0.0);
        let j = MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn hermitian_validation_happens_on_read() {
        let j = MatrixJson {
            dim: 2,
            entries: vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [0.0, 0.0]],
        };
        assert!(matches!(
            j.to_hermitian(Tolerances::default()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn malformed_payload_is_invalid_input() {
        let j = MatrixJson {
            dim: 3,
            entries: vec![[1.0, 0.0]; 4],
        };
        assert!(matches!(j.to_matrix(), Err(Error::InvalidInput(_))));
        let j = MatrixJson { dim: 0, entries: vec![] };
        assert!(matches!(j.to_matrix(), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("mj-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("op.json");
        let ctx = TracialContext::new(2).unwrap();
        let a = HermitianOperator::from_diagonal(ctx, &[1.5, -0.5]).unwrap();
        write_json(&path, &MatrixJson::from_matrix(a.matrix())).unwrap();
        let back = read_operator(&path, Tolerances::default()).unwrap();
        assert_eq!(back.matrix(), a.matrix());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn certificate_serialization_shape() {
        // Field names are part of the interchange contract.
        let c = CertificateJson {
            epsilon: 0.1,
            n: 2,
            alpha: vec![1.0],
            beta: vec![1.0],
            err_a: 0.0,
            err_b: 0.0,
            horn_residual: 0.0,
            achieved: 0.0,
            bound: 0.2,
            unitarity_defect: 0.0,
            u: None,
        };
        let text = serde_json::to_string(&c).unwrap();
        for key in [
            "epsilon", "\"n\"", "alpha", "beta", "err_a", "err_b",
            "horn_residual", "achieved", "bound", "unitarity_defect",
        ] {
            assert!(text.contains(key), "missing key {key} in {text}");
        }
        assert!(!text.contains("\"u\""));
    }
}
