//! Seeded random matrix sampling.
//!
//! Every random object in the crate is drawn from an explicitly seeded
//! ChaCha8 stream, so identical seeds give bitwise-identical results across
//! runs and platforms. Matrices are filled column-major; changing the fill
//! order would change the stream, so it is part of the contract.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tracial::CMatrix;

/// The crate's deterministic generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries
/// (re, im ~ N(0, 1/2), so E|z|² = 1), filled column-major.
pub fn complex_gaussian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let scale = 0.5f64.sqrt();
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with each
/// column rephased by the sign of the corresponding R diagonal entry (the
/// phase fix makes the distribution exactly Haar rather than QR-biased).
pub fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = complex_gaussian(dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > 0.0 {
            let phase = d / norm;
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// GUE-style random Hermitian matrix: (G + G*)/2 for complex Gaussian G,
/// with an exactly Hermitian representation.
pub fn random_hermitian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = complex_gaussian(dim, rng);
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            let v = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

/// Vector of i.i.d. uniform values in [lo, hi).
pub fn random_uniform_vec(len: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracial::{is_exactly_hermitian, max_modulus};

    #[test]
    fn same_seed_same_stream() {
        let a = complex_gaussian(5, &mut seeded_rng(42));
        let b = complex_gaussian(5, &mut seeded_rng(42));
        assert_eq!(a, b);
        let c = complex_gaussian(5, &mut seeded_rng(43));
        assert_ne!(a, c);
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let u = haar_unitary(16, &mut seeded_rng(7));
        let v = haar_unitary(16, &mut seeded_rng(7));
        assert_eq!(u, v);
        let defect = max_modulus(&(&u.adjoint() * &u - CMatrix::identity(16, 16)));
        assert!(defect < 1e-13, "unitarity defect {defect:.3e}");
    }

    #[test]
    fn random_hermitian_is_exactly_hermitian() {
        let m = random_hermitian_matrix(8, &mut seeded_rng(3));
        assert!(is_exactly_hermitian(&m));
    }

    #[test]
    fn gaussian_moments_are_plausible() {
        // Loose sanity check on the normalization E|z|² = 1.
        let g = complex_gaussian(64, &mut seeded_rng(11));
        let mean_sq: f64 = g.iter().map(|z| z.norm_sqr()).sum::<f64>() / (64.0 * 64.0);
        assert!((mean_sq - 1.0).abs() < 0.1, "E|z|² ≈ {mean_sq}");
    }
}
