//! Seeded builders for benchmark inputs. Kept in a library so every bench
//! measures the kernel itself, never the instance construction.

use mj_core::{
    generate_instance, haar_unitary, random_hermitian_matrix, random_uniform_vec, seeded_rng,
    HermitianOperator, InstanceMode, TracialContext,
};

/// Dense seeded Hermitian operator with entries of unit scale.
pub fn bench_operator(n: usize, seed: u64) -> HermitianOperator {
    let ctx = TracialContext::new(n).expect("valid dimension");
    let mut rng = seeded_rng(seed);
    HermitianOperator::new(ctx, random_hermitian_matrix(n, &mut rng))
        .expect("generator output is Hermitian")
}

/// Majorized pair (a, b) with a diagonal, from the pinch family.
pub fn bench_pair(n: usize, seed: u64) -> (HermitianOperator, HermitianOperator) {
    let ctx = TracialContext::new(n).expect("valid dimension");
    generate_instance(&ctx, seed, InstanceMode::Pinch).expect("pinch instance")
}

/// Compatible vector pair (α, β): β uniform in [-2, 2], α the diagonal of a
/// Haar-unitary conjugate of diag(β), so α ≺ β by construction.
pub fn bench_compatible_vectors(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = seeded_rng(seed);
    let beta = random_uniform_vec(n, -2.0, 2.0, &mut rng);
    let u = haar_unitary(n, &mut rng);
    let alpha = (0..n)
        .map(|i| (0..n).map(|k| beta[k] * u[(i, k)].norm_sqr()).sum())
        .collect();
    (alpha, beta)
}
