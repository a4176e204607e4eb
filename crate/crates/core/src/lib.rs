//! Constructive Schur–Horn machinery at finite matrix scale.
//!
//! This crate treats `N×N` Hermitian matrices as elements of a finite
//! tracial algebra `(M_N(ℂ), τ)` with the normalized trace
//! `τ = (1/N)·Tr`, and implements the constructive content of the
//! Schur–Horn theorem in that setting:
//!
//! * **Spectral scales** ([`SpectralScale`]): the decreasing eigenvalue
//!   step function `λ_a : [0,1) → ℝ` of an operator, with trace-norm and
//!   sup-norm metrics on scales.
//! * **Majorization** ([`check_operator_majorization`]): certificate-style
//!   verdicts `a ≺ b` (and the submajorization variant) with per-cut
//!   margins, plus a convex-function probe of the equivalent trace
//!   inequality family `τ f(a) ≤ τ f(b)`.
//! * **Dyadic averaging** ([`dyadic_average`], [`discretize_along_flag`]):
//!   the conditional expectations `E_n` onto dyadic step functions, their
//!   contraction/monotonicity properties, and discretization of an
//!   operator along a complete flag.
//! * **Horn's converse** ([`horn_construct`]): given `α ≺ β`, an explicit
//!   real-orthogonal `U` with `diag(U·diag(β)·U*) = α`, built from at most
//!   `n−1` Givens rotations, each step certified.
//! * **Masa embeddings** ([`pi_embed`], [`flag_matching_unitary`]): the
//!   block embedding `π : M_k → M_N` compatible with the conditional
//!   expectations, and flag-matching unitaries.
//! * **Reconstruction** ([`reconstruct`]): the end-to-end pipeline that,
//!   given diagonal `a`, Hermitian `b` with `λ_a ≺ λ_b`, and `ε > 0`,
//!   produces a unitary `u` and a [`ReconstructionCertificate`] showing
//!   `‖E_D(u b u*) − a‖₁ < 2ε` for the diagonal expectation `E_D`.
//!
//! All randomized entry points take explicit seeds and are deterministic
//! across runs on the same platform.

pub mod dyadic;
pub mod embedding;
pub mod error;
pub mod horn;
pub mod io;
pub mod majorization;
pub mod pipeline;
pub mod random;
pub mod tol;
pub mod tracial;

pub use dyadic::{
    build_flag, build_flag_diagonal, discretization_error, discretize_along_flag, dyadic_average,
    CompleteFlag, StepFunction,
};
pub use embedding::{
    block_average_matrix, expect_blocks, expect_diagonal, flag_matching_unitary, pi_embed,
    pinch_matrix, BlockStructure,
};
pub use error::{Error, Result};
pub use horn::{horn_construct, replay_steps, schur_check, HornSolution, RotationStep};
pub use majorization::{
    check_operator_majorization, check_scale_majorization, check_vector_majorization,
    convex_criterion_probe, default_function_bank, omega_membership, BankFunction,
    ConvexProbeEntry, ConvexProbeReport, MajorizationVerdict, Mode, Status,
};
pub use pipeline::{
    arveson_kadison_probe, generate_instance, reconstruct, reconstruct_at_level, resolution_floor,
    InstanceMode, ProbeReport, ReconstructionCertificate,
};
pub use random::{haar_unitary, random_hermitian_matrix, random_uniform_vec, seeded_rng};
pub use tol::Tolerances;
pub use tracial::{
    eigen_decompose, operator_norm, scale_distance, spectral_scale, trace_norm, CMatrix,
    EigenSystem, HermitianOperator, SpectralScale, TracialContext,
};
