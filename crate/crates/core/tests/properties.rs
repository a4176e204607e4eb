//! Property-based invariants over randomized inputs. Each property states a
//! mathematical fact the implementation must honor for *every* input in the
//! strategy, with tolerances reserved for genuinely floating-point effects.

use mj_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn ctx(n: usize) -> TracialContext {
    TracialContext::new(n).unwrap()
}

fn random_herm(seed: u64, n: usize) -> HermitianOperator {
    let mut rng = seeded_rng(seed);
    HermitianOperator::new(ctx(n), random_hermitian_matrix(n, &mut rng)).unwrap()
}

/// Strategy: a plain vector of moderate finite reals.
fn real_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 1..=max_len)
}

/// Strategy: a step function on 2^k cells, k ≤ 6.
fn dyadic_step() -> impl Strategy<Value = StepFunction> {
    (0u32..=6).prop_flat_map(|k| {
        prop::collection::vec(-10.0..10.0f64, 1usize << k)
            .prop_map(|v| StepFunction::new(v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Reflexivity: every vector majorizes itself with zero worst margin.
    #[test]
    fn majorization_is_reflexive(v in real_vec(32)) {
        let tol = Tolerances::default();
        let verdict = check_vector_majorization(&v, &v, Mode::Majorize, &tol).unwrap();
        prop_assert!(verdict.holds);
        prop_assert!(verdict.trace_gap.abs() == 0.0);
        let weak = check_vector_majorization(&v, &v, Mode::Submajorize, &tol).unwrap();
        prop_assert!(weak.holds);
    }

    /// The reported margins are exactly the sorted partial-sum differences.
    #[test]
    fn margins_match_brute_force_partial_sums(
        (a, b) in (1usize..=24).prop_flat_map(|len| {
            (
                prop::collection::vec(-10.0..10.0f64, len),
                prop::collection::vec(-10.0..10.0f64, len),
            )
        }),
    ) {
        let tol = Tolerances::default();
        let verdict = check_vector_majorization(&a, &b, Mode::Majorize, &tol).unwrap();

        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sb.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut run_a = 0.0;
        let mut run_b = 0.0;
        for k in 0..sa.len() {
            run_a += sa[k];
            run_b += sb[k];
            prop_assert!((verdict.margins[k] - (run_b - run_a)).abs() <= 1e-12);
        }
    }

    /// Majorization implies submajorization.
    #[test]
    fn majorize_implies_submajorize(v in real_vec(24), seed in any::<u64>()) {
        let tol = Tolerances::default();
        // Build a majorized partner by averaging an adjacent pair.
        let mut a = v.clone();
        if a.len() >= 2 {
            let i = (seed as usize) % (a.len() - 1);
            let m = 0.5 * (a[i] + a[i + 1]);
            a[i] = m;
            a[i + 1] = m;
        }
        let strict = check_vector_majorization(&a, &v, Mode::Majorize, &tol).unwrap();
        prop_assert!(strict.holds);
        let weak = check_vector_majorization(&a, &v, Mode::Submajorize, &tol).unwrap();
        prop_assert!(weak.holds);
    }

    /// Dyadic averaging contracts both norms, is idempotent, and composes
    /// down to the coarser level.
    #[test]
    fn dyadic_average_contracts_and_composes(f in dyadic_step(), lvl in 0u32..=6) {
        let k = f.cells().trailing_zeros();
        let level = lvl.min(k);
        let avg = dyadic_average(&f, level).unwrap();
        prop_assert!(avg.l1_norm() <= f.l1_norm() + 1e-12);
        prop_assert!(avg.sup_norm() <= f.sup_norm() + 1e-12);

        // Idempotence on the coarse grid is exact.
        let again = dyadic_average(&avg, level).unwrap();
        prop_assert_eq!(again.values(), avg.values());

        // Mean (trace) preservation.
        let mean = |s: &StepFunction| s.values().iter().sum::<f64>() / s.cells() as f64;
        prop_assert!((mean(&avg) - mean(&f)).abs() <= 1e-12);

        // Composing through a finer level equals averaging directly.
        if level > 0 {
            let fine = dyadic_average(&f, level + (k - level).min(1))
                .unwrap()
                .refine_to(f.cells())
                .unwrap();
            let through = dyadic_average(&fine, level).unwrap();
            for (x, y) in through.values().iter().zip(avg.values()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    /// Averaging preserves monotonicity of nonincreasing step functions.
    #[test]
    fn dyadic_average_preserves_monotonicity(f in dyadic_step(), lvl in 0u32..=6) {
        let mut v = f.values().to_vec();
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let sorted = StepFunction::new(v).unwrap();
        let level = lvl.min(sorted.cells().trailing_zeros());
        prop_assert!(dyadic_average(&sorted, level).unwrap().is_nonincreasing());
    }

    /// Refinement preserves the L¹ norm exactly and is inverted by averaging.
    #[test]
    fn refinement_round_trips(f in dyadic_step()) {
        let fine = f.refine_to(f.cells() * 4).unwrap();
        prop_assert!((fine.l1_norm() - f.l1_norm()).abs() <= 1e-13);
        let back = dyadic_average(&fine, f.cells().trailing_zeros()).unwrap();
        for (x, y) in back.values().iter().zip(f.values()) {
            prop_assert!((x - y).abs() <= 1e-13);
        }
    }

    /// Scale lookup agrees with direct cell indexing.
    #[test]
    fn scale_value_at_matches_indexing(v in real_vec(32), t in 0.0..1.0f64) {
        let mut sorted = v.clone();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let step = StepFunction::new(sorted.clone()).unwrap();
        let idx = ((t * sorted.len() as f64) as usize).min(sorted.len() - 1);
        prop_assert_eq!(step.value_at(t), sorted[idx]);
    }

    /// JSON matrix payloads round-trip bitwise.
    #[test]
    fn matrix_json_round_trips_bitwise(
        entries in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64), 1..=16),
    ) {
        let n = (entries.len() as f64).sqrt() as usize;
        prop_assume!(n >= 1);
        let m = CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = entries[(i * n + j) % entries.len()];
            Complex64::new(re, im)
        });
        let j = io::MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: io::MatrixJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_matrix().unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every generator mode produces a pair in the majorization body.
    #[test]
    fn generated_instances_are_members(seed in any::<u64>(), dim_pow in 1u32..=5) {
        let n = 1usize << dim_pow;
        let c = ctx(n);
        for mode in [InstanceMode::Pinch, InstanceMode::TTransform, InstanceMode::Uniform] {
            let (a, b) = generate_instance(&c, seed, mode).unwrap();
            prop_assert!(omega_membership(&a, &b).unwrap().holds, "mode {mode}");
        }
    }

    /// The spectral-scale integral is the normalized trace.
    #[test]
    fn scale_integral_is_trace(seed in any::<u64>(), dim_pow in 1u32..=5) {
        let n = 1usize << dim_pow;
        let a = random_herm(seed, n);
        let scale = spectral_scale(&a).unwrap();
        prop_assert!((scale.integral() - a.trace()).abs() <= 1e-9);
    }

    /// Spectral scales are unitarily invariant.
    #[test]
    fn scales_are_unitarily_invariant(seed in any::<u64>(), dim_pow in 1u32..=5) {
        let n = 1usize << dim_pow;
        let a = random_herm(seed, n);
        let mut rng = seeded_rng(seed ^ 0x9e3779b97f4a7c15);
        let v = haar_unitary(n, &mut rng);
        let rotated =
            HermitianOperator::new(ctx(n), &v * a.matrix() * v.adjoint()).unwrap();
        let (sup, l1) = scale_distance(&a, &rotated).unwrap();
        let slack = 1e-8 * a.max_entry().max(1.0);
        prop_assert!(sup <= slack, "sup drift {sup}");
        prop_assert!(l1 <= slack, "l1 drift {l1}");
    }

    /// Horn round-trip on random majorized pairs, with the realized diagonal
    /// recomputed by explicit multiplication and the replay reproducing it
    /// in the sorted frame.
    #[test]
    fn horn_round_trips_on_random_pairs(seed in any::<u64>(), n in 2usize..=24) {
        let mut rng = seeded_rng(seed);
        let beta = random_uniform_vec(n, -3.0, 3.0, &mut rng);
        let u0 = haar_unitary(n, &mut rng);
        let mut mb = CMatrix::zeros(n, n);
        for (i, &v) in beta.iter().enumerate() {
            mb[(i, i)] = Complex64::new(v, 0.0);
        }
        let conj = &u0 * &mb * u0.adjoint();
        let alpha: Vec<f64> = (0..n).map(|i| conj[(i, i)].re).collect();

        let tol = Tolerances::default();
        let sol = horn_construct(&alpha, &beta, &tol).unwrap();
        let sup = beta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(sol.residual <= tol.horn_tol(n, sup));
        prop_assert!(sol.worst_step_margin >= -tol.maj_tol(n, sup));

        // Independent recomputation in caller coordinates.
        let realized = &sol.u * &mb * sol.u.adjoint();
        for (i, &want) in alpha.iter().enumerate() {
            prop_assert!((realized[(i, i)].re - want).abs() <= 1e-9 * sup.max(1.0));
        }

        // Replay in the sorted working frame.
        let w = replay_steps(n, &sol.steps);
        let betas: Vec<f64> = sol.beta_order.iter().map(|&i| beta[i]).collect();
        let mut alphas: Vec<f64> = alpha.clone();
        alphas.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut diag: Vec<f64> = (0..n)
            .map(|p| (0..n).map(|i| w[(p, i)] * w[(p, i)] * betas[i]).sum())
            .collect();
        diag.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (x, y) in diag.iter().zip(&alphas) {
            prop_assert!((x - y).abs() <= 1e-9 * sup.max(1.0));
        }
    }

    /// End-to-end reconstruction meets its bound on small random instances.
    #[test]
    fn reconstruction_meets_bound(seed in any::<u64>(), dim_pow in 2u32..=4) {
        let n = 1usize << dim_pow;
        let c = ctx(n);
        let (a, b) = generate_instance(&c, seed, InstanceMode::Pinch).unwrap();
        let cert = reconstruct(&a, &b, 0.25).unwrap();
        prop_assert!(cert.achieved < cert.bound);
        prop_assert!(cert.err_a < 0.25 && cert.err_b < 0.25);
        prop_assert!(cert.unitarity_defect <= 1e-10);
    }

    /// Certificates serialize and deserialize without losing precision.
    #[test]
    fn certificate_json_round_trips(seed in any::<u64>()) {
        let n = 8;
        let c = ctx(n);
        let (a, b) = generate_instance(&c, seed, InstanceMode::Pinch).unwrap();
        let cert = reconstruct(&a, &b, 0.5).unwrap();
        let payload = io::CertificateJson::from_certificate(&cert, true);
        let text = serde_json::to_string(&payload).unwrap();
        let back: io::CertificateJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.achieved, cert.achieved);
        prop_assert_eq!(back.alpha, cert.alpha);
        prop_assert_eq!(back.beta, cert.beta);
        prop_assert_eq!(back.n, cert.level);
        let u = back.u.unwrap().to_matrix().unwrap();
        prop_assert_eq!(u, cert.unitary);
    }
}
