//! Constructive Schur–Horn step: given α majorized by β, build a real
//! orthogonal U with diag(U·diag(β)·U*) = α as an explicit chain of Givens
//! rotations.
//!
//! The construction peels off targets one at a time. With both lists sorted
//! decreasingly, the largest remaining target t always lies between two
//! adjacent remaining source values β′_j ≥ t > β′_{j+1}; a single rotation
//! in that coordinate plane with c² = (t − β′_{j+1})/(β′_j − β′_{j+1})
//! places t exactly on the diagonal and leaves the sum-preserving leftover
//! β′_j + β′_{j+1} − t in play. Majorization of the remainder is preserved,
//! so the recursion never gets stuck; at most n−1 nontrivial rotations are
//! needed. The already-fixed coordinate acquires off-diagonal entries, but
//! later rotations never touch its diagonal, which is all that matters.
//!
//! The companion `schur_check` verifies the converse direction: the diagonal
//! of any Hermitian operator is majorized by its eigenvalue vector.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::{check_vector_majorization, MajorizationVerdict, Mode};
use crate::tol::Tolerances;
use crate::tracial::{eigen_decompose, CMatrix, HermitianOperator};

/// One Givens rotation of the chain, in the internal working frame (both
/// spectra sorted decreasingly; see [`HornSolution::beta_order`]).
///
/// Replay semantics: acting on row vectors, row_i ← c·row_i + s·row_j and
/// row_j ← −s·row_i + c·row_j (using the old rows on the right-hand side),
/// with i < j and c ∈ [0,1]; the sign of the mixing is carried by `s`.
/// `target` is the index into the sorted target list whose value this
/// rotation realizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationStep {
    pub i: usize,
    pub j: usize,
    pub c: f64,
    pub s: f64,
    pub target: usize,
}

/// Result of a Horn construction.
#[derive(Clone, Debug)]
pub struct HornSolution {
    /// Real orthogonal matrix (stored complex) with
    /// diag(u·diag(β)·u*) = α in the caller's coordinate order.
    pub u: CMatrix,
    /// The nontrivial rotations, in application order, working frame.
    pub steps: Vec<RotationStep>,
    /// max_k |diag(u·diag(β)·u*)_k − α_k|.
    pub residual: f64,
    /// Minimum majorization margin observed across all recursion steps
    /// (≥ −maj_tol; slightly negative values witness tolerated roundoff).
    pub worst_step_margin: f64,
    /// `alpha_order[k]` = caller index of the k-th largest target.
    pub alpha_order: Vec<usize>,
    /// `beta_order[i]` = caller index of the i-th largest source value;
    /// working coordinate i initially holds that value.
    pub beta_order: Vec<usize>,
}

/// Build a rotation chain realizing diagonal α from spectrum β.
///
/// Errors with [`Error::NotMajorized`] when α is not majorized by β (the
/// attached margin says by how much), and with
/// [`Error::NumericalBreakdown`] if an internal invariant fails beyond
/// tolerance — which indicates a bug or pathological input, not a
/// legitimate negative answer.
pub fn horn_construct(alpha: &[f64], beta: &[f64], tol: &Tolerances) -> Result<HornSolution> {
    let precheck = check_vector_majorization(alpha, beta, Mode::Majorize, tol)?;
    if !precheck.holds {
        // Witness: the violated partial-sum margin, or (when the partial
        // sums are fine) the trace gap expressed as a negative margin.
        let witness = if precheck.worst_margin < 0.0 {
            precheck.worst_margin
        } else {
            -precheck.trace_gap.abs()
        };
        return Err(Error::NotMajorized { worst_margin: witness });
    }

    let n = alpha.len();
    let sup_beta = beta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let maj_tol = tol.maj_tol(n, sup_beta);
    // Direct-consume slack for a target that numerically exceeds every
    // remaining value, and the pivot-gap floor below which a rotation is
    // replaced by a direct consume (both far inside the residual budget).
    let top_slack = 1e-12 * sup_beta.max(1.0);
    let pivot_floor = 1e-14 * sup_beta;

    let alpha_order = sorted_order_desc(alpha);
    let beta_order = sorted_order_desc(beta);
    let alpha_sorted: Vec<f64> = alpha_order.iter().map(|&i| alpha[i]).collect();

    // Remaining source values as (value, working coordinate), kept sorted
    // by value desc, coordinate asc.
    let mut rem: Vec<(f64, usize)> = beta_order
        .iter()
        .enumerate()
        .map(|(coord, &orig)| (beta[orig], coord))
        .collect();
    rem.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut w = DMatrix::<f64>::identity(n, n);
    let mut assigned = vec![usize::MAX; n];
    let mut steps = Vec::new();
    let mut worst_step_margin = f64::INFINITY;

    // Suffix sums of the sorted targets let each step's invariant check run
    // in O(remaining) time.
    for k in 0..n {
        let t = alpha_sorted[k];

        // Invariant: the remaining sources must still majorize the
        // remaining targets.
        let mut run_a = 0.0f64;
        let mut run_b = 0.0f64;
        let mut min_margin = f64::INFINITY;
        for (offset, &(v, _)) in rem.iter().enumerate() {
            run_a += alpha_sorted[k + offset];
            run_b += v;
            min_margin = min_margin.min(run_b - run_a);
        }
        worst_step_margin = worst_step_margin.min(min_margin);
        if min_margin < -maj_tol || (run_b - run_a).abs() > maj_tol {
            return Err(Error::NumericalBreakdown(format!(
                "recursion invariant violated at step {k}: margin {min_margin:.3e}, sum gap {:.3e}",
                run_b - run_a
            )));
        }

        // j = largest index with value ≥ t (the remaining list is sorted
        // decreasingly, so this is the rightmost of the prefix ≥ t).
        let count_ge = rem.partition_point(|&(v, _)| v >= t);
        if count_ge == 0 {
            // t exceeds every remaining value; only roundoff can cause this.
            if t - rem[0].0 > top_slack {
                return Err(Error::NumericalBreakdown(format!(
                    "target {t:.17e} exceeds largest remaining value {:.17e}",
                    rem[0].0
                )));
            }
            let (_, coord) = rem.remove(0);
            assigned[coord] = k;
            continue;
        }
        let j = count_ge - 1;

        if j == rem.len() - 1 {
            // Smallest remaining value already equals t (up to roundoff).
            let coord = consume_run_start(&mut rem, j);
            assigned[coord] = k;
            continue;
        }

        let (p_val, p_coord) = rem[j];
        let (q_val, q_coord) = rem[j + 1];
        let den = p_val - q_val;
        let num = t - q_val; // > 0 since rem[j+1] < t by choice of j
        if num >= den || den < pivot_floor {
            // t coincides with the upper pivot value (or the pivot gap is
            // too small to resolve): consume it directly, error ≤ den.
            let coord = consume_run_start(&mut rem, j);
            assigned[coord] = k;
            continue;
        }

        let c2 = (num / den).clamp(0.0, 1.0);
        let c = c2.sqrt();
        let s = (1.0 - c2).sqrt();
        apply_rotation(&mut w, p_coord, q_coord, c, s);
        steps.push(normalize_step(p_coord, q_coord, c, s, k));
        assigned[p_coord] = k;
        let leftover = p_val + q_val - t;
        rem.remove(j + 1);
        rem.remove(j);
        let pos = rem.partition_point(|&(v, co)| v > leftover || (v == leftover && co < q_coord));
        rem.insert(pos, (leftover, q_coord));
    }
    debug_assert!(rem.is_empty());
    debug_assert!(steps.len() <= n.saturating_sub(1));

    // Compose the sorting permutations: caller-order U = P_target·W·P_beta,
    // i.e. U[α-position of target, caller β index] = W[coord, i].
    let mut u = CMatrix::zeros(n, n);
    for p in 0..n {
        let row = alpha_order[assigned[p]];
        for i in 0..n {
            u[(row, beta_order[i])] = Complex64::new(w[(p, i)], 0.0);
        }
    }

    // Residual in the caller's frame.
    let mut residual = 0.0f64;
    for r in 0..n {
        let mut d = 0.0f64;
        for c_idx in 0..n {
            let e = u[(r, c_idx)].re;
            d += e * e * beta[c_idx];
        }
        residual = residual.max((d - alpha[r]).abs());
    }
    let horn_tol = tol.horn_tol(n, sup_beta);
    if residual > horn_tol {
        return Err(Error::NumericalBreakdown(format!(
            "diagonal residual {residual:.3e} exceeds {horn_tol:.3e}"
        )));
    }

    #[cfg(debug_assertions)]
    {
        let gram = u.adjoint() * &u;
        let defect = crate::tracial::max_modulus(&(&gram - CMatrix::identity(n, n)));
        debug_assert!(
            defect <= 1e-9,
            "rotation chain lost orthogonality: defect {defect:.3e}"
        );
    }

    Ok(HornSolution {
        u,
        steps,
        residual,
        worst_step_margin,
        alpha_order,
        beta_order,
    })
}

/// Schur direction: the diagonal of a Hermitian operator is majorized by
/// its eigenvalue vector. Returns the margin-bearing verdict.
pub fn schur_check(a: &HermitianOperator) -> Result<MajorizationVerdict> {
    let sys = eigen_decompose(a)?;
    check_vector_majorization(&a.diagonal(), &sys.values, Mode::Majorize, a.ctx().tolerances())
}

/// Rebuild the working-frame rotation product from recorded steps (used to
/// validate the recorded chain against the returned matrix).
pub fn replay_steps(n: usize, steps: &[RotationStep]) -> DMatrix<f64> {
    let mut w = DMatrix::<f64>::identity(n, n);
    for st in steps {
        for k in 0..n {
            let (wi, wj) = (w[(st.i, k)], w[(st.j, k)]);
            w[(st.i, k)] = st.c * wi + st.s * wj;
            w[(st.j, k)] = -st.s * wi + st.c * wj;
        }
    }
    w
}

fn sorted_order_desc(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].partial_cmp(&v[i]).unwrap().then(i.cmp(&j)));
    idx
}

/// Remove and return the coordinate of the FIRST element of the equal-value
/// run containing position `j` (all candidates carry the same value, so any
/// is mathematically valid; taking the run start keeps equal inputs in
/// their natural order and makes α = β come out as the identity).
fn consume_run_start(rem: &mut Vec<(f64, usize)>, j: usize) -> usize {
    let val = rem[j].0;
    let lo = rem.partition_point(|&(v, _)| v > val);
    debug_assert!(lo <= j);
    rem.remove(lo).1
}

/// Rows p,q of w ← [c −s; s c]·rows, i.e. row_p' = c·row_p − s·row_q.
fn apply_rotation(w: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..w.ncols() {
        let (wp, wq) = (w[(p, k)], w[(q, k)]);
        w[(p, k)] = c * wp - s * wq;
        w[(q, k)] = s * wp + c * wq;
    }
}

/// Record a step under the i<j convention of [`RotationStep`].
fn normalize_step(p: usize, q: usize, c: f64, s: f64, target: usize) -> RotationStep {
    if p < q {
        RotationStep { i: p, j: q, c, s: -s, target }
    } else {
        RotationStep { i: q, j: p, c, s, target }
    }
}
