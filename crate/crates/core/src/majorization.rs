//! Majorization and submajorization verdicts with margin certificates.
//!
//! For decreasing rearrangements α↓, β↓ of two real N-vectors, α is
//! *submajorized* by β when every partial sum of β↓ dominates the matching
//! partial sum of α↓, and *majorized* when additionally the full sums agree.
//! For Hermitian operators the comparison is made through spectral scales,
//! where partial sums become partial integrals ∫₀ˢ λ(t) dt.
//!
//! Every check returns a [`MajorizationVerdict`] carrying all N margins, so
//! a positive or negative answer is always accompanied by the numbers that
//! witness it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;
use crate::tracial::{spectral_scale, HermitianOperator, SpectralScale};

/// Comparison mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Partial-sum dominance plus equality of totals.
    Majorize,
    /// Partial-sum dominance only.
    Submajorize,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Majorize => write!(f, "majorize"),
            Mode::Submajorize => write!(f, "submajorize"),
        }
    }
}

/// Three-valued classification of a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Holds with all decisive margins strictly above tolerance.
    Holds,
    /// Holds, but some decisive margin is within tolerance of zero.
    Marginal,
    /// Fails.
    Fails,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Holds => write!(f, "holds"),
            Status::Marginal => write!(f, "marginal"),
            Status::Fails => write!(f, "fails"),
        }
    }
}

/// Outcome of a majorization comparison, with its witnessing margins.
///
/// `margins[k]` is the k-th partial-sum gap Σᵢ≤ₖ β↓ − Σᵢ≤ₖ α↓ (for operator
/// checks: the partial-integral gap, i.e. the same quantity divided by N).
/// The final margin equals `trace_gap` by construction. `worst_margin` is
/// the minimum over the *decisive* margins: in majorize mode the final
/// margin is pinned to ~0 by the trace condition and is excluded (unless
/// N = 1); in submajorize mode all margins count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub status: Status,
    pub mode: Mode,
    pub margins: Vec<f64>,
    pub trace_gap: f64,
    pub worst_margin: f64,
    /// Margin tolerance the verdict was decided under (same units as
    /// `margins`).
    pub tol: f64,
}

/// Compare two real vectors in the given mode.
///
/// Margins are raw partial-sum gaps of the decreasing rearrangements. The
/// verdict holds when every margin is ≥ −maj_tol and, in majorize mode,
/// |trace_gap| ≤ maj_tol, with maj_tol = max(1e-10, 1e-12·n·‖β‖_∞).
pub fn check_vector_majorization(
    alpha: &[f64],
    beta: &[f64],
    mode: Mode,
    tol: &Tolerances,
) -> Result<MajorizationVerdict> {
    if alpha.is_empty() {
        return Err(Error::EmptyInput("majorization check needs nonempty vectors"));
    }
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            got: beta.len(),
        });
    }
    if alpha.iter().chain(beta.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("majorization inputs"));
    }

    let n = alpha.len();
    let mut a = alpha.to_vec();
    let mut b = beta.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let sup_beta = b[0].abs().max(b[n - 1].abs());
    let t = tol.maj_tol(n, sup_beta);

    let mut margins = Vec::with_capacity(n);
    let mut run_a = 0.0f64;
    let mut run_b = 0.0f64;
    for k in 0..n {
        run_a += a[k];
        run_b += b[k];
        margins.push(run_b - run_a);
    }
    let trace_gap = margins[n - 1];

    let partial_ok = margins.iter().all(|&m| m >= -t);
    let holds = match mode {
        Mode::Majorize => partial_ok && trace_gap.abs() <= t,
        Mode::Submajorize => partial_ok,
    };

    let decisive = match mode {
        // The trace condition pins the final margin to ~0; it carries no
        // information about how tight the comparison is.
        Mode::Majorize if n > 1 => &margins[..n - 1],
        _ => &margins[..],
    };
    let worst_margin = decisive.iter().fold(f64::INFINITY, |m, &v| m.min(v));

    let status = if !holds {
        Status::Fails
    } else if worst_margin <= t {
        Status::Marginal
    } else {
        Status::Holds
    };

    Ok(MajorizationVerdict {
        holds,
        status,
        mode,
        margins,
        trace_gap,
        worst_margin,
        tol: t,
    })
}

/// Compare two spectral scales on the same grid. The boolean outcome is
/// decided by [`check_vector_majorization`] on the scale values (so scale
/// and vector verdicts agree exactly); the stored margins are converted to
/// partial-integral units (divided by N), which makes
/// `margins[N−1] = τ(b) − τ(a)`. Division by a positive constant preserves
/// every sign comparison, so the reported tolerance is divided along.
pub fn check_scale_majorization(
    sa: &SpectralScale,
    sb: &SpectralScale,
    mode: Mode,
    tol: &Tolerances,
) -> Result<MajorizationVerdict> {
    let mut v = check_vector_majorization(sa.values(), sb.values(), mode, tol)?;
    let n = sa.cells() as f64;
    for m in &mut v.margins {
        *m /= n;
    }
    v.trace_gap /= n;
    v.worst_margin /= n;
    v.tol /= n;
    Ok(v)
}

/// Compare two Hermitian operators through their spectral scales.
pub fn check_operator_majorization(
    a: &HermitianOperator,
    b: &HermitianOperator,
    mode: Mode,
) -> Result<MajorizationVerdict> {
    a.ctx().require_same_dim(b.ctx())?;
    let sa = spectral_scale(a)?;
    let sb = spectral_scale(b)?;
    check_scale_majorization(&sa, &sb, mode, a.ctx().tolerances())
}

/// Membership of a diagonal operator `a` in the majorization body of `b`:
/// requires `a` to lie in the diagonal masa and λ_a ≺ λ_b.
pub fn omega_membership(a: &HermitianOperator, b: &HermitianOperator) -> Result<MajorizationVerdict> {
    a.ctx().require_same_dim(b.ctx())?;
    a.require_diagonal()?;
    check_operator_majorization(a, b, Mode::Majorize)
}

/// A convex test function with an explicit domain.
#[derive(Clone, Debug, PartialEq)]
pub enum BankFunction {
    /// |x| on all of ℝ.
    Abs,
    /// x² on all of ℝ.
    Square,
    /// eˣ on all of ℝ.
    Exp,
    /// Hinge max(x − c, 0) on all of ℝ.
    Hinge(f64),
    /// −log(x + shift), defined for x + shift > 0.
    NegLog { shift: f64 },
}

impl BankFunction {
    pub fn name(&self) -> String {
        match self {
            BankFunction::Abs => "abs".into(),
            BankFunction::Square => "square".into(),
            BankFunction::Exp => "exp".into(),
            BankFunction::Hinge(c) => format!("hinge@{c:.6e}"),
            BankFunction::NegLog { shift } => format!("neglog@{shift:.6e}"),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BankFunction::Abs => x.abs(),
            BankFunction::Square => x * x,
            BankFunction::Exp => x.exp(),
            BankFunction::Hinge(c) => (x - c).max(0.0),
            BankFunction::NegLog { shift } => -(x + shift).ln(),
        }
    }

    pub fn admits(&self, x: f64) -> bool {
        match self {
            BankFunction::NegLog { shift } => x + shift > 0.0,
            _ => true,
        }
    }
}

/// Default bank for spectra contained in [lo, hi]: |x|, x², eˣ, nine hinges
/// with knees evenly spaced across [lo, hi], and −log(x + shift) with the
/// shift chosen so the spectra stay inside the domain (0 when lo > 0).
pub fn default_function_bank(lo: f64, hi: f64) -> Vec<BankFunction> {
    let mut bank = vec![BankFunction::Abs, BankFunction::Square, BankFunction::Exp];
    let span = hi - lo;
    for k in 0..9 {
        let c = if span > 0.0 { lo + span * k as f64 / 8.0 } else { lo };
        bank.push(BankFunction::Hinge(c));
    }
    let shift = if lo > 0.0 { 0.0 } else { 1.0 - lo };
    bank.push(BankFunction::NegLog { shift });
    bank
}

/// One convex-criterion sample: slack = τ(f(b)) − τ(f(a)) (≥ 0 whenever
/// a is in the majorization body of b and f is convex).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexProbeEntry {
    pub name: String,
    pub slack: f64,
}

/// Result of sampling the convex criterion over a function bank.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexProbeReport {
    pub entries: Vec<ConvexProbeEntry>,
    /// Most negative slack first (min over entries); nonnegative (up to
    /// tolerance) when majorization holds.
    pub min_slack: f64,
}

/// Sample τ(f(b)) − τ(f(a)) over the bank. Errors with
/// [`Error::DomainViolation`] if either spectrum leaves a function's domain.
pub fn convex_criterion_probe(
    a: &HermitianOperator,
    b: &HermitianOperator,
    bank: &[BankFunction],
) -> Result<ConvexProbeReport> {
    a.ctx().require_same_dim(b.ctx())?;
    if bank.is_empty() {
        return Err(Error::EmptyInput("convex probe needs a nonempty function bank"));
    }
    let sa = spectral_scale(a)?;
    let sb = spectral_scale(b)?;
    let n = sa.cells() as f64;
    let mut entries = Vec::with_capacity(bank.len());
    let mut min_slack = f64::INFINITY;
    for f in bank {
        for &x in sa.values().iter().chain(sb.values().iter()) {
            if !f.admits(x) {
                return Err(Error::DomainViolation {
                    name: f.name(),
                    value: x,
                });
            }
        }
        let fa: f64 = sa.values().iter().map(|&x| f.eval(x)).sum::<f64>() / n;
        let fb: f64 = sb.values().iter().map(|&x| f.eval(x)).sum::<f64>() / n;
        let slack = fb - fa;
        min_slack = min_slack.min(slack);
        entries.push(ConvexProbeEntry { name: f.name(), slack });
    }
    Ok(ConvexProbeReport { entries, min_slack })
}
