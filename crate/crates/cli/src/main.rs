//! `mj` — command-line driver for the constructive Schur–Horn toolkit.
//!
//! Subcommands: check | scale | horn | reconstruct | gen | sweep | probe.
//!
//! Exit codes: 0 success, 1 mathematical negative (not majorized, bound
//! missed), 2 I/O or validation error, 3 resolution floor (the requested ε
//! is finer than the finite model can honor).
//!
//! The environment variable `MJ_TOL_OVERRIDE` accepts
//! `maj=…,eig=…,horn=…` (any subset) to adjust tolerances for experiments.
//! All randomness is derived from the explicit `--seed`; identical
//! invocations produce identical output, byte for byte, except for the
//! wall-clock column of sweep reports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mj_core::io::{CertificateJson, MatrixJson};
use mj_core::{
    arveson_kadison_probe, check_operator_majorization, dyadic_average, generate_instance,
    horn_construct, reconstruct, reconstruct_at_level, spectral_scale, Error as CoreError,
    HermitianOperator, InstanceMode, Mode, ReconstructionCertificate, Tolerances, TracialContext,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "mj",
    version,
    about = "Spectral majorization and constructive Schur-Horn reconstruction",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide spectral majorization a ≺ b between two operator files.
    Check(CheckArgs),
    /// Print the spectral scale of an operator, optionally dyadically averaged.
    Scale(ScaleArgs),
    /// Build the rotation chain realizing a target diagonal from a spectrum.
    Horn(HornArgs),
    /// Run the end-to-end reconstruction and emit a certificate.
    Reconstruct(ReconstructArgs),
    /// Generate a seeded instance pair (a, b) with a ≺ b by construction.
    Gen(GenArgs),
    /// Reconstruct a seeded ensemble and write a CSV report.
    Sweep(SweepArgs),
    /// Search beyond the certificate for the smallest achievable gap.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CheckArgs {
    /// Target operator (JSON matrix file).
    #[arg(long)]
    a: PathBuf,
    /// Source operator (JSON matrix file).
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    /// Operator (JSON matrix file).
    #[arg(long)]
    a: PathBuf,
    /// Dyadic level: report E_n of the scale instead of the scale itself.
    #[arg(long)]
    level: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HornArgs {
    /// Target diagonal, comma-separated (e.g. --alpha 2,1).
    #[arg(long)]
    alpha: String,
    /// Source spectrum, comma-separated (e.g. --beta 3,0).
    #[arg(long)]
    beta: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Target operator in the diagonal masa (JSON matrix file).
    #[arg(long)]
    a: PathBuf,
    /// Source operator (JSON matrix file).
    #[arg(long)]
    b: PathBuf,
    /// Accuracy parameter; the certificate bound is 2ε.
    #[arg(long)]
    epsilon: f64,
    /// Force this dyadic level instead of searching for the smallest one.
    #[arg(long)]
    level: Option<u32>,
    /// Include the unitary in the certificate (large).
    #[arg(long)]
    emit_u: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Matrix dimension N.
    #[arg(long)]
    dim: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance family: pinch | ttransform | uniform.
    #[arg(long, default_value = "pinch")]
    mode: InstanceMode,
    /// Output prefix: writes <out>_a.json and <out>_b.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Matrix dimension N.
    #[arg(long)]
    dim: usize,
    /// Number of instances; row k uses seed + k.
    #[arg(long)]
    size: usize,
    /// Accuracy parameter for every instance.
    #[arg(long)]
    epsilon: f64,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance family: pinch | ttransform | uniform.
    #[arg(long, default_value = "pinch")]
    mode: InstanceMode,
    /// Report path (CSV); scale samples go to the companion
    /// <out with extension scales.csv>.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    /// Target operator in the diagonal masa (JSON matrix file).
    #[arg(long)]
    a: PathBuf,
    /// Source operator (JSON matrix file).
    #[arg(long)]
    b: PathBuf,
    /// Accuracy parameter for the underlying reconstruction.
    #[arg(long)]
    epsilon: f64,
    /// Number of search trials.
    #[arg(long, default_value_t = 200)]
    size: usize,
    /// Search seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::NotMajorized { .. }) => 1,
        Some(CoreError::LevelExhausted { .. }) => 3,
        _ => 2,
    }
}

fn run(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Check(args) => cmd_check(args),
        Cmd::Scale(args) => cmd_scale(args),
        Cmd::Horn(args) => cmd_horn(args),
        Cmd::Reconstruct(args) => cmd_reconstruct(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Probe(args) => cmd_probe(args),
    }
}

/// Effective tolerances: defaults adjusted by MJ_TOL_OVERRIDE if set.
fn tolerances() -> anyhow::Result<Tolerances> {
    match std::env::var("MJ_TOL_OVERRIDE") {
        Ok(spec) => Ok(Tolerances::default().with_overrides(&spec)?),
        Err(std::env::VarError::NotPresent) => Ok(Tolerances::default()),
        Err(e) => Err(anyhow::anyhow!("MJ_TOL_OVERRIDE is not valid unicode: {e}")),
    }
}

fn read_operator(path: &Path) -> anyhow::Result<HermitianOperator> {
    Ok(mj_core::io::read_operator(path, tolerances()?)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{}", text.trim_end_matches('\n')),
    }
    Ok(())
}

/// 12 significant digits, '.' decimal separator, locale-independent.
fn fmt_f(x: f64) -> String {
    format!("{x:.11e}")
}

fn cmd_check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let a = read_operator(&args.a)?;
    let b = read_operator(&args.b)?;
    let verdict = check_operator_majorization(&a, &b, Mode::Majorize)?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&verdict)?,
        Format::Csv => {
            let mut s = String::from("holds,status,mode,worst_margin,trace_gap,tol\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                verdict.holds,
                verdict.status,
                verdict.mode,
                fmt_f(verdict.worst_margin),
                fmt_f(verdict.trace_gap),
                fmt_f(verdict.tol)
            );
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::from(if verdict.holds { 0 } else { 1 }))
}

#[derive(Serialize)]
struct ScaleReport {
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    values: Vec<f64>,
}

fn cmd_scale(args: ScaleArgs) -> anyhow::Result<ExitCode> {
    let a = read_operator(&args.a)?;
    let scale = spectral_scale(&a)?;
    let step = match args.level {
        Some(level) => dyadic_average(&scale.to_step(), level)?,
        None => scale.to_step(),
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&ScaleReport {
            dim: a.dim(),
            level: args.level,
            values: step.values().to_vec(),
        })?,
        Format::Csv => {
            let mut s = String::from("t,value\n");
            let cells = step.cells() as f64;
            for (i, v) in step.values().iter().enumerate() {
                let _ = writeln!(s, "{},{}", fmt_f(i as f64 / cells), fmt_f(*v));
            }
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_csv_vector(name: &str, csv: &str) -> anyhow::Result<Vec<f64>> {
    csv.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| anyhow::anyhow!("--{name}: bad entry `{p}`: {e}"))
        })
        .collect()
}

#[derive(Serialize)]
struct HornReport {
    u: MatrixJson,
    steps: Vec<mj_core::RotationStep>,
    residual: f64,
}

fn cmd_horn(args: HornArgs) -> anyhow::Result<ExitCode> {
    let alpha = parse_csv_vector("alpha", &args.alpha)?;
    let beta = parse_csv_vector("beta", &args.beta)?;
    let tol = tolerances()?;
    let sol = horn_construct(&alpha, &beta, &tol)?;
    let report = HornReport {
        u: MatrixJson::from_matrix(&sol.u),
        steps: sol.steps,
        residual: sol.residual,
    };
    emit(&args.out, &serde_json::to_string_pretty(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn certificate_csv(cert: &ReconstructionCertificate) -> String {
    let mut s =
        String::from("epsilon,n,err_a,err_b,horn_residual,achieved,bound,unitarity_defect\n");
    let _ = writeln!(
        s,
        "{},{},{},{},{},{},{},{}",
        fmt_f(cert.epsilon),
        cert.level,
        fmt_f(cert.err_a),
        fmt_f(cert.err_b),
        fmt_f(cert.horn_residual),
        fmt_f(cert.achieved),
        fmt_f(cert.bound),
        fmt_f(cert.unitarity_defect)
    );
    s
}

fn cmd_reconstruct(args: ReconstructArgs) -> anyhow::Result<ExitCode> {
    let a = read_operator(&args.a)?;
    let b = read_operator(&args.b)?;
    let cert = match args.level {
        Some(level) => reconstruct_at_level(&a, &b, args.epsilon, level)?,
        None => reconstruct(&a, &b, args.epsilon)?,
    };
    let text = match args.format {
        Format::Json => {
            serde_json::to_string_pretty(&CertificateJson::from_certificate(&cert, args.emit_u))?
        }
        Format::Csv => certificate_csv(&cert),
    };
    emit(&args.out, &text)?;
    if cert.achieved < cert.bound {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "bound missed: achieved {} is not below 2ε = {}",
            cert.achieved, cert.bound
        );
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct GenManifest {
    a: String,
    b: String,
    dim: usize,
    seed: u64,
    mode: InstanceMode,
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let ctx = TracialContext::with_tolerances(args.dim, tolerances()?)?;
    let (a, b) = generate_instance(&ctx, args.seed, args.mode)?;
    let path_a = PathBuf::from(format!("{}_a.json", args.out.display()));
    let path_b = PathBuf::from(format!("{}_b.json", args.out.display()));
    mj_core::io::write_json(&path_a, &MatrixJson::from_matrix(a.matrix()))?;
    mj_core::io::write_json(&path_b, &MatrixJson::from_matrix(b.matrix()))?;
    let manifest = GenManifest {
        a: path_a.display().to_string(),
        b: path_b.display().to_string(),
        dim: args.dim,
        seed: args.seed,
        mode: args.mode,
    };
    println!("{}", serde_json::to_string_pretty(&manifest)?);
    Ok(ExitCode::SUCCESS)
}

/// Short status slug for failed sweep rows.
fn status_slug(err: &CoreError) -> &'static str {
    match err {
        CoreError::NotMajorized { .. } => "not_majorized",
        CoreError::LevelExhausted { .. } => "level_exhausted",
        CoreError::NumericalBreakdown(_) => "numerical_breakdown",
        CoreError::NonConvergence(_) => "non_convergence",
        _ => "error",
    }
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    if args.size < 1 {
        anyhow::bail!("--size must be at least 1");
    }
    let ctx = TracialContext::with_tolerances(args.dim, tolerances()?)?;

    let mut report = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    let scales_path = args.out.with_extension("scales.csv");
    let mut scales = std::io::BufWriter::new(std::fs::File::create(&scales_path)?);
    writeln!(
        report,
        "seed,N,mode,epsilon,n,err_a,err_b,horn_residual,achieved,bound,wall_time_ms,status"
    )?;
    writeln!(scales, "row,seed,t,lambda_a,lambda_b,en_lambda_a")?;

    let mut all_ok = true;
    for row in 0..args.size {
        let seed = args.seed.wrapping_add(row as u64);
        let start = std::time::Instant::now();
        let outcome = generate_instance(&ctx, seed, args.mode)
            .and_then(|(a, b)| reconstruct(&a, &b, args.epsilon).map(|c| (a, b, c)));
        let wall_ms = start.elapsed().as_millis();

        match &outcome {
            Ok((_, _, cert)) => {
                writeln!(
                    report,
                    "{},{},{},{},{},{},{},{},{},{},{},ok",
                    seed,
                    args.dim,
                    args.mode,
                    fmt_f(args.epsilon),
                    cert.level,
                    fmt_f(cert.err_a),
                    fmt_f(cert.err_b),
                    fmt_f(cert.horn_residual),
                    fmt_f(cert.achieved),
                    fmt_f(cert.bound),
                    wall_ms
                )?;
            }
            Err(err) => {
                all_ok = false;
                writeln!(
                    report,
                    "{},{},{},{},,,,,,,{},{}",
                    seed,
                    args.dim,
                    args.mode,
                    fmt_f(args.epsilon),
                    wall_ms,
                    status_slug(err)
                )?;
            }
        }
        // A crashed sweep must still leave a valid partial report.
        report.flush()?;

        if let Ok((a, b, cert)) = &outcome {
            let la = spectral_scale(a)?;
            let lb = spectral_scale(b)?;
            let en = dyadic_average(&la.to_step(), cert.level)?.refine_to(args.dim)?;
            for i in 0..args.dim {
                let t = i as f64 / args.dim as f64;
                writeln!(
                    scales,
                    "{},{},{},{},{},{}",
                    row,
                    seed,
                    fmt_f(t),
                    fmt_f(la.values()[i]),
                    fmt_f(lb.values()[i]),
                    fmt_f(en.values()[i])
                )?;
            }
            scales.flush()?;
        }
    }
    Ok(ExitCode::from(if all_ok { 0 } else { 1 }))
}

fn cmd_probe(args: ProbeArgs) -> anyhow::Result<ExitCode> {
    let a = read_operator(&args.a)?;
    let b = read_operator(&args.b)?;
    let report = arveson_kadison_probe(&a, &b, args.epsilon, args.size, args.seed)?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Csv => {
            let mut s = String::from("trial,best_gap\n");
            for (i, g) in report.trace.iter().enumerate() {
                let _ = writeln!(s, "{},{}", i, fmt_f(*g));
            }
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}
