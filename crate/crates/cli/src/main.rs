mod region;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use symdisc::dilation::{build_dilation, central_gamma_unitary_check, compression_residual};
use symdisc::geometry::{classify, in_half_gamma, PointPair};
use symdisc::io::MatrixFile;
use symdisc::linalg::c64;
use symdisc::pair::{
    fundamental_operator, is_gamma_contraction_strict, is_gamma_contraction_with, is_gamma_isometry, is_gamma_unitary,
    OperatorPair, ScanGrid, UnitaryMethod, Verdict,
};
use symdisc::repro::{self, CommuteParams, NormalParams, Report};
use symdisc::symmetrization::{decompose, embed_and_split, symmetrize_ops, DecompositionStatus};
use symdisc::{ComplexMatrix, Error, Tolerances};

const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_COMMUTING: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "symdisc", version, about = "Γ-contractions, symmetrization and Γ-unitary dilations of matrix pairs")]
struct Cli {
    /// Tolerance for asserted identities.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a scalar point (s, p).
    #[command(allow_negative_numbers = true)]
    ClassifyPoint { s_re: f64, s_im: f64, p_re: f64, p_im: f64 },
    /// Certify whether (S, P) is a Γ-contraction.
    AnalyzePair {
        s: PathBuf,
        p: PathBuf,
        /// Also report the strict criterion, with the reason if it does not apply.
        #[arg(long)]
        strict: bool,
        /// Radial x angular grid of the ρ scan.
        #[arg(long, default_value = "32x64", value_parser = parse_scan)]
        scan: ScanGrid,
    },
    /// Solve S − S*P = D_P F D_P.
    FundamentalOp { s: PathBuf, p: PathBuf },
    /// (T1 + T2, T1 T2) for commuting T1, T2.
    Symmetrize { t1: PathBuf, t2: PathBuf },
    /// Split (S, P) into commuting contractions.
    Decompose {
        s: PathBuf,
        p: PathBuf,
        /// Try every branch of the square root, not only the principal one.
        #[arg(long)]
        branch_search: bool,
    },
    /// Split (S, P) on H ⊕ H with ‖Ti‖ ≤ 2.
    Embed { s: PathBuf, p: PathBuf },
    /// Truncated Γ-unitary dilation and its checks.
    Dilate {
        s: PathBuf,
        p: PathBuf,
        #[arg(long, default_value_t = 8)]
        blocks: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Reproduce a worked example.
    Repro {
        example: Example,
        #[arg(long, default_value_t = 1.0 / 1.3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.005)]
        r: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Scale of the nilpotent pair, as `re` or `re,im`.
        #[arg(long, default_value = "5", value_parser = parse_complex, allow_hyphen_values = true)]
        z: (f64, f64),
    },
    /// Classify a grid through (s, p) space and write CSV.
    Region {
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value = "s_re=-2:2,p_re=-1:1")]
        slice: String,
        /// Label by membership of the half-scaled set instead.
        #[arg(long)]
        half: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    #[value(name = "ex3_3")]
    Ex33,
    #[value(name = "ex3_5")]
    Ex35,
    Nilpotent,
    #[value(name = "counter_F_commute")]
    CounterFCommute,
    #[value(name = "counter_F_normal")]
    CounterFNormal,
    All,
}

fn parse_scan(text: &str) -> Result<ScanGrid, String> {
    let (r, a) = text.split_once(['x', 'X']).ok_or("expected RxA, e.g. 32x64")?;
    let radial: usize = r.trim().parse().map_err(|_| format!("bad radial count `{r}`"))?;
    let angular: usize = a.trim().parse().map_err(|_| format!("bad angular count `{a}`"))?;
    if radial == 0 || angular == 0 {
        return Err("scan counts must be positive".into());
    }
    Ok(ScanGrid { radial, angular })
}

fn parse_complex(text: &str) -> Result<(f64, f64), String> {
    let number = |x: &str| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("bad number `{x}`"));
    match text.split_once(',') {
        Some((re, im)) => Ok((number(re)?, number(im)?)),
        None => Ok((number(text)?, 0.0)),
    }
}

/// Failure carrying the exit code; the message goes to standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotCommuting { .. } => EXIT_NOT_COMMUTING,
            Error::NotSquare { .. }
            | Error::DimensionMismatch(_)
            | Error::NonFinite
            | Error::InvalidArgument(_)
            | Error::DegreeTooHigh { .. } => EXIT_USAGE,
            _ => EXIT_NO,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })?;
    MatrixFile::parse(&text).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })
}

fn read_pair(s: &Path, p: &Path, tol: Tolerances) -> Result<OperatorPair, Failure> {
    Ok(OperatorPair::new(read_matrix(s)?, read_matrix(p)?, tol)?)
}

fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn matrix(m: &ComplexMatrix) -> MatrixFile {
    MatrixFile::from_matrix(m)
}

/// Non-finite floats as JSON null.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::CertifiedContraction => 0,
        Verdict::CertifiedNot => EXIT_NO,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn run(cli: Cli) -> Outcome {
    let tol = Tolerances::default()
        .with_assert_tol(cli.tol)
        .map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
    match cli.command {
        Command::ClassifyPoint { s_re, s_im, p_re, p_im } => {
            if ![s_re, s_im, p_re, p_im].iter().all(|x| x.is_finite()) {
                return Err(Failure { code: EXIT_USAGE, message: "coordinates must be finite".into() });
            }
            let pt = PointPair::new(c64(s_re, s_im), c64(p_re, p_im));
            emit(&json!({ "membership": classify(pt), "in_half_gamma": in_half_gamma(pt) }));
            Ok(0)
        }
        Command::AnalyzePair { s, p, strict, scan } => {
            let pr = read_pair(&s, &p, tol)?;
            let report = is_gamma_contraction_with(&pr, scan)?;
            let strict_section = strict.then(|| match is_gamma_contraction_strict(&pr) {
                Ok(c) => json!({ "value": c.value, "holds": c.holds }),
                Err(e) => json!({ "not_applicable": e.to_string() }),
            });
            let code = verdict_code(report.overall);
            emit(&json!({
                "gamma_contraction": report,
                "strict_criterion": strict_section,
                "gamma_unitary": {
                    "algebraic": is_gamma_unitary(&pr, UnitaryMethod::Algebraic),
                    "new_char": is_gamma_unitary(&pr, UnitaryMethod::NewChar),
                },
                "gamma_isometry": is_gamma_isometry(&pr),
            }));
            Ok(code)
        }
        Command::FundamentalOp { s, p } => {
            let pr = read_pair(&s, &p, tol)?;
            let f = fundamental_operator(&pr)?;
            emit(&json!({
                "defect_dim": f.defect_dim(),
                "f": matrix(&f.f),
                "f_full": matrix(&f.full()),
                "defect_basis": matrix(&f.defect_basis),
                "residual": f.residual,
                "omega": f.omega,
                "path_gap": f.path_gap,
            }));
            Ok(0)
        }
        Command::Symmetrize { t1, t2 } => {
            let pr = symmetrize_ops(&read_matrix(&t1)?, &read_matrix(&t2)?, &tol)?;
            emit(&json!({ "s": matrix(&pr.s), "p": matrix(&pr.p) }));
            Ok(0)
        }
        Command::Decompose { s, p, branch_search } => {
            let pr = read_pair(&s, &p, tol)?;
            let d = decompose(&pr, branch_search);
            emit(&json!({
                "status": d.status,
                "t1": d.t1.as_ref().map(matrix),
                "t2": d.t2.as_ref().map(matrix),
                "delta": d.delta.as_ref().map(matrix),
                "norms": [finite(d.norms.0), finite(d.norms.1)],
                "branches_tried": d.branches_tried,
                "note": d.note,
            }));
            Ok(if d.status == DecompositionStatus::Ok { 0 } else { EXIT_NO })
        }
        Command::Embed { s, p } => {
            let pr = read_pair(&s, &p, tol)?;
            let e = embed_and_split(&pr)?;
            emit(&json!({
                "block_layout": e.block_layout,
                "t1": matrix(&e.t1),
                "t2": matrix(&e.t2),
                "norms": [e.norms.0, e.norms.1],
                "sum_residual": e.sum_residual,
                "product_residual": e.product_residual,
            }));
            Ok(0)
        }
        Command::Dilate { s, p, blocks, max_degree } => {
            if max_degree >= blocks {
                return Err(Error::DegreeTooHigh { degree: max_degree, blocks }.into());
            }
            let pr = read_pair(&s, &p, tol)?;
            let gamma = is_gamma_contraction_with(&pr, ScanGrid::default())?;
            if !gamma.is_certified() {
                emit(&json!({ "gamma_contraction": gamma }));
                return Ok(verdict_code(gamma.overall));
            }
            let trunc = build_dilation(&pr, blocks)?;
            let residual = compression_residual(&trunc, &pr.s, &pr.p, max_degree);
            emit(&json!({
                "blocks": blocks,
                "max_degree": max_degree,
                "dimension": trunc.dim(),
                "defect_dims": [trunc.f.defect_dim(), trunc.fstar.defect_dim()],
                "compression_residual": residual,
                "central_check": central_gamma_unitary_check(&trunc),
                "omega_f": trunc.f.omega,
                "omega_f_star": trunc.fstar.omega,
            }));
            Ok(0)
        }
        Command::Repro { example, epsilon, r, delta, z } => {
            let seed = cli.seed;
            let reports: Vec<Report> = match example {
                Example::Ex33 => vec![repro::repro_example_3_3(epsilon, seed)?],
                Example::Ex35 => vec![repro::repro_example_3_5(r, delta, seed)?],
                Example::Nilpotent => vec![repro::repro_nilpotent(c64(z.0, z.1))?],
                Example::CounterFCommute => {
                    vec![repro::repro_counterexample_noncommuting_f(&CommuteParams::default())?]
                }
                Example::CounterFNormal => vec![repro::repro_counterexample_nonnormal_f(&NormalParams::default())?],
                Example::All => vec![
                    repro::repro_example_3_3(epsilon, seed)?,
                    repro::repro_example_3_5(r, delta, seed)?,
                    repro::repro_nilpotent(c64(z.0, z.1))?,
                    repro::repro_counterexample_noncommuting_f(&CommuteParams::default())?,
                    repro::repro_counterexample_nonnormal_f(&NormalParams::default())?,
                ],
            };
            let passed = reports.iter().all(|r| r.passed);
            if let [single] = reports.as_slice() {
                emit(single);
            } else {
                emit(&json!({ "passed": passed, "reports": reports }));
            }
            Ok(if passed { 0 } else { EXIT_NO })
        }
        Command::Region { grid, slice, half, out } => {
            if grid < 2 {
                return Err(Failure { code: EXIT_USAGE, message: "--grid must be at least 2".into() });
            }
            let slice = region::Slice::parse(&slice).map_err(|message| Failure { code: EXIT_USAGE, message })?;
            let io_err = |e: csv::Error| Failure { code: EXIT_USAGE, message: e.to_string() };
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })?;
                    let rows = region::write_csv(file, &slice, grid, half).map_err(io_err)?;
                    emit(&json!({ "rows": rows, "out": path.display().to_string() }));
                }
                None => {
                    region::write_csv(std::io::stdout().lock(), &slice, grid, half).map_err(io_err)?;
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
