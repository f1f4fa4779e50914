//! Command-line front end.
//!
//! Exit codes: 0 solvable / true / value computed, 2 infeasible / false,
//! 3 unknown, 1 usage or input error (with a JSON error object on stderr).

pub mod grid;
pub mod json;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::interp::{
    necessary_checks, solve_tetra, verify_certificate, BCParams, Certificate, Infeasibility,
    SearchConfig, SolvableCertificate, TetraProblem, BOUNDARY_SAMPLES, MEMBERSHIP_TOL,
};
use crate::mu::mu_diag;
use crate::numeric::{CMatrix, DEFAULT_QUAD};
use crate::realization::{boundary_einner_check, canonical_lift, tetra_from_colligation};
use crate::scalar::{c64, C};
use crate::synthesis::{reduce_to_tetra, solve_mu, verify_mu, MuProblem, ScaledSchurFunction};
use crate::tetrablock::{
    in_closed_tetrablock, in_distinguished_boundary, in_open_tetrablock, TetraPoint,
};
use grid::Rect;
use json::*;

/// Environment variable mirroring `--threads`.
pub const THREADS_ENV: &str = "TETRASYNTH_THREADS";
/// `mu` relative tolerance when the problem file gives none.
pub const DEFAULT_MU_REL_TOL: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tetrasynth",
    version,
    about = "Tetrablock interpolation and 2x2 mu-synthesis"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Args)]
struct Options {
    /// Problem or certificate file (stdin when absent or `-`).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file, written atomically (stdout when absent).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Pick eigenvalue tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Random starts of the search.
    #[arg(long, global = true, default_value_t = 32)]
    starts: usize,
    /// Nelder-Mead iterations per start.
    #[arg(long, global = true, default_value_t = 400)]
    max_iters: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Disc samples for membership and mu verification.
    #[arg(long, global = true, default_value_t = 200)]
    grid: usize,
    /// Initial circle quadrature size of the canonical lift.
    #[arg(long, global = true, default_value_t = DEFAULT_QUAD)]
    quad: usize,
    /// Worker threads for the search (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed/open tetrablock and distinguished-boundary membership of a point.
    Membership,
    /// mu_Diag of a 2x2 matrix.
    Mu,
    /// Solve a tetrablock interpolation problem.
    SolveTetra,
    /// Solve a 2x2 mu-synthesis interpolation problem.
    SolveMu,
    /// Evaluate the tetra function of a 2x2 colligation.
    Realize,
    /// Evaluate the canonical 2x2 lift of a colligation's tetra function.
    Lift,
    /// Re-verify a certificate.
    Verify,
    /// Write a CSV grid for plotting.
    SampleGrid(GridArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GridKind {
    TetraSlice,
    MuLevels,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(value_enum)]
    kind: GridKind,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    im_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    im_max: f64,
    #[arg(long, default_value_t = 50)]
    nx: usize,
    #[arg(long, default_value_t = 50)]
    ny: usize,
    /// Coordinate (x1, x2, x3) or entry (a11, a12, a21, a22) swept over the grid.
    #[arg(long)]
    vary: Option<String>,
    /// Fixed values as `re,im`; the swept one is ignored.
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    x1: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    x2: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    x3: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    a11: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    a12: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    a21: C<f64>,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    a22: C<f64>,
}

fn parse_complex(s: &str) -> Result<C<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => c64(num(re)?, 0.0),
        [re, im] => c64(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("non-finite value".into())
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            Self::Lib(e) => match e {
                Error::InvalidInput(_) => "invalid_input",
                Error::InvalidData(_) => "invalid_data",
                Error::NotIsometric { .. } => "not_isometric",
                Error::Pole { .. } => "pole",
                Error::OutOfDomain { .. } => "out_of_domain",
                Error::ContractViolation(_) => "contract_violation",
                Error::BoundaryPole { .. } => "boundary_pole",
                Error::Infeasible(_) => "infeasible",
                Error::NumericalFailure(_) => "numerical_failure",
                Error::HypothesisViolation(_) => "hypothesis_violation",
                Error::RescalingDegenerate { .. } => "rescaling_degenerate",
            },
            Self::Json(_) => "malformed_json",
            Self::Io(_) => "io",
            Self::Usage(_) => "usage",
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let obj = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{obj}");
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                _ => {
                    report_error("usage", e.to_string().trim_end());
                    EXIT_ERROR
                }
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    match cli.opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let opts = &cli.opts;
    let (body, code) = match &cli.cmd {
        Command::SampleGrid(g) => (sample_grid(g)?, EXIT_OK),
        Command::Verify => encode(verify(read_certificate(opts)?, opts)?)?,
        cmd => {
            let problem: ProblemFile = serde_json::from_str(&read_input(opts)?)?;
            let (value, code) = match (cmd, problem) {
                (Command::Membership, ProblemFile::Membership { point }) => {
                    encode(membership(&point)?)?
                }
                (Command::Mu, ProblemFile::MuValue { matrix, rel_tol }) => {
                    encode(mu(&matrix, rel_tol)?)?
                }
                (Command::SolveTetra, p @ ProblemFile::TetraInterp { .. }) => {
                    encode(solve_tetra_cmd(p, opts)?)?
                }
                (Command::SolveMu, p @ ProblemFile::MuSynthesis { .. }) => {
                    encode(solve_mu_cmd(p, opts)?)?
                }
                (
                    Command::Realize,
                    ProblemFile::Realize {
                        colligation,
                        points,
                    },
                ) => encode(realize(&colligation, &points)?)?,
                (
                    Command::Lift,
                    ProblemFile::Lift {
                        colligation,
                        points,
                    },
                ) => encode(lift(&colligation, &points, opts)?)?,
                (_, p) => {
                    return Err(CliError::Usage(format!(
                        "problem kind {:?} does not match the subcommand",
                        p.kind()
                    )))
                }
            };
            (value, code)
        }
    };
    write_output(opts.output.as_deref(), body.as_bytes())?;
    Ok(code)
}

fn encode<V: Serialize>((v, code): (V, i32)) -> Result<(String, i32), CliError> {
    Ok((to_json(&v)?, code))
}

fn to_json<V: Serialize>(v: &V) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn read_input(opts: &Options) -> Result<String, CliError> {
    let mut text = String::new();
    match opts.input.as_deref() {
        Some(p) if p != Path::new("-") => text = std::fs::read_to_string(p)?,
        _ => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

/// Accepts a bare certificate or a `{"kind": "verify", "certificate": …}` wrapper.
fn read_certificate(opts: &Options) -> Result<CertificateFile, CliError> {
    let value: serde_json::Value = serde_json::from_str(&read_input(opts)?)?;
    if value.get("status").is_some() {
        return Ok(serde_json::from_value(value)?);
    }
    match serde_json::from_value(value)? {
        ProblemFile::Verify { certificate } => Ok(*certificate),
        p => Err(CliError::Usage(format!(
            "expected a certificate, got kind {:?}",
            p.kind()
        ))),
    }
}

/// Writes to a temporary file beside `path` and renames it into place.
fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct MembershipOut {
    in_closed: bool,
    in_open: bool,
    #[serde(rename = "in_bE")]
    in_be: bool,
}

fn membership(point: &[Cx; 3]) -> Result<(MembershipOut, i32), CliError> {
    let x = to_point(point)?;
    let out = MembershipOut {
        in_closed: in_closed_tetrablock(&x),
        in_open: in_open_tetrablock(&x),
        in_be: in_distinguished_boundary(&x, MEMBERSHIP_TOL),
    };
    let code = if out.in_closed { EXIT_OK } else { EXIT_FALSE };
    Ok((out, code))
}

#[derive(Serialize)]
struct MuOut {
    mu: f64,
    rel_tol: f64,
}

fn mu(matrix: &Mat, rel_tol: Option<f64>) -> Result<(MuOut, i32), CliError> {
    let rel_tol = rel_tol.unwrap_or(DEFAULT_MU_REL_TOL);
    let a = to_matrix(matrix, 2, 2, "matrix")?;
    Ok((
        MuOut {
            mu: mu_diag(&a, rel_tol)?,
            rel_tol,
        },
        EXIT_OK,
    ))
}

fn search_config(opts: &Options) -> SearchConfig {
    SearchConfig {
        starts: opts.starts,
        max_iters: opts.max_iters,
        seed: opts.seed,
        tol: opts.tol,
    }
}

fn meta(opts: &Options, started: Instant) -> Meta {
    Meta {
        seed: opts.seed,
        starts: opts.starts,
        max_iters: opts.max_iters,
        tol: opts.tol,
        grid: opts.grid,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: started.elapsed().as_secs_f64(),
    }
}

fn exit_code(status: &str) -> i32 {
    match status {
        "Solvable" => EXIT_OK,
        "Infeasible" => EXIT_FALSE,
        _ => EXIT_UNKNOWN,
    }
}

fn tetra_problem(nodes: &[Cx], targets: &[[Cx; 3]]) -> Result<TetraProblem<f64>, CliError> {
    let targets = targets
        .iter()
        .map(to_point)
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(TetraProblem::new(to_cs(nodes)?, targets)?)
}

fn mu_problem(nodes: &[Cx], targets: &[Mat]) -> Result<MuProblem<f64>, CliError> {
    let targets = targets
        .iter()
        .map(|w| to_matrix(w, 2, 2, "target"))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(MuProblem::new(to_cs(nodes)?, targets)?)
}

/// Certificate document for a tetra certificate; `scale` adds the μ lift.
fn certificate_file(problem: ProblemFile, cert: &Certificate<f64>, meta: Meta) -> CertificateFile {
    let mut file = CertificateFile {
        status: cert.status().name().to_string(),
        problem,
        certificate: None,
        reason: None,
        search: None,
        report: None,
        meta,
    };
    match cert {
        Certificate::Solvable(s) => {
            file.certificate = Some(CertificateBody {
                b: from_cs(&s.params.b),
                c: from_cs(&s.params.c),
                branches: s
                    .params
                    .branches
                    .iter()
                    .map(|b| b.name().to_string())
                    .collect(),
                min_eig: s.min_eig,
                colligation: from_colligation(&s.colligation),
                scale_poly: None,
            });
            file.report = Some(ReportJson {
                tetra: tetra_report_json(&s.report),
                mu: None,
            });
        }
        Certificate::Infeasible(r) => file.reason = Some(reason_json(r)),
        Certificate::Unknown {
            best_objective,
            starts_used,
        } => {
            file.search = Some(SearchJson {
                best_objective: *best_objective,
                starts_used: *starts_used,
            })
        }
    }
    file
}

fn solve_tetra_cmd(
    problem: ProblemFile,
    opts: &Options,
) -> Result<(CertificateFile, i32), CliError> {
    let started = Instant::now();
    let ProblemFile::TetraInterp { nodes, targets } = &problem else {
        unreachable!("dispatch matched the kind")
    };
    let p = tetra_problem(nodes, targets)?;
    let cert = solve_tetra(&p, &search_config(opts))?;
    let file = certificate_file(problem, &cert, meta(opts, started));
    let code = exit_code(&file.status);
    Ok((file, code))
}

fn solve_mu_cmd(problem: ProblemFile, opts: &Options) -> Result<(CertificateFile, i32), CliError> {
    let started = Instant::now();
    let ProblemFile::MuSynthesis { nodes, targets } = &problem else {
        unreachable!("dispatch matched the kind")
    };
    let p = mu_problem(nodes, targets)?;
    let cert = solve_mu(&p, &search_config(opts))?;
    let mut file = certificate_file(problem, &cert.tetra, meta(opts, started));
    if let (Some(sol), Some(body), Some(report)) =
        (&cert.solution, &mut file.certificate, &mut file.report)
    {
        body.scale_poly = Some(from_cs(&sol.function.scale_poly));
        report.mu = Some(mu_report_json(&sol.report));
    }
    file.meta.wall_time_s = started.elapsed().as_secs_f64();
    let code = exit_code(&file.status);
    Ok((file, code))
}

#[derive(Serialize)]
struct RealizedValue {
    lambda: Cx,
    x: [Cx; 3],
    in_closed: bool,
}

#[derive(Serialize)]
struct BoundaryOut {
    samples: usize,
    max_defect: f64,
    skipped: usize,
}

#[derive(Serialize)]
struct RealizeOut {
    values: Vec<RealizedValue>,
    boundary: BoundaryOut,
}

fn realize(col: &ColligationJson, points: &[Cx]) -> Result<(RealizeOut, i32), CliError> {
    let x = tetra_from_colligation(&to_colligation(col)?)?;
    let mut values = Vec::with_capacity(points.len());
    for &lam in points {
        let v = x.eval(to_c(lam)?)?;
        values.push(RealizedValue {
            lambda: lam,
            x: from_point(&v),
            in_closed: in_closed_tetrablock(&v),
        });
    }
    let e = boundary_einner_check(&x, BOUNDARY_SAMPLES)?;
    let boundary = BoundaryOut {
        samples: BOUNDARY_SAMPLES,
        max_defect: e.max_defect,
        skipped: e.skipped,
    };
    Ok((RealizeOut { values, boundary }, EXIT_OK))
}

#[derive(Serialize)]
struct LiftValue {
    lambda: Cx,
    #[serde(rename = "F")]
    f: Mat,
}

#[derive(Serialize)]
struct LiftOut {
    degenerate: bool,
    quad_m: usize,
    values: Vec<LiftValue>,
}

fn lift(col: &ColligationJson, points: &[Cx], opts: &Options) -> Result<(LiftOut, i32), CliError> {
    let x = tetra_from_colligation(&to_colligation(col)?)?;
    let lifted = canonical_lift(&x, opts.quad)?;
    let mut values = Vec::with_capacity(points.len());
    for &lam in points {
        values.push(LiftValue {
            lambda: lam,
            f: from_matrix(&lifted.eval(to_c(lam)?)?),
        });
    }
    Ok((
        LiftOut {
            degenerate: lifted.is_degenerate(),
            quad_m: lifted.quad_m(),
            values,
        },
        EXIT_OK,
    ))
}

#[derive(Debug, Serialize)]
struct VerifyOut {
    status: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ReportJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

impl VerifyOut {
    fn failed(status: &str, message: String) -> Self {
        Self {
            status: status.to_string(),
            passed: false,
            report: None,
            message: Some(message),
        }
    }
}

fn same_reason(found: &Infeasibility<f64>, claimed: &ReasonJson) -> bool {
    match (found, claimed) {
        (Infeasibility::TargetOutside { node, .. }, ReasonJson::TargetOutside { node: n, .. }) => {
            node == n
        }
        (
            Infeasibility::ScalarPick { coordinate, .. },
            ReasonJson::ScalarPick { coordinate: c, .. },
        ) => coordinate == c,
        _ => false,
    }
}

/// Recomputes a certificate's claims from its embedded problem.
fn verify(file: CertificateFile, opts: &Options) -> Result<(VerifyOut, i32), CliError> {
    let status = file.status.as_str();
    let (tetra, mu) = match &file.problem {
        ProblemFile::TetraInterp { nodes, targets } => (tetra_problem(nodes, targets)?, None),
        ProblemFile::MuSynthesis { nodes, targets } => {
            let p = mu_problem(nodes, targets)?;
            (reduce_to_tetra(&p)?, Some(p))
        }
        p => {
            return Err(CliError::Usage(format!(
                "certificate for unsupported kind {:?}",
                p.kind()
            )))
        }
    };
    let out = match status {
        "Unknown" => {
            let out = VerifyOut::failed(status, "an Unknown certificate claims nothing".into());
            return Ok((out, EXIT_UNKNOWN));
        }
        "Infeasible" => {
            let claimed = file
                .reason
                .as_ref()
                .ok_or_else(|| CliError::Usage("Infeasible certificate without a reason".into()))?;
            match necessary_checks(&tetra)? {
                Some(found) if same_reason(&found, claimed) => VerifyOut {
                    status: status.into(),
                    passed: true,
                    report: None,
                    message: Some(found.to_string()),
                },
                Some(found) => {
                    VerifyOut::failed(status, format!("recomputed reason differs: {found}"))
                }
                None => VerifyOut::failed(status, "no necessary condition is violated".into()),
            }
        }
        "Solvable" => verify_solvable(&file, &tetra, mu.as_ref(), opts)?,
        other => return Err(CliError::Usage(format!("unknown status {other:?}"))),
    };
    let code = if out.passed { EXIT_OK } else { EXIT_FALSE };
    Ok((out, code))
}

fn verify_solvable(
    file: &CertificateFile,
    tetra: &TetraProblem<f64>,
    mu: Option<&MuProblem<f64>>,
    opts: &Options,
) -> Result<VerifyOut, CliError> {
    let body = file
        .certificate
        .as_ref()
        .ok_or_else(|| CliError::Usage("Solvable certificate without a body".into()))?;
    let colligation = match to_colligation(&body.colligation) {
        Ok(c) => c,
        Err(Error::ContractViolation(m)) => return Ok(VerifyOut::failed(&file.status, m)),
        Err(e) => return Err(e.into()),
    };
    let cert = SolvableCertificate {
        params: BCParams {
            b: to_cs(&body.b)?,
            c: to_cs(&body.c)?,
            branches: branches_from_names(&body.branches)?,
        },
        min_eig: body.min_eig,
        colligation: colligation.clone(),
        report: Default::default(),
    };
    let tetra_report =
        verify_certificate(tetra, &cert, opts.grid, BOUNDARY_SAMPLES, file.meta.tol)?;
    let mut passed = tetra_report.passed;
    let mut report = ReportJson {
        tetra: tetra_report_json(&tetra_report),
        mu: None,
    };
    if let Some(p) = mu {
        let scale_poly = body
            .scale_poly
            .as_ref()
            .ok_or_else(|| CliError::Usage("μ certificate without scale_poly".into()))?;
        let f = ScaledSchurFunction {
            chi: colligation,
            scale_poly: to_cs(scale_poly)?,
        };
        let r = verify_mu(p, &f, opts.grid)?;
        passed &= r.passed;
        report.mu = Some(mu_report_json(&r));
    }
    Ok(VerifyOut {
        status: file.status.clone(),
        passed,
        report: Some(report),
        message: None,
    })
}

fn sample_grid(g: &GridArgs) -> Result<String, CliError> {
    let rect = Rect {
        re: (g.re_min, g.re_max),
        im: (g.im_min, g.im_max),
        nx: g.nx,
        ny: g.ny,
    };
    let mut buf = Vec::new();
    match g.kind {
        GridKind::TetraSlice => {
            let vary = match g.vary.as_deref().unwrap_or("x1") {
                "x1" => 0,
                "x2" => 1,
                "x3" => 2,
                v => return Err(CliError::Usage(format!("tetra-slice cannot vary {v:?}"))),
            };
            grid::tetra_slice(&mut buf, &rect, TetraPoint::new(g.x1, g.x2, g.x3), vary)?;
        }
        GridKind::MuLevels => {
            let vary = match g.vary.as_deref().unwrap_or("a11") {
                "a11" => (0, 0),
                "a12" => (0, 1),
                "a21" => (1, 0),
                "a22" => (1, 1),
                v => return Err(CliError::Usage(format!("mu-levels cannot vary {v:?}"))),
            };
            let base = CMatrix::mat2(g.a11, g.a12, g.a21, g.a22);
            grid::mu_levels(&mut buf, &rect, &base, vary)?;
        }
    }
    String::from_utf8(buf).map_err(|e| CliError::Usage(e.to_string()))
}
