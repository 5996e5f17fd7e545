//! Batch front end: zero tables, mode evaluation/export, field
//! decomposition, series resolvents, and streamline tracing.
//!
//! Exit codes: 0 success, 2 resonant but compatible solve, 3 incompatible
//! resonance, 1 any other error.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use curlball::ballquad::BallQuadrature;
use curlball::eigenbasis::{Family, ModeIndex, VectorMode};
use curlball::fieldio::{self, GridSpec, SampledField};
use curlball::geometry::cartesian_to_spherical;
use curlball::solver::{solve_curl, solve_graddiv, ResolventTolerances};
use curlball::spectral::{analyze_samples, synthesize, Basis, SpectralCoefficients};
use curlball::specfun::{zeros_psi, zeros_psi_prime};
use curlball::trace::trace_streamline;

#[derive(Parser)]
#[command(name = "curlball", version, about = "Curl and grad-div eigenfields on a ball")]
struct Cli {
    /// TOML config file (key = value); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Ball radius.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Spectral cutoff N of the truncation lattice.
    #[arg(long, global = true)]
    truncation: Option<f64>,
    /// Radial quadrature order.
    #[arg(long, global = true)]
    nr: Option<usize>,
    /// Colatitude quadrature order.
    #[arg(long, global = true)]
    ntheta: Option<usize>,
    /// Longitude quadrature order.
    #[arg(long, global = true)]
    nphi: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroFamilyArg {
    /// Zeros of psi_n (the curl spectrum).
    Psi,
    /// Zeros of psi_n' (the grad-div spectrum).
    PsiPrime,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    GradDiv,
    CurlPlus,
    CurlMinus,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::GradDiv => Family::GradDiv,
            FamilyArg::CurlPlus => Family::CurlPlus,
            FamilyArg::CurlMinus => Family::CurlMinus,
        }
    }
}

#[derive(Args)]
struct ModeSelector {
    #[arg(long)]
    family: FamilyArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    k: i32,
}

impl ModeSelector {
    fn index(&self) -> curlball::Result<ModeIndex> {
        ModeIndex::new(self.family.into(), self.n, self.m, self.k)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFormat {
    Csv,
    Vtk,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate zeros of psi_n or psi_n' as TSV (n, m, z).
    Zeros {
        #[arg(long)]
        family: ZeroFamilyArg,
        /// Largest degree n (all degrees 0..=n are printed).
        #[arg(long)]
        n: u32,
        /// Number of zeros per degree.
        #[arg(long)]
        m: u32,
    },
    /// Inspect or sample a single eigenfield.
    Mode {
        #[command(subcommand)]
        action: ModeCmd,
    },
    /// Decompose a sampled field file into basis coefficients.
    Decompose {
        /// Field file (CSV or JSON) sampled on the spherical product grid
        /// matching the configured quadrature orders.
        #[arg(long)]
        input: PathBuf,
    },
    /// Solve rot u + lambda u = f or grad div u + lambda u = f.
    Solve {
        #[arg(long)]
        op: SolveOp,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Coefficient JSON of the right-hand side.
        #[arg(long)]
        input: PathBuf,
    },
    /// Integrate a streamline of a mode or of a synthesized field.
    Trace {
        #[command(flatten)]
        mode: Option<ModeSelector>,
        /// Coefficient JSON to synthesize the field from (alternative to a
        /// mode index).
        #[arg(long)]
        coeffs: Option<PathBuf>,
        /// Seed point "x,y,z".
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seed: Vec<f64>,
        /// Fixed integration step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Total integration time.
        #[arg(long, default_value_t = 10.0)]
        time: f64,
    },
}

#[derive(Subcommand)]
enum ModeCmd {
    /// Print mode metadata as JSON.
    Info {
        #[command(flatten)]
        mode: ModeSelector,
    },
    /// Sample the mode on a Cartesian box grid.
    Eval {
        #[command(flatten)]
        mode: ModeSelector,
        /// Grid resolution "nx,ny,nz".
        #[arg(long, value_delimiter = ',', default_values_t = [17, 17, 17])]
        grid: Vec<usize>,
        #[arg(long, value_enum, default_value_t = EvalFormat::Csv)]
        format: EvalFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveOp {
    Curl,
    Graddiv,
}

/// Run parameters; every field has a default and may come from the TOML
/// config file or the command line.
#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    radius: f64,
    truncation: f64,
    nr: usize,
    ntheta: usize,
    nphi: usize,
    tol_res: f64,
    tol_compat: f64,
    seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            radius: 1.0,
            truncation: 8.0,
            nr: 64,
            ntheta: 64,
            nphi: 128,
            tol_res: 1e-9,
            tol_compat: 1e-8,
            seed: 0,
        }
    }
}

impl RunConfig {
    fn load(cli: &Cli) -> Result<RunConfig, CliError> {
        let mut cfg = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(r) = cli.radius {
            cfg.radius = r;
        }
        if let Some(n) = cli.truncation {
            cfg.truncation = n;
        }
        if let Some(v) = cli.nr {
            cfg.nr = v;
        }
        if let Some(v) = cli.ntheta {
            cfg.ntheta = v;
        }
        if let Some(v) = cli.nphi {
            cfg.nphi = v;
        }
        if !(cfg.radius > 0.0 && cfg.truncation > 0.0 && cfg.nr > 0 && cfg.ntheta > 0
            && cfg.nphi > 0)
        {
            return Err(CliError::Other("config values must be positive".into()));
        }
        Ok(cfg)
    }

    fn tolerances(&self) -> ResolventTolerances {
        ResolventTolerances {
            res_base: self.tol_res,
            compat_base: self.tol_compat,
        }
    }
}

enum CliError {
    Lib(curlball::Error),
    Other(String),
}

impl From<curlball::Error> for CliError {
    fn from(e: curlball::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // exit code 2 is reserved for resonant-but-compatible solves; usage
    // errors exit 1 instead of clap's default 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Lib(curlball::Error::Incompatible {
            lambda,
            residual,
            modes,
        })) => {
            eprintln!(
                "error: right-hand side incompatible at resonance lambda = {lambda}: max blocked coefficient {residual:e} on modes {modes:?}"
            );
            ExitCode::from(3)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::load(cli)?;
    match &cli.cmd {
        Cmd::Zeros { family, n, m } => cmd_zeros(cli, *family, *n, *m),
        Cmd::Mode { action } => cmd_mode(cli, &cfg, action),
        Cmd::Decompose { input } => cmd_decompose(cli, &cfg, input),
        Cmd::Solve { op, lambda, input } => cmd_solve(cli, &cfg, *op, *lambda, input),
        Cmd::Trace {
            mode,
            coeffs,
            seed,
            step,
            time,
        } => cmd_trace(cli, &cfg, mode, coeffs, seed, *step, *time),
    }
}

fn cmd_zeros(cli: &Cli, family: ZeroFamilyArg, n_max: u32, m_max: u32) -> Result<ExitCode, CliError> {
    if m_max < 1 {
        return Err(CliError::Other("--m must be >= 1".into()));
    }
    let mut body = String::from("n\tm\tz\n");
    for n in 0..=n_max {
        let zs = match family {
            ZeroFamilyArg::Psi => zeros_psi(n, m_max as usize)?,
            ZeroFamilyArg::PsiPrime => zeros_psi_prime(n, m_max as usize)?,
        };
        for (i, z) in zs.iter().enumerate() {
            body.push_str(&format!("{n}\t{}\t{:.14e}\n", i + 1, z));
        }
    }
    emit(&cli.out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mode(cli: &Cli, cfg: &RunConfig, action: &ModeCmd) -> Result<ExitCode, CliError> {
    match action {
        ModeCmd::Info { mode } => {
            let m = VectorMode::build(mode.index()?, cfg.radius)?;
            let mut body = serde_json::to_string_pretty(&m.metadata())
                .expect("metadata serializes");
            body.push('\n');
            emit(&cli.out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        ModeCmd::Eval { mode, grid, format } => {
            if grid.len() != 3 {
                return Err(CliError::Other("--grid needs exactly nx,ny,nz".into()));
            }
            let m = VectorMode::build(mode.index()?, cfg.radius)?;
            let spec = GridSpec::CartesianBox {
                nx: grid[0],
                ny: grid[1],
                nz: grid[2],
                radius: cfg.radius,
            };
            match format {
                EvalFormat::Vtk => {
                    let path = cli.out.clone().ok_or_else(|| {
                        CliError::Other("--out is required for VTK output".into())
                    })?;
                    fieldio::export_vtk(spec, |p| m.eval_cartesian(p), &path)?;
                }
                EvalFormat::Csv => {
                    // CSV carries only in-ball points (the field file contract)
                    let mut points = Vec::new();
                    let mut values = Vec::new();
                    for p in spec.points() {
                        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                        if r <= cfg.radius {
                            values.push(m.eval_cartesian(p));
                            points.push(p);
                        }
                    }
                    let field =
                        SampledField::new(cfg.radius, points, values, BTreeMap::new())?;
                    match &cli.out {
                        Some(path) => fieldio::write_field(&field, path)?,
                        None => {
                            let mut s = String::from("x,y,z,vx,vy,vz\n");
                            for (p, v) in field.points.iter().zip(&field.values) {
                                s.push_str(&format!(
                                    "{},{},{},{},{},{}\n",
                                    p[0], p[1], p[2], v[0], v[1], v[2]
                                ));
                            }
                            emit(&None, &s)?;
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_decompose(cli: &Cli, cfg: &RunConfig, input: &Path) -> Result<ExitCode, CliError> {
    let field = fieldio::read_field(input)?;
    let q = BallQuadrature::build(cfg.radius, cfg.nr, cfg.ntheta, cfg.nphi);
    let samples = fieldio::to_quadrature_samples(&field, &q)?;
    let basis = Basis::build(cfg.radius, cfg.truncation)?;
    let coeffs = analyze_samples(&samples, &basis, &q);
    let (a, b) = coeffs.split();
    eprintln!("total_norm2 = {}", coeffs.norm_sq());
    eprintln!("potential_norm2 = {}", a.norm_sq());
    eprintln!("solenoidal_norm2 = {}", b.norm_sq());
    eprintln!("sobolev_s1 = {}", coeffs.sobolev_diagnostic(1)?);
    eprintln!("sobolev_s2 = {}", coeffs.sobolev_diagnostic(2)?);
    let mut body = coeffs.to_json();
    body.push('\n');
    emit(&cli.out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    cli: &Cli,
    cfg: &RunConfig,
    op: SolveOp,
    lambda: f64,
    input: &Path,
) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Other(format!("{}: {e}", input.display())))?;
    let c_f = SpectralCoefficients::from_json(&text)?;
    let tol = cfg.tolerances();
    let report = match op {
        SolveOp::Curl => solve_curl(&c_f, lambda, &tol)?,
        SolveOp::Graddiv => solve_graddiv(&c_f, lambda, &tol)?,
    };
    let mut body = report.solution.to_json();
    body.push('\n');
    emit(&cli.out, &body)?;
    if report.resonant {
        eprintln!(
            "resonant at lambda = {lambda}; kernel modes {:?} dropped (minimal-norm solution, compatibility residual {:e})",
            report.offending_modes, report.compatibility_residual
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(
    cli: &Cli,
    cfg: &RunConfig,
    mode: &Option<ModeSelector>,
    coeffs: &Option<PathBuf>,
    seed: &[f64],
    step: f64,
    time: f64,
) -> Result<ExitCode, CliError> {
    if seed.len() != 3 {
        return Err(CliError::Other("--seed needs exactly x,y,z".into()));
    }
    if step <= 0.0 || time <= 0.0 {
        return Err(CliError::Other("--step and --time must be positive".into()));
    }
    let x0 = [seed[0], seed[1], seed[2]];
    let result = match (mode, coeffs) {
        (Some(sel), None) => {
            let m = VectorMode::build(sel.index()?, cfg.radius)?;
            trace_streamline(|p| m.eval_cartesian(p), x0, step, time, cfg.radius)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
            let c = SpectralCoefficients::from_json(&text)?;
            let basis = Basis::build(cfg.radius, c.cutoff)?;
            trace_streamline(
                |p| {
                    let (r, t, ph) = cartesian_to_spherical(p);
                    synthesize(&basis, &c, r, t, ph).to_cartesian(t, ph)
                },
                x0,
                step,
                time,
                cfg.radius,
            )?
        }
        _ => {
            return Err(CliError::Other(
                "give either a mode index (--family/--n/--m/--k) or --coeffs".into(),
            ))
        }
    };
    let mut body = String::from("x,y,z\n");
    for p in &result.points {
        body.push_str(&format!("{},{},{}\n", p[0], p[1], p[2]));
    }
    emit(&cli.out, &body)?;
    if result.exited {
        eprintln!(
            "trajectory left the ball after {} steps (max |x| = {})",
            result.points.len() - 1,
            result.max_radius
        );
    } else {
        eprintln!("max |x| = {}", result.max_radius);
    }
    Ok(ExitCode::SUCCESS)
}
