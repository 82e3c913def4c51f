//! `squeeze`: squeezing measures, analytic scans and Dicke transfer runs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use squeeze_core::dicke::OPTIMAL_ALPHA0;
use squeeze_core::{CatParity, DickeConfig, GridSpec, Plane, Spin};

mod commands;
mod config;
mod parse;
mod table;

use commands::{Body, Outcome};
use config::{FileConfig, Scalar};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or module preconditions. Exit 2.
    Invalid(String),
    /// Photon cutoff too small for the requested run. Exit 3.
    Truncation(String),
    /// `--check` violations. Exit 4.
    Check(Vec<String>),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Check(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Truncation(m) => f.write_str(m),
            CliError::Check(v) => {
                write!(f, "{} check(s) failed", v.len())?;
                for m in v {
                    write!(f, "\n  {m}")?;
                }
                Ok(())
            }
            CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<squeeze_core::Error> for CliError {
    fn from(e: squeeze_core::Error) -> Self {
        use squeeze_core::Error as E;
        match e {
            E::TruncationTooSmall { .. } => CliError::Truncation(format!("{e}; raise --n-max")),
            E::InvalidArgument(_) | E::InvalidSpin(_) | E::EtaOutOfRange { .. } | E::OddCatAtZero => {
                CliError::Invalid(e.to_string())
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlaneArg {
    Field,
    Atoms,
}

#[derive(Parser, Debug)]
#[command(name = "squeeze", version, about = "Light and atomic squeezing: measures, scans and Dicke transfer")]
struct Cli {
    /// TOML file with defaults; flags on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run the command's invariant checks; exit 4 if any fail.
    #[arg(long, global = true)]
    check: bool,
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Squeezing report for a single state.
    SqueezeEval(EvalArgs),
    /// Spin-cat scan over j and eta.
    Prop1(Prop1Args),
    /// Spin squeezing of spin cats approaching the bosonic cat value as j grows.
    Limit(LimitArgs),
    /// Squeezing transfer under the resonant Dicke Hamiltonian.
    Dicke(DickeArgs),
    /// Husimi Q function of the field or the atoms along a Dicke run.
    Qfunc(QfuncArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// fock:n, coherent:a, cat:a:+|-, dicke:j:n, scs:j:eta or spincat:j:eta:+|-
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args, Debug)]
struct Prop1Args {
    #[arg(long)]
    j_max: Option<String>,
    #[arg(long)]
    eta_step: Option<f64>,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Target |alpha|^2 of the bosonic cat.
    #[arg(long)]
    alpha2: Option<f64>,
    /// Comma-separated spins.
    #[arg(long, value_delimiter = ',')]
    j: Option<Vec<String>>,
    #[arg(long, allow_hyphen_values = true)]
    parity: Option<String>,
}

#[derive(Args, Debug)]
struct DickeArgs {
    #[arg(long)]
    atoms: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha0: Option<String>,
    /// start:end:steps or a comma-separated list; accepts pi.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Diagonalise the full Hamiltonian instead of the excitation blocks.
    #[arg(long)]
    no_blocks: bool,
}

#[derive(Args, Debug)]
struct QfuncArgs {
    #[arg(long)]
    atoms: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha0: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, value_enum)]
    plane: Option<PlaneArg>,
    /// lo:hi:points on both axes. The atom grid defaults to the field grid
    /// scaled by 1/sqrt(2j).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
}

const DEFAULT_J_MAX: &str = "25";
const DEFAULT_ETA_STEP: f64 = 0.05;
const DEFAULT_ALPHA2: f64 = 0.6392;
const DEFAULT_LIMIT_J: [u32; 6] = [5, 10, 20, 50, 100, 200];
const DEFAULT_ATOMS: u32 = 60;
const DEFAULT_DICKE_TAU: &str = "0:pi:200";
const DEFAULT_QFUNC_TAU: &str = "0,pi/2";

fn scalar_text(s: &Scalar) -> String {
    s.to_string()
}

fn dicke_config(
    atoms: u32,
    alpha0: &str,
    tau: &str,
    n_max: Option<usize>,
    lambda: Option<f64>,
    blocks: bool,
) -> Result<DickeConfig, CliError> {
    let mut cfg = DickeConfig::new(atoms, parse::complex(alpha0)?, parse::tau_list(tau)?);
    cfg.n_max = n_max;
    if let Some(l) = lambda {
        cfg.lambda = l;
    }
    cfg.use_blocks = blocks;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(Outcome, Format), CliError> {
    let file = match &cli.config {
        Some(p) => config::load(p)?,
        None => FileConfig::default(),
    };
    let file_format = match file.format.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => return Err(CliError::Invalid(format!("format must be csv or json, got '{other}'"))),
    };
    let format = cli.format.or(file_format);
    let check = cli.check || file.check.unwrap_or(false);

    let outcome = match &cli.command {
        Command::SqueezeEval(a) => {
            let sec = file.squeeze_eval.clone().unwrap_or_default();
            let state = a
                .state
                .clone()
                .or(sec.state)
                .ok_or_else(|| CliError::Invalid("--state is required".into()))?;
            let format = format.unwrap_or(Format::Json);
            let out = commands::squeeze_eval(&state, a.n_max.or(sec.n_max), format == Format::Json, check)?;
            return Ok((out, format));
        }
        Command::Prop1(a) => {
            let sec = file.prop1.clone().unwrap_or_default();
            let j_max = a.j_max.clone().or(sec.j_max.as_ref().map(scalar_text)).unwrap_or(DEFAULT_J_MAX.into());
            let j_max = parse::spin(&j_max)?;
            let eta_step = a.eta_step.or(sec.eta_step).unwrap_or(DEFAULT_ETA_STEP);
            commands::prop1(j_max, eta_step, check)?
        }
        Command::Limit(a) => {
            let sec = file.limit.clone().unwrap_or_default();
            let alpha2 = a.alpha2.or(sec.alpha2).unwrap_or(DEFAULT_ALPHA2);
            let spins: Vec<Spin> = match (&a.j, &sec.j) {
                (Some(js), _) => js.iter().map(|s| parse::spin(s)).collect::<Result<_, _>>()?,
                (None, Some(js)) => js.iter().map(|s| parse::spin(&scalar_text(s))).collect::<Result<_, _>>()?,
                (None, None) => DEFAULT_LIMIT_J.iter().map(|&j| Spin::from_two_j(2 * j)).collect(),
            };
            let parity = match a.parity.as_deref().or(sec.parity.as_deref()) {
                Some(p) => parse::parity(p)?,
                None => CatParity::Even,
            };
            commands::limit(alpha2, &spins, parity, check)?
        }
        Command::Dicke(a) => {
            let sec = file.dicke.clone().unwrap_or_default();
            let alpha0 = a.alpha0.clone().or(sec.alpha0.as_ref().map(scalar_text)).unwrap_or(OPTIMAL_ALPHA0.to_string());
            let tau = a.tau.clone().or(sec.tau).unwrap_or(DEFAULT_DICKE_TAU.into());
            let blocks = !(a.no_blocks || sec.no_blocks.unwrap_or(false));
            let cfg = dicke_config(
                a.atoms.or(sec.atoms).unwrap_or(DEFAULT_ATOMS),
                &alpha0,
                &tau,
                a.n_max.or(sec.n_max),
                a.lambda.or(sec.lambda),
                blocks,
            )?;
            commands::dicke(&cfg, &tau, check)?
        }
        Command::Qfunc(a) => {
            let sec = file.qfunc.clone().unwrap_or_default();
            let alpha0 = a.alpha0.clone().or(sec.alpha0.as_ref().map(scalar_text)).unwrap_or(OPTIMAL_ALPHA0.to_string());
            let tau = a.tau.clone().or(sec.tau).unwrap_or(DEFAULT_QFUNC_TAU.into());
            let plane = match (a.plane, sec.plane.as_deref()) {
                (Some(PlaneArg::Field), _) | (None, None | Some("field")) => Plane::FieldAlpha,
                (Some(PlaneArg::Atoms), _) | (None, Some("atoms")) => Plane::AtomEta,
                (None, Some(other)) => {
                    return Err(CliError::Invalid(format!("plane must be field or atoms, got '{other}'")))
                }
            };
            let cfg = dicke_config(
                a.atoms.or(sec.atoms).unwrap_or(DEFAULT_ATOMS),
                &alpha0,
                &tau,
                a.n_max.or(sec.n_max),
                None,
                true,
            )?;
            let grid = match a.grid.clone().or(sec.grid) {
                Some(g) => parse::grid(&g)?,
                None if plane == Plane::FieldAlpha => GridSpec::FIELD_DEFAULT,
                None => GridSpec::atoms_matching(&GridSpec::FIELD_DEFAULT, cfg.spin()),
            };
            commands::qfunc(&cfg, &tau, plane, &grid, check)?
        }
    };
    Ok((outcome, format.unwrap_or(Format::Csv)))
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SQUEEZE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("SQUEEZE_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Other(e.to_string()))
}

fn write_out(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Other(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Other(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| run(&cli)).and_then(|(outcome, format)| {
        let text = match (&outcome.body, format) {
            (Body::Json(s), _) => s.clone(),
            (Body::Table(t), Format::Csv) => t.to_csv(),
            (Body::Table(t), Format::Json) => t.to_json(),
        };
        write_out(&cli, &text)?;
        if outcome.violations.is_empty() {
            Ok(())
        } else {
            Err(CliError::Check(outcome.violations))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("squeeze: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
