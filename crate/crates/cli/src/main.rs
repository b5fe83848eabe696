use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fermi_core::certify::{certify, A1Mode, CertificateReport, CertifyError, CertifyOptions};
use fermi_core::exactnum::{parse_rational, BigRational};
use fermi_core::floquet::{dispersion, parse_spec, reduce_quotient, FloquetError, OperatorSpec};
use fermi_core::models::{decorated_model, lieb_model, random_potential, zd_model, ModelError, Potential};
use fermi_core::spectral::{band_functions, floquet_union, max_deviation, torus_spectrum, SpectralError};
use rand_chacha::rand_core::SeedableRng;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "fermi", version, about = "Floquet dispersion polynomials and Fermi variety certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum A1Flag {
    Auto,
    Attested,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an operator specification file.
    Validate { file: PathBuf },
    /// Dispersion polynomial P̃ and its quotient P.
    Dispersion { file: PathBuf },
    /// Component bound certificate for the Fermi variety.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = A1Flag::Auto)]
        a1: A1Flag,
        /// Specialize to a single energy, e.g. 7/2.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Compare a finite-torus spectrum with the union of Floquet fibers.
    Spectrum {
        file: PathBuf,
        /// Repetitions N1,...,Nd of the period cell.
        #[arg(long)]
        torus: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Catalog model constructors.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Band functions along a path in k-space, as CSV.
    Bands {
        file: PathBuf,
        /// Path vertices, e.g. "0,0;0.5,0;0.5,0.5". Defaults to 0 → (1/2,0,…,0).
        #[arg(long, allow_hyphen_values = true)]
        path: Option<String>,
        /// Points per path segment.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsAction {
    /// Write an OperatorSpec JSON file for a catalog model.
    Emit {
        #[arg(value_enum)]
        model: ModelKind,
        /// Period q1,...,qd.
        #[arg(long)]
        period: String,
        /// Lattice dimension (zd and decorated).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Cycle length (decorated).
        #[arg(long, default_value_t = 3)]
        nu: usize,
        /// Draw a random rational potential from --seed.
        #[arg(long)]
        random_potential: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Lieb,
    Decorated,
    Zd,
}

/// A failure with its exit status: 1 for invalid input, 2 for size limits.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<FloquetError> for Failure {
    fn from(e: FloquetError) -> Self {
        let code = if matches!(e, FloquetError::SizeLimitExceeded { .. }) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::SizeLimitExceeded { .. } => Failure {
                code: 2,
                message: e.to_string(),
            },
            SpectralError::Floquet(f) => f.into(),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Floquet(f) => f.into(),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::input(e.to_string())
    }
}

struct Output {
    text: String,
    /// Exit status when the command ran but its check failed.
    code: u8,
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, code: 0 })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<OperatorSpec, Failure> {
    parse_spec(&read(path)?).map_err(|v| {
        Failure::input(v.iter().map(|x| format!("violation: {x}")).collect::<Vec<_>>().join("\n"))
    })
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("{what}: expected comma-separated integers, got {s:?}")))
}

fn parse_path(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    s.split(';')
        .map(|p| p.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("path: expected points like 0,0;0.5,0, got {s:?}")))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes")
}

fn cmd_validate(file: &Path, format: Format) -> Result<Output, Failure> {
    match parse_spec(&read(file)?) {
        Ok(_) => ok("OK".to_string()),
        Err(v) => Ok(Output {
            text: match format {
                Format::Json => pretty(&json!({
                    "valid": false,
                    "violations": v.iter().map(|x| json!({"path": x.path, "message": x.message})).collect::<Vec<_>>(),
                })),
                Format::Text => v.iter().map(|x| format!("violation: {x}")).collect::<Vec<_>>().join("\n"),
            },
            code: 1,
        }),
    }
}

fn cmd_dispersion(file: &Path, format: Format) -> Result<Output, Failure> {
    let spec = load_spec(file)?;
    let pt = dispersion(&spec)?;
    let p = reduce_quotient(&pt, &spec.period)?;
    let lambda_degree = pt.lambda_degree().unwrap_or(0);
    ok(match format {
        Format::Json => pretty(&json!({
            "period": spec.period,
            "lambda_degree": lambda_degree,
            "twist_invariant": true,
            "ptilde": pt,
            "p": p,
            "ptilde_text": pt.to_string(),
            "p_text": p.display_in("x"),
        })),
        Format::Text => format!(
            "P̃(z) = {pt}\nP(x) = {}\nλ-degree: {lambda_degree}\ntwist invariance: verified for every generator of W",
            p.display_in("x")
        ),
    })
}

fn cmd_certify(file: &Path, format: Format, a1: A1Flag, lambda: Option<&str>) -> Result<Output, Failure> {
    let lambda: Option<BigRational> = lambda
        .map(|s| parse_rational(s).map_err(|e| Failure::input(format!("--lambda: {e}"))))
        .transpose()?;
    let spec = load_spec(file)?;
    let opts = CertifyOptions {
        a1_mode: match a1 {
            A1Flag::Auto => A1Mode::Auto,
            A1Flag::Attested => A1Mode::Attested,
        },
        lambda,
    };
    let report: CertificateReport = certify(&spec, &opts)?;
    ok(match format {
        Format::Json => report.to_json(),
        Format::Text => report.render_text(),
    })
}

fn cmd_spectrum(file: &Path, format: Format, torus: &str, tol: f64) -> Result<Output, Failure> {
    let n = parse_ints(torus, "--torus")?;
    if !(tol >= 0.0) {
        return Err(Failure::input("--tol must be a nonnegative number"));
    }
    let spec = load_spec(file)?;
    let direct = torus_spectrum(&spec, &n)?;
    let union = floquet_union(&spec, &n)?;
    let dev = max_deviation(&direct, &union);
    let pass = dev <= tol;
    ok(match format {
        Format::Json => pretty(&json!({
            "torus": n,
            "dimension": direct.len(),
            "max_deviation": dev,
            "tol": tol,
            "pass": pass,
        })),
        Format::Text => format!(
            "torus {n:?}, dimension {}: max deviation {dev:e} against tol {tol:e}: {}",
            direct.len(),
            if pass { "PASS" } else { "FAIL" }
        ),
    })
}

fn cmd_emit(kind: ModelKind, period: &str, dim: usize, nu: usize, random: bool, seed: u64) -> Result<Output, Failure> {
    let q = parse_ints(period, "--period")?;
    let orbits = match kind {
        ModelKind::Lieb => 3,
        ModelKind::Decorated => nu,
        ModelKind::Zd => 1,
    };
    let v = if random {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_potential(orbits, &q, &mut rng)
    } else {
        Potential::new()
    };
    let spec = match kind {
        ModelKind::Lieb => lieb_model(&q, &v)?,
        ModelKind::Decorated => decorated_model(dim, nu, &q, &v)?,
        ModelKind::Zd => zd_model(dim, &q, &v)?,
    };
    ok(spec.to_json())
}

fn cmd_bands(file: &Path, path: Option<&str>, samples: usize) -> Result<Output, Failure> {
    let path = path.map(parse_path).transpose()?;
    let spec = load_spec(file)?;
    let path = match path {
        Some(p) => p,
        None => {
            let mut end = vec![0.0; spec.dimension];
            end[0] = 0.5;
            vec![vec![0.0; spec.dimension], end]
        }
    };
    ok(band_functions(&spec, &path, samples)?.to_csv())
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        tmp.write_all(b"\n")?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(file, cli.format),
        Command::Dispersion { file } => cmd_dispersion(file, cli.format),
        Command::Certify { file, a1, lambda } => cmd_certify(file, cli.format, *a1, lambda.as_deref()),
        Command::Spectrum { file, torus, tol } => cmd_spectrum(file, cli.format, torus, *tol),
        Command::Models {
            action:
                ModelsAction::Emit {
                    model,
                    period,
                    dim,
                    nu,
                    random_potential,
                },
        } => cmd_emit(*model, period, *dim, *nu, *random_potential, cli.seed),
        Command::Bands { file, path, samples } => cmd_bands(file, path.as_deref(), *samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match &cli.out {
                Some(p) => {
                    if let Err(e) = write_atomic(p, &out.text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    // A closed pipe downstream is not an error of ours.
                    let _ = writeln!(std::io::stdout().lock(), "{}", out.text.trim_end());
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
