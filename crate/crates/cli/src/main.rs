mod descriptor;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use svpc::certify::{certify, CertifyOptions, Verdict};
use svpc::conjugate::{
    auto_beta_grid, cross_check, sample_interior_nodes, sv_conjugate, ConjugationConfig, DEFAULT_BETA_COUNT_2D,
    DEFAULT_BETA_COUNT_3D,
};
use svpc::error::Error;
use svpc::gridfn::{DimKind, GridFunction, GridSpec};
use svpc::lifting::lifted_dim;
use svpc::models::{catalog, EnergyModel};
use svpc::symmetry::check_compatible;

const EXIT_BAD_INPUT: u8 = 10;
const EXIT_INCOMPATIBLE: u8 = 11;
const EXIT_INTERNAL: u8 = 12;

#[derive(Parser)]
#[command(
    name = "svpc",
    version,
    about = "Certify singular value polyconvexity of isotropic energies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether Phi equals its envelope; exit 0 SVPC, 1 NotSVPC, 2 Inconclusive.
    Certify(CertifyArgs),
    /// Write the envelope Phi^∧∨ on the nu-grid.
    Envelope(EnvelopeArgs),
    /// Write the conjugate Phi^∧ on the beta-grid.
    Conjugate(ConjugateArgs),
    /// List the model catalog.
    Models {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Source {
    /// Catalog model name.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    model: Option<String>,
    /// Model parameters as a JSON object, e.g. '{"mu": 2}'.
    #[arg(long, requires = "model")]
    params: Option<String>,
    /// Grid function JSON file sampled on a nu-grid.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Spatial dimension (2 or 3); taken from the file with --input.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// nu-grid as min:max:count (one per axis, comma separated) or @file.
    #[arg(long, allow_hyphen_values = true)]
    nu_grid: Option<String>,
    /// beta-grid descriptor; chosen from the samples when omitted.
    #[arg(long, allow_hyphen_values = true)]
    beta_grid: Option<String>,
    /// Nodes per axis of an automatic beta-grid.
    #[arg(long)]
    beta_count: Option<usize>,
}

#[derive(Args)]
struct Tolerances {
    /// Defaults to 5 h^2, h the largest nu spacing.
    #[arg(long)]
    certify_tol: Option<f64>,
    /// Defaults to 10 certify-tol.
    #[arg(long)]
    refute_margin: Option<f64>,
    /// Rounds that widen an automatic beta-grid.
    #[arg(long, default_value_t = 3)]
    widen_rounds: usize,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    tol: Tolerances,
    /// Certificate JSON destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Diagnostics JSON: conjugation report and the primal/dual cross-check.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Interior nodes compared against the LP envelope (2-D only).
    #[arg(long, default_value_t = 0)]
    cross_check: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    tol: Tolerances,
    /// Envelope grid JSON destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ConjugateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IncompatibleGrid(_) | Error::NotInvariant { .. } => EXIT_INCOMPATIBLE,
            Error::LpIterationCap(_) | Error::SvdNoConvergence(_) => EXIT_INTERNAL,
            _ => EXIT_BAD_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_BAD_INPUT,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

fn load(source: &Source) -> Result<GridFunction, Failure> {
    if let Some(path) = &source.input {
        if source.nu_grid.is_some() {
            return Err(Failure {
                code: EXIT_BAD_INPUT,
                message: "--nu-grid cannot be combined with --input".into(),
            });
        }
        let phi = GridFunction::read_json(path)?;
        check_compatible(phi.spec())?;
        return Ok(phi);
    }
    let name = source.model.as_deref().expect("clap requires --model or --input");
    let model = EnergyModel::from_json(name, source.dim, source.params.as_deref().unwrap_or("{}"))?;
    let desc = source
        .nu_grid
        .as_deref()
        .unwrap_or(if source.dim == 2 { "-2:2:41" } else { "-2:2:9" });
    let grid = descriptor::expand(desc, DimKind::Nu, source.dim)?;
    Ok(GridFunction::build(grid, |nu| model.phi(nu))?)
}

fn fixed_beta_grid(source: &Source, dim: usize) -> Result<Option<GridSpec>, Failure> {
    match &source.beta_grid {
        Some(desc) => Ok(Some(descriptor::expand(desc, DimKind::Beta, lifted_dim(dim)?)?)),
        None => Ok(None),
    }
}

fn beta_count(source: &Source, dim: usize) -> usize {
    source.beta_count.unwrap_or(if dim == 2 {
        DEFAULT_BETA_COUNT_2D
    } else {
        DEFAULT_BETA_COUNT_3D
    })
}

fn options(source: &Source, tol: &Tolerances, phi: &GridFunction) -> Result<CertifyOptions, Failure> {
    let dim = phi.spec().dim();
    let mut o = CertifyOptions::for_grid(phi.spec());
    if let Some(t) = tol.certify_tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure {
                code: EXIT_BAD_INPUT,
                message: format!("--certify-tol must be positive, got {t}"),
            });
        }
        o.certify_tol = t;
        o.refute_margin = 10.0 * t;
    }
    if let Some(m) = tol.refute_margin {
        if !(m >= o.certify_tol && m.is_finite()) {
            return Err(Failure {
                code: EXIT_BAD_INPUT,
                message: format!("--refute-margin must be finite and at least certify-tol, got {m}"),
            });
        }
        o.refute_margin = m;
    }
    o.beta_grid = fixed_beta_grid(source, dim)?;
    o.beta_count = beta_count(source, dim);
    o.widen_rounds = tol.widen_rounds;
    Ok(o)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn write_csv(f: &GridFunction, path: &Path) -> Result<(), Failure> {
    let file = std::fs::File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    f.write_csv(&mut w).map_err(|e| io_failure(path, e))?;
    w.flush().map_err(|e| io_failure(path, e))
}

fn cmd_certify(args: &CertifyArgs) -> Result<u8, Failure> {
    let phi = load(&args.source)?;
    let opts = options(&args.source, &args.tol, &phi)?;
    let (cert, env) = certify(&phi, &opts)?;
    emit(&pretty(&cert), args.out.as_deref())?;
    if let Some(path) = &args.report {
        let mut doc = json!({ "conjugation": env.report });
        if args.cross_check > 0 && phi.spec().dim() == 2 {
            let config = ConjugationConfig::new(
                phi.spec().clone(),
                env.conjugate.values.spec().clone(),
                opts.certify_tol,
            )?;
            let nodes = sample_interior_nodes(&phi, args.cross_check, args.seed);
            let report = cross_check(&phi, &config, &nodes, 10.0 * opts.certify_tol)?;
            doc["cross_check"] = serde_json::to_value(&report).expect("report serializes");
            doc["seed"] = json!(args.seed);
        }
        emit(&pretty(&doc), Some(path))?;
    }
    Ok(match cert.verdict {
        Verdict::Svpc => 0,
        Verdict::NotSvpc => 1,
        Verdict::Inconclusive => 2,
    })
}

fn cmd_envelope(args: &EnvelopeArgs) -> Result<u8, Failure> {
    let phi = load(&args.source)?;
    let opts = options(&args.source, &args.tol, &phi)?;
    let (cert, env) = certify(&phi, &opts)?;
    emit(&env.envelope.to_json_string(), args.out.as_deref())?;
    if let Some(path) = &args.report {
        let doc = json!({
            "max_deviation": env.report.max_gap,
            "conjugation": env.report,
            "certificate": cert,
        });
        emit(&pretty(&doc), Some(path))?;
    }
    if let Some(path) = &args.csv {
        write_csv(&env.envelope, path)?;
    }
    Ok(0)
}

fn cmd_conjugate(args: &ConjugateArgs) -> Result<u8, Failure> {
    let phi = load(&args.source)?;
    let dim = phi.spec().dim();
    let beta = match fixed_beta_grid(&args.source, dim)? {
        Some(g) => g,
        None => auto_beta_grid(&phi, beta_count(&args.source, dim), 0.25)?,
    };
    let conj = sv_conjugate(&phi, &beta)?;
    emit(&conj.to_json_string(), args.out.as_deref())?;
    if let Some(path) = &args.csv {
        write_csv(&conj, path)?;
    }
    Ok(0)
}

fn cmd_models(as_json: bool) -> Result<u8, Failure> {
    let models = catalog();
    if as_json {
        emit(&pretty(&models), None)?;
        return Ok(0);
    }
    let mut text = String::new();
    for m in &models {
        let dims: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
        text += &format!(
            "{}  (d = {}; finite_everywhere {}, det_barrier {}, known_svpc {})\n    {}\n",
            m.name,
            dims.join(", "),
            m.finite_everywhere,
            m.det_barrier,
            m.known_svpc.as_str(),
            m.description
        );
        for p in &m.params {
            text += &format!("    {} = {}: {}\n", p.name, p.default, p.description);
        }
    }
    emit(text.trim_end(), None)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Envelope(a) => cmd_envelope(a),
        Command::Conjugate(a) => cmd_conjugate(a),
        Command::Models { json } => cmd_models(*json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
