mod commands;
mod settings;
mod table;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use settings::Settings;

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_INDETERMINATE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(jensenlab::Error),
}

impl From<jensenlab::Error> for CliError {
    fn from(e: jensenlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use jensenlab::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::InvalidArgument(_) | E::HypothesisViolation(_) | E::JetTooShort { .. } | E::Io(_)) => {
                EXIT_USAGE
            }
            CliError::Core(E::MethodDisagreement { .. }) => EXIT_COUNTEREXAMPLE,
            CliError::Core(_) => EXIT_INDETERMINATE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Core(e @ jensenlab::Error::JetTooShort { needed, .. }) => {
                format!("{e}; increase --order to at least {needed}")
            }
            CliError::Core(e) => e.to_string(),
        }
    }
}

/// Certified experiments on Jensen polynomials.
#[derive(Parser, Debug)]
#[command(name = "jensenlab", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Working precision in bits
    #[arg(long, global = true)]
    prec: Option<String>,
    /// Highest jet order
    #[arg(long, global = true)]
    order: Option<String>,
    /// Ξ jet method: phi, factors or both
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Sector parameter: a number, `sqrt(r)` or `2^-1/2`
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Strip gap
    #[arg(long = "T", global = true)]
    t: Option<String>,
    /// Order exponent
    #[arg(long, global = true)]
    c: Option<String>,
    #[arg(long, global = true)]
    n1: Option<String>,
    /// Jensen degree, or a range `a..b`
    #[arg(long, global = true)]
    d: Option<String>,
    /// Derivative order, or a range `a..b`
    #[arg(long, global = true)]
    n: Option<String>,
    /// Polynomial degree, or a range `a..b`
    #[arg(long, global = true)]
    deg: Option<String>,
    /// Degree range of the hyperbolic factor
    #[arg(long = "deg-q", global = true)]
    deg_q: Option<String>,
    /// exact or ball
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Jet source: xi0, xi, exp, cos, quartic-cos
    #[arg(long, global = true)]
    source: Option<String>,
    /// Disk radius for the derivative-zero scan
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Taylor truncation degree for the derivative-zero scan
    #[arg(long, global = true)]
    trunc: Option<String>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<String>,
    /// Flat key=value file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Opts {
    fn flag_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("prec", &self.prec),
            ("order", &self.order),
            ("method", &self.method),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("delta", &self.delta),
            ("T", &self.t),
            ("c", &self.c),
            ("n1", &self.n1),
            ("d", &self.d),
            ("n", &self.n),
            ("deg", &self.deg),
            ("deg-q", &self.deg_q),
            ("mode", &self.mode),
            ("source", &self.source),
            ("radius", &self.radius),
            ("trunc", &self.trunc),
            ("out", &self.out),
            ("format", &self.format),
            ("cache-dir", &self.cache_dir),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the Taylor jet of Ξ at 0
    XiCoeffs,
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Scan Jensen polynomials or derivative zeros
    Scan {
        #[command(subcommand)]
        which: Scan,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Verify {
    /// Composition P(D)Q of a sector polynomial with a hyperbolic one
    T3,
    /// Even polynomials with zeros in a gapped strip
    T4,
    /// Jensen polynomial as a reversed composition
    Corollary,
    /// Degree bounds and strip constants
    Bounds,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Scan {
    /// Hyperbolicity grid over (n, d)
    Grid,
    /// Derivative zeros against the gapped strip
    Theorem2,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let result = Settings::layered(cli.opts.flag_map(), cli.opts.config.as_deref())
        .and_then(|s| Ok((s.run_config()?, s)))
        .and_then(|(cfg, s)| {
            let out = match cli.cmd {
                Command::XiCoeffs => commands::xi_coeffs(&cfg)?,
                Command::Verify { which } => commands::verify(which, &cfg, &s)?,
                Command::Scan { which } => commands::scan(which, &cfg, &s)?,
            };
            Ok((cfg, out))
        });
    let (cfg, out) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("jensenlab: {}", e.message());
            return e.exit_code();
        }
    };
    let text = out.table.render(cfg.format);
    let written = match &cfg.output_path {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("jensenlab: {e}");
        return EXIT_USAGE;
    }
    for line in &out.diagnostics {
        eprintln!("{line}");
    }
    out.exit
}
