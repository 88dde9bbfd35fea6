use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ybalg::special::MAX_NOME;
use ybalg::{Regime, C64};
use ybalg_cli::compute::{compute_sn, compute_z, ComputeInput, Method};
use ybalg_cli::config::Overrides;
use ybalg_cli::{
    parse_complex_list, parse_complex_pair, run, ConfigFile, RunConfig, EXIT_CONFIG, EXIT_FAIL,
    EXIT_PASS,
};

#[derive(Parser)]
#[command(
    name = "ybalg",
    version,
    about = "Numerical checks of Yang-Baxter algebra functional relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and stream JSON-lines report records.
    Run(RunArgs),
    /// Evaluate a single partition function or scalar product.
    #[command(subcommand)]
    Compute(ComputeCommand),
}

#[derive(Args)]
struct ModelArgs {
    /// Chain length.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Crossing parameter as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Elliptic nome as RE,IM.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "trig")]
    nome: Option<String>,
    /// Use the six-vertex (trigonometric) weights.
    #[arg(long)]
    trig: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<String>,
    /// Comma-separated check names.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores; 1 = bit-stable output).
    #[arg(long)]
    threads: Option<usize>,
    /// Write records here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    /// Inhomogeneities as RE,IM;RE,IM;...
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Seed for any parameter not given explicitly.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Subcommand)]
enum ComputeCommand {
    /// Domain-wall partition function.
    Z {
        #[command(flatten)]
        common: PointArgs,
        /// Spectral parameters as RE,IM;RE,IM;...
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Dynamical parameter as RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Six-vertex scalar product of n B- and n C-operators.
    Sn {
        #[command(flatten)]
        common: PointArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "lambda-b", allow_hyphen_values = true)]
        lambda_b: Option<String>,
        #[arg(long = "lambda-c", allow_hyphen_values = true)]
        lambda_c: Option<String>,
    },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn run_command(args: RunArgs) -> ExitCode {
    let file = match &args.config {
        Some(p) => match ConfigFile::from_path(p) {
            Ok(f) => f,
            Err(e) => return config_error(e),
        },
        None => ConfigFile::default(),
    };
    let ov = Overrides {
        l: args.model.l,
        gamma: args.model.gamma,
        nome: args.model.nome,
        trig: args.model.trig,
        seed: args.seed,
        samples: args.samples,
        threads: args.threads,
        checks: args.checks,
    };
    let cfg = match RunConfig::resolve(file, &ov) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let result = match &args.output {
        Some(path) => match File::create(path) {
            Ok(f) => run(&cfg, &mut BufWriter::new(f)),
            Err(e) => return config_error(format!("cannot create {}: {e}", path.display())),
        },
        None => run(&cfg, &mut io::stdout().lock()),
    };
    match result {
        Ok(summary) => {
            eprintln!("{} records, {} failed", summary.records, summary.failed);
            ExitCode::from(if summary.all_passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        Err(e) => {
            eprintln!("error: writing report: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn compute_input(common: &PointArgs, l: usize) -> Result<ComputeInput, String> {
    let m = &common.model;
    let gamma = match &m.gamma {
        Some(g) => parse_complex_pair(g).map_err(|e| format!("--gamma: {e}"))?,
        None => C64::new(0.41, 0.07),
    };
    let regime = if m.trig {
        Regime::Trigonometric
    } else {
        let nome = match &m.nome {
            Some(p) => parse_complex_pair(p).map_err(|e| format!("--nome: {e}"))?,
            None => C64::new(0.2, 0.0),
        };
        if nome.norm() >= MAX_NOME {
            return Err(format!("--nome: |nome| must be below {MAX_NOME}"));
        }
        Regime::elliptic(nome).map_err(|e| format!("--nome: {e}"))?
    };
    let mu = common
        .mu
        .as_deref()
        .map(parse_complex_list)
        .transpose()
        .map_err(|e| format!("--mu: {e}"))?;
    Ok(ComputeInput {
        l,
        gamma,
        regime,
        mu,
        seed: common.seed,
    })
}

fn compute_command(cmd: ComputeCommand) -> ExitCode {
    let parsed = (|| -> Result<_, String> {
        let opt_list = |s: &Option<String>, flag: &str| {
            s.as_deref()
                .map(parse_complex_list)
                .transpose()
                .map_err(|e| format!("{flag}: {e}"))
        };
        Ok(match cmd {
            ComputeCommand::Z {
                common,
                lambda,
                theta,
            } => {
                let lambda = opt_list(&lambda, "--lambda")?;
                let theta = theta
                    .as_deref()
                    .map(parse_complex_pair)
                    .transpose()
                    .map_err(|e| format!("--theta: {e}"))?;
                let l = common
                    .model
                    .l
                    .or(lambda.as_ref().map(Vec::len))
                    .unwrap_or(2);
                let inp = compute_input(&common, l)?;
                compute_z(&inp, common.method, lambda, theta)
            }
            ComputeCommand::Sn {
                common,
                n,
                lambda_b,
                lambda_c,
            } => {
                let b = opt_list(&lambda_b, "--lambda-b")?;
                let c = opt_list(&lambda_c, "--lambda-c")?;
                let l = common.model.l.unwrap_or(n.max(1));
                let inp = compute_input(&common, l)?;
                compute_sn(&inp, common.method, n, b, c)
            }
        })
    })();
    match parsed {
        Err(e) => config_error(e),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
        Ok(Ok(v)) => {
            let mut out = io::stdout().lock();
            let _ = writeln!(out, "{v}");
            ExitCode::from(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Compute(cmd) => compute_command(cmd),
    }
}
