use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ldplpp::harness::{
    cmd_asymptote, cmd_converge, cmd_exact, cmd_simulate, cmd_uptail, cmd_verify, Command, Fault, OutputFormat,
    Params, RunConfig, DEFAULT_DIGITS,
};
use ldplpp::Result;

#[derive(Parser, Debug)]
#[command(name = "ldplpp", version, about = "Exact and asymptotic tails of geometric last passage percolation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// P(G_{n,m} <= ell) by the Schur, Jacobi, Meixner or TUE routes
    Exact(Flags),
    /// Run the duality, identity, quadrature, soft-edge and normalization suites
    Verify(Flags),
    /// Exact log P(G <= delta N) against the lower-tail expansion
    Converge(Flags),
    /// Exact log P(G >= delta N) against the upper-tail expansion
    Uptail(Flags),
    /// Monte Carlo last passage times
    Simulate(Flags),
    /// Coefficients of the tail expansion on the side of omega that delta lies
    Asymptote(Flags),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum InjectFault {
    TueConstant,
}

#[derive(Args, Debug)]
struct Flags {
    /// q^2 as p/q or a decimal
    #[arg(long)]
    q2: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    nshift: i64,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long = "N-list", value_delimiter = ',')]
    n_list: Vec<u32>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// schur, jue, meixner, tue or all
    #[arg(long)]
    route: Option<String>,
    #[arg(long, default_value_t = 40)]
    bins: usize,
    /// counts of each value of G instead of the histogram
    #[arg(long)]
    raw: bool,
    /// working precision in decimal digits
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<InjectFault>,
}

fn config(command: Command, f: &Flags) -> RunConfig {
    let params = Params {
        q2: f.q2.clone(),
        gamma: f.gamma.clone(),
        delta: f.delta.clone(),
        nshift: f.nshift,
        n: f.n,
        m: f.m,
        ell: f.ell,
        n_list: f.n_list.clone(),
        trials: f.trials,
        seed: f.seed,
        route: f.route.clone(),
        bins: f.bins,
        raw: f.raw,
    };
    RunConfig {
        command,
        params,
        precision_digits: f.precision,
        format: match f.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        out: f.out.clone(),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let (command, flags) = match &cli.command {
        Cmd::Exact(f) => (Command::Exact, f),
        Cmd::Verify(f) => (Command::Verify, f),
        Cmd::Converge(f) => (Command::Converge, f),
        Cmd::Uptail(f) => (Command::Uptail, f),
        Cmd::Simulate(f) => (Command::Simulate, f),
        Cmd::Asymptote(f) => (Command::Asymptote, f),
    };
    let cfg = config(command, flags);
    match command {
        Command::Exact => cmd_exact(&cfg)?.emit(&cfg)?,
        Command::Converge => cmd_converge(&cfg)?.emit(&cfg)?,
        Command::Uptail => cmd_uptail(&cfg)?.emit(&cfg)?,
        Command::Asymptote => cmd_asymptote(&cfg)?.emit(&cfg)?,
        Command::Simulate => cmd_simulate(&cfg)?.emit(&cfg)?,
        Command::Verify => {
            let fault = flags.inject_fault.map(|InjectFault::TueConstant| Fault::PerturbTueConstant);
            let report = cmd_verify(&cfg, fault)?;
            report.to_table(&cfg).emit(&cfg)?;
            if !report.passed {
                for c in report.checks.iter().filter(|c| c.status != ldplpp::harness::CheckStatus::Pass) {
                    eprintln!("FAILED {}: deviation {:e} > {:e}", c.name, c.max_deviation, c.tolerance);
                }
                return Ok(5);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ldplpp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
