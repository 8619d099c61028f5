use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use peakgf::peaks::{peak_step, PeakStep};
use peakgf::verify::Level;
use peakgf::Rational;
use peakgf_cli::commands::{self, parse_rational, CommandError, RunConfig};
use peakgf_cli::report::OutputFormat;

#[derive(Parser, Debug)]
#[command(
    name = "peakgf",
    version,
    about = "Exact and asymptotic analysis of P_n(-1), the peak polynomials at t = -1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest n to compute.
    #[arg(long, global = true, default_value_t = 100)]
    order: usize,

    /// Evaluation point NUM/DEN for `coeffs` and `peaks` (default -1).
    #[arg(long = "t", global = true, value_parser = parse_rational, allow_hyphen_values = true)]
    t: Option<Rational>,

    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision: usize,

    /// Number of conjugate pole pairs in the asymptotic model.
    #[arg(long = "pole-pairs", global = true, default_value_t = 1)]
    pole_pairs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Verification depth for `verify`.
    #[arg(long, global = true, value_enum, default_value_t = VerifyLevel::Quick)]
    level: VerifyLevel,

    /// Largest n for brute-force enumeration of S_n.
    #[arg(long = "enum-bound", global = true, default_value_t = 10)]
    enum_bound: usize,

    #[arg(long = "inject-fault", global = true, hide = true, value_enum)]
    inject_fault: Option<Fault>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// f_n (or P_n(t)) for 0 <= n <= order.
    Coeffs,
    /// Peak-count tables, cross-checked against enumeration.
    Peaks,
    /// rho, theta, alpha and predicted vs exact f_n.
    Asymptotics,
    /// Sign of f_n against the mod-6 pattern and -cos((n+1) theta).
    Signs,
    /// Pole locations, root defects and residues.
    Singularities,
    /// Normalized residuals and their decay envelope.
    Residuals,
    /// Run the self-verification suite.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Fault {
    PeakRecurrence,
}

fn corrupted_peak_step(n: usize, row: &[BigUint]) -> Vec<BigUint> {
    let mut next = peak_step(n, row);
    if n >= 4 {
        next[1] += 1u32;
    }
    next
}

fn run(cli: &Cli) -> Result<(String, bool), CommandError> {
    let cfg = RunConfig {
        order: cli.order,
        precision: cli.precision,
        pole_pairs: cli.pole_pairs,
        enumeration_bound: cli.enum_bound,
        format: match cli.format {
            Format::Plain => OutputFormat::Plain,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
    };
    let step: PeakStep = match cli.inject_fault {
        Some(Fault::PeakRecurrence) => corrupted_peak_step,
        None => peak_step,
    };
    let t = cli.t.as_ref();
    let report = match cli.command {
        Command::Coeffs => commands::cmd_coeffs(&cfg, t)?,
        Command::Peaks => commands::cmd_peaks(&cfg, t, step)?,
        Command::Asymptotics => commands::cmd_asymptotics(&cfg)?,
        Command::Signs => commands::cmd_signs(&cfg)?,
        Command::Singularities => commands::cmd_singularities(&cfg)?,
        Command::Residuals => commands::cmd_residuals(&cfg)?,
        Command::Verify => {
            let level = match cli.level {
                VerifyLevel::Quick => Level::Quick,
                VerifyLevel::Full => Level::Full,
            };
            let (report, ok) = commands::cmd_verify(&cfg, level, step)?;
            return Ok((report.render(cfg.format), ok));
        }
    };
    Ok((report.render(cfg.format), true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
