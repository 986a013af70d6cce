use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use odlro_cli::commands::{parse_spectrum, run_extract, run_scan, run_sweep, run_validate, CommandOutput};
use odlro_cli::config::{ConfigFlags, OutputFormat, RunConfig, CONFIG_ENV};
use odlro_cli::table::write_tables;
use odlro_core::validate::Fault;

const EXIT_ROW_ERRORS: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "odlro-lab",
    version,
    about = "Single-particle entanglement and ODLRO in an ideal Bose gas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: ConfigFlags,
    /// Suppress the per-point counter on stderr.
    #[arg(long, short = 'q', global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Negativity extracted by the delta-pulse protocol over g in [0, pi).
    Extract,
    /// Thermodynamics and negativity over the temperature grid.
    Sweep,
    /// Off-diagonal rho_1 along the split axis and the spectral ODLRO detector.
    Scan {
        /// Run the detector on eigenvalues from this file instead of the gas.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Run the invariant suite; exit 0 iff every property holds.
    Validate {
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    GramPsd,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Extract => "extract",
        Command::Sweep => "sweep",
        Command::Scan { .. } => "scan",
        Command::Validate { .. } => "validate",
    }
}

fn header(command: &str, cfg: &RunConfig) -> String {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v.as_object_mut()
        .expect("config is an object")
        .insert("command".into(), command.into());
    v.to_string()
}

fn emit(cfg: &RunConfig, command: &str, output: &CommandOutput) -> io::Result<()> {
    let head = header(command, cfg);
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_tables(&mut w, cfg.format, &head, &output.tables)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_tables(&mut w, cfg.format, &head, &output.tables)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let cfg = match RunConfig::resolve(&cli.flags, env_config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let progress = !cli.quiet;
    let name = command_name(&cli.command);

    let output = match &cli.command {
        Command::Extract => run_extract(&cfg),
        Command::Sweep => match run_sweep(&cfg, progress) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        Command::Scan { spectrum } => {
            let values = match spectrum {
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(text) => match parse_spectrum(&text) {
                        Ok(v) => Some(v),
                        Err(e) => {
                            eprintln!("error: {}: {e}", path.display());
                            return ExitCode::from(EXIT_CONFIG);
                        }
                    },
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return ExitCode::from(EXIT_IO);
                    }
                },
                None => None,
            };
            match run_scan(&cfg, values.as_deref(), progress) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
        }
        Command::Validate { inject_fault } => {
            let fault = inject_fault.map(|FaultArg::GramPsd| Fault::GramPerturbation);
            let (outcomes, output) = run_validate(&cfg, fault);
            if cfg.format == OutputFormat::Csv && cfg.out.is_none() {
                for o in &outcomes {
                    println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                }
            } else if let Err(e) = emit(&cfg, name, &output) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_IO);
            }
            if let Some(first) = outcomes.iter().find(|o| !o.passed) {
                eprintln!("{}", serde_json::to_string(first).expect("outcome serializes"));
                return ExitCode::from(EXIT_ROW_ERRORS);
            }
            return ExitCode::SUCCESS;
        }
    };

    if let Err(e) = emit(&cfg, name, &output) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_IO);
    }
    if output.row_errors > 0 {
        eprintln!("{} row(s) reported errors", output.row_errors);
        return ExitCode::from(EXIT_ROW_ERRORS);
    }
    ExitCode::SUCCESS
}
