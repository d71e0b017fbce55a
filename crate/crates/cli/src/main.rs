use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spchain_cli::{
    compute_chi, compute_dims, compute_dims_for_degrees, compute_out_euler, render_chi, render_dims,
    render_out_euler, render_partial_dims, CliError, CliResult, FusedPairing, OutputFormat, RunConfig,
};
use spchain_core::verify::{run_suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "spchain", version, about = "Sp-invariant chain dimensions and Euler characteristics of Out(F_n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = default_threads())]
    threads: usize,

    /// Directory for the persistent plethysm/term cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Pairing path: fused multi-modular (on), exact rational (off), or both.
    #[arg(long, global = true, value_enum, default_value_t = FusedPairing::On)]
    fused_pairing: FusedPairing,

    /// Suppress the stats line on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Euler characteristic of the invariant chain complex for each even weight.
    Chi {
        #[arg(long)]
        max_weight: u32,
    },
    /// Dimensions of the chain groups C_i at one weight.
    Dims {
        #[arg(long)]
        weight: u32,
        /// Only these homological degrees (comma separated).
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u32>>,
    },
    /// Integral Euler characteristics e(Out F_n) with lower-term decomposition.
    OutEuler {
        #[arg(long)]
        max_weight: u32,
        /// CSV file with header `w,chi`; computed when omitted.
        #[arg(long)]
        chi_file: Option<PathBuf>,
    },
    /// Run the cross-check suite.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = RunConfig {
        threads: cli.threads,
        cache_dir: cli.cache_dir.clone(),
        format: cli.format,
        pairing: cli.fused_pairing,
    };
    let report_stats = |s: &str| {
        if !cli.quiet {
            eprintln!("{s}");
        }
    };
    match cli.command {
        Command::Chi { max_weight } => {
            let (report, stats) = compute_chi(&cfg, max_weight)?;
            print!("{}", render_chi(&report, cfg.format));
            report_stats(&stats);
        }
        Command::Dims { weight, degrees: None } => {
            let (table, stats) = compute_dims(&cfg, weight)?;
            print!("{}", render_dims(&table, cfg.format));
            report_stats(&stats);
        }
        Command::Dims { weight, degrees: Some(degrees) } => {
            let (rows, stats) = compute_dims_for_degrees(&cfg, weight, &degrees)?;
            print!("{}", render_partial_dims(weight, &rows, cfg.format));
            report_stats(&stats);
        }
        Command::OutEuler { max_weight, chi_file } => {
            let (report, stats) = compute_out_euler(&cfg, max_weight, chi_file.as_deref())?;
            print!("{}", render_out_euler(&report, cfg.format));
            if let Some(s) = stats {
                report_stats(&s);
            }
            if !report.congruence.holds() {
                return Err(CliError::Verification(1));
            }
        }
        Command::Verify { max_degree } => {
            let outcomes = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads.max(1))
                .build()
                .map_err(|e| CliError::BadInput(e.to_string()))?
                .install(|| run_suite(&VerifyOptions::new(max_degree)));
            let mut failed = 0;
            for o in &outcomes {
                println!("{} {:<28} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                failed += usize::from(!o.passed);
            }
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
