use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use assocarray::get_semiring;
use assocarray_cli::bench::{run_bench, BenchConfig, Mode, CSV_HEADER};
use assocarray_cli::check::{parse_carriers, parse_properties, run_check};
use assocarray_cli::query::cmd_query;
use assocarray_cli::CliError;
use clap::{Parser, Subcommand};

/// Associative arrays over semirings: relational scripts, law checks and
/// rewrite benchmarks.
#[derive(Parser, Debug)]
#[command(name = "assocarray", version)]
struct Cli {
    /// Semiring for array operations: plus-times, max-plus, min-plus,
    /// and-or, and-eq or max-min.
    #[arg(long, global = true, default_value = "plus-times")]
    semiring: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a relational script and print every EMITted table.
    Query {
        script: PathBuf,
        /// Table files, referenced from the script as $1, $2, ...
        tables: Vec<PathBuf>,
    },
    /// Check algebraic laws on seeded random arrays and relations.
    Check {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated property names, or `all`.
        #[arg(long)]
        properties: Option<String>,
        /// Value carrier: int, real or both.
        #[arg(long, default_value = "int")]
        carrier: String,
    },
    /// Time two evaluation orders of a product and write CSV.
    Bench {
        #[arg(long, value_parser = clap::value_parser!(Mode))]
        mode: Mode,
        #[arg(long = "nA", default_value_t = 1024)]
        n_a: usize,
        #[arg(long, value_delimiter = ',', default_value = "256,1024,4096,16384")]
        sizes: Vec<usize>,
        /// Mean entries per row.
        #[arg(long, default_value_t = 8.0)]
        d: f64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        /// Timed repetitions per order (median reported).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn io_err(e: io::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let semiring = get_semiring(&cli.semiring).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Query { script, tables } => {
            let out = cmd_query(&script, &tables)?;
            io::stdout().write_all(out.as_bytes()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { trials, seed, properties, carrier } => {
            let props = parse_properties(properties.as_deref())?;
            let carriers = parse_carriers(&carrier)?;
            let (report, ok) = run_check(&semiring, &props, &carriers, trials, seed)?;
            print!("{report}");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Bench { mode, n_a, sizes, d, seeds, reps, out } => {
            let cfg = BenchConfig { mode, n_a, sizes, d, seeds, reps, semiring };
            let mut sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
                None => Box::new(io::stdout()),
            };
            writeln!(sink, "{CSV_HEADER}").map_err(io_err)?;
            let mut write_err = None;
            run_bench(&cfg, |row| {
                log::info!("{} s={} seed={} ratio={:.3}", row.mode, row.s, row.seed, row.ratio);
                if let Err(e) = writeln!(sink, "{}", row.csv()).and_then(|_| sink.flush()) {
                    write_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = write_err {
                return Err(io_err(e));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
