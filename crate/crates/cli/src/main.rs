use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use liecert::catalog::{self, Built, BUILTIN_PREFIX};
use liecert::liecore::json::from_json;
use liecert::liecore::AnyAlgebra;
use liecert::report::{self, IdealSpec, Report};
use liecert::verify;

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "liecert", version, about = "Exact certificates for Lie algebras, their derivations and central extensions")]
struct Cli {
    /// Seed for randomized simplicity tests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure, simplicity, derivations and low cohomology of an algebra.
    Analyze { source: String },
    /// Universal central extension.
    Uce { source: String },
    /// Predict whether Der(hat/C) is simple from the Out-action on the center of the UCE.
    Predict {
        source: String,
        /// `zero`, `full`, or `;`-separated coordinate vectors in the UCE center.
        #[arg(long, default_value = "zero")]
        ideal: String,
        /// Also compute Der(hat/C) directly and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long)]
        include_stretch: bool,
    },
    /// List catalog entries.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Primchar,
    Char0,
}

fn load(source: &str) -> liecert::Result<AnyAlgebra> {
    let is_file = !source.starts_with(BUILTIN_PREFIX) && Path::new(source).is_file();
    if is_file {
        let text = std::fs::read_to_string(source)
            .map_err(|e| liecert::Error::InvalidArgument(format!("cannot read {source}: {e}")))?;
        return from_json(&text);
    }
    if !source.starts_with(BUILTIN_PREFIX) {
        return Err(liecert::Error::InvalidArgument(format!("{source}: no such file (use builtin:name?k=v for catalog entries)")));
    }
    match catalog::make(source)? {
        Built::Algebra(a) => Ok(a),
        Built::Window(w) => Err(liecert::Error::Unsupported(format!(
            "{} is a windowed algebra; it is only used by `verify char0`",
            w.name
        ))),
    }
}

fn catalog_report() -> Report {
    let mut r = Report::new("-", "catalog");
    for (name, params, desc) in catalog::ENTRIES {
        r.info(*name, json!({"params": params, "description": desc}));
    }
    r
}

fn run(cli: &Cli) -> liecert::Result<Report> {
    match &cli.command {
        Command::Analyze { source } => report::analyze(&load(source)?, source, cli.seed),
        Command::Uce { source } => report::uce_report(&load(source)?, source),
        Command::Predict { source, ideal, verify } => {
            let spec = IdealSpec::parse(ideal)?;
            report::predict_report(&load(source)?, source, &spec, *verify, cli.seed)
        }
        Command::Verify { suite: Suite::Primchar, p, include_stretch, .. } => verify::primchar(*p, *include_stretch, cli.seed),
        Command::Verify { suite: Suite::Char0, window, .. } => {
            if *window < 3 {
                return Err(liecert::Error::InvalidArgument(format!("window {window} must be at least 3")));
            }
            verify::char0(*window)
        }
        Command::Catalog => Ok(catalog_report()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_table());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("liecert: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
