use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use metric_magnitude::commands::{self, parse_resolutions, Command, OutputFormat, RunConfig};
use metric_magnitude::function::ScaleGrid;
use metric_magnitude::io::InputFormat;
use metric_magnitude::{Error, Norm};

#[derive(Parser)]
#[command(name = "magnitude", version, about = "Magnitude of metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Magnitude and weighting of one space.
    Compute(Common),
    /// Magnitude function sampled on a grid, with singularities.
    Function(Common),
    /// Scales where the similarity matrix is singular.
    Singularities(Common),
    /// Growth exponent of the magnitude function.
    Dimension(Common),
    /// Grid approximations of a compact region.
    Approx(Common),
    /// Built-in verification suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Plot-ready two-column data (fig1, fig4 or all).
    Plotdata {
        #[arg(default_value = "all")]
        figure: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, short)]
    input: Vec<PathBuf>,
    #[arg(long, short, default_value = "dist")]
    format: InputFormat,
    #[arg(long)]
    p: Option<Norm>,
    #[arg(long)]
    scale: Option<f64>,
    /// t0:t1:steps[:log]
    #[arg(long)]
    grid: Option<ScaleGrid>,
    /// Comma-separated mesh sizes, coarsest first.
    #[arg(long)]
    resolutions: Option<String>,
    #[arg(long)]
    tol_rcond: Option<f64>,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    strict: bool,
    /// csv or json.
    #[arg(long)]
    output: Option<OutputFormat>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Report wall-clock time in the envelope.
    #[arg(long)]
    timing: bool,
}

fn config(cli: Cli) -> Result<RunConfig, Error> {
    let (command, common, target) = match cli.command {
        Sub::Compute(c) => (Command::Compute, c, None),
        Sub::Function(c) => (Command::Function, c, None),
        Sub::Singularities(c) => (Command::Singularities, c, None),
        Sub::Dimension(c) => (Command::Dimension, c, None),
        Sub::Approx(c) => (Command::Approx, c, None),
        Sub::Verify { suite, common } => (Command::Verify, common, Some(suite)),
        Sub::Plotdata { figure, common } => (Command::Plotdata, common, Some(figure)),
    };
    let mut cfg = RunConfig::new(command);
    let default_output = if command == Command::Plotdata { OutputFormat::Csv } else { OutputFormat::Json };
    cfg.inputs = common.input;
    cfg.format = common.format;
    cfg.p = common.p;
    cfg.scale = common.scale;
    cfg.grid = common.grid;
    if let Some(r) = common.resolutions {
        cfg.resolutions = parse_resolutions(&r)?;
    }
    if let Some(t) = common.tol_rcond {
        cfg.tol_rcond = t;
    }
    if let Some(t) = common.tol_residual {
        cfg.tol_residual = t;
    }
    cfg.strict = common.strict;
    cfg.output = common.output.unwrap_or(default_output);
    cfg.out = common.out;
    cfg.threads = common.threads;
    cfg.target = target;
    cfg.timing = common.timing;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_PARSE as u8 } else { 0 });
        }
    };
    let result = config(cli).and_then(|cfg| {
        let outcome = commands::run(&cfg)?;
        Ok((commands::write_outcome(&cfg, &outcome)?, outcome.exit_code))
    });
    match result {
        Ok((stdout, code)) => {
            if let Some(s) = stdout {
                let _ = std::io::stdout().write_all(s.as_bytes());
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
