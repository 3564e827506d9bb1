use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use qnlist::stream::{self, InputFormat, QueryKind, RangeSpec, RunConfig, StreamError};

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Plain,
    Csv,
}

/// Report longest increasing subsequences over a sliding window of a numeric stream.
///
/// Writes one JSON record per window to standard output.
#[derive(Debug, Parser)]
#[command(name = "lis-stream", version)]
struct Cli {
    /// Window size in items.
    #[arg(long)]
    window: usize,

    /// Query to run after every slide.
    #[arg(long, value_enum, default_value_t = QueryKind::Enumerate)]
    query: QueryKind,

    /// Minimum rise per position step (slis only).
    #[arg(long, allow_negative_numbers = true)]
    slope: Option<f64>,

    /// Index and value gap bounds as LI,UI,LV,UV (rlis only).
    #[arg(long, value_parser = stream::parse_range)]
    range: Option<RangeSpec>,

    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// 1-based CSV column holding the values.
    #[arg(long)]
    column: Option<usize>,

    /// Skip the first CSV row.
    #[arg(long)]
    has_header: bool,

    /// Also report windows that are not yet full.
    #[arg(long)]
    emit_warmup: bool,

    /// Recheck every report against a brute-force answer.
    #[arg(long, hide = true)]
    oracle_check: bool,

    /// Time maintenance only and print one summary record.
    #[arg(long)]
    benchmark: bool,

    /// Input file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl Cli {
    fn config(&self) -> Result<RunConfig, StreamError> {
        let format = match self.format {
            Format::Plain => {
                if self.column.is_some() || self.has_header {
                    return Err(StreamError::Config(
                        "--column and --has-header need --format csv".into(),
                    ));
                }
                InputFormat::Plain
            }
            Format::Csv => InputFormat::Csv {
                column: self.column.unwrap_or(1),
                has_header: self.has_header,
            },
        };
        Ok(RunConfig {
            window: self.window,
            query: self.query,
            slope: self.slope,
            range: self.range,
            format,
            emit_warmup: self.emit_warmup,
            oracle_check: self.oracle_check,
            benchmark: self.benchmark,
        })
    }
}

fn run(cli: &Cli) -> Result<(), StreamError> {
    let config = cli.config()?;
    config.validate()?;
    let source: Box<dyn Read> = match &cli.input {
        Some(path) => Box::new(
            File::open(path)
                .map_err(|e| StreamError::Config(format!("cannot open {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdin().lock()),
    };
    let values = stream::parse_input(source, config.format);
    let stdout = io::stdout().lock();
    let mut out = BufWriter::new(stdout);
    if config.benchmark {
        let summary = stream::benchmark(&config, values)?;
        serde_json::to_writer(&mut out, &summary).map_err(io::Error::from)?;
        out.write_all(b"\n")?;
        out.flush()?;
    } else {
        stream::run_windowed(&config, values, &mut out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lis-stream: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
