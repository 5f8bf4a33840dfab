use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circular_ptc::analysis::{csv_row, ScanConfig, Scanner, CSV_HEADER};
use circular_ptc::error::ContextError;
use circular_ptc::iteration::DEFAULT_MAX_ITER;
use circular_ptc::report::{render_intervals, to_json, CompareReport, IterateReport, SolveReport};
use circular_ptc::{Money, PtcContext, RoundingMode, ScenarioDocument, TaxYearParams};

/// Optimal self-employed health insurance deduction with the premium tax credit.
#[derive(Parser)]
#[command(name = "circular-ptc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal deduction by bisection, with certificate and reconciliation.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Round the deduction down to whole dollars.
        #[arg(long)]
        whole_dollars: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the IRS fixed-point iteration. Exits 4 if it diverges, 5 if it runs out of steps.
    Iterate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Print every iterate.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Iteration, simplified method, liminf, bisection and brute force side by side.
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
    },
    /// Sweep income and write one CSV row per grid point.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: Money,
        #[arg(long)]
        to: Money,
        #[arg(long, default_value = "50")]
        step: Money,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Amounts in cents instead of whole dollars.
        #[arg(long)]
        cents: bool,
        /// Bisect interval endpoints down to $1.
        #[arg(long)]
        refine: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
}

#[derive(Args)]
struct Input {
    /// Scenario file of `key = value` lines.
    scenario: Option<PathBuf>,
    /// Override one scenario key, e.g. `--set I=50000`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Tax-year parameter file instead of the bundled tables.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, default_value = "cent")]
    mode: RoundingMode,
    /// Round the applicable figure to a ten-thousandth before use.
    #[arg(long)]
    quantize_figure: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl Input {
    fn document(&self) -> Result<ScenarioDocument, Failure> {
        let mut doc = match &self.scenario {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
                ScenarioDocument::parse(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?
            }
            None => ScenarioDocument::default(),
        };
        for kv in &self.set {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| Failure::new(2, format!("--set expects KEY=VALUE, got `{kv}`")))?;
            doc.set(k, v).map_err(|e| Failure::new(2, e))?;
        }
        Ok(doc)
    }

    fn context(&self, doc: &ScenarioDocument) -> Result<PtcContext, Failure> {
        let scenario = doc.to_scenario().map_err(|e| Failure::new(2, e))?;
        let params = match &self.params {
            Some(path) => {
                TaxYearParams::from_path(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?
            }
            None => TaxYearParams::bundled(&scenario.tax_year)
                .ok_or_else(|| Failure::new(3, ContextError::UnknownTaxYear(scenario.tax_year.clone())))?,
        };
        let ctx = PtcContext::new(scenario, params, self.mode).map_err(|e| match e {
            ContextError::Scenario(e) => Failure::new(2, e),
            other => Failure::new(3, other),
        })?;
        Ok(ctx.with_quantized_figure(self.quantize_figure))
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::new(1, e))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve { input, whole_dollars, json } => {
            let ctx = input.context(&input.document()?)?;
            let report = SolveReport::new(&ctx, whole_dollars).map_err(|e| Failure::new(1, e))?;
            emit(&if json { to_json(&report) } else { report.render_text() })?;
            Ok(0)
        }
        Command::Iterate { input, max_iter, trace, json } => {
            let ctx = input.context(&input.document()?)?;
            let report = IterateReport::new(&ctx, max_iter, trace).map_err(|e| Failure::new(1, e))?;
            emit(&if json { to_json(&report) } else { report.render_text() })?;
            Ok(report.exit_code() as u8)
        }
        Command::Compare { input, max_iter, json } => {
            let ctx = input.context(&input.document()?)?;
            let report = CompareReport::new(&ctx, max_iter).map_err(|e| Failure::new(1, e))?;
            emit(&if json { to_json(&report) } else { report.render_text() })?;
            Ok(0)
        }
        Command::Scan { input, from, to, step, out, cents, refine, max_iter } => {
            let mut doc = input.document()?;
            if !doc.contains("I") {
                doc.set("I", &to.to_string()).map_err(|e| Failure::new(2, e))?;
            }
            let ctx = input.context(&doc)?;
            let config = ScanConfig {
                rounding: input.mode,
                max_iter,
                refine,
                quantize_figure: input.quantize_figure,
                ..ScanConfig::default()
            };
            let scanner = Scanner::new(ctx.scenario.clone(), ctx.params.clone(), from, to, step, config)
                .map_err(|e| Failure::new(1, e))?;
            let mut sink: Box<dyn Write> = match &out {
                Some(path) => {
                    Box::new(File::create(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?)
                }
                None => Box::new(io::stdout().lock()),
            };
            let mut sink = BufWriter::new(&mut sink);
            writeln!(sink, "{CSV_HEADER}").map_err(|e| Failure::new(1, e))?;
            let intervals = scanner.run(|p| writeln!(sink, "{}", csv_row(p, cents))).map_err(|e| Failure::new(1, e))?;
            sink.flush().map_err(|e| Failure::new(1, e))?;
            eprint!("{}", render_intervals(&intervals));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
