//! Operator commands. `run` returns the process exit code: 0 on success,
//! 1 for usage errors, 2 for validation failures, 3 for runtime errors.

mod markdown;

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use markdown::render_markdown;

use crate::assessment::{instantiate_generated_item, validate_bank, BankDocument, Item};
use crate::mathcore::{DetTemplate, IntRange};
use crate::psychometrics::{reliability_report, AnalysisGranularity, ReportConfig};
use crate::seeds;
use crate::service::{load_documents, serve, ServiceConfig};
use crate::session::{export_matrix, write_log, Granularity, MemoryStore, QuizDocument, ResponseMatrix, SessionEngine};
use crate::simulate::{drive_attempts, sample_students};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "stepwise", version, about = "Stepwise assessment engine and reliability analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Question-bank tools.
    #[command(subcommand)]
    Bank(BankCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Simulate a cohort taking a quiz and write the response matrix.
    Simulate(SimulateArgs),
    /// Reliability analysis of a response-matrix CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Subcommand)]
pub enum BankCommand {
    /// Check a bank document; prints one issue per line.
    Validate { file: PathBuf },
    /// Write generated determinant-equation items as a bank document.
    GenDet(GenDetArgs),
}

#[derive(Debug, Args)]
pub struct GenDetArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = -9, allow_hyphen_values = true)]
    pub root_min: i64,
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    pub root_max: i64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "STEPWISE_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "STEPWISE_DATA", default_value = "data")]
    pub data: PathBuf,
    #[arg(long, env = "STEPWISE_BANKS", default_value = "banks")]
    pub banks: PathBuf,
    /// Allowed CORS origin for the web UI, or `*`.
    #[arg(long, env = "STEPWISE_CORS_ORIGIN")]
    pub cors_origin: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    #[value(name = "item_totals", alias = "item-totals")]
    ItemTotals,
    #[value(name = "with_field_subscores", alias = "with-field-subscores")]
    WithFieldSubscores,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 92)]
    pub students: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Quiz document.
    #[arg(long)]
    pub quiz: PathBuf,
    /// Directory with the banks the quiz references; defaults to the quiz's directory.
    #[arg(long)]
    pub banks: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the event log here.
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ExportKind::WithFieldSubscores)]
    pub columns: ExportKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    #[value(name = "item_totals", alias = "item-totals")]
    ItemTotals,
    Fields,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = GranularityArg::ItemTotals)]
    pub granularity: GranularityArg,
    /// Item whose fields are analysed with `--granularity fields`.
    #[arg(long)]
    pub item: Option<String>,
    /// Histogram bins; Sturges' rule when absent.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub markdown: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn runtime(e: impl Display) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        message: e.to_string(),
    }
}

fn validation(e: impl Display) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Bank(BankCommand::Validate { file }) => bank_validate(&file),
        Command::Bank(BankCommand::GenDet(args)) => gen_det(&args),
        Command::Serve(args) => serve_command(args),
        Command::Simulate(args) => simulate(&args),
        Command::Analyze(args) => analyze(&args),
    }
}

fn bank_validate(file: &Path) -> Result<(), Failure> {
    let bank = BankDocument::parse(&read(file)?).map_err(validation)?;
    let issues = validate_bank(&bank.items);
    for issue in &issues {
        println!("{issue}");
    }
    if issues.is_empty() {
        println!("{}: {} items, no issues", file.display(), bank.items.len());
        Ok(())
    } else {
        Err(validation(format!("{} issue(s) in {}", issues.len(), file.display())))
    }
}

/// Item `k` uses the seed `derive(seed, k)`.
pub fn generate_bank(args: &GenDetArgs) -> Result<BankDocument, Failure> {
    let template = DetTemplate {
        root_range: IntRange::new(args.root_min, args.root_max),
        ..DetTemplate::default()
    };
    template.validate().map_err(validation)?;
    let items = (0..args.count as u64)
        .map(|k| {
            instantiate_generated_item(&template.with_seed(seeds::derive(args.seed, k)))
                .map(Item::Stepwise)
                .map_err(runtime)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BankDocument::new(items))
}

fn gen_det(args: &GenDetArgs) -> Result<(), Failure> {
    let text = generate_bank(args)?.to_json();
    match &args.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn serve_command(args: ServeArgs) -> Result<(), Failure> {
    let config = ServiceConfig {
        port: args.port,
        bank_dir: args.banks,
        data_dir: args.data,
        cors_origin: args.cors_origin,
    };
    let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
    rt.block_on(serve(config)).map_err(runtime)
}

fn simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let doc = QuizDocument::parse(&read(&args.quiz)?).map_err(validation)?;
    let bank_dir = match &args.banks {
        Some(dir) => dir.clone(),
        None => args.quiz.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    let (banks, _) = load_documents(&bank_dir).map_err(validation)?;
    let quiz = doc.into_quiz(&banks).map_err(validation)?;
    let engine = SessionEngine::open(Arc::new(MemoryStore::new())).map_err(runtime)?;
    engine.register_quiz(quiz.clone()).map_err(validation)?;
    let cohort = sample_students(args.students, args.seed);
    let attempts = drive_attempts(&engine, &quiz, &cohort, args.seed).map_err(runtime)?;
    let granularity = match args.columns {
        ExportKind::ItemTotals => Granularity::ItemTotals,
        ExportKind::WithFieldSubscores => Granularity::WithFieldSubscores,
    };
    let matrix = export_matrix(&quiz, &attempts, granularity).map_err(runtime)?;
    write(&args.out, &matrix.to_csv())?;
    if let Some(path) = &args.events {
        write(path, &write_log(&engine.events().map_err(runtime)?))?;
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let matrix = ResponseMatrix::from_csv(&read(&args.input)?).map_err(validation)?;
    let config = ReportConfig {
        granularity: match args.granularity {
            GranularityArg::ItemTotals => AnalysisGranularity::ItemTotals,
            GranularityArg::Fields => AnalysisGranularity::Fields,
        },
        item: args.item.clone(),
        bin_count: args.bins,
    };
    let report = reliability_report(&matrix, &config).map_err(runtime)?;
    write(&args.report, &report.to_json())?;
    if let Some(path) = &args.markdown {
        write(path, &render_markdown(&report))?;
    }
    Ok(())
}
