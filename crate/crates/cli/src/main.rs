//! `senseforge`: build vocabularies, train word, tagged and multi-sense
//! embeddings, and query or evaluate the results.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use senseforge::Error;

#[derive(Parser, Debug)]
#[command(
    name = "senseforge",
    version,
    about = "Word, sense and PoS-tagged embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count tokens and print the vocabulary as `token<TAB>count`.
    Vocab(VocabArgs),
    /// Train a model.
    Train(TrainArgs),
    /// Score a model on an analogy file.
    Eval(EvalArgs),
    /// Nearest neighbours of one or more labels.
    Nn(NnArgs),
    /// Rank rows against a signed sum such as `banco + dados - dinheiro`.
    Algebra(AlgebraArgs),
    /// Rewrite a model as a text dump.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Mode {
    /// Skip-gram over plain tokens.
    Word2vec,
    /// Skip-gram over `surface|TAG` tokens.
    Sense2vec,
    /// Multiple-sense skip-gram.
    Mssg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum OutputFormat {
    Binary,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum SpaceArg {
    Global,
    Sense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum IncludeArg {
    Global,
    Senses,
    Both,
}

#[derive(Args, Debug)]
pub(crate) struct VocabArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Read `surface|TAG` tokens.
    #[arg(long)]
    pub tagged: bool,
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    #[arg(long, env = "SENSEFORGE_THREADS", default_value_t = 1)]
    pub workers: usize,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub(crate) struct TrainArgs {
    #[arg(long, value_enum, default_value_t = Mode::Word2vec)]
    pub mode: Mode,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Binary)]
    pub format: OutputFormat,
    /// Rows of a text dump.
    #[arg(long, value_enum, default_value_t = IncludeArg::Both)]
    pub include: IncludeArg,
    /// Reuse a vocabulary written by `vocab` instead of counting again.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long, default_value_t = 300)]
    pub dim: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[arg(long, default_value_t = 0.025)]
    pub lr: f32,
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, default_value_t = 1)]
    pub epochs: usize,
    #[arg(long, default_value_t = 3)]
    pub senses: usize,
    /// Words rarer than this keep a single sense (MSSG only).
    #[arg(long, default_value_t = 0)]
    pub sense_min_count: u64,
    /// Subsampling threshold; 0 disables it.
    #[arg(long, default_value_t = 0.0)]
    pub subsample: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "SENSEFORGE_THREADS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub negative_table_size: usize,
    /// Evaluate the logistic exactly instead of by table lookup.
    #[arg(long)]
    pub exact_sigmoid: bool,
}

#[derive(Args, Debug)]
pub(crate) struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub analogies: PathBuf,
    /// Ranking space. MSSG models report both spaces unless one is given.
    #[arg(long, value_enum)]
    pub space: Option<SpaceArg>,
    /// Only the N most frequent words take part.
    #[arg(long)]
    pub restrict_vocab: Option<usize>,
    /// Count quadruples with unknown words as wrong instead of skipping them.
    #[arg(long)]
    pub oov_as_wrong: bool,
    /// Also print `category kind correct attempted skipped accuracy` lines.
    #[arg(long)]
    pub tsv: bool,
}

#[derive(Args, Debug)]
pub(crate) struct NnArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(required = true)]
    pub labels: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub topn: usize,
    #[arg(long, value_enum, default_value_t = SpaceArg::Global)]
    pub space: SpaceArg,
}

#[derive(Args, Debug)]
pub(crate) struct AlgebraArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Expression, e.g. `banco + dados - dinheiro`; may be split over
    /// several arguments.
    #[arg(required = true, allow_hyphen_values = true)]
    pub expression: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub topn: usize,
    #[arg(long, value_enum, default_value_t = SpaceArg::Global)]
    pub space: SpaceArg,
}

#[derive(Args, Debug)]
pub(crate) struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = IncludeArg::Both)]
    pub include: IncludeArg,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Config(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
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
    let result = match &cli.command {
        Command::Vocab(a) => commands::vocab(a),
        Command::Train(a) => commands::train(a),
        Command::Eval(a) => commands::eval(a),
        Command::Nn(a) => commands::nn(a),
        Command::Algebra(a) => commands::algebra(a),
        Command::Convert(a) => commands::convert(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
