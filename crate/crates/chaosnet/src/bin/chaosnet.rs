use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chaosnet::commands::{self, Output, Run};
use chaosnet::csv_io::{read_matrix, LabelColumn};
use chaosnet::{docs, Error, ExperimentConfig, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chaosnet", version, about = "Chaotic-neuron few-shot classifier and GLS coding tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the config's base seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model and write it as TOML
    Train,
    /// Classify the rows of a CSV file with a saved model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// The input has no header row
        #[arg(long)]
        no_header: bool,
        /// Zero-based index of a label column to ignore
        #[arg(long)]
        label_column: Option<usize>,
    },
    /// Confusion table on held-out rows, or on the whole dataset with --model
    Eval {
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Accuracy over a range of training-set sizes
    Sweep,
    /// Accuracy under Gaussian noise on the learned mean vectors
    Noise {
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Losslessly encode a file
    CodecEncode {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decode a file written by codec-encode
    CodecDecode {
        #[arg(long)]
        input: PathBuf,
    },
    /// Quantize and bitplane-encode sampled function values
    Uat {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Also write the encoded form here
        #[arg(long)]
        code: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })
}

fn load_model(path: &Path) -> Result<chaosnet::core::TrainedModel> {
    docs::model_from_toml(&read_text(path)?).map_err(|e| match e {
        Error::Toml(_) | Error::Format { .. } | Error::UnsupportedVersion { .. } => {
            Error::Config(format!("{}: {e}", path.display()))
        }
        e => e,
    })
}

fn experiment(common: &Common) -> Result<Run> {
    let path = common.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
    Ok(Run::new(ExperimentConfig::load(path)?, common.seed))
}

/// Writes to a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let name = path.file_name().ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.partial", name.to_string_lossy()));
    let io_err = |e| Error::Io { path: path.into(), source: e };
    fs::write(&tmp, data).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

fn emit(out: Option<&Path>, output: Output) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, &output.data)?,
        None => io::stdout().write_all(&output.data).map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?,
    }
    for line in output.summary {
        eprintln!("{line}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    let out = |run: Option<&Run>| common.out.clone().or_else(|| run.and_then(|r| r.config.output.path.clone()));
    match cli.command {
        Command::Train => {
            let run = experiment(common)?;
            let (model, summary) = commands::train(&run)?;
            let path = out(Some(&run)).ok_or_else(|| Error::Config("train needs --out or output.path".into()))?;
            emit(Some(&path), Output { data: docs::model_to_toml(&model)?.into_bytes(), summary })
        }
        Command::Predict { model, input, no_header, label_column } => {
            let m = load_model(&model)?;
            let file = fs::File::open(&input).map_err(|e| Error::Io { path: input.clone(), source: e })?;
            let data = read_matrix(file, !no_header, label_column.map(LabelColumn::Index).as_ref())?;
            let preamble = format!("model: {}\ninput: {}", model.display(), input.display());
            let mut output = commands::predict_table(&m, &data.features, &preamble)?;
            if data.dropped > 0 {
                output.summary.push(format!("dropped rows with missing values: {}", data.dropped));
            }
            emit(out(None).as_deref(), output)
        }
        Command::Eval { model } => {
            let run = experiment(common)?;
            let m = model.as_deref().map(load_model).transpose()?;
            let output = commands::eval(&run, m.as_ref())?;
            emit(out(Some(&run)).as_deref(), output)
        }
        Command::Sweep => {
            let run = experiment(common)?;
            let output = commands::sweep(&run)?;
            emit(out(Some(&run)).as_deref(), output)
        }
        Command::Noise { model } => {
            let run = experiment(common)?;
            let m = model.as_deref().map(load_model).transpose()?;
            let output = commands::noise(&run, m.as_ref())?;
            emit(out(Some(&run)).as_deref(), output)
        }
        Command::CodecEncode { input } => {
            let bytes = fs::read(&input).map_err(|e| Error::Io { path: input.clone(), source: e })?;
            let doc = docs::codec_encode(&bytes)?;
            let summary = vec![format!("encoded {} bytes", bytes.len())];
            emit(out(None).as_deref(), Output { data: doc.into_bytes(), summary })
        }
        Command::CodecDecode { input } => {
            let bytes = docs::codec_decode(&read_text(&input)?)?;
            let summary = vec![format!("decoded {} bytes", bytes.len())];
            emit(out(None).as_deref(), Output { data: bytes, summary })
        }
        Command::Uat { input, epsilon, code } => {
            let samples = commands::parse_samples(&read_text(&input)?)?;
            let result = commands::uat(&samples, epsilon)?;
            let doc = code.as_ref().map(|_| docs::uat_to_toml(&result.code)).transpose()?;
            let preamble = format!("input: {}\nepsilon: {epsilon}", input.display());
            let output = commands::uat_table(&samples, &result, &preamble);
            if let (Some(path), Some(doc)) = (&code, doc) {
                write_atomic(path, doc.as_bytes())?;
            }
            emit(out(None).as_deref(), output)
        }
    }
}
