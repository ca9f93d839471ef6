//! Command implementations. Each returns its data in memory; writing is left
//! to the caller so a failed run leaves no partial output behind.

use std::fmt::Write as _;

use chaosnet_core::classifier::train_layered;
use chaosnet_core::coding::{uat_decode, uat_encode, UatCode};
use chaosnet_core::noise::{noise_sweep, trial_seed};
use chaosnet_core::{
    evaluate, normalize, predict, sample_per_class, Extrema, LabeledDataset, Matrix, NoiseTrial, TrainedModel,
};

use crate::config::{build_layers, ExperimentConfig, LoadedConfig, Normalization};
use crate::csv_io::{load_csv, Loaded};
use crate::error::{Error, Result};

/// A validated config plus the effective base seed.
#[derive(Debug, Clone)]
pub struct Run {
    pub config: ExperimentConfig,
    /// Lines echoed at the top of every output table.
    pub echo: String,
    pub seed: u64,
}

impl Run {
    pub fn new(loaded: LoadedConfig, seed: Option<u64>) -> Self {
        let mut echo = format!("config: {}\n{}", loaded.source.display(), loaded.text);
        if let Some(s) = seed {
            let _ = writeln!(echo, "\n--seed {s}");
        }
        Run { seed: seed.unwrap_or(loaded.config.sampling.seed), config: loaded.config, echo }
    }

    pub fn from_config(config: ExperimentConfig, echo: impl Into<String>) -> Self {
        Run { seed: config.sampling.seed, config, echo: echo.into() }
    }
}

/// Delimited output with `# `-prefixed preamble lines.
#[derive(Debug)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(preamble: &str, header: &[&str]) -> Self {
        let mut out = String::new();
        for line in preamble.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        let mut t = Table { out };
        t.row(header.iter().map(|s| s.to_string()));
        t
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(cells.into_iter().collect::<Vec<_>>()).expect("in-memory write");
        self.out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory write")).expect("utf-8 cells"));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub data: Vec<u8>,
    /// Human-readable summary for the error stream.
    pub summary: Vec<String>,
}

/// A trained model with its normalized held-out rows.
#[derive(Debug, Clone)]
pub struct Fit {
    pub model: TrainedModel,
    pub train_counts: Vec<(String, usize)>,
    pub test: Matrix,
    pub test_labels: Vec<String>,
}

pub fn load_dataset(config: &ExperimentConfig) -> Result<Loaded> {
    load_csv(&config.dataset.path, &config.csv_options())
}

/// Samples `k` rows per class (all rows when `None`), normalizes per the
/// config, and trains. The remainder is returned normalized.
pub fn fit(config: &ExperimentConfig, data: &LabeledDataset, k: Option<usize>, seed: u64) -> Result<Fit> {
    let params = config.model.hyperparams()?;
    let layers = build_layers(&config.layers, data.features().cols())?;
    let split = |d: &LabeledDataset| -> Result<(LabeledDataset, LabeledDataset)> {
        match k {
            Some(k) => Ok(sample_per_class(d, k, seed)?),
            None => Ok((d.clone(), d.subset(&[]))),
        }
    };
    let (train, rest, extrema) = match config.dataset.normalization {
        Normalization::Dataset => {
            let (x, e) = normalize(data.features());
            let (train, rest) = split(&data.with_features(x)?)?;
            (train, rest, Some(e))
        }
        Normalization::Train => {
            let (train, rest) = split(data)?;
            let e = Extrema::of(train.features()).ok_or(chaosnet_core::Error::EmptyInput)?;
            let train = train.with_features(e.apply(train.features()))?;
            let rest = rest.with_features(e.apply(rest.features()))?;
            (train, rest, Some(e))
        }
        Normalization::None => {
            if let Some(v) = data.features().as_slice().iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::Config(format!("normalization = \"none\" but the data contains {v}")));
            }
            let (train, rest) = split(data)?;
            (train, rest, None)
        }
    };
    let per_class = train.per_class();
    let mut model = train_layered(&per_class, &params, &layers)?;
    model.normalization = extrema;
    Ok(Fit {
        model,
        train_counts: per_class.iter().map(|(c, m)| (c.clone(), m.rows())).collect(),
        test: rest.features().clone(),
        test_labels: rest.labels().to_vec(),
    })
}

pub fn train(run: &Run) -> Result<(TrainedModel, Vec<String>)> {
    let loaded = load_dataset(&run.config)?;
    let fit = fit(&run.config, &loaded.dataset, run.config.sampling.k, run.seed)?;
    let mut summary = vec![
        format!("classes: {}", fit.model.classes.len()),
        format!("features: {}", loaded.dataset.features().cols()),
        format!(
            "training rows: {}",
            fit.train_counts.iter().map(|(c, n)| format!("{c}={n}")).collect::<Vec<_>>().join(", ")
        ),
    ];
    if loaded.dropped > 0 {
        summary.push(format!("dropped rows with missing values: {}", loaded.dropped));
    }
    Ok((fit.model, summary))
}

pub fn predict_table(model: &TrainedModel, inputs: &Matrix, preamble: &str) -> Result<Output> {
    let predictions = predict(model, inputs, false)?;
    let mut header = vec!["row".to_string(), "label".to_string()];
    header.extend(model.classes.iter().map(|c| format!("similarity_{c}")));
    let mut table = Table::new(preamble, &header.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, p) in predictions.iter().enumerate() {
        table.row([i.to_string(), p.label.clone()].into_iter().chain(p.similarities.iter().map(f64::to_string)));
    }
    Ok(Output { data: table.finish().into_bytes(), summary: vec![format!("predicted {} rows", predictions.len())] })
}

/// Evaluates `model` on the whole dataset, or trains on `sampling.k` rows per
/// class and evaluates on the rest.
pub fn eval(run: &Run, model: Option<&TrainedModel>) -> Result<Output> {
    let loaded = load_dataset(&run.config)?;
    let (model, evaluation) = match model {
        Some(m) => {
            let e = evaluate(m, loaded.dataset.features(), loaded.dataset.labels(), false)?;
            (m.clone(), e)
        }
        None => {
            let k =
                run.config.sampling.k.ok_or_else(|| Error::Config("eval without a model needs sampling.k".into()))?;
            let fit = fit(&run.config, &loaded.dataset, Some(k), run.seed)?;
            let e = evaluate(&fit.model, &fit.test, &fit.test_labels, true)?;
            (fit.model, e)
        }
    };
    let mut table = Table::new(&run.echo, &["actual", "predicted", "count"]);
    for (i, row) in evaluation.confusion.iter().enumerate() {
        for (j, n) in row.iter().enumerate() {
            table.row([model.classes[i].clone(), model.classes[j].clone(), n.to_string()]);
        }
    }
    Ok(Output { data: table.finish().into_bytes(), summary: vec![format!("accuracy: {}", evaluation.accuracy)] })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub accuracy: f64,
}

pub fn sweep_records(run: &Run) -> Result<Vec<SweepRecord>> {
    let loaded = load_dataset(&run.config)?;
    let mut out = Vec::new();
    for k in run.config.sampling.k_range()? {
        for trial in 0..run.config.sampling.trials {
            let seed = trial_seed(run.seed, k, trial);
            let fit = fit(&run.config, &loaded.dataset, Some(k), seed)?;
            let accuracy = if fit.test.is_empty() {
                f64::NAN
            } else {
                evaluate(&fit.model, &fit.test, &fit.test_labels, true)?.accuracy
            };
            out.push(SweepRecord { k, trial, seed, accuracy });
        }
    }
    Ok(out)
}

pub fn sweep(run: &Run) -> Result<Output> {
    let records = sweep_records(run)?;
    let mut table = Table::new(&run.echo, &["k", "trial", "seed", "accuracy"]);
    let mut summary = Vec::new();
    for r in &records {
        table.row([r.k.to_string(), r.trial.to_string(), r.seed.to_string(), r.accuracy.to_string()]);
    }
    for k in run.config.sampling.k_range()? {
        let accs: Vec<f64> = records.iter().filter(|r| r.k == k).map(|r| r.accuracy).collect();
        summary.push(format!("k={k}: mean accuracy {:.4}", accs.iter().sum::<f64>() / accs.len() as f64));
    }
    Ok(Output { data: table.finish().into_bytes(), summary })
}

/// Clean accuracy and the noise trials for the config's `[noise]` section.
pub fn noise_trials(run: &Run, model: Option<&TrainedModel>) -> Result<(f64, Vec<NoiseTrial>)> {
    let noise = run.config.noise.as_ref().ok_or_else(|| Error::Config("missing [noise] section".into()))?;
    let loaded = load_dataset(&run.config)?;
    let (model, test, labels, normalized) = match model {
        Some(m) => (m.clone(), loaded.dataset.features().clone(), loaded.dataset.labels().to_vec(), false),
        None => {
            let k =
                run.config.sampling.k.ok_or_else(|| Error::Config("noise without a model needs sampling.k".into()))?;
            let fit = fit(&run.config, &loaded.dataset, Some(k), run.seed)?;
            (fit.model, fit.test, fit.test_labels, true)
        }
    };
    let clean = evaluate(&model, &test, &labels, normalized)?.accuracy;
    let trials = noise_sweep(&model, &test, &labels, normalized, &noise.grid()?, noise.trials, run.seed)?;
    Ok((clean, trials))
}

pub fn noise(run: &Run, model: Option<&TrainedModel>) -> Result<Output> {
    let (clean, trials) = noise_trials(run, model)?;
    let mut table = Table::new(&run.echo, &["sigma", "trial", "seed", "snr_db", "accuracy"]);
    let per_sigma = run.config.noise.as_ref().map_or(1, |n| n.trials);
    for (i, t) in trials.iter().enumerate() {
        table.row([
            t.sigma.to_string(),
            (i % per_sigma).to_string(),
            t.seed.to_string(),
            t.snr_db.to_string(),
            t.accuracy.to_string(),
        ]);
    }
    Ok(Output { data: table.finish().into_bytes(), summary: vec![format!("clean accuracy: {clean}")] })
}

/// Parses numbers separated by commas or whitespace; `#` starts a comment.
pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for (j, tok) in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).enumerate() {
            match tok.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => {
                    return Err(Error::Parse {
                        line: i as u64 + 1,
                        column: Some(j + 1),
                        message: format!("not a finite number: {tok:?}"),
                    })
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 1, column: None, message: "no samples".into() });
    }
    Ok(out)
}

pub struct UatRun {
    pub code: UatCode,
    pub reconstructed: Vec<f64>,
    pub max_error: f64,
}

pub fn uat(samples: &[f64], epsilon: f64) -> Result<UatRun> {
    let code = uat_encode(samples, epsilon)?;
    let reconstructed = uat_decode(&code)?;
    let max_error = samples.iter().zip(&reconstructed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(UatRun { code, reconstructed, max_error })
}

pub fn uat_table(samples: &[f64], run: &UatRun, preamble: &str) -> Output {
    let mut table = Table::new(preamble, &["index", "sample", "reconstructed", "abs_error"]);
    for (i, (s, r)) in samples.iter().zip(&run.reconstructed).enumerate() {
        table.row([i.to_string(), s.to_string(), r.to_string(), (s - r).abs().to_string()]);
    }
    Output {
        data: table.finish().into_bytes(),
        summary: vec![
            format!("samples: {}", samples.len()),
            format!("scale: {}", run.code.scale),
            format!("bitplanes: {}", run.code.bitplane_count()),
            format!("max error: {}", run.max_error),
        ],
    }
}
