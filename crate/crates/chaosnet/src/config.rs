//! Experiment configuration files.
//!
//! ```toml
//! [dataset]
//! path = "iris.csv"
//! label_column = "species"
//!
//! [model]
//! preset = "iris"
//!
//! [sampling]
//! k = 7
//! trials = 20
//! seed = 1
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use chaosnet_core::multilayer::paired_layer_spec;
use chaosnet_core::ttss::presets;
use chaosnet_core::{GlsMap, Hyperparams, LayerSpec};
use serde::Deserialize;

use crate::csv_io::{CsvOptions, LabelColumn};
use crate::docs::{parse_map_kind, LayerDoc};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub layers: Vec<LayerConfig>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// Column name or zero-based index; the last column when omitted.
    pub label_column: Option<LabelColumn>,
    #[serde(default = "yes")]
    pub has_header: bool,
    #[serde(default)]
    pub normalization: Normalization,
}

fn yes() -> bool {
    true
}

/// Where the min/max used for scaling into `[0, 1]` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Extrema of the whole loaded file.
    #[default]
    Dataset,
    /// Extrema of the training rows only; other rows are clamped.
    Train,
    /// Data is used as is and must already lie in `[0, 1]`.
    None,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub preset: Option<String>,
    pub q: Option<f64>,
    pub b: Option<f64>,
    pub map: Option<String>,
    pub epsilon: Option<f64>,
    pub max_iters: Option<usize>,
}

impl ModelConfig {
    /// Preset values overridden by any explicit field.
    pub fn hyperparams(&self) -> Result<Hyperparams> {
        let base = match &self.preset {
            Some(name) => {
                Some(presets::by_name(name).ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))?)
            }
            None => None,
        };
        let need = |field: &str| Error::Config(format!("model.{field} is required without a preset"));
        let q = self.q.or(base.map(|p| p.q)).ok_or_else(|| need("q"))?;
        let b = self.b.or(base.map(|p| p.b)).ok_or_else(|| need("b"))?;
        let epsilon = self.epsilon.or(base.map(|p| p.epsilon)).ok_or_else(|| need("epsilon"))?;
        let kind = match (&self.map, base) {
            (Some(m), _) => parse_map_kind(m)?,
            (None, Some(p)) => p.map_kind,
            (None, None) => return Err(need("map")),
        };
        let mut params = Hyperparams::new(q, b, kind, epsilon)?;
        if let Some(n) = self.max_iters.or(base.map(|p| p.max_iters)) {
            params = params.with_max_iters(n)?;
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LayerConfig {
    /// Neuron `j` couples inputs `2j` and `2j+1`; an odd last input passes through.
    Paired {
        eta: f64,
        gamma: f64,
        q: f64,
        map: String,
        skew: f64,
    },
    Dense(LayerDoc),
}

impl LayerConfig {
    pub fn to_spec(&self, inputs: usize) -> Result<LayerSpec> {
        let spec = match self {
            LayerConfig::Paired { eta, gamma, q, map, skew } => {
                paired_layer_spec(inputs, *eta, *gamma, *q, GlsMap::new(parse_map_kind(map)?, *skew)?)?
            }
            LayerConfig::Dense(doc) => doc.to_spec()?,
        };
        spec.validate(Some(inputs))?;
        Ok(spec)
    }
}

/// Builds the hidden layers for `inputs` input features.
pub fn build_layers(layers: &[LayerConfig], inputs: usize) -> Result<Vec<LayerSpec>> {
    let mut out: Vec<LayerSpec> = Vec::with_capacity(layers.len());
    for l in layers {
        let n = out.last().map_or(inputs, LayerSpec::len);
        out.push(l.to_spec(n)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    /// Training rows per class; all rows when omitted.
    pub k: Option<usize>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { k: None, k_min: None, k_max: None, trials: 1, seed: 0 }
    }
}

impl SamplingConfig {
    /// Range of `k` for sweeps: `k_min..=k_max`, or just `k`.
    pub fn k_range(&self) -> Result<std::ops::RangeInclusive<usize>> {
        match (self.k_min, self.k_max, self.k) {
            (Some(lo), Some(hi), _) if lo >= 1 && lo <= hi => Ok(lo..=hi),
            (Some(_), Some(_), _) => Err(Error::Config("sampling needs 1 <= k_min <= k_max".into())),
            (None, None, Some(k)) => Ok(k..=k),
            _ => Err(Error::Config("sweeps need sampling.k or both sampling.k_min and sampling.k_max".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigmas: Option<Vec<f64>>,
    /// Evenly spaced grid from `sigma_start` to `sigma_stop` inclusive.
    pub sigma_start: Option<f64>,
    pub sigma_stop: Option<f64>,
    pub sigma_count: Option<usize>,
    #[serde(default = "one")]
    pub trials: usize,
}

impl NoiseConfig {
    pub fn grid(&self) -> Result<Vec<f64>> {
        let sigmas = match (&self.sigmas, self.sigma_start, self.sigma_stop, self.sigma_count) {
            (Some(s), None, None, None) => s.clone(),
            (None, Some(a), Some(b), Some(n)) if n >= 2 => {
                (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
            }
            (None, Some(a), Some(_), Some(1)) => vec![a],
            _ => {
                return Err(Error::Config(
                    "noise needs either sigmas or all of sigma_start, sigma_stop, sigma_count".into(),
                ))
            }
        };
        if sigmas.is_empty() || sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::Config("noise sigmas must be a non-empty list of finite values >= 0".into()));
        }
        Ok(sigmas)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Table or model destination; standard output for tables when omitted.
    pub path: Option<PathBuf>,
}

/// A parsed config together with its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub text: String,
    pub source: PathBuf,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads, parses and validates a config. Relative paths resolve against
    /// the config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<LoadedConfig> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve_paths(base);
        config.validate()?;
        Ok(LoadedConfig { config, text, source: path.to_owned() })
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if self.dataset.path.is_relative() {
            self.dataset.path = base.join(&self.dataset.path);
        }
        if let Some(p) = self.output.path.as_mut().filter(|p| p.is_relative()) {
            *p = base.join(&*p);
        }
    }

    /// Checks everything that can be checked before any work starts.
    pub fn validate(&self) -> Result<()> {
        self.model.hyperparams()?;
        if !self.dataset.path.is_file() {
            return Err(Error::Config(format!("dataset {} does not exist", self.dataset.path.display())));
        }
        if self.sampling.trials == 0 {
            return Err(Error::Config("sampling.trials must be at least 1".into()));
        }
        if self.sampling.k == Some(0) {
            return Err(Error::Config("sampling.k must be at least 1".into()));
        }
        if self.sampling.k_min.is_some() || self.sampling.k_max.is_some() {
            self.sampling.k_range()?;
        }
        if let Some(noise) = &self.noise {
            noise.grid()?;
            if noise.trials == 0 {
                return Err(Error::Config("noise.trials must be at least 1".into()));
            }
        }
        for (i, l) in self.layers.iter().enumerate() {
            if let LayerConfig::Dense(doc) = l {
                doc.to_spec().map_err(|e| Error::Config(format!("layer {i}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn csv_options(&self) -> CsvOptions {
        CsvOptions {
            label_column: self.dataset.label_column.clone().unwrap_or_default(),
            has_header: self.dataset.has_header,
        }
    }
}
