//! Dataset IO, model and code files, experiment configs and the commands
//! behind the `chaosnet` binary. The algorithms live in `chaosnet-core`.

pub mod commands;
pub mod config;
pub mod csv_io;
pub mod docs;
mod error;

pub use chaosnet_core as core;
pub use config::{ExperimentConfig, LayerConfig, Normalization};
pub use csv_io::{load_csv, read_csv, save_csv, write_csv, CsvOptions, LabelColumn, Loaded};
pub use docs::{codec_decode, codec_encode, model_from_toml, model_to_toml, uat_from_toml, uat_to_toml};
pub use error::{Error, Result};
