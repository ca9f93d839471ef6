//! Chaotic GLS-neuron classification core.
//!
//! Every neuron is a one-dimensional Generalized Lüroth Series map (skew-tent or
//! skew-binary). A neuron fires from its initial activity until its orbit enters
//! the ε-neighbourhood of the stimulus; the fraction of that firing time spent
//! above the skew threshold is the neuron's TT-SS feature. Class models are the
//! per-class mean feature vectors and prediction is cosine-similarity argmax.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV ingestion and
//! the command-line tool live in the `chaosnet` companion crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod coding;
pub mod data;
mod error;
pub mod map;
pub mod matrix;
pub mod multilayer;
pub mod noise;
pub mod ttss;

pub use classifier::{cosine_similarity, evaluate, predict, train, Evaluation, Prediction, TrainedModel};
pub use coding::{CodingInterval, Skew};
pub use data::{normalize, sample_per_class, Extrema, LabeledDataset};
pub use error::{Error, NonConvergence, Result};
pub use map::{GlsMap, LogBase, MapKind, Symbol, SymbolSequence};
pub use matrix::Matrix;
pub use multilayer::{HiddenNeuron, HiddenSeries, LayerSpec};
pub use noise::NoiseTrial;
pub use ttss::{extract_features, fire, ttss_feature, FiringTrajectory, Hyperparams};
