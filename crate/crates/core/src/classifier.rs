//! Mean-representation training and cosine-similarity prediction.

use alloc::string::String;
use alloc::vec::Vec;

use crate::data::Extrema;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multilayer::{layered_features, LayerSpec};
use crate::ttss::{extract_features, Hyperparams};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub classes: Vec<String>,
    /// One mean feature vector per class.
    pub mean_vectors: Vec<Vec<f64>>,
    pub params: Hyperparams,
    /// Extrema used to scale raw inputs, if the model was fitted on raw data.
    pub normalization: Option<Extrema>,
    /// Hidden layers between the input neurons and the output layer.
    pub layers: Vec<LayerSpec>,
}

impl TrainedModel {
    /// Number of input columns the model expects.
    pub fn input_dim(&self) -> Option<usize> {
        match self.layers.first() {
            None => self.mean_vectors.first().map(Vec::len),
            Some(first) => first.neurons.iter().flat_map(|n| n.couplings.iter().map(|&(i, _)| i + 1)).max(),
        }
    }

    pub fn feature_dim(&self) -> usize {
        self.mean_vectors.first().map_or(0, Vec::len)
    }

    /// Scales raw rows with the stored extrema (clamped into `[0, 1]`).
    pub fn prepare(&self, data: &Matrix, already_normalized: bool) -> Matrix {
        match (&self.normalization, already_normalized) {
            (Some(e), false) => e.apply(data),
            _ => data.clone(),
        }
    }

    /// TT-SS feature matrix for normalized rows, through hidden layers if any.
    pub fn features(&self, normalized: &Matrix) -> Result<Matrix> {
        features_for(&self.params, &self.layers, normalized)
    }
}

pub(crate) fn features_for(params: &Hyperparams, layers: &[LayerSpec], data: &Matrix) -> Result<Matrix> {
    if layers.is_empty() {
        return extract_features(data, params);
    }
    let width = layers.last().map_or(0, LayerSpec::len);
    let mut out = Matrix::empty(width);
    for (i, row) in data.iter_rows().enumerate() {
        let f = layered_features(params, layers, row).map_err(|e| e.in_row(i))?;
        out.push_row(&f)?;
    }
    Ok(out)
}

/// Trains a single-layer model from per-class normalized matrices.
pub fn train(per_class: &[(String, Matrix)], params: &Hyperparams) -> Result<TrainedModel> {
    train_layered(per_class, params, &[])
}

pub fn train_layered(
    per_class: &[(String, Matrix)],
    params: &Hyperparams,
    layers: &[LayerSpec],
) -> Result<TrainedModel> {
    params.validate()?;
    if per_class.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = per_class[0].1.cols();
    let mut mean_vectors = Vec::with_capacity(per_class.len());
    for (label, u) in per_class {
        if u.is_empty() {
            return Err(Error::EmptyClass(label.clone()));
        }
        if u.cols() != n {
            return Err(Error::ShapeMismatch { expected: n, found: u.cols() });
        }
        let v = features_for(params, layers, u)?;
        mean_vectors.push(v.column_means().expect("non-empty class"));
    }
    Ok(TrainedModel {
        classes: per_class.iter().map(|(l, _)| l.clone()).collect(),
        mean_vectors,
        params: *params,
        normalization: None,
        layers: layers.to_vec(),
    })
}

/// `u·v / (‖u‖‖v‖)`, or 0 when either vector is zero.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::ShapeMismatch { expected: u.len(), found: v.len() });
    }
    Ok(cosine_unchecked(u, v))
}

fn cosine_unchecked(u: &[f64], v: &[f64]) -> f64 {
    let (mut dot, mut uu, mut vv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if uu == 0.0 || vv == 0.0 {
        return 0.0;
    }
    (dot / (libm::sqrt(uu) * libm::sqrt(vv))).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: String,
    /// Position of `label` in the model's class list.
    pub class: usize,
    pub similarities: Vec<f64>,
}

/// Argmax of cosine similarity; ties go to the smallest class index.
pub fn classify_features(classes: &[String], mean_vectors: &[Vec<f64>], features: &Matrix) -> Result<Vec<Prediction>> {
    let dim = mean_vectors.first().map_or(0, Vec::len);
    if features.cols() != dim {
        return Err(Error::ShapeMismatch { expected: dim, found: features.cols() });
    }
    Ok(features
        .iter_rows()
        .map(|f| {
            let similarities: Vec<f64> = mean_vectors.iter().map(|m| cosine_unchecked(f, m)).collect();
            let mut best = 0;
            for (k, &s) in similarities.iter().enumerate().skip(1) {
                if s > similarities[best] {
                    best = k;
                }
            }
            Prediction { label: classes[best].clone(), class: best, similarities }
        })
        .collect())
}

pub fn predict(model: &TrainedModel, test: &Matrix, already_normalized: bool) -> Result<Vec<Prediction>> {
    if let Some(n) = model.input_dim() {
        if model.layers.is_empty() && test.cols() != n {
            return Err(Error::ShapeMismatch { expected: n, found: test.cols() });
        }
    }
    let features = model.features(&model.prepare(test, already_normalized))?;
    classify_features(&model.classes, &model.mean_vectors, &features)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `confusion[true][predicted]`, in the model's class order.
    pub confusion: Vec<Vec<usize>>,
}

pub fn evaluate(
    model: &TrainedModel,
    test: &Matrix,
    true_labels: &[String],
    already_normalized: bool,
) -> Result<Evaluation> {
    if true_labels.len() != test.rows() {
        return Err(Error::ShapeMismatch { expected: test.rows(), found: true_labels.len() });
    }
    let predictions = predict(model, test, already_normalized)?;
    score(&model.classes, &predictions, true_labels)
}

/// Accuracy and confusion counts for predictions against true labels.
pub fn score(classes: &[String], predictions: &[Prediction], true_labels: &[String]) -> Result<Evaluation> {
    if predictions.len() != true_labels.len() {
        return Err(Error::ShapeMismatch { expected: predictions.len(), found: true_labels.len() });
    }
    let s = classes.len();
    let mut confusion = alloc::vec![alloc::vec![0usize; s]; s];
    let mut correct = 0usize;
    for (p, t) in predictions.iter().zip(true_labels) {
        let ti = classes.iter().position(|c| c == t).ok_or_else(|| Error::UnknownLabel(t.clone()))?;
        confusion[ti][p.class] += 1;
        if ti == p.class {
            correct += 1;
        }
    }
    let accuracy = if predictions.is_empty() { 0.0 } else { correct as f64 / predictions.len() as f64 };
    Ok(Evaluation { accuracy, confusion })
}
