//! Labelled datasets, global min/max normalization and per-class sampling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Matrix,
    labels: Vec<String>,
    /// Class labels in order of first appearance.
    classes: Vec<String>,
    class_index: BTreeMap<String, Vec<usize>>,
}

impl LabeledDataset {
    pub fn new(features: Matrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::ShapeMismatch { expected: features.rows(), found: labels.len() });
        }
        let mut classes = Vec::new();
        let mut class_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let rows = class_index.entry(l.clone()).or_insert_with(|| {
                classes.push(l.clone());
                Vec::new()
            });
            rows.push(i);
        }
        Ok(LabeledDataset { features, labels, classes, class_index })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rows_of(&self, class: &str) -> &[usize] {
        self.class_index.get(class).map_or(&[], Vec::as_slice)
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        let features = self.features.select_rows(indices);
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        LabeledDataset::new(features, labels).expect("consistent subset")
    }

    /// Same rows and labels with a replaced feature matrix of equal shape.
    pub fn with_features(&self, features: Matrix) -> Result<LabeledDataset> {
        if features.shape() != self.features.shape() {
            return Err(Error::ShapeMismatch { expected: self.features.rows(), found: features.rows() });
        }
        Ok(LabeledDataset { features, ..self.clone() })
    }

    /// One feature matrix per class, in class order.
    pub fn per_class(&self) -> Vec<(String, Matrix)> {
        self.classes.iter().map(|c| (c.clone(), self.features.select_rows(self.rows_of(c)))).collect()
    }
}

/// Global extrema used to scale a matrix into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl Extrema {
    pub fn of(data: &Matrix) -> Option<Extrema> {
        let mut it = data.as_slice().iter().copied();
        let first = it.next()?;
        let (min, max) = it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Some(Extrema { min, max })
    }

    /// `(x - min) / (max - min)` clamped to `[0, 1]`; all ones when `min == max`.
    pub fn apply(&self, data: &Matrix) -> Matrix {
        let span = self.max - self.min;
        if span <= 0.0 {
            return data.map(|_| 1.0);
        }
        data.map(|v| ((v - self.min) / span).clamp(0.0, 1.0))
    }
}

/// Normalizes by the global matrix minimum and maximum.
///
/// A constant matrix becomes all ones. An empty matrix is returned unchanged
/// with degenerate `[0, 0]` extrema.
pub fn normalize(data: &Matrix) -> (Matrix, Extrema) {
    match Extrema::of(data) {
        Some(e) => (e.apply(data), e),
        None => (data.clone(), Extrema { min: 0.0, max: 0.0 }),
    }
}

/// Draws `k` rows per class uniformly without replacement.
///
/// Returns `(train, rest)`; rows keep their original relative order in both.
pub fn sample_per_class(data: &LabeledDataset, k: usize, seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    let (train, rest) = sample_indices(data, k, seed)?;
    Ok((data.subset(&train), data.subset(&rest)))
}

/// Index form of [`sample_per_class`].
pub fn sample_indices(data: &LabeledDataset, k: usize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    for c in data.classes() {
        let available = data.rows_of(c).len();
        if available < k {
            return Err(Error::InsufficientSamples { class: c.clone(), available, requested: k });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = alloc::vec![false; data.len()];
    for c in data.classes() {
        let rows = data.rows_of(c);
        for pick in index::sample(&mut rng, rows.len(), k) {
            chosen[rows[pick]] = true;
        }
    }
    let (train, rest): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| chosen[i]);
    Ok((train, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn toy() -> LabeledDataset {
        let rows: Vec<[f64; 2]> = (0..9).map(|i| [i as f64, (i * i) as f64]).collect();
        let labels = ["a", "b", "c"].iter().cycle().take(9).map(|s| s.to_string()).collect();
        LabeledDataset::new(Matrix::from_rows(&rows).unwrap(), labels).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let (n, e) = normalize(&Matrix::from_rows(&[[0.0, 5.0], [10.0, 5.0]]).unwrap());
        assert_eq!(n, Matrix::from_rows(&[[0.0, 0.5], [1.0, 0.5]]).unwrap());
        assert_eq!(e, Extrema { min: 0.0, max: 10.0 });

        let (n, _) = normalize(&Matrix::from_rows(&[[3.0, 3.0], [3.0, 3.0]]).unwrap());
        assert_eq!(n, Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap());

        let unit = Matrix::from_rows(&[[0.0, 0.25], [1.0, 0.5]]).unwrap();
        assert_eq!(normalize(&unit).0, unit);
    }

    #[test]
    fn extrema_clamp_out_of_range_rows() {
        let e = Extrema { min: 1.0, max: 3.0 };
        let m = e.apply(&Matrix::from_rows(&[[0.0, 2.0, 5.0]]).unwrap());
        assert_eq!(m.row(0), [0.0, 0.5, 1.0]);
    }

    #[test]
    fn classes_in_order_of_appearance() {
        let d = toy();
        assert_eq!(d.classes(), ["a", "b", "c"]);
        assert_eq!(d.rows_of("b"), [1, 4, 7]);
    }

    #[test]
    fn sampling_one_per_class() {
        let (train, rest) = sample_per_class(&toy(), 1, 7).unwrap();
        assert_eq!(train.len(), 3);
        assert_eq!(rest.len(), 6);
        for c in ["a", "b", "c"] {
            assert_eq!(train.rows_of(c).len(), 1);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_indices(&toy(), 2, 99).unwrap();
        let b = sample_indices(&toy(), 2, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_too_many_names_the_class() {
        let err = sample_per_class(&toy(), 4, 0).unwrap_err();
        assert_eq!(err, Error::InsufficientSamples { class: "a".into(), available: 3, requested: 4 });
    }

    #[test]
    fn label_count_must_match_rows() {
        let m = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(LabeledDataset::new(m, alloc::vec!["x".into()]).is_err());
    }
}
