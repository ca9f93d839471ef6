//! Hidden layers of GLS neurons coupled to the previous layer's activity.
//!
//! Hidden neuron `j` evolves as
//!
//! ```text
//! H_j(0) = Σ_i η_ij · P_i(0) + γ_j · q_j
//! H_j(t) = Σ_i η_ij · P_i(t) + γ_j · T(H_j(t-1)),   0 < t ≤ N_max
//! ```
//!
//! where `P` is the previous layer's series (input trajectories are zero-padded
//! past their own firing time) and `Σ_i η_ij + γ_j = 1`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::map::GlsMap;
use crate::matrix::Matrix;
use crate::ttss::{fire, Hyperparams};

/// Tolerance on `Σ η + γ = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Largest double below one; coupled sums that round up to 1.0 land here.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenNeuron {
    /// `(source index, η)` pairs into the previous layer.
    pub couplings: Vec<(usize, f64)>,
    /// γ, the weight on the neuron's own mapped activity.
    pub self_weight: f64,
    pub initial_activity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec {
    pub neurons: Vec<HiddenNeuron>,
    pub map: GlsMap,
}

impl LayerSpec {
    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    /// Checks weights and initial activities; `inputs` is the previous layer size.
    pub fn validate(&self, inputs: Option<usize>) -> Result<()> {
        for (j, n) in self.neurons.iter().enumerate() {
            if n.self_weight < 0.0 || n.couplings.iter().any(|&(_, w)| !(w >= 0.0)) {
                return Err(Error::NegativeWeight { neuron: j });
            }
            let sum: f64 = n.couplings.iter().map(|&(_, w)| w).sum::<f64>() + n.self_weight;
            if !(libm::fabs(sum - 1.0) <= WEIGHT_SUM_TOLERANCE) {
                return Err(Error::WeightSum { neuron: j, sum });
            }
            if !(n.initial_activity > 0.0 && n.initial_activity < 1.0) {
                return Err(Error::param("initial_activity", n.initial_activity));
            }
            if let Some(available) = inputs {
                if let Some(&(source, _)) = n.couplings.iter().find(|&&(s, _)| s >= available) {
                    return Err(Error::SourceOutOfRange { neuron: j, source, available });
                }
            }
        }
        Ok(())
    }
}

/// Activity series of a layer: one row per neuron, `N_max + 1` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenSeries {
    values: Matrix,
}

impl HiddenSeries {
    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.cols().saturating_sub(1)
    }
}

/// Input-layer firing trajectories, zero-padded to the longest firing time.
pub fn input_layer_series(params: &Hyperparams, instance: &[f64]) -> Result<Matrix> {
    let mut trajectories = Vec::with_capacity(instance.len());
    for (k, &s) in instance.iter().enumerate() {
        trajectories.push(fire(params, s).map_err(|e| e.at(0, k))?.into_activity());
    }
    let width = trajectories.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = Matrix::zeros(trajectories.len(), width);
    for (i, t) in trajectories.iter().enumerate() {
        out.row_mut(i)[..t.len()].copy_from_slice(t);
    }
    Ok(out)
}

pub fn hidden_layer_series(spec: &LayerSpec, prev: &Matrix) -> Result<HiddenSeries> {
    spec.validate(Some(prev.rows()))?;
    let steps = prev.cols();
    let mut values = Matrix::zeros(spec.len(), steps);
    for (j, neuron) in spec.neurons.iter().enumerate() {
        let row = values.row_mut(j);
        let mut own = neuron.initial_activity;
        for (t, slot) in row.iter_mut().enumerate() {
            if t > 0 {
                own = spec.map.step(own);
            }
            let mut h = neuron.self_weight * own;
            for &(i, eta) in &neuron.couplings {
                h += eta * prev.get(i, t);
            }
            let h = if h >= 1.0 { BELOW_ONE } else { h.max(0.0) };
            *slot = h;
            own = h;
        }
    }
    Ok(HiddenSeries { values })
}

/// Hidden neurons pair up consecutive inputs; an odd last input passes through.
pub fn paired_layer_spec(n_inputs: usize, eta: f64, gamma: f64, q: f64, map: GlsMap) -> Result<LayerSpec> {
    if !(eta >= 0.0) || !(gamma >= 0.0) {
        return Err(Error::NegativeWeight { neuron: 0 });
    }
    let sum = 2.0 * eta + gamma;
    if !(libm::fabs(sum - 1.0) <= WEIGHT_SUM_TOLERANCE) {
        return Err(Error::WeightSum { neuron: 0, sum });
    }
    let neurons = (0..n_inputs.div_ceil(2))
        .map(|j| {
            let a = 2 * j;
            if a + 1 < n_inputs {
                HiddenNeuron { couplings: alloc::vec![(a, eta), (a + 1, eta)], self_weight: gamma, initial_activity: q }
            } else {
                HiddenNeuron { couplings: alloc::vec![(a, 1.0)], self_weight: 0.0, initial_activity: q }
            }
        })
        .collect();
    let spec = LayerSpec { neurons, map };
    spec.validate(Some(n_inputs))?;
    Ok(spec)
}

/// Fraction of the whole series each neuron spends above `b`.
pub fn hidden_ttss_features(series: &HiddenSeries, b: f64) -> Vec<f64> {
    let len = series.values.cols() as f64;
    series
        .values
        .iter_rows()
        .map(|row| if row.is_empty() { 0.0 } else { row.iter().filter(|&&v| v > b).count() as f64 / len })
        .collect()
}

/// Full stack for one instance: input trajectories, every hidden layer in turn,
/// then TT-SS features of the last hidden layer at its own skew.
pub fn layered_features(params: &Hyperparams, layers: &[LayerSpec], instance: &[f64]) -> Result<Vec<f64>> {
    let mut series = input_layer_series(params, instance)?;
    let mut last = None;
    for spec in layers {
        let h = hidden_layer_series(spec, &series)?;
        series = h.values.clone();
        last = Some((h, spec.map.skew()));
    }
    match last {
        Some((h, b)) => Ok(hidden_ttss_features(&h, b)),
        None => Err(Error::EmptyInput),
    }
}
