//! Additive Gaussian noise on learned mean vectors.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::classifier::{classify_features, score, TrainedModel};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTrial {
    pub sigma: f64,
    /// Realized SNR; `+inf` when no noise was added.
    pub snr_db: f64,
    pub accuracy: f64,
    pub seed: u64,
}

/// Adds independent `N(0, σ²)` draws to every mean-vector component.
/// Perturbed components are not clamped.
pub fn perturb_model(model: &TrainedModel, sigma: f64, seed: u64) -> Result<(TrainedModel, Vec<Vec<f64>>)> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", sigma));
    }
    let mut perturbed = model.clone();
    let noise: Vec<Vec<f64>> = if sigma == 0.0 {
        model.mean_vectors.iter().map(|m| alloc::vec![0.0; m.len()]).collect()
    } else {
        let normal = Normal::new(0.0, sigma).map_err(|_| Error::param("sigma", sigma))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        model.mean_vectors.iter().map(|m| m.iter().map(|_| normal.sample(&mut rng)).collect()).collect()
    };
    for (m, n) in perturbed.mean_vectors.iter_mut().zip(&noise) {
        for (v, e) in m.iter_mut().zip(n) {
            *v += e;
        }
    }
    Ok((perturbed, noise))
}

/// `10 log10(Σ M² / Σ noise²)` over all components.
pub fn snr_db(model: &TrainedModel, noise: &[Vec<f64>]) -> Result<f64> {
    if noise.len() != model.mean_vectors.len() {
        return Err(Error::ShapeMismatch { expected: model.mean_vectors.len(), found: noise.len() });
    }
    let mut signal = 0.0;
    let mut power = 0.0;
    for (m, n) in model.mean_vectors.iter().zip(noise) {
        if m.len() != n.len() {
            return Err(Error::ShapeMismatch { expected: m.len(), found: n.len() });
        }
        signal += m.iter().map(|v| v * v).sum::<f64>();
        power += n.iter().map(|v| v * v).sum::<f64>();
    }
    if power == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(signal / power))
}

/// Seed for one `(σ index, trial)` cell of a sweep (SplitMix64 finalizer).
pub fn trial_seed(base: u64, sigma_index: usize, trial: usize) -> u64 {
    let mut z = base
        .wrapping_add((sigma_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Perturb–evaluate sweep. Test features are extracted once since noise only
/// touches the mean vectors. Output is ordered by σ (as given), then trial.
pub fn noise_sweep(
    model: &TrainedModel,
    test: &Matrix,
    true_labels: &[String],
    already_normalized: bool,
    sigmas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<NoiseTrial>> {
    if sigmas.is_empty() {
        return Err(Error::EmptyInput);
    }
    if true_labels.len() != test.rows() {
        return Err(Error::ShapeMismatch { expected: test.rows(), found: true_labels.len() });
    }
    let features = model.features(&model.prepare(test, already_normalized))?;
    let mut out = Vec::with_capacity(sigmas.len() * trials);
    for (si, &sigma) in sigmas.iter().enumerate() {
        for trial in 0..trials {
            let s = trial_seed(seed, si, trial);
            let (noisy, noise) = perturb_model(model, sigma, s)?;
            let predictions = classify_features(&noisy.classes, &noisy.mean_vectors, &features)?;
            let accuracy = score(&noisy.classes, &predictions, true_labels)?.accuracy;
            out.push(NoiseTrial { sigma, snr_db: snr_db(model, &noise)?, accuracy, seed: s });
        }
    }
    Ok(out)
}
