//! Topological-transitivity firing and the TT-SS feature.
//!
//! A neuron starts at its initial activity `q` and iterates its map until the
//! orbit lands in the open interval `(stimulus - ε, stimulus + ε)`. The number
//! of steps taken is the firing time `N`. The TT-SS feature is
//!
//! ```text
//! p = #{ t in 0..N : A(t) > b } / N
//! ```
//!
//! i.e. the initial activity is counted, the terminal value (the one inside the
//! neighbourhood) is not, the comparison is strict, and `N = 0` gives `p = 0`.
//! This is the only convention that reproduces the published worked example on
//! every entry whose orbit is short enough to be insensitive to floating-point
//! rounding (see `tests/golden.rs`).

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, NonConvergence, Result};
use crate::map::{GlsMap, MapKind};
use crate::matrix::Matrix;

pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// Neuron hyperparameters shared by every input neuron of a layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    /// Initial neural activity.
    pub q: f64,
    /// Discrimination threshold, also the map skew.
    pub b: f64,
    pub map_kind: MapKind,
    /// Neighbourhood radius around the stimulus.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Hyperparams {
    pub fn new(q: f64, b: f64, map_kind: MapKind, epsilon: f64) -> Result<Self> {
        let p = Hyperparams { q, b, map_kind, epsilon, max_iters: DEFAULT_MAX_ITERS };
        p.validate()?;
        Ok(p)
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Result<Self> {
        self.max_iters = max_iters;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::param("q", self.q));
        }
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::param("b", self.b));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::param("epsilon", self.epsilon));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", 0.0));
        }
        Ok(())
    }

    pub fn map(&self) -> GlsMap {
        GlsMap::new(self.map_kind, self.b).expect("validated skew")
    }
}

/// Published per-dataset settings.
pub mod presets {
    use super::{Hyperparams, DEFAULT_MAX_ITERS};
    use crate::map::MapKind;

    const fn hp(q: f64, b: f64, map_kind: MapKind, epsilon: f64) -> Hyperparams {
        Hyperparams { q, b, map_kind, epsilon, max_iters: DEFAULT_MAX_ITERS }
    }

    pub const MNIST: Hyperparams = hp(0.3360, 0.3310000, MapKind::SkewBinary, 0.01);
    pub const KDDCUP99: Hyperparams = hp(0.6000, 0.3350000, MapKind::SkewTent, 0.01);
    pub const IRIS: Hyperparams = hp(0.6000, 0.9867556, MapKind::SkewBinary, 0.01);
    pub const EXOPLANET: Hyperparams = hp(0.26242424242424245, 0.1490000, MapKind::SkewTent, 0.01);
    pub const EXOPLANET_NO_SURFACE_TEMP: Hyperparams = EXOPLANET;
    pub const EXOPLANET_RESTRICTED: Hyperparams = hp(0.9500000000000006, 0.4760000, MapKind::SkewTent, 0.001);

    pub fn by_name(name: &str) -> Option<Hyperparams> {
        Some(match name {
            "mnist" => MNIST,
            "kddcup99" => KDDCUP99,
            "iris" => IRIS,
            "exoplanet" => EXOPLANET,
            "exoplanet-no-surface-temp" => EXOPLANET_NO_SURFACE_TEMP,
            "exoplanet-restricted" => EXOPLANET_RESTRICTED,
            _ => return None,
        })
    }
}

/// Activity `[A(0) = q, ..., A(N)]` of one neuron for one stimulus.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringTrajectory {
    activity: Vec<f64>,
}

impl FiringTrajectory {
    pub fn activity(&self) -> &[f64] {
        &self.activity
    }

    pub fn firing_time(&self) -> usize {
        self.activity.len() - 1
    }

    pub fn into_activity(self) -> Vec<f64> {
        self.activity
    }
}

fn check_stimulus(stimulus: f64) -> Result<()> {
    if (0.0..=1.0).contains(&stimulus) {
        Ok(())
    } else {
        Err(Error::InvalidStimulus(stimulus))
    }
}

fn no_firing(params: &Hyperparams, stimulus: f64) -> Error {
    Error::NonConvergence(Box::new(NonConvergence {
        q: params.q,
        stimulus,
        epsilon: params.epsilon,
        max_iters: params.max_iters,
        row: None,
        col: None,
    }))
}

/// Runs the neuron from `q` until it enters the stimulus neighbourhood.
pub fn fire(params: &Hyperparams, stimulus: f64) -> Result<FiringTrajectory> {
    check_stimulus(stimulus)?;
    let map = params.map();
    let mut x = params.q;
    let mut activity = alloc::vec![x];
    while libm::fabs(x - stimulus) >= params.epsilon {
        if activity.len() > params.max_iters {
            return Err(no_firing(params, stimulus));
        }
        x = map.step(x);
        activity.push(x);
    }
    Ok(FiringTrajectory { activity })
}

pub fn ttss_feature(traj: &FiringTrajectory, b: f64) -> f64 {
    let n = traj.firing_time();
    if n == 0 {
        return 0.0;
    }
    let h = traj.activity[..n].iter().filter(|&&a| a > b).count();
    h as f64 / n as f64
}

/// Feature of a single stimulus without materialising the trajectory.
/// Bit-identical to `ttss_feature(&fire(params, stimulus)?, params.b)`.
pub fn stimulus_feature(params: &Hyperparams, stimulus: f64) -> Result<f64> {
    check_stimulus(stimulus)?;
    let map = params.map();
    let b = params.b;
    let mut x = params.q;
    let mut n = 0usize;
    let mut h = 0usize;
    while libm::fabs(x - stimulus) >= params.epsilon {
        if n >= params.max_iters {
            return Err(no_firing(params, stimulus));
        }
        if x > b {
            h += 1;
        }
        x = map.step(x);
        n += 1;
    }
    Ok(if n == 0 { 0.0 } else { h as f64 / n as f64 })
}

/// Element-wise TT-SS features; output has the input's shape.
pub fn extract_features(data: &Matrix, params: &Hyperparams) -> Result<Matrix> {
    params.validate()?;
    let (rows, cols) = data.shape();
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        let src = data.row(i);
        let dst = out.row_mut(i);
        for (k, (&s, d)) in src.iter().zip(dst.iter_mut()).enumerate() {
            *d = stimulus_feature(params, s).map_err(|e| e.at(i, k))?;
        }
    }
    Ok(out)
}
