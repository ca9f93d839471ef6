//! Bitplane GLS code of a bounded sampled function.
//!
//! The samples are shifted by their minimum, scaled by `S = floor(1/(2ε)) + 1`
//! and rounded, which bounds the per-sample quantization error by
//! `1/(2S) < ε`. The strict margin absorbs the rounding of the reconstruction
//! when a sample sits exactly on a quantization tie.
//! The quantized integers are split into bitplanes (most significant first)
//! and each plane is GLS-encoded with its own empirical skew.

use alloc::vec::Vec;

use super::{decode_stream, encode_stream, CodedBits};
use crate::error::{Error, Result};

/// Largest quantization level; keeps levels exactly representable as `f64`.
const MAX_LEVEL: f64 = (1u64 << 53) as f64;

#[derive(Debug, Clone, PartialEq)]
pub struct UatCode {
    /// Global scale `S`.
    pub scale: u64,
    /// Shift subtracted before scaling (the sample minimum).
    pub offset: f64,
    /// Number of samples.
    pub len: usize,
    /// Encoded bitplanes, most significant first.
    pub planes: Vec<CodedBits>,
}

impl UatCode {
    pub fn bitplane_count(&self) -> usize {
        self.planes.len()
    }
}

pub fn uat_encode(samples: &[f64], epsilon: f64) -> Result<UatCode> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", epsilon));
    }
    if let Some(&bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::param("sample", bad));
    }
    let scale_f = libm::floor(1.0 / (2.0 * epsilon)) + 1.0;
    let offset = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - offset;
    if !(scale_f < MAX_LEVEL) || !(span * scale_f < MAX_LEVEL) {
        return Err(Error::QuantizationOverflow { span, scale: scale_f as u64 });
    }
    let scale = scale_f as u64;
    let levels: Vec<u64> = samples.iter().map(|&g| libm::round((g - offset) * scale_f) as u64).collect();
    let top = levels.iter().copied().max().unwrap_or(0);
    let planes_needed = (64 - top.leading_zeros()).max(1);
    let planes = (0..planes_needed)
        .rev()
        .map(|k| {
            let plane: Vec<bool> = levels.iter().map(|&a| (a >> k) & 1 == 1).collect();
            encode_stream(&plane)
        })
        .collect();
    Ok(UatCode { scale, offset, len: samples.len(), planes })
}

pub fn uat_decode(code: &UatCode) -> Result<Vec<f64>> {
    if code.scale == 0 {
        return Err(Error::param("scale", 0.0));
    }
    if code.planes.len() > 63 {
        return Err(Error::param("bitplanes", code.planes.len() as f64));
    }
    let mut levels = alloc::vec![0u64; code.len];
    for (idx, plane) in code.planes.iter().enumerate() {
        if plane.len() != code.len {
            return Err(Error::InconsistentPlane { plane: idx, expected: code.len, found: plane.len() });
        }
        let bits = decode_stream(plane)?;
        for (a, b) in levels.iter_mut().zip(bits) {
            *a = (*a << 1) | b as u64;
        }
    }
    let scale = code.scale as f64;
    Ok(levels.into_iter().map(|a| code.offset + a as f64 / scale).collect())
}
