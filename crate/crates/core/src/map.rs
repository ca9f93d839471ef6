//! Skew-tent and skew-binary GLS maps on `[0, 1)`.
//!
//! Both maps share the left branch `x / b` on `[0, b)`. On `[b, 1)` the
//! skew-binary map continues increasing, `(x - b) / (1 - b)`, while the
//! skew-tent map folds back, `(1 - x) / (1 - b)`. A branch that would return
//! exactly `1.0` (the tent at `x = b`) returns `0.0` instead so the codomain
//! stays `[0, 1)`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    SkewTent,
    SkewBinary,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::SkewTent => "skew-tent",
            MapKind::SkewBinary => "skew-binary",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for MapKind {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "skew-tent" | "skew_tent" | "SkewTent" | "tent" => Ok(MapKind::SkewTent),
            "skew-binary" | "skew_binary" | "SkewBinary" | "binary" => Ok(MapKind::SkewBinary),
            _ => Err(()),
        }
    }
}

/// Partition symbol: `L` for `[0, b)`, `R` for `[b, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn bit(self) -> u8 {
        match self {
            Symbol::L => 0,
            Symbol::R => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolSequence(pub Vec<Symbol>);

impl SymbolSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Symbol::L => "L",
                Symbol::R => "R",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Nats,
    Bits,
}

/// A GLS map with its skew (branch point) `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlsMap {
    kind: MapKind,
    skew: f64,
}

impl GlsMap {
    pub fn new(kind: MapKind, skew: f64) -> Result<Self> {
        if !(skew > 0.0 && skew < 1.0) {
            return Err(Error::param("skew", skew));
        }
        Ok(GlsMap { kind, skew })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn skew(&self) -> f64 {
        self.skew
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.step(x))
    }

    /// Unchecked single step; callers guarantee `x` is in `[0, 1)`.
    #[inline]
    pub(crate) fn step(&self, x: f64) -> f64 {
        let b = self.skew;
        let y = if x < b {
            x / b
        } else {
            match self.kind {
                MapKind::SkewBinary => (x - b) / (1.0 - b),
                MapKind::SkewTent => (1.0 - x) / (1.0 - b),
            }
        };
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    }

    /// Which branch `apply` takes for `x`.
    pub fn branch(&self, x: f64) -> Symbol {
        if x < self.skew {
            Symbol::L
        } else {
            Symbol::R
        }
    }

    /// `[x0, T(x0), ..., T^n(x0)]`.
    pub fn iterate(&self, x0: f64, n: usize) -> Result<Vec<f64>> {
        let mut x = self.apply(x0).map(|_| x0)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(x);
        for _ in 0..n {
            x = self.step(x);
            out.push(x);
        }
        Ok(out)
    }

    /// `-b ln b - (1-b) ln(1-b)`; in bits this is the binary entropy of the
    /// symbolic dynamics.
    pub fn lyapunov_exponent(&self, base: LogBase) -> f64 {
        lyapunov_exponent(self.skew, base)
    }
}

pub fn lyapunov_exponent(b: f64, base: LogBase) -> f64 {
    let nats = -b * libm::log(b) - (1.0 - b) * libm::log(1.0 - b);
    match base {
        LogBase::Nats => nats,
        LogBase::Bits => nats / core::f64::consts::LN_2,
    }
}

/// Itinerary of `trajectory` relative to the partition at `b`; `b` itself is `R`.
pub fn symbolize(trajectory: &[f64], b: f64) -> SymbolSequence {
    SymbolSequence(trajectory.iter().map(|&x| if x < b { Symbol::L } else { Symbol::R }).collect())
}
