//! TOML documents for trained models and encoded data.
//!
//! Floats are written in shortest round-trip form, so a save/load cycle is
//! exact. Rationals are written as `"numerator/denominator"` strings.

use std::str::FromStr;

use chaosnet_core::coding::{CodedBits, UatCode};
use chaosnet_core::{Extrema, GlsMap, HiddenNeuron, Hyperparams, LayerSpec, MapKind, Skew, TrainedModel};
use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "chaosnet-model";
pub const CODEC_FORMAT: &str = "chaosnet-codec";
pub const UAT_FORMAT: &str = "chaosnet-uat";
pub const VERSION: i64 = 1;

/// Bits per independently coded block in codec files.
pub const BLOCK_BITS: usize = 8192;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    version: i64,
    params: ParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalization: Option<ExtremaDoc>,
    classes: Vec<ClassDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    layers: Vec<LayerDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    q: f64,
    b: f64,
    map: String,
    epsilon: f64,
    max_iters: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtremaDoc {
    min: f64,
    max: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    label: String,
    mean: Vec<f64>,
}

/// Explicit hidden layer, shared with experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub map: String,
    pub skew: f64,
    pub neurons: Vec<NeuronDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuronDoc {
    pub sources: Vec<usize>,
    pub weights: Vec<f64>,
    pub self_weight: f64,
    pub initial_activity: f64,
}

pub fn parse_map_kind(name: &str) -> Result<MapKind> {
    MapKind::from_str(name).map_err(|_| Error::Config(format!("unknown map kind {name:?}")))
}

impl LayerDoc {
    pub fn from_spec(spec: &LayerSpec) -> Self {
        LayerDoc {
            map: spec.map.kind().name().into(),
            skew: spec.map.skew(),
            neurons: spec
                .neurons
                .iter()
                .map(|n| NeuronDoc {
                    sources: n.couplings.iter().map(|c| c.0).collect(),
                    weights: n.couplings.iter().map(|c| c.1).collect(),
                    self_weight: n.self_weight,
                    initial_activity: n.initial_activity,
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<LayerSpec> {
        let map = GlsMap::new(parse_map_kind(&self.map)?, self.skew)?;
        let mut neurons = Vec::with_capacity(self.neurons.len());
        for (j, n) in self.neurons.iter().enumerate() {
            if n.sources.len() != n.weights.len() {
                return Err(Error::Config(format!(
                    "neuron {j}: {} sources but {} weights",
                    n.sources.len(),
                    n.weights.len()
                )));
            }
            neurons.push(HiddenNeuron {
                couplings: n.sources.iter().copied().zip(n.weights.iter().copied()).collect(),
                self_weight: n.self_weight,
                initial_activity: n.initial_activity,
            });
        }
        Ok(LayerSpec { neurons, map })
    }
}

/// Reads `format` and `version` before the full parse so that newer files
/// fail with a version error rather than a field error.
fn check_header(text: &str, kind: &'static str, format: &str) -> Result<()> {
    let table: toml::Table = text.parse()?;
    match table.get("format").and_then(|v| v.as_str()) {
        Some(f) if f == format => {}
        Some(f) => return Err(Error::format(kind, format!("format is {f:?}, expected {format:?}"))),
        None => return Err(Error::format(kind, "missing format key")),
    }
    match table.get("version").and_then(|v| v.as_integer()) {
        Some(VERSION) => Ok(()),
        Some(v) => Err(Error::UnsupportedVersion { kind, found: v }),
        None => Err(Error::format(kind, "missing integer version key")),
    }
}

fn to_toml<T: Serialize>(doc: &T, kind: &'static str) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::format(kind, e.to_string()))
}

pub fn model_to_toml(model: &TrainedModel) -> Result<String> {
    let doc = ModelDoc {
        format: MODEL_FORMAT.into(),
        version: VERSION,
        params: ParamsDoc {
            q: model.params.q,
            b: model.params.b,
            map: model.params.map_kind.name().into(),
            epsilon: model.params.epsilon,
            max_iters: model.params.max_iters as u64,
        },
        normalization: model.normalization.map(|e| ExtremaDoc { min: e.min, max: e.max }),
        classes: model
            .classes
            .iter()
            .zip(&model.mean_vectors)
            .map(|(label, mean)| ClassDoc { label: label.clone(), mean: mean.clone() })
            .collect(),
        layers: model.layers.iter().map(LayerDoc::from_spec).collect(),
    };
    to_toml(&doc, "model")
}

pub fn model_from_toml(text: &str) -> Result<TrainedModel> {
    check_header(text, "model", MODEL_FORMAT)?;
    let doc: ModelDoc = toml::from_str(text)?;
    let max_iters = usize::try_from(doc.params.max_iters).map_err(|_| Error::format("model", "max_iters too large"))?;
    let params = Hyperparams::new(doc.params.q, doc.params.b, parse_map_kind(&doc.params.map)?, doc.params.epsilon)?
        .with_max_iters(max_iters)?;
    let layers = doc.layers.iter().map(LayerDoc::to_spec).collect::<Result<Vec<_>>>()?;
    let mut inputs = None;
    for layer in &layers {
        layer.validate(inputs)?;
        inputs = Some(layer.len());
    }
    if doc.classes.is_empty() {
        return Err(Error::format("model", "no classes"));
    }
    let dim = doc.classes[0].mean.len();
    for (i, c) in doc.classes.iter().enumerate() {
        if c.mean.len() != dim {
            return Err(Error::format(
                "model",
                format!("class {:?} has {} components, expected {dim}", c.label, c.mean.len()),
            ));
        }
        if doc.classes[..i].iter().any(|d| d.label == c.label) {
            return Err(Error::format("model", format!("duplicate class {:?}", c.label)));
        }
    }
    if let Some(last) = layers.last() {
        if last.len() != dim {
            return Err(Error::format(
                "model",
                format!("last layer has {} neurons, mean vectors have {dim}", last.len()),
            ));
        }
    }
    Ok(TrainedModel {
        classes: doc.classes.iter().map(|c| c.label.clone()).collect(),
        mean_vectors: doc.classes.into_iter().map(|c| c.mean).collect(),
        params,
        normalization: doc.normalization.map(|e| Extrema { min: e.min, max: e.max }),
        layers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamDoc {
    len: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
}

impl StreamDoc {
    fn from_coded(coded: &CodedBits) -> Self {
        match coded {
            CodedBits::Constant { bit, len } => StreamDoc { len: *len as u64, constant: Some(*bit), x: None, p: None },
            CodedBits::Interval { x, p, len } => StreamDoc {
                len: *len as u64,
                constant: None,
                x: Some(format!("{}/{}", x.numer(), x.denom())),
                p: Some(p.to_string()),
            },
        }
    }

    fn to_coded(&self, kind: &'static str) -> Result<CodedBits> {
        let len = usize::try_from(self.len).map_err(|_| Error::format(kind, "stream too long"))?;
        match (self.constant, &self.x, &self.p) {
            (Some(bit), None, None) => Ok(CodedBits::Constant { bit, len }),
            (None, Some(x), Some(p)) => {
                let (xn, xd) = split_ratio(x, kind)?;
                let (pn, pd) = split_ratio(p, kind)?;
                let x = Ratio::new(parse_big(xn, kind)?, parse_big(xd, kind)?);
                let parse_u64 = |s: &str| s.parse::<u64>().map_err(|_| Error::format(kind, format!("bad skew {p:?}")));
                let p = Skew::new(parse_u64(pn)?, parse_u64(pd)?)?;
                Ok(CodedBits::Interval { x, p, len })
            }
            _ => Err(Error::format(kind, "a stream needs either `constant` or both `x` and `p`")),
        }
    }
}

fn split_ratio<'a>(s: &'a str, kind: &'static str) -> Result<(&'a str, &'a str)> {
    s.split_once('/').ok_or_else(|| Error::format(kind, format!("expected a ratio a/b, found {s:?}")))
}

fn parse_big(s: &str, kind: &'static str) -> Result<BigUint> {
    BigUint::from_str(s).map_err(|_| Error::format(kind, format!("bad integer {s:?}")))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodecDoc {
    format: String,
    version: i64,
    bytes: u64,
    blocks: Vec<StreamDoc>,
}

/// Encodes bytes as independently coded blocks of [`BLOCK_BITS`] bits.
pub fn codec_encode(bytes: &[u8]) -> Result<String> {
    let bits = chaosnet_core::coding::bytes_to_bits(bytes);
    let blocks =
        bits.chunks(BLOCK_BITS).map(|c| StreamDoc::from_coded(&chaosnet_core::coding::encode_stream(c))).collect();
    to_toml(&CodecDoc { format: CODEC_FORMAT.into(), version: VERSION, bytes: bytes.len() as u64, blocks }, "codec")
}

pub fn codec_decode(text: &str) -> Result<Vec<u8>> {
    check_header(text, "codec", CODEC_FORMAT)?;
    let doc: CodecDoc = toml::from_str(text)?;
    let mut bits = Vec::new();
    for block in &doc.blocks {
        bits.extend(chaosnet_core::coding::decode_stream(&block.to_coded("codec")?)?);
    }
    if bits.len() as u64 != doc.bytes * 8 {
        return Err(Error::format(
            "codec",
            format!("blocks hold {} bits, header says {} bytes", bits.len(), doc.bytes),
        ));
    }
    Ok(chaosnet_core::coding::bits_to_bytes(&bits))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UatDoc {
    format: String,
    version: i64,
    scale: u64,
    offset: f64,
    len: u64,
    planes: Vec<StreamDoc>,
}

pub fn uat_to_toml(code: &UatCode) -> Result<String> {
    to_toml(
        &UatDoc {
            format: UAT_FORMAT.into(),
            version: VERSION,
            scale: code.scale,
            offset: code.offset,
            len: code.len as u64,
            planes: code.planes.iter().map(StreamDoc::from_coded).collect(),
        },
        "uat",
    )
}

pub fn uat_from_toml(text: &str) -> Result<UatCode> {
    check_header(text, "uat", UAT_FORMAT)?;
    let doc: UatDoc = toml::from_str(text)?;
    Ok(UatCode {
        scale: doc.scale,
        offset: doc.offset,
        len: usize::try_from(doc.len).map_err(|_| Error::format("uat", "too many samples"))?,
        planes: doc.planes.iter().map(|p| p.to_coded("uat")).collect::<Result<_>>()?,
    })
}
