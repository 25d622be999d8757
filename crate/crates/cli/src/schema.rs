//! The JSON model-file format.

use std::path::Path;

use bbloc_core::coefficients::{enumerate_witnesses, CoefficientError};
use bbloc_core::complexes::FixedPoint;
use bbloc_core::lattice::{Rat, Weight};
use bbloc_core::models::{load_generic, ChainSpec, GenericSpec, Model, SrModel, ToricModel, WitnessSpec};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    pub fn parse(&self) -> Result<Rat, CliError> {
        match self {
            RatRepr::Int(n) => Ok(Rat::from_integer((*n).into())),
            RatRepr::Str(s) => parse_rat(s),
        }
    }
}

impl From<&Rat> for RatRepr {
    fn from(r: &Rat) -> Self {
        RatRepr::Str(r.to_string())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    let bad = || CliError::Input(format!("{s:?} is not a rational number"));
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_weight(w: &[RatRepr]) -> Result<Weight, CliError> {
    Ok(Weight::new(w.iter().map(RatRepr::parse).collect::<Result<_, _>>()?))
}

pub fn weight_repr(w: &Weight) -> Vec<RatRepr> {
    w.coords().iter().map(RatRepr::from).collect()
}

/// Golden values checked by `verify`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_vector: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal_chains: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<String>,
    /// generating faces, usually the facets
    pub faces: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_s: Option<Vec<RatRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_t: Option<Vec<Vec<RatRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricVertex {
    pub id: String,
    pub coords: Vec<RatRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<ToricVertex>,
    pub xi: Vec<RatRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub id: String,
    pub phi_t: Vec<RatRepr>,
    pub phi_s: RatRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_weights: Option<Vec<Vec<RatRepr>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub components: Vec<String>,
    pub multiplicities: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRecord {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unverified: bool,
    pub points: Vec<PointRecord>,
    pub chains: Vec<ChainRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Sr(SrPayload),
    Toric(ToricPayload),
    Generic(GenericPayload),
}

impl ModelFile {
    pub fn name(&self) -> Option<&str> {
        match self {
            ModelFile::Sr(p) => p.name.as_deref(),
            ModelFile::Toric(p) => p.name.as_deref(),
            ModelFile::Generic(p) => p.name.as_deref(),
        }
    }

    pub fn expected(&self) -> Option<&Expected> {
        match self {
            ModelFile::Sr(p) => p.expected.as_ref(),
            ModelFile::Toric(p) => p.expected.as_ref(),
            ModelFile::Generic(p) => p.expected.as_ref(),
        }
    }

    pub fn parse_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn build(&self) -> Result<Model, CliError> {
        match self {
            ModelFile::Sr(p) => build_sr(p),
            ModelFile::Toric(p) => build_toric(p),
            ModelFile::Generic(p) => build_generic(p),
        }
    }
}

fn build_sr(p: &SrPayload) -> Result<Model, CliError> {
    let index = |id: &String| {
        p.vertices
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| CliError::Input(format!("face mentions unknown vertex {id:?}")))
    };
    let faces = p
        .faces
        .iter()
        .map(|f| {
            let mut idx: Vec<usize> = f.iter().map(index).collect::<Result<_, _>>()?;
            idx.sort_unstable();
            idx.dedup();
            Ok(idx)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let phi_s = p
        .phi_s
        .as_ref()
        .map(|v| v.iter().map(RatRepr::parse).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let phi_t = p
        .phi_t
        .as_ref()
        .map(|v| v.iter().map(|w| parse_weight(w)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    Ok(Model::Sr(SrModel::new(p.vertices.clone(), faces, phi_s, phi_t)?))
}

fn build_toric(p: &ToricPayload) -> Result<Model, CliError> {
    let labels = p.vertices.iter().map(|v| v.id.clone()).collect();
    let coords = p
        .vertices
        .iter()
        .map(|v| parse_weight(&v.coords))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Model::Toric(ToricModel::new(labels, coords, parse_weight(&p.xi)?)?))
}

fn build_generic(p: &GenericPayload) -> Result<Model, CliError> {
    let points = p
        .points
        .iter()
        .map(|r| {
            Ok(FixedPoint {
                id: r.id.clone(),
                phi_t: parse_weight(&r.phi_t)?,
                phi_s: r.phi_s.parse()?,
                tangent_weights: r
                    .tangent_weights
                    .as_ref()
                    .map(|ws| ws.iter().map(|w| parse_weight(w)).collect::<Result<Vec<_>, _>>())
                    .transpose()?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let chains = p
        .chains
        .iter()
        .map(|c| ChainSpec {
            points: c.points.clone(),
            v: c.v,
            witnesses: c.witnesses.as_ref().map(|ws| {
                ws.iter()
                    .map(|w| WitnessSpec {
                        components: w.components.clone(),
                        multiplicities: w.multiplicities.clone(),
                    })
                    .collect()
            }),
        })
        .collect();
    Ok(Model::Generic(load_generic(GenericSpec {
        points,
        dim: p.dim,
        chains,
        unverified: p.unverified,
    })?))
}

/// A parsed file together with the model built from it.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub file: ModelFile,
    pub model: Model,
}

pub fn load_model(path: &Path) -> Result<LoadedModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    let file = ModelFile::parse_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))?;
    let model = file.build()?;
    Ok(LoadedModel { file, model })
}

/// Evaluation points: a JSON array of coordinate arrays.
pub fn load_points(path: &Path) -> Result<Vec<Weight>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    let raw: Vec<Vec<RatRepr>> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))?;
    raw.iter().map(|w| parse_weight(w)).collect()
}

/// Re-expresses any model as generic data: its fixed points and maximal chains with their
/// coefficients and, when known, witnesses.
pub fn export_generic(model: &Model, name: Option<String>) -> Result<ModelFile, CliError> {
    let v = bbloc_core::coefficients::all_v(model).map_err(|e| CliError::Compute(e.to_string()))?;
    let points = model
        .points()
        .iter()
        .map(|f| PointRecord {
            id: f.id.clone(),
            phi_t: weight_repr(&f.phi_t),
            phi_s: RatRepr::from(&f.phi_s),
            tangent_weights: f
                .tangent_weights
                .as_ref()
                .map(|ws| ws.iter().map(weight_repr).collect()),
        })
        .collect();
    let labels = model.labels();
    let mut chains = Vec::with_capacity(v.len());
    for (c, &v) in &v {
        let witnesses = match enumerate_witnesses(model, c) {
            Ok(ws) => Some(
                ws.iter()
                    .map(|w| WitnessRecord {
                        components: w.steps.iter().map(|(_, y)| y.display(&labels).to_string()).collect(),
                        multiplicities: w.multiplicities.clone(),
                    })
                    .collect(),
            ),
            Err(CoefficientError::IncompleteModel(_)) => None,
            Err(e) => return Err(CliError::Compute(e.to_string())),
        };
        chains.push(ChainRecord {
            points: model.chain_labels(c),
            v: Some(v),
            witnesses,
        });
    }
    Ok(ModelFile::Generic(GenericPayload {
        name,
        dim: model.dim(),
        unverified: false,
        points,
        chains,
        expected: None,
    }))
}
