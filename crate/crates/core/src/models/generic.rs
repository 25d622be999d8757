//! Models given by explicit fixed-point data and closure chains.

use std::collections::HashMap;

use num_traits::Zero;

use super::ModelError;
use crate::complexes::{Component, Face, FixedPoint, SimplicialComplex, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    pub components: Vec<String>,
    pub multiplicities: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub points: Vec<String>,
    pub v: Option<u64>,
    pub witnesses: Option<Vec<WitnessSpec>>,
}

/// Unvalidated input for [`load_generic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSpec {
    pub points: Vec<FixedPoint>,
    pub dim: usize,
    pub chains: Vec<ChainSpec>,
    /// Data shipped for illustration only; coefficient checks are skipped.
    pub unverified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericChain {
    pub points: Face,
    pub v: Option<u64>,
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Debug, Clone)]
pub struct GenericModel {
    points: Vec<FixedPoint>,
    dim: usize,
    chains: Vec<GenericChain>,
    complex: SimplicialComplex,
    unverified: bool,
}

impl GenericModel {
    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The stated maximal chains, with vertices indexed in increasing `phi_S` order.
    pub fn chains(&self) -> &[GenericChain] {
        &self.chains
    }

    pub fn chain(&self, points: &[usize]) -> Option<&GenericChain> {
        self.chains.iter().find(|c| c.points == points)
    }

    pub fn closure_complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn is_unverified(&self) -> bool {
        self.unverified
    }

    pub fn torus_dim(&self) -> usize {
        self.points[0].phi_t.dim()
    }
}

/// Validates structure: identifiers resolve, `phi_S` is injective, chains increase, all
/// coefficients and multiplicities are positive. Whether stated coefficients agree with the
/// stated witnesses is left to verification.
pub fn load_generic(spec: GenericSpec) -> Result<GenericModel, ModelError> {
    let GenericSpec {
        points,
        dim,
        chains,
        unverified,
    } = spec;
    if points.is_empty() {
        return Err(ModelError::Invalid("a model needs at least one fixed point".into()));
    }
    let torus = points[0].phi_t.dim();
    let mut seen = HashMap::new();
    for p in &points {
        if seen.insert(p.id.clone(), ()).is_some() {
            return Err(ModelError::DuplicateId(p.id.clone()));
        }
        if p.phi_t.dim() != torus {
            return Err(ModelError::DimensionMismatch {
                expected: torus,
                found: p.phi_t.dim(),
            });
        }
        if let Some(ws) = &p.tangent_weights {
            for w in ws {
                if w.dim() != torus {
                    return Err(ModelError::DimensionMismatch {
                        expected: torus,
                        found: w.dim(),
                    });
                }
                if w.is_zero() {
                    return Err(ModelError::ZeroTangentWeight(p.id.clone()));
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].phi_s.cmp(&points[b].phi_s));
    for w in order.windows(2) {
        if points[w[0]].phi_s == points[w[1]].phi_s {
            return Err(ModelError::PhiSNotInjective(
                points[w[0]].id.clone(),
                points[w[1]].id.clone(),
            ));
        }
    }
    let points: Vec<FixedPoint> = order.iter().map(|&i| points[i].clone()).collect();
    let index: HashMap<&str, usize> = points.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();

    let mut out = Vec::with_capacity(chains.len());
    for c in &chains {
        let idx: Vec<usize> = c
            .points
            .iter()
            .map(|id| {
                index
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| ModelError::UnknownId(id.clone()))
            })
            .collect::<Result<_, _>>()?;
        if c.points.is_empty() {
            return Err(ModelError::Invalid("empty chain".into()));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::NotIncreasing(c.points.clone()));
        }
        if idx.len() > dim + 1 {
            return Err(ModelError::ChainTooLong(c.points.clone()));
        }
        if c.v == Some(0) {
            return Err(ModelError::ZeroCoefficient(c.points.clone()));
        }
        let witnesses = match &c.witnesses {
            None => None,
            Some(list) => {
                let mut ws = Vec::with_capacity(list.len());
                for w in list {
                    if w.components.len() != idx.len() || w.multiplicities.len() != idx.len() {
                        return Err(ModelError::Invalid(format!(
                            "witness for chain {:?} must name {} components and multiplicities",
                            c.points,
                            idx.len()
                        )));
                    }
                    if w.multiplicities.iter().any(Zero::is_zero) {
                        return Err(ModelError::ZeroCoefficient(c.points.clone()));
                    }
                    ws.push(Witness {
                        steps: idx
                            .iter()
                            .zip(&w.components)
                            .map(|(&f, name)| (f, Component::Named(name.clone())))
                            .collect(),
                        multiplicities: w.multiplicities.clone(),
                    });
                }
                Some(ws)
            }
        };
        if out.iter().any(|g: &GenericChain| g.points == idx) {
            return Err(ModelError::Invalid(format!("chain {:?} listed twice", c.points)));
        }
        out.push(GenericChain {
            points: idx,
            v: c.v,
            witnesses,
        });
    }
    let labels = points.iter().map(|p| p.id.clone()).collect();
    let complex = SimplicialComplex::from_facets(labels, out.iter().map(|c| c.points.clone()))?;
    Ok(GenericModel {
        points,
        dim,
        chains: out,
        complex,
        unverified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, Weight};

    fn point(id: &str, t: i64) -> FixedPoint {
        FixedPoint {
            id: id.into(),
            phi_t: Weight::from_ints(&[t]),
            phi_s: rat(t),
            tangent_weights: None,
        }
    }

    fn line_conic(v: Option<u64>) -> GenericSpec {
        GenericSpec {
            points: vec![point("q", 2), point("p", 0)],
            dim: 1,
            chains: vec![ChainSpec {
                points: vec!["p".into(), "q".into()],
                v,
                witnesses: Some(vec![
                    WitnessSpec {
                        components: vec!["L".into(), "q".into()],
                        multiplicities: vec![1, 1],
                    },
                    WitnessSpec {
                        components: vec!["C".into(), "q".into()],
                        multiplicities: vec![1, 2],
                    },
                ]),
            }],
            unverified: false,
        }
    }

    #[test]
    fn loads_line_and_conic() {
        let m = load_generic(line_conic(Some(3))).unwrap();
        assert_eq!(m.points()[0].id, "p");
        assert_eq!(m.chains()[0].points, vec![0, 1]);
        assert_eq!(m.chains()[0].witnesses.as_ref().unwrap().len(), 2);
        assert!(m.closure_complex().is_pure(1));
    }

    #[test]
    fn rejects_zero_coefficient() {
        assert!(matches!(
            load_generic(line_conic(Some(0))),
            Err(ModelError::ZeroCoefficient(_))
        ));
    }

    #[test]
    fn rejects_decreasing_chain_and_unknown_ids() {
        let mut spec = line_conic(Some(3));
        spec.chains[0].points = vec!["q".into(), "p".into()];
        assert!(matches!(load_generic(spec), Err(ModelError::NotIncreasing(_))));
        let mut spec = line_conic(Some(3));
        spec.chains[0].points = vec!["p".into(), "r".into()];
        assert!(matches!(load_generic(spec), Err(ModelError::UnknownId(_))));
    }
}
