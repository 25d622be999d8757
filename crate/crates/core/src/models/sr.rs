//! Projective Stanley-Reisner schemes.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use super::cells::{CellData, CellGeometry, MAX_VERTICES};
use super::ModelError;
use crate::complexes::{Face, FixedPoint, SimplicialComplex};
use crate::lattice::{rat, Rat, Weight};
use crate::util::mask_of;

/// The Stanley-Reisner scheme of `delta`, with vertices reindexed in increasing `phi_S` order.
#[derive(Debug, Clone)]
pub struct SrModel {
    delta: SimplicialComplex,
    points: Vec<FixedPoint>,
    geometry: CellGeometry,
    complex: SimplicialComplex,
}

impl SrModel {
    /// `faces` may be any generating set (typically the facets). `phi_s` defaults to the vertex
    /// position and `phi_t` to the coordinate characters.
    pub fn new(
        labels: Vec<String>,
        faces: Vec<Face>,
        phi_s: Option<Vec<Rat>>,
        phi_t: Option<Vec<Weight>>,
    ) -> Result<Self, ModelError> {
        let n = labels.len();
        if n == 0 {
            return Err(ModelError::Invalid(
                "a Stanley-Reisner model needs at least one vertex".into(),
            ));
        }
        if n > MAX_VERTICES {
            return Err(ModelError::TooManyVertices(n));
        }
        let phi_s = phi_s.unwrap_or_else(|| (1..=n as i64).map(rat).collect());
        let phi_t = phi_t.unwrap_or_else(|| (0..n).map(|i| Weight::unit(n, i)).collect());
        if phi_s.len() != n || phi_t.len() != n {
            return Err(ModelError::Invalid(format!(
                "expected {n} phi_s and phi_t entries, found {} and {}",
                phi_s.len(),
                phi_t.len()
            )));
        }
        let torus = phi_t[0].dim();
        if let Some(w) = phi_t.iter().find(|w| w.dim() != torus) {
            return Err(ModelError::DimensionMismatch {
                expected: torus,
                found: w.dim(),
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| phi_s[a].cmp(&phi_s[b]));
        for w in order.windows(2) {
            if phi_s[w[0]] == phi_s[w[1]] {
                return Err(ModelError::PhiSNotInjective(labels[w[0]].clone(), labels[w[1]].clone()));
            }
        }
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let new_labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
        let mut reindexed = Vec::with_capacity(faces.len());
        for f in faces {
            let mut g = Vec::with_capacity(f.len());
            for v in f {
                g.push(
                    *position
                        .get(v)
                        .ok_or_else(|| ModelError::UnknownVertex(v.to_string()))?,
                );
            }
            reindexed.push(g);
        }
        let delta = SimplicialComplex::from_facets(new_labels.clone(), reindexed)?;
        let points = order
            .iter()
            .map(|&i| FixedPoint {
                id: labels[i].clone(),
                phi_t: phi_t[i].clone(),
                phi_s: phi_s[i].clone(),
                tangent_weights: None,
            })
            .collect();
        let geometry = sr_geometry(&delta);
        let complex = geometry.closure_complex(new_labels);
        Ok(SrModel {
            delta,
            points,
            geometry,
            complex,
        })
    }

    pub fn delta(&self) -> &SimplicialComplex {
        &self.delta
    }

    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn geometry(&self) -> &CellGeometry {
        &self.geometry
    }

    /// Closure chains, computed from the B-B flow on the coordinate cells.
    pub fn closure_complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.delta.dim().unwrap_or(0)
    }

    pub fn torus_dim(&self) -> usize {
        self.points[0].phi_t.dim()
    }
}

fn sr_geometry(delta: &SimplicialComplex) -> CellGeometry {
    let cells = delta
        .faces()
        .iter()
        .map(|f| CellData {
            mask: mask_of(f),
            dim: f.len() - 1,
            degree: 1,
        })
        .collect();
    // the coordinate hyperplane of the lowest vertex cuts a coordinate subspace in the face
    // spanned by the remaining vertices, reduced
    let mut sections = HashMap::new();
    for f in delta.faces() {
        if f.len() > 1 {
            sections.insert(mask_of(f), vec![(mask_of(&f[1..]), 1u64)]);
        }
    }
    CellGeometry::new(delta.n_vertices(), cells, sections)
}

/// Faces of `delta` having `chain` as initial string: the support of the iterated closure.
/// Vertex indices are assumed ordered by `phi_S`.
pub fn sr_iterated_closure(delta: &SimplicialComplex, chain: &[usize]) -> BTreeSet<Face> {
    delta
        .faces()
        .iter()
        .filter(|f| f.len() >= chain.len().max(1) && f[..chain.len()] == *chain)
        .cloned()
        .collect()
}

/// The complex of closure chains of the Stanley-Reisner scheme.
pub fn sr_closure_complex(model: &SrModel) -> SimplicialComplex {
    model.closure_complex().clone()
}

/// Every facet has coefficient 1, as each coordinate subspace is reduced of degree 1.
pub fn sr_v(model: &SrModel, chain: &[usize]) -> Option<u64> {
    model.delta.facets().contains(chain).then(u64::one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn hollow() -> SrModel {
        SrModel::new(names(3), vec![vec![0, 1], vec![0, 2], vec![1, 2]], None, None).unwrap()
    }

    #[test]
    fn iterated_closure_examples() {
        let m = hollow();
        let edge: BTreeSet<Face> = [vec![0, 1]].into_iter().collect();
        assert_eq!(sr_iterated_closure(m.delta(), &[0, 1]), edge);
        assert!(sr_iterated_closure(m.delta(), &[0, 1, 2]).is_empty());
        assert_eq!(sr_iterated_closure(m.delta(), &[]), m.delta().faces().clone());
    }

    #[test]
    fn closure_complex_is_delta() {
        let m = hollow();
        assert_eq!(sr_closure_complex(&m), *m.delta());
        let solid = SrModel::new(names(4), vec![vec![0, 1, 2, 3]], None, None).unwrap();
        assert_eq!(sr_closure_complex(&solid), *solid.delta());
    }

    #[test]
    fn phi_s_reorders_vertices() {
        let m = SrModel::new(
            names(3),
            vec![vec![0, 1], vec![2]],
            Some(vec![rat(5), rat(1), rat(3)]),
            None,
        )
        .unwrap();
        let ids: Vec<&str> = m.points().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["2", "3", "1"]);
        // the edge {1,2} becomes {0,2} after reindexing
        assert!(m.delta().contains(&[0, 2]));
        assert_eq!(m.points()[0].phi_t, Weight::unit(3, 1));
    }

    #[test]
    fn rejects_repeated_phi_s() {
        let err = SrModel::new(names(2), vec![vec![0, 1]], Some(vec![rat(1), rat(1)]), None).unwrap_err();
        assert!(matches!(err, ModelError::PhiSNotInjective(..)));
    }

    #[test]
    fn facets_have_unit_coefficients() {
        let m = hollow();
        assert_eq!(sr_v(&m, &[0, 2]), Some(1));
        assert_eq!(sr_v(&m, &[0]), None);
    }
}
