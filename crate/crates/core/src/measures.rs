//! Duistermaat-Heckman measures as formal sums of pushed-forward simplex measures.
//!
//! Normalization: each term `v * (C_gamma)_*(Lebesgue on the standard n-simplex)` has mass
//! `v / n!`, so the total mass is `deg X / n!` and toric measures have density 1 on the
//! moment polytope.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coefficients::{all_v, CoefficientError};
use crate::complexes::FixedPoint;
use crate::lattice::{
    affine_coordinates, affine_dim, barycentric, det, in_affine_hull, normalized_volume, rank, solve_in_span, Rat,
    Weight,
};
use crate::models::Model;
use crate::util::{factorial, subsets_of_size};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("point {0} is not in general position")]
    NonGenericPoint(Weight),
    #[error("direction pairs to zero with a tangent weight at {0:?}")]
    NonGenericDirection(String),
    #[error("cone at {0:?} is not simplicial and full-dimensional")]
    DegenerateCone(String),
    #[error("fixed point {0:?} has no usable tangent weights")]
    MissingTangentData(String),
    #[error("projection is rank-deficient")]
    RankDeficient,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhTerm {
    pub v: u64,
    pub vertices: Vec<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhMeasure {
    pub terms: Vec<DhTerm>,
    pub ambient_dim: usize,
    pub simplex_dim: usize,
}

/// A signed pushforward of orthant Lebesgue measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTerm {
    pub sign: i8,
    pub apex: Weight,
    pub generators: Vec<Weight>,
}

/// One term per maximal chain, with the chain's moment images as vertices.
pub fn dh_from_model(model: &Model) -> Result<DhMeasure, MeasureError> {
    let v = all_v(model)?;
    let points = model.points();
    let terms = v
        .into_iter()
        .map(|(chain, v)| DhTerm {
            v,
            vertices: chain.iter().map(|&i| points[i].phi_t.clone()).collect(),
        })
        .collect();
    Ok(DhMeasure {
        terms,
        ambient_dim: model.torus_dim(),
        simplex_dim: model.dim(),
    })
}

impl DhMeasure {
    /// Distinct vertex images across all terms.
    pub fn vertex_set(&self) -> Vec<Weight> {
        let mut vs: Vec<Weight> = self.terms.iter().flat_map(|t| t.vertices.iter().cloned()).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Whether `p` avoids the affine hulls of all vertex subsets of size at most `dim p`.
pub fn is_generic(vertices: &[Weight], p: &Weight) -> bool {
    let d = p.dim();
    (1..=d.min(vertices.len())).all(|k| {
        subsets_of_size(vertices.len(), k).into_iter().all(|s| {
            let pts: Vec<Weight> = s.iter().map(|&i| vertices[i].clone()).collect();
            !in_affine_hull(p, &pts)
        })
    })
}

/// Whether `p` avoids the convex hulls of all vertex subsets of size at most `dim p`.
pub fn avoids_small_hulls(vertices: &[Weight], p: &Weight) -> bool {
    let d = p.dim();
    (1..=d.min(vertices.len())).all(|k| {
        subsets_of_size(vertices.len(), k).into_iter().all(|s| {
            let pts: Vec<Weight> = s.iter().map(|&i| vertices[i].clone()).collect();
            barycentric(p, &pts).is_none()
        })
    })
}

/// Density at `p` of the pushforward of Lebesgue measure on the standard simplex under the
/// affine map with the given vertex images. Uses the degree-lowering recurrence
/// `g(X) = 1/(n-d) sum_j lambda_j g(X minus x_j)` for any affine combination `lambda` of `X`
/// equal to `p`. `p` must not lie on a wall; a point on the boundary of a full simplex is
/// reported as non-generic.
pub fn simplex_spline(vertices: &[Weight], p: &Weight) -> Result<Rat, MeasureError> {
    let n = vertices.len().saturating_sub(1);
    let d = p.dim();
    if vertices.is_empty() {
        return Ok(Rat::zero());
    }
    if d == 0 {
        return Ok(Rat::one() / Rat::from_integer(factorial(n)));
    }
    if n < d || affine_dim(vertices) != Some(d) {
        return Ok(Rat::zero());
    }
    if n == d {
        let coords = affine_coordinates(p, vertices).expect("full-dimensional simplex");
        if coords.iter().any(Signed::is_negative) {
            return Ok(Rat::zero());
        }
        if coords.iter().any(Zero::is_zero) {
            return Err(MeasureError::NonGenericPoint(p.clone()));
        }
        let vol = normalized_volume(vertices).expect("d + 1 points");
        return Ok(vol.recip());
    }
    let lambda = affine_coordinates(p, vertices).expect("affinely spanning");
    let mut acc = Rat::zero();
    for (j, l) in lambda.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        let rest: Vec<Weight> = vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, v)| v.clone())
            .collect();
        acc += l * simplex_spline(&rest, p)?;
    }
    Ok(acc / Rat::from_integer(BigInt::from(n - d)))
}

/// Exact density of the measure at a generic point.
pub fn density_at(measure: &DhMeasure, p: &Weight) -> Result<Rat, MeasureError> {
    if p.dim() != measure.ambient_dim {
        return Err(MeasureError::DimensionMismatch {
            expected: measure.ambient_dim,
            found: p.dim(),
        });
    }
    if !is_generic(&measure.vertex_set(), p) {
        return Err(MeasureError::NonGenericPoint(p.clone()));
    }
    let mut acc = Rat::zero();
    for t in &measure.terms {
        acc += Rat::from_integer(BigInt::from(t.v)) * simplex_spline(&t.vertices, p)?;
    }
    Ok(acc)
}

pub fn total_mass(measure: &DhMeasure) -> Rat {
    let sum: u64 = measure.terms.iter().map(|t| t.v).sum();
    Rat::from_integer(BigInt::from(sum)) / Rat::from_integer(factorial(measure.simplex_dim))
}

/// Pushes the measure forward along a linear map given by its rows.
pub fn restrict_torus(measure: &DhMeasure, rows: &[Weight]) -> Result<DhMeasure, MeasureError> {
    for r in rows {
        if r.dim() != measure.ambient_dim {
            return Err(MeasureError::DimensionMismatch {
                expected: measure.ambient_dim,
                found: r.dim(),
            });
        }
    }
    if rank(rows) < rows.len() {
        return Err(MeasureError::RankDeficient);
    }
    let project = |v: &Weight| Weight::new(rows.iter().map(|r| r.dot(v)).collect());
    Ok(DhMeasure {
        terms: measure
            .terms
            .iter()
            .map(|t| DhTerm {
                v: t.v,
                vertices: t.vertices.iter().map(project).collect(),
            })
            .collect(),
        ambient_dim: rows.len(),
        simplex_dim: measure.simplex_dim,
    })
}

/// Flips every tangent weight into the half-space where `direction` is positive.
pub fn cone_terms(points: &[FixedPoint], direction: &Weight) -> Result<Vec<ConeTerm>, MeasureError> {
    points
        .iter()
        .map(|f| {
            let ws = f
                .tangent_weights
                .as_ref()
                .ok_or_else(|| MeasureError::MissingTangentData(f.id.clone()))?;
            let mut sign = 1i8;
            let mut generators = Vec::with_capacity(ws.len());
            for w in ws {
                let s = direction.dot(w);
                if s.is_zero() {
                    return Err(MeasureError::NonGenericDirection(f.id.clone()));
                }
                if s.is_negative() {
                    sign = -sign;
                    generators.push(-w);
                } else {
                    generators.push(w.clone());
                }
            }
            Ok(ConeTerm {
                sign,
                apex: f.phi_t.clone(),
                generators,
            })
        })
        .collect()
}

/// Density at `p` of the alternating sum of cone measures, one per fixed point.
pub fn alternating_density_at(points: &[FixedPoint], direction: &Weight, p: &Weight) -> Result<Rat, MeasureError> {
    let mut acc = Rat::zero();
    for (f, cone) in points.iter().zip(cone_terms(points, direction)?) {
        let d = p.dim();
        if cone.generators.len() != d || cone.generators.iter().any(|g| g.dim() != d) {
            return Err(MeasureError::DegenerateCone(f.id.clone()));
        }
        let det = det(&cone.generators).map_err(|_| MeasureError::DegenerateCone(f.id.clone()))?;
        if det.is_zero() {
            return Err(MeasureError::DegenerateCone(f.id.clone()));
        }
        let r = solve_in_span(&cone.generators, &(p - &cone.apex)).expect("generators form a basis");
        if r.iter().any(Zero::is_zero) {
            return Err(MeasureError::NonGenericPoint(p.clone()));
        }
        if r.iter().all(Signed::is_positive) {
            let term = det.abs().recip();
            if cone.sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    Ok(acc)
}
