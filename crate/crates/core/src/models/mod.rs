//! The three supported model classes behind one interface.

pub mod cells;
pub mod generic;
pub mod sr;
pub mod toric;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complexes::{ComplexError, Face, FixedPoint, SimplicialComplex};
use crate::lattice::{LatticeError, Weight};
use cells::CellGeometry;
pub use generic::{load_generic, ChainSpec, GenericChain, GenericModel, GenericSpec, WitnessSpec};
pub use sr::{sr_closure_complex, sr_iterated_closure, SrModel};
pub use toric::{PolytopeFace, ToricModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown fixed point id {0:?}")]
    UnknownId(String),
    #[error("fixed point id {0:?} appears twice")]
    DuplicateId(String),
    #[error("phi_S takes the same value on {0:?} and {1:?}")]
    PhiSNotInjective(String, String),
    #[error("chain {0:?} is not strictly increasing in phi_S")]
    NotIncreasing(Vec<String>),
    #[error("chain {0:?} is longer than 1 + dim X")]
    ChainTooLong(Vec<String>),
    #[error("chain {0:?} has a zero coefficient or multiplicity")]
    ZeroCoefficient(Vec<String>),
    #[error("tangent weight of {0:?} is zero")]
    ZeroTangentWeight(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not a lattice vector")]
    NotIntegral(String),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("{0:?} is not a vertex of the convex hull")]
    NotAVertex(String),
    #[error("at most 64 fixed points are supported, found {0}")]
    TooManyVertices(usize),
    #[error("chain {0:?} spans a degenerate simplex")]
    Degenerate(Face),
    #[error("weight difference is not a positive integer multiple of the negated tangent weight")]
    NotAMultiple,
    #[error("integer overflow")]
    Overflow,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone)]
pub enum Model {
    Sr(SrModel),
    Toric(ToricModel),
    Generic(GenericModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Sr(_) => "sr",
            Model::Toric(_) => "toric",
            Model::Generic(_) => "generic",
        }
    }

    /// Fixed points in increasing `phi_S` order; chain entries index into this list.
    pub fn points(&self) -> &[FixedPoint] {
        match self {
            Model::Sr(m) => m.points(),
            Model::Toric(m) => m.points(),
            Model::Generic(m) => m.points(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.points().iter().map(|p| p.id.clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points().iter().position(|p| p.id == id)
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Sr(m) => m.dim(),
            Model::Toric(m) => m.dim(),
            Model::Generic(m) => m.dim(),
        }
    }

    pub fn torus_dim(&self) -> usize {
        self.points()[0].phi_t.dim()
    }

    /// The complex of closure chains.
    pub fn closure_complex(&self) -> &SimplicialComplex {
        match self {
            Model::Sr(m) => m.closure_complex(),
            Model::Toric(m) => m.closure_complex(),
            Model::Generic(m) => m.closure_complex(),
        }
    }

    /// Closure chains of length `1 + dim X`, in lexicographic order.
    pub fn maximal_chains(&self) -> Vec<Face> {
        let n = self.dim() + 1;
        self.closure_complex()
            .facets()
            .into_iter()
            .filter(|f| f.len() == n)
            .collect()
    }

    /// The cell oracle, for models whose components are computed rather than stated.
    pub fn geometry(&self) -> Option<&CellGeometry> {
        match self {
            Model::Sr(m) => Some(m.geometry()),
            Model::Toric(m) => Some(m.geometry()),
            Model::Generic(_) => None,
        }
    }

    pub fn as_generic(&self) -> Option<&GenericModel> {
        match self {
            Model::Generic(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_toric(&self) -> Option<&ToricModel> {
        match self {
            Model::Toric(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_unverified(&self) -> bool {
        matches!(self, Model::Generic(m) if m.is_unverified())
    }

    /// Whether every fixed point carries a full set of tangent weights.
    pub fn has_tangent_data(&self) -> bool {
        let n = self.dim();
        self.points()
            .iter()
            .all(|p| p.tangent_weights.as_ref().is_some_and(|w| w.len() == n))
    }

    /// Coefficient from the closed form of the model class, independent of witnesses: 1 for
    /// Stanley-Reisner facets, the normalized volume for toric chains, and the stated value
    /// for generic models.
    pub fn closed_form_v(&self, chain: &[usize]) -> Option<u64> {
        match self {
            Model::Sr(m) => sr::sr_v(m, chain),
            Model::Toric(m) => m.toric_v(chain).ok(),
            Model::Generic(m) => m.chain(chain).and_then(|c| c.v),
        }
    }

    pub fn chain_labels(&self, chain: &[usize]) -> Vec<String> {
        chain.iter().map(|&i| self.points()[i].id.clone()).collect()
    }
}

/// Coefficient of a Chevalley-type step `(f0, f1)` along a smooth curve: the integer `c` with
/// `phi_T(f1) - phi_T(f0) = c * (-tangent)`.
pub fn chevalley_v(f0: &FixedPoint, f1: &FixedPoint, edge_tangent: &Weight) -> Result<u64, ModelError> {
    if edge_tangent.dim() != f0.phi_t.dim() || f1.phi_t.dim() != f0.phi_t.dim() {
        return Err(ModelError::DimensionMismatch {
            expected: f0.phi_t.dim(),
            found: edge_tangent.dim(),
        });
    }
    if edge_tangent.is_zero() {
        return Err(ModelError::ZeroTangentWeight(f1.id.clone()));
    }
    let diff = &f1.phi_t - &f0.phi_t;
    let dir = -edge_tangent;
    let pivot = dir.coords().iter().position(|c| !c.is_zero()).unwrap();
    let c = &diff[pivot] / &dir[pivot];
    if dir.scale(&c) != diff || !c.is_integer() || !c.is_positive() {
        return Err(ModelError::NotAMultiple);
    }
    num_traits::ToPrimitive::to_u64(&c.to_integer()).ok_or(ModelError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn fp(id: &str, t: &[i64]) -> FixedPoint {
        FixedPoint {
            id: id.into(),
            phi_t: Weight::from_ints(t),
            phi_s: rat(0),
            tangent_weights: None,
        }
    }

    #[test]
    fn chevalley_examples() {
        let f0 = fp("a", &[0, 0]);
        let f1 = fp("b", &[2, 0]);
        assert_eq!(chevalley_v(&f0, &f1, &Weight::from_ints(&[-1, 0])).unwrap(), 2);
        let f1 = fp("b", &[1, 1]);
        assert_eq!(
            chevalley_v(&f0, &f1, &Weight::from_ints(&[-1, 0])),
            Err(ModelError::NotAMultiple)
        );
        // wrong direction
        let f1 = fp("b", &[-2, 0]);
        assert_eq!(
            chevalley_v(&f0, &f1, &Weight::from_ints(&[-1, 0])),
            Err(ModelError::NotAMultiple)
        );
    }

    #[test]
    fn chevalley_on_a_schubert_curve() {
        // flag variety of GL3 in the representation with highest weight (3,1,0): the curve
        // from e to the reflection r_{13}, tangent weight t1 - t3 at the far end
        let f0 = fp("e", &[3, 1, 0]);
        let f1 = fp("r13", &[0, 1, 3]);
        assert_eq!(chevalley_v(&f0, &f1, &Weight::from_ints(&[1, 0, -1])).unwrap(), 3);
    }
}
