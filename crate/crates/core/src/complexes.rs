//! Simplicial complexes on labeled vertex sets, closure chains and witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lattice::{Rat, Weight};

/// A torus-fixed point with its moment-map images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    pub phi_t: Weight,
    pub phi_s: Rat,
    /// Weights of the torus on the tangent space, when the point is smooth and they are known.
    pub tangent_weights: Option<Vec<Weight>>,
}

/// A face as a sorted list of vertex indices.
pub type Face = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("face {face:?} is not downward closed: subset {missing:?} is missing")]
    NotClosed { face: Face, missing: Face },
    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),
    #[error("relations contain a cycle through {0}")]
    NotAPoset(String),
}

/// A face together with one of its missing codimension-one subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub face: Face,
    pub missing: Face,
}

/// Checks downward closure. The empty face is always considered present.
pub fn check_complex(faces: &BTreeSet<Face>) -> Result<(), Violation> {
    for face in faces {
        if face.len() <= 1 {
            continue;
        }
        let mut missing: Vec<Face> = (0..face.len())
            .map(|skip| {
                face.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect::<Face>()
            })
            .filter(|sub| !faces.contains(sub))
            .collect();
        missing.sort();
        if let Some(first) = missing.into_iter().next() {
            return Err(Violation {
                face: face.clone(),
                missing: first,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    // nonempty faces only, each sorted
    faces: BTreeSet<Face>,
}

fn normalize(face: &[usize]) -> Face {
    let mut f = face.to_vec();
    f.sort_unstable();
    f.dedup();
    f
}

impl SimplicialComplex {
    pub fn new(labels: Vec<String>, faces: impl IntoIterator<Item = Face>) -> Result<Self, ComplexError> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for f in faces {
            let f = normalize(&f);
            if let Some(&bad) = f.iter().find(|&&v| v >= n) {
                return Err(ComplexError::UnknownVertex(bad));
            }
            if !f.is_empty() {
                set.insert(f);
            }
        }
        check_complex(&set).map_err(|v| ComplexError::NotClosed {
            face: v.face,
            missing: v.missing,
        })?;
        Ok(SimplicialComplex { labels, faces: set })
    }

    /// The smallest complex containing the given faces.
    pub fn from_facets(labels: Vec<String>, facets: impl IntoIterator<Item = Face>) -> Result<Self, ComplexError> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for f in facets {
            let f = normalize(&f);
            if let Some(&bad) = f.iter().find(|&&v| v >= n) {
                return Err(ComplexError::UnknownVertex(bad));
            }
            if set.contains(&f) {
                continue;
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Face = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                set.insert(sub);
            }
        }
        Ok(SimplicialComplex { labels, faces: set })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Nonempty faces in lexicographic order.
    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        let f = normalize(face);
        f.is_empty() || self.faces.contains(&f)
    }

    /// Largest face dimension, or `None` for the void complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.len() - 1).max()
    }

    pub fn facets(&self) -> BTreeSet<Face> {
        let by_len: Vec<&Face> = self.faces.iter().collect();
        by_len
            .iter()
            .filter(|f| {
                !by_len
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.binary_search(v).is_ok()))
            })
            .map(|f| (*f).clone())
            .collect()
    }

    pub fn is_pure(&self, expected_dim: usize) -> bool {
        self.facets().iter().all(|f| f.len() == expected_dim + 1)
    }

    /// Vertices `v` such that `F ∪ {v}` is a face for every face `F`; equivalently, vertices
    /// lying on every facet.
    pub fn cone_points(&self) -> BTreeSet<usize> {
        let facets = self.facets();
        if facets.is_empty() {
            return BTreeSet::new();
        }
        (0..self.n_vertices())
            .filter(|v| facets.iter().all(|f| f.binary_search(v).is_ok()))
            .collect()
    }

    /// Face counts by dimension, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim().map_or(0, |d| d + 1)];
        for f in &self.faces {
            counts[f.len() - 1] += 1;
        }
        counts
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn face_labels(&self, face: &[usize]) -> Vec<&str> {
        face.iter().map(|&v| self.label(v)).collect()
    }
}

/// The complex of chains of the partial order generated by `relations` (pairs `a < b`).
pub fn order_complex(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<SimplicialComplex, ComplexError> {
    let n = labels.len();
    let mut less = vec![vec![false; n]; n];
    for &(a, b) in relations {
        if a >= n {
            return Err(ComplexError::UnknownVertex(a));
        }
        if b >= n {
            return Err(ComplexError::UnknownVertex(b));
        }
        if a == b {
            continue;
        }
        less[a][b] = true;
    }
    // transitive closure
    for k in 0..n {
        let via = less[k].clone();
        for row in less.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&via) {
                *x |= y;
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| less[v][v]) {
        return Err(ComplexError::NotAPoset(labels[v].clone()));
    }
    // every chain is found by extending from each element upward
    let mut faces = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for (next, &above) in less[top].iter().enumerate() {
            if above {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
        faces.insert(normalize(&chain));
    }
    Ok(SimplicialComplex { labels, faces })
}

/// Model-defined name for an irreducible component of an iterated closure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    /// A cell (face of a complex or of a polytope) given by its sorted vertex indices.
    Cell(Face),
    Named(String),
}

impl Component {
    pub fn display<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        ComponentDisplay { c: self, labels }
    }
}

struct ComponentDisplay<'a> {
    c: &'a Component,
    labels: &'a [String],
}

impl fmt::Display for ComponentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            Component::Named(s) => write!(f, "{s}"),
            Component::Cell(cell) => {
                write!(f, "{{")?;
                for (i, &v) in cell.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match self.labels.get(v) {
                        Some(l) => write!(f, "{l}")?,
                        None => write!(f, "#{v}")?,
                    }
                }
                write!(f, "}}")
            }
        }
    }
}

/// A closure chain decorated by a weakly decreasing sequence of components, with the
/// multiplicity contributed at each step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub steps: Vec<(usize, Component)>,
    pub multiplicities: Vec<u64>,
}

impl Witness {
    pub fn chain(&self) -> Vec<usize> {
        self.steps.iter().map(|(f, _)| *f).collect()
    }

    pub fn last_component(&self) -> Option<&Component> {
        self.steps.last().map(|(_, c)| c)
    }

    /// Product of the multiplicities, or `None` on overflow.
    pub fn weight(&self) -> Option<u64> {
        self.multiplicities.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }
}

/// Groups faces by their number of vertices.
pub fn faces_by_size(complex: &SimplicialComplex) -> BTreeMap<usize, Vec<Face>> {
    let mut out: BTreeMap<usize, Vec<Face>> = BTreeMap::new();
    for f in complex.faces() {
        out.entry(f.len()).or_default().push(f.clone());
    }
    out
}
