//! Projective toric varieties of lattice polytopes.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cells::{limit, CellData, CellGeometry, CellMask, MAX_VERTICES};
use super::ModelError;
use crate::complexes::{Face, FixedPoint, SimplicialComplex};
use crate::lattice::{
    affine_dim, affinely_independent, det, lattice_index, lattice_normalized_volume, normalized_volume, Rat, Weight,
};
use crate::util::{factorial, indices_of, subsets_of_size};

/// A face of a polytope: its vertex set and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolytopeFace {
    pub mask: CellMask,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct ToricModel {
    labels: Vec<String>,
    vertices: Vec<Weight>,
    xi: Weight,
    faces: Vec<PolytopeFace>,
    points: Vec<FixedPoint>,
    geometry: CellGeometry,
    complex: SimplicialComplex,
    triangulation: Vec<Face>,
}

impl ToricModel {
    /// Vertices are reindexed in increasing order of `<xi, v>`.
    pub fn new(labels: Vec<String>, vertices: Vec<Weight>, xi: Weight) -> Result<Self, ModelError> {
        let n = vertices.len();
        if n == 0 {
            return Err(ModelError::Invalid("a polytope needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(ModelError::TooManyVertices(n));
        }
        if labels.len() != n {
            return Err(ModelError::Invalid(format!("{} labels for {n} vertices", labels.len())));
        }
        let d = xi.dim();
        for v in &vertices {
            if v.dim() != d {
                return Err(ModelError::DimensionMismatch {
                    expected: d,
                    found: v.dim(),
                });
            }
            if !v.is_integral() {
                return Err(ModelError::NotIntegral(v.to_string()));
            }
        }
        if !xi.is_integral() {
            return Err(ModelError::NotIntegral(xi.to_string()));
        }
        let phi_s: Vec<Rat> = vertices.iter().map(|v| xi.dot(v)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| phi_s[a].cmp(&phi_s[b]));
        for w in order.windows(2) {
            if phi_s[w[0]] == phi_s[w[1]] {
                return Err(ModelError::PhiSNotInjective(labels[w[0]].clone(), labels[w[1]].clone()));
            }
        }
        let labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
        let vertices: Vec<Weight> = order.iter().map(|&i| vertices[i].clone()).collect();
        if affine_dim(&vertices) != Some(d) {
            return Err(ModelError::NotFullDimensional);
        }
        let faces = polytope_faces(&vertices, &labels)?;

        let dims: HashMap<CellMask, usize> = faces.iter().map(|f| (f.mask, f.dim)).collect();
        let mut facets_of: HashMap<CellMask, Vec<CellMask>> = HashMap::new();
        for f in &faces {
            let subs = faces
                .iter()
                .filter(|g| g.mask != f.mask && g.mask & !f.mask == 0 && g.dim + 1 == f.dim)
                .map(|g| g.mask)
                .collect();
            facets_of.insert(f.mask, subs);
        }

        let mut tri_memo = HashMap::new();
        let mut cells = Vec::with_capacity(faces.len());
        let mut sections = HashMap::new();
        for f in &faces {
            let tri = pulling(f.mask, &dims, &facets_of, &mut tri_memo);
            let mut degree = BigInt::zero();
            for simplex in &tri {
                let pts: Vec<Weight> = simplex.iter().map(|&i| vertices[i].clone()).collect();
                degree += lattice_normalized_volume(&pts)?;
            }
            cells.push(CellData {
                mask: f.mask,
                dim: f.dim,
                degree: to_u64(&degree)?,
            });
            if f.dim > 0 {
                let b = limit(f.mask);
                let mut parts = Vec::new();
                for &g in &facets_of[&f.mask] {
                    if g >> b & 1 == 1 {
                        continue;
                    }
                    parts.push((g, lattice_height(&vertices, b, g)?));
                }
                parts.sort_unstable();
                sections.insert(f.mask, parts);
            }
        }
        let full: CellMask = faces.iter().map(|f| f.mask).max().unwrap_or(0);
        let triangulation = pulling(full, &dims, &facets_of, &mut tri_memo);

        let points = (0..n)
            .map(|i| FixedPoint {
                id: labels[i].clone(),
                phi_t: vertices[i].clone(),
                phi_s: xi.dot(&vertices[i]),
                tangent_weights: smooth_tangent_weights(&vertices, &faces, i),
            })
            .collect();
        let geometry = CellGeometry::new(n, cells, sections);
        let complex = geometry.closure_complex(labels.clone());
        Ok(ToricModel {
            labels,
            vertices,
            xi,
            faces,
            points,
            geometry,
            complex,
            triangulation,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Vertices in increasing `phi_S` order.
    pub fn vertices(&self) -> &[Weight] {
        &self.vertices
    }

    pub fn xi(&self) -> &Weight {
        &self.xi
    }

    pub fn faces(&self) -> &[PolytopeFace] {
        &self.faces
    }

    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn geometry(&self) -> &CellGeometry {
        &self.geometry
    }

    pub fn closure_complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Faces whose lowest vertex is `f`; their union is the closure of the stratum of `f`.
    pub fn toric_bb_faces(&self, f: usize) -> Result<Vec<Face>, ModelError> {
        if f >= self.vertices.len() {
            return Err(ModelError::UnknownVertex(f.to_string()));
        }
        Ok(self
            .faces
            .iter()
            .filter(|face| limit(face.mask) == f)
            .map(|face| indices_of(face.mask))
            .collect())
    }

    /// The triangulation obtained by coning every face from its lowest vertex, as chains.
    pub fn pulling_triangulation(&self) -> &[Face] {
        &self.triangulation
    }

    /// Normalized volume of the simplex spanned by the chain's vertices.
    pub fn toric_v(&self, chain: &[usize]) -> Result<u64, ModelError> {
        let pts: Vec<Weight> = chain
            .iter()
            .map(|&i| {
                self.vertices
                    .get(i)
                    .cloned()
                    .ok_or_else(|| ModelError::UnknownVertex(i.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let vol = normalized_volume(&pts)?;
        if vol.is_zero() {
            return Err(ModelError::Degenerate(chain.to_vec()));
        }
        to_u64(&vol.to_integer())
    }

    /// Normalized volume of the whole polytope.
    pub fn normalized_volume(&self) -> Result<u64, ModelError> {
        self.triangulation
            .iter()
            .try_fold(0u64, |acc, c| Ok(acc + self.toric_v(c)?))
    }

    /// Euclidean volume of the polytope.
    pub fn volume(&self) -> Result<Rat, ModelError> {
        Ok(Rat::from_integer(BigInt::from(self.normalized_volume()?)) / Rat::from_integer(factorial(self.dim())))
    }

    /// Vertices joined to `f` by an edge.
    pub fn edge_neighbors(&self, f: usize) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|e| e.dim == 1 && e.mask >> f & 1 == 1)
            .flat_map(|e| indices_of(e.mask))
            .filter(|&g| g != f)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Whether every vertex is smooth, so that tangent weights are available everywhere.
    pub fn is_smooth(&self) -> bool {
        self.points.iter().all(|p| p.tangent_weights.is_some())
    }
}

fn to_u64(x: &BigInt) -> Result<u64, ModelError> {
    x.to_u64().ok_or(ModelError::Overflow)
}

fn pulling(
    face: CellMask,
    dims: &HashMap<CellMask, usize>,
    facets_of: &HashMap<CellMask, Vec<CellMask>>,
    memo: &mut HashMap<CellMask, Vec<Face>>,
) -> Vec<Face> {
    if let Some(t) = memo.get(&face) {
        return t.clone();
    }
    let out = if dims[&face] == 0 {
        vec![indices_of(face)]
    } else {
        let b = limit(face);
        let mut out = Vec::new();
        for &g in &facets_of[&face] {
            if g >> b & 1 == 1 {
                continue;
            }
            for simplex in pulling(g, dims, facets_of, memo) {
                let mut s = Vec::with_capacity(simplex.len() + 1);
                s.push(b);
                s.extend(simplex);
                out.push(s);
            }
        }
        out.sort();
        out
    };
    memo.insert(face, out.clone());
    out
}

/// Lattice distance from vertex `b` to the affine span of the face `g`.
fn lattice_height(vertices: &[Weight], b: usize, g: CellMask) -> Result<u64, ModelError> {
    let idx = indices_of(g);
    let base = &vertices[idx[0]];
    let mut rows: Vec<Weight> = idx[1..].iter().map(|&i| &vertices[i] - base).collect();
    let below = lattice_index(&rows)?;
    rows.push(&vertices[b] - base);
    let above = lattice_index(&rows)?;
    to_u64(&(above / below))
}

/// Primitive edge directions at a vertex, when the vertex is smooth.
fn smooth_tangent_weights(vertices: &[Weight], faces: &[PolytopeFace], f: usize) -> Option<Vec<Weight>> {
    let d = vertices[f].dim();
    let dirs: Vec<Weight> = faces
        .iter()
        .filter(|e| e.dim == 1 && e.mask >> f & 1 == 1)
        .map(|e| {
            let other = indices_of(e.mask).into_iter().find(|&g| g != f).unwrap();
            (&vertices[other] - &vertices[f]).primitive()
        })
        .collect::<Result<_, _>>()
        .ok()?;
    if dirs.len() != d {
        return None;
    }
    let det = det(&dirs).ok()?;
    (det.abs().is_one()).then_some(dirs)
}

/// Normal of the hyperplane through `d` affinely independent points of `Q^d`.
fn hyperplane_normal(points: &[Weight]) -> Weight {
    let d = points[0].dim();
    let rows: Vec<Weight> = points[1..].iter().map(|p| p - &points[0]).collect();
    let coords = (0..d)
        .map(|j| {
            let minor: Vec<Weight> = rows
                .iter()
                .map(|r| Weight::new((0..d).filter(|&c| c != j).map(|c| r[c].clone()).collect()))
                .collect();
            let m = det(&minor).expect("square minor");
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    Weight::new(coords)
}

/// All nonempty faces of the convex hull of `vertices`, which must be full-dimensional and in
/// convex position. Facets come from supporting hyperplanes through affinely independent
/// vertex subsets; every other face is an intersection of facets.
pub fn polytope_faces(vertices: &[Weight], labels: &[String]) -> Result<Vec<PolytopeFace>, ModelError> {
    let n = vertices.len();
    let d = vertices[0].dim();
    let full: CellMask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut masks: BTreeSet<CellMask> = BTreeSet::new();
    if d > 0 {
        let mut facets = BTreeSet::new();
        for subset in subsets_of_size(n, d) {
            let pts: Vec<Weight> = subset.iter().map(|&i| vertices[i].clone()).collect();
            if !affinely_independent(&pts) {
                continue;
            }
            let normal = hyperplane_normal(&pts);
            let offset = normal.dot(&pts[0]);
            let vals: Vec<Rat> = vertices.iter().map(|v| normal.dot(v) - &offset).collect();
            let nonneg = vals.iter().all(|x| !x.is_negative());
            let nonpos = vals.iter().all(|x| !x.is_positive());
            if nonneg || nonpos {
                let mask = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.is_zero())
                    .fold(0u64, |m, (i, _)| m | 1u64 << i);
                facets.insert(mask);
            }
        }
        let mut frontier: Vec<CellMask> = facets.iter().copied().collect();
        masks.extend(facets.iter().copied());
        while let Some(face) = frontier.pop() {
            for &facet in &facets {
                let meet = face & facet;
                if meet != 0 && masks.insert(meet) {
                    frontier.push(meet);
                }
            }
        }
    }
    masks.insert(full);
    if let Some(i) = (0..n).find(|&i| !masks.contains(&(1u64 << i))) {
        return Err(ModelError::NotAVertex(labels[i].clone()));
    }
    Ok(masks
        .into_iter()
        .map(|mask| {
            let pts: Vec<Weight> = indices_of(mask).into_iter().map(|i| vertices[i].clone()).collect();
            PolytopeFace {
                mask,
                dim: affine_dim(&pts).unwrap_or(0),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::mask_of;

    fn model(pts: &[&[i64]], xi: &[i64]) -> ToricModel {
        let labels = (0..pts.len()).map(|i| format!("p{i}")).collect();
        let vertices = pts.iter().map(|p| Weight::from_ints(p)).collect();
        ToricModel::new(labels, vertices, Weight::from_ints(xi)).unwrap()
    }

    fn square() -> ToricModel {
        model(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[1, 2])
    }

    #[test]
    fn square_faces() {
        let m = square();
        let counts: Vec<usize> = (0..=2)
            .map(|k| m.faces().iter().filter(|f| f.dim == k).count())
            .collect();
        assert_eq!(counts, vec![4, 4, 1]);
    }

    #[test]
    fn bb_faces_of_square() {
        let m = square();
        // bottom vertex (0,0) owns the square, its two edges and itself
        assert_eq!(m.toric_bb_faces(0).unwrap().len(), 4);
        // the top vertex owns only itself
        assert_eq!(m.toric_bb_faces(3).unwrap(), vec![vec![3]]);
        assert!(m.toric_bb_faces(4).is_err());
    }

    #[test]
    fn square_pulls_into_two_triangles() {
        let m = square();
        assert_eq!(m.pulling_triangulation().len(), 2);
        assert!(m.pulling_triangulation().iter().all(|c| m.toric_v(c).unwrap() == 1));
        assert_eq!(m.normalized_volume().unwrap(), 2);
        assert_eq!(
            m.closure_complex().facets(),
            m.pulling_triangulation().iter().cloned().collect()
        );
    }

    #[test]
    fn simplex_is_one_chain() {
        let m = model(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[1, 2, 4]);
        assert_eq!(m.pulling_triangulation(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn toric_v_examples() {
        let m = model(&[&[0, 0], &[2, 0], &[0, 1]], &[1, 3]);
        assert_eq!(m.toric_v(&[0, 1, 2]).unwrap(), 2);
        let unit = model(&[&[0, 0], &[1, 0], &[0, 1]], &[1, 3]);
        assert_eq!(unit.toric_v(&[0, 1, 2]).unwrap(), 1);
    }

    #[test]
    fn heights_and_degrees() {
        let m = model(&[&[0, 0], &[2, 0], &[0, 1]], &[1, 3]);
        let g = m.geometry();
        // vertex order: (0,0), (2,0), (0,1)
        let tri = mask_of(&[0, 1, 2]);
        // the edge opposite the origin lies on x + 2y = 2
        assert_eq!(g.hyperplane_section(tri), &[(mask_of(&[1, 2]), 2)]);
        assert_eq!(g.degree(tri), Some(2));
        assert_eq!(g.degree(mask_of(&[0, 1])), Some(2));
        assert_eq!(g.multiplicity(mask_of(&[0, 1]), mask_of(&[1])), Some(2));
    }

    #[test]
    fn rejects_interior_points_and_ties() {
        let labels = (0..4).map(|i| format!("p{i}")).collect::<Vec<_>>();
        let pts = [&[0, 0][..], &[2, 0], &[0, 2], &[1, 1]]
            .iter()
            .map(|p| Weight::from_ints(p))
            .collect::<Vec<_>>();
        assert!(matches!(
            ToricModel::new(labels.clone(), pts, Weight::from_ints(&[1, 3])),
            Err(ModelError::NotAVertex(_))
        ));
        let sq = [&[0, 0][..], &[1, 0], &[0, 1], &[1, 1]]
            .iter()
            .map(|p| Weight::from_ints(p))
            .collect::<Vec<_>>();
        assert!(matches!(
            ToricModel::new(labels, sq, Weight::from_ints(&[1, 1])),
            Err(ModelError::PhiSNotInjective(..))
        ));
    }

    #[test]
    fn tangent_weights_at_smooth_vertices() {
        let m = square();
        let w = m.points()[0].tangent_weights.as_ref().unwrap();
        assert_eq!(w.len(), 2);
        assert!(m.is_smooth());
        // the apex of a cone over a square is not simple
        let pyramid = model(
            &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]],
            &[1, 2, 5],
        );
        let apex = pyramid.vertex_index("p4").unwrap();
        assert!(pyramid.points()[apex].tangent_weights.is_none());
    }
}
