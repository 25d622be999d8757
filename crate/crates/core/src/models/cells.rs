//! B-B geometry of spaces stratified by cells that are indexed by vertex sets.
//!
//! Both the Stanley-Reisner schemes and the projective toric varieties decompose as unions of
//! closed cells (coordinate subspaces, resp. orbit closures) indexed by faces. An open cell
//! flows to its lowest vertex under the one-parameter subgroup, so every iterated closure is a
//! union of closed cells and its components are the maximal ones. Vertices are indexed in
//! increasing `phi_S` order, which makes the limit of a cell its lowest set bit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::complexes::{Face, SimplicialComplex};
use crate::util::{indices_of, mask_of};

/// Vertex set of a cell, one bit per fixed point.
pub type CellMask = u64;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone)]
pub struct CellGeometry {
    n_vertices: usize,
    dims: HashMap<CellMask, usize>,
    degrees: HashMap<CellMask, u64>,
    by_limit: Vec<Vec<CellMask>>,
    maximal: Vec<CellMask>,
    // (parent, child) -> multiplicity of child in the hyperplane section of parent
    sections: HashMap<CellMask, Vec<(CellMask, u64)>>,
}

pub fn limit(cell: CellMask) -> usize {
    cell.trailing_zeros() as usize
}

pub fn is_subcell(small: CellMask, big: CellMask) -> bool {
    small & !big == 0
}

/// Keeps the cells not strictly contained in another one, sorted.
pub fn maximal_cells(cells: impl IntoIterator<Item = CellMask>) -> Vec<CellMask> {
    let mut cells: Vec<CellMask> = cells.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    cells.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
    let mut kept: Vec<CellMask> = Vec::new();
    for c in cells {
        if !kept.iter().any(|&k| is_subcell(c, k)) {
            kept.push(c);
        }
    }
    kept.sort_unstable();
    kept
}

pub struct CellData {
    pub mask: CellMask,
    pub dim: usize,
    pub degree: u64,
}

impl CellGeometry {
    /// `sections` lists, for each cell of positive dimension, its codimension-one subcells that
    /// avoid its limit point together with their multiplicities.
    pub fn new(n_vertices: usize, cells: Vec<CellData>, sections: HashMap<CellMask, Vec<(CellMask, u64)>>) -> Self {
        let mut dims = HashMap::new();
        let mut degrees = HashMap::new();
        let mut by_limit = vec![Vec::new(); n_vertices];
        for c in &cells {
            dims.insert(c.mask, c.dim);
            degrees.insert(c.mask, c.degree);
            by_limit[limit(c.mask)].push(c.mask);
        }
        let maximal = maximal_cells(cells.iter().map(|c| c.mask));
        CellGeometry {
            n_vertices,
            dims,
            degrees,
            by_limit,
            maximal,
            sections,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn is_cell(&self, cell: CellMask) -> bool {
        self.dims.contains_key(&cell)
    }

    pub fn cell_dim(&self, cell: CellMask) -> Option<usize> {
        self.dims.get(&cell).copied()
    }

    pub fn degree(&self, cell: CellMask) -> Option<u64> {
        self.degrees.get(&cell).copied()
    }

    pub fn top_dim(&self) -> usize {
        self.maximal.iter().filter_map(|&c| self.cell_dim(c)).max().unwrap_or(0)
    }

    /// Irreducible components of the whole space.
    pub fn maximal(&self) -> &[CellMask] {
        &self.maximal
    }

    /// Components of the closure of the points of `within` (or of the whole space) that flow
    /// to `f`.
    pub fn components(&self, within: Option<CellMask>, f: usize) -> Vec<CellMask> {
        let Some(candidates) = self.by_limit.get(f) else {
            return Vec::new();
        };
        match within {
            Some(y) => maximal_cells(candidates.iter().copied().filter(|&c| is_subcell(c, y))),
            None => maximal_cells(candidates.iter().copied()),
        }
    }

    /// Components of the iterated closure along `chain`; empty iff `chain` is not a closure
    /// chain. The empty chain gives the components of the whole space.
    pub fn region(&self, chain: &[usize]) -> Vec<CellMask> {
        let mut region = self.maximal.clone();
        for &f in chain {
            let Some(candidates) = self.by_limit.get(f) else {
                return Vec::new();
            };
            let next = candidates
                .iter()
                .copied()
                .filter(|&c| region.iter().any(|&r| is_subcell(c, r)));
            region = maximal_cells(next);
            if region.is_empty() {
                break;
            }
        }
        region
    }

    /// Closure chains, found by extending chains one fixed point at a time.
    pub fn closure_complex(&self, labels: Vec<String>) -> SimplicialComplex {
        let mut faces: BTreeSet<Face> = BTreeSet::new();
        let mut stack: Vec<(Face, Vec<CellMask>)> = vec![(Vec::new(), self.maximal.clone())];
        while let Some((chain, region)) = stack.pop() {
            let start = chain.last().map_or(0, |&l| l + 1);
            let span = region.iter().fold(0u64, |m, &r| m | r);
            for f in indices_of(span) {
                if f < start {
                    continue;
                }
                let next = maximal_cells(
                    self.by_limit[f]
                        .iter()
                        .copied()
                        .filter(|&c| region.iter().any(|&r| is_subcell(c, r))),
                );
                if next.is_empty() {
                    continue;
                }
                let mut longer = chain.clone();
                longer.push(f);
                faces.insert(longer.clone());
                stack.push((longer, next));
            }
        }
        SimplicialComplex::new(labels, faces).expect("closure chains are downward closed")
    }

    /// Components of the hyperplane section of `cell` that misses its limit point, with
    /// multiplicities.
    pub fn hyperplane_section(&self, cell: CellMask) -> &[(CellMask, u64)] {
        self.sections.get(&cell).map_or(&[], Vec::as_slice)
    }

    /// Multiplicity of `child` in the hyperplane section of `parent`, if it is a component.
    pub fn multiplicity(&self, parent: CellMask, child: CellMask) -> Option<u64> {
        self.hyperplane_section(parent)
            .iter()
            .find(|(c, _)| *c == child)
            .map(|(_, m)| *m)
    }

    /// Cells grouped by dimension, for reporting.
    pub fn cells_by_dim(&self) -> BTreeMap<usize, Vec<Face>> {
        let mut out: BTreeMap<usize, Vec<Face>> = BTreeMap::new();
        for (&c, &d) in &self.dims {
            out.entry(d).or_default().push(indices_of(c));
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
}

pub fn cell_of(face: &[usize]) -> CellMask {
    mask_of(face)
}

#[cfg(test)]
mod tests {
    use super::*;

    // the coordinate cross {ab = 0} in P^2 (vertices 0,1,2) is the union of the lines 02 and 12
    fn cross() -> CellGeometry {
        let faces: [&[usize]; 5] = [&[0], &[1], &[2], &[0, 2], &[1, 2]];
        let cells = faces
            .iter()
            .map(|f| CellData {
                mask: mask_of(f),
                dim: f.len() - 1,
                degree: 1,
            })
            .collect();
        let mut sections = HashMap::new();
        sections.insert(mask_of(&[0, 2]), vec![(mask_of(&[2]), 1)]);
        sections.insert(mask_of(&[1, 2]), vec![(mask_of(&[2]), 1)]);
        CellGeometry::new(3, cells, sections)
    }

    #[test]
    fn maximal_cells_drop_contained() {
        assert_eq!(maximal_cells([0b011, 0b001, 0b100]), vec![0b011, 0b100]);
    }

    #[test]
    fn regions_follow_the_flow() {
        let g = cross();
        assert_eq!(g.region(&[]), vec![mask_of(&[0, 2]), mask_of(&[1, 2])]);
        assert_eq!(g.region(&[0]), vec![mask_of(&[0, 2])]);
        assert_eq!(g.region(&[0, 2]), vec![mask_of(&[2])]);
        assert!(g.region(&[0, 1]).is_empty());
        assert_eq!(g.components(Some(mask_of(&[1, 2])), 2), vec![mask_of(&[2])]);
    }

    #[test]
    fn closure_complex_of_cross() {
        let g = cross();
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let complex = g.closure_complex(labels);
        assert_eq!(complex.facets(), [vec![0, 2], vec![1, 2]].into_iter().collect());
        assert_eq!(g.multiplicity(mask_of(&[0, 2]), mask_of(&[2])), Some(1));
        assert_eq!(g.top_dim(), 1);
    }
}
