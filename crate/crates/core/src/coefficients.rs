//! Witnesses and the coefficients built from them.
//!
//! Only witnesses whose components drop in dimension by one at each step are enumerated; for
//! chains of maximal length these are all of them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complexes::{Component, Face, Witness};
use crate::models::cells::{is_subcell, CellGeometry, CellMask};
use crate::models::Model;
use crate::util::{indices_of, mask_of};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("{0:?} is not a closure chain")]
    NotAChain(Vec<String>),
    #[error("model lacks {0}")]
    IncompleteModel(String),
    #[error("{0:?} is not a component of dimension dim X - k for this chain")]
    NotAComponent(Vec<String>),
    #[error("integer overflow")]
    Overflow,
}

fn cell_component(cell: CellMask) -> Component {
    Component::Cell(indices_of(cell))
}

fn component_cell(c: &Component) -> Option<CellMask> {
    match c {
        Component::Cell(f) => Some(mask_of(f)),
        Component::Named(_) => None,
    }
}

/// Witnesses to `chain` inside `ambient` (the whole space when `None`), as component lists
/// with their multiplicities. The first component is a top-dimensional component of the
/// ambient space with multiplicity 1, since every model here is reduced.
fn witnesses_in(geom: &CellGeometry, ambient: Option<CellMask>, chain: &[usize]) -> Vec<(Vec<CellMask>, Vec<u64>)> {
    let Some((&f0, rest)) = chain.split_first() else {
        return Vec::new();
    };
    let top = match ambient {
        Some(z) => geom.cell_dim(z).unwrap_or(0),
        None => geom.top_dim(),
    };
    let mut out = Vec::new();
    for y0 in geom.components(ambient, f0) {
        if geom.cell_dim(y0) != Some(top) {
            continue;
        }
        let mut stack = vec![(vec![y0], vec![1u64])];
        while let Some((ys, ms)) = stack.pop() {
            let i = ys.len();
            if i == chain.len() {
                out.push((ys, ms));
                continue;
            }
            let prev = *ys.last().unwrap();
            let prev_dim = geom.cell_dim(prev).unwrap_or(0);
            for y in geom.components(Some(prev), rest[i - 1]) {
                if geom.cell_dim(y).map(|d| d + 1) != Some(prev_dim) {
                    continue;
                }
                let Some(m) = geom.multiplicity(prev, y) else {
                    continue;
                };
                let mut ys2 = ys.clone();
                ys2.push(y);
                let mut ms2 = ms.clone();
                ms2.push(m);
                stack.push((ys2, ms2));
            }
        }
    }
    out.sort();
    out
}

fn to_witness(chain: &[usize], ys: &[CellMask], ms: &[u64]) -> Witness {
    Witness {
        steps: chain.iter().zip(ys).map(|(&f, &y)| (f, cell_component(y))).collect(),
        multiplicities: ms.to_vec(),
    }
}

/// All witnesses to a closure chain.
pub fn enumerate_witnesses(model: &Model, chain: &[usize]) -> Result<Vec<Witness>, CoefficientError> {
    if chain.is_empty() || !model.closure_complex().contains(chain) {
        return Err(CoefficientError::NotAChain(model.chain_labels(chain)));
    }
    match model.geometry() {
        Some(geom) => Ok(witnesses_in(geom, None, chain)
            .into_iter()
            .map(|(ys, ms)| to_witness(chain, &ys, &ms))
            .collect()),
        None => {
            let generic = model.as_generic().expect("non-cell models are generic");
            generic.chain(chain).and_then(|c| c.witnesses.clone()).ok_or_else(|| {
                CoefficientError::IncompleteModel(format!("witness data for {:?}", model.chain_labels(chain)))
            })
        }
    }
}

fn sum_weights<'a>(ws: impl IntoIterator<Item = &'a Witness>) -> Result<u64, CoefficientError> {
    ws.into_iter().try_fold(0u64, |acc, w| {
        w.weight()
            .and_then(|x| acc.checked_add(x))
            .ok_or(CoefficientError::Overflow)
    })
}

/// Sum over witnesses of the product of their multiplicities.
pub fn v_from_witnesses(model: &Model, chain: &[usize]) -> Result<u64, CoefficientError> {
    let ws = enumerate_witnesses(model, chain)?;
    sum_weights(&ws)
}

/// The coefficient of a maximal chain: computed from witnesses for cell models; for generic
/// models the stated value, falling back to stated witnesses.
pub fn chain_v(model: &Model, chain: &[usize]) -> Result<u64, CoefficientError> {
    match model {
        Model::Generic(g) => {
            let c = g
                .chain(chain)
                .ok_or_else(|| CoefficientError::NotAChain(model.chain_labels(chain)))?;
            match (c.v, &c.witnesses) {
                (Some(v), _) => Ok(v),
                (None, Some(ws)) => sum_weights(ws),
                (None, None) => Err(CoefficientError::IncompleteModel(format!(
                    "a coefficient for {:?}",
                    model.chain_labels(chain)
                ))),
            }
        }
        _ => v_from_witnesses(model, chain),
    }
}

/// Coefficients of all maximal chains.
pub fn all_v(model: &Model) -> Result<BTreeMap<Face, u64>, CoefficientError> {
    model
        .maximal_chains()
        .into_iter()
        .map(|c| chain_v(model, &c).map(|v| (c, v)))
        .collect()
}

/// `deg X`, the sum of the coefficients of the maximal chains.
pub fn degree(model: &Model) -> Result<u64, CoefficientError> {
    all_v(model)?
        .values()
        .try_fold(0u64, |acc, &v| acc.checked_add(v))
        .ok_or(CoefficientError::Overflow)
}

/// `v(Z)_{chain,Y}` for all relevant triples of a cell model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoefficientTable {
    /// `(chain, Y) -> v(X)_{chain,Y}`
    pub absolute: BTreeMap<(Face, Component), u64>,
    /// `(Z, chain, Y) -> v(Z)_{chain,Y}` for components `Z` of iterated closures
    pub relative: BTreeMap<(Component, Face, Component), u64>,
    /// maximal chain -> `v_gamma`
    pub v: BTreeMap<Face, u64>,
}

impl CoefficientTable {
    pub fn get(&self, chain: &[usize], y: &Component) -> u64 {
        self.absolute.get(&(chain.to_vec(), y.clone())).copied().unwrap_or(0)
    }

    pub fn get_relative(&self, z: &Component, chain: &[usize], y: &Component) -> u64 {
        self.relative
            .get(&(z.clone(), chain.to_vec(), y.clone()))
            .copied()
            .unwrap_or(0)
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, u64>, key: K, x: u64) -> Result<(), CoefficientError> {
    let e = map.entry(key).or_insert(0);
    *e = e.checked_add(x).ok_or(CoefficientError::Overflow)?;
    Ok(())
}

/// Tabulates every `v(X)_{chain,Y}` and every `v(Y_j)_{suffix,Y}` needed to check the
/// recurrence along all closure chains.
pub fn build_table(model: &Model) -> Result<CoefficientTable, CoefficientError> {
    let mut table = CoefficientTable::default();
    let Some(geom) = model.geometry() else {
        table.v = all_v(model)?;
        return Ok(table);
    };
    let chains: Vec<Face> = model.closure_complex().faces().iter().cloned().collect();
    for chain in &chains {
        for (ys, ms) in witnesses_in(geom, None, chain) {
            let w: u64 = ms
                .iter()
                .try_fold(1u64, |a, &m| a.checked_mul(m))
                .ok_or(CoefficientError::Overflow)?;
            add_into(
                &mut table.absolute,
                (chain.clone(), cell_component(*ys.last().unwrap())),
                w,
            )?;
            // every intermediate component is an ambient space for the tail of the chain
            for j in 0..chain.len() {
                let z = ys[j];
                let key_z = cell_component(z);
                let tail = &chain[j..];
                if table
                    .relative
                    .keys()
                    .any(|(kz, kc, _)| *kz == key_z && kc.as_slice() == tail)
                {
                    continue;
                }
                for (zs, zm) in witnesses_in(geom, Some(z), tail) {
                    let w: u64 = zm
                        .iter()
                        .try_fold(1u64, |a, &m| a.checked_mul(m))
                        .ok_or(CoefficientError::Overflow)?;
                    add_into(
                        &mut table.relative,
                        (key_z.clone(), tail.to_vec(), cell_component(*zs.last().unwrap())),
                        w,
                    )?;
                }
            }
        }
    }
    let n = model.dim() + 1;
    for ((chain, _), &x) in &table.absolute {
        if chain.len() == n {
            add_into(&mut table.v, chain.clone(), x)?;
        }
    }
    Ok(table)
}

/// Checks `v(X)_{chain,Y} = sum_{Y_j ⊇ Y} v(X)_{chain[..=j],Y_j} v(Y_j)_{chain[j..],Y}`.
pub fn recurrence_check(table: &CoefficientTable, chain: &[usize], j: usize, y: &Component) -> bool {
    if j >= chain.len() {
        return false;
    }
    let lhs = table.get(chain, y);
    let head = &chain[..=j];
    let tail = &chain[j..];
    let y_cell = component_cell(y);
    let mut rhs: u64 = 0;
    for ((c, yj), &a) in &table.absolute {
        if c.as_slice() != head {
            continue;
        }
        let contains = match (component_cell(yj), y_cell) {
            (Some(big), Some(small)) => is_subcell(small, big),
            _ => true,
        };
        if !contains {
            continue;
        }
        let b = table.get_relative(yj, tail, y);
        rhs = match a.checked_mul(b).and_then(|p| rhs.checked_add(p)) {
            Some(x) => x,
            None => return false,
        };
    }
    lhs == rhs
}

/// Degree of a component, when the model knows it.
pub fn component_degree(model: &Model, y: &Component) -> Result<u64, CoefficientError> {
    let geom = model
        .geometry()
        .ok_or_else(|| CoefficientError::IncompleteModel("component degrees".into()))?;
    component_cell(y)
        .and_then(|c| geom.degree(c))
        .ok_or_else(|| CoefficientError::IncompleteModel(format!("a degree for {y:?}")))
}

/// Both sides of the assembling identity
/// `v_{chain,Y} deg Y = sum_i v_{(chain, min Z_i), Z_i} deg Z_i`
/// over the components `Z_i` of the hyperplane section of `Y` missing its lowest point. Each
/// right-hand coefficient counts only witnesses passing through `Y`. When `Y` is a point, the
/// identity degenerates to `v_{chain,Y} = v_chain`.
pub fn assembling_sides(
    model: &Model,
    table: &CoefficientTable,
    chain: &[usize],
    y: &Component,
) -> Result<(u64, u64), CoefficientError> {
    let geom = model
        .geometry()
        .ok_or_else(|| CoefficientError::IncompleteModel("hyperplane sections".into()))?;
    let y_cell = component_cell(y).ok_or_else(|| CoefficientError::IncompleteModel("cell components".into()))?;
    let k = chain
        .len()
        .checked_sub(1)
        .ok_or_else(|| CoefficientError::NotAChain(Vec::new()))?;
    let top = model.dim();
    if geom.cell_dim(y_cell).map(|d| d + k) != Some(top) {
        return Err(CoefficientError::NotAComponent(model.chain_labels(&indices_of(y_cell))));
    }
    let v_y = table.get(chain, y);
    if k == top {
        let v = table.v.get(chain).copied().unwrap_or(0);
        return Ok((v_y, v));
    }
    let lhs = v_y
        .checked_mul(geom.degree(y_cell).unwrap_or(0))
        .ok_or(CoefficientError::Overflow)?;
    let mut rhs = 0u64;
    for &(z, _) in geom.hyperplane_section(y_cell) {
        let mut longer = chain.to_vec();
        longer.push(z.trailing_zeros() as usize);
        let through_y: u64 = witnesses_in(geom, None, &longer)
            .into_iter()
            .filter(|(ys, _)| ys[k] == y_cell && ys[k + 1] == z)
            .try_fold(0u64, |acc, (_, ms)| {
                ms.iter()
                    .try_fold(1u64, |a, &m| a.checked_mul(m))
                    .and_then(|w| acc.checked_add(w))
            })
            .ok_or(CoefficientError::Overflow)?;
        let term = through_y
            .checked_mul(geom.degree(z).unwrap_or(0))
            .ok_or(CoefficientError::Overflow)?;
        rhs = rhs.checked_add(term).ok_or(CoefficientError::Overflow)?;
    }
    Ok((lhs, rhs))
}

pub fn assembling_check(
    model: &Model,
    table: &CoefficientTable,
    chain: &[usize],
    y: &Component,
) -> Result<bool, CoefficientError> {
    let (lhs, rhs) = assembling_sides(model, table, chain, y)?;
    Ok(lhs == rhs && lhs > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Weight;
    use crate::models::{SrModel, ToricModel};

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn hollow() -> Model {
        Model::Sr(SrModel::new(names(3), vec![vec![0, 1], vec![0, 2], vec![1, 2]], None, None).unwrap())
    }

    fn square() -> Model {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        let pts = [[0, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|p| Weight::from_ints(p))
            .collect();
        Model::Toric(ToricModel::new(labels, pts, Weight::from_ints(&[1, 2])).unwrap())
    }

    #[test]
    fn hollow_triangle_witnesses() {
        let m = hollow();
        let ws = enumerate_witnesses(&m, &[0, 1]).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(
            ws[0].steps,
            vec![(0, Component::Cell(vec![0, 1])), (1, Component::Cell(vec![1]))]
        );
        assert_eq!(v_from_witnesses(&m, &[1, 2]).unwrap(), 1);
        assert_eq!(degree(&m).unwrap(), 3);
        assert!(matches!(
            enumerate_witnesses(&m, &[0, 1, 2]),
            Err(CoefficientError::NotAChain(_))
        ));
    }

    #[test]
    fn toric_witness_sums_match_volumes() {
        let m = square();
        for chain in m.maximal_chains() {
            let ws = enumerate_witnesses(&m, &chain).unwrap();
            assert_eq!(ws[0].steps[0].1, Component::Cell(vec![0, 1, 2, 3]));
            assert_eq!(v_from_witnesses(&m, &chain).unwrap(), m.closed_form_v(&chain).unwrap());
        }
        assert_eq!(degree(&m).unwrap(), 2);
    }

    #[test]
    fn recurrence_holds_and_detects_corruption() {
        let m = hollow();
        let table = build_table(&m).unwrap();
        let y = Component::Cell(vec![1]);
        assert!(recurrence_check(&table, &[0, 1], 0, &y));
        assert!(recurrence_check(&table, &[0, 1], 1, &y));
        let mut bad = table.clone();
        *bad.absolute.get_mut(&(vec![0, 1], y.clone())).unwrap() = 2;
        assert!(!recurrence_check(&bad, &[0, 1], 0, &y));
    }

    #[test]
    fn assembling_on_square() {
        let m = square();
        let table = build_table(&m).unwrap();
        let p = Component::Cell(vec![0, 1, 2, 3]);
        assert_eq!(assembling_sides(&m, &table, &[0], &p).unwrap(), (2, 2));
        for chain in m.maximal_chains() {
            let last = Component::Cell(vec![*chain.last().unwrap()]);
            assert!(assembling_check(&m, &table, &chain, &last).unwrap());
        }
    }
}
