//! Exact rational linear algebra over the weight lattice.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Shorthand for building a rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors do not span their ambient space of dimension {dim} (rank {rank})")]
    NoBasis { dim: usize, rank: usize },
    #[error("lattice operation needs integral coordinates")]
    NotIntegral,
}

/// A point of the character space, or of the character space extended by the dilation weight.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<Rat>);

impl Weight {
    pub fn new(coords: Vec<Rat>) -> Self {
        Weight(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Weight(vec![Rat::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Q^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut w = Self::zero(dim);
        w.0[i] = Rat::one();
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn dot(&self, other: &Weight) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Rat) -> Weight {
        Weight(self.0.iter().map(|c| c * s).collect())
    }

    /// Prepends a coordinate; used to form `c*D + w` in the extended space.
    pub fn with_leading(&self, lead: Rat) -> Weight {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(lead);
        coords.extend(self.0.iter().cloned());
        Weight(coords)
    }

    /// Primitive integral vector on the ray through `self`.
    pub fn primitive(&self) -> Result<Weight, LatticeError> {
        let ints = integral_coords(self)?;
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Ok(self.clone());
        }
        Ok(Weight(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect()))
    }
}

impl Index<usize> for Weight {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn integral_coords(w: &Weight) -> Result<Vec<BigInt>, LatticeError> {
    w.0.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(LatticeError::NotIntegral)
            }
        })
        .collect()
}

/// Images of the standard simplex vertices under an affine map. The vertices may be
/// affinely dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSimplexMap {
    pub vertices: Vec<Weight>,
}

impl AffineSimplexMap {
    pub fn new(vertices: Vec<Weight>) -> Self {
        AffineSimplexMap { vertices }
    }

    /// Dimension of the source simplex.
    pub fn simplex_dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Image of a point given in barycentric coordinates on the standard simplex.
    pub fn apply(&self, bary: &[Rat]) -> Weight {
        let dim = self.vertices.first().map_or(0, Weight::dim);
        let mut out = vec![Rat::zero(); dim];
        for (v, t) in self.vertices.iter().zip(bary) {
            for (o, c) in out.iter_mut().zip(v.coords()) {
                *o += c * t;
            }
        }
        Weight::new(out)
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(rows: &[Weight]) -> Result<Rat, LatticeError> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.dim() != n) {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    Ok(bareiss(&mut m))
}

fn bareiss(m: &mut [Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut sign = Rat::one();
    let mut prev = Rat::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rat::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = Rat::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Incremental row-echelon basis, for independence tests against a growing set.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    // (pivot column, reduced row with 1 at the pivot)
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let c = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &Weight) -> bool {
        self.reduce(v.coords()).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, v: &Weight) -> bool {
        assert_eq!(v.dim(), self.dim, "echelon dimension");
        let mut r = self.reduce(v.coords());
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let c = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= &c * y;
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

pub fn rank(vectors: &[Weight]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.dim());
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Lexicographically first basis among `vectors`: scan in order, keep an index iff it is
/// independent of those already kept.
pub fn lex_first_basis(vectors: &[Weight]) -> Result<Vec<usize>, LatticeError> {
    let dim = vectors.first().map_or(0, Weight::dim);
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(LatticeError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut e = Echelon::new(dim);
    let mut keep = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if e.rank() == dim {
            break;
        }
        if e.insert(v) {
            keep.push(i);
        }
    }
    if e.rank() < dim {
        return Err(LatticeError::NoBasis { dim, rank: e.rank() });
    }
    Ok(keep)
}

/// Solves `sum_i x_i * columns[i] = target` when the columns are linearly independent and
/// the target lies in their span.
pub fn solve_in_span(columns: &[Weight], target: &Weight) -> Option<Vec<Rat>> {
    let k = columns.len();
    let dim = target.dim();
    // augmented system rows: one per coordinate
    let mut m: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..k {
        let p = (row..dim).find(|&r| !m[r][col].is_zero())?;
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..dim {
            if r != row && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &c * y;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][k].clone()).collect())
}

/// Rows of the inverse transpose: covector `i` pairs to 1 with `basis[i]` and to 0 with the
/// other basis vectors.
pub fn dual_basis(basis: &[Weight]) -> Result<Vec<Weight>, LatticeError> {
    let n = basis.len();
    if let Some(bad) = basis.iter().find(|b| b.dim() != n) {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    // c_i solves B c_i = e_i where B has the basis vectors as rows
    let cols: Vec<Weight> = (0..n)
        .map(|r| Weight::new(basis.iter().map(|b| b[r].clone()).collect()))
        .collect();
    (0..n)
        .map(|i| {
            solve_in_span(&cols, &Weight::unit(n, i))
                .map(Weight::new)
                .ok_or(LatticeError::NoBasis {
                    dim: n,
                    rank: rank(basis),
                })
        })
        .collect()
}

/// Affine rank of a point set: dimension of its affine hull, or `None` when empty.
pub fn affine_dim(points: &[Weight]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Weight> = rest.iter().map(|p| p - first).collect();
    Some(rank(&diffs))
}

pub fn affinely_independent(points: &[Weight]) -> bool {
    affine_dim(points).is_none_or(|d| d + 1 == points.len())
}

/// Whether `p` lies in the affine hull of `points`.
pub fn in_affine_hull(p: &Weight, points: &[Weight]) -> bool {
    let Some((first, rest)) = points.split_first() else {
        return false;
    };
    let mut e = Echelon::new(p.dim());
    for q in rest {
        e.insert(&(q - first));
    }
    e.contains(&(p - first))
}

/// Some affine combination of `points` equal to `p` (coefficients summing to 1), built on
/// the lexicographically first affinely independent subset. `None` if `p` is off the hull.
pub fn affine_coordinates(p: &Weight, points: &[Weight]) -> Option<Vec<Rat>> {
    let lifted: Vec<Weight> = points.iter().map(|q| q.with_leading(Rat::one())).collect();
    let mut e = Echelon::new(p.dim() + 1);
    let mut keep = Vec::new();
    for (i, v) in lifted.iter().enumerate() {
        if e.insert(v) {
            keep.push(i);
        }
    }
    let cols: Vec<Weight> = keep.iter().map(|&i| lifted[i].clone()).collect();
    let sol = solve_in_span(&cols, &p.with_leading(Rat::one()))?;
    let mut out = vec![Rat::zero(); points.len()];
    for (&i, x) in keep.iter().zip(sol) {
        out[i] = x;
    }
    Some(out)
}

/// Barycentric coordinates of `p` with respect to `vertices`, if `p` lies in their convex
/// hull. Affinely dependent vertex sets are searched for an independent subset carrying `p`.
pub fn barycentric(p: &Weight, vertices: &[Weight]) -> Option<Vec<Rat>> {
    if vertices.is_empty() {
        return None;
    }
    if affinely_independent(vertices) {
        let coords = affine_coordinates(p, vertices)?;
        return coords.iter().all(|c| !c.is_negative()).then_some(coords);
    }
    // Caratheodory: some affinely independent subset already carries p
    let n = vertices.len();
    for size in 1..n {
        for subset in crate::util::subsets_of_size(n, size) {
            let sub: Vec<Weight> = subset.iter().map(|&i| vertices[i].clone()).collect();
            if !affinely_independent(&sub) {
                continue;
            }
            if let Some(c) = barycentric(p, &sub) {
                let mut out = vec![Rat::zero(); n];
                for (&i, x) in subset.iter().zip(c) {
                    out[i] = x;
                }
                return Some(out);
            }
        }
    }
    None
}

/// `|det(v_1 - v_0, ..., v_d - v_0)|`, i.e. `d!` times the Euclidean volume.
pub fn normalized_volume(vertices: &[Weight]) -> Result<Rat, LatticeError> {
    let Some((first, rest)) = vertices.split_first() else {
        return Err(LatticeError::DimensionMismatch { expected: 1, found: 0 });
    };
    if first.dim() != rest.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: first.dim() + 1,
            found: vertices.len(),
        });
    }
    let edges: Vec<Weight> = rest.iter().map(|v| v - first).collect();
    Ok(det(&edges)?.abs())
}

/// Index of the lattice generated by integral `rows` inside its saturation, i.e. the gcd of
/// all maximal nonvanishing minors. Returns 1 for an empty or zero set of rows.
pub fn lattice_index(rows: &[Weight]) -> Result<BigInt, LatticeError> {
    let r = rank(rows);
    if r == 0 {
        return Ok(BigInt::one());
    }
    let ints: Vec<Vec<BigInt>> = rows.iter().map(integral_coords).collect::<Result<_, _>>()?;
    let d = rows[0].dim();
    let mut g = BigInt::zero();
    for row_set in crate::util::subsets_of_size(rows.len(), r) {
        if rank(&row_set.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()) < r {
            continue;
        }
        for cols in crate::util::subsets_of_size(d, r) {
            let m: Vec<Weight> = row_set
                .iter()
                .map(|&i| Weight::new(cols.iter().map(|&c| Rat::from_integer(ints[i][c].clone())).collect()))
                .collect();
            g = g.gcd(&det(&m)?.to_integer());
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// Normalized volume of a lattice simplex measured in the lattice of its own affine span:
/// the gcd of the maximal minors of its edge matrix, or 0 when the simplex is degenerate.
pub fn lattice_normalized_volume(vertices: &[Weight]) -> Result<BigInt, LatticeError> {
    let Some((first, rest)) = vertices.split_first() else {
        return Ok(BigInt::zero());
    };
    let edges: Vec<Weight> = rest.iter().map(|v| v - first).collect();
    if rank(&edges) < edges.len() {
        return Ok(BigInt::zero());
    }
    lattice_index(&edges)
}
