//! Exact rational-function identities: equivariant multiplicities against fixed-point sums,
//! partial-fractions schemata and the tensors built from them, and linear relations among the
//! coefficients.
//!
//! Polynomials live in `Q[D, t_1, ..., t_d]`, with the dilation variable `D` as coordinate 0.
//! The list `(D + Phi_T(f_i))_i` is ordered along the chain, which fixes every lex-first basis.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coefficients::{all_v, CoefficientError};
use crate::complexes::{Face, FixedPoint};
use crate::lattice::{dual_basis, lex_first_basis, rank, Rat, Weight};
use crate::measures::{avoids_small_hulls, simplex_spline, DhMeasure, MeasureError};
use crate::models::Model;
use crate::util::subsets_of_size;

/// Seed for the evaluation fallback of [`compare_fraction_sums`].
pub const DEFAULT_SEED: u64 = 0x6262_6c6f_6331;

/// Largest monomial count the exact comparison will attempt before sampling instead.
pub const DEFAULT_MONOMIAL_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("fixed point {0:?} has a zero tangent weight")]
    ZeroTangentWeight(String),
    #[error("fixed point {0:?} has no tangent weights")]
    MissingTangentData(String),
    #[error("denominator factor is the zero form")]
    ZeroDenominator,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{k} classes exceed dim X = {dim}")]
    TooManyClasses { k: usize, dim: usize },
    #[error("point {0} is not in general position")]
    NonGenericPoint(Weight),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    /// The linear form `sum_i w_i x_i`.
    pub fn linear(w: &Weight) -> Self {
        let n = w.dim();
        let mut p = Self::zero(n);
        for (i, c) in w.coords().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.nvars, "evaluation point length");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k as usize))
            })
            .fold(Rat::zero(), |a, b| a + b)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial rings differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-Rat::one())
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial rings differ");
        let mut out = SparsePoly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }
}

/// `numerator / prod(denominators)` with each denominator factor a nonzero linear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionTerm {
    pub numerator: SparsePoly,
    pub denominators: Vec<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionSum {
    nvars: usize,
    terms: Vec<FractionTerm>,
}

impl FractionSum {
    pub fn new(nvars: usize, terms: Vec<FractionTerm>) -> Result<Self, LocalizationError> {
        for t in &terms {
            if t.numerator.nvars() != nvars {
                return Err(LocalizationError::DimensionMismatch {
                    expected: nvars,
                    found: t.numerator.nvars(),
                });
            }
            for d in &t.denominators {
                if d.dim() != nvars {
                    return Err(LocalizationError::DimensionMismatch {
                        expected: nvars,
                        found: d.dim(),
                    });
                }
                if d.is_zero() {
                    return Err(LocalizationError::ZeroDenominator);
                }
            }
        }
        Ok(FractionSum { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[FractionTerm] {
        &self.terms
    }

    /// Value at `x`, or `None` at a pole of some term.
    pub fn eval(&self, x: &[Rat]) -> Option<Rat> {
        let xw = Weight::new(x.to_vec());
        let mut acc = Rat::zero();
        for t in &self.terms {
            let mut den = Rat::one();
            for d in &t.denominators {
                den *= d.dot(&xw);
            }
            if den.is_zero() {
                return None;
            }
            acc += t.numerator.eval(x) / den;
        }
        Some(acc)
    }
}

/// `sum_gamma v_gamma / prod_{f in gamma} (D + Phi_T(f))` over maximal chains.
pub fn equivariant_multiplicity(model: &Model) -> Result<FractionSum, LocalizationError> {
    let v = all_v(model)?;
    let nvars = 1 + model.torus_dim();
    let points = model.points();
    let terms = v
        .iter()
        .map(|(chain, &v)| FractionTerm {
            numerator: SparsePoly::constant(nvars, Rat::from_integer(BigInt::from(v))),
            denominators: chain
                .iter()
                .map(|&f| points[f].phi_t.with_leading(Rat::one()))
                .collect(),
        })
        .collect();
    FractionSum::new(nvars, terms)
}

/// Fixed-point sum `sum_f alpha_f / ((D + Phi_T(f)) prod_i lambda_f^i)` on the affine cone, with
/// tangent weights pointing away from `f` in the polytope's edge convention. `numerators` is the
/// restriction of the integrand to each fixed point; `None` means the class 1.
pub fn ab_sum(points: &[FixedPoint], numerators: Option<&[SparsePoly]>) -> Result<FractionSum, LocalizationError> {
    let d = points.first().map_or(0, |p| p.phi_t.dim());
    let nvars = 1 + d;
    if let Some(ns) = numerators {
        if ns.len() != points.len() {
            return Err(LocalizationError::DimensionMismatch {
                expected: points.len(),
                found: ns.len(),
            });
        }
    }
    let mut terms = Vec::with_capacity(points.len());
    for (i, f) in points.iter().enumerate() {
        let ws = f
            .tangent_weights
            .as_ref()
            .ok_or_else(|| LocalizationError::MissingTangentData(f.id.clone()))?;
        let mut den = vec![f.phi_t.with_leading(Rat::one())];
        for w in ws {
            if w.is_zero() {
                return Err(LocalizationError::ZeroTangentWeight(f.id.clone()));
            }
            den.push(w.with_leading(Rat::zero()));
        }
        let numerator = match numerators {
            Some(ns) => ns[i].clone(),
            None => SparsePoly::one(nvars),
        };
        terms.push(FractionTerm {
            numerator,
            denominators: den,
        });
    }
    FractionSum::new(nvars, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonMethod {
    Exact,
    Sampled { seed: u64, points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub method: ComparisonMethod,
}

/// Scales a nonzero form so its first nonzero coordinate is 1; returns the form and the factor
/// divided out.
fn normalize_form(w: &Weight) -> (Weight, Rat) {
    let lead = w.coords().iter().find(|c| !c.is_zero()).cloned().expect("nonzero form");
    (w.scale(&lead.recip()), lead)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Numerators over the common denominator, or `None` when the budget is exceeded.
fn cleared_difference(a: &FractionSum, b: &FractionSum, budget: usize) -> Option<SparsePoly> {
    let nvars = a.nvars;
    let canon = |t: &FractionTerm| {
        let mut mult: BTreeMap<Weight, u32> = BTreeMap::new();
        let mut scale = Rat::one();
        for d in &t.denominators {
            let (f, lead) = normalize_form(d);
            *mult.entry(f).or_insert(0) += 1;
            scale *= lead;
        }
        (mult, scale.recip())
    };
    let ca: Vec<_> = a.terms.iter().map(canon).collect();
    let cb: Vec<_> = b.terms.iter().map(canon).collect();
    let mut lcd: BTreeMap<Weight, u32> = BTreeMap::new();
    for (m, _) in ca.iter().chain(&cb) {
        for (f, &k) in m {
            let e = lcd.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
    }
    let lcd_deg: u32 = lcd.values().sum();
    let num_deg = a
        .terms
        .iter()
        .chain(&b.terms)
        .map(|t| t.numerator.degree())
        .max()
        .unwrap_or(0);
    let deg = (lcd_deg + num_deg) as usize;
    if binomial(deg + nvars, nvars) > budget as u128 {
        return None;
    }
    let mut acc = SparsePoly::zero(nvars);
    for (terms, canons, sign) in [(&a.terms, &ca, Rat::one()), (&b.terms, &cb, -Rat::one())] {
        for (t, (m, s)) in terms.iter().zip(canons) {
            let mut p = t.numerator.scale(&(s * &sign));
            for (f, &k) in &lcd {
                let have = m.get(f).copied().unwrap_or(0);
                let lin = SparsePoly::linear(f);
                for _ in have..k {
                    p = &p * &lin;
                }
            }
            acc = &acc + &p;
        }
    }
    Some(acc)
}

fn total_degree_bound(a: &FractionSum, b: &FractionSum) -> usize {
    let dens: usize = a.terms.iter().chain(&b.terms).map(|t| t.denominators.len()).sum();
    let nums = a
        .terms
        .iter()
        .chain(&b.terms)
        .map(|t| t.numerator.degree() as usize)
        .max()
        .unwrap_or(0);
    dens + nums
}

/// Exact comparison after clearing denominators; evaluation at `deg + 1` seeded random integer
/// points avoiding poles when the common denominator is too large to expand.
pub fn compare_fraction_sums(a: &FractionSum, b: &FractionSum, seed: u64, budget: usize) -> Comparison {
    if a.nvars != b.nvars {
        return Comparison {
            equal: false,
            method: ComparisonMethod::Exact,
        };
    }
    if let Some(diff) = cleared_difference(a, b, budget) {
        return Comparison {
            equal: diff.is_zero(),
            method: ComparisonMethod::Exact,
        };
    }
    let samples = total_degree_bound(a, b) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equal = true;
    let mut taken = 0;
    while taken < samples {
        let x: Vec<Rat> = (0..a.nvars)
            .map(|_| Rat::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))))
            .collect();
        let (Some(va), Some(vb)) = (a.eval(&x), b.eval(&x)) else {
            continue;
        };
        taken += 1;
        if va != vb {
            equal = false;
            break;
        }
    }
    Comparison {
        equal,
        method: ComparisonMethod::Sampled { seed, points: taken },
    }
}

pub fn fraction_sums_equal(a: &FractionSum, b: &FractionSum) -> bool {
    compare_fraction_sums(a, b, DEFAULT_SEED, DEFAULT_MONOMIAL_BUDGET).equal
}

/// An injection `sigma: {1..k} -> {1..n}` such that each `sigma(i)` lies in the lex-first basis of
/// the vectors not yet removed and the vectors left at the end still span.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SchemaInjection {
    sigma: Vec<usize>,
}

fn spans(vectors: &[Weight], keep: &[usize]) -> bool {
    let dim = vectors.first().map_or(0, Weight::dim);
    let sub: Vec<Weight> = keep.iter().map(|&i| vectors[i].clone()).collect();
    rank(&sub) == dim
}

/// Lex-first basis of the surviving vectors, as indices into the full list.
fn surviving_basis(vectors: &[Weight], alive: &[usize]) -> Option<Vec<usize>> {
    let sub: Vec<Weight> = alive.iter().map(|&i| vectors[i].clone()).collect();
    lex_first_basis(&sub)
        .ok()
        .map(|b| b.into_iter().map(|j| alive[j]).collect())
}

impl SchemaInjection {
    pub fn new(vectors: &[Weight], sigma: Vec<usize>) -> Result<Self, LocalizationError> {
        let mut alive: Vec<usize> = (0..vectors.len()).collect();
        for (i, &s) in sigma.iter().enumerate() {
            if s >= vectors.len() {
                return Err(LocalizationError::InvalidSchema(format!("index {s} out of range")));
            }
            let Some(pos) = alive.iter().position(|&a| a == s) else {
                return Err(LocalizationError::InvalidSchema(format!("index {s} used twice")));
            };
            let basis = surviving_basis(vectors, &alive)
                .ok_or_else(|| LocalizationError::InvalidSchema("surviving vectors do not span".into()))?;
            if !basis.contains(&s) {
                return Err(LocalizationError::InvalidSchema(format!(
                    "step {} removes {s}, which is not in the lex-first basis {basis:?}",
                    i + 1
                )));
            }
            alive.remove(pos);
        }
        if !spans(vectors, &alive) {
            return Err(LocalizationError::InvalidSchema("surviving vectors do not span".into()));
        }
        Ok(SchemaInjection { sigma })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }
}

/// All schemata whose image is the complement of `keep`, in lexicographic order of `sigma`.
pub fn enumerate_schemata(vectors: &[Weight], keep: &[usize]) -> Vec<SchemaInjection> {
    let keep: BTreeSet<usize> = keep.iter().copied().collect();
    let target: BTreeSet<usize> = (0..vectors.len()).filter(|i| !keep.contains(i)).collect();
    if !spans(vectors, &keep.iter().copied().collect::<Vec<_>>()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..vectors.len()).collect())];
    while let Some((sigma, alive)) = stack.pop() {
        if sigma.len() == target.len() {
            out.push(SchemaInjection { sigma });
            continue;
        }
        let Some(basis) = surviving_basis(vectors, &alive) else {
            continue;
        };
        for s in basis.into_iter().filter(|s| target.contains(s) && !sigma.contains(s)) {
            let mut next = sigma.clone();
            next.push(s);
            stack.push((next, alive.iter().copied().filter(|&a| a != s).collect()));
        }
    }
    out.sort();
    out
}

/// A tensor in `(V*)^{⊗k}` kept as a list of rank-one summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfTensor {
    pub order: usize,
    pub summands: Vec<Vec<Weight>>,
}

impl PfTensor {
    /// `sum over summands of prod_i <covector_i, alpha_i>`.
    pub fn contract(&self, alphas: &[Weight]) -> Rat {
        assert_eq!(alphas.len(), self.order, "tensor order");
        self.summands
            .iter()
            .map(|s| s.iter().zip(alphas).fold(Rat::one(), |acc, (c, a)| acc * c.dot(a)))
            .fold(Rat::zero(), |a, b| a + b)
    }
}

/// The partial fractions tensor of `vectors` for the surviving subset `keep`.
pub fn pf_tensor(vectors: &[Weight], keep: &[usize]) -> PfTensor {
    let k = vectors.len() - keep.len();
    let summands = enumerate_schemata(vectors, keep)
        .into_iter()
        .map(|schema| {
            let mut alive: Vec<usize> = (0..vectors.len()).collect();
            let mut covs = Vec::with_capacity(k);
            for &s in schema.sigma() {
                let basis = surviving_basis(vectors, &alive).expect("schemata only visit spanning sets");
                let rows: Vec<Weight> = basis.iter().map(|&b| vectors[b].clone()).collect();
                let dual = dual_basis(&rows).expect("a basis has a dual");
                let pos = basis.iter().position(|&b| b == s).unwrap();
                covs.push(dual[pos].clone());
                alive.retain(|&a| a != s);
            }
            covs
        })
        .collect();
    PfTensor { order: k, summands }
}

/// `(D + Phi_T(f))` for each point of a chain, in chain order.
pub fn chain_vectors(images: &[Weight]) -> Vec<Weight> {
    images.iter().map(|w| w.with_leading(Rat::one())).collect()
}

/// `tau_{gamma', gamma}` for a maximal chain and a subchain, both as fixed-point indices.
pub fn tau_tensor(model: &Model, chain: &[usize], subchain: &[usize]) -> Result<PfTensor, LocalizationError> {
    let images: Vec<Weight> = chain.iter().map(|&f| model.points()[f].phi_t.clone()).collect();
    let keep: Vec<usize> = subchain
        .iter()
        .map(|f| {
            chain
                .iter()
                .position(|g| g == f)
                .ok_or_else(|| LocalizationError::HypothesisFailed(format!("{f} is not in the chain")))
        })
        .collect::<Result<_, _>>()?;
    Ok(pf_tensor(&chain_vectors(&images), &keep))
}

/// Value at a generic `p` of the distribution obtained from the measure by the differential
/// operator dual to multiplication by `alpha_1 ... alpha_k`. For `k = 0` this is the density.
pub fn integrate_class_at(measure: &DhMeasure, alphas: &[Weight], p: &Weight) -> Result<Rat, LocalizationError> {
    let d = measure.ambient_dim;
    let n = measure.simplex_dim;
    let k = alphas.len();
    if k > n {
        return Err(LocalizationError::TooManyClasses { k, dim: n });
    }
    for w in alphas.iter().chain(std::iter::once(p)) {
        if w.dim() != d {
            return Err(LocalizationError::DimensionMismatch {
                expected: d,
                found: w.dim(),
            });
        }
    }
    if !avoids_small_hulls(&measure.vertex_set(), p) {
        return Err(LocalizationError::NonGenericPoint(p.clone()));
    }
    let lifted: Vec<Weight> = alphas.iter().map(|a| a.with_leading(Rat::zero())).collect();
    let mut acc = Rat::zero();
    for term in &measure.terms {
        let vectors = chain_vectors(&term.vertices);
        for keep in subsets_of_size(term.vertices.len(), term.vertices.len() - k) {
            let coeff = pf_tensor(&vectors, &keep).contract(&lifted);
            if coeff.is_zero() {
                continue;
            }
            let verts: Vec<Weight> = keep.iter().map(|&i| term.vertices[i].clone()).collect();
            acc += Rat::from_integer(BigInt::from(term.v)) * coeff * simplex_spline(&verts, p)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinrelsReport {
    /// fixed points where the functional takes its value at the minimum
    pub delta: Face,
    pub sum: Rat,
}

fn unique_min(model: &Model, v: &BTreeMap<Face, u64>) -> Result<usize, LocalizationError> {
    if v.keys().all(|c| c.first() == Some(&0)) && !v.is_empty() {
        Ok(0)
    } else {
        Err(LocalizationError::HypothesisFailed(format!(
            "{:?} is not contained in every maximal chain",
            model.points()[0].id
        )))
    }
}

/// `sum_{gamma ⊇ delta} v_gamma prod_{f not in gamma} (Phi_R(f) - Phi_R(min))` for the functional
/// `R`, where `delta` is the set of fixed points on which `Phi_R` takes its minimum-point value.
/// `delta` must be a closure chain not contained in `Q ∪ {min}`. Whether `Q` carries the
/// tangent weights at the minimum is the caller's responsibility.
pub fn linrels_check(
    model: &Model,
    v: &BTreeMap<Face, u64>,
    q: &[usize],
    functional: &Weight,
) -> Result<LinrelsReport, LocalizationError> {
    let points = model.points();
    let d = model.torus_dim();
    if functional.dim() != d {
        return Err(LocalizationError::DimensionMismatch {
            expected: d,
            found: functional.dim(),
        });
    }
    let min = unique_min(model, v)?;
    let phi_r: Vec<Rat> = points.iter().map(|f| functional.dot(&f.phi_t)).collect();
    let delta: Face = (0..points.len()).filter(|&f| phi_r[f] == phi_r[min]).collect();
    if !model.closure_complex().contains(&delta) {
        return Err(LocalizationError::HypothesisFailed(format!(
            "{:?} is not a closure chain",
            model.chain_labels(&delta)
        )));
    }
    if delta.iter().all(|f| *f == min || q.contains(f)) {
        return Err(LocalizationError::HypothesisFailed(format!(
            "{:?} lies in Q together with the minimum",
            model.chain_labels(&delta)
        )));
    }
    let mut sum = Rat::zero();
    for (gamma, &vg) in v {
        if !delta.iter().all(|f| gamma.contains(f)) {
            continue;
        }
        let prod = (0..points.len())
            .filter(|f| !gamma.contains(f))
            .fold(Rat::one(), |acc, f| acc * (&phi_r[f] - &phi_r[min]));
        sum += Rat::from_integer(BigInt::from(vg)) * prod;
    }
    Ok(LinrelsReport { delta, sum })
}

/// Both sides of `sum_gamma v_gamma / prod_{f in gamma, f != min} (Phi_f - Phi_min)` =
/// `cone_class / prod_{q in Q} (Phi_q - Phi_min)` as fraction sums in `Q[t_1..t_d]`.
pub fn tangent_cone_sides(
    model: &Model,
    v: &BTreeMap<Face, u64>,
    cone_class: &SparsePoly,
    q: &[usize],
) -> Result<(FractionSum, FractionSum), LocalizationError> {
    let d = model.torus_dim();
    if cone_class.nvars() != d {
        return Err(LocalizationError::DimensionMismatch {
            expected: d,
            found: cone_class.nvars(),
        });
    }
    let min = unique_min(model, v)?;
    let points = model.points();
    let diff = |f: usize| -> Result<Weight, LocalizationError> {
        let w = &points[f].phi_t - &points[min].phi_t;
        if w.is_zero() {
            Err(LocalizationError::HypothesisFailed(format!(
                "{:?} has the same weight as the minimum",
                points[f].id
            )))
        } else {
            Ok(w)
        }
    };
    let mut lhs = Vec::new();
    for (gamma, &vg) in v {
        lhs.push(FractionTerm {
            numerator: SparsePoly::constant(d, Rat::from_integer(BigInt::from(vg))),
            denominators: gamma
                .iter()
                .filter(|&&f| f != min)
                .map(|&f| diff(f))
                .collect::<Result<_, _>>()?,
        });
    }
    let rhs = vec![FractionTerm {
        numerator: cone_class.clone(),
        denominators: q.iter().map(|&f| diff(f)).collect::<Result<_, _>>()?,
    }];
    Ok((FractionSum::new(d, lhs)?, FractionSum::new(d, rhs)?))
}

pub fn tangent_cone_identity(
    model: &Model,
    v: &BTreeMap<Face, u64>,
    cone_class: &SparsePoly,
    q: &[usize],
) -> Result<bool, LocalizationError> {
    let (lhs, rhs) = tangent_cone_sides(model, v, cone_class, q)?;
    Ok(fraction_sums_equal(&lhs, &rhs))
}
