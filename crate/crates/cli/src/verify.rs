//! The invariant suite behind `bbloc verify`.

use std::fmt::Write as _;

use bbloc_core::coefficients::{all_v, assembling_sides, build_table, recurrence_check, v_from_witnesses};
use bbloc_core::complexes::Face;
use bbloc_core::factorial;
use bbloc_core::lattice::{det, Rat, Weight};
use bbloc_core::localization::{
    ab_sum, compare_fraction_sums, equivariant_multiplicity, integrate_class_at, linrels_check, tangent_cone_identity,
    ComparisonMethod, LocalizationError, SparsePoly, DEFAULT_MONOMIAL_BUDGET,
};
use bbloc_core::measures::{alternating_density_at, density_at, dh_from_model, total_mass, DhMeasure, MeasureError};
use bbloc_core::models::Model;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::sample::{generic_direction, generic_points};
use crate::schema::LoadedModel;

/// Number of sample points per sampled check.
pub const SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

fn pass(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status: Status::Pass,
        detail: detail.into(),
    }
}

fn fail(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status: Status::Fail,
        detail: detail.into(),
    }
}

fn na(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status: Status::NotApplicable,
        detail: detail.into(),
    }
}

fn verdict(name: &str, ok: bool, detail: impl Into<String>) -> Check {
    if ok {
        pass(name, detail)
    } else {
        fail(name, detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub name: Option<String>,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "model: {n}");
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "n/a ",
            };
            if c.detail.is_empty() {
                let _ = writeln!(s, "{tag}  {}", c.name);
            } else {
                let _ = writeln!(s, "{tag}  {}: {}", c.name, c.detail);
            }
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(
            s,
            "{}",
            if failed == 0 {
                "all checks passed".to_string()
            } else {
                format!("{failed} check(s) failed")
            }
        );
        s
    }
}

pub const CLOSURE: &str = "closure complex equals input complex";
pub const PURITY: &str = "purity";
pub const WITNESSES: &str = "coefficients match witnesses";
pub const DEGREE: &str = "degree equals normalized volume";
pub const EXPECTED: &str = "expected values";
pub const RECURRENCE: &str = "recurrence";
pub const ASSEMBLING: &str = "assembling";
pub const MASS: &str = "mass equals degree / (dim X)!";
pub const LOCALIZATION: &str = "equivariant multiplicity equals fixed-point sum";
pub const ALTERNATING: &str = "positive and alternating densities agree";
pub const DEGREE_ZERO: &str = "degree-zero class integrates to the density";
pub const LINRELS: &str = "linear relations";
pub const TANGENT_CONE: &str = "tangent cone identity";

pub fn run_verify(loaded: &LoadedModel, seed: u64) -> VerifyReport {
    let m = &loaded.model;
    let mut checks = vec![
        closure_check(m),
        purity_check(m),
        witness_check(m),
        degree_check(m),
        expected_check(loaded),
    ];
    checks.extend(table_checks(m));
    let v = all_v(m);
    let measure = dh_from_model(m);
    match (&v, &measure) {
        (Ok(v), Ok(measure)) => {
            let degree: u64 = v.values().sum();
            let mass = total_mass(measure) * Rat::from_integer(factorial(m.dim()));
            checks.push(verdict(
                MASS,
                mass == Rat::from_integer(BigInt::from(degree)),
                format!("mass * {}! = {mass}, degree {degree}", m.dim()),
            ));
            checks.push(localization_check(m, seed));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = generic_points(&mut rng, &measure.vertex_set(), SAMPLES, &Rat::one());
            checks.push(alternating_check(m, measure, &pts));
            checks.push(degree_zero_check(measure, &pts));
            checks.push(linrels(m, v));
            checks.push(tangent_cone(m, v));
        }
        (Err(e), _) => {
            let why = if m.is_unverified() {
                "unverified example data".to_string()
            } else {
                e.to_string()
            };
            for name in [MASS, LOCALIZATION, ALTERNATING, DEGREE_ZERO, LINRELS, TANGENT_CONE] {
                checks.push(na(name, why.clone()));
            }
        }
        (_, Err(e)) => {
            for name in [MASS, LOCALIZATION, ALTERNATING, DEGREE_ZERO, LINRELS, TANGENT_CONE] {
                checks.push(fail(name, e.to_string()));
            }
        }
    }
    VerifyReport {
        name: loaded.file.name().map(String::from),
        seed,
        checks,
    }
}

fn closure_check(m: &Model) -> Check {
    match m {
        Model::Sr(sr) => {
            let ok = sr.delta().faces() == m.closure_complex().faces();
            verdict(CLOSURE, ok, format!("{} faces", m.closure_complex().faces().len()))
        }
        _ => na(CLOSURE, "only for Stanley-Reisner models"),
    }
}

fn purity_check(m: &Model) -> Check {
    if let Model::Sr(sr) = m {
        let delta = sr.delta();
        if !delta.dim().is_some_and(|d| delta.is_pure(d)) {
            return na(PURITY, "input not pure");
        }
    }
    let c = m.closure_complex();
    verdict(PURITY, c.is_pure(m.dim()), format!("facets of size {}", m.dim() + 1))
}

fn witness_check(m: &Model) -> Check {
    if m.is_unverified() {
        return na(WITNESSES, "unverified example data");
    }
    let mut compared = 0;
    for chain in m.maximal_chains() {
        let stated = m.closed_form_v(&chain);
        let counted = v_from_witnesses(m, &chain).ok();
        match (stated, counted) {
            (Some(a), Some(b)) if a != b => {
                return fail(
                    WITNESSES,
                    format!(
                        "chain {:?}: closed form {a}, witnesses give {b}",
                        m.chain_labels(&chain)
                    ),
                );
            }
            (Some(_), Some(_)) => compared += 1,
            _ => {}
        }
    }
    if compared == 0 {
        na(WITNESSES, "no chain has both a coefficient and witnesses")
    } else {
        pass(WITNESSES, format!("{compared} chain(s)"))
    }
}

fn degree_check(m: &Model) -> Check {
    let Model::Toric(t) = m else {
        return na(DEGREE, "only for toric models");
    };
    match (all_v(m), t.normalized_volume()) {
        (Ok(v), Ok(vol)) => {
            let deg: u64 = v.values().sum();
            verdict(DEGREE, deg == vol, format!("degree {deg}, normalized volume {vol}"))
        }
        (Err(e), _) => fail(DEGREE, e.to_string()),
        (_, Err(e)) => fail(DEGREE, e.to_string()),
    }
}

fn expected_check(loaded: &LoadedModel) -> Check {
    let Some(exp) = loaded.file.expected() else {
        return na(EXPECTED, "none given");
    };
    let m = &loaded.model;
    let c = m.closure_complex();
    let mut problems = Vec::new();
    let mut checked = 0;
    if let Some(d) = exp.degree {
        checked += 1;
        match all_v(m) {
            Ok(v) => {
                let got: u64 = v.values().sum();
                if got != d {
                    problems.push(format!("degree {got}, expected {d}"));
                }
            }
            Err(e) => problems.push(format!("degree unavailable: {e}")),
        }
    }
    if let Some(fv) = &exp.f_vector {
        checked += 1;
        if &c.f_vector() != fv {
            problems.push(format!("f-vector {:?}, expected {fv:?}", c.f_vector()));
        }
    }
    if let Some(p) = exp.pure {
        checked += 1;
        if c.is_pure(m.dim()) != p {
            problems.push(format!("purity {}, expected {p}", !p));
        }
    }
    if let Some(cp) = &exp.cone_points {
        checked += 1;
        let mut got: Vec<String> = c.cone_points().iter().map(|&i| m.points()[i].id.clone()).collect();
        let mut want = cp.clone();
        got.sort();
        want.sort();
        if got != want {
            problems.push(format!("cone points {got:?}, expected {want:?}"));
        }
    }
    if let Some(n) = exp.maximal_chains {
        checked += 1;
        let got = m.maximal_chains().len();
        if got != n {
            problems.push(format!("{got} maximal chains, expected {n}"));
        }
    }
    if problems.is_empty() {
        pass(EXPECTED, format!("{checked} value(s)"))
    } else {
        fail(EXPECTED, problems.join("; "))
    }
}

fn table_checks(m: &Model) -> Vec<Check> {
    if m.geometry().is_none() {
        return vec![
            na(RECURRENCE, "needs computed components"),
            na(ASSEMBLING, "needs computed components"),
        ];
    }
    let table = match build_table(m) {
        Ok(t) => t,
        Err(e) => return vec![fail(RECURRENCE, e.to_string()), fail(ASSEMBLING, e.to_string())],
    };
    let mut rec = 0;
    let mut rec_fail = None;
    let mut asm = 0;
    let mut asm_fail = None;
    for (chain, y) in table.absolute.keys() {
        for j in 0..chain.len() {
            rec += 1;
            if rec_fail.is_none() && !recurrence_check(&table, chain, j, y) {
                rec_fail = Some(format!(
                    "chain {:?}, j = {j}, Y = {}",
                    m.chain_labels(chain),
                    y.display(&m.labels())
                ));
            }
        }
        asm += 1;
        match assembling_sides(m, &table, chain, y) {
            Ok((l, r)) if l == r && l > 0 => {}
            Ok((l, r)) => {
                asm_fail.get_or_insert_with(|| {
                    format!(
                        "chain {:?}, Y = {}: {l} vs {r}",
                        m.chain_labels(chain),
                        y.display(&m.labels())
                    )
                });
            }
            Err(e) => {
                asm_fail.get_or_insert_with(|| e.to_string());
            }
        }
    }
    vec![
        match rec_fail {
            Some(d) => fail(RECURRENCE, d),
            None => pass(RECURRENCE, format!("{rec} instance(s)")),
        },
        match asm_fail {
            Some(d) => fail(ASSEMBLING, d),
            None => pass(ASSEMBLING, format!("{asm} instance(s)")),
        },
    ]
}

fn localization_check(m: &Model, seed: u64) -> Check {
    if !m.has_tangent_data() {
        return na(LOCALIZATION, "no tangent data");
    }
    let em = match equivariant_multiplicity(m) {
        Ok(x) => x,
        Err(e) => return fail(LOCALIZATION, e.to_string()),
    };
    let ab = match ab_sum(m.points(), None) {
        Ok(x) => x,
        Err(e) => return fail(LOCALIZATION, e.to_string()),
    };
    let c = compare_fraction_sums(&em, &ab, seed, DEFAULT_MONOMIAL_BUDGET);
    let how = match c.method {
        ComparisonMethod::Exact => "exact".to_string(),
        ComparisonMethod::Sampled { seed, points } => format!("sampled at {points} points, seed {seed}"),
    };
    verdict(LOCALIZATION, c.equal, how)
}

fn alternating_check(m: &Model, measure: &DhMeasure, pts: &[Weight]) -> Check {
    if !(m.dim() == m.torus_dim() && m.has_tangent_data()) {
        return na(ALTERNATING, "needs tangent data and dim X = dim T");
    }
    let Some(dir) = generic_direction(m.points()) else {
        return na(ALTERNATING, "no generic direction found");
    };
    let mut compared = 0;
    for p in pts {
        let a = match density_at(measure, p) {
            Ok(a) => a,
            Err(MeasureError::NonGenericPoint(_)) => continue,
            Err(e) => return fail(ALTERNATING, e.to_string()),
        };
        let b = match alternating_density_at(m.points(), &dir, p) {
            Ok(b) => b,
            Err(MeasureError::NonGenericPoint(_)) => continue,
            Err(e @ MeasureError::DegenerateCone(_)) => return na(ALTERNATING, e.to_string()),
            Err(e) => return fail(ALTERNATING, e.to_string()),
        };
        if a != b {
            return fail(ALTERNATING, format!("at {p}: {a} vs {b}"));
        }
        compared += 1;
    }
    pass(ALTERNATING, format!("{compared} point(s)"))
}

fn degree_zero_check(measure: &DhMeasure, pts: &[Weight]) -> Check {
    if measure.ambient_dim == 0 {
        return na(DEGREE_ZERO, "trivial torus");
    }
    let mut compared = 0;
    for p in pts {
        let a = match density_at(measure, p) {
            Ok(a) => a,
            Err(MeasureError::NonGenericPoint(_)) => continue,
            Err(e) => return fail(DEGREE_ZERO, e.to_string()),
        };
        let b = match integrate_class_at(measure, &[], p) {
            Ok(b) => b,
            Err(LocalizationError::NonGenericPoint(_)) => continue,
            Err(e) => return fail(DEGREE_ZERO, e.to_string()),
        };
        if a != b {
            return fail(DEGREE_ZERO, format!("at {p}: {a} vs {b}"));
        }
        compared += 1;
    }
    pass(DEGREE_ZERO, format!("{compared} point(s)"))
}

/// A nonzero covector vanishing on `d - 1` linearly independent vectors of `Q^d`, by cofactors.
pub fn normal_covector(rows: &[Weight]) -> Option<Weight> {
    let d = rows.len() + 1;
    if rows.iter().any(|r| r.dim() != d) {
        return None;
    }
    let coords: Vec<Rat> = (0..d)
        .map(|i| {
            let minor: Vec<Weight> = rows
                .iter()
                .map(|r| {
                    Weight::new(
                        r.coords()
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, c)| c.clone())
                            .collect(),
                    )
                })
                .collect();
            let x = det(&minor).unwrap_or_else(|_| Rat::zero());
            if i % 2 == 0 {
                x
            } else {
                -x
            }
        })
        .collect();
    let w = Weight::new(coords);
    (!w.is_zero()).then_some(w)
}

/// Ridges through the minimum lying in exactly two maximal chains.
pub fn interior_ridges_through_min(m: &Model) -> Vec<Face> {
    let facets = m.maximal_chains();
    let mut ridges: std::collections::BTreeMap<Face, usize> = std::collections::BTreeMap::new();
    for f in &facets {
        for skip in 1..f.len() {
            let r: Face = f
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &x)| x)
                .collect();
            *ridges.entry(r).or_insert(0) += 1;
        }
    }
    ridges
        .into_iter()
        .filter(|(r, n)| *n == 2 && r.first() == Some(&0))
        .map(|(r, _)| r)
        .collect()
}

fn linrels(m: &Model, v: &std::collections::BTreeMap<Face, u64>) -> Check {
    let Model::Toric(t) = m else {
        return na(LINRELS, "only for toric models");
    };
    let q = t.edge_neighbors(0);
    let min = &m.points()[0].phi_t;
    let mut tested = 0;
    let mut skipped = Vec::new();
    for ridge in interior_ridges_through_min(m) {
        let rows: Vec<Weight> = ridge[1..].iter().map(|&f| &m.points()[f].phi_t - min).collect();
        let Some(functional) = normal_covector(&rows) else {
            continue;
        };
        match linrels_check(m, v, &q, &functional) {
            Ok(r) if r.sum.is_zero() => tested += 1,
            Ok(r) => return fail(LINRELS, format!("ridge {:?}: sum {}", m.chain_labels(&ridge), r.sum)),
            Err(LocalizationError::HypothesisFailed(why)) => skipped.push(why),
            Err(e) => return fail(LINRELS, e.to_string()),
        }
    }
    if tested == 0 {
        let why = skipped
            .first()
            .cloned()
            .unwrap_or_else(|| "no interior ridge through the minimum".into());
        na(LINRELS, format!("hypotheses fail: {why}"))
    } else {
        pass(
            LINRELS,
            format!("{tested} ridge functional(s), {} skipped", skipped.len()),
        )
    }
}

fn tangent_cone(m: &Model, v: &std::collections::BTreeMap<Face, u64>) -> Check {
    let Model::Toric(t) = m else {
        return na(TANGENT_CONE, "only for toric models");
    };
    if m.points()[0].tangent_weights.is_none() {
        return na(TANGENT_CONE, "minimum is not a smooth point");
    }
    let q = t.edge_neighbors(0);
    let min = &m.points()[0].phi_t;
    let rows: Vec<Weight> = q.iter().map(|&f| &m.points()[f].phi_t - min).collect();
    let class = match det(&rows) {
        Ok(x) => x.abs(),
        Err(e) => return fail(TANGENT_CONE, e.to_string()),
    };
    match tangent_cone_identity(m, v, &SparsePoly::constant(m.torus_dim(), class.clone()), &q) {
        Ok(ok) => verdict(TANGENT_CONE, ok, format!("cone class {class}")),
        Err(e) => fail(TANGENT_CONE, e.to_string()),
    }
}
