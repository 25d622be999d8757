//! Reports for `complex`, `coeffs` and `density`, rendered as text or JSON.

use std::fmt::Write as _;

use bbloc_core::coefficients::{all_v, enumerate_witnesses, CoefficientError};
use bbloc_core::lattice::Weight;
use bbloc_core::measures::{alternating_density_at, density_at, dh_from_model, MeasureError};
use bbloc_core::models::Model;
use serde::Serialize;

use crate::sample::generic_direction;
use crate::schema::LoadedModel;
use crate::CliError;

fn fmt_weight(w: &Weight) -> Vec<String> {
    w.coords().iter().map(ToString::to_string).collect()
}

fn braces(ids: &[String]) -> String {
    format!("{{{}}}", ids.join(","))
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexRow {
    pub id: String,
    pub phi_t: Vec<String>,
    pub phi_s: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexReport {
    pub name: Option<String>,
    pub kind: String,
    pub dim: usize,
    pub torus_dim: usize,
    pub vertices: Vec<VertexRow>,
    pub faces: Vec<Vec<String>>,
    pub facets: Vec<Vec<String>>,
    pub f_vector: Vec<usize>,
    pub pure: bool,
    pub cone_points: Vec<String>,
    pub unverified: bool,
}

pub fn complex_report(loaded: &LoadedModel) -> ComplexReport {
    let m = &loaded.model;
    let c = m.closure_complex();
    ComplexReport {
        name: loaded.file.name().map(String::from),
        kind: m.kind().into(),
        dim: m.dim(),
        torus_dim: m.torus_dim(),
        vertices: m
            .points()
            .iter()
            .map(|p| VertexRow {
                id: p.id.clone(),
                phi_t: fmt_weight(&p.phi_t),
                phi_s: p.phi_s.to_string(),
            })
            .collect(),
        faces: c.faces().iter().map(|f| m.chain_labels(f)).collect(),
        facets: c.facets().iter().map(|f| m.chain_labels(f)).collect(),
        f_vector: c.f_vector(),
        pure: c.is_pure(m.dim()),
        cone_points: c.cone_points().iter().map(|&i| m.points()[i].id.clone()).collect(),
        unverified: m.is_unverified(),
    }
}

impl ComplexReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "model: {n} ({})", self.kind);
        } else {
            let _ = writeln!(s, "model: ({})", self.kind);
        }
        if self.unverified {
            let _ = writeln!(s, "note: unverified example data");
        }
        let _ = writeln!(s, "dim X = {}, dim T = {}", self.dim, self.torus_dim);
        let _ = writeln!(s, "vertices ({}):", self.vertices.len());
        for v in &self.vertices {
            let _ = writeln!(s, "  {}  phi_T=({})  phi_S={}", v.id, v.phi_t.join(","), v.phi_s);
        }
        let _ = writeln!(s, "faces ({}):", self.faces.len());
        for f in &self.faces {
            let _ = writeln!(s, "  {}", braces(f));
        }
        let _ = writeln!(s, "facets ({}):", self.facets.len());
        for f in &self.facets {
            let _ = writeln!(s, "  {}", braces(f));
        }
        let fv: Vec<String> = self.f_vector.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "f-vector: {}", fv.join(" "));
        let _ = writeln!(s, "pure of dim {}: {}", self.dim, if self.pure { "yes" } else { "no" });
        if self.cone_points.is_empty() {
            let _ = writeln!(s, "cone points: none");
        } else {
            let _ = writeln!(s, "cone points: {}", braces(&self.cone_points));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainRow {
    pub chain: Vec<String>,
    pub v: u64,
    /// number of witnesses, when the model provides them
    pub witnesses: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffsReport {
    pub name: Option<String>,
    pub chains: Vec<ChainRow>,
    pub degree: u64,
}

pub fn coeffs_report(loaded: &LoadedModel) -> Result<CoeffsReport, CliError> {
    let m = &loaded.model;
    let v = all_v(m).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut chains = Vec::with_capacity(v.len());
    for (c, &x) in &v {
        let witnesses = match enumerate_witnesses(m, c) {
            Ok(ws) => Some(ws.len()),
            Err(CoefficientError::IncompleteModel(_)) => None,
            Err(e) => return Err(CliError::Compute(e.to_string())),
        };
        chains.push(ChainRow {
            chain: m.chain_labels(c),
            v: x,
            witnesses,
        });
    }
    let degree = v
        .values()
        .try_fold(0u64, |a, &x| a.checked_add(x))
        .ok_or_else(|| CliError::Compute("degree overflows".into()))?;
    Ok(CoeffsReport {
        name: loaded.file.name().map(String::from),
        chains,
        degree,
    })
}

impl CoeffsReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "model: {n}");
        }
        let _ = writeln!(s, "maximal chains ({}):", self.chains.len());
        for c in &self.chains {
            let w = c.witnesses.map_or_else(|| "-".to_string(), |n| n.to_string());
            let _ = writeln!(s, "  {}  v={}  witnesses={}", braces(&c.chain), c.v, w);
        }
        let _ = writeln!(s, "degree: {}", self.degree);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub point: Vec<String>,
    pub density: Option<String>,
    pub alternating: Option<String>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub name: Option<String>,
    /// direction used for the alternating formula, when it applies
    pub direction: Option<Vec<String>>,
    pub rows: Vec<DensityRow>,
}

fn alternating_applies(m: &Model) -> bool {
    m.dim() == m.torus_dim() && m.has_tangent_data()
}

pub fn density_report(loaded: &LoadedModel, points: &[Weight]) -> Result<DensityReport, CliError> {
    let m = &loaded.model;
    let measure = dh_from_model(m).map_err(|e| CliError::Compute(e.to_string()))?;
    let direction = if alternating_applies(m) {
        generic_direction(m.points())
    } else {
        None
    };
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != m.torus_dim() {
            return Err(CliError::Input(format!(
                "point {p} has dimension {}, expected {}",
                p.dim(),
                m.torus_dim()
            )));
        }
        let row = match density_at(&measure, p) {
            Ok(x) => {
                let alternating = direction
                    .as_ref()
                    .map(|dir| match alternating_density_at(m.points(), dir, p) {
                        Ok(y) => y.to_string(),
                        Err(MeasureError::NonGenericPoint(_)) => "non-generic".into(),
                        Err(e) => format!("n/a ({e})"),
                    });
                DensityRow {
                    point: fmt_weight(p),
                    density: Some(x.to_string()),
                    alternating,
                    status: "ok".into(),
                }
            }
            Err(MeasureError::NonGenericPoint(_)) => DensityRow {
                point: fmt_weight(p),
                density: None,
                alternating: None,
                status: "non-generic, skipped".into(),
            },
            Err(e) => return Err(CliError::Compute(e.to_string())),
        };
        rows.push(row);
    }
    Ok(DensityReport {
        name: loaded.file.name().map(String::from),
        direction: direction.as_ref().map(fmt_weight),
        rows,
    })
}

impl DensityReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "model: {n}");
        }
        if let Some(d) = &self.direction {
            let _ = writeln!(s, "alternating direction: ({})", d.join(","));
        }
        for r in &self.rows {
            let p = format!("({})", r.point.join(","));
            match (&r.density, &r.alternating) {
                (Some(x), Some(y)) => {
                    let _ = writeln!(s, "{p}  density={x}  alternating={y}");
                }
                (Some(x), None) => {
                    let _ = writeln!(s, "{p}  density={x}");
                }
                _ => {
                    let _ = writeln!(s, "{p}  {}", r.status);
                }
            }
        }
        s
    }
}
