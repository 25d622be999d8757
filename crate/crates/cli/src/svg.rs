//! Three-panel figure of a planar toric model: the polygon, its decomposition into strata
//! (faces colored by their lowest vertex) and the pulling triangulation.

use std::fmt::Write as _;

use bbloc_core::indices_of;
use bbloc_core::lattice::Weight;
use bbloc_core::models::cells::limit;
use bbloc_core::models::ToricModel;
use num_traits::ToPrimitive;

use crate::CliError;

const PANEL: f64 = 320.0;
const PAD: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

struct Frame {
    lo: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(pts: &[(f64, f64)]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        Frame {
            lo: (x0, y0),
            scale: (PANEL - 2.0 * PAD) / span,
        }
    }

    /// Screen coordinates inside panel `k`, with the y axis pointing up.
    fn map(&self, k: usize, p: (f64, f64)) -> (f64, f64) {
        let x = k as f64 * PANEL + PAD + (p.0 - self.lo.0) * self.scale;
        let y = PANEL - PAD - (p.1 - self.lo.1) * self.scale;
        (x, y)
    }
}

fn to_xy(w: &Weight) -> (f64, f64) {
    (w[0].to_f64().unwrap_or(0.0), w[1].to_f64().unwrap_or(0.0))
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Vertex indices of a face in cyclic order around its centroid.
fn cyclic(face: &[usize], xy: &[(f64, f64)]) -> Vec<usize> {
    let n = face.len() as f64;
    let cx = face.iter().map(|&i| xy[i].0).sum::<f64>() / n;
    let cy = face.iter().map(|&i| xy[i].1).sum::<f64>() / n;
    let mut out = face.to_vec();
    out.sort_by(|&a, &b| {
        let ta = (xy[a].1 - cy).atan2(xy[a].0 - cx);
        let tb = (xy[b].1 - cy).atan2(xy[b].0 - cx);
        ta.total_cmp(&tb)
    });
    out
}

pub fn render(model: &ToricModel) -> Result<String, CliError> {
    if model.dim() != 2 {
        return Err(CliError::Unsupported(format!(
            "figures need a polygon, this polytope has dimension {}",
            model.dim()
        )));
    }
    let xy: Vec<(f64, f64)> = model.vertices().iter().map(to_xy).collect();
    let frame = Frame::new(&xy);
    let labels = model.labels();
    let all: Vec<usize> = (0..xy.len()).collect();
    let hull = cyclic(&all, &xy);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = 3.0 * PANEL,
        h = PANEL
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // panel 1: the polygon
    let _ = writeln!(s, r#"<g id="polytope">"#);
    let poly: Vec<(f64, f64)> = hull.iter().map(|&i| frame.map(0, xy[i])).collect();
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#dddddd" stroke="black" stroke-width="1.5"/>"##,
        points_attr(&poly)
    );
    for (i, &p) in xy.iter().enumerate() {
        let (x, y) = frame.map(0, p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 5.0, y - 5.0, labels[i]);
    }
    let _ = writeln!(s, "</g>");

    // panel 2: strata, each face colored by its lowest vertex
    let _ = writeln!(s, r#"<g id="strata">"#);
    for face in model.faces().iter().filter(|f| f.dim == 2) {
        let idx = indices_of(face.mask);
        let ring: Vec<(f64, f64)> = cyclic(&idx, &xy).iter().map(|&i| frame.map(1, xy[i])).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.35" stroke="none"/>"#,
            points_attr(&ring),
            color(limit(face.mask))
        );
    }
    for face in model.faces().iter().filter(|f| f.dim == 1) {
        let idx = indices_of(face.mask);
        let (a, b) = (frame.map(1, xy[idx[0]]), frame.map(1, xy[idx[1]]));
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="4"/>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            color(limit(face.mask))
        );
    }
    for (i, &p) in xy.iter().enumerate() {
        let (x, y) = frame.map(1, p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}"/>"#, color(i));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 6.0, y - 6.0, labels[i]);
    }
    let _ = writeln!(s, "</g>");

    // panel 3: the pulling triangulation
    let _ = writeln!(s, r#"<g id="triangulation">"#);
    for (k, tri) in model.pulling_triangulation().iter().enumerate() {
        let ring: Vec<(f64, f64)> = tri.iter().map(|&i| frame.map(2, xy[i])).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.25" stroke="black" stroke-width="1"/>"#,
            points_attr(&ring),
            color(k)
        );
        let cx = ring.iter().map(|p| p.0).sum::<f64>() / ring.len() as f64;
        let cy = ring.iter().map(|p| p.1).sum::<f64>() / ring.len() as f64;
        let v = model.toric_v(tri).map_err(CliError::Model)?;
        let _ = writeln!(s, r#"<text x="{cx:.2}" y="{cy:.2}" text-anchor="middle">v={v}</text>"#);
    }
    for (i, &p) in xy.iter().enumerate() {
        let (x, y) = frame.map(2, p);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 5.0, y - 5.0, labels[i]);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
