use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::geometry::{meet, LatticePoint, MeetKind, QuadConfig};
use crate::hypergraph::SegmentHypergraph;
use crate::rational;
use crate::solvers::Coloring;

const SCALE: i64 = 40;
const MARGIN: i64 = 30;
const MAX_LATTICE_DOTS: i64 = 20_000;
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("overlay references vertex {0}, but there are only {1} vertices")]
    UnknownVertex(usize, usize),
    #[error("overlay references edge {0}, but there are only {1} edges")]
    UnknownEdge(usize, usize),
    #[error("coloring covers {0} vertices, instance has {1}")]
    ColoringSize(usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overlays {
    /// Vertex ids to highlight.
    pub cover: Option<Vec<usize>>,
    /// Edge indices to highlight.
    pub matching: Option<Vec<usize>>,
    pub coloring: Option<Coloring>,
    /// Mark every point where two edges meet.
    pub meets: bool,
    pub quad: Option<QuadConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSpec<'a> {
    pub hypergraph: &'a SegmentHypergraph,
    pub overlays: Overlays,
}

/// Distinct lattice points shared by two edges.
pub fn meet_points(h: &SegmentHypergraph) -> BTreeSet<LatticePoint> {
    let edges = h.edges();
    let mut out = BTreeSet::new();
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            if let MeetKind::LatticeMeet(p) = meet(a, b) {
                out.insert(p);
            }
        }
    }
    out
}

fn validate(spec: &DiagramSpec<'_>) -> Result<(), RenderError> {
    let (n, m) = (
        spec.hypergraph.vertices().len(),
        spec.hypergraph.num_edges(),
    );
    if let Some(&v) = spec.overlays.cover.iter().flatten().find(|&&v| v >= n) {
        return Err(RenderError::UnknownVertex(v, n));
    }
    if let Some(&e) = spec.overlays.matching.iter().flatten().find(|&&e| e >= m) {
        return Err(RenderError::UnknownEdge(e, m));
    }
    if let Some(c) = &spec.overlays.coloring {
        if c.assignment.len() != n {
            return Err(RenderError::ColoringSize(c.assignment.len(), n));
        }
    }
    Ok(())
}

/// Deterministic SVG 1.1 drawing: lattice dots, segments, then overlays.
/// The y axis points up.
pub fn render_svg(spec: &DiagramSpec<'_>) -> Result<String, RenderError> {
    validate(spec)?;
    let h = spec.hypergraph;
    let pts = h.vertices();
    let (min_x, max_x) = (
        pts.iter().map(|p| p.x).min().unwrap_or(0),
        pts.iter().map(|p| p.x).max().unwrap_or(0),
    );
    let (min_y, max_y) = (
        pts.iter().map(|p| p.y).min().unwrap_or(0),
        pts.iter().map(|p| p.y).max().unwrap_or(0),
    );
    let width = (max_x - min_x) * SCALE + 2 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2 * MARGIN;
    let sx = |x: i64| (x - min_x) * SCALE + MARGIN;
    let sy = |y: i64| (max_y - y) * SCALE + MARGIN;

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        w,
        "<style>.lattice{{fill:#bbb}} .segment{{stroke:#222;stroke-width:3;stroke-linecap:round}} \
         .vertex{{fill:#222}} .matching{{stroke:#1f77b4;stroke-width:7;stroke-opacity:0.5}} \
         .cover{{fill:none;stroke:#d62728;stroke-width:3}} .meet{{fill:#ff7f0e}} \
         .quad{{fill:#2ca02c;fill-opacity:0.15;stroke:#2ca02c}} .ratio{{font:12px sans-serif;fill:#2ca02c}}</style>"
    )
    .unwrap();

    if !pts.is_empty() && (max_x - min_x + 1) * (max_y - min_y + 1) <= MAX_LATTICE_DOTS {
        writeln!(w, r#"<g class="lattice">"#).unwrap();
        for x in min_x..=max_x {
            for y in min_y..=max_y {
                writeln!(w, r#"<circle cx="{}" cy="{}" r="2"/>"#, sx(x), sy(y)).unwrap();
            }
        }
        writeln!(w, "</g>").unwrap();
    }

    if let Some(q) = &spec.overlays.quad {
        let corners: Vec<String> = q
            .quad_vertices
            .iter()
            .map(|p| format!("{},{}", sx(p.x), sy(p.y)))
            .collect();
        writeln!(
            w,
            r#"<polygon class="quad" points="{}"/>"#,
            corners.join(" ")
        )
        .unwrap();
        for (i, s) in q.segments.iter().enumerate() {
            let mid = s.point_at(s.count() / 2);
            writeln!(
                w,
                r#"<text class="ratio" x="{}" y="{}">b{}={}</text>"#,
                sx(mid.x) + 6,
                sy(mid.y) - 6,
                i + 1,
                rational::format(&q.ratios[i])
            )
            .unwrap();
        }
    }

    if let Some(matching) = &spec.overlays.matching {
        for &e in matching {
            let s = h.edges()[e];
            let (a, b) = (s.base(), s.last());
            writeln!(
                w,
                r#"<line class="matching" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                sx(a.x),
                sy(a.y),
                sx(b.x),
                sy(b.y)
            )
            .unwrap();
        }
    }

    writeln!(w, r#"<g class="segments">"#).unwrap();
    for (i, s) in h.edges().iter().enumerate() {
        let (a, b) = (s.base(), s.last());
        writeln!(
            w,
            r#"<line class="segment" data-edge="{i}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            sx(a.x),
            sy(a.y),
            sx(b.x),
            sy(b.y)
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();

    writeln!(w, r#"<g class="vertices">"#).unwrap();
    for (v, p) in pts.iter().enumerate() {
        match &spec.overlays.coloring {
            Some(c) => writeln!(
                w,
                r#"<circle class="vertex color-{}" cx="{}" cy="{}" r="6" fill="{}"/>"#,
                c.assignment[v],
                sx(p.x),
                sy(p.y),
                PALETTE[c.assignment[v] % PALETTE.len()]
            ),
            None => writeln!(
                w,
                r#"<circle class="vertex" cx="{}" cy="{}" r="5"/>"#,
                sx(p.x),
                sy(p.y)
            ),
        }
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();

    if spec.overlays.meets {
        for p in meet_points(h) {
            writeln!(
                w,
                r#"<circle class="meet" cx="{}" cy="{}" r="7"/>"#,
                sx(p.x),
                sy(p.y)
            )
            .unwrap();
        }
    }
    if let Some(cover) = &spec.overlays.cover {
        for &v in cover {
            let p = pts[v];
            writeln!(
                w,
                r#"<circle class="cover" cx="{}" cy="{}" r="11"/>"#,
                sx(p.x),
                sy(p.y)
            )
            .unwrap();
        }
    }
    writeln!(w, "</svg>").unwrap();
    Ok(out)
}
