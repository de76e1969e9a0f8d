//! Named configurations, each built and validated from its definition.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::geometry::{
    lattice_steps, reduce_mod, triangle_area2, GeometryError, LatticePoint, LatticeSegment,
};
use crate::hypergraph::{
    zk_hypergraph, GenericHypergraph, HypergraphError, Instance, SegmentHypergraph,
};
use crate::search::extension_candidates;
use crate::solvers::{covering_number, is_proper, k_colorable, matching_number, Coloring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{name} needs r >= {min}, got {r}")]
    RTooSmall {
        name: &'static str,
        min: i64,
        r: i64,
    },
    #[error("projection onto Z_{k} needs r >= {k}, got r = {r}")]
    ProjectionTooShort { k: i64, r: i64 },
    #[error("projection colorings exist for k = 2, 3, 4 only, got {0}")]
    UnsupportedModulus(i64),
    #[error("no proper {colors}-coloring of Z_{k} found")]
    NoZkColoring { k: i64, colors: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

fn pairs_as_segments(points: &[LatticePoint]) -> Vec<LatticeSegment> {
    let mut segments = Vec::new();
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            segments.push(LatticeSegment::between(a, b).expect("distinct points"));
        }
    }
    segments
}

/// Four points whose six pairs are all primitive: a 2-segment `K_4`.
pub fn k4_example() -> SegmentHypergraph {
    let points = [pt(0, 0), pt(1, 1), pt(1, 2), pt(2, 1)];
    SegmentHypergraph::build(2, pairs_as_segments(&points)).expect("K4 realization is valid")
}

pub fn triangle_r() -> SegmentHypergraph {
    let points = [pt(0, 0), pt(1, 0), pt(0, 1)];
    SegmentHypergraph::build(2, pairs_as_segments(&points)).expect("triangle is valid")
}

pub const NONFANO_POINTS: [(i64, i64); 7] =
    [(-2, 0), (0, 0), (2, 0), (0, 2), (-1, 3), (1, 3), (0, 6)];

/// Seven points with every maximal collinear subset of size >= 3 as an edge.
/// The points on an edge are not consecutive, so this is not a segment
/// hypergraph.
pub fn nonfano_s() -> GenericHypergraph {
    let points: Vec<LatticePoint> = NONFANO_POINTS.iter().map(|&p| p.into()).collect();
    let n = points.len();
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let on_line: Vec<usize> = (0..n)
                .filter(|&c| triangle_area2(points[a], points[b], points[c]) == 0)
                .collect();
            if on_line.len() >= 3 {
                lines.insert(on_line);
            }
        }
    }
    let labels = points.iter().map(ToString::to_string).collect();
    GenericHypergraph::new(labels, lines.into_iter().collect())
        .expect("collinear sets are distinct")
}

/// Vertex id of `(x, y, z)` in the cube hypergraph.
pub fn cube_id(x: i64, y: i64, z: i64) -> usize {
    (9 * x + 3 * y + z) as usize
}

pub fn cube_point(id: usize) -> (i64, i64, i64) {
    let id = id as i64;
    (id / 9, (id / 3) % 3, id % 3)
}

/// The 40-edge 3-uniform hypergraph on `{0,1,2}^3`.
pub fn cube_c() -> GenericHypergraph {
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut line = |f: &dyn Fn(i64) -> (i64, i64, i64)| {
        edges.push((0..3).map(f).map(|(x, y, z)| cube_id(x, y, z)).collect());
    };
    for z in 0..3 {
        for c in 0..3 {
            line(&|t| (t, c, z));
            line(&|t| (c, t, z));
        }
        line(&|t| (t, t, z));
        line(&|t| (t, 2 - t, z));
    }
    for x in 0..3 {
        for y in 0..3 {
            if (x, y) != (1, 1) {
                line(&|t| (x, y, t));
            }
        }
    }
    for side in [0, 2] {
        line(&|t| (side, t, t));
        line(&|t| (side, t, 2 - t));
        line(&|t| (t, side, t));
        line(&|t| (t, side, 2 - t));
    }
    let labels = (0..27)
        .map(|id| {
            let (x, y, z) = cube_point(id);
            format!("({x},{y},{z})")
        })
        .collect();
    GenericHypergraph::new(labels, edges).expect("cube edges are distinct")
}

pub fn cube_projection((x, y, z): (i64, i64, i64)) -> LatticePoint {
    pt(x + 17 * z, y + 29 * z)
}

/// The cube pushed into the plane by `(x, y, z) -> (x + 17z, y + 29z)`.
pub fn cube_projected() -> Result<SegmentHypergraph, ConstructionError> {
    let segments = cube_c()
        .edges()
        .iter()
        .map(|e| {
            // sorted ids of a 3-term progression list it in order
            let a = cube_projection(cube_point(e[0]));
            let b = cube_projection(cube_point(e[2]));
            LatticeSegment::between(a, b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SegmentHypergraph::build(3, segments)?)
}

/// Two rails from the origin along `(1, r-1)` and `(-1, r-1)`, joined by
/// `r - 2` rungs; intersecting, no three edges concurrent, and
/// `tau = ceil(r/2)`.
pub fn lowerbound_family(r: i64) -> Result<SegmentHypergraph, ConstructionError> {
    if r < 5 {
        return Err(ConstructionError::RTooSmall {
            name: "lowerbound",
            min: 5,
            r,
        });
    }
    let v = |t: i64| pt(t, t * (r - 1));
    let u = |t: i64| pt(-t, t * (r - 1));
    let mut segments = vec![
        LatticeSegment::between(LatticePoint::ORIGIN, v(r - 1))?,
        LatticeSegment::between(LatticePoint::ORIGIN, u(r - 1))?,
    ];
    for i in 1..=r - 2 {
        segments.push(LatticeSegment::between(v(i), u(r - 1 - i))?);
    }
    Ok(SegmentHypergraph::build(r, segments)?)
}

/// The `i`-th rung of [`lowerbound_family`], `1 <= i <= r-2`.
pub fn lowerbound_rung(r: i64, i: i64) -> Result<LatticeSegment, GeometryError> {
    LatticeSegment::between(pt(i, i * (r - 1)), pt(-(r - 1 - i), (r - 1 - i) * (r - 1)))
}

/// A proper coloring of `Z_k`, vertices indexed as `a * k + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkColoring {
    pub k: i64,
    pub coloring: Coloring,
}

impl ZkColoring {
    pub fn color_of(&self, residue: (i64, i64)) -> usize {
        let k = self.k;
        self.coloring.assignment[(residue.0.rem_euclid(k) * k + residue.1.rem_euclid(k)) as usize]
    }
}

fn zk_color_count(k: i64) -> usize {
    match k {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

fn find_zk_coloring(k: i64) -> Result<ZkColoring, ConstructionError> {
    let colors = zk_color_count(k);
    let z = zk_hypergraph(k)?.to_generic();
    let coloring = k_colorable(&z, colors).ok_or(ConstructionError::NoZkColoring { k, colors })?;
    debug_assert!(is_proper(&z, &coloring).unwrap_or(false));
    Ok(ZkColoring { k, coloring })
}

/// Proper colorings of `Z_2`, `Z_3`, `Z_4` with 4, 3 and 2 colors.
pub fn zk_colorings() -> Result<Vec<ZkColoring>, ConstructionError> {
    (2..=4).map(find_zk_coloring).collect()
}

fn cached_zk_coloring(k: i64) -> Result<&'static ZkColoring, ConstructionError> {
    static CACHE: OnceLock<Vec<Result<ZkColoring, ConstructionError>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (2..=4).map(find_zk_coloring).collect());
    match all.get((k - 2) as usize) {
        Some(Ok(c)) => Ok(c),
        Some(Err(e)) => Err(e.clone()),
        None => Err(ConstructionError::UnsupportedModulus(k)),
    }
}

/// Color each point by the color of its residue class in `Z_k`. Every edge
/// projects onto a coset of size `k`, which the `Z_k` coloring makes
/// non-monochromatic.
pub fn color_via_projection(h: &SegmentHypergraph, k: i64) -> Result<Coloring, ConstructionError> {
    if !(2..=4).contains(&k) {
        return Err(ConstructionError::UnsupportedModulus(k));
    }
    if h.r() < k {
        return Err(ConstructionError::ProjectionTooShort { k, r: h.r() });
    }
    let zk = cached_zk_coloring(k)?;
    let assignment = h
        .vertices()
        .iter()
        .map(|&p| zk.color_of(reduce_mod(p, k)))
        .collect();
    Ok(Coloring {
        assignment,
        num_colors: zk.coloring.num_colors,
    })
}

/// Search for an intersecting 4-segment hypergraph with 6 edges and
/// `tau = 3`, realized as a complete quadrangle `A, B, C, D` whose diagonal
/// points are lattice points, each of the 6 lines padded with one extra
/// point. `A` is the origin; `B, C, D` range over `[-box, box]^2`.
pub fn search_r4_example(box_size: i64) -> Option<SegmentHypergraph> {
    let range = -box_size..=box_size;
    let grid: Vec<LatticePoint> = range
        .clone()
        .flat_map(|x| range.clone().map(move |y| pt(x, y)))
        .collect();
    let a = LatticePoint::ORIGIN;
    let close = |p: LatticePoint, q: LatticePoint| p != q && lattice_steps(p, q) <= 3;
    for &b in &grid {
        if !close(a, b) {
            continue;
        }
        for &c in &grid {
            if !close(a, c) || !close(b, c) || triangle_area2(a, b, c) == 0 {
                continue;
            }
            for &d in &grid {
                if !close(a, d) || !close(b, d) || !close(c, d) {
                    continue;
                }
                if let Some(h) = quadrangle_instance([a, b, c, d]) {
                    return Some(h);
                }
            }
        }
    }
    None
}

fn quadrangle_instance([a, b, c, d]: [LatticePoint; 4]) -> Option<SegmentHypergraph> {
    if [
        triangle_area2(a, b, d),
        triangle_area2(a, c, d),
        triangle_area2(b, c, d),
    ]
    .contains(&0)
    {
        return None;
    }
    let p = line_meet(a, b, c, d)?;
    let q = line_meet(a, c, b, d)?;
    let r = line_meet(a, d, b, c)?;
    let lines = [
        [a, b, p],
        [c, d, p],
        [a, c, q],
        [b, d, q],
        [a, d, r],
        [b, c, r],
    ];
    let mut segments = Vec::with_capacity(6);
    for triple in lines {
        segments.push(pad_to_four(triple)?);
    }
    let h = SegmentHypergraph::build(4, segments).ok()?;
    let g = h.as_generic();
    let ok = h.num_edges() == 6
        && h.is_intersecting()
        && matching_number(g).size() == 1
        && covering_number(g).size() == 3
        && g.edges()
            .iter()
            .all(|e| e.iter().any(|&v| g.incident_edges(v).len() == 1));
    ok.then_some(h)
}

/// Lattice intersection of lines `pq` and `rs`, if they cross at one.
fn line_meet(
    p: LatticePoint,
    q: LatticePoint,
    r: LatticePoint,
    s: LatticePoint,
) -> Option<LatticePoint> {
    let (d1x, d1y) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    let (d2x, d2y) = ((s.x - r.x) as i128, (s.y - r.y) as i128);
    let den = d1x * d2y - d1y * d2x;
    if den == 0 {
        return None;
    }
    let num = ((r.x - p.x) as i128) * d2y - ((r.y - p.y) as i128) * d2x;
    let (x, y) = (p.x as i128 * den + num * d1x, p.y as i128 * den + num * d1y);
    (x % den == 0 && y % den == 0).then(|| pt((x / den) as i64, (y / den) as i64))
}

/// Four consecutive lattice points containing three collinear points, when
/// the triple spans at most three steps. A gap is filled; otherwise the
/// point after the far end is added.
fn pad_to_four(points: [LatticePoint; 3]) -> Option<LatticeSegment> {
    let mut sorted = points;
    sorted.sort();
    let span = LatticeSegment::between(sorted[0], sorted[2]).ok()?;
    match span.count() {
        4 => Some(span),
        3 => LatticeSegment::new(sorted[0], span.dir().components(), 4).ok(),
        _ => None,
    }
}

/// Search for an intersecting 5-segment hypergraph with 6 edges containing
/// a triangle. `e1` lies on the x-axis and `e2` crosses it at the origin;
/// all points stay in `[-box, box]^2`.
pub fn search_six_edge_r5(box_size: i64) -> Option<SegmentHypergraph> {
    const R: i64 = 5;
    for s1 in 0..R {
        let e1 = LatticeSegment::new(pt(-s1, 0), (1, 0), R).ok()?;
        for q in 1..=box_size {
            for p in 0..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for s2 in 0..R {
                    let Ok(e2) = LatticeSegment::new(pt(-s2 * p, -s2 * q), (p, q), R) else {
                        continue;
                    };
                    if !in_box(&e2, box_size) || !in_box(&e1, box_size) {
                        continue;
                    }
                    if let Some(h) = grow_to(vec![e1, e2], 6, R, box_size, true) {
                        return Some(h);
                    }
                }
            }
        }
    }
    None
}

fn in_box(s: &LatticeSegment, box_size: i64) -> bool {
    [s.base(), s.last()]
        .iter()
        .all(|p| p.x.abs() <= box_size && p.y.abs() <= box_size)
}

/// Depth-first growth by [`extension_candidates`] to `target` edges.
fn grow_to(
    edges: Vec<LatticeSegment>,
    target: usize,
    r: i64,
    box_size: i64,
    need_triangle: bool,
) -> Option<SegmentHypergraph> {
    if edges.len() == target {
        let h = SegmentHypergraph::build(r, edges).ok()?;
        return (!need_triangle || h.find_triangle().is_some()).then_some(h);
    }
    let last = *edges.last().expect("seeded");
    for candidate in extension_candidates(&edges, r, Some(box_size)) {
        // edges are added in increasing order past the two seeds
        if edges.len() > 2 && candidate <= last {
            continue;
        }
        let mut next = edges.clone();
        next.push(candidate);
        if let Some(h) = grow_to(next, target, r, box_size, need_triangle) {
            return Some(h);
        }
    }
    None
}

/// Every fixed named configuration, for round-trip and audit sweeps.
pub fn catalog() -> Result<Vec<(String, Instance)>, ConstructionError> {
    let mut out: Vec<(String, Instance)> = vec![
        ("k4".into(), k4_example().into()),
        ("triangle".into(), triangle_r().into()),
        ("nonfano".into(), nonfano_s().into()),
        ("cube".into(), cube_c().into()),
        ("cube-projected".into(), cube_projected()?.into()),
    ];
    for r in 5..=8 {
        out.push((format!("lowerbound-{r}"), lowerbound_family(r)?.into()));
    }
    for k in 2..=4 {
        out.push((format!("z{k}"), zk_hypergraph(k)?.to_generic().into()));
    }
    Ok(out)
}
