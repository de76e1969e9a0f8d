use crate::geometry::{LatticePoint, LatticeSegment};

type Symmetry = fn(i64, i64) -> (i64, i64);

/// The 8 linear symmetries of the square lattice.
const POINT_GROUP: [Symmetry; 8] = [
    |x, y| (x, y),
    |x, y| (-y, x),
    |x, y| (-x, -y),
    |x, y| (y, -x),
    |x, y| (-x, y),
    |x, y| (x, -y),
    |x, y| (y, x),
    |x, y| (-y, -x),
];

/// Least sorted edge list over the point group, each image translated so
/// the minimum x and minimum y over its points are 0. Segments need at
/// least two points.
pub fn canonical_form(edges: &[LatticeSegment]) -> Vec<LatticeSegment> {
    POINT_GROUP
        .iter()
        .map(|g| {
            let ends: Vec<(LatticePoint, LatticePoint)> = edges
                .iter()
                .map(|s| {
                    let (a, b) = (s.base(), s.last());
                    (g(a.x, a.y).into(), g(b.x, b.y).into())
                })
                .collect();
            let min_x = ends.iter().flat_map(|(a, b)| [a.x, b.x]).min().unwrap_or(0);
            let min_y = ends.iter().flat_map(|(a, b)| [a.y, b.y]).min().unwrap_or(0);
            let shift = |p: LatticePoint| LatticePoint::new(p.x - min_x, p.y - min_y);
            let mut image: Vec<LatticeSegment> = ends
                .iter()
                .map(|&(a, b)| LatticeSegment::between(shift(a), shift(b)).expect("distinct ends"))
                .collect();
            image.sort();
            image
        })
        .min()
        .unwrap_or_default()
}
