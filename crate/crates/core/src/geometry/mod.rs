//! Exact predicates and constructions on lattice points, directions and
//! segments.
//!
//! Everything here is integer arithmetic; cross products are widened to
//! `i128` so that no predicate can overflow for `i64` coordinates of
//! reasonable size.

mod quad;

pub use quad::{bratio_solve, quad_config, relation_residuals, QuadConfig};

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("zero direction vector: segment is degenerate")]
    ZeroDirection,
    #[error("segment must have at least 2 lattice points, got {0}")]
    TooFewPoints(i64),
    #[error("projection mod {k} needs a segment with at least {k} points, got {count}")]
    ProjectionTooShort { k: i64, count: i64 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("segments {0} and {1} do not meet at a lattice vertex")]
    NoLatticeMeet(usize, usize),
    #[error("segments {0}, {1} and {2} are concurrent")]
    Concurrent(usize, usize, usize),
    #[error("ratio must be positive")]
    NonPositiveRatio,
    #[error("quadrilateral identification failed: {0}")]
    QuadInconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn offset(self, dir: Direction, steps: i64) -> Self {
        LatticePoint::new(self.x + steps * dir.dx, self.y + steps * dir.dy)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint::new(x, y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A primitive lattice direction in canonical sign: `dx > 0`, or `dx == 0`
/// and `dy > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    dx: i64,
    dy: i64,
}

impl Direction {
    pub fn dx(self) -> i64 {
        self.dx
    }

    pub fn dy(self) -> i64 {
        self.dy
    }

    pub fn components(self) -> (i64, i64) {
        (self.dx, self.dy)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// Whether `(dx, dy)` already has canonical sign.
fn canonical_sign(dx: i64, dy: i64) -> bool {
    dx > 0 || (dx == 0 && dy > 0)
}

/// Reduce `(dx, dy)` by its gcd and fix the sign.
pub fn primitive(dx: i64, dy: i64) -> Result<Direction, GeometryError> {
    let (d, _) = primitive_with_scale(dx, dy)?;
    Ok(d)
}

/// Like [`primitive`], also returning the signed multiple `t` with
/// `(dx, dy) = t * dir`.
fn primitive_with_scale(dx: i64, dy: i64) -> Result<(Direction, i64), GeometryError> {
    if dx == 0 && dy == 0 {
        return Err(GeometryError::ZeroDirection);
    }
    let g = dx.gcd(&dy);
    let (mut px, mut py, mut t) = (dx / g, dy / g, g);
    if !canonical_sign(px, py) {
        px = -px;
        py = -py;
        t = -t;
    }
    Ok((Direction { dx: px, dy: py }, t))
}

/// Number of lattice steps between two points, i.e. `gcd(|dx|, |dy|)`.
pub fn lattice_steps(a: LatticePoint, b: LatticePoint) -> i64 {
    (b.x - a.x).gcd(&(b.y - a.y))
}

/// `r` consecutive lattice points `base + t*dir`, `t = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeSegment {
    base: LatticePoint,
    dir: Direction,
    count: i64,
}

impl LatticeSegment {
    /// Build a segment from an arbitrary nonzero step vector. The vector is
    /// reduced to a primitive direction (the point count is kept), and if
    /// its sign is not canonical the base moves to the opposite endpoint.
    pub fn new(base: LatticePoint, step: (i64, i64), count: i64) -> Result<Self, GeometryError> {
        if count < 2 {
            return Err(GeometryError::TooFewPoints(count));
        }
        let (dir, t) = primitive_with_scale(step.0, step.1)?;
        let base = if t < 0 {
            base.offset(dir, -(count - 1))
        } else {
            base
        };
        Ok(LatticeSegment { base, dir, count })
    }

    /// The segment spanning every lattice point between `a` and `b`.
    pub fn between(a: LatticePoint, b: LatticePoint) -> Result<Self, GeometryError> {
        let (dir, t) = primitive_with_scale(b.x - a.x, b.y - a.y)?;
        let base = if t < 0 { b } else { a };
        Ok(LatticeSegment {
            base,
            dir,
            count: t.abs() + 1,
        })
    }

    pub fn base(&self) -> LatticePoint {
        self.base
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn count(&self) -> i64 {
        self.count
    }

    pub fn last(&self) -> LatticePoint {
        self.point_at(self.count - 1)
    }

    pub fn point_at(&self, t: i64) -> LatticePoint {
        self.base.offset(self.dir, t)
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        (0..self.count).map(|t| self.point_at(t)).collect()
    }

    /// Position of `p` along the segment's line in lattice steps from the
    /// base, if `p` lies on the supporting line.
    pub fn position_of(&self, p: LatticePoint) -> Option<i64> {
        let (ox, oy) = (p.x - self.base.x, p.y - self.base.y);
        if cross(ox, oy, self.dir.dx, self.dir.dy) != 0 {
            return None;
        }
        Some(if self.dir.dx != 0 {
            ox / self.dir.dx
        } else {
            oy / self.dir.dy
        })
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        matches!(self.position_of(p), Some(t) if (0..self.count).contains(&t))
    }

    /// Identity of the supporting line: canonical direction and the
    /// constant `dx*y - dy*x` shared by every point on it.
    pub fn line_key(&self) -> (Direction, i128) {
        let c =
            self.dir.dx as i128 * self.base.y as i128 - self.dir.dy as i128 * self.base.x as i128;
        (self.dir, c)
    }
}

impl fmt::Display for LatticeSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+t{} (t<{})", self.base, self.dir, self.count)
    }
}

impl Serialize for LatticeSegment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LatticeSegment", 3)?;
        st.serialize_field("base", &[self.base.x, self.base.y])?;
        st.serialize_field("dir", &[self.dir.dx, self.dir.dy])?;
        st.serialize_field("count", &self.count)?;
        st.end()
    }
}

fn cross(ax: i64, ay: i64, bx: i64, by: i64) -> i128 {
    ax as i128 * by as i128 - ay as i128 * bx as i128
}

/// How two segments relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeetKind {
    /// Lines cross, but outside at least one of the segments.
    Disjoint,
    /// The segments share exactly this lattice vertex.
    LatticeMeet(LatticePoint),
    /// The segments cross at a point that is not a vertex of both.
    NonLatticeCross,
    /// Distinct parallel lines.
    Parallel,
    /// Same supporting line.
    SameLine,
}

pub fn same_line(s1: &LatticeSegment, s2: &LatticeSegment) -> bool {
    s1.line_key() == s2.line_key()
}

pub fn meet(s1: &LatticeSegment, s2: &LatticeSegment) -> MeetKind {
    if same_line(s1, s2) {
        return MeetKind::SameLine;
    }
    let (d1, d2) = (s1.dir, s2.dir);
    let denom = cross(d1.dx, d1.dy, d2.dx, d2.dy);
    if denom == 0 {
        return MeetKind::Parallel;
    }
    // base1 + t*d1 = base2 + s*d2
    let (wx, wy) = (s2.base.x - s1.base.x, s2.base.y - s1.base.y);
    let t_num = cross(wx, wy, d2.dx, d2.dy);
    let s_num = cross(wx, wy, d1.dx, d1.dy);
    let (t_num, s_num, denom) = if denom < 0 {
        (-t_num, -s_num, -denom)
    } else {
        (t_num, s_num, denom)
    };
    let in_range = |num: i128, count: i64| num >= 0 && num <= (count as i128 - 1) * denom;
    if !in_range(t_num, s1.count) || !in_range(s_num, s2.count) {
        return MeetKind::Disjoint;
    }
    // With primitive directions, t is integral exactly when s is.
    if t_num % denom != 0 {
        return MeetKind::NonLatticeCross;
    }
    MeetKind::LatticeMeet(s1.point_at((t_num / denom) as i64))
}

/// Twice the signed area of triangle `abc`.
pub fn triangle_area2(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i128 {
    cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y)
}

/// Image of the segment's points under coordinatewise reduction mod `k`.
pub fn project_mod_k(s: &LatticeSegment, k: i64) -> Result<BTreeSet<(i64, i64)>, GeometryError> {
    if k < 2 {
        return Err(GeometryError::BadModulus(k));
    }
    if s.count < k {
        return Err(GeometryError::ProjectionTooShort { k, count: s.count });
    }
    Ok(s.points().into_iter().map(|p| reduce_mod(p, k)).collect())
}

pub fn reduce_mod(p: LatticePoint, k: i64) -> (i64, i64) {
    (p.x.rem_euclid(k), p.y.rem_euclid(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn seg(base: (i64, i64), step: (i64, i64), count: i64) -> LatticeSegment {
        LatticeSegment::new(base.into(), step, count).unwrap()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(2, 4).unwrap().components(), (1, 2));
        assert_eq!(primitive(17, 29).unwrap().components(), (17, 29));
        assert_eq!(primitive(0, -3).unwrap().components(), (0, 1));
        assert_eq!(primitive(-2, 6).unwrap().components(), (1, -3));
        assert_eq!(primitive(0, 0), Err(GeometryError::ZeroDirection));
    }

    #[test]
    fn segment_points_examples() {
        assert_eq!(seg((0, 0), (1, 1), 2).points(), vec![p(0, 0), p(1, 1)]);
        assert_eq!(
            seg((0, 0), (1, 4), 5).points(),
            vec![p(0, 0), p(1, 4), p(2, 8), p(3, 12), p(4, 16)]
        );
        let s = seg((2, 8), (-1, 0), 5);
        assert_eq!(s.base(), p(-2, 8));
        assert_eq!(s.dir().components(), (1, 0));
        let brute: Vec<_> = (-2..=2).map(|x| p(x, 8)).collect();
        assert_eq!(s.points(), brute);
    }

    #[test]
    fn new_rejects_degenerate() {
        assert_eq!(
            LatticeSegment::new(p(0, 0), (0, 0), 3),
            Err(GeometryError::ZeroDirection)
        );
        assert_eq!(
            LatticeSegment::new(p(0, 0), (1, 0), 1),
            Err(GeometryError::TooFewPoints(1))
        );
    }

    #[test]
    fn between_spans_all_lattice_points() {
        let s = LatticeSegment::between(p(4, 6), p(0, 0)).unwrap();
        assert_eq!(s.base(), p(0, 0));
        assert_eq!(s.dir().components(), (2, 3));
        assert_eq!(s.count(), 3);
    }

    #[test]
    fn meet_examples() {
        // rungs e1, e2 of the r = 5 lower-bound family
        let e1 = LatticeSegment::between(p(1, 4), p(-3, 12)).unwrap();
        let e2 = LatticeSegment::between(p(2, 8), p(-2, 8)).unwrap();
        let brute: Vec<_> = e1
            .points()
            .into_iter()
            .filter(|q| e2.points().contains(q))
            .collect();
        assert_eq!(brute, vec![p(-1, 8)]);
        assert_eq!(meet(&e1, &e2), MeetKind::LatticeMeet(p(-1, 8)));

        assert_eq!(
            meet(&seg((0, 0), (1, 1), 3), &seg((0, 1), (1, 1), 3)),
            MeetKind::Parallel
        );
        assert_eq!(meet(&e1, &e1), MeetKind::SameLine);
        // x-axis vs the diagonal through (1,0) and (0,1): crosses at (1/2,1/2)
        assert_eq!(
            meet(&seg((0, 0), (1, 1), 2), &seg((1, 0), (-1, 1), 2)),
            MeetKind::NonLatticeCross
        );
        assert_eq!(
            meet(&seg((0, 0), (1, 0), 2), &seg((5, -1), (0, 1), 3)),
            MeetKind::Disjoint
        );
    }

    #[test]
    fn same_line_examples() {
        assert!(same_line(&seg((0, 0), (1, 1), 3), &seg((5, 5), (1, 1), 3)));
        assert!(!same_line(&seg((0, 0), (1, 1), 3), &seg((0, 1), (1, 1), 3)));
    }

    #[test]
    fn triangle_area_examples() {
        assert_eq!(triangle_area2(p(0, 0), p(1, 0), p(0, 1)).abs(), 1);
        assert_eq!(triangle_area2(p(0, 0), p(1, 1), p(3, 3)), 0);
        assert_eq!(triangle_area2(p(0, 0), p(2, 0), p(0, 2)).abs(), 4);
    }

    #[test]
    fn projection_examples() {
        let img = project_mod_k(&seg((0, 0), (1, 2), 4), 4).unwrap();
        let expected: BTreeSet<_> = [(0, 0), (1, 2), (2, 0), (3, 2)].into_iter().collect();
        assert_eq!(img, expected);
        let img = project_mod_k(&seg((0, 0), (1, 0), 3), 3).unwrap();
        assert_eq!(img, [(0, 0), (1, 0), (2, 0)].into_iter().collect());
        assert_eq!(project_mod_k(&seg((5, 7), (1, 1), 5), 4).unwrap().len(), 4);
        assert_eq!(
            project_mod_k(&seg((0, 0), (1, 0), 3), 4),
            Err(GeometryError::ProjectionTooShort { k: 4, count: 3 })
        );
    }

    fn small_segment() -> impl Strategy<Value = LatticeSegment> {
        (0i64..20, 0i64..20, -4i64..=4, -4i64..=4, 2i64..=9)
            .prop_filter("nonzero step", |&(_, _, dx, dy, _)| (dx, dy) != (0, 0))
            .prop_map(|(x, y, dx, dy, c)| seg((x, y), (dx, dy), c))
    }

    proptest! {
        #[test]
        fn primitive_is_scale_invariant(dx in -50i64..50, dy in -50i64..50, t in -7i64..7) {
            prop_assume!((dx, dy) != (0, 0) && t != 0);
            let d = primitive(dx, dy).unwrap();
            prop_assert_eq!(primitive(t * dx, t * dy).unwrap(), d);
            prop_assert_eq!(primitive(d.dx(), d.dy()).unwrap(), d);
        }

        #[test]
        fn segment_points_are_consecutive(s in small_segment()) {
            let pts = s.points();
            prop_assert_eq!(pts.len() as i64, s.count());
            for w in pts.windows(2) {
                prop_assert_eq!(lattice_steps(w[0], w[1]), 1);
                prop_assert_eq!((w[1].x - w[0].x, w[1].y - w[0].y), s.dir().components());
            }
        }

        #[test]
        fn meet_agrees_with_point_sets(a in small_segment(), b in small_segment()) {
            let m = meet(&a, &b);
            prop_assert_eq!(m, meet(&b, &a));
            let pa: BTreeSet<_> = a.points().into_iter().collect();
            let common: Vec<_> = b.points().into_iter().filter(|q| pa.contains(q)).collect();
            match m {
                MeetKind::LatticeMeet(q) => prop_assert_eq!(common, vec![q]),
                MeetKind::SameLine => {}
                _ => prop_assert!(common.is_empty()),
            }
        }

        #[test]
        fn area_antisymmetric_and_translation_invariant(
            ax in -30i64..30, ay in -30i64..30, bx in -30i64..30, by in -30i64..30,
            cx in -30i64..30, cy in -30i64..30, tx in -30i64..30, ty in -30i64..30,
        ) {
            let (a, b, c) = (p(ax, ay), p(bx, by), p(cx, cy));
            let area = triangle_area2(a, b, c);
            prop_assert_eq!(triangle_area2(b, a, c), -area);
            prop_assert_eq!(triangle_area2(a, c, b), -area);
            let sh = |q: LatticePoint| p(q.x + tx, q.y + ty);
            prop_assert_eq!(triangle_area2(sh(a), sh(b), sh(c)), area);
        }
    }
}
