//! Four pairwise-meeting segments in general position: the quadrilateral,
//! its two attached triangles, and the extension ratios around it.
//!
//! Labeling convention. The two apexes are the meet points of opposite line
//! pairs that are never the middle of the three meet points on a line. Of the
//! four quadrilateral vertices exactly one (the far vertex) is also never a
//! middle point. Lines 1 and 2 pass through the far vertex, line 1 through the
//! first apex and line 2 through the second; line 3 is the other line through
//! the first apex and line 4 the other line through the second. With this
//! labeling `b2*b3 = b1*(b2+1)` and `b1*b4 = (b1+1)*b2`. Of the two labelings
//! related by swapping the apexes, the one with the lexicographically smaller
//! ratio tuple is chosen.

use serde::Serialize;

use super::{meet, triangle_area2, GeometryError, LatticePoint, LatticeSegment, MeetKind};
use crate::rational::{self, one, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadConfig {
    /// Segments in label order 1..4.
    pub segments: [LatticeSegment; 4],
    /// Quadrilateral vertices in cyclic order: `l1∩l2, l2∩l3, l3∩l4, l4∩l1`.
    pub quad_vertices: [LatticePoint; 4],
    /// `l1∩l3` and `l2∩l4`.
    pub apexes: [LatticePoint; 2],
    /// Lattice steps along each quadrilateral side.
    pub side_steps: [i64; 4],
    /// Lattice steps along each triangle extension.
    pub extension_steps: [i64; 4],
    #[serde(serialize_with = "serialize_ratios")]
    pub ratios: [Rational; 4],
    /// For each label, the index of the segment in the caller's input.
    pub input_order: [usize; 4],
}

fn serialize_ratios<S: serde::Serializer>(r: &[Rational; 4], s: S) -> Result<S::Ok, S::Error> {
    rational::vec::serialize(r, s)
}

impl QuadConfig {
    pub fn relation_residuals(&self) -> (Rational, Rational) {
        relation_residuals(&self.ratios)
    }
}

/// `(b2*b3 - b1*(b2+1), b1*b4 - (b1+1)*b2)`.
pub fn relation_residuals(b: &[Rational; 4]) -> (Rational, Rational) {
    let r1 = &b[1] * &b[2] - &b[0] * (&b[1] + one());
    let r2 = &b[0] * &b[3] - (&b[0] + one()) * &b[1];
    (r1, r2)
}

/// Given `b1, b2 > 0`, the unique positive `(b3, b4)`.
pub fn bratio_solve(b1: &Rational, b2: &Rational) -> Result<(Rational, Rational), GeometryError> {
    if !b1.is_positive() || !b2.is_positive() {
        return Err(GeometryError::NonPositiveRatio);
    }
    let b3 = b1 * (b2 + one()) / b2;
    let b4 = b2 * (b1 + one()) / b1;
    Ok((b3, b4))
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    PAIRS
        .iter()
        .position(|&p| p == (i, j))
        .expect("distinct indices below 4")
}

pub fn quad_config(segments: &[LatticeSegment; 4]) -> Result<QuadConfig, GeometryError> {
    let mut points = [LatticePoint::ORIGIN; 6];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        match meet(&segments[i], &segments[j]) {
            MeetKind::LatticeMeet(p) => points[k] = p,
            _ => return Err(GeometryError::NoLatticeMeet(i, j)),
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            for l in (j + 1)..4 {
                let (a, b) = (points[pair_index(i, j)], points[pair_index(i, l)]);
                if a == b {
                    return Err(GeometryError::Concurrent(i, j, l));
                }
            }
        }
    }
    // Along each line, which pair index sits in the middle.
    let mut is_middle = [false; 6];
    let mut positions = [[0i64; 4]; 4];
    for i in 0..4 {
        let mut on_line: Vec<(i64, usize)> = (0..4)
            .filter(|&j| j != i)
            .map(|j| {
                let t = segments[i]
                    .position_of(points[pair_index(i, j)])
                    .expect("meet point lies on the segment");
                positions[i][j] = t;
                (t, j)
            })
            .collect();
        on_line.sort();
        is_middle[pair_index(i, on_line[1].1)] = true;
    }

    let matchings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];
    let apex_pairs: Vec<_> = matchings
        .iter()
        .filter(|(a, b)| !is_middle[pair_index(a.0, a.1)] && !is_middle[pair_index(b.0, b.1)])
        .collect();
    let &&((p1, p3), (q2, q4)) = match apex_pairs.as_slice() {
        [one] => one,
        _ => {
            return Err(GeometryError::QuadInconsistent(format!(
                "expected one apex pair, found {}",
                apex_pairs.len()
            )))
        }
    };

    // Far vertex: the quad vertex that is never a middle point. It lies on
    // one line through each apex.
    let mut far = None;
    for &a in &[p1, p3] {
        for &b in &[q2, q4] {
            if !is_middle[pair_index(a, b)] {
                if far.is_some() {
                    return Err(GeometryError::QuadInconsistent(
                        "more than one never-middle quadrilateral vertex".into(),
                    ));
                }
                far = Some((a, b));
            }
        }
    }
    let (l1, l2) = far.ok_or_else(|| {
        GeometryError::QuadInconsistent("no never-middle quadrilateral vertex".into())
    })?;
    let l3 = if l1 == p1 { p3 } else { p1 };
    let l4 = if l2 == q2 { q4 } else { q2 };

    let build = |order: [usize; 4]| -> QuadConfig {
        let [a, b, c, d] = order;
        let pt = |i: usize, j: usize| points[pair_index(i, j)];
        let quad_vertices = [pt(a, b), pt(b, c), pt(c, d), pt(d, a)];
        let apexes = [pt(a, c), pt(b, d)];
        let mut side_steps = [0; 4];
        let mut extension_steps = [0; 4];
        // (line, apex partner, the two quad partners)
        let roles = [(a, c, b, d), (b, d, a, c), (c, a, b, d), (d, b, a, c)];
        for (label, &(line, apex, q1, q2)) in roles.iter().enumerate() {
            let pos = &positions[line];
            side_steps[label] = (pos[q1] - pos[q2]).abs();
            extension_steps[label] = (pos[apex] - pos[q1]).abs().min((pos[apex] - pos[q2]).abs());
        }
        let ratios = std::array::from_fn(|i| rational::rat(extension_steps[i], side_steps[i]));
        QuadConfig {
            segments: order.map(|i| segments[i]),
            quad_vertices,
            apexes,
            side_steps,
            extension_steps,
            ratios,
            input_order: order,
        }
    };

    let first = build([l1, l2, l3, l4]);
    let swapped = build([l2, l1, l4, l3]);
    let config = if (&swapped.ratios, &swapped.segments) < (&first.ratios, &first.segments) {
        swapped
    } else {
        first
    };

    let (r1, r2) = config.relation_residuals();
    if r1 != rational::zero() || r2 != rational::zero() {
        return Err(GeometryError::QuadInconsistent(format!(
            "ratio relations violated for {:?}",
            config
                .ratios
                .iter()
                .map(rational::format)
                .collect::<Vec<_>>()
        )));
    }
    let v = &config.quad_vertices;
    let turns: Vec<i128> = (0..4)
        .map(|i| triangle_area2(v[i], v[(i + 1) % 4], v[(i + 2) % 4]))
        .collect();
    if !(turns.iter().all(|&t| t > 0) || turns.iter().all(|&t| t < 0)) {
        return Err(GeometryError::QuadInconsistent(
            "quadrilateral is not convex".into(),
        ));
    }
    Ok(config)
}
