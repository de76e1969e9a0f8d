use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{lattice_steps, meet, primitive, LatticePoint, LatticeSegment, MeetKind};
use crate::hypergraph::SegmentHypergraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("r must be at least {min}, got {r}")]
    RTooSmall { min: i64, r: i64 },
    #[error("box half-width {box_size} is smaller than r = {r}")]
    BoxTooSmall { box_size: i64, r: i64 },
}

/// A generated instance. `reached` is false when the edge target could not
/// be met within the attempt budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub hypergraph: SegmentHypergraph,
    pub reached: bool,
    pub seed: u64,
}

fn check(r: i64, min_r: i64, box_size: i64) -> Result<(), GenerateError> {
    if r < min_r {
        return Err(GenerateError::RTooSmall { min: min_r, r });
    }
    if box_size < r {
        return Err(GenerateError::BoxTooSmall { box_size, r });
    }
    Ok(())
}

fn in_box(s: &LatticeSegment, box_size: i64) -> bool {
    [s.base(), s.last()]
        .iter()
        .all(|p| p.x.abs() <= box_size && p.y.abs() <= box_size)
}

/// Largest direction component that still fits `r` points across the box.
fn max_component(r: i64, box_size: i64) -> i64 {
    (2 * box_size / (r - 1)).max(1)
}

fn random_segment(rng: &mut ChaCha8Rng, r: i64, box_size: i64) -> Option<LatticeSegment> {
    let d = max_component(r, box_size);
    let base = LatticePoint::new(
        rng.gen_range(-box_size..=box_size),
        rng.gen_range(-box_size..=box_size),
    );
    let (dx, dy) = (rng.gen_range(0..=d), rng.gen_range(-d..=d));
    let dir = primitive(dx, dy).ok()?;
    if dir.components() != (dx, dy) {
        return None;
    }
    let s = LatticeSegment::new(base, (dx, dy), r).ok()?;
    in_box(&s, box_size).then_some(s)
}

/// Rejection-sample `edge_target` segments on distinct lines inside
/// `[-box, box]^2`.
pub fn generate_random(
    r: i64,
    edge_target: usize,
    box_size: i64,
    seed: u64,
) -> Result<Generated, GenerateError> {
    check(r, 2, box_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = HashSet::new();
    let mut edges = Vec::new();
    let budget = 200 * edge_target.max(1);
    for _ in 0..budget {
        if edges.len() == edge_target {
            break;
        }
        if let Some(s) = random_segment(&mut rng, r, box_size) {
            if lines.insert(s.line_key()) {
                edges.push(s);
            }
        }
    }
    let reached = edges.len() == edge_target;
    let hypergraph = SegmentHypergraph::build(r, edges).expect("distinct lines, uniform");
    Ok(Generated {
        hypergraph,
        reached,
        seed,
    })
}

/// Segments of `r` points that would keep `edges` intersecting: each one
/// meets every existing edge at a shared lattice vertex and lies on a new
/// line. Sorted and deduplicated.
pub fn extension_candidates(
    edges: &[LatticeSegment],
    r: i64,
    box_size: Option<i64>,
) -> Vec<LatticeSegment> {
    let mut out = BTreeSet::new();
    let vertices: Vec<LatticePoint> = edges
        .iter()
        .flat_map(|s| s.points())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut consider = |s: LatticeSegment| {
        if box_size.is_some_and(|b| !in_box(&s, b)) {
            return;
        }
        if edges
            .iter()
            .all(|e| matches!(meet(e, &s), MeetKind::LatticeMeet(_)))
        {
            out.insert(s);
        }
    };

    // through two existing vertices
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            let steps = lattice_steps(a, b);
            if steps > r - 1 {
                continue;
            }
            let Ok(through) = LatticeSegment::between(a, b) else {
                continue;
            };
            let dir = through.dir().components();
            for shift in 0..=(r - 1 - steps) {
                let base = through.base().offset(through.dir(), -shift);
                if let Ok(s) = LatticeSegment::new(base, dir, r) {
                    consider(s);
                }
            }
        }
    }

    // through a point common to every edge
    let common: Vec<LatticePoint> = match edges {
        [] => Vec::new(),
        [first, rest @ ..] => first
            .points()
            .into_iter()
            .filter(|p| rest.iter().all(|e| e.contains(*p)))
            .collect(),
    };
    let d = box_size.map_or(r, |b| max_component(r, b));
    for c in common {
        for dx in 0..=d {
            for dy in -d..=d {
                let Ok(dir) = primitive(dx, dy) else { continue };
                if dir.components() != (dx, dy) {
                    continue;
                }
                for t in 0..r {
                    if let Ok(s) = LatticeSegment::new(c.offset(dir, -t), (dx, dy), r) {
                        consider(s);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Grow an intersecting instance one segment at a time from a random first
/// edge, backtracking through shuffled [`extension_candidates`] under a node
/// budget. Returns the largest instance seen if the target is not reached.
pub fn generate_intersecting(
    r: i64,
    edge_target: usize,
    box_size: i64,
    seed: u64,
) -> Result<Generated, GenerateError> {
    check(r, 3, box_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = loop {
        if let Some(s) = random_segment(&mut rng, r, box_size) {
            break s;
        }
    };
    let mut grower = Grower {
        r,
        box_size,
        target: edge_target,
        rng,
        nodes: 0,
        best: vec![first],
    };
    let mut edges = vec![first];
    grower.grow(&mut edges);
    let reached = grower.best.len() >= edge_target;
    let hypergraph =
        SegmentHypergraph::build(r, grower.best).expect("candidates keep the instance valid");
    Ok(Generated {
        hypergraph,
        reached,
        seed,
    })
}

const GROW_NODE_BUDGET: usize = 400;

struct Grower {
    r: i64,
    box_size: i64,
    target: usize,
    rng: ChaCha8Rng,
    nodes: usize,
    best: Vec<LatticeSegment>,
}

impl Grower {
    /// True once the target is reached.
    fn grow(&mut self, edges: &mut Vec<LatticeSegment>) -> bool {
        if edges.len() > self.best.len() {
            self.best = edges.clone();
        }
        if edges.len() >= self.target {
            return true;
        }
        self.nodes += 1;
        if self.nodes > GROW_NODE_BUDGET {
            return false;
        }
        let mut candidates = extension_candidates(edges, self.r, Some(self.box_size));
        candidates.shuffle(&mut self.rng);
        for s in candidates {
            edges.push(s);
            let done = self.grow(edges);
            edges.pop();
            if done || self.nodes > GROW_NODE_BUDGET {
                return done;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::matching_number;
    use proptest::prelude::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(
            generate_random(4, 6, 8, 7).unwrap(),
            generate_random(4, 6, 8, 7).unwrap()
        );
        assert_eq!(
            generate_intersecting(4, 5, 8, 7).unwrap(),
            generate_intersecting(4, 5, 8, 7).unwrap()
        );
    }

    #[test]
    fn argument_checks() {
        assert_eq!(
            generate_random(1, 3, 5, 0),
            Err(GenerateError::RTooSmall { min: 2, r: 1 })
        );
        assert_eq!(
            generate_random(5, 3, 4, 0),
            Err(GenerateError::BoxTooSmall { box_size: 4, r: 5 })
        );
        assert!(generate_intersecting(2, 3, 5, 0).is_err());
    }

    #[test]
    fn candidates_meet_everything() {
        let e = LatticeSegment::new(LatticePoint::ORIGIN, (1, 0), 3).unwrap();
        let single = extension_candidates(&[e], 3, Some(4));
        assert!(!single.is_empty());
        assert!(single
            .iter()
            .all(|s| matches!(meet(&e, s), MeetKind::LatticeMeet(_))));
        let f = LatticeSegment::new(LatticePoint::ORIGIN, (0, 1), 3).unwrap();
        for s in extension_candidates(&[e, f], 3, None) {
            assert!(matches!(meet(&e, &s), MeetKind::LatticeMeet(_)));
            assert!(matches!(meet(&f, &s), MeetKind::LatticeMeet(_)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn intersecting_outputs(seed in any::<u64>(), r in 3i64..=5) {
            let g = generate_intersecting(r, 5, 2 * r, seed).unwrap();
            let h = &g.hypergraph;
            prop_assert!(h.is_intersecting());
            prop_assert!(h.edges().iter().all(|s| in_box(s, 2 * r)));
            prop_assert_eq!(matching_number(h.as_generic()).size(), 1);
        }

        #[test]
        fn random_outputs_fit_the_box(seed in any::<u64>(), r in 2i64..=5) {
            let g = generate_random(r, 6, 2 * r, seed).unwrap();
            prop_assert!(g.hypergraph.edges().iter().all(|s| s.count() == r && in_box(s, 2 * r)));
        }
    }
}
