use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::canonical::canonical_form;
use super::ratios::{enumerate_ratio_tuples, RatioTuple};
use crate::geometry::{
    meet, primitive, quad_config, GeometryError, LatticePoint, LatticeSegment, MeetKind,
};
use crate::hypergraph::SegmentHypergraph;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    /// Segments of `r` points inside the grid.
    pub segments: usize,
    /// Maximal pairwise-meeting families before symmetry reduction.
    pub maximal_families: usize,
    /// Families up to lattice symmetry.
    pub distinct: usize,
    /// Four-edge quadrilateral configurations examined.
    pub quads_checked: usize,
    /// Quadrilaterals whose ratio tuple is not feasible for `r`. Always 0
    /// for valid instances.
    pub quad_ratio_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub r: i64,
    pub box_size: i64,
    /// Canonical representatives in sorted order.
    pub instances: Vec<SegmentHypergraph>,
    pub stats: EnumerationStats,
}

/// All segments of `r` points inside `[0, box]^2`.
pub fn grid_segments(r: i64, box_size: i64) -> Vec<LatticeSegment> {
    let mut out = Vec::new();
    let d = box_size / (r - 1);
    for dx in 0..=d {
        for dy in -d..=d {
            let Ok(dir) = primitive(dx, dy) else { continue };
            if dir.components() != (dx, dy) {
                continue;
            }
            for x in 0..=box_size {
                for y in 0..=box_size {
                    let s = LatticeSegment::new(LatticePoint::new(x, y), (dx, dy), r)
                        .expect("primitive");
                    let end = s.last();
                    if (0..=box_size).contains(&end.x) && (0..=box_size).contains(&end.y) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

struct Cliques<'a> {
    segments: &'a [LatticeSegment],
    adjacency: &'a [Bits],
    found: BTreeSet<Vec<LatticeSegment>>,
    count: usize,
}

impl Cliques<'_> {
    /// Bron-Kerbosch with pivoting.
    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bits, mut x: Bits) {
        if p.is_empty() {
            if x.is_empty() {
                self.count += 1;
                let edges: Vec<LatticeSegment> = clique.iter().map(|&i| self.segments[i]).collect();
                self.found.insert(canonical_form(&edges));
            }
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| (p.count_and(&self.adjacency[u]), std::cmp::Reverse(u)))
            .expect("p is not empty");
        let branch: Vec<usize> = p.and_not(&self.adjacency[pivot]).ones().collect();
        for v in branch {
            clique.push(v);
            self.expand(clique, p.and(&self.adjacency[v]), x.and(&self.adjacency[v]));
            clique.pop();
            p.clear(v);
            x.set(v);
        }
    }
}

/// Every maximal family of pairwise meeting `r`-point segments in
/// `[0, box]^2`, up to lattice symmetry. Each family's quadrilaterals are
/// checked against the feasible ratio tuples. The result does not depend
/// on the number of threads.
pub fn enumerate_intersecting(r: i64, box_size: i64) -> Enumeration {
    let segments = grid_segments(r, box_size);
    let n = segments.len();
    let mut adjacency = vec![Bits::new(n); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if matches!(meet(&segments[i], &segments[j]), MeetKind::LatticeMeet(_)) {
                adjacency[i].set(j);
                adjacency[j].set(i);
            }
        }
    }
    let per_vertex: Vec<(BTreeSet<Vec<LatticeSegment>>, usize)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut later = Bits::new(n);
            let mut earlier = Bits::new(n);
            for u in adjacency[v].ones() {
                if u > v {
                    later.set(u);
                } else {
                    earlier.set(u);
                }
            }
            let mut search = Cliques {
                segments: &segments,
                adjacency: &adjacency,
                found: BTreeSet::new(),
                count: 0,
            };
            search.expand(&mut vec![v], later, earlier);
            (search.found, search.count)
        })
        .collect();

    let mut stats = EnumerationStats {
        segments: n,
        ..Default::default()
    };
    let mut forms = BTreeSet::new();
    for (found, count) in per_vertex {
        stats.maximal_families += count;
        forms.extend(found);
    }
    stats.distinct = forms.len();

    let feasible: BTreeSet<RatioTuple> = enumerate_ratio_tuples(r).into_iter().collect();
    let checks: Vec<(usize, usize)> = forms
        .par_iter()
        .map(|edges| check_quads(edges, &feasible))
        .collect();
    for (checked, bad) in checks {
        stats.quads_checked += checked;
        stats.quad_ratio_violations += bad;
    }

    let instances = forms
        .into_iter()
        .map(|edges| SegmentHypergraph::build(r, edges).expect("distinct lines"))
        .collect();
    Enumeration {
        r,
        box_size,
        instances,
        stats,
    }
}

/// Count the quadrilaterals among `edges` and those with an infeasible
/// ratio tuple.
pub fn check_quads(edges: &[LatticeSegment], feasible: &BTreeSet<RatioTuple>) -> (usize, usize) {
    let m = edges.len();
    let (mut checked, mut bad) = (0, 0);
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                for d in (c + 1)..m {
                    match quad_config(&[edges[a], edges[b], edges[c], edges[d]]) {
                        Ok(q) => {
                            checked += 1;
                            if !feasible.contains(&RatioTuple(q.ratios.clone()).canonical()) {
                                bad += 1;
                            }
                        }
                        Err(GeometryError::QuadInconsistent(_)) => {
                            checked += 1;
                            bad += 1;
                        }
                        Err(_) => {}
                    }
                }
            }
        }
    }
    (checked, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_segment_counts() {
        // 3 horizontal placements per row, 3 vertical per column
        let s = grid_segments(3, 2);
        assert_eq!(s.len(), 3 + 3 + 1 + 1);
    }

    #[test]
    fn small_enumeration_is_clean() {
        let e = enumerate_intersecting(3, 2);
        assert!(e.stats.distinct > 0);
        assert_eq!(e.stats.quad_ratio_violations, 0);
        for h in &e.instances {
            assert!(h.is_intersecting());
            assert_eq!(canonical_form(h.edges()), h.edges().to_vec());
        }
    }
}
