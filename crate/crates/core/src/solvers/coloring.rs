use super::{Coloring, Limits, NodeCounter, SolveError};
use crate::hypergraph::GenericHypergraph;

const MAX_COLORS: usize = 128;

type Mask = u128;

/// A proper `k`-coloring, if one exists.
pub fn k_colorable(h: &GenericHypergraph, k: usize) -> Option<Coloring> {
    k_colorable_with(h, k, Limits::default()).expect("unbounded search always finishes")
}

/// Backtracking over vertex colors with unit propagation: once every vertex
/// of an edge but one carries the same color, that color is removed from the
/// last vertex's domain. Decisions pick the smallest domain, then the highest
/// degree, and may open at most one new color.
pub fn k_colorable_with(
    h: &GenericHypergraph,
    k: usize,
    limits: Limits,
) -> Result<Option<Coloring>, SolveError> {
    let n = h.num_vertices();
    if k == 0 {
        return Ok((n == 0).then(|| Coloring {
            assignment: vec![],
            num_colors: 0,
        }));
    }
    if h.edges().iter().any(|e| e.len() == 1) {
        return Ok(None);
    }
    if k >= n {
        return Ok(Some(Coloring {
            assignment: (0..n).collect(),
            num_colors: k,
        }));
    }
    if k > MAX_COLORS {
        return Err(SolveError::TooManyColors {
            asked: k,
            max: MAX_COLORS,
        });
    }
    let full: Mask = if k == MAX_COLORS {
        Mask::MAX
    } else {
        (1 << k) - 1
    };
    let mut search = ColoringSearch {
        h,
        color: vec![None; n],
        domain: vec![full; n],
        trail: Vec::new(),
        nodes: NodeCounter::new(limits),
    };
    if search.solve()? {
        let assignment = search
            .color
            .iter()
            .map(|c| c.expect("complete") as usize)
            .collect();
        Ok(Some(Coloring {
            assignment,
            num_colors: k,
        }))
    } else {
        Ok(None)
    }
}

/// Least `k` with a proper coloring, and the coloring.
pub fn chromatic_number(h: &GenericHypergraph) -> Result<Coloring, SolveError> {
    chromatic_number_with(h, Limits::default())
}

pub fn chromatic_number_with(
    h: &GenericHypergraph,
    limits: Limits,
) -> Result<Coloring, SolveError> {
    if let Some(e) = h.edges().iter().position(|e| e.len() == 1) {
        return Err(SolveError::SingletonEdge(e));
    }
    if h.num_edges() == 0 {
        return Ok(Coloring {
            assignment: vec![0; h.num_vertices()],
            num_colors: 1,
        });
    }
    let mut k = 2;
    loop {
        if let Some(c) = k_colorable_with(h, k, limits)? {
            return Ok(c);
        }
        k += 1;
    }
}

/// Whether no edge is monochromatic. The coloring must cover every vertex.
pub fn is_proper(h: &GenericHypergraph, coloring: &Coloring) -> Result<bool, SolveError> {
    if coloring.assignment.len() != h.num_vertices() {
        return Err(SolveError::PartialColoring {
            got: coloring.assignment.len(),
            expected: h.num_vertices(),
        });
    }
    if let Some((vertex, &color)) = coloring
        .assignment
        .iter()
        .enumerate()
        .find(|(_, &c)| c >= coloring.num_colors)
    {
        return Err(SolveError::ColorOutOfRange {
            vertex,
            color,
            num_colors: coloring.num_colors,
        });
    }
    Ok(h.edges().iter().all(|e| {
        let first = coloring.assignment[e[0]];
        e.iter().any(|&v| coloring.assignment[v] != first)
    }))
}

enum Undo {
    Color(usize),
    Domain(usize, Mask),
}

struct ColoringSearch<'a> {
    h: &'a GenericHypergraph,
    color: Vec<Option<u8>>,
    domain: Vec<Mask>,
    trail: Vec<Undo>,
    nodes: NodeCounter,
}

impl ColoringSearch<'_> {
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("len > mark") {
                Undo::Color(v) => self.color[v] = None,
                Undo::Domain(v, old) => self.domain[v] = old,
            }
        }
    }

    /// Assign and propagate. Returns false on conflict.
    fn assign(&mut self, v: usize, c: u8) -> bool {
        let mut queue = vec![(v, c)];
        while let Some((v, c)) = queue.pop() {
            match self.color[v] {
                Some(existing) if existing == c => continue,
                Some(_) => return false,
                None => {}
            }
            if self.domain[v] & (1 << c) == 0 {
                return false;
            }
            self.color[v] = Some(c);
            self.trail.push(Undo::Color(v));
            for &e in self.h.incident_edges(v) {
                let edge = &self.h.edges()[e];
                let mut open = None;
                let mut open_count = 0;
                let mut mono = true;
                for &u in edge {
                    match self.color[u] {
                        None => {
                            open_count += 1;
                            open = Some(u);
                        }
                        Some(cu) => mono &= cu == c,
                    }
                }
                if !mono {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(u)) => {
                        let bit: Mask = 1 << c;
                        if self.domain[u] & bit != 0 {
                            self.trail.push(Undo::Domain(u, self.domain[u]));
                            self.domain[u] &= !bit;
                            match self.domain[u].count_ones() {
                                0 => return false,
                                1 => queue.push((u, self.domain[u].trailing_zeros() as u8)),
                                _ => {}
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool, SolveError> {
        self.nodes.tick()?;
        let h = self.h;
        let Some(v) = (0..h.num_vertices())
            .filter(|&v| self.color[v].is_none())
            .min_by_key(|&v| {
                (
                    self.domain[v].count_ones(),
                    std::cmp::Reverse(h.incident_edges(v).len()),
                    v,
                )
            })
        else {
            return Ok(true);
        };
        // colors above the highest one in use are interchangeable
        let highest = self.color.iter().flatten().max().map_or(-1, |&c| c as i32);
        let mark = self.trail.len();
        for c in 0..=(highest + 1).min(127) as u8 {
            if self.domain[v] & (1 << c) == 0 {
                continue;
            }
            if self.assign(v, c) && self.solve()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[&[usize]]) -> GenericHypergraph {
        GenericHypergraph::unlabeled(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn odd_cycle_and_k4() {
        let c5 = graph(5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[0, 4]]);
        assert!(k_colorable(&c5, 2).is_none());
        let c = chromatic_number(&c5).unwrap();
        assert_eq!(c.num_colors, 3);
        assert!(is_proper(&c5, &c).unwrap());

        let k4 = graph(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]]);
        assert!(k_colorable(&k4, 3).is_none());
        assert_eq!(chromatic_number(&k4).unwrap().num_colors, 4);
    }

    #[test]
    fn fano_plane_is_not_two_colorable() {
        let fano = graph(
            7,
            &[
                &[0, 1, 2],
                &[0, 3, 4],
                &[0, 5, 6],
                &[1, 3, 5],
                &[1, 4, 6],
                &[2, 3, 6],
                &[2, 4, 5],
            ],
        );
        assert!(k_colorable(&fano, 2).is_none());
        assert_eq!(chromatic_number(&fano).unwrap().num_colors, 3);
    }

    #[test]
    fn edge_cases() {
        let single = graph(3, &[&[0, 1, 2]]);
        assert!(k_colorable(&single, 2).is_some());
        let edgeless = graph(3, &[]);
        assert_eq!(chromatic_number(&edgeless).unwrap().num_colors, 1);
        let loopy = graph(2, &[&[0], &[0, 1]]);
        assert_eq!(chromatic_number(&loopy), Err(SolveError::SingletonEdge(0)));
        assert!(k_colorable(&loopy, 5).is_none());
    }

    #[test]
    fn is_proper_checks() {
        let tri = graph(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let distinct = Coloring {
            assignment: vec![0, 1, 2],
            num_colors: 3,
        };
        assert!(is_proper(&tri, &distinct).unwrap());
        let constant = Coloring {
            assignment: vec![0, 0, 0],
            num_colors: 1,
        };
        assert!(!is_proper(&tri, &constant).unwrap());
        let partial = Coloring {
            assignment: vec![0, 1],
            num_colors: 2,
        };
        assert_eq!(
            is_proper(&tri, &partial),
            Err(SolveError::PartialColoring {
                got: 2,
                expected: 3
            })
        );
        let bad = Coloring {
            assignment: vec![0, 1, 7],
            num_colors: 3,
        };
        assert!(matches!(
            is_proper(&tri, &bad),
            Err(SolveError::ColorOutOfRange { .. })
        ));
    }

    #[test]
    fn monotone_in_k() {
        let fano = graph(
            7,
            &[
                &[0, 1, 2],
                &[0, 3, 4],
                &[0, 5, 6],
                &[1, 3, 5],
                &[1, 4, 6],
                &[2, 3, 6],
                &[2, 4, 5],
            ],
        );
        for k in 3..8 {
            let c = k_colorable(&fano, k).expect("colorable above chromatic number");
            assert!(is_proper(&fano, &c).unwrap());
        }
    }
}
