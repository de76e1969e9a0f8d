use super::{Cover, Limits, NodeCounter, SolveError};
use crate::hypergraph::GenericHypergraph;

/// Minimum cover (hitting set).
pub fn covering_number(h: &GenericHypergraph) -> Cover {
    covering_number_with(h, Limits::default()).expect("unbounded search always finishes")
}

/// Branch and bound: branch over the allowed vertices of the uncovered edge
/// with the fewest of them, including the i-th and excluding the earlier
/// ones; bound by a greedy packing of uncovered edges.
pub fn covering_number_with(h: &GenericHypergraph, limits: Limits) -> Result<Cover, SolveError> {
    let best = greedy_cover(h);
    let mut search = CoverSearch {
        h,
        chosen: Vec::new(),
        excluded: vec![false; h.num_vertices()],
        hits: vec![0; h.num_edges()],
        best,
        nodes: NodeCounter::new(limits),
    };
    search.run()?;
    let mut vertices = search.best;
    vertices.sort_unstable();
    Ok(Cover { vertices })
}

fn greedy_cover(h: &GenericHypergraph) -> Vec<usize> {
    let mut covered = vec![false; h.num_edges()];
    let mut cover = Vec::new();
    loop {
        let best = (0..h.num_vertices())
            .map(|v| {
                (
                    h.incident_edges(v).iter().filter(|&&e| !covered[e]).count(),
                    v,
                )
            })
            .filter(|&(gain, _)| gain > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, v)) = best else { break };
        cover.push(v);
        for &e in h.incident_edges(v) {
            covered[e] = true;
        }
    }
    cover
}

struct CoverSearch<'a> {
    h: &'a GenericHypergraph,
    chosen: Vec<usize>,
    excluded: Vec<bool>,
    hits: Vec<u32>,
    best: Vec<usize>,
    nodes: NodeCounter,
}

impl CoverSearch<'_> {
    fn allowed<'e>(&'e self, edge: &'e [usize]) -> impl Iterator<Item = usize> + 'e {
        edge.iter().copied().filter(move |&v| !self.excluded[v])
    }

    fn choose(&mut self, v: usize) {
        self.chosen.push(v);
        for &e in self.h.incident_edges(v) {
            self.hits[e] += 1;
        }
    }

    fn unchoose(&mut self, v: usize) {
        self.chosen.pop();
        for &e in self.h.incident_edges(v) {
            self.hits[e] -= 1;
        }
    }

    fn run(&mut self) -> Result<(), SolveError> {
        self.nodes.tick()?;
        let edges = self.h.edges();
        let mut uncovered: Vec<(usize, usize)> = Vec::new();
        for (e, edge) in edges.iter().enumerate() {
            if self.hits[e] == 0 {
                let n = self.allowed(edge).count();
                if n == 0 {
                    return Ok(());
                }
                uncovered.push((n, e));
            }
        }
        if uncovered.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return Ok(());
        }
        if self.chosen.len() + 1 >= self.best.len() {
            return Ok(());
        }
        uncovered.sort_unstable();
        // disjoint uncovered edges each need their own vertex
        let mut used = vec![false; self.h.num_vertices()];
        let mut packing = 0;
        for &(_, e) in &uncovered {
            if self.allowed(&edges[e]).all(|v| !used[v]) {
                packing += 1;
                for v in self.allowed(&edges[e]).collect::<Vec<_>>() {
                    used[v] = true;
                }
            }
        }
        if self.chosen.len() + packing >= self.best.len() {
            return Ok(());
        }

        let branch_edge = uncovered[0].1;
        let candidates: Vec<usize> = self.allowed(&edges[branch_edge]).collect();
        let mut newly_excluded = Vec::new();
        for v in candidates {
            self.choose(v);
            let result = self.run();
            self.unchoose(v);
            if let Err(e) = result {
                for &u in &newly_excluded {
                    self.excluded[u] = false;
                }
                return Err(e);
            }
            self.excluded[v] = true;
            newly_excluded.push(v);
        }
        for u in newly_excluded {
            self.excluded[u] = false;
        }
        Ok(())
    }
}
