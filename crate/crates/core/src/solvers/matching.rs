use super::{Limits, Matching, NodeCounter, SolveError};
use crate::hypergraph::GenericHypergraph;

/// Maximum matching.
pub fn matching_number(h: &GenericHypergraph) -> Matching {
    matching_number_with(h, Limits::default()).expect("unbounded search always finishes")
}

/// Branch on the free vertex with the fewest still-usable edges: either one
/// of those edges is in the matching, or the vertex stays unmatched.
pub fn matching_number_with(h: &GenericHypergraph, limits: Limits) -> Result<Matching, SolveError> {
    let min_size = h.edges().iter().map(Vec::len).min().unwrap_or(1);
    let mut search = MatchingSearch {
        h,
        used: vec![false; h.num_vertices()],
        blocked: vec![false; h.num_vertices()],
        chosen: Vec::new(),
        best: Vec::new(),
        min_size,
        nodes: NodeCounter::new(limits),
    };
    search.run()?;
    let mut edges = search.best;
    edges.sort_unstable();
    Ok(Matching { edges })
}

struct MatchingSearch<'a> {
    h: &'a GenericHypergraph,
    /// Vertex covered by a chosen edge.
    used: Vec<bool>,
    /// Vertex decided to stay unmatched.
    blocked: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    min_size: usize,
    nodes: NodeCounter,
}

impl MatchingSearch<'_> {
    fn usable(&self, e: usize) -> bool {
        self.h.edges()[e]
            .iter()
            .all(|&v| !self.used[v] && !self.blocked[v])
    }

    fn run(&mut self) -> Result<(), SolveError> {
        self.nodes.tick()?;
        let h = self.h;
        let usable: Vec<usize> = (0..h.num_edges()).filter(|&e| self.usable(e)).collect();
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if usable.is_empty() {
            return Ok(());
        }
        let mut touched = vec![false; h.num_vertices()];
        for &e in &usable {
            for &v in &h.edges()[e] {
                touched[v] = true;
            }
        }
        let free = touched.iter().filter(|&&t| t).count();
        let bound = usable.len().min(free / self.min_size);
        if self.chosen.len() + bound <= self.best.len() {
            return Ok(());
        }

        // free vertex with the fewest usable edges (ties: lowest id)
        let mut options = vec![0usize; h.num_vertices()];
        for &e in &usable {
            for &v in &h.edges()[e] {
                options[v] += 1;
            }
        }
        let pivot = (0..h.num_vertices())
            .filter(|&v| options[v] > 0)
            .min_by_key(|&v| (options[v], v))
            .expect("usable edges touch some vertex");

        for &e in h.incident_edges(pivot) {
            if !self.usable(e) {
                continue;
            }
            for &v in &h.edges()[e] {
                self.used[v] = true;
            }
            self.chosen.push(e);
            let result = self.run();
            self.chosen.pop();
            for &v in &h.edges()[e] {
                self.used[v] = false;
            }
            result?;
        }
        self.blocked[pivot] = true;
        let result = self.run();
        self.blocked[pivot] = false;
        result
    }
}
