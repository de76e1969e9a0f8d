//! Exact covering, matching and chromatic numbers with optimal witnesses.
//!
//! All searches are sequential and break ties by vertex/edge index, so the
//! same instance always yields the same witness.

mod coloring;
mod cover;
mod matching;

pub use coloring::{
    chromatic_number, chromatic_number_with, is_proper, k_colorable, k_colorable_with,
};
pub use cover::{covering_number, covering_number_with};
pub use matching::{matching_number, matching_number_with};

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::GenericHypergraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search exceeded the node limit of {0}; result unknown")]
    NodeLimit(u64),
    #[error("edge {0} has a single vertex and can never be properly colored")]
    SingletonEdge(usize),
    #[error("coloring assigns {got} vertices, hypergraph has {expected}")]
    PartialColoring { got: usize, expected: usize },
    #[error("vertex {vertex} has color {color}, outside 0..{num_colors}")]
    ColorOutOfRange {
        vertex: usize,
        color: usize,
        num_colors: usize,
    },
    #[error("at most {max} colors are supported by the search, asked for {asked}")]
    TooManyColors { asked: usize, max: usize },
}

/// Search budget. `None` means unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub node_limit: Option<u64>,
}

impl Limits {
    pub fn nodes(limit: u64) -> Self {
        Limits {
            node_limit: Some(limit),
        }
    }
}

pub(crate) struct NodeCounter {
    count: u64,
    limit: Option<u64>,
}

impl NodeCounter {
    pub(crate) fn new(limits: Limits) -> Self {
        NodeCounter {
            count: 0,
            limit: limits.node_limit,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), SolveError> {
        self.count += 1;
        match self.limit {
            Some(limit) if self.count > limit => Err(SolveError::NodeLimit(limit)),
            _ => Ok(()),
        }
    }
}

/// Minimum hitting set, as sorted vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub vertices: Vec<usize>,
}

impl Cover {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_valid(&self, h: &GenericHypergraph) -> bool {
        h.edges()
            .iter()
            .all(|e| e.iter().any(|v| self.vertices.contains(v)))
    }
}

/// Maximum set of pairwise disjoint edges, as sorted edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_valid(&self, h: &GenericHypergraph) -> bool {
        let mut used = vec![false; h.num_vertices()];
        for &e in &self.edges {
            for &v in &h.edges()[e] {
                if std::mem::replace(&mut used[v], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// Color index per vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    /// Vertex ids grouped by color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.assignment.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}
