//! Hypergraph models: validated r-segment hypergraphs, plain finite
//! hypergraphs on vertex ids, and the residue hypergraphs `Z_k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::geometry::{LatticePoint, LatticeSegment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(i64),
    #[error("edge {index} has {count} points, expected {r}")]
    Uniformity { index: usize, count: i64, r: i64 },
    #[error("edges {first} and {second} lie on the same line")]
    SameLine { first: usize, second: usize },
    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },
    #[error("edge {index} references vertex {vertex}, but there are only {num_vertices} vertices")]
    UnknownVertex {
        index: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("edges {first} and {second} are the same vertex set")]
    DuplicateEdge { first: usize, second: usize },
    #[error("vertex {0} is not in the hypergraph")]
    NotAVertex(String),
}

/// A finite hypergraph on vertices `0..n`, each carrying a display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericHypergraph {
    labels: Vec<String>,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl GenericHypergraph {
    /// Edges are stored sorted; edge order is kept as given.
    pub fn new(labels: Vec<String>, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let n = labels.len();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sorted_edges = Vec::with_capacity(edges.len());
        for (index, edge) in edges.into_iter().enumerate() {
            let mut edge: Vec<usize> = edge;
            edge.sort_unstable();
            edge.dedup();
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge { index });
            }
            if let Some(&vertex) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::UnknownVertex {
                    index,
                    vertex,
                    num_vertices: n,
                });
            }
            if let Some(&first) = seen.get(&edge) {
                return Err(HypergraphError::DuplicateEdge {
                    first,
                    second: index,
                });
            }
            seen.insert(edge.clone(), index);
            sorted_edges.push(edge);
        }
        let mut incidence = vec![Vec::new(); n];
        for (e, edge) in sorted_edges.iter().enumerate() {
            for &v in edge {
                incidence[v].push(e);
            }
        }
        Ok(GenericHypergraph {
            labels,
            edges: sorted_edges,
            incidence,
        })
    }

    /// Vertices labelled `0..n`.
    pub fn unlabeled(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Edge indices through `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize, HypergraphError> {
        self.incidence
            .get(v)
            .map(Vec::len)
            .ok_or_else(|| HypergraphError::NotAVertex(v.to_string()))
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Common edge size, if all edges have the same size.
    pub fn uniformity(&self) -> Option<usize> {
        let first = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == first).then_some(first)
    }

    pub fn edges_meet(&self, a: usize, b: usize) -> bool {
        shared_vertex(&self.edges[a], &self.edges[b]).is_some()
    }

    pub fn is_intersecting(&self) -> bool {
        (0..self.edges.len()).all(|a| ((a + 1)..self.edges.len()).all(|b| self.edges_meet(a, b)))
    }

    /// Vertices lying in exactly one edge.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.incidence[v].len() == 1)
            .collect()
    }

    /// First triple of edges that pairwise meet at three distinct vertices.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        let m = self.edges.len();
        for a in 0..m {
            for b in (a + 1)..m {
                let Some(ab) = shared_vertex(&self.edges[a], &self.edges[b]) else {
                    continue;
                };
                for c in (b + 1)..m {
                    let (Some(bc), Some(ca)) = (
                        shared_vertex(&self.edges[b], &self.edges[c]),
                        shared_vertex(&self.edges[c], &self.edges[a]),
                    ) else {
                        continue;
                    };
                    if ab != bc && bc != ca && ca != ab {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

/// Smallest vertex common to two sorted edges.
fn shared_vertex(a: &[usize], b: &[usize]) -> Option<usize> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// A validated r-segment hypergraph. Edges are canonical and sorted; the
/// vertex set is the union of the edges' points, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentHypergraph {
    r: i64,
    edges: Vec<LatticeSegment>,
    vertices: Vec<LatticePoint>,
    vertex_ids: BTreeMap<LatticePoint, usize>,
    generic: GenericHypergraph,
}

impl SegmentHypergraph {
    /// Validate and index a list of segments. Error indices refer to the
    /// input order.
    pub fn build(r: i64, segments: Vec<LatticeSegment>) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        let mut lines = HashMap::new();
        for (index, s) in segments.iter().enumerate() {
            if s.count() != r {
                return Err(HypergraphError::Uniformity {
                    index,
                    count: s.count(),
                    r,
                });
            }
            if let Some(first) = lines.insert(s.line_key(), index) {
                return Err(HypergraphError::SameLine {
                    first,
                    second: index,
                });
            }
        }
        let mut edges = segments;
        edges.sort();
        let vertex_set: BTreeSet<LatticePoint> = edges.iter().flat_map(|s| s.points()).collect();
        let vertices: Vec<LatticePoint> = vertex_set.into_iter().collect();
        let vertex_ids: BTreeMap<_, _> =
            vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let generic_edges = edges
            .iter()
            .map(|s| s.points().iter().map(|p| vertex_ids[p]).collect())
            .collect();
        let labels = vertices.iter().map(ToString::to_string).collect();
        let generic = GenericHypergraph::new(labels, generic_edges)
            .expect("distinct lines give distinct edges");
        Ok(SegmentHypergraph {
            r,
            edges,
            vertices,
            vertex_ids,
            generic,
        })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn edges(&self) -> &[LatticeSegment] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn vertex_id(&self, p: LatticePoint) -> Option<usize> {
        self.vertex_ids.get(&p).copied()
    }

    pub fn as_generic(&self) -> &GenericHypergraph {
        &self.generic
    }

    /// Forget the geometry. Vertex ids follow the sorted vertex order.
    pub fn to_generic(&self) -> GenericHypergraph {
        self.generic.clone()
    }

    /// Indices of the edges through `p`.
    pub fn incident_edges(&self, p: LatticePoint) -> Result<&[usize], HypergraphError> {
        self.vertex_id(p)
            .map(|v| self.generic.incident_edges(v))
            .ok_or_else(|| HypergraphError::NotAVertex(p.to_string()))
    }

    pub fn degree(&self, p: LatticePoint) -> Result<usize, HypergraphError> {
        self.incident_edges(p).map(<[usize]>::len)
    }

    pub fn max_degree(&self) -> usize {
        self.generic.max_degree()
    }

    pub fn is_intersecting(&self) -> bool {
        self.generic.is_intersecting()
    }

    pub fn isolated_vertices(&self) -> Vec<LatticePoint> {
        self.generic
            .isolated_vertices()
            .into_iter()
            .map(|v| self.vertices[v])
            .collect()
    }

    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        self.generic.find_triangle()
    }

    /// Whether some point lies on three or more edges.
    pub fn has_concurrent_triple(&self) -> bool {
        self.max_degree() >= 3
    }
}

/// Either kind of instance the tools accept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Segment(SegmentHypergraph),
    Generic(GenericHypergraph),
}

impl Instance {
    pub fn generic(&self) -> &GenericHypergraph {
        match self {
            Instance::Segment(h) => h.as_generic(),
            Instance::Generic(h) => h,
        }
    }

    pub fn as_segment(&self) -> Option<&SegmentHypergraph> {
        match self {
            Instance::Segment(h) => Some(h),
            Instance::Generic(_) => None,
        }
    }

    /// Segment length, or the common edge size of a uniform generic instance.
    pub fn uniformity(&self) -> Option<i64> {
        match self {
            Instance::Segment(h) => Some(h.r()),
            Instance::Generic(h) => h.uniformity().map(|r| r as i64),
        }
    }
}

impl From<SegmentHypergraph> for Instance {
    fn from(h: SegmentHypergraph) -> Self {
        Instance::Segment(h)
    }
}

impl From<GenericHypergraph> for Instance {
    fn from(h: GenericHypergraph) -> Self {
        Instance::Generic(h)
    }
}

/// The residue hypergraph on `(Z/k)^2` whose edges are the cosets
/// `u + Z_k v` of size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkHypergraph {
    k: i64,
    edges: Vec<Vec<(i64, i64)>>,
}

impl ZkHypergraph {
    pub fn new(k: i64) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::BadUniformity(k));
        }
        let mut edges = BTreeSet::new();
        for ux in 0..k {
            for uy in 0..k {
                for vx in 0..k {
                    for vy in 0..k {
                        let coset: BTreeSet<(i64, i64)> = (0..k)
                            .map(|t| ((ux + t * vx) % k, (uy + t * vy) % k))
                            .collect();
                        if coset.len() as i64 == k {
                            edges.insert(coset.into_iter().collect::<Vec<_>>());
                        }
                    }
                }
            }
        }
        Ok(ZkHypergraph {
            k,
            edges: edges.into_iter().collect(),
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn edges(&self) -> &[Vec<(i64, i64)>] {
        &self.edges
    }

    pub fn vertex_id(&self, (a, b): (i64, i64)) -> usize {
        (a.rem_euclid(self.k) * self.k + b.rem_euclid(self.k)) as usize
    }

    pub fn contains_edge(&self, residues: &BTreeSet<(i64, i64)>) -> bool {
        let edge: Vec<_> = residues.iter().copied().collect();
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn to_generic(&self) -> GenericHypergraph {
        let k = self.k;
        let labels = (0..k)
            .flat_map(|a| (0..k).map(move |b| format!("({a},{b})")))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&p| self.vertex_id(p)).collect())
            .collect();
        GenericHypergraph::new(labels, edges).expect("cosets are distinct")
    }
}

pub fn zk_hypergraph(k: i64) -> Result<ZkHypergraph, HypergraphError> {
    ZkHypergraph::new(k)
}
