use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{primitive, GeometryError, LatticePoint, LatticeSegment};
use crate::hypergraph::{GenericHypergraph, HypergraphError, Instance, SegmentHypergraph};

pub const FORMAT_VERSION: &str = "1";

const SAFE_INT: i64 = 1 << 53;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version `{0}`, expected `{FORMAT_VERSION}`")]
    Version(String),
    #[error("edge {index}: {source}")]
    Edge { index: usize, source: GeometryError },
    #[error("edge {index}: {message}")]
    Shape { index: usize, message: String },
    #[error("{0}")]
    Invalid(#[from] HypergraphError),
    #[error("expected a segment document, found a generic one")]
    NotSegment,
}

/// Integer written as a JSON number when within +-2^53, else as a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JsonInt(pub i64);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= SAFE_INT {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(JsonInt(v)),
            Raw::Text(t) => t
                .trim()
                .parse()
                .map(JsonInt)
                .map_err(|_| de::Error::custom(format!("`{t}` is not an integer"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Segment,
    Generic,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeEntry {
    Segment {
        base: [JsonInt; 2],
        dir: [JsonInt; 2],
        count: JsonInt,
    },
    Generic(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: String,
    pub kind: DocumentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

pub fn to_document(instance: &Instance, metadata: Option<Metadata>) -> InstanceDocument {
    match instance {
        Instance::Segment(h) => InstanceDocument {
            format_version: FORMAT_VERSION.into(),
            kind: DocumentKind::Segment,
            r: Some(h.r()),
            vertices: None,
            edges: h
                .edges()
                .iter()
                .map(|s| {
                    let (dx, dy) = s.dir().components();
                    EdgeEntry::Segment {
                        base: [JsonInt(s.base().x), JsonInt(s.base().y)],
                        dir: [JsonInt(dx), JsonInt(dy)],
                        count: JsonInt(s.count()),
                    }
                })
                .collect(),
            metadata,
        },
        Instance::Generic(g) => InstanceDocument {
            format_version: FORMAT_VERSION.into(),
            kind: DocumentKind::Generic,
            r: g.uniformity().map(|r| r as i64),
            vertices: Some(g.labels().to_vec()),
            edges: g.edges().iter().cloned().map(EdgeEntry::Generic).collect(),
            metadata,
        },
    }
}

/// Pretty JSON with a trailing newline. Byte-stable for equal instances.
pub fn serialize(instance: &Instance, metadata: Option<Metadata>) -> String {
    let mut text = serde_json::to_string_pretty(&to_document(instance, metadata))
        .expect("documents serialize");
    text.push('\n');
    text
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub instance: Instance,
    pub metadata: Option<Metadata>,
    /// Normalizations applied while reading.
    pub warnings: Vec<String>,
}

pub fn parse(text: &str) -> Result<Parsed, DocumentError> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_document(doc)
}

pub fn parse_segment(text: &str) -> Result<SegmentHypergraph, DocumentError> {
    match parse(text)?.instance {
        Instance::Segment(h) => Ok(h),
        Instance::Generic(_) => Err(DocumentError::NotSegment),
    }
}

pub fn from_document(doc: InstanceDocument) -> Result<Parsed, DocumentError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.format_version));
    }
    let mut warnings = Vec::new();
    let instance = match doc.kind {
        DocumentKind::Segment => {
            let r = doc.r.ok_or(DocumentError::Shape {
                index: 0,
                message: "segment documents need `r`".into(),
            })?;
            let mut segments = Vec::with_capacity(doc.edges.len());
            for (index, entry) in doc.edges.into_iter().enumerate() {
                let EdgeEntry::Segment { base, dir, count } = entry else {
                    return Err(DocumentError::Shape {
                        index,
                        message: "expected {base, dir, count}".into(),
                    });
                };
                let (dx, dy) = (dir[0].0, dir[1].0);
                let reduced =
                    primitive(dx, dy).map_err(|source| DocumentError::Edge { index, source })?;
                if reduced.components() != (dx, dy) {
                    let (px, py) = reduced.components();
                    warnings.push(format!(
                        "edge {index}: direction [{dx},{dy}] normalized to [{px},{py}]"
                    ));
                }
                let base = LatticePoint::new(base[0].0, base[1].0);
                let s = LatticeSegment::new(base, (dx, dy), count.0)
                    .map_err(|source| DocumentError::Edge { index, source })?;
                segments.push(s);
            }
            Instance::Segment(SegmentHypergraph::build(r, segments)?)
        }
        DocumentKind::Generic => {
            let labels = doc.vertices.ok_or(DocumentError::Shape {
                index: 0,
                message: "generic documents need `vertices`".into(),
            })?;
            let mut edges = Vec::with_capacity(doc.edges.len());
            for (index, entry) in doc.edges.into_iter().enumerate() {
                let EdgeEntry::Generic(e) = entry else {
                    return Err(DocumentError::Shape {
                        index,
                        message: "expected a list of vertex ids".into(),
                    });
                };
                edges.push(e);
            }
            let g = GenericHypergraph::new(labels, edges)?;
            if let (Some(r), Some(u)) = (doc.r, g.uniformity()) {
                if r != u as i64 {
                    return Err(DocumentError::Shape {
                        index: 0,
                        message: format!("`r` is {r} but edges have {u} vertices"),
                    });
                }
            }
            Instance::Generic(g)
        }
    };
    Ok(Parsed {
        instance,
        metadata: doc.metadata,
        warnings,
    })
}
