//! JSON instance documents and SVG diagrams.

pub mod document;
pub mod svg;

pub use document::{
    parse, parse_segment, serialize, DocumentError, InstanceDocument, Metadata, Parsed,
};
pub use svg::{meet_points, render_svg, DiagramSpec, Overlays, RenderError};
