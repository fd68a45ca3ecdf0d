//! Exact JSON documents, digests and OFF export.

mod document;
mod off;

pub use document::{
    digest, read_json, write_json, BoundReport, LogDocument, PolytopeDocument, SCHEMA_VERSION,
};
pub use off::{export_off, two_faces};
