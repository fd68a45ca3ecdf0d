use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{crosspolytope_pairing, cube_structure, Halfspace, Polytope};
use crate::normalizer::{self, LogEntry, Space, TransformLog};
use crate::rational::{self, Point};

pub const SCHEMA_VERSION: u32 = 1;

/// A polytope as exact rational strings. Either representation may be
/// omitted on input; both are written on output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    #[serde(rename = "schema-version")]
    pub schema_version: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_points")]
    pub vrep: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hrep: Option<Vec<Halfspace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

mod opt_points {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Point};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Point>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|pts| pts.iter().map(|p| p.iter().map(rational::format).collect::<Vec<_>>()).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Point>>, D::Error> {
        let raw: Option<Vec<Vec<String>>> = Option::deserialize(d)?;
        raw.map(|pts| {
            pts.iter()
                .map(|p| p.iter().map(|x| rational::parse(x).map_err(serde::de::Error::custom)).collect())
                .collect()
        })
        .transpose()
    }
}

impl PolytopeDocument {
    pub fn from_polytope(p: &Polytope) -> Self {
        let pairing = cube_structure(p.incidence())
            .map(|(pairing, _)| pairing.pairs)
            .or_else(|| crosspolytope_pairing(p.incidence()).map(|pairing| pairing.pairs));
        PolytopeDocument {
            schema_version: SCHEMA_VERSION,
            dim: p.dim(),
            vrep: Some(p.vertices().to_vec()),
            hrep: Some(p.facets().to_vec()),
            pairing,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, provenance: serde_json::Value) -> Self {
        self.provenance = Some(provenance);
        self
    }

    /// Builds and certifies the polytope. When both representations are
    /// given they must match exactly, and their orders are kept.
    pub fn to_polytope(&self) -> Result<Polytope> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion { expected: SCHEMA_VERSION, found: self.schema_version });
        }
        let check_dim = |n: usize| {
            if n == self.dim {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: self.dim, found: n })
            }
        };
        if let Some(v) = &self.vrep {
            for p in v {
                check_dim(p.len())?;
            }
        }
        if let Some(h) = &self.hrep {
            for r in h {
                check_dim(r.dim())?;
            }
        }
        match (&self.vrep, &self.hrep) {
            (Some(v), Some(h)) => Polytope::from_vertices_and_facets(v.clone(), h.clone()),
            (Some(v), None) => Polytope::from_points(v),
            (None, Some(h)) => Polytope::from_halfspaces_irredundant(h),
            (None, None) => Err(Error::Input("document has neither vrep nor hrep".into())),
        }
    }
}

/// SHA-256 over the sorted canonical facet rows, as lowercase hex.
pub fn digest(p: &Polytope) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("dim {}\n", p.dim()));
    for h in p.canonical_rows() {
        let normal: Vec<String> = h.normal.iter().map(rational::format).collect();
        hasher.update(format!("{} <= {}\n", normal.join(" "), rational::format(&h.offset)));
    }
    hex::encode(hasher.finalize())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub declared: usize,
    pub achieved: usize,
}

/// A transformation log with its input, so it can be replayed on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDocument {
    #[serde(rename = "schema-version")]
    pub schema_version: u32,
    pub space: Space,
    pub input: PolytopeDocument,
    pub input_digest: String,
    pub steps: Vec<LogEntry>,
    pub final_digest: String,
    pub bound: BoundReport,
}

impl LogDocument {
    pub fn from_log(log: &TransformLog) -> Self {
        LogDocument {
            schema_version: SCHEMA_VERSION,
            space: log.space,
            input: PolytopeDocument::from_polytope(log.input()),
            input_digest: digest(log.input()),
            steps: log.entries.clone(),
            final_digest: digest(log.final_polytope()),
            bound: BoundReport { declared: log.bound, achieved: log.len() },
        }
    }

    /// Replays the steps from the input and checks both digests and the
    /// declared bound.
    pub fn replay(&self) -> Result<Polytope> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion { expected: SCHEMA_VERSION, found: self.schema_version });
        }
        let input = self.input.to_polytope()?;
        if digest(&input) != self.input_digest {
            return Err(Error::Input("input digest does not match the input polytope".into()));
        }
        if self.steps.len() > self.bound.declared {
            return Err(Error::BoundViolation {
                step: self.bound.declared,
                detail: format!("{} steps exceed the bound {}", self.steps.len(), self.bound.declared),
            });
        }
        let out = normalizer::replay(&input, self.steps.iter().map(|e| &e.step), self.space)?;
        if digest(&out) != self.final_digest {
            return Err(Error::InternalAssertion("replay does not reproduce the final digest".into()));
        }
        Ok(out)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
