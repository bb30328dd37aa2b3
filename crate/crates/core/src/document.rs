//! JSON lattice documents.
//!
//! ```json
//! {"dimension": 2, "sites": ["A", "B"],
//!  "bonds": [{"from": "A", "to": "B", "offset": [0, 0], "resistance": 1.0}]}
//! ```
//!
//! `resistance` defaults to 1 and `format` to the current version.
//! Documents written by [`to_json`] list the canonical bonds, so
//! `to_json(from_json(to_json(spec)))` reproduces the same bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Bond, LatticeSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    #[serde(default = "current_format")]
    pub format: u32,
    pub dimension: usize,
    pub sites: Vec<String>,
    pub bonds: Vec<BondDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondDocument {
    pub from: String,
    pub to: String,
    pub offset: Vec<i64>,
    #[serde(default = "unit_resistance")]
    pub resistance: f64,
}

fn current_format() -> u32 {
    FORMAT_VERSION
}

fn unit_resistance() -> f64 {
    1.0
}

impl LatticeDocument {
    pub fn from_spec(spec: &LatticeSpec) -> Self {
        let name = |i: usize| spec.sites()[i].clone();
        LatticeDocument {
            format: FORMAT_VERSION,
            dimension: spec.dimension(),
            sites: spec.sites().to_vec(),
            bonds: spec
                .bonds()
                .iter()
                .map(|b| BondDocument {
                    from: name(b.a),
                    to: name(b.b),
                    offset: b.offset.clone(),
                    resistance: b.resistance,
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<LatticeSpec> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Document(format!(
                "unsupported format version {}",
                self.format
            )));
        }
        let index = |name: &str| {
            self.sites
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::UnknownSite(name.to_string()))
        };
        let bonds = self
            .bonds
            .iter()
            .map(|b| Ok(Bond::new(index(&b.from)?, index(&b.to)?, b.offset.clone(), b.resistance)))
            .collect::<Result<Vec<_>>>()?;
        LatticeSpec::new(self.dimension, self.sites.clone(), bonds)
    }
}

pub fn from_json(text: &str) -> Result<LatticeSpec> {
    let doc: LatticeDocument =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_spec()
}

/// Pretty-printed canonical document, newline-terminated.
pub fn to_json(spec: &LatticeSpec) -> String {
    let mut s = serde_json::to_string_pretty(&LatticeDocument::from_spec(spec))
        .expect("lattice documents always serialize");
    s.push('\n');
    s
}
