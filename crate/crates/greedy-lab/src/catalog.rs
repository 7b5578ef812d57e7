//! The built-in norm catalog, stored as JSON next to the crate.

use std::path::Path;

use crate::error::{LabError, Result};
use crate::norms::NormSpec;

const BUILTIN: &str = include_str!("../catalog/norms.json");

pub struct Catalog {
    norms: Vec<NormSpec>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let norms: Vec<NormSpec> = serde_json::from_str(BUILTIN).expect("built-in catalog parses");
        for n in &norms {
            n.validate().unwrap_or_else(|e| panic!("built-in norm {} is invalid: {e}", n.id));
        }
        Self { norms }
    }

    pub fn get(&self, id: &str) -> Result<&NormSpec> {
        self.norms.iter().find(|n| n.id == id).ok_or_else(|| LabError::UnknownNorm(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.norms.iter().map(|n| n.id.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &NormSpec> {
        self.norms.iter()
    }
}

/// Shorthand for `Catalog::builtin().get(id)` returning an owned spec.
pub fn norm(id: &str) -> Result<NormSpec> {
    Catalog::builtin().get(id).cloned()
}

/// Reads and validates a single norm document.
pub fn load_norm(path: &Path) -> Result<NormSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
    let spec: NormSpec = serde_json::from_str(&text).map_err(|e| LabError::Parse(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}
