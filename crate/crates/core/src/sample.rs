//! Observed or simulated data.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::params::Family;

/// Where a [`Sample`] came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Simulated { family: Family, seed: u64, stream: u64 },
    File { path: PathBuf },
    Memory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl Sample {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Self {
        Self { values, provenance }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values, provenance: Provenance::Memory }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

impl AsRef<[f64]> for Sample {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
