use std::sync::Arc;

use crate::{Error, Result};

/// One named tensor inside a flat parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpec {
    pub name: String,
    /// `[rows, cols]` for matrices, `[len]` for vectors.
    pub shape: Vec<usize>,
    /// Start index into the flat value vector.
    pub offset: usize,
}

impl TensorSpec {
    pub fn count(&self) -> usize {
        self.shape.iter().product()
    }
}

/// Flat parameter vector plus the manifest describing its layout.
///
/// A `ParamSet` is immutable once built; optimizer steps construct a new one
/// sharing the manifest. That makes parameter snapshots cheap to hand to
/// rollout workers and keeps every consumer free of aliasing concerns.
#[derive(Debug, Clone)]
pub struct ParamSet {
    values: Vec<f64>,
    manifest: Arc<Vec<TensorSpec>>,
}

impl ParamSet {
    pub fn new(values: Vec<f64>, manifest: Vec<TensorSpec>) -> Result<Self> {
        let total: usize = manifest.iter().map(TensorSpec::count).sum();
        if total != values.len() {
            return Err(Error::LengthMismatch {
                expected: total,
                got: values.len(),
            });
        }
        let mut expected_offset = 0;
        for spec in &manifest {
            if spec.offset != expected_offset {
                return Err(Error::Checkpoint(format!(
                    "tensor {} offset {} out of order (expected {})",
                    spec.name, spec.offset, expected_offset
                )));
            }
            expected_offset += spec.count();
        }
        Ok(Self {
            values,
            manifest: Arc::new(manifest),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn manifest(&self) -> &[TensorSpec] {
        &self.manifest
    }

    /// New `ParamSet` with the same manifest and different values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            values,
            manifest: Arc::clone(&self.manifest),
        })
    }

    pub fn tensor_spec(&self, name: &str) -> Option<&TensorSpec> {
        self.manifest.iter().find(|t| t.name == name)
    }

    pub fn tensor(&self, name: &str) -> Option<&[f64]> {
        self.tensor_spec(name)
            .map(|t| &self.values[t.offset..t.offset + t.count()])
    }

    /// FNV-1a over the little-endian bit patterns. Equal checksums across
    /// replicas certify bitwise-equal parameters.
    pub fn checksum(&self) -> u64 {
        fnv1a(&self.values)
    }
}

pub(crate) fn fnv1a(values: &[f64]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}
