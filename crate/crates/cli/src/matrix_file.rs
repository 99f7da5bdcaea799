//! The JSON file format for matrices and state vectors.
//!
//! ```json
//! {"n": 2, "m": 2, "kind": "density", "data": [[0.5, 0.0], [0.0, 0.0], ...]}
//! ```
//!
//! `data` is row-major for matrices. NaN and infinities are rejected.

use std::fs;
use std::path::Path;

use exgamble::linalg::{self, c64};
use exgamble::{ComplexMatrix, ComplexVector, DensityMatrix, Gamble, SystemShape};
use serde::{Deserialize, Serialize};

/// Unit-norm tolerance for vector files.
pub const VECTOR_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Operator,
    Density,
    Gamble,
    Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub m: usize,
    pub kind: Kind,
    pub data: Vec<[f64; 2]>,
}

/// A validated file.
#[derive(Debug, Clone)]
pub enum Loaded {
    Operator(SystemShape, ComplexMatrix),
    Density(DensityMatrix),
    Gamble(Gamble),
    Vector(SystemShape, ComplexVector),
}

impl MatrixFile {
    pub fn from_matrix(shape: SystemShape, kind: Kind, a: &ComplexMatrix) -> Self {
        let data = linalg::to_row_major(a).into_iter().map(|z| [z.re, z.im]).collect();
        Self { n: shape.n(), m: shape.m(), kind, data }
    }

    pub fn from_vector(shape: SystemShape, v: &ComplexVector) -> Self {
        Self { n: shape.n(), m: shape.m(), kind: Kind::Vector, data: v.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let f: Self = serde_json::from_str(text).map_err(|e| format!("malformed matrix file: {e}"))?;
        if let Some(k) = f.data.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(format!("entry {k} is not finite"));
        }
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Compact JSON followed by a newline. Floats use the shortest
    /// representation that reads back to the same bits.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("matrix files always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        fs::write(path, self.to_json()).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn shape(&self) -> Result<SystemShape, String> {
        SystemShape::new(self.n, self.m).map_err(|e| e.to_string())
    }

    /// Checks the length and the invariants of the declared kind.
    pub fn validate(&self) -> Result<Loaded, String> {
        let shape = self.shape()?;
        let dim = shape.dim();
        let entries: Vec<_> = self.data.iter().map(|z| c64(z[0], z[1])).collect();
        if self.kind == Kind::Vector {
            if entries.len() != dim {
                return Err(format!("vector needs {dim} entries, got {}", entries.len()));
            }
            let v = ComplexVector::from_vec(entries);
            let norm = v.norm();
            if (norm - 1.0).abs() > VECTOR_NORM_TOL {
                return Err(format!("vector is not unit norm (norm {norm})"));
            }
            return Ok(Loaded::Vector(shape, v));
        }
        if entries.len() != dim * dim {
            return Err(format!("{dim}x{dim} matrix needs {} entries, got {}", dim * dim, entries.len()));
        }
        let a = linalg::from_row_major(dim, dim, &entries).map_err(|e| e.to_string())?;
        match self.kind {
            Kind::Operator => Ok(Loaded::Operator(shape, a)),
            Kind::Density => DensityMatrix::new(shape, a).map(Loaded::Density).map_err(|e| e.to_string()),
            Kind::Gamble => Gamble::new(shape, a).map(Loaded::Gamble).map_err(|e| e.to_string()),
            Kind::Vector => unreachable!(),
        }
    }
}
