use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        let sha256 = Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect();
        Self { path: path.display().to_string(), sha256 }
    }
}

/// Machine-readable summary of one invocation. Everything except
/// `elapsed_seconds` is a function of the command line and input bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub tol: f64,
    pub iter_cap: usize,
    pub result: serde_json::Value,
    pub elapsed_seconds: f64,
}

impl RunReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}
