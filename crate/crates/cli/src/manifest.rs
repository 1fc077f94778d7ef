//! Run manifest: enough context to reproduce an invocation byte for byte.
//!
//! Wall time deliberately stays out of the manifest (it goes to stderr), so
//! two runs with the same inputs render identical reports.

use hyperspec_core::Report;
use sha2::{Digest, Sha256};

pub struct RunManifest {
    command: String,
    seed: u64,
    jobs: usize,
    inputs: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(seed: u64, jobs: usize) -> Self {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        RunManifest {
            command,
            seed,
            jobs,
            inputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &str, bytes: &[u8]) {
        let digest = hex::encode(Sha256::digest(bytes));
        self.inputs.push((path.to_string(), digest));
    }

    pub fn render_into(&self, report: &mut Report) {
        report.push("manifest.command", &self.command);
        report.push("manifest.version", env!("CARGO_PKG_VERSION"));
        report.push("manifest.seed", self.seed);
        report.push("manifest.jobs", self.jobs);
        for (path, digest) in &self.inputs {
            report.push(&format!("manifest.input.{path}"), format!("sha256:{digest}"));
        }
    }
}
