// Copyright 2026 The weft developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Report writing: every output carries a `#`-prefixed header with the tool
//! version, the full invocation, the seed, and a content hash of the
//! Hamiltonian file, so reruns are auditable.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

/// Git-blob-style content hash (sha256 over `blob <len>\0<bytes>`).
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("blob {}\0", bytes.len()).as_bytes());
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Report {
    header: Vec<String>,
    body: String,
}

impl Report {
    pub fn new(seed: u64, hamiltonian: Option<(&Path, &str)>) -> Self {
        let mut header = vec![
            format!("# weft {}", env!("CARGO_PKG_VERSION")),
            format!(
                "# command: {}",
                std::env::args().collect::<Vec<_>>().join(" ")
            ),
            format!("# seed: {seed}"),
        ];
        if let Some((path, text)) = hamiltonian {
            header.push(format!(
                "# hamiltonian: {} sha256:{}",
                path.display(),
                content_hash(text.as_bytes())
            ));
        }
        Report {
            header,
            body: String::new(),
        }
    }

    pub fn comment(&mut self, line: &str) {
        self.header.push(format!("# {line}"));
    }

    pub fn line(&mut self, line: &str) {
        self.body.push_str(line);
        self.body.push('\n');
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let mut text = self.header.join("\n");
        text.push('\n');
        text.push_str(&self.body);
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Config(format!("cannot write stdout: {e}")))
            }
        }
    }
}

/// Read a file with a config-level diagnostic on failure.
pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}
