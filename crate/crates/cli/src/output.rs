use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use pottslab::graph::{self, Multigraph};
use pottslab::tutte::TutteConfig;

use crate::error::{usage, CliError};

/// Input files read by a command, kept for the manifest digest.
#[derive(Default)]
pub struct Inputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Inputs {
    pub fn text(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes =
            fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| usage(format!("{} is not valid UTF-8", path.display())))?;
        self.files.push((path.to_path_buf(), bytes));
        Ok(text)
    }

    pub fn graph(&mut self, path: &Path) -> Result<Multigraph, CliError> {
        let text = self.text(path)?;
        graph::parse_edge_list(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    /// SHA-256 over the concatenated input bytes, in read order.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (_, bytes) in &self.files {
            h.update(bytes);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub struct Output {
    manifest: Value,
}

impl Output {
    pub fn new(
        subcommand: &str,
        params: &impl Serialize,
        inputs: &Inputs,
        config: TutteConfig,
    ) -> Self {
        let manifest = json!({
            "subcommand": subcommand,
            "parameters": params,
            "max_edges": config.max_edges,
            "input_files": inputs.files.iter().map(|(p, _)| p.display().to_string()).collect::<Vec<_>>(),
            "input_digest": inputs.digest(),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        });
        Output { manifest }
    }

    /// Writes `text` to `path` plus a `<path>.manifest.json` sidecar, or to
    /// stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>, text: &str) -> Result<(), CliError> {
        let fail = |p: &Path, e: std::io::Error| {
            CliError::Failure(format!("cannot write {}: {e}", p.display()))
        };
        match path {
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .map_err(|e| fail(Path::new("stdout"), e))?;
                out.flush().map_err(|e| fail(Path::new("stdout"), e))
            }
            Some(p) => {
                fs::write(p, text).map_err(|e| fail(p, e))?;
                let mut sidecar = p.as_os_str().to_owned();
                sidecar.push(".manifest.json");
                let sidecar = PathBuf::from(sidecar);
                let body =
                    serde_json::to_string_pretty(&self.manifest).expect("serializable") + "\n";
                fs::write(&sidecar, body).map_err(|e| fail(&sidecar, e))
            }
        }
    }
}
