//! Run manifests: a command, its parameters and its output paths, stored as JSON.
//!
//! ```json
//! {
//!   "command": "painleve",
//!   "parameters": { "m": "2", "S": "40", "N": "2000" },
//!   "outputs": { "out": "sol.csv" }
//! }
//! ```
//!
//! Parameter names are the long flags of the matching subcommand. Values are strings so
//! that a manifest survives a parse/serialize cycle byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use clap::CommandFactory;
use serde::{Deserialize, Serialize};

use crate::args::Cli;
use crate::error::{schema, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifestCommand {
    Hierarchy,
    Gfun,
    Painleve,
    Kdv,
    Compare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: ManifestCommand,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub outputs: BTreeMap<String, String>,
}

const KDV_ACTIONS: &[&str] = &["critical", "run", "compare"];
/// Flags owned by the runner rather than by a single manifest.
const RESERVED: &[&str] = &["out", "help", "jobs", "out-dir", "format"];

impl RunManifest {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| schema(format!("{}: {e}", path.display())))
    }

    /// Canonical text; parsing it back and serializing again gives the same bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("string maps always serialize");
        s.push('\n');
        s
    }

    fn subcommand_path(&self) -> Result<Vec<&str>, CliError> {
        Ok(match self.command {
            ManifestCommand::Hierarchy => vec!["hierarchy", "gen"],
            ManifestCommand::Gfun => vec!["gfun"],
            ManifestCommand::Painleve => vec!["painleve", "solve"],
            ManifestCommand::Compare => vec!["compare"],
            ManifestCommand::Kdv => {
                let action = self.parameters.get("action").map_or("run", String::as_str);
                let Some(a) = KDV_ACTIONS.iter().find(|a| **a == action) else {
                    return Err(schema(format!(
                        "kdv action `{action}` is not one of {KDV_ACTIONS:?}"
                    )));
                };
                vec!["kdv", a]
            }
        })
    }

    /// Equivalent command line, after checking every key against the subcommand.
    pub fn to_argv(&self) -> Result<Vec<String>, CliError> {
        let path = self.subcommand_path()?;
        let mut cmd = Cli::command();
        for name in &path {
            cmd = cmd
                .find_subcommand(name)
                .expect("manifest commands mirror the CLI")
                .clone();
        }
        let mut argv: Vec<String> = std::iter::once("pihier")
            .chain(path.iter().copied())
            .map(String::from)
            .collect();
        for (key, value) in &self.parameters {
            if key == "action" && self.command == ManifestCommand::Kdv {
                continue;
            }
            if key == "format" {
                argv.push(format!("--format={value}"));
                continue;
            }
            let arg = cmd
                .get_arguments()
                .find(|a| a.get_long() == Some(key.as_str()) && !RESERVED.contains(&key.as_str()))
                .ok_or_else(|| {
                    schema(format!("unknown parameter `{key}` for {}", path.join(" ")))
                })?;
            if arg.get_action().takes_values() {
                argv.push(format!("--{key}={value}"));
            } else {
                match value.as_str() {
                    "true" => argv.push(format!("--{key}")),
                    "false" => {}
                    _ => return Err(schema(format!("flag `{key}` takes true or false"))),
                }
            }
        }
        for (key, value) in &self.outputs {
            if key != "out" {
                return Err(schema(format!(
                    "unknown output `{key}`; only `out` is recognised"
                )));
            }
            argv.push(format!("--out={value}"));
        }
        Ok(argv)
    }
}
