use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One named report artifact.
pub struct Artifact {
    pub name: String,
    pub body: String,
}

impl Artifact {
    pub fn json(stem: &str, value: &impl Serialize) -> Result<Self> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        Ok(Artifact { name: format!("{stem}.json"), body })
    }

    pub fn csv(stem: &str, body: String) -> Self {
        Artifact { name: format!("{stem}.csv"), body }
    }
}

/// Writes artifacts to files in a directory, or to stdout in order.
pub struct Emitter {
    /// Requested format; each table falls back to its own default.
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Emitter {
    pub fn emit(&self, artifacts: Vec<Artifact>) -> Result<()> {
        match &self.output {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for a in artifacts {
                    let path = dir.join(&a.name);
                    fs::write(&path, a.body).with_context(|| format!("writing {}", path.display()))?;
                }
            }
            None => {
                let mut out = std::io::stdout().lock();
                let n = artifacts.len();
                for (i, a) in artifacts.into_iter().enumerate() {
                    out.write_all(a.body.as_bytes())?;
                    if i + 1 < n {
                        out.write_all(b"\n")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// A table in the requested format: CSV text or the JSON value.
    pub fn table(
        &self,
        stem: &str,
        value: &impl Serialize,
        default: Format,
        csv: impl FnOnce() -> String,
    ) -> Result<Artifact> {
        match self.format.unwrap_or(default) {
            Format::Json => Artifact::json(stem, value),
            Format::Csv => Ok(Artifact::csv(stem, csv())),
        }
    }

    /// A report with no tabular form.
    pub fn report(&self, stem: &str, value: &impl Serialize) -> Result<Artifact> {
        if self.format == Some(Format::Csv) {
            bail!("{stem}: no CSV form, use --format json");
        }
        Artifact::json(stem, value)
    }
}
