//! Staged output files: everything is written to temporaries in the target
//! directory and renamed into place only when the whole command succeeds.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::config::RunConfig;

pub struct Artifacts {
    dir: PathBuf,
    prefix: String,
    staged: Vec<(NamedTempFile, PathBuf)>,
}

impl Artifacts {
    pub fn new(dir: &Path, prefix: &str) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            prefix: prefix.to_string(),
            staged: Vec::new(),
        })
    }

    pub fn path_for(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{}", self.prefix, suffix))
    }

    /// Stage a file named `<prefix><suffix>`.
    pub fn stage<F>(&mut self, suffix: &str, write: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut dyn Write) -> Result<()>,
    {
        let target = self.path_for(suffix);
        let mut tmp = NamedTempFile::new_in(&self.dir)
            .with_context(|| format!("cannot create a temporary file in {}", self.dir.display()))?;
        {
            let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
            write(&mut buf).with_context(|| format!("while writing {}", target.display()))?;
            buf.flush()?;
        }
        self.staged.push((tmp, target.clone()));
        Ok(target)
    }

    pub fn stage_json<T: Serialize>(&mut self, suffix: &str, value: &T) -> Result<PathBuf> {
        self.stage(suffix, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.write_all(b"\n")?;
            Ok(())
        })
    }

    /// Add a manifest carrying the run configuration and artifact list, then
    /// move everything into place.
    pub fn commit(mut self, config: &RunConfig) -> Result<Vec<PathBuf>> {
        let mut files: Vec<PathBuf> = self.staged.iter().map(|(_, p)| p.clone()).collect();
        let manifest_path = self.path_for("manifest.json");
        let names: Vec<String> = files
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
            .collect();
        let manifest = serde_json::json!({ "config": config, "artifacts": names });
        self.stage_json("manifest.json", &manifest)?;
        files.push(manifest_path);
        for (tmp, target) in self.staged.drain(..) {
            tmp.persist(&target)
                .with_context(|| format!("cannot move output into {}", target.display()))?;
        }
        Ok(files)
    }
}
