use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one run. Everything except the wall time is enough to
/// reproduce the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    pub instance: Option<String>,
    pub config: Option<String>,
    pub seeds: Vec<u64>,
    pub out_dir: String,
    pub version: String,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
    }

    /// Accepts the manifest file or the directory holding it.
    pub fn read(path: &Path) -> Result<Self> {
        let file = if path.is_dir() { path.join(MANIFEST_FILE) } else { path.to_path_buf() };
        let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))
    }
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().context("output path has no file name")?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
}

/// Replaces every occurrence of `flag` (`--flag v` or `--flag=v`) and
/// appends the new value; `None` only removes.
pub fn set_flag(args: &mut Vec<String>, flag: &str, value: Option<&str>) {
    let prefix = format!("{flag}=");
    let mut out = Vec::with_capacity(args.len() + 2);
    let mut it = args.drain(..);
    while let Some(a) = it.next() {
        if a == flag {
            it.next();
        } else if !a.starts_with(&prefix) {
            out.push(a);
        }
    }
    drop(it);
    if let Some(v) = value {
        out.push(flag.to_string());
        out.push(v.to_string());
    }
    *args = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_flag_replaces_both_spellings() {
        let mut args: Vec<String> = ["solve-carp", "a.dat", "--out", "x", "--out=y"].map(String::from).to_vec();
        set_flag(&mut args, "--out", Some("z"));
        assert_eq!(args, ["solve-carp", "a.dat", "--out", "z"]);
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = RunManifest {
            command: "simulate".into(),
            args: vec!["simulate".into()],
            instance: None,
            config: Some("spec.txt".into()),
            seeds: vec![7],
            out_dir: dir.path().display().to_string(),
            version: "0.1.0".into(),
            wall_time_seconds: 0.5,
        };
        m.write(dir.path()).unwrap();
        assert_eq!(RunManifest::read(dir.path()).unwrap(), m);
    }
}
