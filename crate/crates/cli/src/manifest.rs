//! Conversion manifest: one CSV row per produced (or failed) file, with paths
//! stored relative to the manifest's own directory.

use std::fs;
use std::path::{Component, Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const FILE_NAME: &str = "manifest.csv";
pub const STATUS_OK: &str = "ok";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub input: String,
    pub output: String,
    pub curve: String,
    pub order: Option<u32>,
    pub length: Option<usize>,
    /// Preprocessing and augmentation applied, in order, `;`-separated.
    pub ops: String,
    pub mixup_partner: String,
    pub lambda: Option<f64>,
    /// `ok` or `error: <message>`.
    pub status: String,
}

impl Row {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    pub fn failed(input: String, err: &anyhow::Error) -> Self {
        Row {
            input,
            status: format!("error: {err:#}"),
            ..Row::default()
        }
    }
}

pub fn write(path: &Path, rows: &[Row]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_path(path)
        .with_context(|| format!("opening manifest {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .with_context(|| format!("parsing manifest {}", path.display()))
}

/// `target` written relative to `base`, going up with `..` where needed.
/// Falls back to the absolute path when the two share no root.
pub fn relative_to(target: &Path, base: &Path) -> String {
    let (Ok(target), Ok(base)) = (absolute(target), absolute(base)) else {
        return target.display().to_string();
    };
    let t: Vec<Component> = target.components().collect();
    let b: Vec<Component> = base.components().collect();
    let common = t.iter().zip(&b).take_while(|(x, y)| x == y).count();
    if common == 0 {
        return target.display().to_string();
    }
    let mut rel = PathBuf::new();
    for _ in common..b.len() {
        rel.push("..");
    }
    rel.extend(&t[common..]);
    rel.to_string_lossy().replace('\\', "/")
}

fn absolute(p: &Path) -> std::io::Result<PathBuf> {
    // canonicalize the parent so files that do not exist yet still resolve
    match (p.parent(), p.file_name()) {
        (Some(parent), Some(name)) if !p.exists() => {
            let parent = if parent.as_os_str().is_empty() {
                Path::new(".")
            } else {
                parent
            };
            Ok(fs::canonicalize(parent)?.join(name))
        }
        _ => fs::canonicalize(p),
    }
}

/// Resolves a manifest entry against the manifest's directory.
pub fn resolve(entry: &str, manifest_dir: &Path) -> PathBuf {
    let p = Path::new(entry);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        manifest_dir.join(p)
    }
}
