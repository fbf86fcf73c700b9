use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;

use sfc_core::curves::{build_curve, CurveKind, CurveMap, CurveOrder};
use sfc_core::imaging::{encode_with, export_pgm, export_raw};
use sfc_core::signal::{center, load_wav, random_shift, CenterParams, ShiftParams};

use crate::manifest::{self, Row, STATUS_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Lossless float container.
    Sfci,
    /// 16-bit graymap for viewing; lossy.
    Pgm,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Sfci => "sfci",
            OutputFormat::Pgm => "pgm",
        }
    }
}

/// `max_shift: None` means a quarter of each clip's length.
#[derive(Clone, Copy, Debug)]
pub struct ShiftSpec {
    pub max_shift: Option<usize>,
    pub seed: u64,
}

pub struct EncodeJob {
    pub map: CurveMap,
    pub center: Option<CenterParams>,
    pub shift: Option<ShiftSpec>,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
}

/// `.wav` files directly inside `dir`, sorted by name.
pub fn list_wavs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let is_wav = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
        if path.is_file() && is_wav {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-file seed from the master seed and the file name, so a file keeps its
/// shift when other files are added to or removed from the directory.
pub fn file_seed(master: u64, name: &str) -> u64 {
    name.bytes()
        .fold(splitmix64(master), |h, b| splitmix64(h ^ u64::from(b)))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

impl EncodeJob {
    pub fn new(kind: CurveKind, order: CurveOrder, format: OutputFormat, out_dir: PathBuf) -> Self {
        EncodeJob {
            map: build_curve(kind, order),
            center: None,
            shift: None,
            format,
            out_dir,
        }
    }

    fn output_path(&self, input: &Path) -> PathBuf {
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.out_dir
            .join(format!("{stem}.{}", self.format.extension()))
    }

    fn process(&self, input: &Path) -> Result<Row> {
        let mut clip = load_wav(input)?;
        let len = clip.len();
        if len > self.map.len() {
            bail!(
                "clip of {len} samples exceeds the {} cells of order {}",
                self.map.len(),
                self.map.order()
            );
        }
        let mut ops = Vec::new();
        if let Some(p) = &self.center {
            clip = center(&clip, p);
            ops.push(format!(
                "center(w={},sigma={},th={})",
                p.window, p.sigma, p.threshold
            ));
        }
        if let Some(spec) = self.shift {
            let params = ShiftParams {
                max_shift: spec.max_shift.unwrap_or(len / 4),
                seed: file_seed(spec.seed, &file_name(input)),
            };
            let offset = params.draw();
            clip = random_shift(&clip, &params)?;
            ops.push(format!(
                "shift(max={},seed={},offset={offset})",
                params.max_shift, params.seed
            ));
        }
        let image = encode_with(&clip, &self.map)?;
        let out = self.output_path(input);
        match self.format {
            OutputFormat::Sfci => export_raw(&image, &out)?,
            OutputFormat::Pgm => export_pgm(&image, &out)?,
        }
        log::debug!("{} -> {}", input.display(), out.display());
        Ok(Row {
            input: manifest::relative_to(input, &self.out_dir),
            output: manifest::relative_to(&out, &self.out_dir),
            curve: self.map.kind().to_string(),
            order: Some(self.map.order().k()),
            length: Some(len),
            ops: ops.join(";"),
            status: STATUS_OK.into(),
            ..Row::default()
        })
    }

    /// Encodes every input on the current rayon pool; rows come back in input
    /// order with failures recorded rather than raised.
    pub fn run(&self, inputs: &[PathBuf]) -> Vec<Row> {
        inputs
            .par_iter()
            .map(|input| {
                self.process(input).unwrap_or_else(|e| {
                    log::error!("{}: {e:#}", input.display());
                    Row::failed(manifest::relative_to(input, &self.out_dir), &e)
                })
            })
            .collect()
    }
}
