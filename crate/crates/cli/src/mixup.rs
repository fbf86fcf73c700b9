use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfc_core::imaging::{export_raw, import_raw, mix, LambdaSampler, MixupParams};

use crate::manifest::{self, Row, STATUS_OK};

pub struct MixupJob {
    pub params: MixupParams,
    /// Overrides the Beta draw for every pair.
    pub lambda: Option<f64>,
    pub out_dir: PathBuf,
}

/// Partner of each position: a seeded shuffle, each entry paired with the
/// next one around the cycle.
pub fn partners(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut partner = vec![0; n];
    for (i, &a) in order.iter().enumerate() {
        partner[a] = order[(i + 1) % n];
    }
    partner
}

impl MixupJob {
    pub fn run(&self, manifest_path: &Path) -> Result<Vec<Row>> {
        let src_dir = manifest_path.parent().unwrap_or(Path::new("."));
        let rows: Vec<Row> = manifest::read(manifest_path)?
            .into_iter()
            .filter(|r| r.is_ok() && r.output.ends_with(".sfci"))
            .collect();
        if rows.len() < 2 {
            bail!(
                "mixup needs at least two .sfci rows in {}",
                manifest_path.display()
            );
        }
        if let Some(l) = self.lambda {
            if !(0.0..=1.0).contains(&l) {
                bail!("lambda {l} outside [0, 1]");
            }
        }
        let out_manifest = self.out_dir.join(manifest::FILE_NAME);
        if fs::canonicalize(manifest_path).ok() == fs::canonicalize(&out_manifest).ok() {
            bail!("--out would overwrite the input manifest");
        }

        let mut sampler = LambdaSampler::new(&self.params)?;
        let partner = partners(rows.len(), self.params.seed);
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            // one draw per row even when it fails, so later rows keep their lambda
            let lambda = self.lambda.unwrap_or_else(|| sampler.sample());
            let other = &rows[partner[i]];
            let a_path = manifest::resolve(&row.output, src_dir);
            let b_path = manifest::resolve(&other.output, src_dir);
            let result = self.mix_pair(&a_path, &b_path, lambda).map(|dest| Row {
                input: manifest::relative_to(&a_path, &self.out_dir),
                output: manifest::relative_to(&dest, &self.out_dir),
                curve: row.curve.clone(),
                order: row.order,
                length: row.length,
                ops: [
                    row.ops.as_str(),
                    &format!(
                        "mixup(alpha={},seed={})",
                        self.params.alpha, self.params.seed
                    ),
                ]
                .iter()
                .filter(|s| !s.is_empty())
                .copied()
                .collect::<Vec<_>>()
                .join(";"),
                mixup_partner: manifest::relative_to(&b_path, &self.out_dir),
                lambda: Some(lambda),
                status: STATUS_OK.into(),
            });
            out.push(result.unwrap_or_else(|e| {
                log::error!("{}: {e:#}", a_path.display());
                Row::failed(manifest::relative_to(&a_path, &self.out_dir), &e)
            }));
        }
        Ok(out)
    }

    fn mix_pair(&self, a: &Path, b: &Path, lambda: f64) -> Result<PathBuf> {
        let img_a = import_raw(a)?;
        let img_b = import_raw(b)?;
        let mixed =
            mix(&img_a, &img_b, lambda).with_context(|| format!("mixing with {}", b.display()))?;
        let stem = a
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let dest = self.out_dir.join(format!("{stem}_mix.sfci"));
        export_raw(&mixed, &dest)?;
        Ok(dest)
    }
}
