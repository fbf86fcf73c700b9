//! Shift equivariance of non-overlapping strided convolutions through a curve.
//!
//! With `fold_k` scattering a length-`4^k` sequence by a curve of order `k`,
//! `conv_l` a `2^l x 2^l` kernel applied with stride `2^l`, and `unfold_{k-l}`
//! reading the result back with the same curve one block size coarser, the Z
//! curve satisfies
//!
//! ```text
//! unfold(conv(fold(shift(s, d * 4^l)))) == shift(unfold(conv(fold(s))), d)
//! ```
//!
//! for every `d`, because each `2^l x 2^l` block holds a contiguous run of
//! `4^l` indices and moving by whole runs only touches the high bits. Curves
//! that rotate or reflect their blocks break this. [`check_equivariance`]
//! measures one instance; [`sweep_lemma`] runs seeded batches over all `d`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{build_curve, CurveKind, CurveMap, CurveOrder};
use crate::error::{Error, Result};
use crate::imaging::{gather, scatter, SfcImage};

/// Real tolerance used for non-integer inputs, relative to the output scale.
pub const REAL_RELATIVE_TOLERANCE: f64 = 1e-9;

/// `2^l x 2^l` weights; `weight(m, n)` multiplies pixel `(x0 + m, y0 + n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    l: u32,
    // row-major: weights[n * 2^l + m]
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(l: u32, weights: Vec<f64>) -> Result<Self> {
        if l == 0 || l >= CurveOrder::MAX {
            return Err(Error::InvalidParameter(format!(
                "kernel order {l} out of range"
            )));
        }
        let cells = 1usize << (2 * l);
        if weights.len() != cells {
            return Err(Error::LengthMismatch {
                expected: cells,
                got: weights.len(),
            });
        }
        Ok(Kernel { l, weights })
    }

    pub fn ones(l: u32) -> Result<Self> {
        Self::new(l, vec![1.0; 1 << (2 * l)])
    }

    /// One at `(0, 0)`, zero elsewhere.
    pub fn delta(l: u32) -> Result<Self> {
        let mut w = vec![0.0; 1 << (2 * l)];
        w[0] = 1.0;
        Self::new(l, w)
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn side(&self) -> usize {
        1 << self.l
    }

    pub fn weight(&self, m: usize, n: usize) -> f64 {
        self.weights[n * self.side() + m]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Stride-`2^l` block dot products. Output cell `(i, j)` reads only the block
/// at `(i * 2^l, j * 2^l)`; its terms are summed row by row, left to right.
/// The result is tagged with the input's curve at order `k - l`.
pub fn strided_conv(image: &SfcImage<f64>, kernel: &Kernel) -> Result<SfcImage<f64>> {
    let k = image.order().k();
    let l = kernel.order();
    if l >= k {
        return Err(Error::KernelOrder {
            kernel: l,
            image: k,
        });
    }
    let coarse = CurveOrder::new(k - l)?;
    let side = image.side() as usize;
    let b = kernel.side();
    let out_side = coarse.side() as usize;
    let px = image.pixels();
    let mut out = vec![0.0; coarse.cells()];
    for j in 0..out_side {
        for i in 0..out_side {
            let mut acc = 0.0;
            for n in 0..b {
                let row = (j * b + n) * side + i * b;
                for m in 0..b {
                    acc += px[row + m] * kernel.weights[n * b + m];
                }
            }
            out[j * out_side + i] = acc;
        }
    }
    SfcImage::from_row_major(image.kind(), coarse, coarse.cells(), out)
}

/// `out[i] = seq[(i + r) mod len]`.
pub fn circular_shift<T: Clone>(seq: &[T], r: usize) -> Vec<T> {
    let mut out = seq.to_vec();
    if !out.is_empty() {
        out.rotate_left(r % seq.len());
    }
    out
}

/// Scatters a full-length sequence (no padding) by `map`.
pub fn fold_with(seq: &[f64], map: &CurveMap) -> Result<SfcImage<f64>> {
    if seq.len() != map.len() {
        return Err(Error::LengthMismatch {
            expected: map.len(),
            got: seq.len(),
        });
    }
    scatter(seq, map, 0.0)
}

pub fn fold(seq: &[f64], kind: CurveKind, order: CurveOrder) -> Result<SfcImage<f64>> {
    fold_with(seq, &build_curve(kind, order))
}

/// Gathers in curve order, using the image's own curve kind and order.
pub fn unfold(image: &SfcImage<f64>) -> Result<Vec<f64>> {
    gather(image, &build_curve(image.kind(), image.order()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    /// Small integers; every sum is exact in `f64`.
    Integer,
    /// Uniform in `[-1, 1)`.
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    Exact,
    Relative(f64),
}

impl Tolerance {
    /// Zero when every input is integral, [`REAL_RELATIVE_TOLERANCE`] otherwise.
    pub fn for_inputs(seq: &[f64], kernel: &Kernel) -> Self {
        let integral = |v: &f64| v.fract() == 0.0;
        if seq.iter().all(integral) && kernel.weights.iter().all(integral) {
            Tolerance::Exact
        } else {
            Tolerance::Relative(REAL_RELATIVE_TOLERANCE)
        }
    }

    fn bound(self, scale: f64) -> f64 {
        match self {
            Tolerance::Exact => 0.0,
            Tolerance::Relative(r) => r * scale.max(1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceWitness {
    pub kind: CurveKind,
    pub k: u32,
    pub l: u32,
    /// Seed the inputs were drawn from, when they were drawn.
    pub seed: Option<u64>,
    pub d: usize,
    pub max_abs_difference: f64,
    pub holds: bool,
}

pub const WITNESS_CSV_HEADER: &str = "kind,k,l,d,seed,max_abs_difference,holds";

impl EquivarianceWitness {
    pub fn csv_row(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{:e},{}",
            self.kind, self.k, self.l, self.d, seed, self.max_abs_difference, self.holds
        )
    }
}

/// Curve tables for one `(kind, k, l)` so repeated checks share them.
pub struct LemmaSetup {
    kind: CurveKind,
    k: u32,
    l: u32,
    fine: CurveMap,
    coarse: CurveMap,
}

impl LemmaSetup {
    pub fn new(kind: CurveKind, k: u32, l: u32) -> Result<Self> {
        let fine_order = CurveOrder::new(k)?;
        if l == 0 || l >= k {
            return Err(Error::KernelOrder {
                kernel: l,
                image: k,
            });
        }
        Ok(LemmaSetup {
            kind,
            k,
            l,
            fine: build_curve(kind, fine_order),
            coarse: build_curve(kind, CurveOrder::new(k - l)?),
        })
    }

    /// Number of admissible shift multipliers, `4^(k-l)`.
    pub fn shift_count(&self) -> usize {
        self.coarse.len()
    }

    fn pipeline(&self, seq: &[f64], kernel: &Kernel) -> Result<Vec<f64>> {
        let conv = strided_conv(&fold_with(seq, &self.fine)?, kernel)?;
        gather(&conv, &self.coarse)
    }

    fn check_inputs(&self, seq: &[f64], kernel: &Kernel) -> Result<()> {
        if kernel.order() != self.l {
            return Err(Error::KernelOrder {
                kernel: kernel.order(),
                image: self.k,
            });
        }
        if seq.len() != self.fine.len() {
            return Err(Error::LengthMismatch {
                expected: self.fine.len(),
                got: seq.len(),
            });
        }
        Ok(())
    }

    /// Compares the shifted-input route `A` against the shifted-output route
    /// `B` for one multiplier `d`.
    pub fn check(
        &self,
        seq: &[f64],
        kernel: &Kernel,
        d: usize,
        tol: Tolerance,
    ) -> Result<EquivarianceWitness> {
        self.check_inputs(seq, kernel)?;
        let reference = self.pipeline(seq, kernel)?;
        self.check_against(seq, kernel, &reference, d, tol)
    }

    fn check_against(
        &self,
        seq: &[f64],
        kernel: &Kernel,
        reference: &[f64],
        d: usize,
        tol: Tolerance,
    ) -> Result<EquivarianceWitness> {
        if d >= self.shift_count() {
            return Err(Error::ShiftOutOfRange {
                d,
                limit: self.shift_count(),
            });
        }
        let block = 1usize << (2 * self.l);
        let a = self.pipeline(&circular_shift(seq, d * block), kernel)?;
        let b = circular_shift(reference, d);
        let diff = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(EquivarianceWitness {
            kind: self.kind,
            k: self.k,
            l: self.l,
            seed: None,
            d,
            max_abs_difference: diff,
            holds: diff <= tol.bound(scale),
        })
    }

    /// Checks every `d`, returning one witness per multiplier.
    pub fn check_all(
        &self,
        seq: &[f64],
        kernel: &Kernel,
        tol: Tolerance,
    ) -> Result<Vec<EquivarianceWitness>> {
        self.check_inputs(seq, kernel)?;
        let reference = self.pipeline(seq, kernel)?;
        (0..self.shift_count())
            .map(|d| self.check_against(seq, kernel, &reference, d, tol))
            .collect()
    }
}

/// One-shot check with tables built on the spot; the tolerance follows
/// [`Tolerance::for_inputs`].
pub fn check_equivariance(
    kind: CurveKind,
    k: u32,
    l: u32,
    kernel: &Kernel,
    seq: &[f64],
    d: usize,
) -> Result<EquivarianceWitness> {
    let setup = LemmaSetup::new(kind, k, l)?;
    setup.check(seq, kernel, d, Tolerance::for_inputs(seq, kernel))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed derived from the master seed; independent of curve kind so
/// every curve sees the same inputs.
pub fn trial_seed(master: u64, k: u32, l: u32, trial: u32) -> u64 {
    splitmix64(master ^ splitmix64((u64::from(k) << 40) | (u64::from(l) << 32) | u64::from(trial)))
}

/// Sequence of length `4^k` and kernel of order `l` drawn from `seed`.
pub fn trial_inputs(k: u32, l: u32, seed: u64, values: ValueKind) -> Result<(Vec<f64>, Kernel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |bound: i32| match values {
        ValueKind::Integer => f64::from(rng.random_range(-bound..=bound)),
        ValueKind::Real => rng.random_range(-1.0..1.0),
    };
    let seq: Vec<f64> = (0..1usize << (2 * k)).map(|_| draw(9)).collect();
    let weights: Vec<f64> = (0..1usize << (2 * l)).map(|_| draw(4)).collect();
    Ok((seq, Kernel::new(l, weights)?))
}

/// Re-runs a stored witness from its seed.
pub fn replay(witness: &EquivarianceWitness, values: ValueKind) -> Result<EquivarianceWitness> {
    let seed = witness
        .seed
        .ok_or_else(|| Error::InvalidParameter("witness has no seed to replay".into()))?;
    let setup = LemmaSetup::new(witness.kind, witness.k, witness.l)?;
    let (seq, kernel) = trial_inputs(witness.k, witness.l, seed, values)?;
    let mut w = setup.check(
        &seq,
        &kernel,
        witness.d,
        Tolerance::for_inputs(&seq, &kernel),
    )?;
    w.seed = Some(seed);
    Ok(w)
}

/// First `(trial, d)` that breaks equivariance within `max_trials` seeded
/// trials, or `None` if none was found. `None` is not a proof.
pub fn find_counterexample(
    kind: CurveKind,
    k: u32,
    l: u32,
    max_trials: u32,
    master_seed: u64,
) -> Result<Option<EquivarianceWitness>> {
    let setup = LemmaSetup::new(kind, k, l)?;
    for trial in 0..max_trials {
        let seed = trial_seed(master_seed, k, l, trial);
        let (seq, kernel) = trial_inputs(k, l, seed, ValueKind::Integer)?;
        let tol = Tolerance::for_inputs(&seq, &kernel);
        if let Some(mut w) = setup
            .check_all(&seq, &kernel, tol)?
            .into_iter()
            .find(|w| !w.holds)
        {
            w.seed = Some(seed);
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Aggregate over the trials of one `(k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub k: u32,
    pub l: u32,
    pub trials: u32,
    pub failed_trials: u32,
    /// Total `(trial, d)` checks and how many failed.
    pub checks: usize,
    pub failed_checks: usize,
    pub max_abs_difference: f64,
    /// Worst `d` of each trial.
    pub witnesses: Vec<EquivarianceWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub kind: CurveKind,
    pub values: ValueKind,
    pub master_seed: u64,
    pub cells: Vec<SweepCell>,
}

impl SweepSummary {
    pub fn all_hold(&self) -> bool {
        self.cells.iter().all(|c| c.failed_checks == 0)
    }

    pub fn first_failure(&self) -> Option<&EquivarianceWitness> {
        self.cells
            .iter()
            .flat_map(|c| &c.witnesses)
            .find(|w| !w.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let verdict = if c.failed_checks == 0 {
                format!("no witness found in {} trials", c.trials)
            } else {
                format!("{}/{} trials fail", c.failed_trials, c.trials)
            };
            let _ = writeln!(
                out,
                "{:<9} k={} l={}  checks={:>6} failed={:>6} max|A-B|={:<10.3e} {}",
                self.kind.name(),
                c.k,
                c.l,
                c.checks,
                c.failed_checks,
                c.max_abs_difference,
                verdict
            );
        }
        out
    }

    /// One row per trial (its worst `d`), header first.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{WITNESS_CSV_HEADER}\n");
        for w in self.cells.iter().flat_map(|c| &c.witnesses) {
            out.push_str(&w.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Runs `trials` seeded trials for every `k` in `ks` and `l` in `ls` with
/// `l < k`, checking all shift multipliers of each.
pub fn sweep_lemma(
    kind: CurveKind,
    ks: &[u32],
    ls: &[u32],
    trials: u32,
    master_seed: u64,
    values: ValueKind,
) -> Result<SweepSummary> {
    let mut cells = Vec::new();
    for &k in ks {
        for &l in ls.iter().filter(|&&l| l >= 1 && l < k) {
            let setup = LemmaSetup::new(kind, k, l)?;
            let mut cell = SweepCell {
                k,
                l,
                trials,
                failed_trials: 0,
                checks: 0,
                failed_checks: 0,
                max_abs_difference: 0.0,
                witnesses: Vec::with_capacity(trials as usize),
            };
            for trial in 0..trials {
                let seed = trial_seed(master_seed, k, l, trial);
                let (seq, kernel) = trial_inputs(k, l, seed, values)?;
                let tol = Tolerance::for_inputs(&seq, &kernel);
                let results = setup.check_all(&seq, &kernel, tol)?;
                let failed = results.iter().filter(|w| !w.holds).count();
                cell.checks += results.len();
                cell.failed_checks += failed;
                if failed > 0 {
                    cell.failed_trials += 1;
                }
                // keep the first failing d, otherwise the largest difference
                let mut worst = results
                    .iter()
                    .find(|w| !w.holds)
                    .or_else(|| {
                        results
                            .iter()
                            .max_by(|a, b| a.max_abs_difference.total_cmp(&b.max_abs_difference))
                    })
                    .cloned()
                    .expect("at least one shift per trial");
                worst.seed = Some(seed);
                cell.max_abs_difference = cell.max_abs_difference.max(worst.max_abs_difference);
                cell.witnesses.push(worst);
            }
            cells.push(cell);
        }
    }
    Ok(SweepSummary {
        kind,
        values,
        master_seed,
        cells,
    })
}
