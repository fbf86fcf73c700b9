//! Audio clips and the waveform-side preprocessing: energy-based centering
//! and random time shifts. Both translate the signal and fill the vacated
//! samples with zeros; nothing wraps around.

mod wav;

pub use wav::{decode_wav, encode_wav, load_wav, save_wav};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const SAMPLE_RATE: u32 = 16_000;

/// Mono waveform with samples in `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AudioClip {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioClip {
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Result<Self> {
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !s.is_finite() || s.abs() > 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "sample {i} = {s} is outside [-1, 1]"
            )));
        }
        Ok(AudioClip {
            samples,
            sample_rate,
        })
    }

    /// Scales by the peak magnitude when it exceeds one.
    pub fn normalized(mut samples: Vec<f32>, sample_rate: u32) -> Result<Self> {
        let peak = samples.iter().fold(0.0f32, |m, s| m.max(s.abs()));
        if peak > 1.0 && peak.is_finite() {
            samples.iter_mut().for_each(|s| *s /= peak);
        }
        Self::new(samples, sample_rate)
    }

    pub fn silence(len: usize, sample_rate: u32) -> Self {
        AudioClip {
            samples: vec![0.0; len],
            sample_rate,
        }
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples
            .iter()
            .map(|&s| f64::from(s) * f64::from(s))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterParams {
    /// Window length in samples.
    pub window: usize,
    /// Standard deviation of the Gaussian weight, in samples.
    pub sigma: f64,
    /// Minimum weighted mean energy of an active window.
    pub threshold: f64,
}

impl Default for CenterParams {
    fn default() -> Self {
        CenterParams {
            window: 100,
            sigma: 25.0,
            threshold: 1e-4,
        }
    }
}

impl CenterParams {
    pub fn new(window: usize, sigma: f64, threshold: f64) -> Result<Self> {
        if window == 0 || sigma.is_nan() || sigma <= 0.0 || threshold.is_nan() || threshold < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "center needs w > 0, sigma > 0, th >= 0 (got {window}, {sigma}, {threshold})"
            )));
        }
        Ok(CenterParams {
            window,
            sigma,
            threshold,
        })
    }
}

/// Gaussian-weighted mean energy of each consecutive window; the last window
/// may be shorter and is weighted over its actual extent.
pub fn window_energies(samples: &[f32], params: &CenterParams) -> Vec<f64> {
    let two_var = 2.0 * params.sigma * params.sigma;
    samples
        .chunks(params.window)
        .map(|win| {
            let mid = (win.len() as f64 - 1.0) / 2.0;
            let (mut num, mut den) = (0.0, 0.0);
            for (t, &s) in win.iter().enumerate() {
                let d = t as f64 - mid;
                let g = (-d * d / two_var).exp();
                num += g * f64::from(s) * f64::from(s);
                den += g;
            }
            num / den
        })
        .collect()
}

/// Sample range `[start, end)` covered by the first through last window whose
/// weighted energy reaches the threshold, or `None` if no window does.
pub fn active_span(samples: &[f32], params: &CenterParams) -> Option<(usize, usize)> {
    let energies = window_energies(samples, params);
    let first = energies.iter().position(|&e| e >= params.threshold)?;
    let last = energies.iter().rposition(|&e| e >= params.threshold)?;
    let end = ((last + 1) * params.window).min(samples.len());
    Some((first * params.window, end))
}

/// Offset that [`center`] would apply: moves the midpoint of the active span
/// onto `L / 2`. Zero for clips with no active window.
pub fn center_offset(clip: &AudioClip, params: &CenterParams) -> i64 {
    match active_span(&clip.samples, params) {
        Some((start, end)) => {
            let mid = (start + end) as f64 / 2.0;
            (clip.len() as f64 / 2.0 - mid).round() as i64
        }
        None => 0,
    }
}

/// Aligns the active part of the clip with the middle of the frame.
pub fn center(clip: &AudioClip, params: &CenterParams) -> AudioClip {
    shift_by(clip, center_offset(clip, params))
}

/// Translates by `offset` samples (positive moves content later); samples
/// pushed past either end are dropped and the gap is zero-filled.
pub fn shift_by(clip: &AudioClip, offset: i64) -> AudioClip {
    let len = clip.len();
    let mut out = vec![0.0f32; len];
    if offset.unsigned_abs() < len as u64 {
        let k = offset.unsigned_abs() as usize;
        if offset >= 0 {
            out[k..].copy_from_slice(&clip.samples[..len - k]);
        } else {
            out[..len - k].copy_from_slice(&clip.samples[k..]);
        }
    }
    AudioClip {
        samples: out,
        sample_rate: clip.sample_rate,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftParams {
    pub max_shift: usize,
    pub seed: u64,
}

impl ShiftParams {
    /// Shifts drawn from `[-L/4, L/4]`.
    pub fn quarter(len: usize, seed: u64) -> Self {
        ShiftParams {
            max_shift: len / 4,
            seed,
        }
    }

    /// The integer offset drawn uniformly from `[-max_shift, max_shift]`.
    pub fn draw(&self) -> i64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        draw_shift(self.max_shift, &mut rng)
    }
}

pub fn draw_shift<R: Rng + ?Sized>(max_shift: usize, rng: &mut R) -> i64 {
    let m = max_shift as i64;
    rng.random_range(-m..=m)
}

/// Random translation; meant for clips that have already been centered.
pub fn random_shift(clip: &AudioClip, params: &ShiftParams) -> Result<AudioClip> {
    if params.max_shift > clip.len() / 2 {
        return Err(Error::InvalidParameter(format!(
            "max shift {} exceeds half the clip length {}",
            params.max_shift,
            clip.len()
        )));
    }
    Ok(shift_by(clip, params.draw()))
}
