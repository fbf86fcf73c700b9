//! Curve images: a sequence scattered over the grid by a curve,
//! `image(p) = sequence[curve⁻¹(p)]`.
//!
//! Clips shorter than `4^k` are zero-padded at the end. Pixels are stored
//! row-major (`y * N + x`); the serialised `.sfci` form stores them in curve
//! order instead, see [`format`].

pub mod format;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};

use crate::curves::{build_curve, CurveKind, CurveMap, CurveOrder};
use crate::error::{Error, Result};
use crate::signal::{AudioClip, SAMPLE_RATE};

pub use format::{
    export_pgm, export_raw, import_raw, parse_pgm, pgm_bytes, raw_bytes, raw_from_bytes, Pgm,
};

/// A `2^k x 2^k` grid tagged with the curve that produced it and the length
/// of the sequence it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct SfcImage<T = f32> {
    kind: CurveKind,
    order: CurveOrder,
    original_len: usize,
    pixels: Vec<T>,
}

impl<T: Copy> SfcImage<T> {
    pub fn from_row_major(
        kind: CurveKind,
        order: CurveOrder,
        original_len: usize,
        pixels: Vec<T>,
    ) -> Result<Self> {
        if pixels.len() != order.cells() {
            return Err(Error::LengthMismatch {
                expected: order.cells(),
                got: pixels.len(),
            });
        }
        if original_len > order.cells() {
            return Err(Error::ClipTooLong {
                len: original_len,
                cells: order.cells(),
            });
        }
        Ok(SfcImage {
            kind,
            order,
            original_len,
            pixels,
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn order(&self) -> CurveOrder {
        self.order
    }

    pub fn side(&self) -> u32 {
        self.order.side()
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    /// Row-major pixels.
    pub fn pixels(&self) -> &[T] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> T {
        self.pixels[(y * self.side() + x) as usize]
    }

    pub fn map_pixels<U: Copy>(&self, f: impl Fn(T) -> U) -> SfcImage<U> {
        SfcImage {
            kind: self.kind,
            order: self.order,
            original_len: self.original_len,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }

    fn check_map(&self, map: &CurveMap) -> Result<()> {
        if map.kind() != self.kind {
            return Err(Error::WrongCurve {
                curve: map.kind(),
                got: self.kind,
            });
        }
        if map.order() != self.order {
            return Err(Error::MetadataMismatch {
                what: "order",
                left: self.order.to_string(),
                right: map.order().to_string(),
            });
        }
        Ok(())
    }
}

/// Places `seq[t]` at `map.forward()[t]`; cells past the sequence get `pad`.
pub fn scatter<T: Copy>(seq: &[T], map: &CurveMap, pad: T) -> Result<SfcImage<T>> {
    let cells = map.len();
    if seq.len() > cells {
        return Err(Error::ClipTooLong {
            len: seq.len(),
            cells,
        });
    }
    let side = map.side() as usize;
    let mut pixels = vec![pad; cells];
    for (&v, p) in seq.iter().zip(map.forward()) {
        pixels[p.y as usize * side + p.x as usize] = v;
    }
    Ok(SfcImage {
        kind: map.kind(),
        order: map.order(),
        original_len: seq.len(),
        pixels,
    })
}

/// Reads every cell back in curve order (all `4^k` of them).
pub fn gather<T: Copy>(image: &SfcImage<T>, map: &CurveMap) -> Result<Vec<T>> {
    image.check_map(map)?;
    let side = map.side() as usize;
    Ok(map
        .forward()
        .iter()
        .map(|p| image.pixels[p.y as usize * side + p.x as usize])
        .collect())
}

pub fn encode(clip: &AudioClip, kind: CurveKind, order: CurveOrder) -> Result<SfcImage> {
    if clip.len() > order.cells() {
        return Err(Error::ClipTooLong {
            len: clip.len(),
            cells: order.cells(),
        });
    }
    encode_with(clip, &build_curve(kind, order))
}

/// [`encode`] with a prebuilt curve table.
pub fn encode_with(clip: &AudioClip, map: &CurveMap) -> Result<SfcImage> {
    scatter(clip.samples(), map, 0.0)
}

pub fn decode(image: &SfcImage) -> Result<AudioClip> {
    decode_with(image, &build_curve(image.kind, image.order))
}

pub fn decode_with(image: &SfcImage, map: &CurveMap) -> Result<AudioClip> {
    let mut seq = gather(image, map)?;
    seq.truncate(image.original_len);
    AudioClip::new(seq, SAMPLE_RATE)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixupParams {
    pub alpha: f64,
    pub seed: u64,
}

impl Default for MixupParams {
    fn default() -> Self {
        MixupParams {
            alpha: 0.2,
            seed: 0,
        }
    }
}

/// Draws from `Beta(alpha, alpha)`.
pub struct LambdaSampler {
    beta: Beta<f64>,
    rng: ChaCha8Rng,
}

impl LambdaSampler {
    pub fn new(params: &MixupParams) -> Result<Self> {
        if params.alpha.is_nan() || params.alpha <= 0.0 || params.alpha.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "mixup alpha must be positive, got {}",
                params.alpha
            )));
        }
        let beta = Beta::new(params.alpha, params.alpha)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(LambdaSampler {
            beta,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        })
    }

    pub fn sample(&mut self) -> f64 {
        self.beta.sample(&mut self.rng)
    }
}

/// Pixelwise `lambda * a + (1 - lambda) * b`, evaluated in `f64`.
pub fn mix(a: &SfcImage, b: &SfcImage, lambda: f64) -> Result<SfcImage> {
    let fields = [
        ("curve", a.kind.to_string(), b.kind.to_string()),
        ("order", a.order.to_string(), b.order.to_string()),
        (
            "original length",
            a.original_len.to_string(),
            b.original_len.to_string(),
        ),
    ];
    if let Some((what, left, right)) = fields.into_iter().find(|(_, l, r)| l != r) {
        return Err(Error::MetadataMismatch { what, left, right });
    }
    let pixels = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| (lambda * f64::from(x) + (1.0 - lambda) * f64::from(y)) as f32)
        .collect();
    Ok(SfcImage {
        pixels,
        ..a.clone()
    })
}

/// Mixes two images with a freshly drawn `lambda`, returned for label mixing.
pub fn mixup(a: &SfcImage, b: &SfcImage, params: &MixupParams) -> Result<(SfcImage, f64)> {
    let lambda = LambdaSampler::new(params)?.sample();
    Ok((mix(a, b, lambda)?, lambda))
}
