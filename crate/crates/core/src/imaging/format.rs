//! On-disk forms of an [`SfcImage`].
//!
//! `.sfci` (little-endian, lossless):
//!
//! ```text
//! offset  size      field
//! 0       4         magic "SFCI"
//! 4       1         version = 1
//! 5       1         curve id (0-7)
//! 6       1         order k
//! 7       1         reserved = 0
//! 8       4         original length (u32)
//! 12      4 * 4^k   f32 values in curve-index order
//! ```
//!
//! PGM: binary `P5`, maxval 65535, big-endian samples, row-major, with pixel
//! `p` written as `round((p + 1) / 2 * 65535)` clamped to the range.

use std::fs;
use std::path::Path;

use super::{gather, SfcImage};
use crate::curves::{build_curve, CurveKind, CurveOrder};
use crate::error::{Error, FormatError, Result};

pub const MAGIC: &[u8; 4] = b"SFCI";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 12;

pub fn raw_size(order: CurveOrder) -> usize {
    HEADER_LEN + 4 * order.cells()
}

pub fn raw_bytes(image: &SfcImage) -> Result<Vec<u8>> {
    let map = build_curve(image.kind(), image.order());
    let seq = gather(image, &map)?;
    let mut out = Vec::with_capacity(raw_size(image.order()));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(image.kind().id());
    out.push(image.order().k() as u8);
    out.push(0);
    out.extend_from_slice(&(image.original_len() as u32).to_le_bytes());
    for v in seq {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn raw_from_bytes(bytes: &[u8]) -> Result<SfcImage> {
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Size {
            expected: HEADER_LEN,
            found: bytes.len(),
        }
        .into());
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic.into());
    }
    if bytes[4] != VERSION {
        return Err(FormatError::Version {
            version: bytes[4],
            offset: 4,
        }
        .into());
    }
    let field = |field, value: u64, offset| FormatError::Field {
        field,
        value,
        offset,
    };
    let kind = CurveKind::from_id(bytes[5]).map_err(|_| field("curve id", bytes[5].into(), 5))?;
    let order = CurveOrder::new(bytes[6].into()).map_err(|_| field("order", bytes[6].into(), 6))?;
    if bytes[7] != 0 {
        return Err(field("reserved", bytes[7].into(), 7).into());
    }
    let original_len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if original_len > order.cells() {
        return Err(field("original length", original_len as u64, 8).into());
    }
    let expected = raw_size(order);
    if bytes.len() != expected {
        return Err(FormatError::Size {
            expected,
            found: bytes.len(),
        }
        .into());
    }
    let map = build_curve(kind, order);
    let side = order.side() as usize;
    let mut pixels = vec![0.0f32; order.cells()];
    for (chunk, p) in bytes[HEADER_LEN..].chunks_exact(4).zip(map.forward()) {
        pixels[p.y as usize * side + p.x as usize] = f32::from_le_bytes(chunk.try_into().unwrap());
    }
    SfcImage::from_row_major(kind, order, original_len, pixels)
}

pub fn export_raw(image: &SfcImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, raw_bytes(image)?).map_err(|e| Error::io(path, e))
}

pub fn import_raw(path: impl AsRef<Path>) -> Result<SfcImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    raw_from_bytes(&bytes)
}

pub fn pgm_level(p: f32) -> u16 {
    ((f64::from(p) + 1.0) / 2.0 * 65535.0)
        .round()
        .clamp(0.0, 65535.0) as u16
}

pub fn pgm_bytes(image: &SfcImage) -> Vec<u8> {
    let side = image.side();
    let mut out = format!("P5\n{side} {side}\n65535\n").into_bytes();
    out.reserve(2 * image.pixels().len());
    for &p in image.pixels() {
        out.extend_from_slice(&pgm_level(p).to_be_bytes());
    }
    out
}

pub fn export_pgm(image: &SfcImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, pgm_bytes(image)).map_err(|e| Error::io(path, e))
}

/// A decoded 16-bit graymap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub levels: Vec<u16>,
}

impl Pgm {
    /// Back to the `[-1, 1]` pixel scale.
    pub fn pixel(&self, x: usize, y: usize) -> f32 {
        let v = f64::from(self.levels[y * self.width + x]);
        (v / f64::from(self.maxval) * 2.0 - 1.0) as f32
    }
}

/// Reads a binary `P5` graymap with maxval above 255.
pub fn parse_pgm(bytes: &[u8]) -> Result<Pgm> {
    if !bytes.starts_with(b"P5") {
        return Err(FormatError::BadMagic.into());
    }
    let mut pos = 2;
    let mut fields = [0u64; 3];
    let names = ["width", "height", "maxval"];
    for (slot, name) in fields.iter_mut().zip(names) {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let text = std::str::from_utf8(&bytes[start..pos]).unwrap_or("");
        *slot = text.parse().map_err(|_| FormatError::Field {
            field: name,
            value: 0,
            offset: start,
        })?;
    }
    let [width, height, maxval] = fields;
    if !(256..=65535).contains(&maxval) {
        return Err(FormatError::Field {
            field: "maxval",
            value: maxval,
            offset: pos,
        }
        .into());
    }
    // single whitespace byte before the raster
    pos += 1;
    let (width, height) = (width as usize, height as usize);
    let expected = pos + 2 * width * height;
    if bytes.len() != expected {
        return Err(FormatError::Size {
            expected,
            found: bytes.len(),
        }
        .into());
    }
    let levels = bytes[pos..]
        .chunks_exact(2)
        .map(|b| u16::from_be_bytes([b[0], b[1]]))
        .collect();
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        levels,
    })
}
