//! Z (Morton) and Gray curves.
//!
//! Index bits are numbered from zero at the least significant end. The column
//! `x` is read from the odd positions and the row `y` from the even ones, so
//! index `1` is the cell directly below the origin.

use super::GridPoint;

/// Spreads the low 16 bits of `v` onto the even bit positions.
#[inline]
pub fn spread_bits(v: u32) -> u32 {
    let mut v = v & 0x0000_ffff;
    v = (v | (v << 8)) & 0x00ff_00ff;
    v = (v | (v << 4)) & 0x0f0f_0f0f;
    v = (v | (v << 2)) & 0x3333_3333;
    v = (v | (v << 1)) & 0x5555_5555;
    v
}

/// Inverse of [`spread_bits`]: gathers the even bit positions.
#[inline]
pub fn compact_bits(v: u32) -> u32 {
    let mut v = v & 0x5555_5555;
    v = (v | (v >> 1)) & 0x3333_3333;
    v = (v | (v >> 2)) & 0x0f0f_0f0f;
    v = (v | (v >> 4)) & 0x00ff_00ff;
    v = (v | (v >> 8)) & 0x0000_ffff;
    v
}

#[inline]
pub fn z_encode(p: GridPoint) -> u32 {
    (spread_bits(p.x) << 1) | spread_bits(p.y)
}

#[inline]
pub fn z_decode(t: u32) -> GridPoint {
    GridPoint::new(compact_bits(t >> 1), compact_bits(t))
}

/// Binary reflected Gray code.
#[inline]
pub fn gray(t: u32) -> u32 {
    t ^ (t >> 1)
}

pub(crate) fn z_points(k: u32) -> Vec<GridPoint> {
    (0..1u32 << (2 * k)).map(z_decode).collect()
}

pub(crate) fn gray_points(k: u32) -> Vec<GridPoint> {
    (0..1u32 << (2 * k)).map(|t| z_decode(gray(t))).collect()
}
