//! Minimal RIFF/WAVE codec: mono 16 kHz, PCM 16-bit or IEEE float 32-bit in,
//! PCM 16-bit out.

use std::fs;
use std::path::Path;

use super::{AudioClip, SAMPLE_RATE};
use crate::error::{Error, Result, WavError};

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;

pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_wav(&bytes)
}

pub fn save_wav(clip: &AudioClip, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_wav(clip)).map_err(|e| Error::io(path, e))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WavError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(WavError::Truncated {
                offset: self.bytes.len(),
            }),
        }
    }

    fn u16(&mut self) -> Result<u16, WavError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, WavError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

struct Fmt {
    format: u16,
    channels: u16,
    rate: u32,
    bits: u16,
}

pub fn decode_wav(bytes: &[u8]) -> Result<AudioClip> {
    let mut cur = Cursor { bytes, pos: 0 };
    let riff = cur.take(4).map_err(|_| WavError::NotRiff)?;
    let _size = cur.u32().map_err(|_| WavError::NotRiff)?;
    let wave = cur.take(4).map_err(|_| WavError::NotRiff)?;
    if riff != b"RIFF" || wave != b"WAVE" {
        return Err(WavError::NotRiff.into());
    }

    let mut fmt: Option<Fmt> = None;
    loop {
        if cur.pos >= bytes.len() {
            return Err(if fmt.is_none() {
                WavError::MissingChunk("fmt ")
            } else {
                WavError::MissingChunk("data")
            }
            .into());
        }
        let id = cur.take(4)?;
        let size = cur.u32()? as usize;
        match id {
            b"fmt " => {
                let body = cur.take(size)?;
                let mut f = Cursor {
                    bytes: body,
                    pos: 0,
                };
                let format = f.u16()?;
                let channels = f.u16()?;
                let rate = f.u32()?;
                let _byte_rate = f.u32()?;
                let _align = f.u16()?;
                let bits = f.u16()?;
                fmt = Some(Fmt {
                    format,
                    channels,
                    rate,
                    bits,
                });
            }
            b"data" => {
                let fmt = fmt.ok_or(WavError::MissingChunk("fmt "))?;
                check_fmt(&fmt)?;
                let start = cur.pos;
                let data = cur.take(size).map_err(|_| WavError::Truncated {
                    offset: bytes.len().max(start),
                })?;
                return samples_from(&fmt, data, start);
            }
            _ => {
                cur.take(size)?;
            }
        }
        // chunks are word aligned
        if size % 2 == 1 && cur.pos < bytes.len() {
            cur.take(1)?;
        }
    }
}

fn check_fmt(fmt: &Fmt) -> Result<(), WavError> {
    let supported = matches!(
        (fmt.format, fmt.bits),
        (FORMAT_PCM, 16) | (FORMAT_FLOAT, 32)
    );
    if !supported {
        return Err(WavError::Encoding {
            format: fmt.format,
            bits: fmt.bits,
        });
    }
    if fmt.channels != 1 {
        return Err(WavError::Channels(fmt.channels));
    }
    if fmt.rate != SAMPLE_RATE {
        return Err(WavError::SampleRate(fmt.rate));
    }
    Ok(())
}

fn samples_from(fmt: &Fmt, data: &[u8], start: usize) -> Result<AudioClip> {
    let width = usize::from(fmt.bits / 8);
    if !data.len().is_multiple_of(width) {
        return Err(WavError::Truncated {
            offset: start + data.len(),
        }
        .into());
    }
    let samples: Vec<f32> = if fmt.format == FORMAT_PCM {
        data.chunks_exact(2)
            .map(|b| f32::from(i16::from_le_bytes([b[0], b[1]])) / 32768.0)
            .collect()
    } else {
        data.chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect()
    };
    AudioClip::new(samples, fmt.rate)
}

/// Nearest PCM16 code, halves rounded away from zero, clamped to the range.
pub(crate) fn quantize(s: f32) -> i16 {
    (f64::from(s) * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

pub fn encode_wav(clip: &AudioClip) -> Vec<u8> {
    let data_len = clip.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&clip.sample_rate().to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate() * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in clip.samples() {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    out
}
