//! Netpbm bitmaps (PBM, `P1`/`P4`) and graymaps (PGM, `P2`/`P5`).
//!
//! Pixels are flattened row-major. PBM bits are kept as stored (1 = black);
//! PGM samples are mapped linearly to `[0, 1]` by `maxval`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lshstats::BitVector;

use super::{BitMessage, GrayMessage};

/// Upper bound on `width * height` accepted from a header.
pub const MAX_PIXELS: usize = 1 << 28;

const KIND: &str = "netpbm image";

/// A decoded netpbm image.
#[derive(Debug, Clone, PartialEq)]
pub enum Image {
    Bit(BitMessage),
    Gray(GrayMessage),
}

impl Image {
    pub fn width(&self) -> usize {
        match self {
            Image::Bit(m) => m.width(),
            Image::Gray(m) => m.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Image::Bit(m) => m.height(),
            Image::Gray(m) => m.height(),
        }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::format(KIND, msg)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(malformed(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed(format!("{what} out of range")))
    }

    /// The single whitespace byte separating the header from a binary raster.
    fn raster_separator(&mut self) -> Result<()> {
        match self.data.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(malformed("missing whitespace before raster")),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }
}

fn dimensions(cur: &mut Cursor<'_>) -> Result<(usize, usize)> {
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(malformed(format!("empty image {width}x{height}")));
    }
    match width.checked_mul(height) {
        Some(p) if p <= MAX_PIXELS => Ok((width, height)),
        _ => Err(malformed(format!("image size {width}x{height} overflows"))),
    }
}

fn maxval(cur: &mut Cursor<'_>) -> Result<u32> {
    let m = cur.number("maxval")?;
    if m == 0 || m > 65535 {
        return Err(malformed(format!("unsupported maxval {m}")));
    }
    Ok(m as u32)
}

/// Parses any of `P1`, `P2`, `P4`, `P5`.
pub fn decode(data: &[u8]) -> Result<Image> {
    if data.len() < 2 || data[0] != b'P' {
        return Err(malformed("missing P magic"));
    }
    let magic = data[1];
    let mut cur = Cursor { data, pos: 2 };
    match magic {
        b'1' => {
            let (w, h) = dimensions(&mut cur)?;
            let mut bits = Vec::with_capacity(w * h);
            while bits.len() < w * h {
                cur.skip_space_and_comments();
                match cur.data.get(cur.pos) {
                    Some(b'0') => bits.push(false),
                    Some(b'1') => bits.push(true),
                    Some(&b) => return Err(malformed(format!("bad P1 pixel byte {b:#x}"))),
                    None => return Err(malformed("truncated P1 raster")),
                }
                cur.pos += 1;
            }
            Ok(Image::Bit(BitMessage::new(bits.into(), w, h)?))
        }
        b'4' => {
            let (w, h) = dimensions(&mut cur)?;
            cur.raster_separator()?;
            let stride = w.div_ceil(8);
            let raster = cur.rest();
            if raster.len() < stride * h {
                return Err(malformed("truncated P4 raster"));
            }
            let bits: Vec<bool> = (0..h)
                .flat_map(|r| {
                    let row = &raster[r * stride..(r + 1) * stride];
                    (0..w).map(move |c| row[c / 8] & (0x80 >> (c % 8)) != 0)
                })
                .collect();
            Ok(Image::Bit(BitMessage::new(bits.into(), w, h)?))
        }
        b'2' => {
            let (w, h) = dimensions(&mut cur)?;
            let max = maxval(&mut cur)?;
            let mut levels = Vec::with_capacity(w * h);
            for _ in 0..w * h {
                let v = cur.number("P2 sample")?;
                if v > max as usize {
                    return Err(malformed(format!("sample {v} exceeds maxval {max}")));
                }
                levels.push(v as f64 / max as f64);
            }
            Ok(Image::Gray(GrayMessage::new(levels, w, h)?))
        }
        b'5' => {
            let (w, h) = dimensions(&mut cur)?;
            let max = maxval(&mut cur)?;
            cur.raster_separator()?;
            let raster = cur.rest();
            let bytes_per = if max < 256 { 1 } else { 2 };
            if raster.len() < w * h * bytes_per {
                return Err(malformed("truncated P5 raster"));
            }
            let mut levels = Vec::with_capacity(w * h);
            for i in 0..w * h {
                let v = if bytes_per == 1 {
                    raster[i] as u32
                } else {
                    u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]) as u32
                };
                if v > max {
                    return Err(malformed(format!("sample {v} exceeds maxval {max}")));
                }
                levels.push(v as f64 / max as f64);
            }
            Ok(Image::Gray(GrayMessage::new(levels, w, h)?))
        }
        other => Err(malformed(format!("unsupported format P{}", other as char))),
    }
}

/// Binary PBM (`P4`).
pub fn encode_pbm(m: &BitMessage) -> Vec<u8> {
    let (w, h) = (m.width(), m.height());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let stride = w.div_ceil(8);
    let bits = m.bits().as_slice();
    for r in 0..h {
        let mut row = vec![0u8; stride];
        for c in 0..w {
            if bits[r * w + c] {
                row[c / 8] |= 0x80 >> (c % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

/// ASCII PBM (`P1`).
pub fn encode_pbm_ascii(m: &BitMessage) -> Vec<u8> {
    let (w, h) = (m.width(), m.height());
    let mut out = format!("P1\n{w} {h}\n");
    for row in m.bits().as_slice().chunks(w) {
        let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

fn quantize(level: f64, maxval: u32) -> u32 {
    (level.clamp(0.0, 1.0) * maxval as f64).round() as u32
}

fn check_maxval(maxval: u32) -> Result<()> {
    if maxval == 0 || maxval > 65535 {
        return Err(Error::InvalidParameter(format!("unsupported maxval {maxval}")));
    }
    Ok(())
}

/// Binary PGM (`P5`); levels are clamped to `[0, 1]` and rounded.
pub fn encode_pgm(m: &GrayMessage, maxval: u32) -> Result<Vec<u8>> {
    check_maxval(maxval)?;
    let mut out = format!("P5\n{} {}\n{maxval}\n", m.width(), m.height()).into_bytes();
    for &l in m.levels() {
        let v = quantize(l, maxval);
        if maxval < 256 {
            out.push(v as u8);
        } else {
            out.extend_from_slice(&(v as u16).to_be_bytes());
        }
    }
    Ok(out)
}

/// ASCII PGM (`P2`).
pub fn encode_pgm_ascii(m: &GrayMessage, maxval: u32) -> Result<Vec<u8>> {
    check_maxval(maxval)?;
    let mut out = format!("P2\n{} {}\n{maxval}\n", m.width(), m.height());
    for row in m.levels().chunks(m.width()) {
        let line: Vec<String> = row.iter().map(|&l| quantize(l, maxval).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    decode(&fs::read(path)?)
}

/// Writes `P4` for bit images and `P5` with maxval 255 for gray images.
pub fn save_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let bytes = match image {
        Image::Bit(m) => encode_pbm(m),
        Image::Gray(m) => encode_pgm(m, 255)?,
    };
    fs::write(path, bytes)?;
    Ok(())
}

/// Convenience: packs raw bits as a `width x height` bitmap.
pub fn bitmap(bits: Vec<bool>, width: usize, height: usize) -> Result<BitMessage> {
    BitMessage::new(BitVector::new(bits), width, height)
}
