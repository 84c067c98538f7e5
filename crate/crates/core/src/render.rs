//! Black-and-white images of cocycle tables (white = 0, black = 1) and
//! Netpbm PBM export.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::bitmatrix::BitMatrix;
use crate::cocycle::CocycleTable;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::fragment::CocycleFragment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitImage {
    pixels: BitMatrix,
}

impl BitImage {
    pub fn new(width: usize, height: usize) -> Self {
        BitImage {
            pixels: BitMatrix::zeros(height, width),
        }
    }

    pub fn from_matrix(pixels: BitMatrix) -> Self {
        BitImage { pixels }
    }

    pub fn width(&self) -> usize {
        self.pixels.cols()
    }

    pub fn height(&self) -> usize {
        self.pixels.rows()
    }

    /// 1 is black.
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels.get(y, x)
    }

    pub fn set(&mut self, x: usize, y: usize, bit: u8) {
        self.pixels.set(y, x, bit);
    }

    pub fn pixels(&self) -> &BitMatrix {
        &self.pixels
    }
}

/// Anything that renders as a cocycle image.
pub trait Render {
    fn to_image(&self) -> BitImage;
}

impl Render for CocycleTable {
    /// Pixel `(r, c)` is `theta(word_r, word_c)` in canonical order.
    fn to_image(&self) -> BitImage {
        BitImage::from_matrix(self.bits().clone())
    }
}

impl Render for CocycleFragment {
    /// The quadrant composite `[[VxV, VxW], [WxV, WxW]]`. A 6+6 split gives
    /// 128x128: the 127x127 grid of `V ∪ W` with W's zero row and column
    /// repeated so the W quadrant starts on a tile boundary.
    fn to_image(&self) -> BitImage {
        BitImage::from_matrix(self.composite())
    }
}

pub fn to_image<R: Render + ?Sized>(source: &R) -> BitImage {
    source.to_image()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmKind {
    /// Binary `P4`.
    Raw,
    /// Plain-text `P1`.
    Plain,
}

pub fn encode_pbm(img: &BitImage, kind: PbmKind) -> Vec<u8> {
    let mut out = Vec::new();
    match kind {
        PbmKind::Raw => {
            out.extend_from_slice(format!("P4\n{} {}\n", img.width(), img.height()).as_bytes());
            img.pixels.write_msb(&mut out);
        }
        PbmKind::Plain => {
            out.extend_from_slice(format!("P1\n{} {}\n", img.width(), img.height()).as_bytes());
            for y in 0..img.height() {
                // lines stay under 70 characters
                let digits: Vec<u8> = (0..img.width()).map(|x| b'0' + img.get(x, y)).collect();
                for chunk in digits.chunks(64) {
                    out.extend_from_slice(chunk);
                    out.push(b'\n');
                }
            }
        }
    }
    out
}

pub fn write_pbm(img: &BitImage, path: impl AsRef<Path>, kind: PbmKind) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_pbm(img, kind))?;
    Ok(())
}

pub fn read_pbm(path: impl AsRef<Path>) -> Result<BitImage> {
    decode_pbm(&fs::read(path)?)
}

/// Parses `P1` or `P4`, including `#` comments in the header.
pub fn decode_pbm(bytes: &[u8]) -> Result<BitImage> {
    const FMT: &str = "PBM";
    let mut pos = 0;
    let token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::format(FMT, "truncated header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = token(&mut pos)?;
    let width: usize = token(&mut pos)?
        .parse()
        .map_err(|_| Error::format(FMT, "bad width"))?;
    let height: usize = token(&mut pos)?
        .parse()
        .map_err(|_| Error::format(FMT, "bad height"))?;
    match magic.as_str() {
        "P4" => {
            // exactly one whitespace byte separates the header from the raster
            let data = bytes
                .get(pos + 1..)
                .ok_or_else(|| Error::format(FMT, "missing raster"))?;
            let pixels = BitMatrix::read_msb(height, width, data, FMT)?;
            Ok(BitImage { pixels })
        }
        "P1" => {
            let mut img = BitImage::new(width, height);
            let mut digits = bytes[pos..].iter().filter(|b| !b.is_ascii_whitespace());
            for y in 0..height {
                for x in 0..width {
                    match digits.next() {
                        Some(b'0') => {}
                        Some(b'1') => img.set(x, y, 1),
                        _ => return Err(Error::format(FMT, "bad or missing P1 pixel")),
                    }
                }
            }
            Ok(img)
        }
        other => Err(Error::format(FMT, format!("unsupported magic '{other}'"))),
    }
}

/// Metric used to rank bases by how regular their cocycle image looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularityMetric {
    /// Fraction of aligned 2x2, 4x4 and 8x8 tiles that are one colour,
    /// averaged over the tile sizes that fit.
    #[default]
    TileMonochrome,
}

pub fn regularity_score(img: &BitImage) -> Result<f64> {
    regularity_score_with(img, RegularityMetric::default())
}

pub fn regularity_score_with(img: &BitImage, metric: RegularityMetric) -> Result<f64> {
    let side = img.width();
    if img.height() != side || !side.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "regularity needs a square image with power-of-two side, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    match metric {
        RegularityMetric::TileMonochrome => {
            let sizes: Vec<usize> = [2, 4, 8].into_iter().filter(|&t| t <= side).collect();
            if sizes.is_empty() {
                return Ok(1.0);
            }
            let total: f64 = sizes.iter().map(|&t| monochrome_fraction(img, t)).sum();
            Ok(total / sizes.len() as f64)
        }
    }
}

fn monochrome_fraction(img: &BitImage, tile: usize) -> f64 {
    let n = img.width() / tile;
    let mut mono = 0usize;
    for ty in 0..n {
        for tx in 0..n {
            let first = img.get(tx * tile, ty * tile);
            let same = (0..tile)
                .all(|dy| (0..tile).all(|dx| img.get(tx * tile + dx, ty * tile + dy) == first));
            mono += same as usize;
        }
    }
    mono as f64 / (n * n) as f64
}

/// First 12 hex digits of SHA-256 over the ordered basis rows.
pub fn basis_hash(code: &Code) -> String {
    let mut h = Sha256::new();
    h.update([code.length() as u8, code.dimension() as u8]);
    for b in code.basis() {
        h.update(b.to_msb_bytes());
    }
    h.finalize().iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// `<code>-<basis-hash>.pbm`.
pub fn image_file_name(code_name: &str, code: &Code) -> String {
    format!("{code_name}-{}.pbm", basis_hash(code))
}
