use crate::error::{Error, Result};

/// Dense row-major bit matrix, each row padded to whole `u64` limbs.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    limbs: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            limbs: vec![0; rows * stride],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        debug_assert!(r < self.rows && c < self.cols);
        ((self.limbs[r * self.stride + (c >> 6)] >> (c & 63)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        debug_assert!(r < self.rows && c < self.cols);
        let limb = &mut self.limbs[r * self.stride + (c >> 6)];
        let m = 1u64 << (c & 63);
        if bit & 1 == 1 {
            *limb |= m;
        } else {
            *limb &= !m;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, v ^ 1);
    }

    pub fn count_ones(&self) -> u64 {
        self.limbs.iter().map(|l| l.count_ones() as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Row `r` as bytes, most significant bit first, padded to a whole byte.
    pub fn row_msb_bytes(&self, r: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.cols.div_ceil(8)];
        for c in 0..self.cols {
            if self.get(r, c) == 1 {
                out[c >> 3] |= 0x80 >> (c & 7);
            }
        }
        out
    }

    pub fn write_msb(&self, out: &mut Vec<u8>) {
        for r in 0..self.rows {
            out.extend(self.row_msb_bytes(r));
        }
    }

    /// Reads `rows` rows of `cols` bits each in the layout of [`write_msb`](Self::write_msb).
    pub fn read_msb(rows: usize, cols: usize, bytes: &[u8], format: &'static str) -> Result<Self> {
        let row_bytes = cols.div_ceil(8);
        if bytes.len() != rows * row_bytes {
            return Err(Error::format(
                format,
                format!("expected {} bytes of bit rows, found {}", rows * row_bytes, bytes.len()),
            ));
        }
        let mut m = BitMatrix::zeros(rows, cols);
        for (r, row) in bytes.chunks(row_bytes).enumerate() {
            for c in 0..cols {
                if row[c >> 3] & (0x80 >> (c & 7)) != 0 {
                    m.set(r, c, 1);
                }
            }
            if !cols.is_multiple_of(8) && row[row_bytes - 1] & (0xffu8 >> (cols % 8)) != 0 {
                return Err(Error::format(format, "nonzero padding bits in a row"));
            }
        }
        Ok(m)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(64))
                .map(|c| if self.get(r, c) == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
