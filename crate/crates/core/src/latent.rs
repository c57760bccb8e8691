//! Quantized latent tensors: the uniform quantizer, the per-channel zig-zag
//! linearization and the QLT1 file format.

use std::io::{Read, Write};

use thiserror::Error;

use crate::coders::Symbol;

#[derive(Debug, Error)]
pub enum LatentError {
    #[error("quantization step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("tensor dimensions must be positive, got {0}x{1}x{2}")]
    InvalidDims(u32, u32, u32),
    #[error("expected {expected} indices, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("index {0} out of range (|k| <= 32767)")]
    IndexOutOfRange(i64),
    #[error("{got} symbols do not fit a tensor of {capacity} entries")]
    Overflow { got: usize, capacity: usize },
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported QLT version {0}")]
    UnsupportedVersion(String),
    #[error("truncated QLT file: {0}")]
    Truncated(&'static str),
    #[error("QLT file has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `Q(z) = q·floor(z/q + 1/2)`, returned as the index and the value.
pub fn quantize(z: f64, q: f64) -> Result<(i64, f64), LatentError> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(LatentError::InvalidStep(q));
    }
    let k = (z / q + 0.5).floor();
    Ok((k as i64, q * k))
}

/// A quantized latent tensor stored as integer indices plus the step `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentTensor {
    channels: u32,
    height: u32,
    width: u32,
    step: f32,
    indices: Vec<Symbol>,
}

impl LatentTensor {
    pub const MAX_ABS_INDEX: i64 = 32767;

    pub fn new(dims: (u32, u32, u32), step: f32, indices: Vec<Symbol>) -> Result<Self, LatentError> {
        let (c, h, w) = dims;
        if c == 0 || h == 0 || w == 0 {
            return Err(LatentError::InvalidDims(c, h, w));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(LatentError::InvalidStep(step as f64));
        }
        let expected = c as usize * h as usize * w as usize;
        if indices.len() != expected {
            return Err(LatentError::LengthMismatch { expected, actual: indices.len() });
        }
        if let Some(&k) = indices.iter().find(|&&k| k == Symbol::MIN) {
            return Err(LatentError::IndexOutOfRange(k as i64));
        }
        Ok(LatentTensor { channels: c, height: h, width: w, step, indices })
    }

    pub fn zeros(dims: (u32, u32, u32), step: f32) -> Result<Self, LatentError> {
        let n = dims.0 as usize * dims.1 as usize * dims.2 as usize;
        Self::new(dims, step, vec![0; n])
    }

    /// Quantizes real latent values given in channel-major, row-major order.
    pub fn quantize_values(dims: (u32, u32, u32), step: f32, values: &[f32]) -> Result<Self, LatentError> {
        let indices = values
            .iter()
            .map(|&z| {
                let (k, _) = quantize(z as f64, step as f64)?;
                if k.abs() > Self::MAX_ABS_INDEX {
                    return Err(LatentError::IndexOutOfRange(k));
                }
                Ok(k as Symbol)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims, step, indices)
    }

    pub fn dims(&self) -> (u32, u32, u32) {
        (self.channels, self.height, self.width)
    }

    pub fn step(&self) -> f32 {
        self.step
    }

    pub fn indices(&self) -> &[Symbol] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn get(&self, channel: u32, row: u32, col: u32) -> Symbol {
        self.indices[self.offset(channel, row, col)]
    }

    fn offset(&self, channel: u32, row: u32, col: u32) -> usize {
        (channel as usize * self.height as usize + row as usize) * self.width as usize + col as usize
    }

    /// Dequantized values `q·k`.
    pub fn values(&self) -> Vec<f32> {
        self.indices.iter().map(|&k| self.step * k as f32).collect()
    }

    pub fn read_qlt<R: Read>(reader: R) -> Result<Self, LatentError> {
        read_qlt(reader)
    }

    pub fn write_qlt<W: Write>(&self, writer: W) -> Result<(), LatentError> {
        write_qlt(self, writer)
    }
}

/// Zig-zag visiting order of an `h × w` plane as row-major offsets.
///
/// Anti-diagonal `d = row + col` runs from 0 to `h + w - 2`; even diagonals
/// go from high row to low row, odd diagonals from low row to high row.
pub fn zigzag_order(height: usize, width: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(height * width);
    if height == 0 || width == 0 {
        return order;
    }
    for d in 0..(height + width - 1) {
        let row_lo = d.saturating_sub(width - 1);
        let row_hi = d.min(height - 1);
        if d % 2 == 0 {
            for row in (row_lo..=row_hi).rev() {
                order.push(row * width + (d - row));
            }
        } else {
            for row in row_lo..=row_hi {
                order.push(row * width + (d - row));
            }
        }
    }
    order
}

pub fn zigzag_scan(tensor: &LatentTensor) -> Vec<Symbol> {
    let (c, h, w) = tensor.dims();
    let plane = h as usize * w as usize;
    let order = zigzag_order(h as usize, w as usize);
    let mut out = Vec::with_capacity(tensor.len());
    for ch in 0..c as usize {
        let base = ch * plane;
        out.extend(order.iter().map(|&off| tensor.indices[base + off]));
    }
    out
}

/// Fills a zero tensor of `dims` in scan order. Shorter inputs leave the
/// trailing scan positions at zero.
pub fn zigzag_unscan(symbols: &[Symbol], dims: (u32, u32, u32), step: f32) -> Result<LatentTensor, LatentError> {
    let mut tensor = LatentTensor::zeros(dims, step)?;
    if symbols.len() > tensor.len() {
        return Err(LatentError::Overflow { got: symbols.len(), capacity: tensor.len() });
    }
    let (_, h, w) = dims;
    let plane = h as usize * w as usize;
    let order = zigzag_order(h as usize, w as usize);
    for (i, &s) in symbols.iter().enumerate() {
        if s == Symbol::MIN {
            return Err(LatentError::IndexOutOfRange(s as i64));
        }
        tensor.indices[(i / plane) * plane + order[i % plane]] = s;
    }
    Ok(tensor)
}

pub const QLT_MAGIC: [u8; 4] = *b"QLT1";
pub const QLT_VERSION: u8 = 1;
const QLT_HEADER_LEN: usize = 4 + 1 + 12 + 4;

pub fn write_qlt<W: Write>(tensor: &LatentTensor, mut writer: W) -> Result<(), LatentError> {
    let mut buf = Vec::with_capacity(QLT_HEADER_LEN + 2 * tensor.len());
    buf.extend_from_slice(&QLT_MAGIC);
    buf.push(QLT_VERSION);
    for d in [tensor.channels, tensor.height, tensor.width] {
        buf.extend_from_slice(&d.to_le_bytes());
    }
    buf.extend_from_slice(&tensor.step.to_le_bytes());
    for &k in &tensor.indices {
        buf.extend_from_slice(&k.to_le_bytes());
    }
    writer.write_all(&buf)?;
    Ok(())
}

pub fn read_qlt<R: Read>(mut reader: R) -> Result<LatentTensor, LatentError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() < 4 {
        return Err(LatentError::Truncated("magic"));
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("four bytes");
    if magic[..3] != QLT_MAGIC[..3] {
        return Err(LatentError::BadMagic(magic));
    }
    if magic[3] != QLT_MAGIC[3] {
        return Err(LatentError::UnsupportedVersion(format!("QLT{}", magic[3] as char)));
    }
    if bytes.len() < QLT_HEADER_LEN {
        return Err(LatentError::Truncated("header"));
    }
    if bytes[4] != QLT_VERSION {
        return Err(LatentError::UnsupportedVersion(bytes[4].to_string()));
    }
    let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("four bytes"));
    let dims = (u32_at(5), u32_at(9), u32_at(13));
    let step = f32::from_le_bytes(bytes[17..21].try_into().expect("four bytes"));
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return Err(LatentError::InvalidDims(dims.0, dims.1, dims.2));
    }
    let count = dims.0 as u64 * dims.1 as u64 * dims.2 as u64;
    let body = &bytes[QLT_HEADER_LEN..];
    let needed = count.saturating_mul(2);
    if (body.len() as u64) < needed {
        return Err(LatentError::Truncated("indices"));
    }
    if body.len() as u64 > needed {
        return Err(LatentError::TrailingBytes(body.len() - needed as usize));
    }
    let indices = body.chunks_exact(2).map(|c| i16::from_le_bytes([c[0], c[1]])).collect();
    LatentTensor::new(dims, step, indices)
}
