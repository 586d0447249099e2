//! The `.ltb` container: the exact compressed planes and their scheme.
//!
//! Layout, all integers little-endian:
//! `"LTBQ"`, version `u8 = 1`, channels `u8`, `u32` m, n, a, b, c, d,
//! `u32` D, then `channels × m′ × n′` `u32` numerators, channel-planar.

use ltbq_core::codec::scheme_for_blocks;
use ltbq_core::{CompressedImage, Image};

pub const MAGIC: &[u8; 4] = b"LTBQ";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 7 * 4;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ContainerError {
    #[error("not an LTB container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    VersionUnsupported(u8),
    #[error("numerator {value} exceeds the denominator {den}")]
    NumeratorOverflow { value: u32, den: u32 },
    #[error("container truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid container header: {0}")]
    InvalidHeader(String),
}

pub fn encode(comp: &CompressedImage) -> Vec<u8> {
    let s = comp.scheme();
    let img = comp.image();
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * img.numerators().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(img.channels() as u8);
    for v in [s.m, s.n, s.a, s.b, s.c, s.d] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&(img.denominator() as u32).to_le_bytes());
    for &v in img.numerators() {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("four bytes"))
}

pub fn decode(bytes: &[u8]) -> Result<CompressedImage, ContainerError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(ContainerError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[4] != VERSION {
        return Err(ContainerError::VersionUnsupported(bytes[4]));
    }
    let channels = bytes[5] as usize;
    let f: Vec<usize> = (0..6).map(|i| u32_at(bytes, 6 + 4 * i) as usize).collect();
    let den = u32_at(bytes, 30);
    let scheme = scheme_for_blocks(f[0], f[1], f[2], f[3], f[4], f[5], true)
        .map_err(|e| ContainerError::InvalidHeader(e.to_string()))?;
    if den as u64 != scheme.denominator() {
        return Err(ContainerError::InvalidHeader(format!(
            "denominator {den} does not match the scheme ({})",
            scheme.denominator()
        )));
    }
    let count = channels * scheme.m2 * scheme.n2;
    let expected = HEADER_LEN + 4 * count;
    if bytes.len() < expected {
        return Err(ContainerError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(ContainerError::InvalidHeader(format!(
            "{} trailing bytes",
            bytes.len() - expected
        )));
    }
    let data = (0..count)
        .map(|i| {
            let v = u32_at(bytes, HEADER_LEN + 4 * i);
            if v > den {
                Err(ContainerError::NumeratorOverflow { value: v, den })
            } else {
                Ok(v as u64)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let image = Image::new(scheme.n2, scheme.m2, channels, den as u64, data)
        .map_err(|e| ContainerError::InvalidHeader(e.to_string()))?;
    CompressedImage::from_parts(scheme, image).map_err(|e| ContainerError::InvalidHeader(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltbq_core::codec::build_scheme_with;
    use ltbq_core::compress;

    fn ramp() -> CompressedImage {
        let s = build_scheme_with(2, 2, 2, 1, 1, 1, true).unwrap();
        let img = Image::from_u8(2, 2, 1, &[255, 170, 85, 0]).unwrap();
        compress(&img, &s).unwrap()
    }

    #[test]
    fn identity() {
        let c = ramp();
        let bytes = encode(&c);
        assert_eq!(bytes.len(), HEADER_LEN + 8);
        assert_eq!(decode(&bytes).unwrap(), c);
    }

    #[test]
    fn corruption() {
        let mut bytes = encode(&ramp());
        bytes[0] = b'X';
        assert_eq!(decode(&bytes), Err(ContainerError::BadMagic));
        let mut bytes = encode(&ramp());
        bytes[4] = 2;
        assert_eq!(decode(&bytes), Err(ContainerError::VersionUnsupported(2)));
        let mut bytes = encode(&ramp());
        let n = bytes.len();
        bytes[n - 4..].copy_from_slice(&10_000u32.to_le_bytes());
        assert_eq!(
            decode(&bytes),
            Err(ContainerError::NumeratorOverflow { value: 10_000, den: 765 })
        );
        let bytes = encode(&ramp());
        assert!(matches!(decode(&bytes[..bytes.len() - 1]), Err(ContainerError::Truncated { .. })));
    }
}
