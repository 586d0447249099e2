//! Binary PGM (P5) and PPM (P6) with maxval 255.

use ltbq_core::Image;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("unsupported maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
}

/// Reads the next header token, skipping whitespace and `#` comments.
fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
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
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    (start < *pos).then(|| &bytes[start..*pos])
}

fn number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<u32, PnmError> {
    let tok = token(bytes, pos).ok_or_else(|| PnmError::MalformedHeader(format!("missing {what}")))?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| PnmError::MalformedHeader(format!("bad {what} `{}`", String::from_utf8_lossy(tok))))
}

pub fn decode(bytes: &[u8]) -> Result<Image, PnmError> {
    let mut pos = 0;
    let channels = match token(bytes, &mut pos) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some(m) => {
            return Err(PnmError::MalformedHeader(format!(
                "unsupported magic `{}`",
                String::from_utf8_lossy(m)
            )))
        }
        None => return Err(PnmError::MalformedHeader("empty file".into())),
    };
    let width = number(bytes, &mut pos, "width")? as usize;
    let height = number(bytes, &mut pos, "height")? as usize;
    let maxval = number(bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(PnmError::MalformedHeader("zero image size".into()));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(PnmError::MalformedHeader("no whitespace after maxval".into())),
    }
    let expected = width * height * channels;
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(PnmError::TruncatedData {
            expected,
            found: data.len(),
        });
    }
    Image::from_u8(width, height, channels, &data[..expected])
        .map_err(|e| PnmError::MalformedHeader(e.to_string()))
}

/// Canonical form: `P5\n<w> <h>\n255\n` followed by the samples. Images not
/// at denominator 255 are requantized first.
pub fn encode(img: &Image) -> Vec<u8> {
    let img = if img.denominator() == 255 {
        img.clone()
    } else {
        img.requantize()
    };
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.to_u8().expect("denominator is 255"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_header() {
        let mut bytes = b"P5 4 4 255\n".to_vec();
        bytes.extend(0..16u8);
        let img = decode(&bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (4, 4, 1));
        assert_eq!(img.numerators()[5], 5);
    }

    #[test]
    fn comments_are_skipped() {
        let mut bytes = b"P5\n# made by hand\n2 1\n255\n".to_vec();
        bytes.extend([7, 9]);
        assert_eq!(decode(&bytes).unwrap().numerators(), &[7, 9]);
    }

    #[test]
    fn errors() {
        assert_eq!(decode(b"P5 1 1 65535\n\0\0"), Err(PnmError::UnsupportedMaxval(65535)));
        assert!(matches!(decode(b"P2 1 1 255\n0"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(decode(b"P5 1 x 255\n0"), Err(PnmError::MalformedHeader(_))));
        assert_eq!(
            decode(b"P6 2 1 255\n\x01\x02"),
            Err(PnmError::TruncatedData { expected: 6, found: 2 })
        );
    }

    #[test]
    fn canonical_identity() {
        let mut bytes = b"P6\n2 1\n255\n".to_vec();
        bytes.extend([1, 2, 3, 250, 251, 252]);
        assert_eq!(encode(&decode(&bytes).unwrap()), bytes);
    }
}
