//! Block image compression with Łukasiewicz transforms.
//!
//! Samples are stored as numerators over a per-image denominator. Inputs
//! start at 255; the codec works at `D = 255·(ab − 1)`, a denominator closed
//! under every operation the transforms use, so the second pass through
//! compress/reconstruct is bit-exact.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::luk::build_coder;
use crate::quantale::FixedLukasiewicz;
use crate::transform::{inverse_apply, transform_apply, Handedness, Kernel};
use crate::tnorm::luk_mul_num;
use crate::unit::Ratio;

/// A gray or RGB image of exact samples `data[c][row][col] / den`, stored
/// channel-planar and row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    den: u64,
    data: Vec<u64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, den: u64, data: Vec<u64>) -> Result<Self> {
        if !(channels == 1 || channels == 3) {
            return Err(Error::InvalidParameter(format!("unsupported channel count {channels}")));
        }
        if den == 0 {
            return Err(Error::InvalidParameter("denominator must be positive".into()));
        }
        if data.len() != width * height * channels {
            return Err(Error::DimMismatch(format!(
                "{} samples for a {width}x{height}x{channels} image",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v > den) {
            return Err(Error::InvalidValue(format!("sample {v}/{den} exceeds 1")));
        }
        Ok(Image {
            width,
            height,
            channels,
            den,
            data,
        })
    }

    /// Normalizes 8-bit samples given pixel-interleaved (as in PNM files).
    pub fn from_u8(width: usize, height: usize, channels: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height * channels {
            return Err(Error::DimMismatch(format!(
                "{} bytes for a {width}x{height}x{channels} image",
                bytes.len()
            )));
        }
        let plane = width * height;
        let mut data = vec![0; bytes.len()];
        for (i, &b) in bytes.iter().enumerate() {
            data[(i % channels) * plane + i / channels] = b as u64;
        }
        Image::new(width, height, channels, 255, data)
    }

    /// Pixel-interleaved bytes; requires denominator 255.
    pub fn to_u8(&self) -> Result<Vec<u8>> {
        if self.den != 255 {
            return Err(Error::InvalidValue(format!(
                "samples are at denominator {}, requantize first",
                self.den
            )));
        }
        let plane = self.width * self.height;
        Ok((0..self.data.len())
            .map(|i| self.data[(i % self.channels) * plane + i / self.channels] as u8)
            .collect())
    }

    /// A constant image.
    pub fn filled(width: usize, height: usize, channels: usize, value: Ratio) -> Result<Self> {
        let den = value.denom();
        Image::new(width, height, channels, den, vec![value.numer(); width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn channels(&self) -> usize {
        self.channels
    }
    pub fn denominator(&self) -> u64 {
        self.den
    }
    pub fn numerators(&self) -> &[u64] {
        &self.data
    }

    pub fn plane(&self, c: usize) -> &[u64] {
        let len = self.width * self.height;
        &self.data[c * len..(c + 1) * len]
    }

    pub fn sample(&self, c: usize, row: usize, col: usize) -> Ratio {
        let v = self.plane(c)[row * self.width + col];
        Ratio::reduced(v as u128, self.den as u128)
    }

    /// One channel as a gray image.
    pub fn channel(&self, c: usize) -> Image {
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            den: self.den,
            data: self.plane(c).to_vec(),
        }
    }

    /// Stacks gray images of equal size and denominator into one image.
    pub fn from_channels(planes: &[Image]) -> Result<Image> {
        let first = planes
            .first()
            .ok_or_else(|| Error::InvalidParameter("no channels".into()))?;
        if planes
            .iter()
            .any(|p| p.channels != 1 || p.width != first.width || p.height != first.height || p.den != first.den)
        {
            return Err(Error::DimMismatch("channels differ in size or denominator".into()));
        }
        let data = planes.iter().flat_map(|p| p.data.iter().copied()).collect();
        Image::new(first.width, first.height, planes.len(), first.den, data)
    }

    /// The same samples over another denominator, if representable.
    pub fn rescale(&self, den: u64) -> Result<Image> {
        if den == self.den {
            return Ok(self.clone());
        }
        let data = self
            .data
            .iter()
            .map(|&v| {
                let num = v as u128 * den as u128;
                if num.is_multiple_of(self.den as u128) {
                    Ok((num / self.den as u128) as u64)
                } else {
                    Err(Error::InvalidValue(format!(
                        "{v}/{} is not a multiple of 1/{den}",
                        self.den
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Image::new(self.width, self.height, self.channels, den, data)
    }

    /// Nearest multiple of 1/255, ties rounded up.
    pub fn requantize(&self) -> Image {
        let d = self.den as u128;
        let data = self
            .data
            .iter()
            .map(|&v| ((2 * v as u128 * 255 + d) / (2 * d)) as u64)
            .collect();
        Image {
            width: self.width,
            height: self.height,
            channels: self.channels,
            den: 255,
            data,
        }
    }

    /// Pixelwise `≤`, exact.
    pub fn leq(&self, other: &Image) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .all(|(&a, &b)| a as u128 * other.den as u128 <= b as u128 * self.den as u128))
    }

    /// `c ⊙ x` on every sample; `c` must be a multiple of `1/den`.
    pub fn darken(&self, c: Ratio) -> Result<Image> {
        let k = c.numerator_at(self.den).ok_or_else(|| {
            Error::InvalidValue(format!("{c} is not a multiple of 1/{}", self.den))
        })?;
        let data = self.data.iter().map(|&v| luk_mul_num(k, v, self.den)).collect();
        Image::new(self.width, self.height, self.channels, self.den, data)
    }

    /// Value equality regardless of denominator.
    pub fn same_values(&self, other: &Image) -> bool {
        self.check_same_shape(other).is_ok()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| a as u128 * other.den as u128 == b as u128 * self.den as u128)
    }

    fn check_same_shape(&self, other: &Image) -> Result<()> {
        if (self.width, self.height, self.channels) != (other.width, other.height, other.channels) {
            return Err(Error::DimMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )));
        }
        Ok(())
    }
}

/// Sizes of the original (`m × n`) and compressed (`m′ × n′`) planes and of
/// the block grid (`d_m × d_n`), with block sizes `a × b` and `c × d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockScheme {
    pub m: usize,
    pub n: usize,
    pub m2: usize,
    pub n2: usize,
    pub dm: usize,
    pub dn: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Validates a scheme with the grid bounds `1 < d_m ≤ m′`, `1 < d_n ≤ n′`.
pub fn build_scheme(m: usize, n: usize, m2: usize, n2: usize, dm: usize, dn: usize) -> Result<BlockScheme> {
    build_scheme_with(m, n, m2, n2, dm, dn, false)
}

/// As [`build_scheme`]; `permissive` also admits a one-block grid axis.
pub fn build_scheme_with(
    m: usize,
    n: usize,
    m2: usize,
    n2: usize,
    dm: usize,
    dn: usize,
    permissive: bool,
) -> Result<BlockScheme> {
    if [m, n, m2, n2, dm, dn].contains(&0) {
        return Err(Error::InvalidParameter("scheme sizes must be positive".into()));
    }
    for (dim, name, div) in [(m, "m", dm), (m2, "m'", dm), (n, "n", dn), (n2, "n'", dn)] {
        if dim % div != 0 {
            let dname = if name.starts_with('m') { "d_m" } else { "d_n" };
            return Err(Error::DivisibilityViolation(format!("{dname}={div} does not divide {name}={dim}")));
        }
    }
    let lower = if permissive { 1 } else { 2 };
    if dm < lower || dm > m2 {
        return Err(Error::BoundsViolation(format!("d_m={dm} outside [{lower}, {m2}]")));
    }
    if dn < lower || dn > n2 {
        return Err(Error::BoundsViolation(format!("d_n={dn} outside [{lower}, {n2}]")));
    }
    let (a, b, c, d) = (m / dm, n / dn, m2 / dm, n2 / dn);
    if c * d >= a * b {
        return Err(Error::BoundsViolation(format!(
            "compressed blocks {c}x{d} are not smaller than {a}x{b}"
        )));
    }
    Ok(BlockScheme {
        m,
        n,
        m2,
        n2,
        dm,
        dn,
        a,
        b,
        c,
        d,
    })
}

/// The scheme that maps `a × b` blocks of an `m × n` plane to `c × d` blocks.
pub fn scheme_for_blocks(m: usize, n: usize, a: usize, b: usize, c: usize, d: usize, permissive: bool) -> Result<BlockScheme> {
    if [a, b, c, d].contains(&0) {
        return Err(Error::InvalidParameter("block sizes must be positive".into()));
    }
    if !m.is_multiple_of(a) || !n.is_multiple_of(b) {
        return Err(Error::DivisibilityViolation(format!("{a}x{b} blocks do not tile {m}x{n}")));
    }
    let (dm, dn) = (m / a, n / b);
    build_scheme_with(m, n, c * dm, d * dn, dm, dn, permissive)
}

impl BlockScheme {
    /// `ρ = cd / ab`.
    pub fn ratio(&self) -> f64 {
        (self.c * self.d) as f64 / (self.a * self.b) as f64
    }

    /// `D = 255·(ab − 1)`.
    pub fn denominator(&self) -> u64 {
        255 * (self.a * self.b - 1) as u64
    }
}

/// Splits a `rows × cols` plane into a row-major grid of `a × b` blocks.
pub fn block_split<T: Clone>(plane: &[T], rows: usize, cols: usize, a: usize, b: usize) -> Result<Vec<Vec<Vec<T>>>> {
    if plane.len() != rows * cols || a == 0 || b == 0 || !rows.is_multiple_of(a) || !cols.is_multiple_of(b) {
        return Err(Error::DimMismatch(format!(
            "{} samples as {rows}x{cols} in {a}x{b} blocks",
            plane.len()
        )));
    }
    let mut blocks = Vec::with_capacity((rows / a) * (cols / b));
    for i in 0..rows / a {
        for j in 0..cols / b {
            blocks.push(
                (0..a)
                    .map(|k| plane[(i * a + k) * cols + j * b..(i * a + k) * cols + (j + 1) * b].to_vec())
                    .collect(),
            );
        }
    }
    Ok(blocks)
}

/// Inverse of [`block_split`] for a `dm × dn` grid of equal blocks.
pub fn block_join<T: Clone>(blocks: &[Vec<Vec<T>>], dm: usize, dn: usize) -> Result<Vec<T>> {
    if blocks.len() != dm * dn || blocks.is_empty() {
        return Err(Error::DimMismatch(format!("{} blocks for a {dm}x{dn} grid", blocks.len())));
    }
    let a = blocks[0].len();
    let b = blocks[0].first().map_or(0, Vec::len);
    if blocks.iter().any(|blk| blk.len() != a || blk.iter().any(|r| r.len() != b)) {
        return Err(Error::DimMismatch("blocks differ in size".into()));
    }
    let mut out = Vec::with_capacity(dm * dn * a * b);
    for band in blocks.chunks(dn) {
        for k in 0..a {
            out.extend(band.iter().flat_map(|blk| blk[k].iter().cloned()));
        }
    }
    Ok(out)
}

/// `g_k = block[k div b][k mod b]`.
pub fn vectorize<T: Clone>(block: &[Vec<T>]) -> Vec<T> {
    block.concat()
}

pub fn devectorize<T: Clone>(v: &[T], a: usize, b: usize) -> Result<Vec<Vec<T>>> {
    if v.len() != a * b || b == 0 {
        return Err(Error::DimMismatch(format!("vector of length {} as {a}x{b}", v.len())));
    }
    Ok(v.chunks(b).map(<[T]>::to_vec).collect())
}

/// The compressed planes (`m′ × n′` at denominator `D`) and their scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedImage {
    scheme: BlockScheme,
    image: Image,
}

impl CompressedImage {
    pub fn from_parts(scheme: BlockScheme, image: Image) -> Result<Self> {
        if (image.height, image.width) != (scheme.m2, scheme.n2) || image.den != scheme.denominator() {
            return Err(Error::SchemeMismatch(format!(
                "{}x{} planes at denominator {} do not fit a {}x{} scheme at {}",
                image.height,
                image.width,
                image.den,
                scheme.m2,
                scheme.n2,
                scheme.denominator()
            )));
        }
        Ok(CompressedImage { scheme, image })
    }

    pub fn scheme(&self) -> &BlockScheme {
        &self.scheme
    }
    pub fn image(&self) -> &Image {
        &self.image
    }
}

/// The coder of order `cd` on `I_{ab}` as numerators over `D`.
fn codec_kernel(s: &BlockScheme) -> Result<Kernel<u64>> {
    let coder = build_coder(s.c * s.d, s.a * s.b)?;
    let scale = s.denominator() / (s.a * s.b - 1) as u64;
    Ok(coder.numerator_kernel().map(|v| v * scale))
}

fn map_blocks(
    plane: &[u64],
    (rows, cols): (usize, usize),
    (from_r, from_c): (usize, usize),
    (to_r, to_c): (usize, usize),
    f: impl Fn(&[u64]) -> Result<Vec<u64>> + Sync,
) -> Result<Vec<u64>> {
    let blocks = block_split(plane, rows, cols, from_r, from_c)?;
    let out: Vec<Vec<Vec<u64>>> = blocks
        .par_iter()
        .map(|blk| devectorize(&f(&vectorize(blk))?, to_r, to_c))
        .collect::<Result<_>>()?;
    block_join(&out, rows / from_r, cols / from_c)
}

/// Applies `H` of order `cd` to every vectorized `a × b` block.
pub fn compress(img: &Image, scheme: &BlockScheme) -> Result<CompressedImage> {
    if (img.height, img.width) != (scheme.m, scheme.n) {
        return Err(Error::SchemeMismatch(format!(
            "image is {}x{}, scheme expects {}x{}",
            img.height, img.width, scheme.m, scheme.n
        )));
    }
    let den = scheme.denominator();
    let img = img
        .rescale(den)
        .map_err(|e| Error::SchemeMismatch(format!("samples are not exact at denominator {den}: {e}")))?;
    let q = FixedLukasiewicz::new(den)?;
    let kernel = codec_kernel(scheme)?;
    let mut data = Vec::with_capacity(scheme.m2 * scheme.n2 * img.channels);
    for c in 0..img.channels {
        data.extend(map_blocks(
            img.plane(c),
            (scheme.m, scheme.n),
            (scheme.a, scheme.b),
            (scheme.c, scheme.d),
            |v| transform_apply(&q, &kernel, v, Handedness::Left),
        )?);
    }
    let image = Image::new(scheme.n2, scheme.m2, img.channels, den, data)?;
    Ok(CompressedImage { scheme: *scheme, image })
}

/// Applies `Λ` to every vectorized `c × d` block; samples stay at `D`.
pub fn reconstruct(comp: &CompressedImage, scheme: &BlockScheme) -> Result<Image> {
    if comp.scheme != *scheme {
        return Err(Error::SchemeMismatch("compressed image was produced with another scheme".into()));
    }
    let den = scheme.denominator();
    let q = FixedLukasiewicz::new(den)?;
    let kernel = codec_kernel(scheme)?;
    let img = &comp.image;
    let mut data = Vec::with_capacity(scheme.m * scheme.n * img.channels);
    for c in 0..img.channels {
        data.extend(map_blocks(
            img.plane(c),
            (scheme.m2, scheme.n2),
            (scheme.c, scheme.d),
            (scheme.a, scheme.b),
            |v| inverse_apply(&q, &kernel, v, Handedness::Left),
        )?);
    }
    Image::new(scheme.n, scheme.m, img.channels, den, data)
}

/// `reconstruct ∘ compress`.
pub fn pipeline(img: &Image, scheme: &BlockScheme) -> Result<Image> {
    reconstruct(&compress(img, scheme)?, scheme)
}

/// Error measures on the 0–255 scale, pooled over channels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub mse: f64,
    pub rmse: f64,
    /// `+∞` for identical images.
    pub psnr: f64,
}

pub fn metrics(a: &Image, b: &Image) -> Result<Metrics> {
    a.check_same_shape(b)?;
    let (da, db) = (a.den as i128, b.den as i128);
    let scale = 255.0 / (da * db) as f64;
    let sum: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| {
            let diff = (x as i128 * db - y as i128 * da) as f64 * scale;
            diff * diff
        })
        .sum();
    let mse = sum / a.data.len().max(1) as f64;
    let rmse = mse.sqrt();
    let psnr = if rmse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (255.0 / rmse).log10()
    };
    Ok(Metrics { mse, rmse, psnr })
}
