//! Translation-invariant dilation and erosion on finite rasters.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::tnorm::{tnorm_apply, tnorm_residuum, TNormKind};
use crate::unit::UnitValue;

/// How reads outside the raster behave.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Coordinates wrap around.
    #[default]
    Torus,
    /// Outside reads are `⊥` in dilations and `⊤` in erosions.
    Pad,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus" => Ok(Boundary::Torus),
            "pad" => Ok(Boundary::Pad),
            _ => Err(Error::InvalidParameter(format!("unknown boundary mode `{s}`"))),
        }
    }
}

/// A `width × height` raster, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    width: usize,
    height: usize,
    samples: Vec<UnitValue>,
    boundary: Boundary,
}

impl Grid {
    pub fn new(width: usize, height: usize, samples: Vec<UnitValue>, boundary: Boundary) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimMismatch("grid must be non-empty".into()));
        }
        if samples.len() != width * height {
            return Err(Error::DimMismatch(format!(
                "{} samples for a {width}x{height} grid",
                samples.len()
            )));
        }
        Ok(Grid {
            width,
            height,
            samples,
            boundary,
        })
    }

    pub fn filled(width: usize, height: usize, v: UnitValue, boundary: Boundary) -> Result<Self> {
        Grid::new(width, height, vec![v; width * height], boundary)
    }

    /// A {0,1} grid from a bitmask, bit `y·width + x` for pixel `(x, y)`.
    pub fn from_bits(width: usize, height: usize, bits: u64, boundary: Boundary) -> Result<Self> {
        let samples = (0..width * height)
            .map(|i| if bits >> i & 1 == 1 { UnitValue::ONE } else { UnitValue::ZERO })
            .collect();
        Grid::new(width, height, samples, boundary)
    }

    /// Inverse of [`Grid::from_bits`]; samples other than 1 count as 0.
    pub fn to_bits(&self) -> u64 {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == UnitValue::ONE)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
    pub fn samples(&self) -> &[UnitValue] {
        &self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> UnitValue {
        self.samples[y * self.width + x]
    }

    /// Resolves `(x, y)` to a raster index, wrapping on the torus.
    fn locate(&self, x: i64, y: i64) -> Option<usize> {
        let (w, h) = (self.width as i64, self.height as i64);
        match self.boundary {
            Boundary::Torus => Some((y.rem_euclid(h) * w + x.rem_euclid(w)) as usize),
            Boundary::Pad => ((0..w).contains(&x) && (0..h).contains(&y)).then(|| (y * w + x) as usize),
        }
    }

    pub fn leq(&self, other: &Grid) -> bool {
        self.samples.len() == other.samples.len() && self.samples.iter().zip(&other.samples).all(|(a, b)| a.leq(b))
    }

    fn with_samples(&self, samples: Vec<UnitValue>) -> Grid {
        Grid {
            width: self.width,
            height: self.height,
            samples,
            boundary: self.boundary,
        }
    }
}

/// Weighted offsets `A(a)`; offsets are `(dx, dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuringElement {
    entries: Vec<((i64, i64), UnitValue)>,
}

impl StructuringElement {
    pub fn new(entries: Vec<((i64, i64), UnitValue)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("structuring element has no offsets".into()));
        }
        let mut seen = HashSet::new();
        if let Some((o, _)) = entries.iter().find(|(o, _)| !seen.insert(*o)) {
            return Err(Error::InvalidParameter(format!("offset {o:?} listed twice")));
        }
        Ok(StructuringElement { entries })
    }

    /// Every offset with weight 1.
    pub fn flat(offsets: &[(i64, i64)]) -> Result<Self> {
        Self::new(offsets.iter().map(|&o| (o, UnitValue::ONE)).collect())
    }

    /// The origin and its four neighbours.
    pub fn cross() -> Self {
        Self::flat(&[(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]).expect("distinct offsets")
    }

    pub fn entries(&self) -> &[((i64, i64), UnitValue)] {
        &self.entries
    }

    /// `Ă(a) = A(−a)`.
    pub fn reflection(&self) -> StructuringElement {
        StructuringElement {
            entries: self.entries.iter().map(|&((dx, dy), w)| ((-dx, -dy), w)).collect(),
        }
    }
}

/// Parses `se k` followed by `k` lines `dx dy weight`.
pub fn parse_structuring_element(text: &str) -> Result<StructuringElement> {
    let lines = crate::quantale::content_lines(text);
    let &(no, head) = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let k = match head.split_whitespace().collect::<Vec<_>>()[..] {
        ["se", k] => k.parse::<usize>().map_err(|_| Error::parse(no, "bad offset count"))?,
        _ => return Err(Error::parse(no, "expected `se <k>`")),
    };
    if lines.len() != k + 1 {
        let at = lines.last().map_or(no, |l| l.0);
        return Err(Error::parse(at, format!("expected {k} offset lines, found {}", lines.len() - 1)));
    }
    let entries = lines[1..]
        .iter()
        .map(|&(no, line)| match line.split_whitespace().collect::<Vec<_>>()[..] {
            [dx, dy, w] => Ok((
                (
                    dx.parse().map_err(|_| Error::parse(no, format!("bad offset `{dx}`")))?,
                    dy.parse().map_err(|_| Error::parse(no, format!("bad offset `{dy}`")))?,
                ),
                w.parse::<UnitValue>().map_err(|e| Error::parse(no, e.to_string()))?,
            )),
            _ => Err(Error::parse(no, "expected `dx dy weight`")),
        })
        .collect::<Result<_>>()?;
    StructuringElement::new(entries)
}

/// `τ_h`: the sample at `p + h` is the old sample at `p`.
pub fn translate(g: &Grid, (hx, hy): (i64, i64)) -> Grid {
    let mut out = Vec::with_capacity(g.samples.len());
    for y in 0..g.height as i64 {
        for x in 0..g.width as i64 {
            out.push(g.locate(x - hx, y - hy).map_or(UnitValue::ZERO, |i| g.samples[i]));
        }
    }
    g.with_samples(out)
}

/// `δ_A(X)(y) = ⋁_a A(a) ∗ X(y − a)`.
pub fn dilate(g: &Grid, se: &StructuringElement, kind: TNormKind) -> Result<Grid> {
    let entries: Vec<_> = se.entries.iter().map(|&(o, w)| (o, weight_like(g, w))).collect();
    let mut out = Vec::with_capacity(g.samples.len());
    for y in 0..g.height as i64 {
        for x in 0..g.width as i64 {
            let mut acc = bottom_like(g);
            for &((dx, dy), w) in &entries {
                if let Some(i) = g.locate(x - dx, y - dy) {
                    acc = acc.max(tnorm_apply(kind, w, g.samples[i])?);
                }
            }
            out.push(acc);
        }
    }
    Ok(g.with_samples(out))
}

/// `ε_A(X)(x) = ⋀_a A(a) → X(x + a)`.
pub fn erode(g: &Grid, se: &StructuringElement, kind: TNormKind) -> Result<Grid> {
    let entries: Vec<_> = se.entries.iter().map(|&(o, w)| (o, weight_like(g, w))).collect();
    let mut out = Vec::with_capacity(g.samples.len());
    for y in 0..g.height as i64 {
        for x in 0..g.width as i64 {
            let mut acc = top_like(g);
            for &((dx, dy), w) in &entries {
                if let Some(i) = g.locate(x + dx, y + dy) {
                    acc = acc.min(tnorm_residuum(kind, w, g.samples[i])?);
                }
            }
            out.push(acc);
        }
    }
    Ok(g.with_samples(out))
}

/// Weights follow the grid onto the float backend.
fn weight_like(g: &Grid, w: UnitValue) -> UnitValue {
    if g.samples.iter().all(UnitValue::is_exact) {
        w
    } else {
        w.to_float()
    }
}

fn bottom_like(g: &Grid) -> UnitValue {
    if g.samples.iter().all(UnitValue::is_exact) {
        UnitValue::ZERO
    } else {
        UnitValue::Float(0.0)
    }
}

fn top_like(g: &Grid) -> UnitValue {
    if g.samples.iter().all(UnitValue::is_exact) {
        UnitValue::ONE
    } else {
        UnitValue::Float(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Composite {
    Dilate,
    Erode,
    Open,
    Close,
    Outline,
}

impl std::str::FromStr for Composite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dilate" => Ok(Composite::Dilate),
            "erode" => Ok(Composite::Erode),
            "open" => Ok(Composite::Open),
            "close" => Ok(Composite::Close),
            "outline" => Ok(Composite::Outline),
            _ => Err(Error::InvalidParameter(format!("unknown operation `{s}`"))),
        }
    }
}

/// Opening `δ∘ε`, closing `ε∘δ`, outline `max(0, X − ε(X))`, or a single
/// dilation or erosion.
pub fn composite(g: &Grid, se: &StructuringElement, kind: TNormKind, op: Composite) -> Result<Grid> {
    match op {
        Composite::Dilate => dilate(g, se, kind),
        Composite::Erode => erode(g, se, kind),
        Composite::Open => dilate(&erode(g, se, kind)?, se, kind),
        Composite::Close => erode(&dilate(g, se, kind)?, se, kind),
        Composite::Outline => {
            let e = erode(g, se, kind)?;
            Ok(g.with_samples(
                g.samples
                    .iter()
                    .zip(&e.samples)
                    .map(|(&x, &y)| x.truncated_sub(y))
                    .collect(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixel(w: usize, h: usize, x: usize, y: usize, b: Boundary) -> Grid {
        Grid::from_bits(w, h, 1 << (y * w + x), b).unwrap()
    }

    #[test]
    fn translation() {
        let g = pixel(3, 3, 2, 2, Boundary::Torus);
        assert_eq!(translate(&g, (0, 0)), g);
        assert_eq!(translate(&g, (1, 1)), pixel(3, 3, 0, 0, Boundary::Torus));
        let p = pixel(3, 3, 2, 2, Boundary::Pad);
        assert_eq!(translate(&p, (1, 1)).to_bits(), 0);
    }

    #[test]
    fn dilate_pixel_with_cross() {
        let g = pixel(5, 5, 2, 2, Boundary::Torus);
        let d = dilate(&g, &StructuringElement::cross(), TNormKind::Godel).unwrap();
        let expect = [(2, 2), (1, 2), (3, 2), (2, 1), (2, 3)].iter().fold(0u64, |acc, &(x, y)| acc | 1 << (y * 5 + x));
        assert_eq!(d.to_bits(), expect);
        let back = erode(&d, &StructuringElement::cross(), TNormKind::Godel).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn constants() {
        let c = UnitValue::exact(2, 5).unwrap();
        let g = Grid::filled(4, 4, c, Boundary::Torus).unwrap();
        let se = StructuringElement::new(vec![((0, 0), UnitValue::ONE), ((1, 0), UnitValue::exact(1, 2).unwrap())]).unwrap();
        assert_eq!(dilate(&g, &se, TNormKind::Lukasiewicz).unwrap(), g);
        let top = Grid::filled(3, 3, UnitValue::ONE, Boundary::Pad).unwrap();
        assert_eq!(erode(&top, &se, TNormKind::Lukasiewicz).unwrap(), top);
        assert_eq!(composite(&top, &se, TNormKind::Lukasiewicz, Composite::Close).unwrap(), top);
        let bot = Grid::filled(3, 3, UnitValue::ZERO, Boundary::Pad).unwrap();
        assert_eq!(composite(&bot, &se, TNormKind::Godel, Composite::Open).unwrap(), bot);
    }

    #[test]
    fn outline_of_pixel_is_pixel() {
        let g = pixel(3, 3, 1, 1, Boundary::Torus);
        let o = composite(&g, &StructuringElement::cross(), TNormKind::Godel, Composite::Outline).unwrap();
        assert_eq!(o, g);
    }

    #[test]
    fn product_needs_float_samples() {
        let g = pixel(3, 3, 1, 1, Boundary::Torus);
        assert!(matches!(
            dilate(&g, &StructuringElement::cross(), TNormKind::Product),
            Err(Error::BackendMismatch(_))
        ));
    }

    #[test]
    fn product_on_floats() {
        let g = Grid::new(2, 1, vec![UnitValue::float(0.5).unwrap(), UnitValue::float(1.0).unwrap()], Boundary::Torus).unwrap();
        let se = StructuringElement::new(vec![((1, 0), UnitValue::exact(1, 2).unwrap())]).unwrap();
        let d = dilate(&g, &se, TNormKind::Product).unwrap();
        assert!((d.get(0, 0).to_f64() - 0.5).abs() < 1e-12);
        assert!((d.get(1, 0).to_f64() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn se_text() {
        let se = parse_structuring_element("se 2\n0 0 1\n-1 1 1/2\n").unwrap();
        assert_eq!(se.entries()[1], ((-1, 1), UnitValue::exact(1, 2).unwrap()));
        assert!(parse_structuring_element("se 2\n0 0 1\n").is_err());
        assert!(parse_structuring_element("se 0\n").is_err());
        assert_eq!(se.reflection().entries()[1].0, (1, -1));
    }
}
