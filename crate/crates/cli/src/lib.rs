//! The `ltbq` command line: image codec, morphology, fuzzy transforms,
//! coder classification and algebra law suites.

pub mod container;
pub mod pnm;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use ltbq_core::codec::scheme_for_blocks;
use ltbq_core::fuzzy::parse_partition;
use ltbq_core::module::{module_base_reference, parse_module};
use ltbq_core::morphology::{composite, parse_structuring_element, Composite};
use ltbq_core::quantale::powerset_quantale;
use ltbq_core::transform::parse_kernel;
use ltbq_core::{
    check_module_laws, check_quantale_laws, check_tnorm_laws, classify_coder, compress, f_inverse, f_transform,
    metrics, parse_monoid, parse_quantale, reconstruct, BlockScheme, Boundary, Direction, FiniteQuantale, Grid, Image,
    LawReport, Metrics, TNormKind, UnitValue,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Pnm {
        path: PathBuf,
        source: pnm::PnmError,
    },
    #[error("{path}: {source}")]
    Container {
        path: PathBuf,
        source: container::ContainerError,
    },
    #[error(transparent)]
    Core(#[from] ltbq_core::Error),
    #[error("{0}")]
    Usage(String),
    /// A check ran and reported a failure; the report is already printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ltbq", version, about = "Quantale transforms, the LTB image codec and t-norm morphology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Original block size, e.g. 2x2.
    #[arg(long, value_parser = parse_dims)]
    pub block: (usize, usize),
    /// Compressed block size, e.g. 2x1.
    #[arg(long, value_parser = parse_dims)]
    pub code: (usize, usize),
    /// Allow a single block along an axis.
    #[arg(long)]
    pub permissive: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a PGM/PPM into an exact .ltb container.
    Compress {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Also write the compressed planes as an 8-bit image.
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Reconstruct an 8-bit image from an .ltb container.
    Reconstruct {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Compress and reconstruct, print metrics and check the second pass.
    Roundtrip {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Write the 8-bit reconstruction here.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// RMSE, PSNR and MSE between two images.
    Metrics {
        #[arg(short = 'a')]
        a: PathBuf,
        #[arg(short = 'b')]
        b: PathBuf,
    },
    /// Dilation, erosion and their composites.
    Morph {
        #[arg(long, value_parser = parse_from_str::<Composite>)]
        op: Composite,
        #[arg(long)]
        se: PathBuf,
        #[arg(long, default_value = "godel", value_parser = parse_from_str::<TNormKind>)]
        tnorm: TNormKind,
        #[arg(long, default_value = "torus", value_parser = parse_from_str::<Boundary>)]
        boundary: Boundary,
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Upper or lower fuzzy transform of a node vector, and its inverse.
    Ftransform {
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_parser = parse_from_str::<Direction>)]
        direction: Direction,
        /// Whitespace-separated values on the nodes.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Classify a kernel as coder, normal, strong, orthogonal, orthonormal.
    ClassifyCoder {
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Run a law suite on a quantale, monoid, module or t-norm.
    Laws {
        #[arg(long, conflicts_with_all = ["tnorm", "grid_den"])]
        algebra: Option<PathBuf>,
        #[arg(long, value_parser = parse_from_str::<TNormKind>, requires = "grid_den")]
        tnorm: Option<TNormKind>,
        #[arg(long)]
        grid_den: Option<u64>,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size `{t}`"));
    Ok((p(a)?, p(b)?))
}

fn parse_from_str<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

/// Six significant digits, `%g` style; `inf` for infinity.
pub fn format_sig6(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    trim_zeros(&format!("{v:.*}", (5 - exp) as usize)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_metrics(m: &Metrics) -> String {
    format!(
        "RMSE={} PSNR={} MSE={}",
        format_sig6(m.rmse),
        format_sig6(m.psnr),
        format_sig6(m.mse)
    )
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_image(path: &Path) -> CliResult<Image> {
    pnm::decode(&read_bytes(path)?).map_err(|source| CliError::Pnm {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_image(path: &Path, img: &Image) -> CliResult<()> {
    write_bytes(path, &pnm::encode(img))
}

fn scheme_for(img: &Image, s: &SchemeArgs) -> CliResult<BlockScheme> {
    let ((a, b), (c, d)) = (s.block, s.code);
    Ok(scheme_for_blocks(img.height(), img.width(), a, b, c, d, s.permissive)?)
}

fn print_report(out: &mut dyn Write, report: &LawReport) -> CliResult<()> {
    write!(out, "{report}").map_err(stdout_error)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} law(s) failed", report.failure_count())))
    }
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn show_vec(v: &[UnitValue]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn load_algebra_report(path: &Path) -> CliResult<LawReport> {
    let text = read_text(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    match first.split_whitespace().next() {
        Some("quantale") => Ok(check_quantale_laws(&parse_quantale(&text)?)),
        Some("monoid") => Ok(check_quantale_laws(&powerset_quantale(&parse_monoid(&text)?)?)),
        Some("module") => {
            let base = path.parent().unwrap_or(Path::new(".")).join(module_base_reference(&text)?);
            let q: FiniteQuantale = parse_quantale(&read_text(&base)?)?;
            let q = Arc::new(q);
            let mut report = check_quantale_laws(&q);
            let m = parse_module(&text, q)?;
            report.absorb("module: ", check_module_laws(&m));
            Ok(report)
        }
        _ => Err(CliError::Usage(format!(
            "{}: expected a quantale, monoid or module file",
            path.display()
        ))),
    }
}

fn run_command(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Compress {
            scheme,
            input,
            output,
            preview,
        } => {
            let img = read_image(&input)?;
            let s = scheme_for(&img, &scheme)?;
            let comp = compress(&img, &s)?;
            write_bytes(&output, &container::encode(&comp))?;
            if let Some(p) = preview {
                write_image(&p, &comp.image().requantize())?;
            }
            writeln!(out, "RHO={}", format_sig6(s.ratio())).map_err(stdout_error)?;
        }
        Command::Reconstruct { input, output } => {
            let bytes = read_bytes(&input)?;
            let comp = container::decode(&bytes).map_err(|source| CliError::Container {
                path: input.clone(),
                source,
            })?;
            let img = reconstruct(&comp, comp.scheme())?;
            write_image(&output, &img.requantize())?;
        }
        Command::Roundtrip { scheme, input, output } => {
            let img = read_image(&input)?;
            let s = scheme_for(&img, &scheme)?;
            let first = compress(&img, &s)?;
            let back = reconstruct(&first, &s)?;
            let eight = back.requantize();
            writeln!(out, "{}", format_metrics(&metrics(&img, &eight)?)).map_err(stdout_error)?;
            let second = compress(&back, &s)?;
            let lossless = second == first;
            writeln!(out, "LOSSLESS={lossless}").map_err(stdout_error)?;
            if let Some(p) = output {
                write_image(&p, &eight)?;
            }
            if !lossless {
                return Err(CliError::Failed("second pass differs from the first".into()));
            }
        }
        Command::Metrics { a, b } => {
            let (x, y) = (read_image(&a)?, read_image(&b)?);
            writeln!(out, "{}", format_metrics(&metrics(&x, &y)?)).map_err(stdout_error)?;
        }
        Command::Morph {
            op,
            se,
            tnorm,
            boundary,
            input,
            output,
        } => {
            let se = parse_structuring_element(&read_text(&se)?)?;
            let img = read_image(&input)?;
            let mut planes = Vec::with_capacity(img.channels());
            for c in 0..img.channels() {
                let samples: Vec<UnitValue> = img
                    .plane(c)
                    .iter()
                    .map(|&v| {
                        let x = UnitValue::exact(v, 255).expect("8-bit sample");
                        if tnorm.supports_exact() {
                            x
                        } else {
                            x.to_float()
                        }
                    })
                    .collect();
                let grid = Grid::new(img.width(), img.height(), samples, boundary)?;
                let res = composite(&grid, &se, tnorm, op)?;
                let bytes: Vec<u8> = res.samples().iter().map(to_byte).collect();
                planes.push(Image::from_u8(img.width(), img.height(), 1, &bytes)?);
            }
            write_image(&output, &Image::from_channels(&planes)?)?;
        }
        Command::Ftransform {
            partition,
            direction,
            values,
        } => {
            let part = parse_partition(&read_text(&partition)?)?;
            let f = values
                .split_whitespace()
                .map(|t| t.parse::<UnitValue>())
                .collect::<Result<Vec<_>, _>>()?;
            let big_f = f_transform(&part, &f, direction)?;
            let back = f_inverse(&part, &big_f, direction)?;
            writeln!(out, "TRANSFORM {}", show_vec(&big_f)).map_err(stdout_error)?;
            writeln!(out, "INVERSE {}", show_vec(&back)).map_err(stdout_error)?;
        }
        Command::ClassifyCoder { kernel } => {
            let (q, k) = parse_kernel(&read_text(&kernel)?)?;
            let c = classify_coder(&q, &k);
            let eps = |w: &Option<Vec<usize>>| match w {
                Some(v) => format!(" EPS={}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
                None => String::new(),
            };
            let text = format!(
                "CODER={}{}\nNORMAL={}{}\nSTRONG={}{}\nORTHOGONAL={}\nORTHONORMAL={}\nCLASS={}\n",
                c.is_coder,
                eps(&c.coder_witness),
                c.is_normal,
                eps(&c.normal_witness),
                c.is_strong,
                eps(&c.strong_witness),
                c.is_orthogonal,
                c.is_orthonormal,
                c.label()
            );
            out.write_all(text.as_bytes()).map_err(stdout_error)?;
        }
        Command::Laws {
            algebra,
            tnorm,
            grid_den,
        } => {
            let report = match (algebra, tnorm, grid_den) {
                (Some(path), _, _) => load_algebra_report(&path)?,
                (None, Some(kind), Some(den)) => check_tnorm_laws(kind, den)?,
                _ => return Err(CliError::Usage("pass --algebra FILE or --tnorm NAME --grid-den N".into())),
            };
            print_report(out, &report)?;
        }
    }
    Ok(())
}

/// Nearest 8-bit level, ties up.
fn to_byte(v: &UnitValue) -> u8 {
    match v.as_exact() {
        Some(r) => ((2 * r.numer() as u128 * 255 + r.denom() as u128) / (2 * r.denom() as u128)) as u8,
        None => (v.to_f64() * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8,
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(f64::INFINITY), "inf");
        assert_eq!(format_sig6(255.0), "255");
        assert_eq!(format_sig6(12.345678), "12.3457");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(0.000012345678), "1.23457e-05");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(999999.7), "1e+06");
    }

    #[test]
    fn dims() {
        assert_eq!(parse_dims("2x1"), Ok((2, 1)));
        assert!(parse_dims("2by1").is_err());
    }

    #[test]
    fn rounding_to_bytes() {
        assert_eq!(to_byte(&UnitValue::exact(1, 510).unwrap()), 1);
        assert_eq!(to_byte(&UnitValue::ONE), 255);
        assert_eq!(to_byte(&UnitValue::float(0.5).unwrap()), 128);
    }
}
