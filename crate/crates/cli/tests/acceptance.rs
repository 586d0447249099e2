//! The bit-exact I/O criterion as a single PASS/FAIL line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ltbq_cli::{container, pnm, run};
use ltbq_core::codec::scheme_for_blocks;
use ltbq_core::{compress, Image};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: [&str; 3] = ["ramp.pgm", "synthetic64.pgm", "color32.ppm"];
const SCHEMES: [(&str, &str); 3] = [("2x2", "2x1"), ("4x4", "2x2"), ("8x8", "5x5")];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn block(s: &str) -> (usize, usize) {
    let (a, b) = s.split_once('x').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

fn check() -> Result<String, String> {
    let mut images = Vec::new();
    for name in CORPUS {
        let bytes = std::fs::read(fixture(name)).map_err(|e| format!("{name}: {e}"))?;
        let img = pnm::decode(&bytes).map_err(|e| format!("{name}: {e}"))?;
        if pnm::encode(&img) != bytes {
            return Err(format!("{name}: PNM bytes differ after decode and encode"));
        }
        images.push((name, img));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (side, channels) in [(16, 1), (32, 3)] {
        for _ in 0..10 {
            let bytes: Vec<u8> = (0..side * side * channels).map(|_| rng.gen()).collect();
            images.push(("random", Image::from_u8(side, side, channels, &bytes).unwrap()));
        }
    }
    let mut containers = 0;
    for (name, img) in &images {
        for (b, c) in SCHEMES {
            let ((a, bb), (cc, d)) = (block(b), block(c));
            let Ok(s) = scheme_for_blocks(img.height(), img.width(), a, bb, cc, d, false) else {
                continue;
            };
            let comp = compress(img, &s).map_err(|e| e.to_string())?;
            let bytes = container::encode(&comp);
            let back = container::decode(&bytes).map_err(|e| format!("{name}: {e}"))?;
            if back != comp || container::encode(&back) != bytes {
                return Err(format!("{name} {b}->{c}: container identity fails"));
            }
            containers += 1;
        }
    }

    let mut roundtrips = 0;
    for name in CORPUS {
        let path = fixture(name);
        for (b, c) in SCHEMES {
            let (a, bb) = block(b);
            let img = &images.iter().find(|(n, _)| *n == name).unwrap().1;
            if img.height() % a != 0 || img.width() % bb != 0 || img.height() / a < 2 || img.width() / bb < 2 {
                continue;
            }
            let mut out = Vec::new();
            let mut err = Vec::new();
            let args = ["ltbq", "roundtrip", "--block", b, "--code", c, "-i", path.to_str().unwrap()];
            let code = run(args, &mut out, &mut err);
            let out = String::from_utf8(out).unwrap();
            if code != 0 || !out.lines().any(|l| l == "LOSSLESS=true") {
                return Err(format!(
                    "{name} {b}->{c}: exit {code}, {}{}",
                    out.trim(),
                    String::from_utf8_lossy(&err).trim()
                ));
            }
            roundtrips += 1;
        }
    }
    Ok(format!(
        "{} PNM fixtures, {containers} containers, {roundtrips} CLI roundtrips with LOSSLESS=true",
        CORPUS.len()
    ))
}

fn main() {
    let start = Instant::now();
    let result = check();
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => println!("PASS criterion 8: bit-exact I/O: {detail} ({secs:.2} s)"),
        Err(detail) => {
            println!("FAIL criterion 8: bit-exact I/O: {detail} ({secs:.2} s)");
            std::process::exit(1);
        }
    }
}
