//! Seeded dataset generation and the `x,y` CSV format.

use std::io::{BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use quadsweep_core::rng::{next_u128, seeded};
use quadsweep_core::Dataset;
use rand::Rng;

/// Default primary seed of the experiment harness.
pub const DEFAULT_PRIMARY_SEED: u128 = 123;

/// `n` points with x and y i.i.d. uniform on [0, 1): all xs are drawn
/// first, then all ys, from ChaCha8 keyed by `seed`.
pub fn generate_dataset(seed: u128, n: usize) -> Result<Dataset> {
    if n == 0 {
        bail!("cannot generate an empty dataset");
    }
    let mut rng = seeded(seed);
    let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let ys: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    Ok(Dataset::new(xs, ys)?)
}

/// Seed of trial `trial_id`: the `trial_id`-th 128-bit draw of the primary
/// stream. Seeking makes it independent of how many trials ran before.
pub fn trial_seed(primary: u128, trial_id: u64) -> u128 {
    let mut rng = seeded(primary);
    // one u128 draw consumes four 32-bit words
    rng.set_word_pos(trial_id as u128 * 4);
    next_u128(&mut rng)
}

pub fn format_seed(seed: u128) -> String {
    format!("0x{seed:032x}")
}

/// Parses a 128-bit hex seed, with or without `0x`.
pub fn parse_hex_seed(s: &str) -> Result<u128> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    if digits.is_empty() || digits.len() > 32 {
        bail!("seed must be 1 to 32 hex digits, got {s:?}");
    }
    u128::from_str_radix(digits, 16).with_context(|| format!("invalid hex seed {s:?}"))
}

/// Decimal, or hex when prefixed with `0x`.
pub fn parse_seed(s: &str) -> Result<u128> {
    let t = s.trim();
    if t.starts_with("0x") || t.starts_with("0X") {
        parse_hex_seed(t)
    } else {
        t.parse::<u128>().with_context(|| format!("invalid seed {s:?}"))
    }
}

pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().context("reading CSV header")?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        bail!("expected CSV header `x,y`, found `{}`", headers.iter().collect::<Vec<_>>().join(","));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.with_context(|| format!("malformed CSV at line {line}"))?;
        if record.len() != 2 {
            bail!("line {line}: expected 2 fields, found {}", record.len());
        }
        let parse = |field: &str| -> Result<f64> {
            let v: f64 = field
                .parse()
                .with_context(|| format!("line {line}: {field:?} is not a number"))?;
            if !v.is_finite() {
                bail!("line {line}: non-finite value {field:?}");
            }
            Ok(v)
        };
        xs.push(parse(&record[0])?);
        ys.push(parse(&record[1])?);
    }
    if xs.is_empty() {
        bail!("CSV contains no points");
    }
    Ok(Dataset::new(xs, ys)?)
}

pub fn read_csv_file(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_csv(file).with_context(|| format!("reading {}", path.display()))
}

/// Header `x,y`, LF line endings, shortest round-tripping decimal notation.
pub fn write_csv<W: Write>(writer: W, data: &Dataset) -> Result<()> {
    let mut w = BufWriter::new(writer);
    w.write_all(b"x,y\n")?;
    for (x, y) in data.points() {
        writeln!(w, "{x},{y}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, data: &Dataset) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(file, data)
}
