//! CSV and JSON persistence.
//!
//! Sample tables start with a `#` version line followed by a CSV header
//! `trial,seed,v_sync,v_async,gap,theta`; an undefined `theta` is an empty
//! field. Histogram tables have columns `bin_lo,bin_hi,count`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::campaign::{Bin, GapSample};
use crate::{Error, Result};

pub const SAMPLES_HEADER: &str = "# coalition-lab gap-samples v1";
pub const HISTOGRAM_HEADER: &str = "# coalition-lab histogram v1";

#[derive(Serialize, Deserialize)]
struct SampleRow {
    trial: usize,
    seed: u64,
    v_sync: f64,
    v_async: f64,
    gap: f64,
    theta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct BinRow {
    bin_lo: f64,
    bin_hi: f64,
    count: usize,
}

fn check_version<R: Read>(mut r: R, expected: &str) -> Result<String> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let first = text.lines().next().unwrap_or("");
    if first.trim_end() != expected {
        return Err(Error::invalid(format!(
            "expected header line '{expected}', found '{first}'"
        )));
    }
    Ok(text)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

pub fn write_samples<W: Write>(mut w: W, samples: &[GapSample]) -> Result<()> {
    writeln!(w, "{SAMPLES_HEADER}")?;
    let mut out = csv::Writer::from_writer(w);
    for s in samples {
        out.serialize(SampleRow {
            trial: s.trial,
            seed: s.game_seed,
            v_sync: s.v_sync,
            v_async: s.v_async,
            gap: s.gap,
            theta: s.theta,
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples<R: Read>(r: R) -> Result<Vec<GapSample>> {
    let text = check_version(r, SAMPLES_HEADER)?;
    csv_reader(&text)
        .deserialize::<SampleRow>()
        .map(|row| {
            let row = row?;
            Ok(GapSample {
                trial: row.trial,
                game_seed: row.seed,
                v_sync: row.v_sync,
                v_async: row.v_async,
                gap: row.gap,
                theta: row.theta,
            })
        })
        .collect()
}

pub fn write_histogram<W: Write>(mut w: W, bins: &[Bin]) -> Result<()> {
    writeln!(w, "{HISTOGRAM_HEADER}")?;
    let mut out = csv::Writer::from_writer(w);
    for b in bins {
        out.serialize(BinRow {
            bin_lo: b.lo,
            bin_hi: b.hi,
            count: b.count,
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_histogram<R: Read>(r: R) -> Result<Vec<Bin>> {
    let text = check_version(r, HISTOGRAM_HEADER)?;
    csv_reader(&text)
        .deserialize::<BinRow>()
        .map(|row| {
            let row = row?;
            Ok(Bin {
                lo: row.bin_lo,
                hi: row.bin_hi,
                count: row.count,
            })
        })
        .collect()
}

pub fn write_samples_file(path: &Path, samples: &[GapSample]) -> Result<()> {
    write_samples(BufWriter::new(File::create(path)?), samples)
}

pub fn read_samples_file(path: &Path) -> Result<Vec<GapSample>> {
    read_samples(File::open(path)?)
}

pub fn write_histogram_file(path: &Path, bins: &[Bin]) -> Result<()> {
    write_histogram(BufWriter::new(File::create(path)?), bins)
}

pub fn read_histogram_file(path: &Path) -> Result<Vec<Bin>> {
    read_histogram(File::open(path)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
