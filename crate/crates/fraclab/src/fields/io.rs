//! Field serialization: CSV with a `# n,L,N` header followed by one
//! `index,value` row per node in row-major order. Values are printed
//! with 17 significant digits so a write/read round trip is bit-exact.

use super::{Grid, ScalarField};
use crate::error::{FraclabError, Result};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_field(f: &ScalarField, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let g = f.grid();
    writeln!(
        out,
        "# {},{},{}",
        g.dim(),
        format_f64(g.half_width()),
        g.points_per_axis()
    )?;
    for (i, v) in f.values().iter().enumerate() {
        writeln!(out, "{i},{}", format_f64(*v))?;
    }
    Ok(())
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| FraclabError::Parse("empty field file".into()))??;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| FraclabError::Parse("missing # header".into()))?
        .trim();
    let parts: Vec<&str> = header.split(',').collect();
    if parts.len() != 3 {
        return Err(FraclabError::Parse("header must be `# n,L,N`".into()));
    }
    let n: usize = parts[0]
        .trim()
        .parse()
        .map_err(|e| FraclabError::Parse(format!("bad n: {e}")))?;
    let l: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| FraclabError::Parse(format!("bad L: {e}")))?;
    let nn: usize = parts[2]
        .trim()
        .parse()
        .map_err(|e| FraclabError::Parse(format!("bad N: {e}")))?;
    let grid = Grid::new(n, l, nn)?;
    let mut values = vec![0.0; grid.num_nodes()];
    let mut seen = 0usize;
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .ok_or_else(|| FraclabError::Parse(format!("bad row: {line}")))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|e| FraclabError::Parse(format!("bad index: {e}")))?;
        if idx >= values.len() {
            return Err(FraclabError::Parse(format!("index {idx} out of range")));
        }
        values[idx] = val
            .trim()
            .parse()
            .map_err(|e| FraclabError::Parse(format!("bad value: {e}")))?;
        seen += 1;
    }
    if seen != grid.num_nodes() {
        return Err(FraclabError::Parse(format!(
            "expected {} rows, got {seen}",
            grid.num_nodes()
        )));
    }
    ScalarField::new(grid, values, "loaded")
}
