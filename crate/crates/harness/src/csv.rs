//! CSV output: a header row, then `x,value,value,…` per axis point with
//! values in `{:.16e}` so a parse reproduces them bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::curve::{Curve, Series};
use crate::error::{HarnessError, Result};

pub fn write_csv<W: Write>(curve: &Curve, mut out: W) -> std::io::Result<()> {
    write!(out, "{}", curve.x_label)?;
    for s in &curve.series {
        write!(out, ",{}", s.name)?;
    }
    writeln!(out)?;
    for (i, x) in curve.x.iter().enumerate() {
        write!(out, "{x}")?;
        for s in &curve.series {
            write!(out, ",{:.16e}", s.values[i])?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn emit_csv(curve: &Curve, path: &Path) -> Result<()> {
    let io_err = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(curve, BufWriter::new(file)).map_err(io_err)
}

/// Reads a file written by [`emit_csv`]. Run and divergence counts are not
/// stored and come back as zero.
pub fn read_csv(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |line: usize, reason: String| HarnessError::Csv {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "missing header".into()))?;
    let mut names = header.split(',');
    let x_label = names.next().unwrap_or_default();
    let names: Vec<&str> = names.collect();
    let mut curve = Curve::new(x_label, Vec::new());
    let mut columns = vec![Vec::new(); names.len()];
    for (n, line) in lines.enumerate() {
        let lineno = n + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() + 1 {
            return Err(bad(lineno, format!("expected {} fields, got {}", names.len() + 1, fields.len())));
        }
        curve
            .x
            .push(fields[0].parse().map_err(|e| bad(lineno, format!("x value: {e}")))?);
        for (col, field) in columns.iter_mut().zip(&fields[1..]) {
            col.push(field.parse().map_err(|e| bad(lineno, format!("`{field}`: {e}")))?);
        }
    }
    for (name, values) in names.into_iter().zip(columns) {
        curve.push(Series::new(name, values));
    }
    Ok(curve)
}
