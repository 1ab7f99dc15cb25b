use std::io::{BufRead, BufWriter, Write};

use crate::error::{Error, Result};
use crate::eval::Embeddings;
use crate::mssg::ModelKind;

/// Shortest `%g`-style rendering of `v` with 6 significant digits.
pub fn format_g(v: f32) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.5e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `ROWS DIM` and then one `label v1 .. vDIM` line per row.
pub(crate) fn write_rows<'a, W, I>(out: W, dim: usize, rows: I) -> Result<usize>
where
    W: Write,
    I: ExactSizeIterator<Item = (&'a str, &'a [f32])>,
{
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", rows.len(), dim)?;
    let mut n = 0;
    let mut line = String::new();
    for (label, values) in rows {
        line.clear();
        line.push_str(label);
        for &v in values {
            line.push(' ');
            line.push_str(&format_g(v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

/// Reads a whitespace-separated dump. The `ROWS DIM` header may be absent,
/// in which case the width of the first row fixes the dimension.
pub(crate) fn read_rows<R: BufRead>(input: R, kind: Option<ModelKind>) -> Result<Embeddings> {
    let mut lines = input.lines().enumerate();
    let mut rows: Vec<(String, Vec<f32>)> = Vec::new();
    let mut row_lines = Vec::new();
    let (declared, dim) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::load(1, "file is empty"));
        };
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            [rows, dim] if rows.parse::<usize>().is_ok() || dim.parse::<usize>().is_ok() => {
                let (Ok(rows), Ok(dim)) = (rows.parse::<usize>(), dim.parse::<usize>()) else {
                    return Err(Error::load(i + 1, "malformed header, expected `ROWS DIM`"));
                };
                if dim == 0 {
                    return Err(Error::load(i + 1, "malformed header, DIM must be positive"));
                }
                break (Some(rows), dim);
            }
            [label, values @ ..] => {
                let v = parse_values(values, i + 1)?;
                rows.push((label.to_string(), v));
                row_lines.push(i + 1);
                break (None, values.len());
            }
        }
    };
    for (i, line) in lines {
        let line = line?;
        let mut fields = line.split_whitespace();
        let Some(label) = fields.next() else {
            continue;
        };
        let values: Vec<&str> = fields.collect();
        if values.len() != dim {
            return Err(Error::load(
                i + 1,
                format!(
                    "row length mismatch: expected {dim} values, found {}",
                    values.len()
                ),
            ));
        }
        if declared.is_some_and(|n| rows.len() >= n) {
            return Err(Error::load(
                i + 1,
                format!(
                    "row count mismatch: header declares {} rows",
                    declared.unwrap()
                ),
            ));
        }
        rows.push((label.to_string(), parse_values(&values, i + 1)?));
        row_lines.push(i + 1);
    }
    if let Some(n) = declared {
        if rows.len() != n {
            return Err(Error::load(
                0,
                format!(
                    "row count mismatch: header declares {n} rows, file has {}",
                    rows.len()
                ),
            ));
        }
    }
    let mut labels = std::collections::HashSet::new();
    for (i, (label, _)) in rows.iter().enumerate() {
        if !labels.insert(label.as_str()) {
            return Err(Error::load(
                row_lines[i],
                format!("duplicate label `{label}`"),
            ));
        }
    }
    Embeddings::from_rows(kind, dim, rows)
}

fn parse_values(fields: &[&str], line: usize) -> Result<Vec<f32>> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f32>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::load(line, format!("bad vector component `{f}`")))
        })
        .collect()
}
